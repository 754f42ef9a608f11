/*!
  \file tech_profile.hpp
  \brief Technology parameters: fanout limits, asynchronous kinds, check switches
*/

#pragma once

#include "gate_kind.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sfqlec
{

class profile_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct tech_profile
{
  std::string name;
  /*! \brief Maximum number of reading pins on a net not driven by a splitter. */
  uint32_t default_fanout_limit{ 1u };
  /*! \brief Maximum number of reading pins on a splitter output. */
  uint32_t splitter_fanout_limit{ 2u };
  /*! \brief Kinds that produce their output in the same clock cycle. */
  kind_set non_clocked_kinds{ default_non_clocked_kinds };
  bool requires_path_balancing{ true };
  bool requires_fanout_check{ true };

  bool is_clocked( gate_kind kind ) const { return !non_clocked_kinds.contains( kind ); }

  bool operator==( tech_profile const& ) const = default;
};

inline void validate( tech_profile const& p )
{
  if ( p.default_fanout_limit < 1u )
  {
    throw profile_error( "default_fanout_limit must be at least 1" );
  }
  if ( p.splitter_fanout_limit < 2u )
  {
    throw profile_error( "splitter_fanout_limit must be at least 2" );
  }
}

/*! \brief Built-in profiles `rsfq`, `aqfp` and `cmos`.
 *
 * AQFP splitters are clocked buffers, so they count as a logic level.
 */
inline tech_profile builtin_profile( std::string_view name )
{
  if ( name == "rsfq" )
  {
    return { "rsfq", 1u, 2u, kind_set{ gate_kind::split }, true, true };
  }
  if ( name == "aqfp" )
  {
    return { "aqfp", 1u, 4u, kind_set{}, true, true };
  }
  if ( name == "cmos" )
  {
    kind_set all_but_dff;
    for ( auto k : all_gate_kinds )
    {
      if ( k != gate_kind::dff )
      {
        all_but_dff.insert( k );
      }
    }
    return { "cmos", 1000000u, 1000000u, all_but_dff, false, false };
  }
  throw profile_error( "unknown profile '" + std::string( name ) + "'" );
}

namespace detail
{

inline std::string_view trim( std::string_view s )
{
  auto const first = s.find_first_not_of( " \t\r" );
  if ( first == std::string_view::npos )
  {
    return {};
  }
  auto const last = s.find_last_not_of( " \t\r" );
  return s.substr( first, last - first + 1 );
}

/*! \brief Splits `key = value` lines, skipping blanks and `#` comments. */
inline std::vector<std::pair<std::string, std::string>> parse_key_values( std::string_view text, std::string_view what )
{
  std::vector<std::pair<std::string, std::string>> entries;
  std::size_t start = 0u;
  uint32_t line_no = 0u;
  while ( start < text.size() )
  {
    auto end = text.find( '\n', start );
    if ( end == std::string_view::npos )
    {
      end = text.size();
    }
    auto line = text.substr( start, end - start );
    start = end + 1;
    ++line_no;
    if ( auto hash = line.find( '#' ); hash != std::string_view::npos )
    {
      line = line.substr( 0, hash );
    }
    line = trim( line );
    if ( line.empty() )
    {
      continue;
    }
    auto const eq = line.find( '=' );
    if ( eq == std::string_view::npos )
    {
      throw std::runtime_error( std::string( what ) + " line " + std::to_string( line_no ) + ": expected 'key = value'" );
    }
    entries.emplace_back( std::string( trim( line.substr( 0, eq ) ) ), std::string( trim( line.substr( eq + 1 ) ) ) );
  }
  return entries;
}

} // namespace detail

/*! \brief Reads the flat `key = value` profile format.
 *
 * All six keys are required: `name`, `default_fanout_limit`,
 * `splitter_fanout_limit`, `non_clocked_kinds` (comma-separated, may be
 * empty), `requires_path_balancing` and `requires_fanout_check`.
 */
inline tech_profile load_profile( std::string_view text )
{
  std::map<std::string, std::string> values;
  try
  {
    for ( auto& [key, value] : detail::parse_key_values( text, "profile" ) )
    {
      if ( !values.emplace( key, value ).second )
      {
        throw profile_error( "duplicate key '" + key + "'" );
      }
    }
  }
  catch ( profile_error const& )
  {
    throw;
  }
  catch ( std::exception const& e )
  {
    throw profile_error( e.what() );
  }

  auto require = [&]( std::string const& key ) -> std::string const& {
    auto it = values.find( key );
    if ( it == values.end() )
    {
      throw profile_error( "missing key '" + key + "'" );
    }
    return it->second;
  };
  auto as_limit = [&]( std::string const& key ) {
    auto const& v = require( key );
    long long n = 0;
    auto [ptr, ec] = std::from_chars( v.data(), v.data() + v.size(), n );
    if ( ec != std::errc{} || ptr != v.data() + v.size() )
    {
      throw profile_error( "'" + key + "' is not an integer" );
    }
    if ( n <= 0 || n > 0xffffffffLL )
    {
      throw profile_error( "'" + key + "' must be positive" );
    }
    return static_cast<uint32_t>( n );
  };
  auto as_bool = [&]( std::string const& key ) {
    auto const& v = require( key );
    if ( v == "true" )
    {
      return true;
    }
    if ( v == "false" )
    {
      return false;
    }
    throw profile_error( "'" + key + "' must be true or false" );
  };

  static constexpr std::string_view known[] = { "name", "default_fanout_limit", "splitter_fanout_limit", "non_clocked_kinds",
                                                "requires_path_balancing", "requires_fanout_check" };
  for ( auto const& [key, _] : values )
  {
    if ( std::find( std::begin( known ), std::end( known ), key ) == std::end( known ) )
    {
      throw profile_error( "unknown key '" + key + "'" );
    }
  }

  tech_profile p;
  p.name = require( "name" );
  p.default_fanout_limit = as_limit( "default_fanout_limit" );
  p.splitter_fanout_limit = as_limit( "splitter_fanout_limit" );
  p.non_clocked_kinds = {};
  std::string_view kinds = require( "non_clocked_kinds" );
  while ( !kinds.empty() )
  {
    auto const comma = kinds.find( ',' );
    auto const item = detail::trim( kinds.substr( 0, comma ) );
    kinds = comma == std::string_view::npos ? std::string_view{} : kinds.substr( comma + 1 );
    if ( item.empty() )
    {
      continue;
    }
    auto const kind = gate_kind_from_string( item );
    if ( !kind )
    {
      throw profile_error( "unknown gate kind '" + std::string( item ) + "' in non_clocked_kinds" );
    }
    p.non_clocked_kinds.insert( *kind );
  }
  p.requires_path_balancing = as_bool( "requires_path_balancing" );
  p.requires_fanout_check = as_bool( "requires_fanout_check" );
  validate( p );
  return p;
}

inline std::string write_profile( tech_profile const& p )
{
  std::ostringstream os;
  os << "name = " << p.name << "\n";
  os << "default_fanout_limit = " << p.default_fanout_limit << "\n";
  os << "splitter_fanout_limit = " << p.splitter_fanout_limit << "\n";
  os << "non_clocked_kinds = ";
  bool first = true;
  for ( auto k : all_gate_kinds )
  {
    if ( p.non_clocked_kinds.contains( k ) )
    {
      os << ( first ? "" : ", " ) << to_string( k );
      first = false;
    }
  }
  os << "\n";
  os << "requires_path_balancing = " << ( p.requires_path_balancing ? "true" : "false" ) << "\n";
  os << "requires_fanout_check = " << ( p.requires_fanout_check ? "true" : "false" ) << "\n";
  return os.str();
}

} // namespace sfqlec
