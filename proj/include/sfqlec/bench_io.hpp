/*!
  \file bench_io.hpp
  \brief Reader and writer for bench-style netlists

  Grammar, one statement per line (`#` starts a comment, blank lines are
  ignored):

  \verbatim
  INPUT(<name>)
  OUTPUT(<name>)
  <out> = <KIND>(<in>{, <in>})
  \endverbatim

  Names match `[A-Za-z_][A-Za-z0-9_.]*`, optionally followed by a time suffix
  `@t<step>` (used by dumped MCID models).  Kind names are case-insensitive.
*/

#pragma once

#include "netlist.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace sfqlec
{

namespace detail
{

class bench_lexer
{
public:
  bench_lexer( std::string_view line, uint32_t line_no ) : line_( line ), line_no_( line_no ) {}

  void skip_space()
  {
    while ( pos_ < line_.size() && std::isspace( static_cast<unsigned char>( line_[pos_] ) ) )
    {
      ++pos_;
    }
  }

  bool at_end()
  {
    skip_space();
    return pos_ >= line_.size();
  }

  bool peek( char c )
  {
    skip_space();
    return pos_ < line_.size() && line_[pos_] == c;
  }

  void expect( char c )
  {
    if ( !peek( c ) )
    {
      fail( std::string( "expected '" ) + c + "'" );
    }
    ++pos_;
  }

  std::string identifier()
  {
    skip_space();
    auto const start = pos_;
    auto is_head = []( char c ) { return std::isalpha( static_cast<unsigned char>( c ) ) || c == '_'; };
    auto is_tail = []( char c ) { return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_' || c == '.'; };
    if ( pos_ >= line_.size() || !is_head( line_[pos_] ) )
    {
      fail( "expected a name" );
    }
    while ( pos_ < line_.size() && is_tail( line_[pos_] ) )
    {
      ++pos_;
    }
    if ( pos_ + 1 < line_.size() && line_[pos_] == '@' && line_[pos_ + 1] == 't' )
    {
      auto p = pos_ + 2;
      if ( p < line_.size() && line_[p] == '-' )
      {
        ++p;
      }
      auto const digits = p;
      while ( p < line_.size() && std::isdigit( static_cast<unsigned char>( line_[p] ) ) )
      {
        ++p;
      }
      if ( p == digits )
      {
        pos_ += 2;
        fail( "malformed time suffix" );
      }
      pos_ = p;
    }
    return std::string( line_.substr( start, pos_ - start ) );
  }

  [[noreturn]] void fail( std::string const& what, netlist_error::code c = netlist_error::code::syntax ) const
  {
    throw netlist_error( c, what, line_no_, static_cast<uint32_t>( pos_ + 1 ) );
  }

  uint32_t column() const { return static_cast<uint32_t>( pos_ + 1 ); }

private:
  std::string_view line_;
  uint32_t line_no_;
  std::size_t pos_{ 0 };
};

inline bool iequals( std::string_view a, std::string_view b )
{
  return a.size() == b.size() && std::equal( a.begin(), a.end(), b.begin(), []( char x, char y ) {
           return std::toupper( static_cast<unsigned char>( x ) ) == std::toupper( static_cast<unsigned char>( y ) );
         } );
}

} // namespace detail

/*! \brief Parses bench text into a validated netlist.
 *
 * Throws `netlist_error` carrying line and column for syntax errors and for
 * duplicate declarations; connectivity errors found after the whole text is
 * read (undriven nets, cycles) carry no position.
 */
inline netlist parse_netlist( std::string_view text, std::string name = "top" )
{
  std::vector<std::string> pis, pos;
  std::vector<gate> gates;
  std::unordered_map<std::string, uint32_t> driven_at;

  uint32_t line_no = 0u;
  std::size_t start = 0u;
  while ( start <= text.size() )
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
    detail::bench_lexer lex( line, line_no );
    if ( lex.at_end() )
    {
      if ( end == text.size() )
      {
        break;
      }
      continue;
    }

    auto const col = lex.column();
    auto const head = lex.identifier();
    if ( lex.peek( '(' ) )
    {
      bool const is_input = detail::iequals( head, "INPUT" );
      if ( !is_input && !detail::iequals( head, "OUTPUT" ) )
      {
        throw netlist_error( netlist_error::code::syntax, "expected INPUT, OUTPUT or an assignment", line_no, col );
      }
      lex.expect( '(' );
      auto const net = lex.identifier();
      lex.expect( ')' );
      if ( !lex.at_end() )
      {
        lex.fail( "trailing characters" );
      }
      if ( is_input )
      {
        if ( !driven_at.emplace( net, line_no ).second )
        {
          throw netlist_error( netlist_error::code::duplicate_driver, "net '" + net + "' is already driven", line_no, col );
        }
        pis.push_back( net );
      }
      else
      {
        if ( std::find( pos.begin(), pos.end(), net ) != pos.end() )
        {
          throw netlist_error( netlist_error::code::duplicate_declaration, "output '" + net + "' declared twice", line_no, col );
        }
        pos.push_back( net );
      }
    }
    else
    {
      lex.expect( '=' );
      lex.skip_space();
      auto const kind_col = lex.column();
      auto const kind_name = lex.identifier();
      auto const kind = gate_kind_from_string( kind_name );
      if ( !kind )
      {
        throw netlist_error( netlist_error::code::unknown_kind, "unknown gate kind '" + kind_name + "'", line_no, kind_col );
      }
      gate g{ head, *kind, {}, head };
      lex.expect( '(' );
      if ( !lex.peek( ')' ) )
      {
        g.inputs.push_back( lex.identifier() );
        while ( lex.peek( ',' ) )
        {
          lex.expect( ',' );
          g.inputs.push_back( lex.identifier() );
        }
      }
      lex.expect( ')' );
      if ( !lex.at_end() )
      {
        lex.fail( "trailing characters" );
      }
      if ( g.inputs.size() != arity( *kind ) )
      {
        throw netlist_error( netlist_error::code::arity_mismatch,
                             std::string( to_string( *kind ) ) + " expects " + std::to_string( arity( *kind ) ) + " inputs", line_no, kind_col );
      }
      if ( !driven_at.emplace( head, line_no ).second )
      {
        throw netlist_error( netlist_error::code::duplicate_driver, "net '" + head + "' is already driven", line_no, col );
      }
      gates.push_back( std::move( g ) );
    }
  }

  return netlist( std::move( name ), std::move( pis ), std::move( pos ), std::move( gates ) );
}

/*! \brief Writes INPUTs, OUTPUTs, then gates in topological order. */
inline std::string write_netlist( netlist const& ntk )
{
  std::ostringstream os;
  for ( auto const& pi : ntk.primary_inputs() )
  {
    os << "INPUT(" << pi << ")\n";
  }
  for ( auto const& po : ntk.primary_outputs() )
  {
    os << "OUTPUT(" << po << ")\n";
  }
  for ( auto g : ntk.topological_order() )
  {
    auto const& gt = ntk.gates()[g];
    os << gt.output << " = " << to_string( gt.kind ) << "(";
    for ( std::size_t i = 0; i < gt.inputs.size(); ++i )
    {
      os << ( i ? ", " : "" ) << gt.inputs[i];
    }
    os << ")\n";
  }
  return os.str();
}

inline std::string read_text_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw std::runtime_error( "cannot open '" + path + "'" );
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline netlist read_netlist_file( std::string const& path )
{
  auto name = path;
  if ( auto slash = name.find_last_of( '/' ); slash != std::string::npos )
  {
    name = name.substr( slash + 1 );
  }
  if ( auto dot = name.find_last_of( '.' ); dot != std::string::npos && dot > 0 )
  {
    name = name.substr( 0, dot );
  }
  return parse_netlist( read_text_file( path ), name );
}

} // namespace sfqlec
