/*!
  \file itcl.hpp
  \brief Input timing control logic and PI matching for the miter

  Some designs intentionally receive inputs in different clock cycles.  The
  timing control logic compensates for that inside the MCID model: an input
  arriving t_x - t_min cycles after the earliest one gets that many buffers
  in front of every timed occurrence, which moves the occurrence the same
  number of steps back in (effective) time.
*/

#pragma once

#include "mcid.hpp"
#include "netlist.hpp"
#include "tech_profile.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sfqlec
{

class schedule_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Arrival cycle of every primary input. */
using arrival_schedule = std::map<std::string, int32_t>;

inline arrival_schedule uniform_schedule( std::vector<std::string> const& pis )
{
  arrival_schedule s;
  for ( auto const& pi : pis )
  {
    s.emplace( pi, 0 );
  }
  return s;
}

/*! \brief Reads `name = cycle` lines. */
inline arrival_schedule parse_arrivals( std::string_view text )
{
  arrival_schedule s;
  std::vector<std::pair<std::string, std::string>> entries;
  try
  {
    entries = detail::parse_key_values( text, "arrivals" );
  }
  catch ( std::exception const& e )
  {
    throw schedule_error( e.what() );
  }
  for ( auto const& [name, value] : entries )
  {
    int32_t cycle = 0;
    auto [ptr, ec] = std::from_chars( value.data(), value.data() + value.size(), cycle );
    if ( ec != std::errc{} || ptr != value.data() + value.size() )
    {
      throw schedule_error( "arrival of '" + name + "' is not an integer" );
    }
    if ( cycle < 0 )
    {
      throw schedule_error( "arrival of '" + name + "' is negative" );
    }
    if ( !s.emplace( name, cycle ).second )
    {
      throw schedule_error( "duplicate arrival for '" + name + "'" );
    }
  }
  return s;
}

/*! \brief Buffer count per source PI (t_x - t_min). */
inline std::unordered_map<std::string, int32_t> itcl_shifts( std::vector<std::string> const& pis, arrival_schedule const& schedule )
{
  for ( auto const& [name, cycle] : schedule )
  {
    if ( cycle < 0 )
    {
      throw schedule_error( "arrival of '" + name + "' is negative" );
    }
    if ( std::find( pis.begin(), pis.end(), name ) == pis.end() )
    {
      throw schedule_error( "schedule names unknown input '" + name + "'" );
    }
  }
  int32_t earliest = std::numeric_limits<int32_t>::max();
  for ( auto const& pi : pis )
  {
    auto it = schedule.find( pi );
    if ( it == schedule.end() )
    {
      throw schedule_error( "schedule has no arrival for input '" + pi + "'" );
    }
    earliest = std::min( earliest, it->second );
  }
  std::unordered_map<std::string, int32_t> shifts;
  for ( auto const& pi : pis )
  {
    shifts.emplace( pi, schedule.at( pi ) - earliest );
  }
  return shifts;
}

/*! \brief Returns a copy of `mcid` with buffer chains in front of late inputs.
 *
 * An occurrence (x, s) with shift d > 0 is replaced by the chain
 * (x, s-d) -> BUF -> ... -> BUF whose last buffer takes over the readers of
 * (x, s).  Buffer signals are named `x.itcl<k>`, the k-th buffer counted from
 * the reader side.
 */
inline mcid_circuit apply_itcl( mcid_circuit const& mcid, arrival_schedule const& schedule )
{
  auto const shifts = itcl_shifts( mcid.source_inputs(), schedule );

  mcid_circuit out;
  out.set_source_inputs( mcid.source_inputs() );
  std::vector<uint32_t> map( mcid.signals().size(), 0u );

  std::vector<std::pair<uint32_t, uint32_t>> chains; // (old input, new input)
  for ( auto s : mcid.timed_inputs() )
  {
    auto const& sig = mcid.signal( s );
    auto const d = shifts.at( sig.base_name );
    map[s] = out.add_input( { sig.base_name, sig.time_step - d }, mcid.physical_step( s ) - sig.time_step + d );
    if ( d > 0 )
    {
      chains.emplace_back( s, map[s] );
    }
  }
  for ( auto const& [old_sig, head] : chains )
  {
    auto const& sig = mcid.signal( old_sig );
    auto const d = shifts.at( sig.base_name );
    auto prev = head;
    for ( int32_t k = d; k >= 1; --k )
    {
      timed_signal buf{ sig.base_name + ".itcl" + std::to_string( k ), sig.time_step - k + 1 };
      auto const id = buf.to_string();
      prev = out.add_gate( id, gate_kind::buf, { prev }, std::move( buf ) );
    }
    map[old_sig] = prev;
  }
  for ( auto const& g : mcid.gates() )
  {
    std::vector<uint32_t> ins;
    for ( auto in : g.inputs )
    {
      ins.push_back( map[in] );
    }
    map[g.output] = out.add_gate( g.id, g.kind, std::move( ins ), mcid.signal( g.output ) );
  }
  for ( std::size_t i = 0; i < mcid.outputs().size(); ++i )
  {
    out.add_output( mcid.output_names()[i], map[mcid.outputs()[i]] );
  }
  return out;
}

/*! \brief Binding of golden inputs to timed inputs of the MCID model.
 *
 * Every golden PI is bound to its occurrence at the common step `t_star`.
 * When the model has no such occurrence the PI is listed in `golden_only`:
 * the golden side reads a fresh input that the implementation ignores.
 */
struct input_matching
{
  int32_t t_star{ 0 };
  std::map<std::string, timed_signal> matched;
  std::vector<timed_signal> free_inputs;
  std::vector<std::string> golden_only;
};

/*! \brief Picks the step shared by most golden PIs (ties: latest) and binds all golden PIs to it. */
inline input_matching match_inputs( mcid_circuit const& mcid, netlist const& golden )
{
  std::map<int32_t, uint32_t> count;
  std::set<std::pair<std::string, int32_t>> present;
  std::set<std::string> seen;
  for ( auto s : mcid.timed_inputs() )
  {
    present.emplace( mcid.signal( s ).base_name, mcid.signal( s ).time_step );
    seen.insert( mcid.signal( s ).base_name );
  }

  auto const& sources = mcid.source_inputs();
  for ( auto const& pi : golden.primary_inputs() )
  {
    if ( std::find( sources.begin(), sources.end(), pi ) == sources.end() )
    {
      throw std::invalid_argument( "golden input '" + pi + "' is not an input of the implementation" );
    }
    if ( !seen.count( pi ) )
    {
      throw std::invalid_argument( "golden input '" + pi + "' does not reach any output of the implementation" );
    }
  }
  for ( auto const& [name, step] : present )
  {
    if ( std::find( golden.primary_inputs().begin(), golden.primary_inputs().end(), name ) != golden.primary_inputs().end() )
    {
      ++count[step];
    }
  }

  input_matching m;
  uint32_t best = 0u;
  for ( auto const& [step, n] : count )
  {
    if ( n >= best )
    {
      best = n;
      m.t_star = step;
    }
  }
  if ( count.empty() && !mcid.timed_inputs().empty() )
  {
    m.t_star = input_window( mcid ).latest;
  }

  for ( auto const& pi : golden.primary_inputs() )
  {
    m.matched.emplace( pi, timed_signal{ pi, m.t_star } );
    if ( !present.count( { pi, m.t_star } ) )
    {
      m.golden_only.push_back( pi );
    }
  }
  for ( auto s : mcid.timed_inputs() )
  {
    auto const& sig = mcid.signal( s );
    auto it = m.matched.find( sig.base_name );
    if ( it == m.matched.end() || it->second != sig )
    {
      m.free_inputs.push_back( sig );
    }
  }
  return m;
}

} // namespace sfqlec
