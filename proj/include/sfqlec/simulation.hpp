/*!
  \file simulation.hpp
  \brief Unit-delay multi-cycle simulator, golden evaluator and exhaustive oracle

  The simulator works on 64-bit words, one independent pattern per bit.  A
  clocked gate's output in cycle c is its function of the inputs in cycle
  c - 1 (zero in cycle 0); an asynchronous gate's output follows its inputs
  in the same cycle.

  The exhaustive oracle does not use the MCID model.  It derives the input
  cells an output depends on from the clocked path lengths between inputs and
  outputs, enumerates every value of those cells, simulates, and compares
  against the golden netlist.
*/

#pragma once

#include "equivalence.hpp"
#include "itcl.hpp"
#include "netlist.hpp"
#include "tech_profile.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sfqlec
{

inline uint64_t evaluate_word( gate_kind kind, uint64_t a, uint64_t b )
{
  switch ( kind )
  {
  case gate_kind::and2: return a & b;
  case gate_kind::or2: return a | b;
  case gate_kind::xor2: return a ^ b;
  case gate_kind::nand2: return ~( a & b );
  case gate_kind::nor2: return ~( a | b );
  case gate_kind::xnor2: return ~( a ^ b );
  case gate_kind::inv: return ~a;
  case gate_kind::buf:
  case gate_kind::dff:
  case gate_kind::split:
    return a;
  }
  return 0u;
}

/*! \brief Simulates `num_cycles` cycles; `wave[c][i]` drives PI i in cycle c (missing cycles are 0).
 *
 * Returns `out[c][j]`, the word on PO j in cycle c.
 */
inline std::vector<std::vector<uint64_t>> simulate_words( netlist const& ntk, tech_profile const& profile,
                                                          std::vector<std::vector<uint64_t>> const& wave, std::size_t num_cycles )
{
  std::vector<uint64_t> prev( ntk.num_nets(), 0u ), cur( ntk.num_nets(), 0u );
  std::vector<std::vector<uint64_t>> out;
  out.reserve( num_cycles );
  for ( std::size_t c = 0; c < num_cycles; ++c )
  {
    for ( uint32_t pi = 0; pi < ntk.num_pis(); ++pi )
    {
      cur[pi] = c < wave.size() ? wave[c][pi] : 0u;
    }
    for ( auto g : ntk.topological_order() )
    {
      auto const& src = profile.is_clocked( ntk.gates()[g].kind ) ? prev : cur;
      auto const ins = ntk.gate_inputs( g );
      cur[ntk.gate_output( g )] = evaluate_word( ntk.gates()[g].kind, src[ins[0]], ins.size() > 1u ? src[ins[1]] : 0u );
    }
    std::vector<uint64_t> row;
    for ( auto po : ntk.po_nets() )
    {
      row.push_back( cur[po] );
    }
    out.push_back( std::move( row ) );
    std::swap( prev, cur );
  }
  return out;
}

/*! \brief Per-cycle PI assignments, cycle 0 first; each row is aligned with the netlist's PIs. */
using wave_input = std::vector<std::vector<bool>>;

/*! \brief Largest clocked path length from any PI to any net. */
inline uint32_t clocked_depth( netlist const& ntk, tech_profile const& profile )
{
  kind_set non_clocked;
  for ( auto k : all_gate_kinds )
  {
    if ( !profile.is_clocked( k ) )
    {
      non_clocked.insert( k );
    }
  }
  auto const levels = logic_levels( ntk, non_clocked );
  return levels.empty() ? 0u : *std::max_element( levels.begin(), levels.end() );
}

/*! \brief PO values for cycles 0 .. wave length + depth. */
inline std::vector<std::vector<bool>> simulate( netlist const& ntk, tech_profile const& profile, wave_input const& wave )
{
  std::vector<std::vector<uint64_t>> words;
  for ( auto const& row : wave )
  {
    if ( row.size() != ntk.num_pis() )
    {
      throw std::invalid_argument( "wave row does not cover every primary input" );
    }
    words.emplace_back( row.begin(), row.end() );
  }
  auto const sim = simulate_words( ntk, profile, words, wave.size() + clocked_depth( ntk, profile ) + 1u );
  std::vector<std::vector<bool>> out;
  for ( auto const& row : sim )
  {
    std::vector<bool> bits;
    for ( auto w : row )
    {
      bits.push_back( ( w & 1u ) != 0u );
    }
    out.push_back( std::move( bits ) );
  }
  return out;
}

/*! \brief Reads blocks of `name=bit` tokens; blank lines separate cycles. */
inline wave_input parse_wave( std::string_view text, netlist const& ntk )
{
  wave_input wave;
  std::vector<int8_t> row( ntk.num_pis(), -1 );
  bool open = false;
  auto close = [&] {
    if ( !open )
    {
      return;
    }
    for ( uint32_t i = 0; i < row.size(); ++i )
    {
      if ( row[i] < 0 )
      {
        throw std::invalid_argument( "cycle " + std::to_string( wave.size() ) + " has no value for '" + ntk.net_name( i ) + "'" );
      }
    }
    wave.emplace_back( row.begin(), row.end() );
    std::fill( row.begin(), row.end(), int8_t{ -1 } );
    open = false;
  };

  std::istringstream is{ std::string( text ) };
  std::string line;
  while ( std::getline( is, line ) )
  {
    if ( auto hash = line.find( '#' ); hash != std::string::npos )
    {
      line.erase( hash );
    }
    std::istringstream tokens( line );
    std::string tok;
    bool any = false;
    while ( tokens >> tok )
    {
      any = true;
      auto const eq = tok.find( '=' );
      if ( eq == std::string::npos || eq + 2u != tok.size() || ( tok.back() != '0' && tok.back() != '1' ) )
      {
        throw std::invalid_argument( "malformed wave entry '" + tok + "'" );
      }
      auto const net = ntk.find_net( tok.substr( 0, eq ) );
      if ( !net || !ntk.is_pi( *net ) )
      {
        throw std::invalid_argument( "'" + tok.substr( 0, eq ) + "' is not a primary input" );
      }
      if ( row[*net] >= 0 )
      {
        throw std::invalid_argument( "'" + tok.substr( 0, eq ) + "' assigned twice in one cycle" );
      }
      row[*net] = tok.back() == '1' ? 1 : 0;
      open = true;
    }
    if ( !any )
    {
      close();
    }
  }
  close();
  if ( wave.empty() )
  {
    throw std::invalid_argument( "wave has no cycles" );
  }
  return wave;
}

inline std::string write_wave( wave_input const& wave, netlist const& ntk )
{
  std::ostringstream os;
  for ( std::size_t c = 0; c < wave.size(); ++c )
  {
    if ( c )
    {
      os << "\n";
    }
    for ( uint32_t i = 0; i < ntk.num_pis(); ++i )
    {
      os << ntk.net_name( i ) << "=" << ( wave[c][i] ? 1 : 0 ) << "\n";
    }
  }
  return os.str();
}

inline std::string format_simulation( netlist const& ntk, std::vector<std::vector<bool>> const& outputs )
{
  std::ostringstream os;
  for ( std::size_t c = 0; c < outputs.size(); ++c )
  {
    os << "CYCLE " << c << ":";
    for ( std::size_t j = 0; j < outputs[c].size(); ++j )
    {
      os << " " << ntk.primary_outputs()[j] << "=" << ( outputs[c][j] ? 1 : 0 );
    }
    os << "\n";
  }
  return os.str();
}

/*! \brief Combinational evaluation; `assignment` is aligned with the golden PIs. */
inline std::vector<bool> evaluate_golden( netlist const& golden, std::vector<bool> const& assignment )
{
  require_combinational( golden );
  if ( assignment.size() != golden.num_pis() )
  {
    throw std::invalid_argument( "assignment does not cover every primary input" );
  }
  std::vector<std::vector<uint64_t>> wave{ std::vector<uint64_t>( assignment.begin(), assignment.end() ) };
  auto const row = simulate_words( golden, builtin_profile( "cmos" ), wave, 1u ).front();
  std::vector<bool> out;
  for ( auto w : row )
  {
    out.push_back( ( w & 1u ) != 0u );
  }
  return out;
}

inline std::vector<bool> evaluate_golden( netlist const& golden, std::vector<std::pair<std::string, bool>> const& assignment )
{
  std::vector<int8_t> v( golden.num_pis(), -1 );
  for ( auto const& [name, bit] : assignment )
  {
    auto const net = golden.find_net( name );
    if ( !net || !golden.is_pi( *net ) )
    {
      throw std::invalid_argument( "'" + name + "' is not a primary input" );
    }
    v[*net] = bit ? 1 : 0;
  }
  if ( std::find( v.begin(), v.end(), int8_t{ -1 } ) != v.end() )
  {
    throw std::invalid_argument( "assignment does not cover every primary input" );
  }
  return evaluate_golden( golden, std::vector<bool>( v.begin(), v.end() ) );
}

/*! \brief Turns a trace into a wave for `ntk`: wave cycle i carries physical step `earliest + i`.
 *
 * The outputs are observed in cycle `-earliest`, returned in `observe_cycle`.
 */
inline wave_input trace_wave( timed_trace const& t, netlist const& ntk, std::size_t& observe_cycle )
{
  auto const earliest = std::min( t.earliest_step(), 0 );
  auto const length = static_cast<std::size_t>( std::max( t.latest_step, 0 ) - earliest + 1 );
  wave_input wave( length, std::vector<bool>( ntk.num_pis(), false ) );
  for ( std::size_t i = 0; i < t.inputs.size(); ++i )
  {
    auto const net = ntk.net_index( t.inputs[i] );
    for ( std::size_t k = 0; k < t.cycles.size(); ++k )
    {
      auto const step = t.latest_step - static_cast<int32_t>( k );
      wave[static_cast<std::size_t>( step - earliest )][net] = t.cycles[k][i];
    }
  }
  observe_cycle = static_cast<std::size_t>( -earliest );
  return wave;
}

struct replay_result
{
  bool impl_output{ false };
  bool golden_output{ false };

  bool distinguishes() const { return impl_output != golden_output; }
};

/*! \brief Re-runs a trace through the simulator and the golden evaluator. */
inline replay_result replay_trace( timed_trace const& t, netlist const& impl, tech_profile const& profile, netlist const& golden )
{
  std::size_t observe = 0u;
  auto const wave = trace_wave( t, impl, observe );
  auto const sim = simulate( impl, profile, wave );
  auto const golden_out = evaluate_golden( golden, t.golden_assignment );

  auto index_of = [&]( netlist const& ntk ) {
    auto const& pos = ntk.primary_outputs();
    auto it = std::find( pos.begin(), pos.end(), t.output_name );
    if ( it == pos.end() )
    {
      throw std::invalid_argument( "trace output '" + t.output_name + "' not found" );
    }
    return static_cast<std::size_t>( it - pos.begin() );
  };
  if ( observe >= sim.size() )
  {
    throw std::logic_error( "trace window exceeds the simulated cycles" );
  }
  return { sim[observe][index_of( impl )], golden_out[index_of( golden )] };
}

struct oracle_witness
{
  wave_input wave;
  std::size_t observe_cycle{ 0u };
  std::vector<std::pair<std::string, bool>> golden_assignment;
  std::string output_name;
  bool impl_output{ false };
  bool golden_output{ false };
};

struct oracle_result
{
  bool equivalent{ true };
  std::optional<oracle_witness> witness;
  /*! \brief Number of enumerated input bits. */
  uint32_t free_bits{ 0u };
};

/*! \brief Enumerates every relevant input sequence; refuses more than `max_bits` free bits.
 *
 * The first mismatch in enumeration order is returned as witness.
 */
inline oracle_result exhaustive_equivalence( netlist const& impl, netlist const& golden, tech_profile const& profile,
                                             arrival_schedule const& schedule, uint32_t max_bits = 24u )
{
  require_combinational( golden );

  /* clocked path lengths from every net to any PO */
  std::vector<std::set<int32_t>> to_po( impl.num_nets() );
  for ( auto po : impl.po_nets() )
  {
    to_po[po].insert( 0 );
  }
  auto const topo = impl.topological_order();
  for ( auto it = topo.rbegin(); it != topo.rend(); ++it )
  {
    auto const g = *it;
    auto const d = profile.is_clocked( impl.gates()[g].kind ) ? 1 : 0;
    for ( auto in : impl.gate_inputs( g ) )
    {
      for ( auto len : to_po[impl.gate_output( g )] )
      {
        to_po[in].insert( len + d );
      }
    }
  }

  int32_t min_arrival = std::numeric_limits<int32_t>::max();
  for ( auto const& pi : impl.primary_inputs() )
  {
    auto it = schedule.find( pi );
    if ( it == schedule.end() || it->second < 0 )
    {
      throw std::invalid_argument( "schedule has no valid arrival for '" + pi + "'" );
    }
    min_arrival = std::min( min_arrival, it->second );
  }

  struct cell
  {
    std::string pi;
    int32_t physical;
    bool impl;
  };
  std::map<std::pair<std::string, int32_t>, std::size_t> cell_index;
  std::vector<cell> cells;
  std::map<int32_t, uint32_t> golden_count;
  std::set<std::string> golden_pis( golden.primary_inputs().begin(), golden.primary_inputs().end() );
  for ( uint32_t pi = 0; pi < impl.num_pis(); ++pi )
  {
    auto const& name = impl.net_name( pi );
    auto const delta = schedule.at( name ) - min_arrival;
    for ( auto len : to_po[pi] )
    {
      cell_index[{ name, -len }] = 0u;
      if ( golden_pis.count( name ) )
      {
        ++golden_count[-len - delta];
      }
    }
  }
  int32_t t_star = 0;
  uint32_t best = 0u;
  for ( auto const& [step, n] : golden_count )
  {
    if ( n >= best )
    {
      best = n;
      t_star = step;
    }
  }

  std::vector<std::pair<std::string, int32_t>> golden_cell;
  for ( auto const& pi : golden.primary_inputs() )
  {
    auto const net = impl.find_net( pi );
    if ( !net || !impl.is_pi( *net ) || to_po[*net].empty() )
    {
      throw std::invalid_argument( "golden input '" + pi + "' is not an observable implementation input" );
    }
    golden_cell.emplace_back( pi, t_star + schedule.at( pi ) - min_arrival );
    cell_index.emplace( golden_cell.back(), 0u );
  }
  for ( auto& [key, idx] : cell_index )
  {
    idx = cells.size();
    auto const net = *impl.find_net( key.first );
    cells.push_back( { key.first, key.second, to_po[net].count( -key.second ) != 0u } );
  }

  oracle_result result;
  result.free_bits = static_cast<uint32_t>( cells.size() );
  if ( cells.size() > max_bits )
  {
    throw std::invalid_argument( "exhaustive oracle refuses " + std::to_string( cells.size() ) + " free bits" );
  }

  int32_t earliest = 0;
  for ( auto const& c : cells )
  {
    if ( c.impl )
    {
      earliest = std::min( earliest, c.physical );
    }
  }
  auto const observe = static_cast<std::size_t>( -earliest );

  std::vector<std::size_t> golden_po;
  for ( auto const& name : impl.primary_outputs() )
  {
    auto const& gp = golden.primary_outputs();
    auto it = std::find( gp.begin(), gp.end(), name );
    if ( it == gp.end() || gp.size() != impl.primary_outputs().size() )
    {
      throw std::invalid_argument( "output sets of the two netlists differ" );
    }
    golden_po.push_back( static_cast<std::size_t>( it - gp.begin() ) );
  }
  auto const cmos = builtin_profile( "cmos" );

  uint64_t const total = uint64_t{ 1 } << cells.size();
  for ( uint64_t base = 0; base < total; base += 64u )
  {
    /* bit j of word for cell i = bit i of pattern base + j */
    std::vector<uint64_t> cell_word( cells.size(), 0u );
    for ( std::size_t i = 0; i < cells.size(); ++i )
    {
      for ( uint64_t j = 0; j < 64u && base + j < total; ++j )
      {
        cell_word[i] |= ( ( ( base + j ) >> i ) & 1u ) << j;
      }
    }
    uint64_t const valid = total - base >= 64u ? ~uint64_t{ 0 } : ( ( uint64_t{ 1 } << ( total - base ) ) - 1u );

    std::vector<std::vector<uint64_t>> wave( observe + 1u, std::vector<uint64_t>( impl.num_pis(), 0u ) );
    for ( std::size_t i = 0; i < cells.size(); ++i )
    {
      if ( cells[i].impl )
      {
        wave[static_cast<std::size_t>( cells[i].physical - earliest )][*impl.find_net( cells[i].pi )] = cell_word[i];
      }
    }
    auto const impl_out = simulate_words( impl, profile, wave, observe + 1u )[observe];

    std::vector<std::vector<uint64_t>> gwave( 1u, std::vector<uint64_t>( golden.num_pis(), 0u ) );
    for ( uint32_t pi = 0; pi < golden.num_pis(); ++pi )
    {
      gwave[0][pi] = cell_word[cell_index.at( golden_cell[pi] )];
    }
    auto const gold_out = simulate_words( golden, cmos, gwave, 1u )[0];

    uint64_t diff = 0u;
    for ( std::size_t j = 0; j < impl_out.size(); ++j )
    {
      diff |= impl_out[j] ^ gold_out[golden_po[j]];
    }
    diff &= valid;
    if ( diff == 0u )
    {
      continue;
    }

    auto const bit = static_cast<uint32_t>( std::countr_zero( diff ) );
    oracle_witness w;
    w.observe_cycle = observe;
    for ( auto const& row : wave )
    {
      std::vector<bool> r;
      for ( auto word : row )
      {
        r.push_back( ( ( word >> bit ) & 1u ) != 0u );
      }
      w.wave.push_back( std::move( r ) );
    }
    for ( uint32_t pi = 0; pi < golden.num_pis(); ++pi )
    {
      w.golden_assignment.emplace_back( golden.net_name( pi ), ( ( gwave[0][pi] >> bit ) & 1u ) != 0u );
    }
    for ( std::size_t j = 0; j < impl_out.size(); ++j )
    {
      if ( ( ( impl_out[j] ^ gold_out[golden_po[j]] ) >> bit ) & 1u )
      {
        w.output_name = impl.primary_outputs()[j];
        w.impl_output = ( ( impl_out[j] >> bit ) & 1u ) != 0u;
        w.golden_output = ( ( gold_out[golden_po[j]] >> bit ) & 1u ) != 0u;
        break;
      }
    }
    result.equivalent = false;
    result.witness = std::move( w );
    return result;
  }
  return result;
}

} // namespace sfqlec
