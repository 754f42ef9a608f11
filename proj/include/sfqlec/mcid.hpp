/*!
  \file mcid.hpp
  \brief Multi-cycle input dependency (MCID) model of a clocked netlist

  The MCID model is a purely functional, time-unrolled copy of a netlist.  A
  signal is a pair (net, time step), where step 0 is the instant at which the
  primary outputs are observed and step -k lies k clock cycles earlier.  The
  construction walks backwards from the outputs one clock cycle at a time: a
  clocked gate copied at step t reads its inputs at step t-1, an asynchronous
  gate reads them at step t.  DFFs become buffers and asynchronous splitters
  are skipped.  Every (gate, step) pair is created at most once, so a gate is
  duplicated exactly when it reaches the outputs through paths of different
  clocked length.
*/

#pragma once

#include "netlist.hpp"
#include "tech_profile.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace sfqlec
{

struct timed_signal
{
  std::string base_name;
  int32_t time_step{ 0 };

  std::string to_string() const { return base_name + "@t" + std::to_string( time_step ); }

  auto operator<=>( timed_signal const& ) const = default;
  bool operator==( timed_signal const& ) const = default;
};

struct mcid_gate
{
  std::string id;
  gate_kind kind{ gate_kind::buf };
  std::vector<uint32_t> inputs;
  uint32_t output{ 0u };
};

/*! \brief Time-unrolled functional circuit.
 *
 * Gates are stored in topological order and never have kind DFF or SPLIT.
 * `source_inputs` lists the primary inputs of the netlist the model was built
 * from; every timed input has one of them as its base name.
 */
class mcid_circuit
{
public:
  static constexpr uint32_t no_gate = static_cast<uint32_t>( -1 );

  std::vector<timed_signal> const& signals() const { return signals_; }
  timed_signal const& signal( uint32_t id ) const { return signals_[id]; }
  std::vector<mcid_gate> const& gates() const { return gates_; }
  std::vector<uint32_t> const& timed_inputs() const { return timed_inputs_; }
  std::vector<uint32_t> const& outputs() const { return outputs_; }
  std::vector<std::string> const& output_names() const { return output_names_; }
  std::vector<std::string> const& source_inputs() const { return source_inputs_; }

  std::size_t num_gates() const { return gates_.size(); }
  uint32_t driver( uint32_t signal ) const { return drivers_[signal]; }
  bool is_input( uint32_t signal ) const { return drivers_[signal] == no_gate; }

  /*! \brief Clock cycle (relative to the observation) at which a timed input physically arrives. */
  int32_t physical_step( uint32_t signal ) const { return signals_[signal].time_step + shifts_[signal]; }

  std::optional<uint32_t> find_signal( std::string_view base, int32_t step ) const
  {
    if ( auto it = ids_.find( key( base, step ) ); it != ids_.end() )
    {
      return it->second;
    }
    return std::nullopt;
  }

  /* construction interface */

  void set_source_inputs( std::vector<std::string> names ) { source_inputs_ = std::move( names ); }

  /*! \brief Adds a timed input; `shift` is the number of ITCL buffers in front of it. */
  uint32_t add_input( timed_signal s, int32_t shift = 0 )
  {
    auto const id = new_signal( std::move( s ) );
    shifts_[id] = shift;
    timed_inputs_.push_back( id );
    return id;
  }

  /*! \brief Adds a gate; its output signal must not exist yet. */
  uint32_t add_gate( std::string id, gate_kind kind, std::vector<uint32_t> inputs, timed_signal out )
  {
    if ( kind == gate_kind::dff || kind == gate_kind::split )
    {
      throw std::logic_error( "MCID models contain no DFF or SPLIT gates" );
    }
    auto const sig = new_signal( std::move( out ) );
    drivers_[sig] = static_cast<uint32_t>( gates_.size() );
    gates_.push_back( { std::move( id ), kind, std::move( inputs ), sig } );
    return sig;
  }

  void add_output( std::string name, uint32_t signal )
  {
    output_names_.push_back( std::move( name ) );
    outputs_.push_back( signal );
  }

private:
  static std::string key( std::string_view base, int32_t step )
  {
    std::string k( base );
    k += '@';
    k += std::to_string( step );
    return k;
  }

  uint32_t new_signal( timed_signal s )
  {
    auto const id = static_cast<uint32_t>( signals_.size() );
    if ( !ids_.emplace( key( s.base_name, s.time_step ), id ).second )
    {
      throw std::logic_error( "duplicate MCID signal " + s.to_string() );
    }
    signals_.push_back( std::move( s ) );
    drivers_.push_back( no_gate );
    shifts_.push_back( 0 );
    return id;
  }

  std::vector<timed_signal> signals_;
  std::vector<uint32_t> drivers_;
  std::vector<int32_t> shifts_;
  std::unordered_map<std::string, uint32_t> ids_;
  std::vector<mcid_gate> gates_;
  std::vector<uint32_t> timed_inputs_;
  std::vector<uint32_t> outputs_;
  std::vector<std::string> output_names_;
  std::vector<std::string> source_inputs_;
};

/*! \brief Builds the MCID model of `ntk` for all primary outputs at step 0.
 *
 * All outputs share one model, so a (gate, step) pair needed by several
 * outputs is created once.  Unrolling deeper than the number of clocked gates
 * plus one indicates a cycle and raises `std::logic_error`.
 */
inline mcid_circuit build_mcid( netlist const& ntk, tech_profile const& profile )
{
  auto const& gates = ntk.gates();
  auto elided = [&]( uint32_t g ) { return gates[g].kind == gate_kind::split && !profile.is_clocked( gate_kind::split ); };

  int32_t clocked = 0;
  for ( auto const& g : gates )
  {
    clocked += profile.is_clocked( g.kind ) ? 1 : 0;
  }
  int32_t const deepest = -( clocked + 1 );

  std::vector<uint32_t> topo_pos( ntk.num_gates() );
  for ( uint32_t i = 0; i < ntk.num_gates(); ++i )
  {
    topo_pos[ntk.topological_order()[i]] = i;
  }

  /* backward sweep, one clock cycle per round */
  std::vector<std::pair<int32_t, uint32_t>> required; // (step, gate)
  std::vector<std::pair<int32_t, uint32_t>> pi_uses;  // (step, pi net)
  std::unordered_set<uint64_t> seen;
  auto mark = [&]( uint32_t net, int32_t step ) {
    return seen.insert( ( static_cast<uint64_t>( net ) << 32 ) | static_cast<uint32_t>( -step ) ).second;
  };

  std::vector<uint32_t> frontier;
  for ( auto po : ntk.po_nets() )
  {
    if ( mark( po, 0 ) )
    {
      frontier.push_back( po );
    }
  }
  for ( int32_t step = 0; !frontier.empty(); --step )
  {
    if ( step < deepest )
    {
      throw std::logic_error( "MCID unrolling exceeded the clocked depth bound" );
    }
    std::vector<uint32_t> next;
    auto stack = std::move( frontier );
    while ( !stack.empty() )
    {
      auto const net = stack.back();
      stack.pop_back();
      auto const g = ntk.driver( net );
      if ( g == netlist::no_gate )
      {
        pi_uses.emplace_back( step, net );
        continue;
      }
      bool const is_clocked = profile.is_clocked( gates[g].kind );
      if ( !elided( g ) )
      {
        required.emplace_back( step, g );
      }
      for ( auto in : ntk.gate_inputs( g ) )
      {
        if ( is_clocked )
        {
          if ( mark( in, step - 1 ) )
          {
            next.push_back( in );
          }
        }
        else if ( mark( in, step ) )
        {
          stack.push_back( in );
        }
      }
    }
    frontier = std::move( next );
  }

  mcid_circuit mcid;
  mcid.set_source_inputs( ntk.primary_inputs() );

  std::sort( pi_uses.begin(), pi_uses.end(), []( auto const& a, auto const& b ) { return std::tie( a.second, a.first ) < std::tie( b.second, b.first ); } );
  for ( auto const& [step, net] : pi_uses )
  {
    mcid.add_input( { ntk.net_name( net ), step } );
  }

  auto signal_of = [&]( uint32_t net, int32_t step ) {
    for ( auto g = ntk.driver( net ); g != netlist::no_gate && elided( g ); g = ntk.driver( net ) )
    {
      net = ntk.gate_inputs( g )[0];
    }
    return *mcid.find_signal( ntk.net_name( net ), step );
  };

  std::sort( required.begin(), required.end(), [&]( auto const& a, auto const& b ) {
    return a.first != b.first ? a.first < b.first : topo_pos[a.second] < topo_pos[b.second];
  } );
  for ( auto const& [step, g] : required )
  {
    auto const& gt = gates[g];
    auto const in_step = profile.is_clocked( gt.kind ) ? step - 1 : step;
    std::vector<uint32_t> ins;
    for ( auto in : ntk.gate_inputs( g ) )
    {
      ins.push_back( signal_of( in, in_step ) );
    }
    auto const kind = ( gt.kind == gate_kind::dff || gt.kind == gate_kind::split ) ? gate_kind::buf : gt.kind;
    mcid.add_gate( gt.id + "@t" + std::to_string( step ), kind, std::move( ins ), { gt.output, step } );
  }

  for ( uint32_t i = 0; i < ntk.po_nets().size(); ++i )
  {
    mcid.add_output( ntk.primary_outputs()[i], signal_of( ntk.po_nets()[i], 0 ) );
  }
  return mcid;
}

struct dependency_window
{
  int32_t earliest{ 0 };
  int32_t latest{ 0 };

  int32_t width() const { return latest - earliest + 1; }
  bool operator==( dependency_window const& ) const = default;
};

/*! \brief Earliest and latest time step at which an input is read. */
inline dependency_window input_window( mcid_circuit const& mcid )
{
  if ( mcid.timed_inputs().empty() )
  {
    throw std::invalid_argument( "MCID model has no timed inputs" );
  }
  dependency_window w{ std::numeric_limits<int32_t>::max(), std::numeric_limits<int32_t>::min() };
  for ( auto s : mcid.timed_inputs() )
  {
    w.earliest = std::min( w.earliest, mcid.signal( s ).time_step );
    w.latest = std::max( w.latest, mcid.signal( s ).time_step );
  }
  return w;
}

/*! \brief Evaluates the model; `inputs` is aligned with `timed_inputs()`. */
inline std::vector<bool> evaluate( mcid_circuit const& mcid, std::vector<bool> const& inputs )
{
  std::vector<bool> value( mcid.signals().size(), false );
  for ( std::size_t i = 0; i < mcid.timed_inputs().size(); ++i )
  {
    value[mcid.timed_inputs()[i]] = inputs[i];
  }
  for ( auto const& g : mcid.gates() )
  {
    bool const a = value[g.inputs[0]];
    bool const b = g.inputs.size() > 1u ? value[g.inputs[1]] : false;
    value[g.output] = sfqlec::evaluate( g.kind, a, b );
  }
  std::vector<bool> out;
  for ( auto s : mcid.outputs() )
  {
    out.push_back( value[s] );
  }
  return out;
}

/*! \brief Gates of `ntk` that appear in an MCID model (everything but elided splitters). */
inline std::size_t count_unrolled_kinds( netlist const& ntk, tech_profile const& profile )
{
  return static_cast<std::size_t>( std::count_if( ntk.gates().begin(), ntk.gates().end(), [&]( auto const& g ) {
    return g.kind != gate_kind::split || profile.is_clocked( gate_kind::split );
  } ) );
}

/*! \brief Number of extra gate copies in `mcid` relative to a single copy per source gate. */
inline int64_t count_added_gates( mcid_circuit const& mcid, netlist const& ntk, tech_profile const& profile )
{
  return static_cast<int64_t>( mcid.num_gates() ) - static_cast<int64_t>( count_unrolled_kinds( ntk, profile ) );
}

/*! \brief Upper bound on the gates added to the MCID model by removing DFFs.
 *
 * For every removed DFF the splitters closest upstream of it (the first
 * splitter on each backward path from the DFF) are collected; each one with
 * path delay D contributes 2^D - 1, the size of a complete binary cone of
 * depth D.  The sum saturates at the largest `uint64_t`.
 */
inline uint64_t mcid_size_upper_bound( netlist const& ntk, std::vector<std::string> const& removed_dffs,
                                       kind_set non_clocked = default_non_clocked_kinds )
{
  auto const level = logic_levels( ntk, non_clocked );
  uint64_t total = 0u;
  auto add = [&]( uint64_t term ) {
    total = term > std::numeric_limits<uint64_t>::max() - total ? std::numeric_limits<uint64_t>::max() : total + term;
  };

  for ( auto const& id : removed_dffs )
  {
    auto const g = ntk.find_gate( id );
    if ( !g || ntk.gates()[*g].kind != gate_kind::dff )
    {
      throw std::invalid_argument( "'" + id + "' is not a DFF" );
    }
    std::vector<uint32_t> stack{ ntk.gate_inputs( *g )[0] };
    std::unordered_set<uint32_t> visited{ stack.back() };
    while ( !stack.empty() )
    {
      auto const net = stack.back();
      stack.pop_back();
      auto const d = ntk.driver( net );
      if ( d == netlist::no_gate )
      {
        continue;
      }
      if ( ntk.gates()[d].kind == gate_kind::split )
      {
        auto const depth = level[net];
        add( depth >= 64u ? std::numeric_limits<uint64_t>::max() : ( uint64_t{ 1 } << depth ) - 1u );
        continue;
      }
      for ( auto in : ntk.gate_inputs( d ) )
      {
        if ( visited.insert( in ).second )
        {
          stack.push_back( in );
        }
      }
    }
  }
  return total;
}

/*! \brief Bench-style dump with timed names such as `a@t-1`. */
inline std::string write_mcid( mcid_circuit const& mcid )
{
  std::ostringstream os;
  for ( auto s : mcid.timed_inputs() )
  {
    os << "INPUT(" << mcid.signal( s ).to_string() << ")\n";
  }
  for ( std::size_t i = 0; i < mcid.outputs().size(); ++i )
  {
    auto const name = mcid.signal( mcid.outputs()[i] ).to_string();
    os << "OUTPUT(" << name << ")";
    if ( name != mcid.output_names()[i] + "@t0" )
    {
      os << "  # " << mcid.output_names()[i];
    }
    os << "\n";
  }
  for ( auto const& g : mcid.gates() )
  {
    os << mcid.signal( g.output ).to_string() << " = " << to_string( g.kind ) << "(";
    for ( std::size_t i = 0; i < g.inputs.size(); ++i )
    {
      os << ( i ? ", " : "" ) << mcid.signal( g.inputs[i] ).to_string();
    }
    os << ")\n";
  }
  return os.str();
}

} // namespace sfqlec
