/*!
  \file equivalence.hpp
  \brief Miter construction, clause encoding, SAT-based decision and traces

  The miter shares one and-inverter graph between the (timing-adjusted) MCID
  model and the golden netlist.  External inputs are timed input cells
  (PI, step), created first and sorted by name and step; golden PIs read the
  cell at the matched step.  The root is the disjunction of one XOR per
  output pair, so the root is satisfiable iff the circuits differ.
*/

#pragma once

#include "itcl.hpp"
#include "mcid.hpp"
#include "netlist.hpp"
#include "normal_form.hpp"
#include "sat_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sfqlec
{

struct miter_input
{
  timed_signal cell;
  /*! \brief Arrival cycle of the cell at the implementation's pins (ITCL shift undone). */
  int32_t physical_step{ 0 };
  bool read_by_impl{ false };
  bool read_by_golden{ false };
};

struct miter_circuit
{
  aig_graph graph;
  /*! \brief Aligned with `graph.inputs()`. */
  std::vector<miter_input> inputs;
  std::vector<std::string> source_inputs;
  std::vector<std::string> golden_inputs;
  std::vector<std::string> output_names;
  std::vector<aig_lit> impl_outputs;
  std::vector<aig_lit> golden_outputs;
  std::vector<aig_lit> differences;
  aig_lit root{ aig_false };
};

inline void require_combinational( netlist const& golden )
{
  for ( auto const& g : golden.gates() )
  {
    if ( g.kind == gate_kind::dff || g.kind == gate_kind::split )
    {
      throw std::invalid_argument( "golden netlist contains clocked element '" + g.id + "' (" + std::string( to_string( g.kind ) ) + ")" );
    }
  }
}

inline miter_circuit build_miter( mcid_circuit const& mcid, netlist const& golden, input_matching const& matching )
{
  require_combinational( golden );
  auto const& gpos = golden.primary_outputs();
  if ( gpos.size() != mcid.output_names().size() )
  {
    throw std::invalid_argument( "implementation has " + std::to_string( mcid.output_names().size() ) + " outputs, golden has " +
                                 std::to_string( gpos.size() ) );
  }
  std::vector<uint32_t> golden_index;
  std::vector<uint8_t> used( gpos.size(), 0u );
  for ( auto const& name : mcid.output_names() )
  {
    std::size_t j = 0;
    while ( j < gpos.size() && ( used[j] || gpos[j] != name ) )
    {
      ++j;
    }
    if ( j == gpos.size() )
    {
      throw std::invalid_argument( "output '" + name + "' has no counterpart in the golden netlist" );
    }
    used[j] = 1u;
    golden_index.push_back( static_cast<uint32_t>( j ) );
  }

  miter_circuit m;
  m.source_inputs = mcid.source_inputs();
  m.golden_inputs = golden.primary_inputs();

  /* (PI, effective step) -> entry */
  std::map<std::pair<std::string, int32_t>, miter_input> cells;
  std::unordered_map<std::string, int32_t> shift;
  for ( auto s : mcid.timed_inputs() )
  {
    auto const& sig = mcid.signal( s );
    cells[{ sig.base_name, sig.time_step }] = { sig, mcid.physical_step( s ), true, false };
    shift[sig.base_name] = mcid.physical_step( s ) - sig.time_step;
  }
  for ( auto const& [pi, sig] : matching.matched )
  {
    auto& c = cells[{ sig.base_name, sig.time_step }];
    if ( !c.read_by_impl )
    {
      auto it = shift.find( pi );
      c.cell = sig;
      c.physical_step = sig.time_step + ( it == shift.end() ? 0 : it->second );
    }
    c.read_by_golden = true;
  }

  std::map<std::pair<std::string, int32_t>, aig_lit> cell_lit;
  for ( auto const& [key, c] : cells )
  {
    cell_lit[key] = m.graph.create_input();
    m.inputs.push_back( c );
  }

  std::vector<aig_lit> sig_lit( mcid.signals().size(), aig_false );
  for ( auto s : mcid.timed_inputs() )
  {
    sig_lit[s] = cell_lit.at( { mcid.signal( s ).base_name, mcid.signal( s ).time_step } );
  }
  for ( auto const& g : mcid.gates() )
  {
    auto const a = sig_lit[g.inputs[0]];
    auto const b = g.inputs.size() > 1u ? sig_lit[g.inputs[1]] : aig_false;
    sig_lit[g.output] = m.graph.create_gate( g.kind, a, b );
  }

  std::vector<aig_lit> net_lit( golden.num_nets(), aig_false );
  for ( uint32_t pi = 0; pi < golden.num_pis(); ++pi )
  {
    auto const& sig = matching.matched.at( golden.net_name( pi ) );
    net_lit[pi] = cell_lit.at( { sig.base_name, sig.time_step } );
  }
  for ( auto g : golden.topological_order() )
  {
    auto const ins = golden.gate_inputs( g );
    auto const a = net_lit[ins[0]];
    auto const b = ins.size() > 1u ? net_lit[ins[1]] : aig_false;
    net_lit[golden.gate_output( g )] = m.graph.create_gate( golden.gates()[g].kind, a, b );
  }

  for ( std::size_t i = 0; i < mcid.outputs().size(); ++i )
  {
    auto const impl = sig_lit[mcid.outputs()[i]];
    auto const gold = net_lit[golden.po_nets()[golden_index[i]]];
    m.output_names.push_back( mcid.output_names()[i] );
    m.impl_outputs.push_back( impl );
    m.golden_outputs.push_back( gold );
    m.differences.push_back( m.graph.create_xor( impl, gold ) );
    m.root = m.graph.create_or( m.root, m.differences.back() );
  }
  return m;
}

struct cnf_formula
{
  uint32_t num_vars{ 0u };
  std::vector<std::vector<int>> clauses;
  /*! \brief Name of variable v at index v - 1. */
  std::vector<std::string> var_names;
};

struct cnf_encoding
{
  cnf_formula formula;
  /*! \brief DIMACS variable of each graph node, 0 when outside the encoded cone. */
  std::vector<uint32_t> node_var;
};

/*! \brief Tseitin encoding of the cone of `root`, plus the unit clause asserting `root`.
 *
 * Variable 1 is the constant node.  Inputs of the cone follow in input order,
 * then AND nodes in topological order.
 */
inline cnf_encoding encode_cnf( miter_circuit const& m, aig_lit root )
{
  auto const& g = m.graph;
  std::vector<uint8_t> in_cone( g.num_nodes(), 0u );
  std::vector<uint32_t> stack;
  auto visit = [&]( aig_lit l ) {
    if ( !in_cone[aig_node( l )] )
    {
      in_cone[aig_node( l )] = 1u;
      stack.push_back( aig_node( l ) );
    }
  };
  in_cone[0] = 1u;
  visit( root );
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    if ( g.is_and( n ) )
    {
      visit( g.fanin0( n ) );
      visit( g.fanin1( n ) );
    }
  }

  cnf_encoding enc;
  enc.node_var.assign( g.num_nodes(), 0u );
  auto& f = enc.formula;
  auto new_var = [&]( uint32_t node, std::string name ) {
    enc.node_var[node] = ++f.num_vars;
    f.var_names.push_back( std::move( name ) );
  };
  new_var( 0u, "const0" );
  for ( std::size_t i = 0; i < g.inputs().size(); ++i )
  {
    if ( in_cone[g.inputs()[i]] )
    {
      new_var( g.inputs()[i], m.inputs[i].cell.to_string() );
    }
  }
  for ( uint32_t n = 1; n < g.num_nodes(); ++n )
  {
    if ( in_cone[n] && g.is_and( n ) )
    {
      new_var( n, "and" + std::to_string( n ) );
    }
  }

  auto lit = [&]( aig_lit l ) {
    auto const v = static_cast<int>( enc.node_var[aig_node( l )] );
    return aig_is_complemented( l ) ? -v : v;
  };
  f.clauses.push_back( { -1 } );
  for ( uint32_t n = 1; n < g.num_nodes(); ++n )
  {
    if ( in_cone[n] && g.is_and( n ) )
    {
      auto const x = static_cast<int>( enc.node_var[n] );
      auto const a = lit( g.fanin0( n ) );
      auto const b = lit( g.fanin1( n ) );
      f.clauses.push_back( { -x, a } );
      f.clauses.push_back( { -x, b } );
      f.clauses.push_back( { x, -a, -b } );
    }
  }
  f.clauses.push_back( { lit( root ) } );
  return enc;
}

inline std::string write_dimacs( cnf_formula const& f )
{
  std::ostringstream os;
  for ( uint32_t v = 1; v <= f.num_vars; ++v )
  {
    os << "c var " << v << " = " << f.var_names[v - 1u] << "\n";
  }
  os << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
  for ( auto const& c : f.clauses )
  {
    for ( auto l : c )
    {
      os << l << " ";
    }
    os << "0\n";
  }
  return os.str();
}

/*! \brief Counterexample over physical clock cycles.
 *
 * `cycles[k][i]` is the value of `inputs[i]` in trace cycle k, which is the
 * wave applied `k` cycles before the newest one (physical step
 * `latest_step - k`).  Cells the implementation does not read hold the
 * golden value of their PI.
 */
struct timed_trace
{
  std::vector<std::string> inputs;
  int32_t latest_step{ 0 };
  std::vector<std::vector<bool>> cycles;
  std::vector<std::pair<std::string, bool>> golden_assignment;
  std::string output_name;
  bool impl_output{ false };
  bool golden_output{ false };

  int32_t earliest_step() const { return latest_step - static_cast<int32_t>( cycles.size() ) + 1; }
  bool operator==( timed_trace const& ) const = default;
};

/*! \brief Builds the trace for an input assignment aligned with the miter inputs. */
inline timed_trace extract_trace( miter_circuit const& m, std::vector<bool> const& input_values )
{
  auto const values = m.graph.simulate( input_values );
  timed_trace t;
  t.inputs = m.source_inputs;

  std::size_t out = m.output_names.size();
  for ( std::size_t i = 0; i < m.output_names.size(); ++i )
  {
    if ( aig_graph::literal_value( values, m.impl_outputs[i] ) != aig_graph::literal_value( values, m.golden_outputs[i] ) )
    {
      out = i;
      break;
    }
  }
  if ( out == m.output_names.size() )
  {
    throw std::logic_error( "assignment does not distinguish the circuits" );
  }
  t.output_name = m.output_names[out];
  t.impl_output = aig_graph::literal_value( values, m.impl_outputs[out] );
  t.golden_output = aig_graph::literal_value( values, m.golden_outputs[out] );

  std::map<std::string, bool> golden_value;
  for ( std::size_t i = 0; i < m.inputs.size(); ++i )
  {
    if ( m.inputs[i].read_by_golden )
    {
      golden_value[m.inputs[i].cell.base_name] = input_values[i];
    }
  }
  for ( auto const& pi : m.golden_inputs )
  {
    t.golden_assignment.emplace_back( pi, golden_value.at( pi ) );
  }

  if ( m.inputs.empty() )
  {
    return t;
  }
  auto latest = m.inputs.front().physical_step;
  auto earliest = latest;
  for ( auto const& in : m.inputs )
  {
    latest = std::max( latest, in.physical_step );
    earliest = std::min( earliest, in.physical_step );
  }
  t.latest_step = latest;
  t.cycles.assign( static_cast<std::size_t>( latest - earliest + 1 ), std::vector<bool>( t.inputs.size(), false ) );
  std::unordered_map<std::string, std::size_t> column;
  for ( std::size_t i = 0; i < t.inputs.size(); ++i )
  {
    column.emplace( t.inputs[i], i );
    if ( auto it = golden_value.find( t.inputs[i] ); it != golden_value.end() )
    {
      for ( auto& row : t.cycles )
      {
        row[i] = it->second;
      }
    }
  }
  for ( std::size_t i = 0; i < m.inputs.size(); ++i )
  {
    auto const& in = m.inputs[i];
    t.cycles[static_cast<std::size_t>( latest - in.physical_step )][column.at( in.cell.base_name )] = input_values[i];
  }
  return t;
}

inline std::string format_trace( timed_trace const& t )
{
  std::ostringstream os;
  for ( std::size_t k = 0; k < t.cycles.size(); ++k )
  {
    os << "CYCLE " << k << ":";
    for ( std::size_t i = 0; i < t.inputs.size(); ++i )
    {
      os << " " << t.inputs[i] << "=" << ( t.cycles[k][i] ? 1 : 0 );
    }
    os << "\n";
  }
  os << "GOLDEN:";
  for ( auto const& [pi, v] : t.golden_assignment )
  {
    os << " " << pi << "=" << ( v ? 1 : 0 );
  }
  os << "\n";
  os << "OUTPUT " << t.output_name << ": impl=" << ( t.impl_output ? 1 : 0 ) << " golden=" << ( t.golden_output ? 1 : 0 ) << "\n";
  return os.str();
}

enum class verdict_status
{
  equivalent,
  inequivalent,
  unknown
};

inline constexpr std::string_view to_string( verdict_status s )
{
  switch ( s )
  {
  case verdict_status::equivalent: return "equivalent";
  case verdict_status::inequivalent: return "inequivalent";
  case verdict_status::unknown: return "unknown";
  }
  return "?";
}

struct verdict_stats
{
  std::size_t nodes{ 0u };
  std::size_t clauses{ 0u };
  uint64_t decisions{ 0u };
  uint64_t conflicts{ 0u };
  double millis{ 0.0 };
};

struct verdict
{
  verdict_status status{ verdict_status::equivalent };
  std::optional<timed_trace> trace;
  verdict_stats stats;

  bool equivalent() const { return status == verdict_status::equivalent; }
};

struct equivalence_options
{
  sat_limits limits;
  /*! \brief Solve one output difference at a time, in output order. */
  bool per_output{ false };
};

/*! \brief Decides the miter.
 *
 * The reported counterexample is the least one in miter input order with 0
 * before 1, found by re-solving under assumptions, so the trace does not
 * depend on the solver's branching heuristics.
 */
inline verdict check_equivalence( miter_circuit const& m, equivalence_options const& options = {} )
{
  auto const start = std::chrono::steady_clock::now();
  verdict v;
  v.stats.nodes = m.graph.num_ands();

  std::vector<aig_lit> roots = options.per_output ? m.differences : std::vector<aig_lit>{ m.root };
  bool unknown = false;
  for ( auto root : roots )
  {
    if ( root == aig_false )
    {
      continue;
    }
    auto const enc = encode_cnf( m, root );
    sat_solver solver( enc.formula.num_vars );
    for ( auto const& c : enc.formula.clauses )
    {
      solver.add_clause( c );
    }
    v.stats.clauses += enc.formula.clauses.size();
    auto const result = solver.solve( options.limits );
    if ( result != sat_result::sat )
    {
      v.stats.decisions += solver.stats().decisions;
      v.stats.conflicts += solver.stats().conflicts;
    }

    if ( result == sat_result::unknown )
    {
      unknown = true;
      continue;
    }
    if ( result == sat_result::sat )
    {
      std::vector<bool> values( m.inputs.size(), false );
      auto read_model = [&] {
        for ( std::size_t i = 0; i < m.inputs.size(); ++i )
        {
          auto const var = enc.node_var[m.graph.inputs()[i]];
          values[i] = var != 0u && solver.model_value( var );
        }
      };
      read_model();

      /* lexicographically least counterexample: fix inputs to 0 where possible */
      std::vector<int> fixed;
      for ( std::size_t i = 0; i < m.inputs.size(); ++i )
      {
        auto const var = static_cast<int>( enc.node_var[m.graph.inputs()[i]] );
        if ( var == 0 )
        {
          continue;
        }
        fixed.push_back( -var );
        if ( !values[i] )
        {
          continue;
        }
        auto const r = solver.solve( options.limits, fixed );
        if ( r == sat_result::sat )
        {
          read_model();
        }
        else if ( r == sat_result::unsat )
        {
          fixed.back() = var;
        }
        else
        {
          break;
        }
      }
      v.stats.decisions += solver.stats().decisions;
      v.stats.conflicts += solver.stats().conflicts;
      if ( !aig_graph::literal_value( m.graph.simulate( values ), root ) )
      {
        throw std::logic_error( "solver model does not satisfy the miter" );
      }
      v.status = verdict_status::inequivalent;
      v.trace = extract_trace( m, values );
      break;
    }
  }
  if ( v.status != verdict_status::inequivalent && unknown )
  {
    v.status = verdict_status::unknown;
  }
  v.stats.millis = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();
  return v;
}

} // namespace sfqlec
