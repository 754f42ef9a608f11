/*!
  \file netlist.hpp
  \brief Gate-level netlist of a clocked, feed-forward circuit

  Nets are numbered densely: primary inputs first (in declaration order),
  followed by one net per gate output (in gate order).  Gate identifiers are
  the names of their output nets, which are unique by the single-driver rule.
*/

#pragma once

#include "gate_kind.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sfqlec
{

/*! \brief Error raised when netlist text or structure is malformed.
 *
 * `line` and `column` are 1-based and zero when the error has no source
 * position (for example a cycle found after parsing).
 */
class netlist_error : public std::runtime_error
{
public:
  enum class code
  {
    syntax,
    unknown_kind,
    arity_mismatch,
    duplicate_driver,
    duplicate_declaration,
    undriven_net,
    cycle,
    unknown_net
  };

  netlist_error( code c, std::string const& message, uint32_t line = 0u, uint32_t column = 0u )
      : std::runtime_error( line == 0u ? message : std::to_string( line ) + ":" + std::to_string( column ) + ": " + message ),
        code_( c ), line_( line ), column_( column )
  {
  }

  code error_code() const noexcept { return code_; }
  uint32_t line() const noexcept { return line_; }
  uint32_t column() const noexcept { return column_; }

private:
  code code_;
  uint32_t line_;
  uint32_t column_;
};

struct gate
{
  std::string id;
  gate_kind kind{ gate_kind::buf };
  std::vector<std::string> inputs;
  std::string output;

  bool operator==( gate const& ) const = default;
};

/*! \brief Immutable, validated netlist.
 *
 * The constructor checks every structural invariant (single driver, no
 * undriven nets, arity, acyclicity) and builds the connectivity index.
 */
class netlist
{
public:
  static constexpr uint32_t no_gate = static_cast<uint32_t>( -1 );

  netlist() = default;

  netlist( std::string name, std::vector<std::string> primary_inputs, std::vector<std::string> primary_outputs, std::vector<gate> gates )
      : name_( std::move( name ) ), pis_( std::move( primary_inputs ) ), pos_( std::move( primary_outputs ) ), gates_( std::move( gates ) )
  {
    build_index();
  }

  std::string const& name() const { return name_; }
  std::vector<std::string> const& primary_inputs() const { return pis_; }
  std::vector<std::string> const& primary_outputs() const { return pos_; }
  std::vector<gate> const& gates() const { return gates_; }

  std::size_t num_gates() const { return gates_.size(); }
  std::size_t num_nets() const { return net_names_.size(); }
  std::size_t num_pis() const { return pis_.size(); }

  std::optional<uint32_t> find_net( std::string_view name ) const
  {
    if ( auto it = net_ids_.find( std::string( name ) ); it != net_ids_.end() )
    {
      return it->second;
    }
    return std::nullopt;
  }

  uint32_t net_index( std::string_view name ) const
  {
    if ( auto id = find_net( name ) )
    {
      return *id;
    }
    throw netlist_error( netlist_error::code::unknown_net, "unknown net '" + std::string( name ) + "'" );
  }

  std::optional<uint32_t> find_gate( std::string_view id ) const
  {
    auto net = find_net( id );
    if ( !net || *net < pis_.size() )
    {
      return std::nullopt;
    }
    return *net - static_cast<uint32_t>( pis_.size() );
  }

  std::string const& net_name( uint32_t net ) const { return net_names_[net]; }
  bool is_pi( uint32_t net ) const { return net < pis_.size(); }

  /*! \brief Gate driving `net`, or `no_gate` for primary inputs. */
  uint32_t driver( uint32_t net ) const { return is_pi( net ) ? no_gate : net - static_cast<uint32_t>( pis_.size() ); }
  uint32_t gate_output( uint32_t g ) const { return static_cast<uint32_t>( pis_.size() ) + g; }
  std::span<uint32_t const> gate_inputs( uint32_t g ) const { return gate_inputs_[g]; }

  /*! \brief Reading gates, one entry per input pin. */
  std::span<uint32_t const> readers( uint32_t net ) const { return readers_[net]; }

  std::span<uint32_t const> po_nets() const { return po_nets_; }

  /*! \brief Gate indices, every gate after its fanin drivers; ties broken by gate id. */
  std::span<uint32_t const> topological_order() const { return topo_; }

private:
  void build_index()
  {
    using code = netlist_error::code;
    net_names_.clear();
    net_ids_.clear();
    net_names_.reserve( pis_.size() + gates_.size() );

    for ( auto const& pi : pis_ )
    {
      if ( !net_ids_.emplace( pi, static_cast<uint32_t>( net_names_.size() ) ).second )
      {
        throw netlist_error( code::duplicate_declaration, "primary input '" + pi + "' declared twice" );
      }
      net_names_.push_back( pi );
    }
    for ( auto const& g : gates_ )
    {
      if ( !net_ids_.emplace( g.output, static_cast<uint32_t>( net_names_.size() ) ).second )
      {
        throw netlist_error( code::duplicate_driver, "net '" + g.output + "' has more than one driver" );
      }
      if ( g.id != g.output )
      {
        throw netlist_error( code::syntax, "gate id '" + g.id + "' must equal its output net '" + g.output + "'" );
      }
      if ( g.inputs.size() != arity( g.kind ) )
      {
        throw netlist_error( code::arity_mismatch, "gate '" + g.id + "' of kind " + std::string( to_string( g.kind ) ) + " expects " +
                                                       std::to_string( arity( g.kind ) ) + " inputs" );
      }
      net_names_.push_back( g.output );
    }

    gate_inputs_.assign( gates_.size(), {} );
    readers_.assign( net_names_.size(), {} );
    for ( uint32_t i = 0; i < gates_.size(); ++i )
    {
      for ( auto const& in : gates_[i].inputs )
      {
        auto it = net_ids_.find( in );
        if ( it == net_ids_.end() )
        {
          throw netlist_error( code::undriven_net, "net '" + in + "' read by gate '" + gates_[i].id + "' is not driven" );
        }
        gate_inputs_[i].push_back( it->second );
        readers_[it->second].push_back( i );
      }
    }

    po_nets_.clear();
    for ( auto const& po : pos_ )
    {
      auto it = net_ids_.find( po );
      if ( it == net_ids_.end() )
      {
        throw netlist_error( code::undriven_net, "primary output '" + po + "' is not driven" );
      }
      po_nets_.push_back( it->second );
    }

    compute_topological_order();
  }

  void compute_topological_order()
  {
    using entry = std::pair<std::string_view, uint32_t>;
    std::priority_queue<entry, std::vector<entry>, std::greater<>> ready;
    std::vector<uint32_t> pending( gates_.size(), 0u );
    for ( uint32_t i = 0; i < gates_.size(); ++i )
    {
      for ( auto in : gate_inputs_[i] )
      {
        pending[i] += is_pi( in ) ? 0u : 1u;
      }
      if ( pending[i] == 0u )
      {
        ready.emplace( gates_[i].id, i );
      }
    }

    topo_.clear();
    topo_.reserve( gates_.size() );
    while ( !ready.empty() )
    {
      auto const g = ready.top().second;
      ready.pop();
      topo_.push_back( g );
      for ( auto reader : readers_[gate_output( g )] )
      {
        if ( --pending[reader] == 0u )
        {
          ready.emplace( gates_[reader].id, reader );
        }
      }
    }

    if ( topo_.size() != gates_.size() )
    {
      for ( uint32_t i = 0; i < gates_.size(); ++i )
      {
        if ( pending[i] != 0u )
        {
          throw netlist_error( netlist_error::code::cycle, "combinational cycle through gate '" + gates_[i].id + "'" );
        }
      }
    }
  }

  std::string name_;
  std::vector<std::string> pis_;
  std::vector<std::string> pos_;
  std::vector<gate> gates_;

  std::vector<std::string> net_names_;
  std::unordered_map<std::string, uint32_t> net_ids_;
  std::vector<std::vector<uint32_t>> gate_inputs_;
  std::vector<std::vector<uint32_t>> readers_;
  std::vector<uint32_t> po_nets_;
  std::vector<uint32_t> topo_;
};

inline std::vector<std::string> topological_order( netlist const& ntk )
{
  std::vector<std::string> ids;
  ids.reserve( ntk.num_gates() );
  for ( auto g : ntk.topological_order() )
  {
    ids.push_back( ntk.gates()[g].id );
  }
  return ids;
}

/*! \brief Logic level of every net.
 *
 * The level of a net is the largest number of clocked gates on any path from
 * a primary input to it.  Kinds in `non_clocked` add no level.
 */
inline std::vector<uint32_t> logic_levels( netlist const& ntk, kind_set non_clocked = default_non_clocked_kinds )
{
  std::vector<uint32_t> level( ntk.num_nets(), 0u );
  for ( auto g : ntk.topological_order() )
  {
    uint32_t lvl = 0u;
    for ( auto in : ntk.gate_inputs( g ) )
    {
      lvl = std::max( lvl, level[in] );
    }
    level[ntk.gate_output( g )] = lvl + ( non_clocked.contains( ntk.gates()[g].kind ) ? 0u : 1u );
  }
  return level;
}

inline uint32_t logic_level( netlist const& ntk, std::string_view net, kind_set non_clocked = default_non_clocked_kinds )
{
  auto const id = ntk.net_index( net );
  return logic_levels( ntk, non_clocked )[id];
}

/*! \brief Number of gates of the netlist that are not DFF, BUF or SPLIT. */
inline std::size_t count_logic_gates( netlist const& ntk )
{
  return static_cast<std::size_t>( std::count_if( ntk.gates().begin(), ntk.gates().end(), []( auto const& g ) { return is_logic( g.kind ); } ) );
}

} // namespace sfqlec
