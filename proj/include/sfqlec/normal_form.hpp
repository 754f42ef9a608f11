/*!
  \file normal_form.hpp
  \brief Structurally hashed and-inverter graph

  Node 0 is the constant false.  Literals are `2 * node + complement`.
  Inputs and AND nodes are created in order, so the node index is a
  topological order.
*/

#pragma once

#include "gate_kind.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sfqlec
{

using aig_lit = uint32_t;

inline constexpr aig_lit aig_false = 0u;
inline constexpr aig_lit aig_true = 1u;

inline constexpr uint32_t aig_node( aig_lit l ) { return l >> 1; }
inline constexpr bool aig_is_complemented( aig_lit l ) { return ( l & 1u ) != 0u; }
inline constexpr aig_lit aig_not( aig_lit l ) { return l ^ 1u; }
inline constexpr aig_lit aig_make_lit( uint32_t node, bool complemented = false ) { return ( node << 1 ) | ( complemented ? 1u : 0u ); }

class aig_graph
{
public:
  aig_graph() { nodes_.push_back( { aig_false, aig_false } ); }

  aig_lit create_input()
  {
    auto const n = static_cast<uint32_t>( nodes_.size() );
    nodes_.push_back( { aig_false, aig_false } );
    input_index_.emplace( n, static_cast<uint32_t>( inputs_.size() ) );
    inputs_.push_back( n );
    return aig_make_lit( n );
  }

  aig_lit create_and( aig_lit a, aig_lit b )
  {
    if ( a > b )
    {
      std::swap( a, b );
    }
    if ( a == aig_false )
    {
      return aig_false;
    }
    if ( a == aig_true )
    {
      return b;
    }
    if ( a == b )
    {
      return a;
    }
    if ( a == aig_not( b ) )
    {
      return aig_false;
    }
    auto const key = ( static_cast<uint64_t>( a ) << 32 ) | b;
    if ( auto it = strash_.find( key ); it != strash_.end() )
    {
      return aig_make_lit( it->second );
    }
    auto const n = static_cast<uint32_t>( nodes_.size() );
    nodes_.push_back( { a, b } );
    strash_.emplace( key, n );
    return aig_make_lit( n );
  }

  aig_lit create_or( aig_lit a, aig_lit b ) { return aig_not( create_and( aig_not( a ), aig_not( b ) ) ); }

  aig_lit create_xor( aig_lit a, aig_lit b )
  {
    return create_and( aig_not( create_and( a, b ) ), aig_not( create_and( aig_not( a ), aig_not( b ) ) ) );
  }

  aig_lit create_gate( gate_kind kind, aig_lit a, aig_lit b = aig_false )
  {
    switch ( kind )
    {
    case gate_kind::and2: return create_and( a, b );
    case gate_kind::or2: return create_or( a, b );
    case gate_kind::xor2: return create_xor( a, b );
    case gate_kind::nand2: return aig_not( create_and( a, b ) );
    case gate_kind::nor2: return aig_not( create_or( a, b ) );
    case gate_kind::xnor2: return aig_not( create_xor( a, b ) );
    case gate_kind::inv: return aig_not( a );
    case gate_kind::buf:
    case gate_kind::dff:
    case gate_kind::split:
      return a;
    }
    throw std::logic_error( "unknown gate kind" );
  }

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_inputs() const { return inputs_.size(); }
  std::size_t num_ands() const { return nodes_.size() - inputs_.size() - 1u; }

  std::vector<uint32_t> const& inputs() const { return inputs_; }
  bool is_input( uint32_t node ) const { return input_index_.count( node ) != 0u; }
  bool is_and( uint32_t node ) const { return node != 0u && !is_input( node ); }
  /*! \brief Position of an input node in `inputs()`. */
  uint32_t input_position( uint32_t node ) const { return input_index_.at( node ); }

  aig_lit fanin0( uint32_t node ) const { return nodes_[node].first; }
  aig_lit fanin1( uint32_t node ) const { return nodes_[node].second; }

  /*! \brief Value of every node under an input assignment aligned with `inputs()`. */
  std::vector<bool> simulate( std::vector<bool> const& input_values ) const
  {
    std::vector<bool> v( nodes_.size(), false );
    for ( std::size_t i = 0; i < inputs_.size(); ++i )
    {
      v[inputs_[i]] = input_values[i];
    }
    for ( uint32_t n = 1; n < nodes_.size(); ++n )
    {
      if ( is_and( n ) )
      {
        v[n] = literal_value( v, fanin0( n ) ) && literal_value( v, fanin1( n ) );
      }
    }
    return v;
  }

  static bool literal_value( std::vector<bool> const& node_values, aig_lit l )
  {
    return node_values[aig_node( l )] != aig_is_complemented( l );
  }

private:
  std::vector<std::pair<aig_lit, aig_lit>> nodes_;
  std::vector<uint32_t> inputs_;
  std::unordered_map<uint32_t, uint32_t> input_index_;
  std::unordered_map<uint64_t, uint32_t> strash_;
};

} // namespace sfqlec
