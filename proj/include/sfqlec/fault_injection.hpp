/*!
  \file fault_injection.hpp
  \brief Functional (gate swap) and structural (DFF / splitter removal) error insertion
*/

#pragma once

#include "netlist.hpp"
#include "tech_profile.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sfqlec
{

enum class fault_kind
{
  swap_gate,
  remove_dff,
  remove_splitter
};

inline constexpr std::string_view to_string( fault_kind kind )
{
  switch ( kind )
  {
  case fault_kind::swap_gate: return "SwapGate";
  case fault_kind::remove_dff: return "RemoveDff";
  case fault_kind::remove_splitter: return "RemoveSplitter";
  }
  return "?";
}

inline std::optional<fault_kind> fault_kind_from_string( std::string_view name )
{
  for ( auto k : { fault_kind::swap_gate, fault_kind::remove_dff, fault_kind::remove_splitter } )
  {
    if ( to_string( k ) == name )
    {
      return k;
    }
  }
  return std::nullopt;
}

struct fault_spec
{
  fault_kind kind{ fault_kind::swap_gate };
  /*! \brief Gate id, or "random". */
  std::string target{ "random" };
  /*! \brief SwapGate only; chosen at random among kinds of equal arity when absent. */
  std::optional<gate_kind> replacement;
  uint64_t seed{ 0u };
  /*! \brief RemoveDff only: pick among the deepest quarter of the DFFs. */
  bool near_outputs{ false };
};

struct fault_result
{
  netlist mutated;
  std::string target;
  /*! \brief `FAULT <kind> <target> <detail>` */
  std::string description;
};

namespace detail
{

/*! \brief Whether bypassing `g` keeps every PO name: a PO output needs a renamable driver. */
inline bool bypassable( netlist const& ntk, uint32_t g )
{
  auto const out = ntk.gate_output( g );
  auto const in = ntk.gate_inputs( g )[0];
  auto const pos = ntk.po_nets();
  bool const out_is_po = std::find( pos.begin(), pos.end(), out ) != pos.end();
  bool const in_is_po = std::find( pos.begin(), pos.end(), in ) != pos.end();
  return !out_is_po || ( !ntk.is_pi( in ) && !in_is_po );
}

/*! \brief Removes single-input gate `g`, merging its input and output nets. */
inline netlist bypass( netlist const& ntk, uint32_t g )
{
  auto const& victim = ntk.gates()[g];
  auto const& in = victim.inputs[0];
  auto const& out = victim.output;
  auto const& pos_names = ntk.primary_outputs();
  bool const keep_out_name = std::find( pos_names.begin(), pos_names.end(), out ) != pos_names.end();

  /* either rename `in` to `out`, or redirect readers of `out` to `in` */
  auto const& from = keep_out_name ? in : out;
  auto const& to = keep_out_name ? out : in;

  std::vector<gate> gates;
  for ( uint32_t i = 0; i < ntk.num_gates(); ++i )
  {
    if ( i == g )
    {
      continue;
    }
    auto copy = ntk.gates()[i];
    std::replace( copy.inputs.begin(), copy.inputs.end(), from, to );
    if ( copy.output == from )
    {
      copy.output = to;
      copy.id = to;
    }
    gates.push_back( std::move( copy ) );
  }
  auto pos = pos_names;
  std::replace( pos.begin(), pos.end(), from, to );
  return netlist( ntk.name(), ntk.primary_inputs(), std::move( pos ), std::move( gates ) );
}

} // namespace detail

/*! \brief Gates a fault of `kind` may target, in gate order. */
inline std::vector<uint32_t> eligible_targets( netlist const& ntk, fault_kind kind, bool near_outputs = false )
{
  std::vector<uint32_t> out;
  for ( uint32_t g = 0; g < ntk.num_gates(); ++g )
  {
    auto const k = ntk.gates()[g].kind;
    switch ( kind )
    {
    case fault_kind::swap_gate:
      if ( is_logic( k ) )
      {
        out.push_back( g );
      }
      break;
    case fault_kind::remove_dff:
      if ( k == gate_kind::dff && detail::bypassable( ntk, g ) )
      {
        out.push_back( g );
      }
      break;
    case fault_kind::remove_splitter:
      if ( k == gate_kind::split && detail::bypassable( ntk, g ) )
      {
        out.push_back( g );
      }
      break;
    }
  }
  if ( kind == fault_kind::remove_dff && near_outputs && !out.empty() )
  {
    auto const level = logic_levels( ntk );
    std::stable_sort( out.begin(), out.end(), [&]( auto a, auto b ) { return level[ntk.gate_output( a )] > level[ntk.gate_output( b )]; } );
    out.resize( ( out.size() + 3u ) / 4u );
    std::sort( out.begin(), out.end() );
  }
  return out;
}

inline fault_result inject( netlist const& ntk, fault_spec const& spec )
{
  std::mt19937_64 rng( spec.seed );
  auto const candidates = eligible_targets( ntk, spec.kind, spec.near_outputs );

  uint32_t g = 0u;
  if ( spec.target == "random" )
  {
    if ( candidates.empty() )
    {
      throw std::invalid_argument( "no eligible target for " + std::string( to_string( spec.kind ) ) );
    }
    g = candidates[rng() % candidates.size()];
  }
  else
  {
    auto const found = ntk.find_gate( spec.target );
    if ( !found || std::find( candidates.begin(), candidates.end(), *found ) == candidates.end() )
    {
      throw std::invalid_argument( "'" + spec.target + "' is not an eligible target for " + std::string( to_string( spec.kind ) ) );
    }
    g = *found;
  }

  auto const& victim = ntk.gates()[g];
  fault_result r;
  r.target = victim.id;
  std::string note;

  if ( spec.kind == fault_kind::swap_gate )
  {
    auto replacement = spec.replacement;
    if ( !replacement )
    {
      std::vector<gate_kind> options;
      for ( auto k : all_gate_kinds )
      {
        if ( k != victim.kind && arity( k ) == arity( victim.kind ) && k != gate_kind::dff && k != gate_kind::split )
        {
          options.push_back( k );
        }
      }
      replacement = options[rng() % options.size()];
    }
    if ( arity( *replacement ) != arity( victim.kind ) )
    {
      throw std::invalid_argument( "replacement " + std::string( to_string( *replacement ) ) + " does not have the arity of " + victim.id );
    }
    if ( *replacement == victim.kind )
    {
      throw std::invalid_argument( "replacement kind equals the original kind" );
    }
    auto gates = ntk.gates();
    gates[g].kind = *replacement;
    r.mutated = netlist( ntk.name(), ntk.primary_inputs(), ntk.primary_outputs(), std::move( gates ) );
    note = std::string( to_string( victim.kind ) ) + "->" + std::string( to_string( *replacement ) );
  }
  else
  {
    r.mutated = detail::bypass( ntk, g );
    note = "bypassed " + victim.inputs[0] + "->" + victim.output;
  }
  r.description = "FAULT " + std::string( to_string( spec.kind ) ) + " " + r.target + " " + note;
  return r;
}

} // namespace sfqlec
