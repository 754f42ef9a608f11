/*!
  \file structural_checks.hpp
  \brief Fanout-restriction and path-balancing checkers

  Both checkers run in a single topological sweep, so every gate is visited
  once.  The path-balancing checker propagates base-distance sets (the set of
  clocked-gate path lengths from any primary input) forward instead of
  enumerating paths; asynchronous kinds such as RSFQ splitters do not add to
  the distance.
*/

#pragma once

#include "netlist.hpp"
#include "tech_profile.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace sfqlec
{

enum class violation_kind
{
  fanout_exceeded,
  unbalanced_fanin,
  unequal_output_depth
};

inline constexpr std::string_view to_string( violation_kind kind )
{
  switch ( kind )
  {
  case violation_kind::fanout_exceeded: return "FanoutExceeded";
  case violation_kind::unbalanced_fanin: return "UnbalancedFanin";
  case violation_kind::unequal_output_depth: return "UnequalOutputDepth";
  }
  return "?";
}

struct violation
{
  violation_kind kind;
  std::string location;
  std::string detail;

  bool operator==( violation const& ) const = default;
};

struct check_report
{
  bool passed{ true };
  std::vector<violation> violations;
  /*! \brief Number of gates the checker touched (at most one visit per gate). */
  std::size_t gates_visited{ 0u };

  void add( violation_kind kind, std::string location, std::string detail )
  {
    violations.push_back( { kind, std::move( location ), std::move( detail ) } );
    passed = false;
  }
};

/*! \brief One `VIOLATION <kind> <location> <detail>` record per line. */
inline std::string format_records( check_report const& report )
{
  std::ostringstream os;
  for ( auto const& v : report.violations )
  {
    os << "VIOLATION " << to_string( v.kind ) << " " << v.location << " " << v.detail << "\n";
  }
  return os.str();
}

inline std::string format_human( check_report const& report, std::string_view title )
{
  std::ostringstream os;
  os << title << ": " << ( report.passed ? "pass" : "FAIL" );
  if ( !report.passed )
  {
    os << " (" << report.violations.size() << " violation" << ( report.violations.size() == 1u ? "" : "s" ) << ")";
  }
  os << "\n";
  for ( auto const& v : report.violations )
  {
    os << "  " << to_string( v.kind ) << " at " << v.location << ": " << v.detail << "\n";
  }
  return os.str();
}

/*! \brief Checks reader counts on every net against the profile limits.
 *
 * A net driven by a SPLIT may have `splitter_fanout_limit` reading pins, any
 * other net (including primary inputs) `default_fanout_limit`.  Primary
 * output references are not counted as readers.
 */
inline check_report check_fanout( netlist const& ntk, tech_profile const& profile )
{
  check_report report;
  if ( !profile.requires_fanout_check )
  {
    return report;
  }
  for ( uint32_t net = 0; net < ntk.num_nets(); ++net )
  {
    auto const drv = ntk.driver( net );
    if ( drv != netlist::no_gate )
    {
      ++report.gates_visited;
    }
    bool const from_splitter = drv != netlist::no_gate && ntk.gates()[drv].kind == gate_kind::split;
    auto const limit = from_splitter ? profile.splitter_fanout_limit : profile.default_fanout_limit;
    auto const count = ntk.readers( net ).size();
    if ( count > limit )
    {
      report.add( violation_kind::fanout_exceeded, ntk.net_name( net ),
                  std::to_string( count ) + " readers, limit " + std::to_string( limit ) );
    }
  }
  return report;
}

/*! \brief Set of path lengths (in clocked gates) from the primary inputs to a net.
 *
 * Sets that would exceed `max_tracked` distinct values are truncated to their
 * minimum and maximum; a truncated set is never a singleton.
 */
class base_distance_set
{
public:
  static constexpr std::size_t max_tracked = 64u;

  base_distance_set() = default;
  explicit base_distance_set( uint32_t value ) : values_{ value } {}

  bool empty() const { return values_.empty(); }
  bool singleton() const { return !truncated_ && values_.size() == 1u; }
  bool truncated() const { return truncated_; }
  uint32_t min() const { return values_.front(); }
  uint32_t max() const { return values_.back(); }
  /*! \brief Depth of the component: the largest path length. */
  uint32_t depth() const { return max(); }
  std::vector<uint32_t> const& values() const { return values_; }

  void merge( base_distance_set const& other, uint32_t offset )
  {
    if ( other.empty() )
    {
      return;
    }
    if ( truncated_ || other.truncated_ )
    {
      auto const lo = empty() ? other.min() + offset : std::min( min(), other.min() + offset );
      auto const hi = empty() ? other.max() + offset : std::max( max(), other.max() + offset );
      values_ = { lo, hi };
      truncated_ = true;
      return;
    }
    std::vector<uint32_t> merged;
    merged.reserve( values_.size() + other.values_.size() );
    auto a = values_.begin();
    auto b = other.values_.begin();
    while ( a != values_.end() || b != other.values_.end() )
    {
      uint32_t v;
      if ( b == other.values_.end() || ( a != values_.end() && *a < *b + offset ) )
      {
        v = *a++;
      }
      else
      {
        v = *b++ + offset;
      }
      if ( merged.empty() || merged.back() != v )
      {
        merged.push_back( v );
      }
    }
    values_ = std::move( merged );
    if ( values_.size() > max_tracked )
    {
      values_ = { values_.front(), values_.back() };
      truncated_ = true;
    }
  }

  std::string to_string() const
  {
    std::string s = "{";
    for ( std::size_t i = 0; i < values_.size(); ++i )
    {
      s += ( i ? ( truncated_ ? ".." : "," ) : "" ) + std::to_string( values_[i] );
    }
    return s + "}";
  }

  bool operator==( base_distance_set const& ) const = default;

private:
  std::vector<uint32_t> values_;
  bool truncated_{ false };
};

/*! \brief Base-distance set of every net, indexed by net id. */
inline std::vector<base_distance_set> compute_base_distances( netlist const& ntk, tech_profile const& profile, std::size_t* visits = nullptr )
{
  std::vector<base_distance_set> bd( ntk.num_nets() );
  for ( uint32_t pi = 0; pi < ntk.num_pis(); ++pi )
  {
    bd[pi] = base_distance_set( 0u );
  }
  for ( auto g : ntk.topological_order() )
  {
    auto const step = profile.is_clocked( ntk.gates()[g].kind ) ? 1u : 0u;
    auto& out = bd[ntk.gate_output( g )];
    for ( auto in : ntk.gate_inputs( g ) )
    {
      out.merge( bd[in], step );
    }
    if ( visits )
    {
      ++*visits;
    }
  }
  return bd;
}

inline std::unordered_map<std::string, base_distance_set> base_distances( netlist const& ntk, tech_profile const& profile )
{
  auto const bd = compute_base_distances( ntk, profile );
  std::unordered_map<std::string, base_distance_set> named;
  for ( uint32_t net = 0; net < ntk.num_nets(); ++net )
  {
    named.emplace( ntk.net_name( net ), bd[net] );
  }
  return named;
}

struct balance_options
{
  /*! \brief Only compare the base distances of the primary outputs. */
  bool po_only{ false };
};

/*! \brief Path-balancing check.
 *
 * Passes iff every net has a singleton base-distance set and all primary
 * outputs share the same depth.  For each imbalance the gate where it
 * originates (all fanins singleton, but different) is reported.  With
 * `po_only` only the union of the outputs' sets is required to be a single
 * value.
 */
inline check_report check_path_balance( netlist const& ntk, tech_profile const& profile, balance_options const& options = {} )
{
  check_report report;
  if ( !profile.requires_path_balancing )
  {
    return report;
  }
  auto const bd = compute_base_distances( ntk, profile, &report.gates_visited );

  if ( options.po_only )
  {
    base_distance_set all;
    for ( auto po : ntk.po_nets() )
    {
      all.merge( bd[po], 0u );
      if ( !all.singleton() )
      {
        report.add( violation_kind::unequal_output_depth, ntk.net_name( po ), "base distances " + bd[po].to_string() + ", outputs so far " + all.to_string() );
        break;
      }
    }
    return report;
  }

  for ( auto g : ntk.topological_order() )
  {
    auto const ins = ntk.gate_inputs( g );
    if ( ins.size() < 2u )
    {
      continue;
    }
    bool all_singleton = true;
    for ( auto in : ins )
    {
      all_singleton = all_singleton && bd[in].singleton();
    }
    if ( !all_singleton )
    {
      continue;
    }
    for ( std::size_t i = 1; i < ins.size(); ++i )
    {
      if ( bd[ins[i]].min() != bd[ins[0]].min() )
      {
        report.add( violation_kind::unbalanced_fanin, ntk.gates()[g].id,
                    ntk.net_name( ins[0] ) + "=" + std::to_string( bd[ins[0]].min() ) + " " + ntk.net_name( ins[i] ) + "=" + std::to_string( bd[ins[i]].min() ) );
        break;
      }
    }
  }

  auto const pos = ntk.po_nets();
  if ( !pos.empty() )
  {
    auto const expected = bd[pos[0]].depth();
    for ( auto po : pos )
    {
      if ( bd[po].depth() != expected )
      {
        report.add( violation_kind::unequal_output_depth, ntk.net_name( po ),
                    "depth " + std::to_string( bd[po].depth() ) + ", expected " + std::to_string( expected ) + " (as " + ntk.net_name( pos[0] ) + ")" );
      }
    }
  }
  return report;
}

} // namespace sfqlec
