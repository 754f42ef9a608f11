/*!
  \file flow.hpp
  \brief End-to-end runs: structural checks, MCID, ITCL, miter and verdict

  Every runner returns the exit status together with the reports, so the
  command-line tool only does file handling.  Reports contain no timings
  unless asked for, which keeps repeated runs byte-identical.
*/

#pragma once

#include "equivalence.hpp"
#include "itcl.hpp"
#include "mcid.hpp"
#include "netlist.hpp"
#include "structural_checks.hpp"
#include "tech_profile.hpp"

#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sfqlec
{

namespace exit_code
{
inline constexpr int equivalent = 0;
inline constexpr int inequivalent = 1;
inline constexpr int input_error = 2;
inline constexpr int structural_rejection = 3;
inline constexpr int unknown = 4;
} // namespace exit_code

struct flow_options
{
  bool po_only{ false };
  bool per_output{ false };
  bool timings{ false };
  sat_limits limits;
  /*! \brief Also produce the DIMACS encoding of the whole miter. */
  bool want_cnf{ false };
  /*! \brief Also produce the bench-style MCID dump (after ITCL). */
  bool want_mcid{ false };
};

struct flow_outcome
{
  int status{ exit_code::equivalent };
  /*! \brief Human-readable report. */
  std::string report;
  /*! \brief Tab-separated `stage status count millis` records. */
  std::string records;
  /*! \brief `VIOLATION ...` lines of the structural checks. */
  std::string violations;
  std::optional<verdict> result;
  std::optional<std::string> trace;
  std::optional<std::string> cnf;
  std::optional<std::string> mcid_dump;
};

namespace detail
{

class stage_log
{
public:
  explicit stage_log( bool timings ) : timings_( timings ), last_( std::chrono::steady_clock::now() ) {}

  void record( std::string const& stage, std::string const& status, std::size_t count )
  {
    auto const now = std::chrono::steady_clock::now();
    auto const ms = std::chrono::duration<double, std::milli>( now - last_ ).count();
    last_ = now;
    records_ << stage << "\t" << status << "\t" << count << "\t";
    if ( timings_ )
    {
      char buf[32];
      std::snprintf( buf, sizeof( buf ), "%.3f", ms );
      records_ << buf;
      timing_lines_ << "  " << stage << ": " << buf << " ms\n";
    }
    else
    {
      records_ << "-";
    }
    records_ << "\n";
  }

  std::string records() const { return records_.str(); }
  std::string timing_lines() const { return timings_ ? "timings:\n" + timing_lines_.str() : std::string{}; }

private:
  bool timings_;
  std::chrono::steady_clock::time_point last_;
  std::ostringstream records_;
  std::ostringstream timing_lines_;
};

inline std::string header( netlist const& impl, tech_profile const& profile )
{
  return "design: " + impl.name() + "\nprofile: " + profile.name + "\n";
}

} // namespace detail

inline flow_outcome run_check_structure( netlist const& impl, tech_profile const& profile, flow_options const& options = {} )
{
  flow_outcome out;
  detail::stage_log log( options.timings );
  std::ostringstream os;
  os << detail::header( impl, profile );

  auto const fanout = check_fanout( impl, profile );
  log.record( "fanout", fanout.passed ? "pass" : "fail", fanout.violations.size() );
  auto const balance = check_path_balance( impl, profile, { options.po_only } );
  log.record( "path_balance", balance.passed ? "pass" : "fail", balance.violations.size() );

  os << format_human( fanout, "fanout check" ) << format_human( balance, "path balance" );
  out.violations = format_records( fanout ) + format_records( balance );
  out.status = fanout.passed && balance.passed ? exit_code::equivalent : exit_code::structural_rejection;
  os << "result: " << ( out.status == exit_code::equivalent ? "structurally valid" : "rejected" ) << "\n";
  os << log.timing_lines();
  out.report = os.str();
  out.records = log.records();
  return out;
}

inline flow_outcome run_build_mcid( netlist const& impl, tech_profile const& profile, std::optional<arrival_schedule> const& schedule,
                                    flow_options const& options = {} )
{
  flow_outcome out;
  detail::stage_log log( options.timings );
  std::ostringstream os;
  os << detail::header( impl, profile );

  auto mcid = build_mcid( impl, profile );
  auto const added = count_added_gates( mcid, impl, profile );
  log.record( "mcid", "ok", mcid.num_gates() );
  os << "gates: implementation " << impl.num_gates() << ", MCID " << mcid.num_gates();
  os << ( added == 0 ? " (no duplication)" : " (" + std::to_string( added ) + " duplicated)" ) << "\n";
  if ( !mcid.timed_inputs().empty() )
  {
    auto const w = input_window( mcid );
    os << "input window: steps " << w.earliest << " .. " << w.latest << "\n";
  }
  if ( schedule )
  {
    auto const before = mcid.num_gates();
    mcid = apply_itcl( mcid, *schedule );
    log.record( "itcl", "ok", mcid.num_gates() - before );
    os << "ITCL buffers: " << mcid.num_gates() - before << "\n";
  }
  os << log.timing_lines();
  out.mcid_dump = write_mcid( mcid );
  out.report = os.str();
  out.records = log.records();
  return out;
}

/*! \brief Full verification pipeline.
 *
 * A fanout violation rejects the design (exit 3) before any MCID work; a
 * path-balance violation is only reported, since partially balanced designs
 * can still be correct.
 */
inline flow_outcome run_verify( netlist const& impl, netlist const& golden, tech_profile const& profile,
                                std::optional<arrival_schedule> const& schedule, flow_options const& options = {} )
{
  flow_outcome out;
  detail::stage_log log( options.timings );
  std::ostringstream os;
  os << detail::header( impl, profile ) << "golden: " << golden.name() << "\n";

  auto const fanout = check_fanout( impl, profile );
  log.record( "fanout", fanout.passed ? "pass" : "fail", fanout.violations.size() );
  os << format_human( fanout, "fanout check" );
  out.violations = format_records( fanout );
  if ( !fanout.passed )
  {
    out.status = exit_code::structural_rejection;
    os << "result: rejected before verification\n" << log.timing_lines();
    out.report = os.str();
    out.records = log.records();
    return out;
  }

  auto const balance = check_path_balance( impl, profile, { options.po_only } );
  log.record( "path_balance", balance.passed ? "pass" : "warn", balance.violations.size() );
  os << format_human( balance, "path balance" );
  if ( !balance.passed )
  {
    os << "warning: not fully path-balanced, verifying through the MCID model\n";
  }
  out.violations += format_records( balance );

  auto mcid = build_mcid( impl, profile );
  auto const added = count_added_gates( mcid, impl, profile );
  log.record( "mcid", "ok", mcid.num_gates() );
  os << "gates: golden " << count_logic_gates( golden ) << ", implementation " << impl.num_gates() << ", MCID " << mcid.num_gates();
  os << ( added == 0 ? " (no duplication)" : " (" + std::to_string( added ) + " duplicated)" ) << "\n";

  auto const sched = schedule ? *schedule : uniform_schedule( impl.primary_inputs() );
  auto const before = mcid.num_gates();
  mcid = apply_itcl( mcid, sched );
  log.record( "itcl", "ok", mcid.num_gates() - before );
  if ( schedule )
  {
    os << "ITCL buffers: " << mcid.num_gates() - before << "\n";
  }
  if ( options.want_mcid )
  {
    out.mcid_dump = write_mcid( mcid );
  }

  auto const matching = match_inputs( mcid, golden );
  os << "matched step: " << matching.t_star << ", free inputs: " << matching.free_inputs.size();
  if ( !matching.golden_only.empty() )
  {
    os << ", golden-only inputs:";
    for ( auto const& pi : matching.golden_only )
    {
      os << " " << pi;
    }
  }
  os << "\n";

  auto const miter = build_miter( mcid, golden, matching );
  log.record( "miter", "ok", miter.graph.num_ands() );
  if ( options.want_cnf )
  {
    out.cnf = write_dimacs( encode_cnf( miter, miter.root ).formula );
  }

  auto const v = check_equivalence( miter, { options.limits, options.per_output } );
  log.record( "solve", std::string( to_string( v.status ) ), v.stats.decisions );
  os << "miter: " << v.stats.nodes << " AND nodes, " << v.stats.clauses << " clauses, " << v.stats.decisions << " decisions, "
     << v.stats.conflicts << " conflicts\n";
  os << "verdict: " << to_string( v.status ) << "\n";
  if ( v.trace )
  {
    out.trace = format_trace( *v.trace );
    os << "trace:\n" << *out.trace;
  }
  os << log.timing_lines();

  out.status = v.status == verdict_status::equivalent     ? exit_code::equivalent
               : v.status == verdict_status::inequivalent ? exit_code::inequivalent
                                                          : exit_code::unknown;
  out.result = v;
  out.report = os.str();
  out.records = log.records();
  return out;
}

} // namespace sfqlec
