#include <sfqlec/sfqlec.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace sfqlec;

namespace
{

struct arguments
{
  std::string impl;
  std::string golden;
  std::string profile{ "rsfq" };
  std::string arrivals;
  std::string wave;
  std::string report;
  std::string tsv;
  std::string trace;
  std::string cnf;
  std::string output;
  std::string kind;
  std::string target{ "random" };
  std::string replacement;
  uint64_t seed{ 0u };
  uint64_t max_conflicts{ 0u };
  double time_limit{ 0.0 };
  bool near_outputs{ false };
  bool per_output{ false };
  bool po_only{ false };
  bool timings{ false };
};

tech_profile resolve_profile( std::string const& name_or_path )
{
  if ( name_or_path == "rsfq" || name_or_path == "aqfp" || name_or_path == "cmos" )
  {
    return builtin_profile( name_or_path );
  }
  return load_profile( read_text_file( name_or_path ) );
}

void write_file( std::string const& path, std::string const& text )
{
  std::ofstream os( path, std::ios::binary );
  if ( !os )
  {
    throw std::runtime_error( "cannot write '" + path + "'" );
  }
  os << text;
}

int emit( flow_outcome const& out, arguments const& args )
{
  std::cout << out.report;
  if ( !args.report.empty() )
  {
    write_file( args.report, out.report );
  }
  if ( !args.tsv.empty() )
  {
    write_file( args.tsv, out.records + out.violations );
  }
  if ( !args.trace.empty() && out.trace )
  {
    write_file( args.trace, *out.trace );
  }
  if ( !args.cnf.empty() && out.cnf )
  {
    write_file( args.cnf, *out.cnf );
  }
  if ( !args.output.empty() && out.mcid_dump )
  {
    write_file( args.output, *out.mcid_dump );
  }
  return out.status;
}

std::optional<arrival_schedule> schedule_of( arguments const& args )
{
  if ( args.arrivals.empty() )
  {
    return std::nullopt;
  }
  return parse_arrivals( read_text_file( args.arrivals ) );
}

flow_options options_of( arguments const& args )
{
  flow_options o;
  o.po_only = args.po_only;
  o.per_output = args.per_output;
  o.timings = args.timings;
  o.limits = { args.max_conflicts, args.time_limit };
  o.want_cnf = !args.cnf.empty();
  o.want_mcid = !args.output.empty();
  return o;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Equivalence checking for clocked superconducting netlists" };
  app.require_subcommand( 1 );
  arguments args;

  auto add_profile = [&]( CLI::App* cmd ) {
    cmd->add_option( "--profile", args.profile, "rsfq, aqfp, cmos or a profile file" );
  };
  auto add_reports = [&]( CLI::App* cmd ) {
    cmd->add_option( "--report", args.report, "write the report to a file as well" );
    cmd->add_option( "--tsv", args.tsv, "write stage records (stage, status, count, millis) and violations" );
    cmd->add_flag( "--timings", args.timings, "include stage timings" );
  };

  auto* check = app.add_subcommand( "check-structure", "fanout and path-balance checks" );
  check->add_option( "netlist", args.impl )->required();
  add_profile( check );
  add_reports( check );
  check->add_flag( "--po-only", args.po_only, "only compare output base distances" );

  auto* mcid = app.add_subcommand( "build-mcid", "dump the MCID model" );
  mcid->add_option( "netlist", args.impl )->required();
  add_profile( mcid );
  add_reports( mcid );
  mcid->add_option( "--arrivals", args.arrivals, "arrival schedule (name = cycle)" );
  mcid->add_option( "-o,--output", args.output, "MCID dump file (default: stdout)" );

  auto* verify = app.add_subcommand( "verify", "check an implementation against a golden netlist" );
  verify->add_option( "netlist", args.impl )->required();
  verify->add_option( "golden", args.golden )->required();
  add_profile( verify );
  add_reports( verify );
  verify->add_option( "--arrivals", args.arrivals, "arrival schedule (name = cycle)" );
  verify->add_flag( "--per-output", args.per_output, "solve one output at a time" );
  verify->add_flag( "--po-only", args.po_only, "only compare output base distances" );
  verify->add_option( "--max-conflicts", args.max_conflicts, "solver conflict limit (0: none)" );
  verify->add_option( "--time-limit", args.time_limit, "solver time limit in seconds (0: none)" );
  verify->add_option( "--trace", args.trace, "counterexample file" );
  verify->add_option( "--cnf", args.cnf, "DIMACS export of the miter" );
  verify->add_option( "--mcid", args.output, "MCID dump (after ITCL)" );

  auto* fault = app.add_subcommand( "inject-fault", "insert a functional or structural error" );
  fault->add_option( "netlist", args.impl )->required();
  fault->add_option( "--kind", args.kind, "SwapGate, RemoveDff or RemoveSplitter" )->required();
  fault->add_option( "--target", args.target, "gate id or random" );
  fault->add_option( "--replacement", args.replacement, "new kind for SwapGate" );
  fault->add_option( "--seed", args.seed );
  fault->add_flag( "--near-outputs", args.near_outputs, "RemoveDff among the deepest quarter of DFFs" );
  fault->add_option( "-o,--output", args.output, "mutated netlist (default: stdout); description goes to <output>.fault" );

  auto* sim = app.add_subcommand( "simulate", "cycle-by-cycle simulation" );
  sim->add_option( "netlist", args.impl )->required();
  sim->add_option( "--wave", args.wave, "per-cycle name=bit lines, cycles separated by blank lines" )->required();
  add_profile( sim );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::CallForHelp const& e )
  {
    return app.exit( e );
  }
  catch ( CLI::ParseError const& e )
  {
    app.exit( e );
    return exit_code::input_error;
  }

  try
  {
    auto const impl = read_netlist_file( args.impl );

    if ( *check )
    {
      return emit( run_check_structure( impl, resolve_profile( args.profile ), options_of( args ) ), args );
    }
    if ( *mcid )
    {
      auto out = run_build_mcid( impl, resolve_profile( args.profile ), schedule_of( args ), options_of( args ) );
      if ( args.output.empty() )
      {
        std::cout << *out.mcid_dump;
      }
      std::cerr << out.report;
      out.report.clear();
      return emit( out, args );
    }
    if ( *verify )
    {
      auto const golden = read_netlist_file( args.golden );
      return emit( run_verify( impl, golden, resolve_profile( args.profile ), schedule_of( args ), options_of( args ) ), args );
    }
    if ( *fault )
    {
      fault_spec spec;
      auto const kind = fault_kind_from_string( args.kind );
      if ( !kind )
      {
        throw std::invalid_argument( "unknown fault kind '" + args.kind + "'" );
      }
      spec.kind = *kind;
      spec.target = args.target;
      spec.seed = args.seed;
      spec.near_outputs = args.near_outputs;
      if ( !args.replacement.empty() )
      {
        spec.replacement = gate_kind_from_string( args.replacement );
        if ( !spec.replacement )
        {
          throw std::invalid_argument( "unknown gate kind '" + args.replacement + "'" );
        }
      }
      auto const r = inject( impl, spec );
      if ( args.output.empty() )
      {
        std::cout << write_netlist( r.mutated );
      }
      else
      {
        write_file( args.output, write_netlist( r.mutated ) );
        write_file( args.output + ".fault", r.description + "\n" );
      }
      std::cerr << r.description << "\n";
      return 0;
    }
    if ( *sim )
    {
      auto const wave = parse_wave( read_text_file( args.wave ), impl );
      std::cout << format_simulation( impl, simulate( impl, resolve_profile( args.profile ), wave ) );
      return 0;
    }
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::input_error;
  }
  return exit_code::input_error;
}
