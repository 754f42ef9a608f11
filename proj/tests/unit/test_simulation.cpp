#include "support/circuits.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sfqlec;

namespace
{
tech_profile const rsfq = builtin_profile( "rsfq" );

std::vector<bool> column( std::vector<std::vector<bool>> const& rows, std::size_t k )
{
  std::vector<bool> out;
  for ( auto const& r : rows )
  {
    out.push_back( r[k] );
  }
  return out;
}
} // namespace

TEST( simulation, single_dff_delays_by_one_cycle )
{
  auto const ntk = parse_netlist( "INPUT(a)\nOUTPUT(y)\ny = DFF(a)\n" );
  auto const out = simulate( ntk, rsfq, { { true }, { false }, { true } } );
  EXPECT_EQ( column( out, 0 ), ( std::vector<bool>{ false, true, false, true, false } ) );
}

TEST( simulation, splitter_is_transparent_under_rsfq )
{
  auto const ntk = parse_netlist( "INPUT(a)\nOUTPUT(y)\nOUTPUT(z)\ns = SPLIT(a)\ny = BUF(s)\nz = INV(s)\n" );
  auto const out = simulate( ntk, rsfq, { { true } } );
  EXPECT_EQ( out[1], ( std::vector<bool>{ true, false } ) );
  auto const aqfp = simulate( ntk, builtin_profile( "aqfp" ), { { true } } );
  EXPECT_EQ( aqfp[2], ( std::vector<bool>{ true, false } ) );
}

TEST( simulation, late_input_wave )
{
  auto const ntk = fixtures::load_sample( "late_input_impl.bench" );
  auto const wave = parse_wave( fixtures::read_sample( "late_input_wave.txt" ), ntk );
  ASSERT_EQ( wave.size(), 4u );
  EXPECT_EQ( wave[1], ( std::vector<bool>{ false, true, true, true } ) );
  auto const out = simulate( ntk, rsfq, wave );
  EXPECT_EQ( column( out, 0 ), ( std::vector<bool>{ false, false, false, true, false, false, false, false } ) );
  EXPECT_EQ( parse_wave( write_wave( wave, ntk ), ntk ), wave );
}

TEST( simulation, wave_errors )
{
  auto const ntk = parse_netlist( "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND2(a, b)\n" );
  EXPECT_THROW( parse_wave( "a=1\n", ntk ), std::invalid_argument );
  EXPECT_THROW( parse_wave( "a=1 b=2\n", ntk ), std::invalid_argument );
  EXPECT_THROW( parse_wave( "a=1 b=0 c=1\n", ntk ), std::invalid_argument );
  EXPECT_THROW( parse_wave( "a=1 a=0 b=1\n", ntk ), std::invalid_argument );
  EXPECT_EQ( parse_wave( "a=1 b=0\n\n\nb=1 a=1\n", ntk ).size(), 2u );
}

TEST( simulation, c17_matches_recursive_evaluation )
{
  auto const c17 = fixtures::load_sample( "c17.bench" );
  auto const table = fixtures::truth_table( c17 );
  for ( uint64_t m = 0; m < table.size(); ++m )
  {
    EXPECT_EQ( evaluate_golden( c17, fixtures::bits_of( m, 5 ) ), table[m] ) << m;
  }
}

TEST( simulation, mapped_circuit_is_a_pipeline )
{
  std::mt19937_64 rng( 13 );
  for ( int i = 0; i < 20; ++i )
  {
    auto const golden = fixtures::random_logic( rng, 5, 15 );
    auto const impl = fixtures::sfq_map( golden );
    auto const depth = clocked_depth( impl, rsfq );
    auto const table = fixtures::truth_table( golden );
    wave_input wave;
    std::vector<uint64_t> applied;
    for ( int k = 0; k < 12; ++k )
    {
      applied.push_back( rng() % table.size() );
      wave.push_back( fixtures::bits_of( applied.back(), golden.num_pis() ) );
    }
    auto const out = simulate( impl, rsfq, wave );
    for ( std::size_t k = 0; k < applied.size(); ++k )
    {
      EXPECT_EQ( out[k + depth], table[applied[k]] );
    }
  }
}

TEST( simulation, golden_evaluation_errors )
{
  auto const golden = fixtures::load_sample( "late_input_golden.bench" );
  EXPECT_THROW( evaluate_golden( golden, std::vector<bool>{ true } ), std::invalid_argument );
  EXPECT_THROW( evaluate_golden( golden, { { "a", true }, { "z", true } } ), std::invalid_argument );
  EXPECT_EQ( evaluate_golden( golden, { { "a", false }, { "b", true }, { "c", true }, { "d", true } } ), std::vector<bool>{ true } );
  EXPECT_THROW( evaluate_golden( fixtures::load_sample( "late_input_impl.bench" ), std::vector<bool>( 4 ) ), std::invalid_argument );
}

TEST( oracle, late_input )
{
  auto const impl = fixtures::load_sample( "late_input_impl.bench" );
  auto const golden = fixtures::load_sample( "late_input_golden.bench" );
  auto const r = exhaustive_equivalence( impl, golden, rsfq, uniform_schedule( impl.primary_inputs() ) );
  EXPECT_FALSE( r.equivalent );
  ASSERT_TRUE( r.witness );
  auto const sim = simulate( impl, rsfq, r.witness->wave );
  EXPECT_EQ( sim[r.witness->observe_cycle][0], r.witness->impl_output );
  EXPECT_EQ( evaluate_golden( golden, r.witness->golden_assignment )[0], r.witness->golden_output );
  EXPECT_NE( r.witness->impl_output, r.witness->golden_output );

  auto const ok = exhaustive_equivalence( impl, golden, rsfq, parse_arrivals( fixtures::read_sample( "late_input_arrivals.txt" ) ) );
  EXPECT_TRUE( ok.equivalent );
}

TEST( oracle, refuses_wide_windows )
{
  auto const golden = fixtures::ripple_adder( 8 );
  auto const impl = fixtures::sfq_map( golden );
  EXPECT_THROW( exhaustive_equivalence( impl, golden, rsfq, uniform_schedule( impl.primary_inputs() ), 12u ), std::invalid_argument );
}
