#include <sfqlec/tech_profile.hpp>

#include <gtest/gtest.h>

using namespace sfqlec;

TEST( tech_profile, builtins )
{
  auto const rsfq = builtin_profile( "rsfq" );
  EXPECT_EQ( rsfq.default_fanout_limit, 1u );
  EXPECT_EQ( rsfq.splitter_fanout_limit, 2u );
  EXPECT_FALSE( rsfq.is_clocked( gate_kind::split ) );
  EXPECT_TRUE( rsfq.is_clocked( gate_kind::dff ) );
  EXPECT_TRUE( builtin_profile( "aqfp" ).is_clocked( gate_kind::split ) );
  auto const cmos = builtin_profile( "cmos" );
  EXPECT_FALSE( cmos.requires_fanout_check );
  EXPECT_FALSE( cmos.is_clocked( gate_kind::and2 ) );
  EXPECT_TRUE( cmos.is_clocked( gate_kind::dff ) );
  EXPECT_THROW( builtin_profile( "ttl" ), profile_error );
}

TEST( tech_profile, file_round_trip )
{
  for ( auto name : { "rsfq", "aqfp", "cmos" } )
  {
    auto const p = builtin_profile( name );
    EXPECT_EQ( load_profile( write_profile( p ) ), p );
  }
}

TEST( tech_profile, load_errors )
{
  std::string const good = "name = x\ndefault_fanout_limit = 1\nsplitter_fanout_limit = 2\nnon_clocked_kinds = SPLIT\n"
                           "requires_path_balancing = true\nrequires_fanout_check = true\n";
  EXPECT_NO_THROW( load_profile( good ) );
  EXPECT_THROW( load_profile( "name = x\n" ), profile_error );
  EXPECT_THROW( load_profile( good + "colour = red\n" ), profile_error );
  EXPECT_THROW( load_profile( good + "name = y\n" ), profile_error );
  auto replace = [&]( std::string const& from, std::string const& to ) {
    auto s = good;
    s.replace( s.find( from ), from.size(), to );
    return s;
  };
  EXPECT_THROW( load_profile( replace( "default_fanout_limit = 1", "default_fanout_limit = 0" ) ), profile_error );
  EXPECT_THROW( load_profile( replace( "default_fanout_limit = 1", "default_fanout_limit = -3" ) ), profile_error );
  EXPECT_THROW( load_profile( replace( "splitter_fanout_limit = 2", "splitter_fanout_limit = 1" ) ), profile_error );
  EXPECT_THROW( load_profile( replace( "SPLIT", "SPLIT, LATCH" ) ), profile_error );
  EXPECT_THROW( load_profile( replace( "= true\nrequires_fanout", "= yes\nrequires_fanout" ) ), profile_error );
  EXPECT_THROW( load_profile( "just words\n" ), profile_error );
}

TEST( tech_profile, empty_kind_list )
{
  auto const p = load_profile( "name = x\ndefault_fanout_limit = 2\nsplitter_fanout_limit = 4\nnon_clocked_kinds =\n"
                               "requires_path_balancing = false\nrequires_fanout_check = true\n" );
  EXPECT_TRUE( p.non_clocked_kinds.empty() );
  EXPECT_EQ( p.default_fanout_limit, 2u );
}
