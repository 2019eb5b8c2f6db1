#include "support.hpp"

#include <mvl/error.hpp>
#include <mvl/metrics.hpp>
#include <mvl/netgen.hpp>

#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace mvl;

TEST_SUITE( "metrics" )
{
  TEST_CASE( "default cost library" )
  {
    auto const lib = default_cost_library();
    CHECK( lib.lookup( GateKind::qm1 ) == 132.0 );
    CHECK( lib.lookup( GateKind::bin_fa ) == 32.0 );
    CHECK( lib.lookup( GateKind::qfac2 ) / lib.lookup( GateKind::bin_fa ) == doctest::Approx( 7.09 ).epsilon( 0.001 ) );
    CHECK( lib.diameters.size() >= 6u );
    CHECK( lib.diameters.at( 19 ).diameter_nm == 1.487 );
    for ( auto k : all_gate_kinds )
    {
      CHECK( lib.lookup( k ) >= 0.0 );
    }
    CostLibrary empty;
    CHECK_THROWS_AS( empty.lookup( GateKind::and2 ), library_error );
  }

  TEST_CASE( "area estimates" )
  {
    auto const lib = default_cost_library();
    CHECK( area_estimate( gen_multiplier( 2, 2 ), lib ) == doctest::Approx( 71.6 ) );
    CHECK( area_estimate( gen_multiplier( 4, 1 ), lib ) == doctest::Approx( 132.0 ) );
    CHECK( area_estimate( gen_multiplier( 4, 4 ), lib ) == doctest::Approx( 16 * 132.0 + 22 * 227.0 + 5 * 83.0 ) );
    CHECK( area_estimate( Netlist{}, lib ) == 0.0 );
    CostLibrary partial;
    partial.sigma_di[GateKind::and2] = 1.0;
    CHECK_THROWS_AS( area_estimate( gen_multiplier( 2, 2 ), partial ), library_error );
  }

  TEST_CASE( "energy is optional" )
  {
    auto lib = default_cost_library();
    auto const n = gen_multiplier( 2, 2 );
    CHECK_FALSE( energy_estimate( n, lib ) );
    lib.energy[GateKind::and2] = 1.0;
    lib.energy[GateKind::bin_ha] = 2.5;
    CHECK( energy_estimate( n, lib ) == doctest::Approx( 9.0 ) );
  }

  TEST_CASE( "area linearity" )
  {
    for ( auto s = 0u; s < 50u; ++s )
    {
      auto const a = test::random_netlist( s, 10u + s );
      auto const b = test::random_netlist( 100u + s, 3u + s % 7u );
      auto const lib = test::random_cost( s );
      CHECK( area_estimate( test::disjoint_union( a, b ), lib ) == doctest::Approx( area_estimate( a, lib ) + area_estimate( b, lib ) ) );
    }
  }

  TEST_CASE( "calibration" )
  {
    auto const lib = calibrate_timing( { { { { GateKind::bin_fa, 14u } }, 312.0 } } );
    CHECK( lib.delay( GateKind::bin_fa, 0 ) == doctest::Approx( 22.2857 ).epsilon( 1e-4 ) );
    CHECK( lib.delay( GateKind::bin_fa, 1 ) == lib.delay( GateKind::bin_fa, 0 ) );

    auto const q = calibrate_timing( { { { { GateKind::qfac2, 7u } }, 646.0 } } );
    CHECK( q.delay( GateKind::qfac2, 0 ) == doctest::Approx( 92.2857 ).epsilon( 1e-4 ) );

    // overdetermined but consistent
    auto const od = calibrate_timing( { { { { GateKind::qha, 2u } }, 10.0 }, { { { GateKind::qha, 4u } }, 20.0 } } );
    CHECK( od.delay( GateKind::qha, 0 ) == doctest::Approx( 5.0 ) );

    CHECK_THROWS_WITH_AS( calibrate_timing( { { { { GateKind::bin_fa, 13u }, { GateKind::bin_ha, 1u } }, 312.0 } } ),
                          doctest::Contains( "BIN_HA" ), library_error );
    CHECK_THROWS_AS( calibrate_timing( {} ), library_error );
  }

  TEST_CASE( "presets" )
  {
    auto const b9 = timing_preset( "paper-0.9V-binary" );
    CHECK( b9.delay( GateKind::bin_fa, 0 ) == doctest::Approx( 312.0 / 14.0 ) );
    CHECK( b9.delay( GateKind::bin_fa, 1 ) == doctest::Approx( 312.0 / 14.0 ) );
    CHECK( b9.delay( GateKind::bin_ha, 0 ) == doctest::Approx( 312.0 / 14.0 ) );
    CHECK( timing_preset( "paper-0.45V-binary" ).delay( GateKind::bin_ha, 1 ) == doctest::Approx( 799.0 / 14.0 ) );
    auto const q = timing_preset( "paper-0.9V-quaternary" );
    CHECK( q.delay( GateKind::qfac2, 1 ) == doctest::Approx( 646.0 / 7.0 ) );
    CHECK( q.delay( GateKind::qfac2wc, 0 ) == doctest::Approx( 646.0 / 7.0 ) );
    CHECK( q.delay( GateKind::qha, 0 ) == doctest::Approx( 646.0 / 7.0 ) );
    CHECK( q.delay( GateKind::qm1, 0 ) == doctest::Approx( 118.0 ) );
    CHECK( q.load.find( "2fF" ) != std::string::npos );
    CHECK_THROWS_AS( timing_preset( "nope" ), library_error );
    CHECK( timing_preset_names().size() == 3u );
  }

  TEST_CASE( "shipped library files match the built-ins" )
  {
    std::filesystem::path const dir = MVL_LIBS_DIR;
    CHECK( load_cost_library( dir / "default.cost" ) == default_cost_library() );
    for ( auto const& name : timing_preset_names() )
    {
      auto const file = load_timing_library( dir / ( name + ".timing" ) );
      auto const builtin = timing_preset( name );
      CHECK( file.name == builtin.name );
      REQUIRE( file.delays.size() == builtin.delays.size() );
      for ( auto const& [key, d] : builtin.delays )
      {
        CHECK( file.delays.at( key ) == doctest::Approx( d ).epsilon( 1e-12 ) );
      }
    }
  }

  TEST_CASE( "critical paths" )
  {
    SUBCASE( "single gate" )
    {
      auto const n = gen_multiplier( 4, 1 );
      auto const p = critical_path( n, timing_preset( "paper-0.9V-quaternary" ) );
      CHECK( p.delay_ps == doctest::Approx( 118.0 ) );
      CHECK( p.gates == std::vector<GateId>{ 0 } );
      CHECK( critical_path( n, timing_preset( "paper-0.9V-quaternary" ), PathScope::reduction_only ).delay_ps == 0.0 );
    }
    SUBCASE( "quaternary 4x4" )
    {
      auto const n = gen_multiplier( 4, 4 );
      auto const lib = timing_preset( "paper-0.9V-quaternary" );
      auto const tree = critical_path( n, lib, PathScope::reduction_only );
      CHECK( tree.delay_ps == doctest::Approx( 646.0 ) );
      CHECK( tree.gates.size() == 7u );
      auto const full = critical_path( n, lib );
      CHECK( full.delay_ps == doctest::Approx( 646.0 + 118.0 ) );
      CHECK( n.gates[full.gates.front()].kind == GateKind::qm1 );
    }
    SUBCASE( "binary 2x2 is two half adders" )
    {
      auto const n = gen_multiplier( 2, 2 );
      auto const p = critical_path( n, timing_preset( "paper-0.9V-binary" ), PathScope::reduction_only );
      CHECK( p.gates.size() == 2u );
      CHECK( p.delay_ps == doctest::Approx( 2 * 312.0 / 14.0 ) );
    }
    SUBCASE( "missing delay" )
    {
      CHECK_THROWS_AS( critical_path( gen_multiplier( 4, 2 ), timing_preset( "paper-0.9V-binary" ) ), library_error );
    }
    SUBCASE( "ties go to the smallest gate ids" )
    {
      // two identical parallel chains: the lower ids win
      NetlistBuilder b( 2, 1 );
      auto const x = b.add_input( "x0" );
      auto const y = b.add_input( "y0" );
      auto const g0 = b.add_gate( GateKind::bin_ha, { x, y }, { 1, 1 }, Phase::other, 0, 0 );
      auto const g1 = b.add_gate( GateKind::bin_ha, { x, y }, { 1, 1 }, Phase::other, 0, 0 );
      b.set_outputs( { g1.outputs[0], g0.outputs[1] } );
      auto const n = std::move( b ).build();
      TimingLibrary lib;
      lib.set_all( GateKind::bin_ha, 5.0 );
      CHECK( critical_path( n, lib ).gates == std::vector<GateId>{ 0 } );
    }
  }

  TEST_CASE( "path scaling and monotonicity on random netlists" )
  {
    for ( auto s = 0u; s < 60u; ++s )
    {
      auto n = test::random_netlist( 77u + s, 4u + s );
      auto const lib = test::random_timing( s );
      auto const p = critical_path( n, lib );
      auto const k = 0.5 + 0.25 * ( s % 9u );
      auto const q = critical_path( n, lib.scaled( k ) );
      CHECK( q.delay_ps == doctest::Approx( k * p.delay_ps ) );
      CHECK( q.gates == p.gates );

      if ( !p.gates.empty() )
      {
        // a buffer behind a path gate, then one in front of the first
        auto const& g = n.gates[p.gates[s % p.gates.size()]];
        auto m = n;
        test::insert_buffer( m, g.outputs[0] );
        CHECK( critical_path( m, lib ).delay_ps >= p.delay_ps - 1e-9 );
        auto m2 = n;
        test::insert_buffer( m2, n.gates[p.gates.front()].inputs[0] );
        CHECK( critical_path( m2, lib ).delay_ps >= p.delay_ps - 1e-9 );
      }
    }
  }

  TEST_CASE( "comparison" )
  {
    auto const q = gen_multiplier( 4, 4 );
    auto const b = gen_multiplier( 2, 8 );
    auto const cost = default_cost_library();
    auto const r = compare( { { "q", &q, cost, timing_preset( "paper-0.9V-quaternary" ) },
                              { "b", &b, cost, timing_preset( "paper-0.9V-binary" ) } } );
    REQUIRE( r.pairs.size() == 1u );
    CHECK( r.pairs[0].area_ratio == doctest::Approx( r.designs[0].area_nm / r.designs[1].area_nm ) );
    CHECK( format_ratio( r.pairs[0].area_ratio ) == "x3.2" );
    CHECK( r.pairs[0].area_winner == Winner::second );
    CHECK( *r.pairs[0].delay_ratio == doctest::Approx( r.designs[0].path.delay_ps / r.designs[1].path.delay_ps ) );

    auto const self = compare( { { "a", &q, cost, timing_preset( "paper-0.9V-quaternary" ) },
                                 { "b", &q, cost, timing_preset( "paper-0.9V-quaternary" ) } } );
    CHECK( self.pairs[0].area_ratio == 1.0 );
    CHECK( *self.pairs[0].delay_ratio == 1.0 );
    CHECK( self.pairs[0].area_winner == Winner::tie );

    CHECK_THROWS_AS( compare( { { "a", &q, cost, timing_preset( "paper-0.9V-quaternary" ) } } ), error );

    auto const md = to_markdown( r );
    CHECK( md.find( "| q | radix4-4x4 |" ) != std::string::npos );
    auto const csv = to_csv( r );
    CHECK( csv.rfind( "record,subject,metric,value\n", 0 ) == 0u );
    CHECK( csv.find( "pair,q/b,area_ratio," ) != std::string::npos );
    CHECK( to_json( r ).find( "\"area_ratio\"" ) != std::string::npos );
  }

  TEST_CASE( "component ratios" )
  {
    auto const c = component_ratios( default_cost_library(), gen_multiplier( 4, 4 ), gen_multiplier( 2, 8 ) );
    CHECK( c.ha_area == doctest::Approx( 83.0 / 18.0 ) );
    CHECK( c.fa_area == doctest::Approx( 227.0 / 32.0 ) );
    CHECK( c.fa_count == doctest::Approx( 22.0 / 47.0 ) );
  }

  TEST_CASE( "library files" )
  {
    auto const cost = default_cost_library();
    CHECK( parse_cost_library( write_cost_library( cost ) ) == cost );
    auto const t = timing_preset( "paper-0.9V-quaternary" );
    CHECK( parse_timing_library( write_timing_library( t ) ) == t );

    auto const lib = parse_timing_library( "# test\ntype = timing\nname = t\nload = 5fF\ndelay.BIN_FA.sum = 1\ndelay.BIN_FA.cout = 2.5\n" );
    CHECK( lib.delay( GateKind::bin_fa, 0 ) == 1.0 );
    CHECK( lib.delay( GateKind::bin_fa, 1 ) == 2.5 );
    CHECK( lib.load == "5fF" );

    CHECK_THROWS_AS( parse_timing_library( "delay.XOR = 1\n" ), format_error );
    CHECK_THROWS_AS( parse_timing_library( "delay.BIN_FA.nope = 1\n" ), format_error );
    CHECK_THROWS_AS( parse_timing_library( "delay.BIN_FA = -1\n" ), format_error );
    CHECK_THROWS_AS( parse_timing_library( "type = cost\n" ), format_error );
    CHECK_THROWS_AS( parse_cost_library( "sigma_di.AND = x\n" ), format_error );
    CHECK_THROWS_AS( parse_cost_library( "sigma_di.AND = -2\n" ), format_error );
    CHECK_THROWS_AS( parse_cost_library( "diameter.8 = 1\n" ), format_error );
    CHECK_THROWS_AS( parse_cost_library( "just words\n" ), format_error );
    CHECK_THROWS_AS( load_cost_library( "/nonexistent/x.cost" ), std::ios_base::failure );
  }

  TEST_CASE( "MVL_DEFAULT_LIBS overrides presets by name" )
  {
    auto const dir = std::filesystem::temp_directory_path() / "mvl_env_test";
    std::filesystem::create_directories( dir );
    {
      std::ofstream( dir / "t.timing" ) << "type = timing\nname = paper-0.9V-binary\ndelay.BIN_FA = 1\ndelay.BIN_HA = 1\ndelay.AND = 0\n";
      std::ofstream( dir / "c.cost" ) << "type = cost\nname = default\nsigma_di.AND = 2\n";
    }
    auto const value = ( dir / "t.timing" ).string() + ":" + ( dir / "c.cost" ).string();
    setenv( "MVL_DEFAULT_LIBS", value.c_str(), 1 );
    CHECK( timing_preset( "paper-0.9V-binary" ).delay( GateKind::bin_fa, 0 ) == 1.0 );
    CHECK( timing_preset( "paper-0.9V-quaternary" ).delay( GateKind::qm1, 0 ) == doctest::Approx( 118.0 ) );
    CHECK( cost_preset().lookup( GateKind::and2 ) == 2.0 );
    unsetenv( "MVL_DEFAULT_LIBS" );
    CHECK( timing_preset( "paper-0.9V-binary" ).delay( GateKind::bin_fa, 0 ) == doctest::Approx( 312.0 / 14.0 ) );
    std::filesystem::remove_all( dir );
  }
}
