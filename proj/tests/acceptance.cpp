// Acceptance runner: one PASS/FAIL line per criterion, details indented.
// `--criterion N` runs a single criterion; the exit code is nonzero when any
// selected criterion fails.

#include "support.hpp"

#include <mvl/metrics.hpp>
#include <mvl/netgen.hpp>
#include <mvl/sim.hpp>

#include "CLI11.hpp"
#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <map>

using namespace mvl;

namespace
{

struct Check
{
  std::vector<std::string> lines;
  bool ok = true;

  void expect( bool cond, std::string line )
  {
    lines.push_back( fmt::format( "{} {}", cond ? "ok  " : "FAIL", line ) );
    ok = ok && cond;
  }
};

bool within( double got, double want, double rel )
{
  return std::abs( got - want ) <= rel * std::abs( want );
}

Netlist const& design( unsigned radix, unsigned width )
{
  static std::map<std::pair<unsigned, unsigned>, Netlist> cache;
  auto it = cache.find( { radix, width } );
  if ( it == cache.end() )
  {
    it = cache.emplace( std::pair{ radix, width }, gen_multiplier( radix, width ) ).first;
  }
  return it->second;
}

std::vector<std::pair<unsigned, unsigned>> const designs = { { 2, 2 }, { 2, 4 }, { 2, 8 }, { 4, 1 }, { 4, 2 }, { 4, 4 } };

Check functional()
{
  Check c;
  auto const start = std::chrono::steady_clock::now();
  for ( auto [r, w] : designs )
  {
    auto const rep = verify_exhaustive( design( r, w ), { std::uint64_t{ 1 } << 16, 4u } );
    c.expect( rep.passed(), fmt::format( "{} exhaustive: {} vectors, {} mismatches", rep.design_id, rep.vectors, rep.mismatches.size() ) );
  }
  auto const secs = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
  c.expect( secs < 60.0, fmt::format( "exhaustive runtime {:.2f} s (< 60 s)", secs ) );

  // product table of the 1x1 quit multiplier as (carry, product) per row a, column b
  constexpr unsigned table[4][4][2] = { { { 0, 0 }, { 0, 0 }, { 0, 0 }, { 0, 0 } },
                                        { { 0, 0 }, { 0, 1 }, { 0, 2 }, { 0, 3 } },
                                        { { 0, 0 }, { 0, 2 }, { 1, 0 }, { 1, 2 } },
                                        { { 0, 0 }, { 0, 3 }, { 1, 2 }, { 2, 1 } } };
  Evaluator eval( design( 4, 1 ) );
  unsigned rows = 0;
  for ( auto a = 0u; a < 4u; ++a )
  {
    for ( auto b = 0u; b < 4u; ++b )
    {
      std::uint8_t const in[2] = { static_cast<std::uint8_t>( a ), static_cast<std::uint8_t>( b ) };
      auto const got = eval( in );
      rows += got[0] == table[a][b][1] && got[1] == table[a][b][0];
    }
  }
  c.expect( rows == 16u, fmt::format( "radix4-1x1 reproduces the quit product table: {}/16 rows", rows ) );
  return c;
}

Check inventories()
{
  Check c;
  auto const describe = []( Netlist const& n ) { return format_inventory( GateInventory( n ) ); };

  GateInventory const b4( design( 2, 4 ) );
  c.expect( b4.count( GateKind::and2 ) == 16u && b4.count( GateKind::bin_ha ) == 6u && b4.count( GateKind::bin_fa ) == 7u,
            fmt::format( "radix2-4x4 {} (want AND:16, BIN_HA:6, BIN_FA:7)", describe( design( 2, 4 ) ) ) );

  GateInventory const b8( design( 2, 8 ) );
  c.expect( b8.count( GateKind::and2 ) == 64u && b8.count( GateKind::bin_fa ) == 47u && b8.count( GateKind::bin_ha ) == 16u,
            fmt::format( "radix2-8x8 {} (want AND:64, BIN_FA:47, BIN_HA:16)", describe( design( 2, 8 ) ) ) );
  auto const tree_fa = b8.count( GateKind::bin_fa, Phase::reduction ), tree_ha = b8.count( GateKind::bin_ha, Phase::reduction );
  auto const cpa_fa = b8.count( GateKind::bin_fa, Phase::final_add ), cpa_ha = b8.count( GateKind::bin_ha, Phase::final_add );
  c.expect( tree_fa == 38u && tree_ha == 15u, fmt::format( "radix2-8x8 reduction tree {} FA + {} HA (want 38 + 15)", tree_fa, tree_ha ) );
  c.expect( cpa_fa == 9u && cpa_ha == 1u, fmt::format( "radix2-8x8 final add {} FA + {} HA (want 9 + 1)", cpa_fa, cpa_ha ) );

  GateInventory const q4( design( 4, 4 ) );
  c.expect( q4.count( GateKind::qm1 ) == 16u && q4.quaternary_full_adders() == 22u && q4.count( GateKind::qha ) == 5u,
            fmt::format( "radix4-4x4 {} (want QM1:16, QFAC2 incl. WC:22, QHA:5)", describe( design( 4, 4 ) ) ) );
  return c;
}

Check areas()
{
  Check c;
  auto const lib = default_cost_library();
  auto const area = [&]( unsigned r, unsigned w ) { return area_estimate( design( r, w ), lib ); };
  struct Target
  {
    unsigned r, w;
    double paper;
  };
  for ( auto const& t : { Target{ 2, 2, 71 }, Target{ 4, 1, 132 }, Target{ 2, 8, 2377 }, Target{ 4, 4, 7530 } } )
  {
    auto const a = area( t.r, t.w );
    c.expect( within( a, t.paper, 0.02 ), fmt::format( "{} area {:.1f} nm vs {} ({:+.2f}%, tolerance 2%)", design( t.r, t.w ).design_id(),
                                                        a, t.paper, 100.0 * ( a - t.paper ) / t.paper ) );
  }
  struct Ratio
  {
    unsigned qw, bw;
    double paper;
  };
  for ( auto const& t : { Ratio{ 1, 2, 1.9 }, Ratio{ 2, 4, 2.8 }, Ratio{ 4, 8, 3.2 } } )
  {
    auto const r = area( 4, t.qw ) / area( 2, t.bw );
    c.expect( within( r, t.paper, 0.10 ), fmt::format( "area ratio radix4-{0}x{0} / radix2-{1}x{1} = {2:.3f} vs x{3} (tolerance 10%)", t.qw, t.bw, r, t.paper ) );
  }
  return c;
}

Check paths()
{
  Check c;
  struct Target
  {
    unsigned r, w;
    char const* preset;
    double paper;
  };
  for ( auto const& t : { Target{ 2, 8, "paper-0.9V-binary", 312 }, Target{ 2, 8, "paper-0.45V-binary", 799 },
                          Target{ 4, 4, "paper-0.9V-quaternary", 646 } } )
  {
    auto const p = critical_path( design( t.r, t.w ), timing_preset( t.preset ), PathScope::reduction_only );
    c.expect( std::abs( p.delay_ps - t.paper ) <= 1.0, fmt::format( "{} @ {}: {:.1f} ps over {} gates vs {} ps (tolerance 1 ps)",
                                                                     design( t.r, t.w ).design_id(), t.preset, p.delay_ps, p.gates.size(), t.paper ) );
  }

  auto const& q = design( 4, 4 );
  auto const p = critical_path( q, timing_preset( "paper-0.9V-quaternary" ), PathScope::reduction_only );
  std::map<std::pair<Phase, GateKind>, unsigned> mix;
  std::string seq;
  for ( auto g : p.gates )
  {
    auto k = q.gates[g].kind;
    seq += fmt::format( "{}{}", seq.empty() ? "" : " > ", to_string( k ) );
    ++mix[{ q.gates[g].phase, k == GateKind::qfac2wc ? GateKind::qfac2 : k }];
  }
  bool const composed = p.gates.size() == 7u && mix[{ Phase::reduction, GateKind::qfac2 }] == 4u &&
                        mix[{ Phase::final_add, GateKind::qha }] == 1u && mix[{ Phase::final_add, GateKind::qfac2 }] == 2u;
  c.expect( composed, fmt::format( "radix4-4x4 path is 4 QFAC2 in the tree + QHA + 2 QFAC2 in the final add: {}", seq ) );
  return c;
}

Check properties()
{
  Check c;
  for ( auto [r, w] : designs )
  {
    auto const& n = design( r, w );
    auto const rep = verify_random( n, 10000u, 2024u, { std::uint64_t{ 1 } << 20, 4u } );
    std::size_t faults = 0;
    for ( auto const& m : rep.mismatches )
    {
      faults += !m.reason.empty();
    }
    c.expect( rep.passed() && faults == 0u, fmt::format( "{} 10000 random vectors (seed 2024): {} range faults, {} mismatches",
                                                         n.design_id(), faults, rep.mismatches.size() ) );

    std::size_t bad_carry = 0;
    for ( auto const& g : n.gates )
    {
      if ( auto const port = carry_in_port( g.kind ) )
      {
        bad_carry += n.wires[g.inputs[*port]].range_max > 2u;
      }
    }
    c.expect( bad_carry == 0u, fmt::format( "{}: {} quaternary wires on carry-in ports", n.design_id(), bad_carry ) );
  }

  for ( auto [r, w] : { std::pair{ 2u, 8u }, std::pair{ 4u, 4u } } )
  {
    GenerationTrace trace;
    gen_multiplier( r, w, &trace );
    c.expect( trace.stages == 4u, fmt::format( "radix{}-{}x{} reduces its 8 rows in {} stages (want 4)", r, w, w, trace.stages ) );
  }

  unsigned linear = 0, invariant = 0;
  constexpr unsigned trials = 200;
  for ( auto s = 0u; s < trials; ++s )
  {
    auto const a = test::random_netlist( 1000u + s, 5u + s % 40u );
    auto const b = test::random_netlist( 5000u + s, 5u + s % 23u );
    auto const cost = test::random_cost( s );
    auto const sum = area_estimate( a, cost ) + area_estimate( b, cost );
    linear += within( area_estimate( test::disjoint_union( a, b ), cost ), sum, 1e-12 );

    auto const lib = test::random_timing( s );
    auto const k = 0.25 + 0.37 * ( s % 11u );
    auto const p = critical_path( a, lib );
    auto const q = critical_path( a, lib.scaled( k ) );
    invariant += within( q.delay_ps, k * p.delay_ps, 1e-9 ) && q.gates == p.gates;
  }
  c.expect( linear == trials, fmt::format( "area linearity over disjoint unions: {}/{} random pairs", linear, trials ) );
  c.expect( invariant == trials, fmt::format( "path scaling keeps the argmax path: {}/{} random netlists", invariant, trials ) );
  return c;
}

Check ratios()
{
  Check c;
  auto const cr = component_ratios( default_cost_library(), design( 4, 4 ), design( 2, 8 ) );
  c.expect( within( cr.ha_area, 4.6, 0.02 ), fmt::format( "HA area ratio QHA/BIN_HA = {:.3f} vs 4.6", cr.ha_area ) );
  c.expect( within( cr.fa_area, 7.1, 0.02 ), fmt::format( "FA area ratio QFAC2/BIN_FA = {:.3f} vs 7.1", cr.fa_area ) );
  c.expect( within( cr.ha_count, 0.31, 0.02 ), fmt::format( "HA count ratio radix4-4x4 / radix2-8x8 = {:.3f} vs 0.31", cr.ha_count ) );
  c.expect( within( cr.fa_count, 0.47, 0.02 ), fmt::format( "FA count ratio radix4-4x4 / radix2-8x8 = {:.3f} vs 0.47", cr.fa_count ) );
  return c;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Acceptance criteria" };
  unsigned only = 0;
  app.add_option( "--criterion", only, "Run one criterion (1-6)" )->check( CLI::Range( 1u, 6u ) );
  CLI11_PARSE( app, argc, argv );

  struct Criterion
  {
    char const* title;
    std::function<Check()> run;
  };
  std::vector<Criterion> const all = { { "functional correctness (oracle equivalence)", functional },
                                       { "gate-inventory reproduction", inventories },
                                       { "area reproduction", areas },
                                       { "critical-path composition", paths },
                                       { "property suite", properties },
                                       { "component ratio table", ratios } };
  bool ok = true;
  for ( auto i = 0u; i < all.size(); ++i )
  {
    if ( only != 0u && only != i + 1u )
    {
      continue;
    }
    Check c;
    try
    {
      c = all[i].run();
    }
    catch ( std::exception const& e )
    {
      c.expect( false, fmt::format( "exception: {}", e.what() ) );
    }
    fmt::print( "[{}] C{} {}\n", c.ok ? "PASS" : "FAIL", i + 1u, all[i].title );
    for ( auto const& l : c.lines )
    {
      fmt::print( "       {}\n", l );
    }
    ok = ok && c.ok;
  }
  return ok ? 0 : 1;
}
