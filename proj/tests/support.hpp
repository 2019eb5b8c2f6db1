#pragma once

// Helpers shared by the unit tests and the acceptance runner: random
// netlists and libraries, disjoint union, and path edits.

#include <mvl/metrics.hpp>
#include <mvl/netlist.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <random>
#include <vector>

namespace mvl::test
{

/// Random DAG of `gates` gates over 2*width quaternary inputs. Every port is
/// fed a wire whose range fits it; product digits are picked from the pool.
inline Netlist random_netlist( std::uint64_t seed, unsigned gates, unsigned width = 2u )
{
  std::mt19937_64 rng( seed );
  auto pick = [&]( std::size_t n ) { return static_cast<std::size_t>( rng() % n ); };

  NetlistBuilder b( 4u, width );
  std::vector<WireId> pool;
  for ( auto i = 0u; i < 2u * width; ++i )
  {
    pool.push_back( b.add_input( fmt::format( "i{}", i ) ) );
  }

  auto const fits = [&]( std::uint8_t port ) {
    std::vector<WireId> v;
    for ( auto w : pool )
    {
      if ( b.wire( w ).range_max <= port )
      {
        v.push_back( w );
      }
    }
    return v;
  };

  while ( b.num_gates() < gates )
  {
    auto const kind = all_gate_kinds[pick( all_gate_kinds.size() )];
    auto const& sig = signature( kind );
    std::vector<WireId> in;
    bool ok = true;
    for ( auto const& p : sig.inputs )
    {
      auto const c = fits( p.range_max );
      if ( c.empty() )
      {
        ok = false;
        break;
      }
      in.push_back( c[pick( c.size() )] );
    }
    if ( !ok )
    {
      continue;
    }
    std::vector<std::uint8_t> ranges;
    for ( auto const& p : sig.outputs )
    {
      ranges.push_back( p.range_max );
    }
    auto const added = b.add_gate( kind, in, ranges, Phase::other, 0u, 0u );
    pool.insert( pool.end(), added.outputs.begin(), added.outputs.end() );
  }

  std::vector<WireId> outs;
  for ( auto i = 0u; i < 2u * width; ++i )
  {
    outs.push_back( pool[pool.size() - 1u - pick( std::min<std::size_t>( pool.size(), 8u ) )] );
  }
  b.set_outputs( outs );
  return std::move( b ).build();
}

inline TimingLibrary random_timing( std::uint64_t seed )
{
  std::mt19937_64 rng( seed );
  std::uniform_real_distribution<double> d( 1.0, 100.0 );
  TimingLibrary lib;
  lib.name = fmt::format( "random-{}", seed );
  for ( auto k : all_gate_kinds )
  {
    for ( auto const& p : signature( k ).outputs )
    {
      lib.set( k, p.name, d( rng ) );
    }
  }
  return lib;
}

inline CostLibrary random_cost( std::uint64_t seed )
{
  std::mt19937_64 rng( seed );
  std::uniform_real_distribution<double> d( 0.5, 300.0 );
  CostLibrary lib;
  lib.name = fmt::format( "random-{}", seed );
  for ( auto k : all_gate_kinds )
  {
    lib.sigma_di[k] = d( rng );
  }
  return lib;
}

/// a and b side by side; b's ids are shifted past a's.
inline Netlist disjoint_union( Netlist const& a, Netlist const& b )
{
  Netlist u = a;
  u.width = a.width + b.width;
  auto const wire_offset = static_cast<WireId>( a.wires.size() );
  auto const gate_offset = static_cast<GateId>( a.gates.size() );
  for ( auto w : b.wires )
  {
    w.id += wire_offset;
    u.wires.push_back( w );
  }
  for ( auto g : b.gates )
  {
    g.id += gate_offset;
    for ( auto& w : g.inputs )
    {
      w += wire_offset;
    }
    for ( auto& w : g.outputs )
    {
      w += wire_offset;
    }
    u.gates.push_back( g );
  }
  for ( auto w : b.inputs )
  {
    u.inputs.push_back( w + wire_offset );
  }
  for ( auto w : b.outputs )
  {
    u.outputs.push_back( w + wire_offset );
  }
  return u;
}

/// Puts a MUX4 with all data inputs tied to `w` in front of every reader of w
/// (gates and product digits). Returns the new gate id.
inline GateId insert_buffer( Netlist& n, WireId w )
{
  auto const out = static_cast<WireId>( n.wires.size() );
  n.wires.push_back( { out, n.wires[w].range_max, fmt::format( "buf{}", out ), std::nullopt } );
  for ( auto& g : n.gates )
  {
    std::replace( g.inputs.begin(), g.inputs.end(), w, out );
  }
  std::replace( n.outputs.begin(), n.outputs.end(), w, out );
  auto const id = static_cast<GateId>( n.gates.size() );
  n.gates.push_back( { id, GateKind::mux4, { n.inputs.at( 0 ), w, w, w, w }, { out }, Phase::other, 0u, 0u } );
  return id;
}

} // namespace mvl::test
