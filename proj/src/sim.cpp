#include <mvl/sim.hpp>

#include <mvl/error.hpp>

#include "json.hpp"
#include <fmt/format.h>

#include <algorithm>
#include <random>
#include <thread>

namespace mvl
{

Assignment make_assignment( Netlist const& n, std::span<unsigned const> x, std::span<unsigned const> y )
{
  if ( x.size() != n.width || y.size() != n.width )
  {
    throw range_error( fmt::format( "operands need {} digits, got {} and {}", n.width, x.size(), y.size() ) );
  }
  Assignment a;
  for ( auto i = 0u; i < n.width; ++i )
  {
    a.emplace( n.inputs.at( i ), LogicLevel( x[i], n.radix - 1u ) );
    a.emplace( n.inputs.at( n.width + i ), LogicLevel( y[i], n.radix - 1u ) );
  }
  return a;
}

Evaluator::Evaluator( Netlist const& n ) : n_( n ), order_( topological_order( n ) ), values_( n.wires.size(), 0u )
{
  for ( auto const& w : n.wires )
  {
    if ( w.constant )
    {
      values_[w.id] = *w.constant;
    }
  }
}

std::vector<unsigned> Evaluator::operator()( std::span<std::uint8_t const> inputs )
{
  if ( inputs.size() != n_.inputs.size() )
  {
    throw range_error( fmt::format( "expected {} input values, got {}", n_.inputs.size(), inputs.size() ) );
  }
  for ( auto i = 0u; i < inputs.size(); ++i )
  {
    auto const& w = n_.wires[n_.inputs[i]];
    if ( inputs[i] > w.range_max )
    {
      throw range_error( fmt::format( "input {} = {} exceeds range {}", w.name, inputs[i], w.range_max ) );
    }
    values_[w.id] = inputs[i];
  }

  for ( auto id : order_ )
  {
    auto const& g = n_.gates[id];
    in_buf_.resize( g.inputs.size() );
    out_buf_.resize( g.outputs.size() );
    for ( auto k = 0u; k < g.inputs.size(); ++k )
    {
      in_buf_[k] = values_[g.inputs[k]];
    }
    evaluate_gate( g.kind, in_buf_, out_buf_ );
    for ( auto k = 0u; k < g.outputs.size(); ++k )
    {
      auto const& w = n_.wires[g.outputs[k]];
      if ( out_buf_[k] > w.range_max )
      {
        throw range_error( fmt::format( "gate {} ({}) drives {} onto wire {} of range {}", g.id, to_string( g.kind ), out_buf_[k], w.name, w.range_max ) );
      }
      values_[w.id] = out_buf_[k];
    }
  }

  std::vector<unsigned> digits;
  digits.reserve( n_.outputs.size() );
  for ( auto w : n_.outputs )
  {
    digits.push_back( values_[w] );
  }
  return digits;
}

std::vector<unsigned> evaluate( Netlist const& n, Assignment const& a )
{
  std::vector<std::uint8_t> inputs;
  for ( auto w : n.inputs )
  {
    auto const it = a.find( w );
    if ( it == a.end() )
    {
      throw range_error( fmt::format( "assignment misses input wire {}", w ) );
    }
    if ( it->second.value() > n.wires.at( w ).range_max )
    {
      throw range_error( fmt::format( "input wire {} = {} exceeds range {}", w, it->second.value(), n.wires[w].range_max ) );
    }
    inputs.push_back( static_cast<std::uint8_t>( it->second.value() ) );
  }
  return Evaluator( n )( inputs );
}

unsigned __int128 digits_to_integer( unsigned radix, std::span<unsigned const> digits )
{
  unsigned __int128 v = 0;
  for ( auto it = digits.rbegin(); it != digits.rend(); ++it )
  {
    v = v * radix + *it;
  }
  return v;
}

std::vector<unsigned> integer_to_digits( unsigned radix, unsigned __int128 value, std::size_t count )
{
  std::vector<unsigned> d( count );
  for ( auto& digit : d )
  {
    digit = static_cast<unsigned>( value % radix );
    value /= radix;
  }
  return d;
}

std::vector<unsigned> oracle( unsigned radix, unsigned width, std::span<unsigned const> x, std::span<unsigned const> y )
{
  return integer_to_digits( radix, digits_to_integer( radix, x ) * digits_to_integer( radix, y ), 2u * width );
}

std::optional<std::uint64_t> input_space( Netlist const& n )
{
  unsigned __int128 s = 1;
  for ( auto i = 0u; i < 2u * n.width; ++i )
  {
    s *= n.radix;
    if ( s > ~std::uint64_t{ 0 } )
    {
      return std::nullopt;
    }
  }
  return static_cast<std::uint64_t>( s );
}

namespace
{

using Operands = std::pair<std::vector<unsigned>, std::vector<unsigned>>;

/// Checks vectors [0, count) produced by `make`, split across workers. Results
/// are merged by vector index so the report does not depend on scheduling.
template<typename Make>
std::vector<Mismatch> run_vectors( Netlist const& n, std::uint64_t count, unsigned workers, Make const& make )
{
  workers = std::max( 1u, std::min<unsigned>( workers, static_cast<unsigned>( std::min<std::uint64_t>( count, 256u ) ) ) );
  std::vector<std::vector<std::pair<std::uint64_t, Mismatch>>> found( workers );

  auto const job = [&]( unsigned w ) {
    Evaluator eval( n );
    std::vector<std::uint8_t> in( 2u * n.width );
    for ( std::uint64_t k = w; k < count; k += workers )
    {
      auto [x, y] = make( k );
      for ( auto i = 0u; i < n.width; ++i )
      {
        in[i] = static_cast<std::uint8_t>( x[i] );
        in[n.width + i] = static_cast<std::uint8_t>( y[i] );
      }
      auto expected = oracle( n.radix, n.width, x, y );
      Mismatch m{ std::move( x ), std::move( y ), std::move( expected ), {}, {} };
      try
      {
        m.got = eval( in );
        if ( m.got == m.expected )
        {
          continue;
        }
      }
      catch ( error const& e )
      {
        m.reason = e.what();
      }
      found[w].emplace_back( k, std::move( m ) );
    }
  };

  if ( workers == 1u )
  {
    job( 0u );
  }
  else
  {
    std::vector<std::jthread> threads;
    for ( auto w = 0u; w < workers; ++w )
    {
      threads.emplace_back( job, w );
    }
  }

  std::vector<std::pair<std::uint64_t, Mismatch>> all;
  for ( auto& f : found )
  {
    std::move( f.begin(), f.end(), std::back_inserter( all ) );
  }
  std::sort( all.begin(), all.end(), []( auto const& a, auto const& b ) { return a.first < b.first; } );
  std::vector<Mismatch> result;
  for ( auto& [k, m] : all )
  {
    result.push_back( std::move( m ) );
  }
  return result;
}

} // namespace

VerificationReport verify_exhaustive( Netlist const& n, VerifyOptions const& opts )
{
  auto const space = input_space( n );
  if ( !space || *space > opts.cap )
  {
    throw error( fmt::format( "{} has {} input vectors, above the exhaustive cap of {}; use random verification instead",
                              n.design_id(), space ? fmt::to_string( *space ) : std::string( "more than 2^64" ), opts.cap ) );
  }
  std::uint64_t const half = std::uint64_t{ 1 } << ( n.width * ( n.radix == 4u ? 2u : 1u ) );

  VerificationReport r;
  r.design_id = n.design_id();
  r.mode = VerifyMode::exhaustive;
  r.vectors = *space;
  r.mismatches = run_vectors( n, *space, opts.workers, [&]( std::uint64_t k ) {
    return Operands{ integer_to_digits( n.radix, k % half, n.width ), integer_to_digits( n.radix, k / half, n.width ) };
  } );
  return r;
}

std::vector<Operands> random_vectors( unsigned radix, unsigned width, std::uint64_t count, std::uint64_t seed )
{
  // radix is a power of two, so masking the raw engine output is unbiased and
  // identical on every standard library
  std::mt19937_64 rng( seed );
  std::vector<Operands> v( count );
  for ( auto& [x, y] : v )
  {
    x.resize( width );
    y.resize( width );
    for ( auto& d : x )
    {
      d = static_cast<unsigned>( rng() & ( radix - 1u ) );
    }
    for ( auto& d : y )
    {
      d = static_cast<unsigned>( rng() & ( radix - 1u ) );
    }
  }
  return v;
}

VerificationReport verify_random( Netlist const& n, std::uint64_t count, std::uint64_t seed, VerifyOptions const& opts )
{
  if ( count == 0u )
  {
    throw error( "random verification needs at least one vector" );
  }
  auto const vectors = random_vectors( n.radix, n.width, count, seed );

  VerificationReport r;
  r.design_id = n.design_id();
  r.mode = VerifyMode::random;
  r.seed = seed;
  r.vectors = count;
  r.mismatches = run_vectors( n, count, opts.workers, [&]( std::uint64_t k ) { return vectors[k]; } );
  return r;
}

std::string to_json( VerificationReport const& r, int indent )
{
  using json = nlohmann::json;
  json j;
  j["design"] = r.design_id;
  j["mode"] = r.mode == VerifyMode::exhaustive ? "exhaustive" : "random";
  if ( r.seed )
  {
    j["seed"] = *r.seed;
  }
  j["vectors"] = r.vectors;
  j["verdict"] = r.passed() ? "pass" : "fail";
  j["mismatches"] = json::array();
  for ( auto const& m : r.mismatches )
  {
    json e{ { "x", m.x }, { "y", m.y }, { "expected", m.expected }, { "got", m.got } };
    if ( !m.reason.empty() )
    {
      e["reason"] = m.reason;
    }
    j["mismatches"].push_back( std::move( e ) );
  }
  return j.dump( indent );
}

} // namespace mvl
