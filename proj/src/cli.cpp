#include <mvl/cli.hpp>

#include <mvl/error.hpp>
#include <mvl/metrics.hpp>
#include <mvl/netgen.hpp>
#include <mvl/sim.hpp>
#include <mvl/spice.hpp>

#include "CLI11.hpp"
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

namespace mvl
{

namespace
{

/// Failure with a fixed exit code.
struct cli_failure
{
  int code;
  std::string message;
};

std::string digits_msb_first( std::vector<unsigned> const& d )
{
  std::string s;
  for ( auto it = d.rbegin(); it != d.rend(); ++it )
  {
    s += static_cast<char>( '0' + *it );
  }
  return s.empty() ? "-" : s;
}

void write_text( std::string const& path, std::string const& text, std::ostream& out )
{
  if ( path.empty() || path == "-" )
  {
    out << text;
    return;
  }
  std::ofstream f( path, std::ios::binary );
  if ( !f || !( f << text ) )
  {
    throw cli_failure{ exit_code::io, fmt::format( "cannot write {}", path ) };
  }
}

Netlist load_netlist( std::string const& path, bool validate )
{
  std::ifstream f( path, std::ios::binary );
  if ( !f )
  {
    throw cli_failure{ exit_code::io, fmt::format( "cannot open {}", path ) };
  }
  Netlist n;
  try
  {
    n = read_netlist( f );
  }
  catch ( error const& e )
  {
    throw cli_failure{ exit_code::usage, fmt::format( "{}: {}", path, e.what() ) };
  }
  if ( validate )
  {
    auto const violations = validate_netlist( n );
    if ( !violations.empty() )
    {
      std::string msg = fmt::format( "{}: {} violation(s)", path, violations.size() );
      for ( auto const& v : violations )
      {
        msg += fmt::format( "\n  [{}] {}", to_string( v.kind ), v.message );
      }
      throw cli_failure{ exit_code::usage, msg };
    }
  }
  return n;
}

template<typename F>
auto load_library( std::string const& path, F const& load )
{
  try
  {
    return load( path );
  }
  catch ( std::ios_base::failure const& )
  {
    throw cli_failure{ exit_code::io, fmt::format( "cannot open {}", path ) };
  }
  catch ( error const& e )
  {
    throw cli_failure{ exit_code::usage, fmt::format( "{}: {}", path, e.what() ) };
  }
}

/// Parses "23*33" (digits most significant first) into operands of `width`.
std::pair<std::vector<unsigned>, std::vector<unsigned>> parse_probe( std::string const& text, unsigned radix, unsigned width )
{
  auto const star = text.find( '*' );
  auto const operand = [&]( std::string const& s ) {
    if ( s.empty() || s.size() > width )
    {
      throw cli_failure{ exit_code::usage, fmt::format( "probe '{}': operands need 1..{} digits", text, width ) };
    }
    std::vector<unsigned> d( width, 0u );
    for ( auto i = 0u; i < s.size(); ++i )
    {
      auto const c = s[s.size() - 1u - i];
      if ( c < '0' || static_cast<unsigned>( c - '0' ) >= radix )
      {
        throw cli_failure{ exit_code::usage, fmt::format( "probe '{}': '{}' is not a radix-{} digit", text, c, radix ) };
      }
      d[i] = static_cast<unsigned>( c - '0' );
    }
    return d;
  };
  if ( star == std::string::npos )
  {
    throw cli_failure{ exit_code::usage, fmt::format( "probe '{}' must look like X*Y", text ) };
  }
  return { operand( text.substr( 0, star ) ), operand( text.substr( star + 1u ) ) };
}

struct DesignArg
{
  unsigned radix;
  unsigned width;
  std::string timing; // empty: default for the radix
};

DesignArg parse_design( std::string const& text )
{
  unsigned radix = 0, width = 0;
  auto const at = text.find( '@' );
  auto const core = text.substr( 0, at );
  char colon = 0;
  std::istringstream ss( core );
  if ( !( ss >> radix >> colon >> width ) || colon != ':' || !ss.eof() )
  {
    throw cli_failure{ exit_code::usage, fmt::format( "design '{}' must look like RADIX:WIDTH[@timing]", text ) };
  }
  return { radix, width, at == std::string::npos ? std::string() : text.substr( at + 1u ) };
}

std::string default_timing( unsigned radix )
{
  return radix == 4u ? "paper-0.9V-quaternary" : "paper-0.9V-binary";
}

TimingLibrary resolve_timing( std::string const& spec )
{
  try
  {
    return timing_preset( spec );
  }
  catch ( std::ios_base::failure const& e )
  {
    throw cli_failure{ exit_code::io, e.what() };
  }
  catch ( error const& e )
  {
    throw cli_failure{ exit_code::usage, e.what() };
  }
}

Netlist generate( unsigned radix, unsigned width )
{
  try
  {
    return gen_multiplier( radix, width );
  }
  catch ( error const& e )
  {
    throw cli_failure{ exit_code::usage, e.what() };
  }
}

std::string format_from( std::string const& format, std::string const& out )
{
  if ( !format.empty() )
  {
    return format;
  }
  if ( out.ends_with( ".csv" ) )
  {
    return "csv";
  }
  if ( out.ends_with( ".json" ) )
  {
    return "json";
  }
  return "md";
}

} // namespace

int run_cli( std::vector<std::string> const& args, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Binary and quaternary Wallace-tree multiplier generator", "mvl" };
  app.require_subcommand( 1 );

  unsigned radix = 2, width = 1, workers = 1;
  std::string out_path, mode = "exhaustive", format, cost_lib, timing_lib, netlist_path, preset;
  std::uint64_t seed = 1, count = 1000, cap = std::uint64_t{ 1 } << 20;
  std::vector<std::string> designs, probes;

  auto* gen = app.add_subcommand( "generate", "Generate a multiplier netlist (JSON) and print its inventory" );
  gen->add_option( "--radix", radix, "2 or 4" )->required();
  gen->add_option( "--width", width, "Operand digits" )->required();
  gen->add_option( "--out", out_path, "Netlist file (default <design>.json, '-' for stdout)" );

  auto* ver = app.add_subcommand( "verify", "Verify a netlist against integer multiplication" );
  ver->add_option( "netlist", netlist_path, "Netlist JSON" )->required();
  ver->add_option( "--mode", mode, "exhaustive or random" )->check( CLI::IsMember( { "exhaustive", "random" } ) );
  ver->add_option( "--seed", seed, "Random seed" );
  ver->add_option( "--count", count, "Random vectors" );
  ver->add_option( "--cap", cap, "Largest exhaustive input space" );
  ver->add_option( "--workers", workers, "Worker threads" )->check( CLI::Range( 1u, 256u ) );
  ver->add_option( "--out", out_path, "Report JSON" );
  ver->add_option( "--probe", probes, "Evaluate X*Y (digits, most significant first)" );

  auto* cmp = app.add_subcommand( "compare", "Compare designs by area and critical path" );
  cmp->add_option( "--preset", preset, "'paper' for the published head-to-heads" )->check( CLI::IsMember( { "paper" } ) );
  cmp->add_option( "--design", designs, "RADIX:WIDTH[@timing-preset]" );
  cmp->add_option( "--cost-lib", cost_lib, "Cost library file" );
  cmp->add_option( "--timing-lib", timing_lib, "Timing library file for designs without @timing" );
  cmp->add_option( "--format", format, "md, csv or json (default from --out, else md)" )->check( CLI::IsMember( { "md", "csv", "json" } ) );
  cmp->add_option( "--out", out_path, "Output file" );

  auto* spice = app.add_subcommand( "export-spice", "Write a structural SPICE-style deck" );
  spice->add_option( "netlist", netlist_path, "Netlist JSON" )->required();
  spice->add_option( "--out", out_path, "Deck file (default stdout)" );

  try
  {
    std::vector<std::string> reversed( args.rbegin(), args.rend() );
    app.parse( reversed );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e, out, err );
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  try
  {
    if ( *gen )
    {
      auto const n = generate( radix, width );
      write_text( out_path.empty() ? n.design_id() + ".json" : out_path, to_json( n ), out );
      fmt::print( out_path == "-" ? err : out, "{} {}\n", n.design_id(), format_inventory( GateInventory( n ) ) );
    }
    else if ( *ver )
    {
      auto const n = load_netlist( netlist_path, true );
      int code = exit_code::ok;
      for ( auto const& p : probes )
      {
        auto const [x, y] = parse_probe( p, n.radix, n.width );
        auto const got = Evaluator( n )( [&] {
          std::vector<std::uint8_t> in;
          for ( auto d : x )
            in.push_back( static_cast<std::uint8_t>( d ) );
          for ( auto d : y )
            in.push_back( static_cast<std::uint8_t>( d ) );
          return in;
        }() );
        auto const expected = oracle( n.radix, n.width, x, y );
        fmt::print( out, "{}*{}={} ({})\n", digits_msb_first( x ), digits_msb_first( y ), digits_msb_first( got ),
                    got == expected ? "ok" : fmt::format( "expected {}", digits_msb_first( expected ) ) );
        if ( got != expected )
        {
          code = exit_code::mismatch;
        }
      }

      VerificationReport r;
      VerifyOptions opts{ cap, workers };
      try
      {
        r = mode == "random" ? verify_random( n, count, seed, opts ) : verify_exhaustive( n, opts );
      }
      catch ( error const& e )
      {
        throw cli_failure{ exit_code::usage, fmt::format( "{} (try --mode random --count N --seed S)", e.what() ) };
      }
      if ( !out_path.empty() )
      {
        write_text( out_path, to_json( r ) + "\n", out );
      }
      fmt::print( out, "{} {} {}: {} vectors, {} mismatches\n", r.passed() ? "PASS" : "FAIL", r.design_id,
                  mode == "random" ? fmt::format( "random(seed={})", seed ) : std::string( "exhaustive" ), r.vectors, r.mismatches.size() );
      constexpr std::size_t shown = 10;
      for ( auto i = 0u; i < std::min( shown, r.mismatches.size() ); ++i )
      {
        auto const& m = r.mismatches[i];
        fmt::print( out, "  {}*{}: expected {}, got {}{}\n", digits_msb_first( m.x ), digits_msb_first( m.y ),
                    digits_msb_first( m.expected ), digits_msb_first( m.got ), m.reason.empty() ? "" : " (" + m.reason + ")" );
      }
      if ( r.mismatches.size() > shown )
      {
        fmt::print( out, "  ... {} more\n", r.mismatches.size() - shown );
      }
      if ( !r.passed() )
      {
        code = exit_code::mismatch;
      }
      return code;
    }
    else if ( *cmp )
    {
      auto const cost = cost_lib.empty() ? cost_preset() : load_library( cost_lib, load_cost_library );
      std::optional<TimingLibrary> timing_override;
      if ( !timing_lib.empty() )
      {
        timing_override = load_library( timing_lib, load_timing_library );
      }

      std::vector<DesignArg> specs;
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      if ( preset == "paper" )
      {
        specs = { { 4, 1, {} }, { 2, 2, {} }, { 4, 2, {} }, { 2, 4, {} }, { 4, 4, {} }, { 2, 8, {} }, { 2, 8, "paper-0.45V-binary" } };
        pairs = { { 0, 1 }, { 2, 3 }, { 4, 5 }, { 4, 6 } };
      }
      for ( auto const& d : designs )
      {
        specs.push_back( parse_design( d ) );
      }
      if ( specs.size() < 2u )
      {
        throw cli_failure{ exit_code::usage, "compare needs --preset paper or at least two --design" };
      }

      std::vector<std::unique_ptr<Netlist>> netlists;
      std::vector<DesignInput> inputs;
      for ( auto const& s : specs )
      {
        netlists.push_back( std::make_unique<Netlist>( generate( s.radix, s.width ) ) );
        auto timing = !s.timing.empty() ? resolve_timing( s.timing ) : timing_override ? *timing_override : resolve_timing( default_timing( s.radix ) );
        auto label = fmt::format( "{}:{}", s.radix, s.width );
        if ( !s.timing.empty() )
        {
          label += "@" + s.timing;
        }
        inputs.push_back( { label, netlists.back().get(), cost, timing, PathScope::reduction_only } );
      }

      ComparisonReport r;
      try
      {
        r = compare( inputs, pairs );
        if ( preset == "paper" )
        {
          r.components = component_ratios( cost, *netlists[4], *netlists[5] );
        }
      }
      catch ( error const& e )
      {
        throw cli_failure{ exit_code::usage, e.what() };
      }
      auto const fmt_name = format_from( format, out_path );
      write_text( out_path, fmt_name == "csv" ? to_csv( r ) : fmt_name == "json" ? to_json( r ) + "\n" : to_markdown( r ), out );
    }
    else if ( *spice )
    {
      write_text( out_path, export_spice( load_netlist( netlist_path, true ) ), out );
    }
  }
  catch ( cli_failure const& f )
  {
    fmt::print( err, "mvl: {}\n", f.message );
    return f.code;
  }
  catch ( std::ios_base::failure const& e )
  {
    fmt::print( err, "mvl: {}\n", e.what() );
    return exit_code::io;
  }
  catch ( error const& e )
  {
    fmt::print( err, "mvl: {}\n", e.what() );
    return exit_code::usage;
  }
  return exit_code::ok;
}

} // namespace mvl
