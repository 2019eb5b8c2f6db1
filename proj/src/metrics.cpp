#include <mvl/metrics.hpp>

#include <mvl/error.hpp>

#include "json.hpp"
#include <Eigen/Dense>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mvl
{

/* cost */

double CostLibrary::lookup( GateKind kind ) const
{
  auto const it = sigma_di.find( kind );
  if ( it == sigma_di.end() )
  {
    throw library_error( fmt::format( "cost library '{}' has no sigma_di for {}", name, to_string( kind ) ) );
  }
  return it->second;
}

CostLibrary default_cost_library()
{
  CostLibrary lib;
  lib.name = "default";
  lib.sigma_di = { { GateKind::and2, 8.9 }, { GateKind::bin_ha, 18.0 }, { GateKind::bin_fa, 32.0 },
                   { GateKind::qm1, 132.0 }, { GateKind::qha, 83.0 }, { GateKind::qfac2, 227.0 },
                   { GateKind::qfac2wc, 227.0 }, { GateKind::mux4, 0.0 }, { GateKind::decoder, 0.0 } };
  lib.diameters = { { 8u, { 0.626, 0.696 } }, { 10u, { 0.783, 0.557 } }, { 13u, { 1.018, 0.428 } },
                    { 19u, { 1.487, 0.293 } }, { 29u, { 2.27, 0.192 } }, { 37u, { 2.896, 0.150 } } };
  return lib;
}

double area_estimate( Netlist const& n, CostLibrary const& lib )
{
  double a = 0.0;
  for ( auto const& g : n.gates )
  {
    a += lib.lookup( g.kind );
  }
  return a;
}

std::optional<double> energy_estimate( Netlist const& n, CostLibrary const& lib )
{
  double e = 0.0;
  for ( auto const& g : n.gates )
  {
    auto const it = lib.energy.find( g.kind );
    if ( it == lib.energy.end() )
    {
      return std::nullopt;
    }
    e += it->second;
  }
  return e;
}

/* timing */

double TimingLibrary::delay( GateKind kind, std::size_t output_port ) const
{
  auto const& outs = signature( kind ).outputs;
  if ( output_port >= outs.size() )
  {
    throw library_error( fmt::format( "{} has no output port {}", to_string( kind ), output_port ) );
  }
  auto const it = delays.find( { kind, std::string( outs[output_port].name ) } );
  if ( it == delays.end() )
  {
    throw library_error( fmt::format( "timing library '{}' has no delay for {}.{}", name, to_string( kind ), outs[output_port].name ) );
  }
  return it->second;
}

void TimingLibrary::set( GateKind kind, std::string_view port, double ps )
{
  auto const& outs = signature( kind ).outputs;
  if ( std::none_of( outs.begin(), outs.end(), [&]( auto const& p ) { return p.name == port; } ) )
  {
    throw library_error( fmt::format( "{} has no output port '{}'", to_string( kind ), port ) );
  }
  if ( !( ps >= 0.0 ) )
  {
    throw library_error( fmt::format( "delay of {}.{} must be >= 0, got {}", to_string( kind ), port, ps ) );
  }
  delays[{ kind, std::string( port ) }] = ps;
}

void TimingLibrary::set_all( GateKind kind, double ps )
{
  for ( auto const& p : signature( kind ).outputs )
  {
    set( kind, p.name, ps );
  }
}

bool TimingLibrary::covers( GateKind kind ) const
{
  auto const& outs = signature( kind ).outputs;
  return std::all_of( outs.begin(), outs.end(), [&]( auto const& p ) { return delays.count( { kind, std::string( p.name ) } ) != 0u; } );
}

TimingLibrary TimingLibrary::scaled( double k ) const
{
  auto r = *this;
  for ( auto& [key, d] : r.delays )
  {
    d *= k;
  }
  return r;
}

TimingLibrary calibrate_timing( std::vector<PathConstraint> const& constraints,
                                std::vector<std::vector<GateKind>> const& tie_classes,
                                std::string name, std::string load )
{
  if ( constraints.empty() )
  {
    throw library_error( "calibration needs at least one path constraint" );
  }

  // one unknown per tie class that touches a constraint, plus one per lone kind
  std::map<GateKind, std::size_t> var_of;
  std::vector<std::vector<GateKind>> vars;
  auto const class_of = [&]( GateKind k ) -> std::vector<GateKind> {
    for ( auto const& c : tie_classes )
    {
      if ( std::find( c.begin(), c.end(), k ) != c.end() )
      {
        return c;
      }
    }
    return { k };
  };
  for ( auto const& c : constraints )
  {
    for ( auto const& [k, count] : c.kinds )
    {
      if ( var_of.count( k ) )
      {
        continue;
      }
      auto const cls = class_of( k );
      for ( auto m : cls )
      {
        var_of[m] = vars.size();
      }
      vars.push_back( cls );
    }
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero( static_cast<Eigen::Index>( constraints.size() ), static_cast<Eigen::Index>( vars.size() ) );
  Eigen::VectorXd b( static_cast<Eigen::Index>( constraints.size() ) );
  for ( auto r = 0u; r < constraints.size(); ++r )
  {
    for ( auto const& [k, count] : constraints[r].kinds )
    {
      a( r, static_cast<Eigen::Index>( var_of[k] ) ) += count;
    }
    b( r ) = constraints[r].observed_ps;
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu( a );
  if ( lu.rank() < static_cast<Eigen::Index>( vars.size() ) )
  {
    Eigen::MatrixXd const kernel = lu.kernel();
    std::vector<std::string> free;
    for ( auto v = 0u; v < vars.size(); ++v )
    {
      if ( kernel.row( v ).cwiseAbs().maxCoeff() > 1e-12 )
      {
        std::string label;
        for ( auto k : vars[v] )
        {
          label += ( label.empty() ? "" : "=" ) + std::string( to_string( k ) );
        }
        free.push_back( label );
      }
    }
    throw library_error( fmt::format( "calibration is underdetermined; free delays: {} (add constraints or tie classes)",
                                      fmt::join( free, ", " ) ) );
  }
  Eigen::VectorXd const x = a.colPivHouseholderQr().solve( b );

  TimingLibrary lib;
  lib.name = std::move( name );
  lib.load = std::move( load );
  for ( auto const& [k, v] : var_of )
  {
    lib.set_all( k, std::max( 0.0, x( static_cast<Eigen::Index>( v ) ) ) );
  }
  return lib;
}

namespace
{

std::vector<TimingLibrary> builtin_timing_presets()
{
  auto const binary = [&]( std::string name, double ps ) {
    return calibrate_timing( { { { { GateKind::bin_fa, 11u }, { GateKind::bin_ha, 3u } }, ps }, { { { GateKind::and2, 1u } }, 0.0 } },
                             { { GateKind::bin_fa, GateKind::bin_ha } }, std::move( name ), "2fF, paper-calibrated" );
  };
  std::vector<TimingLibrary> presets;
  presets.push_back( binary( "paper-0.9V-binary", 312.0 ) );
  presets.push_back( binary( "paper-0.45V-binary", 799.0 ) );
  presets.push_back( calibrate_timing( { { { { GateKind::qfac2, 6u }, { GateKind::qha, 1u } }, 646.0 }, { { { GateKind::qm1, 1u } }, 118.0 } },
                                       { { GateKind::qfac2, GateKind::qha, GateKind::qfac2wc } }, "paper-0.9V-quaternary",
                                       "2fF, paper-calibrated" ) );
  return presets;
}

std::vector<TimingLibrary> const& builtins()
{
  static std::vector<TimingLibrary> const presets = builtin_timing_presets();
  return presets;
}

std::string read_file( std::filesystem::path const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw std::ios_base::failure( fmt::format( "cannot open {}", path.string() ) );
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> env_library_files()
{
  std::vector<std::filesystem::path> files;
  char const* env = std::getenv( "MVL_DEFAULT_LIBS" );
  if ( env == nullptr )
  {
    return files;
  }
  std::string_view s( env );
  while ( !s.empty() )
  {
    auto const colon = s.find( ':' );
    auto const item = s.substr( 0, colon );
    if ( !item.empty() )
    {
      files.emplace_back( item );
    }
    if ( colon == std::string_view::npos )
    {
      break;
    }
    s.remove_prefix( colon + 1u );
  }
  return files;
}

/* key/value parsing */

std::string_view trim( std::string_view s )
{
  auto const b = s.find_first_not_of( " \t\r" );
  if ( b == std::string_view::npos )
  {
    return {};
  }
  return s.substr( b, s.find_last_not_of( " \t\r" ) - b + 1u );
}

struct Entry
{
  std::size_t line;
  std::string key;
  std::string value;
};

std::vector<Entry> parse_entries( std::string_view text )
{
  std::vector<Entry> entries;
  std::size_t line_no = 0;
  while ( !text.empty() )
  {
    auto const nl = text.find( '\n' );
    auto line = text.substr( 0, nl );
    text.remove_prefix( nl == std::string_view::npos ? text.size() : nl + 1u );
    ++line_no;
    if ( auto const hash = line.find( '#' ); hash != std::string_view::npos )
    {
      line = line.substr( 0, hash );
    }
    line = trim( line );
    if ( line.empty() )
    {
      continue;
    }
    auto const eq = line.find( '=' );
    if ( eq == std::string_view::npos )
    {
      throw format_error( fmt::format( "line {}: expected 'key = value'", line_no ) );
    }
    entries.push_back( { line_no, std::string( trim( line.substr( 0, eq ) ) ), std::string( trim( line.substr( eq + 1u ) ) ) } );
  }
  return entries;
}

std::vector<double> parse_numbers( Entry const& e, std::size_t expected )
{
  std::vector<double> v;
  std::string_view s = e.value;
  while ( !( s = trim( s ) ).empty() )
  {
    double d{};
    auto const [ptr, ec] = std::from_chars( s.data(), s.data() + s.size(), d );
    if ( ec != std::errc{} )
    {
      throw format_error( fmt::format( "line {}: '{}' is not a number", e.line, s ) );
    }
    v.push_back( d );
    s.remove_prefix( static_cast<std::size_t>( ptr - s.data() ) );
  }
  if ( v.size() != expected )
  {
    throw format_error( fmt::format( "line {}: {} expects {} number(s)", e.line, e.key, expected ) );
  }
  return v;
}

GateKind parse_kind( Entry const& e, std::string_view tag )
{
  auto const k = gate_kind_from_string( tag );
  if ( !k )
  {
    throw format_error( fmt::format( "line {}: unknown gate kind '{}'", e.line, tag ) );
  }
  return *k;
}

std::optional<std::string> library_type( std::vector<Entry> const& entries )
{
  for ( auto const& e : entries )
  {
    if ( e.key == "type" )
    {
      return e.value;
    }
  }
  return std::nullopt;
}

void expect_type( std::vector<Entry> const& entries, std::string_view want )
{
  auto const t = library_type( entries );
  if ( t && *t != want )
  {
    throw format_error( fmt::format( "library type is '{}', expected '{}'", *t, want ) );
  }
}

template<typename Lib, typename Parse>
std::optional<Lib> env_override( std::string_view type, std::string_view name, Parse const& parse )
{
  std::optional<Lib> found;
  for ( auto const& path : env_library_files() )
  {
    auto const text = read_file( path );
    if ( library_type( parse_entries( text ) ).value_or( "" ) != type )
    {
      continue;
    }
    auto lib = parse( text );
    if ( lib.name == name )
    {
      found = std::move( lib );
    }
  }
  return found;
}

} // namespace

std::vector<std::string> const& timing_preset_names()
{
  static std::vector<std::string> const names = [] {
    std::vector<std::string> v;
    for ( auto const& p : builtins() )
    {
      v.push_back( p.name );
    }
    return v;
  }();
  return names;
}

TimingLibrary timing_preset( std::string_view name )
{
  if ( auto lib = env_override<TimingLibrary>( "timing", name, parse_timing_library ) )
  {
    return *lib;
  }
  for ( auto const& p : builtins() )
  {
    if ( p.name == name )
    {
      return p;
    }
  }
  throw library_error( fmt::format( "unknown timing preset '{}' (known: {})", name, fmt::join( timing_preset_names(), ", " ) ) );
}

CostLibrary cost_preset( std::string_view name )
{
  if ( auto lib = env_override<CostLibrary>( "cost", name, parse_cost_library ) )
  {
    return *lib;
  }
  if ( name == "default" )
  {
    return default_cost_library();
  }
  throw library_error( fmt::format( "unknown cost library '{}'", name ) );
}

/* critical path */

CriticalPath critical_path( Netlist const& n, TimingLibrary const& lib, PathScope scope )
{
  auto const order = topological_order( n );
  auto const skip = [&]( GateInstance const& g ) { return scope == PathScope::reduction_only && g.phase == Phase::partial_product; };

  constexpr double none = -1.0;
  std::vector<bool> is_output( n.wires.size(), false );
  for ( auto w : n.outputs )
  {
    is_output.at( w ) = true;
  }

  // tail[w]: longest delay from wire w to a product digit, none if unreachable
  std::vector<double> tail( n.wires.size(), none );
  for ( auto w = 0u; w < n.wires.size(); ++w )
  {
    if ( is_output[w] )
    {
      tail[w] = 0.0;
    }
  }
  std::vector<double> through( n.gates.size(), none ); // best delay starting at the gate
  for ( auto it = order.rbegin(); it != order.rend(); ++it )
  {
    auto const& g = n.gates[*it];
    if ( skip( g ) )
    {
      continue;
    }
    double best = none;
    for ( auto p = 0u; p < g.outputs.size(); ++p )
    {
      auto const d = lib.delay( g.kind, p );
      if ( tail[g.outputs[p]] != none )
      {
        best = std::max( best, d + tail[g.outputs[p]] );
      }
    }
    through[g.id] = best;
    if ( best == none )
    {
      continue;
    }
    for ( auto w : g.inputs )
    {
      tail[w] = std::max( tail[w], best );
    }
  }

  // path sources: undriven wires, and partial-product outputs when skipped
  auto const drivers = wire_drivers( n );
  auto const is_source = [&]( WireId w ) { return !drivers[w] || skip( n.gates[*drivers[w]] ); };

  CriticalPath result;
  for ( auto w = 0u; w < n.wires.size(); ++w )
  {
    if ( is_source( w ) )
    {
      result.delay_ps = std::max( result.delay_ps, tail[w] );
    }
  }
  auto const eps = 1e-9 * std::max( 1.0, result.delay_ps );
  auto const consumers = wire_consumers( n );

  // greedy walk: every frontier wire w lies on a longest path with tail[w]
  // still to go; take the smallest gate id that keeps it that way
  std::vector<WireId> frontier;
  for ( auto w = 0u; w < n.wires.size(); ++w )
  {
    if ( is_source( w ) && tail[w] != none && std::abs( tail[w] - result.delay_ps ) <= eps )
    {
      frontier.push_back( w );
    }
  }
  while ( std::none_of( frontier.begin(), frontier.end(), [&]( WireId w ) { return is_output[w] && tail[w] <= eps; } ) )
  {
    std::optional<GateId> next;
    for ( auto w : frontier )
    {
      for ( auto const& [g, port] : consumers[w] )
      {
        if ( !skip( n.gates[g] ) && through[g] != none && std::abs( through[g] - tail[w] ) <= eps && ( !next || g < *next ) )
        {
          next = g;
        }
      }
    }
    if ( !next )
    {
      break;
    }
    auto const& g = n.gates[*next];
    result.gates.push_back( g.id );
    frontier.clear();
    for ( auto p = 0u; p < g.outputs.size(); ++p )
    {
      auto const w = g.outputs[p];
      if ( tail[w] != none && std::abs( lib.delay( g.kind, p ) + tail[w] - through[g.id] ) <= eps )
      {
        frontier.push_back( w );
      }
    }
  }
  return result;
}

/* comparison */

ComparisonReport compare( std::vector<DesignInput> const& designs, std::vector<std::pair<std::size_t, std::size_t>> const& pairs )
{
  if ( designs.size() < 2u )
  {
    throw error( "comparison needs at least two designs" );
  }
  ComparisonReport r;
  for ( auto const& d : designs )
  {
    GateInventory const inventory( *d.netlist );
    std::vector<std::string_view> missing;
    for ( auto const& [k, c] : inventory.counts() )
    {
      if ( c != 0u && ( !d.timing.covers( k ) || !d.cost.sigma_di.count( k ) ) )
      {
        missing.push_back( to_string( k ) );
      }
    }
    if ( !missing.empty() )
    {
      throw library_error( fmt::format( "{}: libraries '{}' / '{}' lack {}", d.label, d.cost.name, d.timing.name, fmt::join( missing, ", " ) ) );
    }

    DesignMetrics m;
    m.label = d.label;
    m.design_id = d.netlist->design_id();
    m.timing_name = d.timing.name;
    m.inventory = inventory;
    m.area_nm = area_estimate( *d.netlist, d.cost );
    m.path = critical_path( *d.netlist, d.timing, d.scope );
    for ( auto g : m.path.gates )
    {
      m.path_kinds.push_back( d.netlist->gates[g].kind );
    }
    m.energy = energy_estimate( *d.netlist, d.cost );
    r.designs.push_back( std::move( m ) );
  }

  auto const winner = []( double a, double b ) {
    if ( std::abs( a - b ) <= 1e-9 * std::max( std::abs( a ), std::abs( b ) ) )
    {
      return Winner::tie;
    }
    return a < b ? Winner::first : Winner::second;
  };

  auto list = pairs;
  if ( list.empty() )
  {
    for ( auto i = 0u; i < designs.size(); ++i )
    {
      for ( auto j = i + 1u; j < designs.size(); ++j )
      {
        list.emplace_back( i, j );
      }
    }
  }
  for ( auto [i, j] : list )
  {
    auto const& a = r.designs.at( i );
    auto const& b = r.designs.at( j );
    PairRatio p{ i, j, a.area_nm / b.area_nm, std::nullopt, winner( a.area_nm, b.area_nm ), winner( a.path.delay_ps, b.path.delay_ps ) };
    if ( b.path.delay_ps > 0.0 )
    {
      p.delay_ratio = a.path.delay_ps / b.path.delay_ps;
    }
    r.pairs.push_back( p );
  }
  return r;
}

ComponentRatios component_ratios( CostLibrary const& lib, Netlist const& quaternary, Netlist const& binary )
{
  GateInventory const q( quaternary ), b( binary );
  auto const ratio = []( double x, double y ) { return y == 0.0 ? 0.0 : x / y; };
  return { lib.lookup( GateKind::qha ) / lib.lookup( GateKind::bin_ha ),
           lib.lookup( GateKind::qfac2 ) / lib.lookup( GateKind::bin_fa ),
           ratio( static_cast<double>( q.count( GateKind::qha ) ), static_cast<double>( b.count( GateKind::bin_ha ) ) ),
           ratio( static_cast<double>( q.quaternary_full_adders() ), static_cast<double>( b.count( GateKind::bin_fa ) ) ) };
}

std::string format_ratio( double r )
{
  return fmt::format( "x{:.1f}", r );
}

namespace
{

std::string_view to_string( Winner w, std::string const& a, std::string const& b )
{
  return w == Winner::tie ? std::string_view( "tie" ) : w == Winner::first ? std::string_view( a ) : std::string_view( b );
}

std::string path_summary( DesignMetrics const& d )
{
  std::map<GateKind, unsigned> count;
  for ( auto k : d.path_kinds )
  {
    ++count[k];
  }
  std::vector<std::string> parts;
  for ( auto [k, c] : count )
  {
    parts.push_back( fmt::format( "{}x{}", c, to_string( k ) ) );
  }
  return parts.empty() ? std::string( "-" ) : fmt::format( "{}", fmt::join( parts, " + " ) );
}

} // namespace

std::string to_markdown( ComparisonReport const& r )
{
  std::string s = "| design | netlist | timing | inventory | area (nm) | delay (ps) | path |\n"
                  "|---|---|---|---|---:|---:|---|\n";
  for ( auto const& d : r.designs )
  {
    s += fmt::format( "| {} | {} | {} | {} | {:.1f} | {:.1f} | {} |\n", d.label, d.design_id, d.timing_name,
                      format_inventory( d.inventory ), d.area_nm, d.path.delay_ps, path_summary( d ) );
  }
  s += "\n| first | second | area ratio | smaller area | delay ratio | faster |\n"
       "|---|---|---:|---|---:|---|\n";
  for ( auto const& p : r.pairs )
  {
    auto const& a = r.designs[p.first].label;
    auto const& b = r.designs[p.second].label;
    s += fmt::format( "| {} | {} | {} ({:.3f}) | {} | {} | {} |\n", a, b, format_ratio( p.area_ratio ), p.area_ratio,
                      to_string( p.area_winner, a, b ),
                      p.delay_ratio ? fmt::format( "{} ({:.3f})", format_ratio( *p.delay_ratio ), *p.delay_ratio ) : std::string( "n/a" ),
                      to_string( p.delay_winner, a, b ) );
  }
  if ( r.components )
  {
    auto const& c = *r.components;
    s += fmt::format( "\n| component ratio | value |\n|---|---:|\n"
                      "| QHA / BIN_HA area | {:.3f} |\n| QFAC2 / BIN_FA area | {:.3f} |\n"
                      "| QHA / BIN_HA count | {:.3f} |\n| QFAC2 / BIN_FA count | {:.3f} |\n",
                      c.ha_area, c.fa_area, c.ha_count, c.fa_count );
  }
  return s;
}

std::string to_csv( ComparisonReport const& r )
{
  std::string s = "record,subject,metric,value\n";
  for ( auto const& d : r.designs )
  {
    s += fmt::format( "design,{},netlist,{}\n", d.label, d.design_id );
    s += fmt::format( "design,{},timing,{}\n", d.label, d.timing_name );
    for ( auto [k, c] : d.inventory.counts() )
    {
      s += fmt::format( "design,{},count.{},{}\n", d.label, to_string( k ), c );
    }
    s += fmt::format( "design,{},area_nm,{}\n", d.label, d.area_nm );
    s += fmt::format( "design,{},delay_ps,{}\n", d.label, d.path.delay_ps );
    s += fmt::format( "design,{},path_gates,{}\n", d.label, d.path.gates.size() );
    if ( d.energy )
    {
      s += fmt::format( "design,{},energy,{}\n", d.label, *d.energy );
    }
  }
  for ( auto const& p : r.pairs )
  {
    auto const subject = fmt::format( "{}/{}", r.designs[p.first].label, r.designs[p.second].label );
    s += fmt::format( "pair,{},area_ratio,{}\n", subject, p.area_ratio );
    if ( p.delay_ratio )
    {
      s += fmt::format( "pair,{},delay_ratio,{}\n", subject, *p.delay_ratio );
    }
  }
  if ( r.components )
  {
    s += fmt::format( "component,QHA/BIN_HA,area_ratio,{}\n", r.components->ha_area );
    s += fmt::format( "component,QFAC2/BIN_FA,area_ratio,{}\n", r.components->fa_area );
    s += fmt::format( "component,QHA/BIN_HA,count_ratio,{}\n", r.components->ha_count );
    s += fmt::format( "component,QFAC2/BIN_FA,count_ratio,{}\n", r.components->fa_count );
  }
  return s;
}

std::string to_json( ComparisonReport const& r, int indent )
{
  using json = nlohmann::json;
  auto const winner = []( Winner w ) { return w == Winner::tie ? "tie" : w == Winner::first ? "first" : "second"; };
  json j;
  j["designs"] = json::array();
  for ( auto const& d : r.designs )
  {
    json inv = json::object();
    for ( auto [k, c] : d.inventory.counts() )
    {
      inv[std::string( to_string( k ) )] = c;
    }
    json kinds = json::array();
    for ( auto k : d.path_kinds )
    {
      kinds.push_back( std::string( to_string( k ) ) );
    }
    json e{ { "label", d.label }, { "netlist", d.design_id }, { "timing", d.timing_name }, { "inventory", inv },
            { "area_nm", d.area_nm }, { "delay_ps", d.path.delay_ps }, { "path", d.path.gates }, { "path_kinds", kinds } };
    if ( d.energy )
    {
      e["energy"] = *d.energy;
    }
    j["designs"].push_back( std::move( e ) );
  }
  j["pairs"] = json::array();
  for ( auto const& p : r.pairs )
  {
    json e{ { "first", r.designs[p.first].label }, { "second", r.designs[p.second].label },
            { "area_ratio", p.area_ratio }, { "area_winner", winner( p.area_winner ) },
            { "delay_winner", winner( p.delay_winner ) } };
    e["delay_ratio"] = p.delay_ratio ? json( *p.delay_ratio ) : json();
    j["pairs"].push_back( std::move( e ) );
  }
  if ( r.components )
  {
    j["components"] = { { "ha_area", r.components->ha_area }, { "fa_area", r.components->fa_area },
                        { "ha_count", r.components->ha_count }, { "fa_count", r.components->fa_count } };
  }
  return j.dump( indent );
}

/* library files */

CostLibrary parse_cost_library( std::string_view text )
{
  auto const entries = parse_entries( text );
  expect_type( entries, "cost" );
  CostLibrary lib;
  for ( auto const& e : entries )
  {
    std::string_view key = e.key;
    if ( key == "type" )
    {
    }
    else if ( key == "name" )
    {
      lib.name = e.value;
    }
    else if ( key.starts_with( "sigma_di." ) )
    {
      auto const v = parse_numbers( e, 1u )[0];
      if ( v < 0.0 )
      {
        throw format_error( fmt::format( "line {}: sigma_di must be >= 0", e.line ) );
      }
      lib.sigma_di[parse_kind( e, key.substr( 9 ) )] = v;
    }
    else if ( key.starts_with( "energy." ) )
    {
      lib.energy[parse_kind( e, key.substr( 7 ) )] = parse_numbers( e, 1u )[0];
    }
    else if ( key.starts_with( "diameter." ) )
    {
      unsigned n{};
      auto const idx = key.substr( 9 );
      auto const [ptr, ec] = std::from_chars( idx.data(), idx.data() + idx.size(), n );
      if ( ec != std::errc{} || ptr != idx.data() + idx.size() )
      {
        throw format_error( fmt::format( "line {}: bad chirality index '{}'", e.line, idx ) );
      }
      auto const v = parse_numbers( e, 2u );
      lib.diameters[n] = { v[0], v[1] };
    }
    else
    {
      throw format_error( fmt::format( "line {}: unknown key '{}' in cost library", e.line, key ) );
    }
  }
  return lib;
}

TimingLibrary parse_timing_library( std::string_view text )
{
  auto const entries = parse_entries( text );
  expect_type( entries, "timing" );
  TimingLibrary lib;
  for ( auto const& e : entries )
  {
    std::string_view key = e.key;
    if ( key == "type" )
    {
    }
    else if ( key == "name" )
    {
      lib.name = e.value;
    }
    else if ( key == "load" )
    {
      lib.load = e.value;
    }
    else if ( key.starts_with( "delay." ) )
    {
      auto const rest = key.substr( 6 );
      auto const dot = rest.find( '.' );
      auto const kind = parse_kind( e, rest.substr( 0, dot ) );
      auto const v = parse_numbers( e, 1u )[0];
      try
      {
        if ( dot == std::string_view::npos )
        {
          lib.set_all( kind, v );
        }
        else
        {
          lib.set( kind, rest.substr( dot + 1u ), v );
        }
      }
      catch ( library_error const& ex )
      {
        throw format_error( fmt::format( "line {}: {}", e.line, ex.what() ) );
      }
    }
    else
    {
      throw format_error( fmt::format( "line {}: unknown key '{}' in timing library", e.line, key ) );
    }
  }
  return lib;
}

std::string write_cost_library( CostLibrary const& lib )
{
  std::string s = fmt::format( "type = cost\nname = {}\n", lib.name );
  for ( auto [k, v] : lib.sigma_di )
  {
    s += fmt::format( "sigma_di.{} = {}\n", to_string( k ), v );
  }
  for ( auto [n, d] : lib.diameters )
  {
    s += fmt::format( "diameter.{} = {} {}\n", n, d.diameter_nm, d.vth_v );
  }
  for ( auto [k, v] : lib.energy )
  {
    s += fmt::format( "energy.{} = {}\n", to_string( k ), v );
  }
  return s;
}

std::string write_timing_library( TimingLibrary const& lib )
{
  std::string s = fmt::format( "type = timing\nname = {}\n", lib.name );
  if ( !lib.load.empty() )
  {
    s += fmt::format( "load = {}\n", lib.load );
  }
  for ( auto const& [key, v] : lib.delays )
  {
    s += fmt::format( "delay.{}.{} = {}\n", to_string( key.first ), key.second, v );
  }
  return s;
}

CostLibrary load_cost_library( std::filesystem::path const& path )
{
  return parse_cost_library( read_file( path ) );
}

TimingLibrary load_timing_library( std::filesystem::path const& path )
{
  return parse_timing_library( read_file( path ) );
}

} // namespace mvl
