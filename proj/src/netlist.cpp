#include <mvl/netlist.hpp>

#include <mvl/error.hpp>

#include <fmt/format.h>

#include "json.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>

namespace mvl
{

std::string_view to_string( Phase phase )
{
  switch ( phase )
  {
  case Phase::partial_product:
    return "partial_product";
  case Phase::reduction:
    return "reduction";
  case Phase::final_add:
    return "final_add";
  case Phase::other:
    break;
  }
  return "other";
}

namespace
{

std::optional<Phase> phase_from_string( std::string_view s )
{
  for ( auto p : { Phase::partial_product, Phase::reduction, Phase::final_add, Phase::other } )
  {
    if ( to_string( p ) == s )
    {
      return p;
    }
  }
  return std::nullopt;
}

bool gate_refs_ok( Netlist const& n, GateInstance const& g )
{
  auto const in_range = [&]( WireId w ) { return w < n.wires.size(); };
  return std::all_of( g.inputs.begin(), g.inputs.end(), in_range ) &&
         std::all_of( g.outputs.begin(), g.outputs.end(), in_range );
}

} // namespace

std::string Netlist::design_id() const
{
  return fmt::format( "radix{}-{}x{}", radix, width, width );
}

std::vector<std::optional<GateId>> wire_drivers( Netlist const& n )
{
  std::vector<std::optional<GateId>> drivers( n.wires.size() );
  for ( auto const& g : n.gates )
  {
    for ( auto w : g.outputs )
    {
      if ( w < drivers.size() )
      {
        drivers[w] = g.id;
      }
    }
  }
  return drivers;
}

std::vector<std::vector<std::pair<GateId, std::size_t>>> wire_consumers( Netlist const& n )
{
  std::vector<std::vector<std::pair<GateId, std::size_t>>> consumers( n.wires.size() );
  for ( auto const& g : n.gates )
  {
    for ( auto p = 0u; p < g.inputs.size(); ++p )
    {
      if ( g.inputs[p] < consumers.size() )
      {
        consumers[g.inputs[p]].emplace_back( g.id, p );
      }
    }
  }
  return consumers;
}

std::vector<GateId> topological_order( Netlist const& n )
{
  for ( auto i = 0u; i < n.gates.size(); ++i )
  {
    if ( n.gates[i].id != i || !gate_refs_ok( n, n.gates[i] ) )
    {
      throw netlist_error( fmt::format( "gate {} has a bad id or wire reference", i ) );
    }
  }

  auto const drivers = wire_drivers( n );
  auto const consumers = wire_consumers( n );

  std::vector<std::size_t> pending( n.gates.size(), 0u );
  std::deque<GateId> ready;
  for ( auto const& g : n.gates )
  {
    for ( auto w : g.inputs )
    {
      if ( drivers[w] )
      {
        ++pending[g.id];
      }
    }
    if ( pending[g.id] == 0u )
    {
      ready.push_back( g.id );
    }
  }

  std::vector<GateId> order;
  order.reserve( n.gates.size() );
  while ( !ready.empty() )
  {
    auto const id = ready.front();
    ready.pop_front();
    order.push_back( id );
    for ( auto w : n.gates[id].outputs )
    {
      for ( auto [consumer, port] : consumers[w] )
      {
        (void)port;
        if ( --pending[consumer] == 0u )
        {
          ready.push_back( consumer );
        }
      }
    }
  }

  if ( order.size() != n.gates.size() )
  {
    throw netlist_error( fmt::format( "netlist has a combinational cycle through {} gates", n.gates.size() - order.size() ) );
  }
  return order;
}

/* inventory */

GateInventory::GateInventory( Netlist const& n )
{
  for ( auto const& g : n.gates )
  {
    add( g.kind, g.phase );
  }
}

void GateInventory::add( GateKind kind, Phase phase, std::size_t n )
{
  counts_[kind] += n;
  by_phase_[{ kind, phase }] += n;
}

std::size_t GateInventory::count( GateKind kind ) const
{
  auto const it = counts_.find( kind );
  return it == counts_.end() ? 0u : it->second;
}

std::size_t GateInventory::count( GateKind kind, Phase phase ) const
{
  auto const it = by_phase_.find( { kind, phase } );
  return it == by_phase_.end() ? 0u : it->second;
}

std::size_t GateInventory::total() const
{
  std::size_t t = 0;
  for ( auto const& [kind, c] : counts_ )
  {
    t += c;
  }
  return t;
}

std::size_t GateInventory::quaternary_full_adders() const
{
  return count( GateKind::qfac2 ) + count( GateKind::qfac2wc );
}

std::string format_inventory( GateInventory const& inv )
{
  std::vector<std::string> parts;
  for ( auto const& [kind, c] : inv.counts() )
  {
    if ( c != 0u )
    {
      parts.push_back( fmt::format( "{}:{}", to_string( kind ), c ) );
    }
  }
  return fmt::format( "{{{}}}", fmt::join( parts, ", " ) );
}

/* validation */

std::string_view to_string( ViolationKind kind )
{
  switch ( kind )
  {
  case ViolationKind::bad_header:
    return "bad_header";
  case ViolationKind::bad_reference:
    return "bad_reference";
  case ViolationKind::arity:
    return "arity";
  case ViolationKind::multi_driver:
    return "multi_driver";
  case ViolationKind::undriven:
    return "undriven";
  case ViolationKind::range:
    return "range";
  case ViolationKind::cycle:
    return "cycle";
  case ViolationKind::output_incomplete:
    return "output_incomplete";
  }
  return "unknown";
}

std::vector<Violation> validate_netlist( Netlist const& n )
{
  std::vector<Violation> out;
  auto const report = [&]( ViolationKind kind, std::string msg, std::optional<GateId> g = {}, std::optional<WireId> w = {} ) {
    out.push_back( { kind, std::move( msg ), g, w } );
  };

  if ( n.radix != 2u && n.radix != 4u )
  {
    report( ViolationKind::bad_header, fmt::format( "radix {} is not 2 or 4", n.radix ) );
  }
  if ( n.width == 0u )
  {
    report( ViolationKind::bad_header, "width is 0" );
  }
  if ( n.inputs.size() != 2u * n.width )
  {
    report( ViolationKind::bad_header, fmt::format( "expected {} operand digit inputs, found {}", 2u * n.width, n.inputs.size() ) );
  }

  std::vector<unsigned> driver_count( n.wires.size(), 0u );
  for ( auto i = 0u; i < n.wires.size(); ++i )
  {
    auto const& w = n.wires[i];
    if ( w.id != i )
    {
      report( ViolationKind::bad_reference, fmt::format( "wire at index {} carries id {}", i, w.id ), {}, i );
    }
    if ( w.range_max < 1u || w.range_max > 3u )
    {
      report( ViolationKind::range, fmt::format( "wire {} declares range_max {}", i, w.range_max ), {}, i );
    }
    if ( w.constant )
    {
      ++driver_count[i];
      if ( *w.constant > w.range_max )
      {
        report( ViolationKind::range, fmt::format( "constant wire {} holds {} above its range {}", i, *w.constant, w.range_max ), {}, i );
      }
    }
  }

  for ( auto w : n.inputs )
  {
    if ( w >= n.wires.size() )
    {
      report( ViolationKind::bad_reference, fmt::format( "input refers to missing wire {}", w ) );
      continue;
    }
    ++driver_count[w];
    if ( n.wires[w].range_max + 1u > n.radix && n.radix != 0u )
    {
      report( ViolationKind::range, fmt::format( "input wire {} range {} exceeds radix {}", w, n.wires[w].range_max, n.radix ), {}, w );
    }
  }

  bool refs_ok = true;
  for ( auto i = 0u; i < n.gates.size(); ++i )
  {
    auto const& g = n.gates[i];
    if ( g.id != i )
    {
      report( ViolationKind::bad_reference, fmt::format( "gate at index {} carries id {}", i, g.id ), i );
      refs_ok = false;
    }
    if ( !gate_refs_ok( n, g ) )
    {
      report( ViolationKind::bad_reference, fmt::format( "gate {} refers to a missing wire", i ), i );
      refs_ok = false;
      continue;
    }
    auto const& sig = signature( g.kind );
    if ( g.inputs.size() != sig.inputs.size() || g.outputs.size() != sig.outputs.size() )
    {
      report( ViolationKind::arity,
              fmt::format( "{} gate {} has {}/{} ports, expected {}/{}", to_string( g.kind ), i, g.inputs.size(),
                           g.outputs.size(), sig.inputs.size(), sig.outputs.size() ),
              i );
      refs_ok = false;
      continue;
    }
    for ( auto w : g.outputs )
    {
      ++driver_count[w];
    }
    for ( auto p = 0u; p < g.inputs.size(); ++p )
    {
      auto const& w = n.wires[g.inputs[p]];
      if ( w.range_max > sig.inputs[p].range_max )
      {
        auto const carry = carry_in_port( g.kind ) == p;
        report( ViolationKind::range,
                fmt::format( "wire {} (range {}) feeds {}port {} of {} gate {} (range {})", w.id, w.range_max,
                             carry ? "carry " : "", sig.inputs[p].name, to_string( g.kind ), i, sig.inputs[p].range_max ),
                i, w.id );
      }
    }
    for ( auto p = 0u; p < g.outputs.size(); ++p )
    {
      auto const& w = n.wires[g.outputs[p]];
      if ( w.range_max > sig.outputs[p].range_max )
      {
        report( ViolationKind::range,
                fmt::format( "wire {} declares range {} above output port {} of {} gate {}", w.id, w.range_max,
                             sig.outputs[p].name, to_string( g.kind ), i ),
                i, w.id );
      }
    }
  }

  for ( auto i = 0u; i < n.wires.size(); ++i )
  {
    if ( driver_count[i] > 1u )
    {
      report( ViolationKind::multi_driver, fmt::format( "wire {} has {} drivers", i, driver_count[i] ), {}, i );
    }
    else if ( driver_count[i] == 0u )
    {
      report( ViolationKind::undriven, fmt::format( "wire {} has no driver", i ), {}, i );
    }
  }

  if ( n.outputs.size() != 2u * n.width )
  {
    report( ViolationKind::output_incomplete, fmt::format( "expected {} product digits, found {}", 2u * n.width, n.outputs.size() ) );
  }
  for ( auto w : n.outputs )
  {
    if ( w >= n.wires.size() )
    {
      report( ViolationKind::output_incomplete, fmt::format( "product digit refers to missing wire {}", w ) );
    }
    else if ( n.wires[w].range_max + 1u > n.radix && n.radix != 0u )
    {
      report( ViolationKind::range, fmt::format( "product digit wire {} range {} exceeds a digit", w, n.wires[w].range_max ), {}, w );
    }
  }

  if ( refs_ok )
  {
    try
    {
      (void)topological_order( n );
    }
    catch ( netlist_error const& e )
    {
      report( ViolationKind::cycle, e.what() );
    }
  }
  return out;
}

/* builder */

NetlistBuilder::NetlistBuilder( unsigned radix, unsigned width )
{
  netlist_.radix = radix;
  netlist_.width = width;
}

WireId NetlistBuilder::add_input( std::string name )
{
  auto const id = static_cast<WireId>( netlist_.wires.size() );
  netlist_.wires.push_back( { id, static_cast<std::uint8_t>( netlist_.radix - 1u ), std::move( name ), std::nullopt } );
  netlist_.inputs.push_back( id );
  return id;
}

WireId NetlistBuilder::add_constant( std::uint8_t value, std::string name )
{
  auto const id = static_cast<WireId>( netlist_.wires.size() );
  netlist_.wires.push_back( { id, std::max<std::uint8_t>( value, 1u ), std::move( name ), value } );
  return id;
}

NetlistBuilder::Added NetlistBuilder::add_gate( GateKind kind, std::vector<WireId> inputs,
                                                std::vector<std::uint8_t> const& output_ranges, Phase phase,
                                                unsigned stage, unsigned column )
{
  auto const& sig = signature( kind );
  if ( inputs.size() != sig.inputs.size() || output_ranges.size() != sig.outputs.size() )
  {
    throw netlist_error( fmt::format( "{} gate needs {} inputs and {} outputs", to_string( kind ), sig.inputs.size(), sig.outputs.size() ) );
  }
  auto const gate = static_cast<GateId>( netlist_.gates.size() );
  for ( auto p = 0u; p < inputs.size(); ++p )
  {
    auto const& w = netlist_.wires.at( inputs[p] );
    if ( w.range_max > sig.inputs[p].range_max )
    {
      throw range_error( fmt::format( "wire {} (range {}) cannot drive port {} of {} (range {})", w.name, w.range_max,
                                      sig.inputs[p].name, to_string( kind ), sig.inputs[p].range_max ) );
    }
  }

  Added added{ gate, {} };
  for ( auto p = 0u; p < output_ranges.size(); ++p )
  {
    if ( output_ranges[p] < 1u || output_ranges[p] > sig.outputs[p].range_max )
    {
      throw range_error( fmt::format( "output range {} invalid for port {} of {}", output_ranges[p], sig.outputs[p].name, to_string( kind ) ) );
    }
    auto const id = static_cast<WireId>( netlist_.wires.size() );
    netlist_.wires.push_back( { id, output_ranges[p], fmt::format( "g{}_{}", gate, sig.outputs[p].name ), std::nullopt } );
    added.outputs.push_back( id );
  }
  netlist_.gates.push_back( { gate, kind, std::move( inputs ), added.outputs, phase, stage, column } );
  return added;
}

void NetlistBuilder::set_outputs( std::vector<WireId> outputs )
{
  netlist_.outputs = std::move( outputs );
}

Netlist NetlistBuilder::build() &&
{
  substitute_carryless_adders( netlist_ );
  return std::move( netlist_ );
}

std::size_t substitute_carryless_adders( Netlist& n )
{
  auto const consumers = wire_consumers( n );
  std::set<WireId> const outputs( n.outputs.begin(), n.outputs.end() );

  std::vector<bool> dropped( n.wires.size(), false );
  std::size_t substituted = 0;
  for ( auto& g : n.gates )
  {
    if ( g.kind != GateKind::qfac2 )
    {
      continue;
    }
    auto const cout = g.outputs[1];
    if ( consumers[cout].empty() && !outputs.contains( cout ) )
    {
      g.kind = GateKind::qfac2wc;
      g.outputs.pop_back();
      dropped[cout] = true;
      ++substituted;
    }
  }
  if ( substituted == 0u )
  {
    return 0u;
  }

  std::vector<WireId> remap( n.wires.size() );
  std::vector<Wire> wires;
  wires.reserve( n.wires.size() - substituted );
  for ( auto i = 0u; i < n.wires.size(); ++i )
  {
    if ( dropped[i] )
    {
      continue;
    }
    remap[i] = static_cast<WireId>( wires.size() );
    wires.push_back( n.wires[i] );
    wires.back().id = remap[i];
  }
  auto const apply = [&]( std::vector<WireId>& ids ) {
    for ( auto& w : ids )
    {
      w = remap[w];
    }
  };
  for ( auto& g : n.gates )
  {
    apply( g.inputs );
    apply( g.outputs );
  }
  apply( n.inputs );
  apply( n.outputs );
  n.wires = std::move( wires );
  return substituted;
}

/* serialization */

namespace
{

using json = nlohmann::json;

template<typename T>
T field( json const& j, char const* key )
{
  if ( !j.contains( key ) )
  {
    throw format_error( fmt::format( "netlist JSON lacks '{}'", key ) );
  }
  try
  {
    return j.at( key ).get<T>();
  }
  catch ( json::exception const& e )
  {
    throw format_error( fmt::format( "netlist JSON field '{}': {}", key, e.what() ) );
  }
}

} // namespace

std::string to_json( Netlist const& n, int indent )
{
  json j;
  j["format"] = "mvl-netlist";
  j["version"] = netlist_format_version;
  j["radix"] = n.radix;
  j["width"] = n.width;

  auto& wires = j["wires"] = json::array();
  for ( auto const& w : n.wires )
  {
    json jw{ { "id", w.id }, { "range_max", w.range_max }, { "name", w.name } };
    if ( w.constant )
    {
      jw["constant"] = *w.constant;
    }
    wires.push_back( std::move( jw ) );
  }

  auto& gates = j["gates"] = json::array();
  for ( auto const& g : n.gates )
  {
    gates.push_back( { { "id", g.id },
                       { "kind", std::string( to_string( g.kind ) ) },
                       { "inputs", g.inputs },
                       { "outputs", g.outputs },
                       { "phase", std::string( to_string( g.phase ) ) },
                       { "stage", g.stage },
                       { "column", g.column } } );
  }
  j["inputs"] = n.inputs;
  j["outputs"] = n.outputs;
  return j.dump( indent );
}

Netlist netlist_from_json( std::string const& text )
{
  json j;
  try
  {
    j = json::parse( text );
  }
  catch ( json::parse_error const& e )
  {
    throw format_error( fmt::format( "netlist is not valid JSON: {}", e.what() ) );
  }
  if ( !j.is_object() || j.value( "format", std::string{} ) != "mvl-netlist" )
  {
    throw format_error( "document is not an mvl-netlist" );
  }
  if ( auto const v = field<int>( j, "version" ); v != netlist_format_version )
  {
    throw format_error( fmt::format( "unsupported netlist version {}", v ) );
  }

  try
  {
    Netlist n;
    n.radix = field<unsigned>( j, "radix" );
    n.width = field<unsigned>( j, "width" );
    for ( auto const& jw : field<json>( j, "wires" ) )
    {
      Wire w{ field<WireId>( jw, "id" ), field<std::uint8_t>( jw, "range_max" ), jw.value( "name", std::string{} ), std::nullopt };
      if ( jw.contains( "constant" ) )
      {
        w.constant = field<std::uint8_t>( jw, "constant" );
      }
      n.wires.push_back( std::move( w ) );
    }
    for ( auto const& jg : field<json>( j, "gates" ) )
    {
      auto const tag = field<std::string>( jg, "kind" );
      auto const kind = gate_kind_from_string( tag );
      if ( !kind )
      {
        throw format_error( fmt::format( "unknown gate kind '{}'", tag ) );
      }
      GateInstance g{ field<GateId>( jg, "id" ), *kind, field<std::vector<WireId>>( jg, "inputs" ),
                      field<std::vector<WireId>>( jg, "outputs" ) };
      auto const phase = phase_from_string( jg.value( "phase", std::string( "other" ) ) );
      if ( !phase )
      {
        throw format_error( fmt::format( "gate {} has an unknown phase", g.id ) );
      }
      g.phase = *phase;
      g.stage = jg.value( "stage", 0u );
      g.column = jg.value( "column", 0u );
      n.gates.push_back( std::move( g ) );
    }
    n.inputs = field<std::vector<WireId>>( j, "inputs" );
    n.outputs = field<std::vector<WireId>>( j, "outputs" );
    return n;
  }
  catch ( json::exception const& e )
  {
    throw format_error( fmt::format( "netlist JSON: {}", e.what() ) );
  }
}

void write_netlist( Netlist const& n, std::ostream& os )
{
  os << to_json( n ) << '\n';
}

Netlist read_netlist( std::istream& is )
{
  std::string const text( std::istreambuf_iterator<char>( is ), {} );
  return netlist_from_json( text );
}

} // namespace mvl
