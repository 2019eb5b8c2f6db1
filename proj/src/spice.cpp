#include <mvl/spice.hpp>

#include <fmt/format.h>

#include <ostream>
#include <set>

namespace mvl
{

namespace
{

std::string net_name( Netlist const& n, WireId w )
{
  auto const& wire = n.wires.at( w );
  if ( wire.constant )
  {
    return fmt::format( "const{}", *wire.constant );
  }
  return wire.name.empty() ? fmt::format( "w{}", w ) : wire.name;
}

} // namespace

std::string export_spice( Netlist const& n )
{
  std::string s = fmt::format( "* {} structural deck\n* radix {}, width {}, {} gates\n\n", n.design_id(), n.radix, n.width, n.gates.size() );

  std::set<GateKind> used;
  for ( auto const& g : n.gates )
  {
    used.insert( g.kind );
  }
  for ( auto k : used )
  {
    auto const& sig = signature( k );
    s += fmt::format( ".SUBCKT {}", to_string( k ) );
    for ( auto const& p : sig.inputs )
    {
      s += fmt::format( " {}", p.name );
    }
    for ( auto const& p : sig.outputs )
    {
      s += fmt::format( " {}", p.name );
    }
    s += fmt::format( "\n* black box\n.ENDS {}\n\n", to_string( k ) );
  }

  s += fmt::format( ".SUBCKT MUL_R{}_W{}", n.radix, n.width );
  for ( auto w : n.inputs )
  {
    s += " " + net_name( n, w );
  }
  for ( auto i = 0u; i < n.outputs.size(); ++i )
  {
    s += fmt::format( " p{}", i );
  }
  s += "\n";
  for ( auto const& g : n.gates )
  {
    s += fmt::format( "Xg{}", g.id );
    for ( auto w : g.inputs )
    {
      s += " " + net_name( n, w );
    }
    for ( auto w : g.outputs )
    {
      s += " " + net_name( n, w );
    }
    s += fmt::format( " {}\n", to_string( g.kind ) );
  }
  std::set<unsigned> constants;
  for ( auto const& w : n.wires )
  {
    if ( w.constant )
    {
      constants.insert( *w.constant );
    }
  }
  for ( auto c : constants )
  {
    s += fmt::format( "Vconst{} const{} 0 {}\n", c, c, c );
  }
  // product pins alias the digit nets
  for ( auto i = 0u; i < n.outputs.size(); ++i )
  {
    s += fmt::format( "Vp{} p{} {} 0\n", i, i, net_name( n, n.outputs[i] ) );
  }
  s += fmt::format( ".ENDS MUL_R{}_W{}\n.END\n", n.radix, n.width );
  return s;
}

void write_spice( Netlist const& n, std::ostream& os )
{
  os << export_spice( n );
}

} // namespace mvl
