#pragma once

#include <mvl/netlist.hpp>

#include <iosfwd>
#include <string>

namespace mvl
{

/// Hierarchical SPICE-style structural deck. Every gate kind used by n gets a
/// black-box .SUBCKT with its port list; the top cell MUL_R<radix>_W<width>
/// instantiates one X<gate id> per gate. The text depends only on n.
std::string export_spice( Netlist const& n );
void write_spice( Netlist const& n, std::ostream& os );

} // namespace mvl
