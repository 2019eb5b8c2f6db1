#pragma once

/*! \file netlist.hpp
  \brief Gate-level netlists of digit multipliers.

  A netlist is a plain value: wires, gate instances, and the operand / product
  digit wires. It can hold malformed structures (so that validate_netlist can
  report on them); analyses that need a DAG call topological_order(), which
  throws on cycles.
*/

#include <mvl/logic.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mvl
{

using WireId = std::uint32_t;
using GateId = std::uint32_t;

struct Wire
{
  WireId id;
  std::uint8_t range_max;
  std::string name;
  /// Set for tied-off wires (an empty product column).
  std::optional<std::uint8_t> constant;
};

enum class Phase : std::uint8_t
{
  partial_product,
  reduction,
  final_add,
  other
};

std::string_view to_string( Phase phase );

struct GateInstance
{
  GateId id;
  GateKind kind;
  std::vector<WireId> inputs;  // one per signature input port
  std::vector<WireId> outputs; // one per signature output port
  Phase phase = Phase::other;
  /// Reduction stage (1-based) for Phase::reduction gates, 0 otherwise.
  unsigned stage = 0;
  /// Digit column the gate sits in.
  unsigned column = 0;
};

struct Netlist
{
  unsigned radix = 2;
  unsigned width = 0;
  std::vector<Wire> wires;
  std::vector<GateInstance> gates;
  /// x0..x(N-1) followed by y0..y(N-1), least significant first.
  std::vector<WireId> inputs;
  /// Product digits, least significant first.
  std::vector<WireId> outputs;

  std::string design_id() const;
};

/* structure queries */

/// Gates in dependency order. Throws netlist_error on a combinational cycle or
/// a dangling wire reference.
std::vector<GateId> topological_order( Netlist const& n );

/// For every wire, the (gate, input port) pairs that read it.
std::vector<std::vector<std::pair<GateId, std::size_t>>> wire_consumers( Netlist const& n );

/// For every wire, the gate driving it (nullopt for inputs and constants).
std::vector<std::optional<GateId>> wire_drivers( Netlist const& n );

/* inventory */

class GateInventory
{
public:
  GateInventory() = default;
  explicit GateInventory( Netlist const& n );

  std::size_t count( GateKind kind ) const;
  std::size_t count( GateKind kind, Phase phase ) const;
  std::size_t total() const;
  /// QFAC2 and QFAC2WC together.
  std::size_t quaternary_full_adders() const;

  void add( GateKind kind, Phase phase, std::size_t n = 1 );

  std::map<GateKind, std::size_t> const& counts() const noexcept { return counts_; }

  bool operator==( GateInventory const& other ) const { return counts_ == other.counts_; }

private:
  std::map<GateKind, std::size_t> counts_;
  std::map<std::pair<GateKind, Phase>, std::size_t> by_phase_;
};

/// "{AND:64, BIN_FA:47, BIN_HA:17}", kinds with zero count omitted.
std::string format_inventory( GateInventory const& inv );

/* validation */

enum class ViolationKind : std::uint8_t
{
  bad_header,
  bad_reference,
  arity,
  multi_driver,
  undriven,
  range,
  cycle,
  output_incomplete
};

std::string_view to_string( ViolationKind kind );

struct Violation
{
  ViolationKind kind;
  std::string message;
  std::optional<GateId> gate;
  std::optional<WireId> wire;
};

/// Checks structure: acyclicity, one driver per wire, port-range
/// compatibility, and a complete 2N-digit product. Never throws.
std::vector<Violation> validate_netlist( Netlist const& n );

/* builder */

/// Incremental construction used by the generators. Gate output wires are
/// created with the ranges the caller provides.
class NetlistBuilder
{
public:
  NetlistBuilder( unsigned radix, unsigned width );

  WireId add_input( std::string name );
  WireId add_constant( std::uint8_t value, std::string name );

  struct Added
  {
    GateId gate;
    std::vector<WireId> outputs;
  };

  /// Adds a gate; output wire i gets range output_ranges[i]. Input wire
  /// ranges are checked against the signature (range_error on overflow).
  Added add_gate( GateKind kind, std::vector<WireId> inputs, std::vector<std::uint8_t> const& output_ranges,
                  Phase phase, unsigned stage, unsigned column );

  void set_outputs( std::vector<WireId> outputs );

  Wire const& wire( WireId id ) const { return netlist_.wires.at( id ); }
  unsigned radix() const noexcept { return netlist_.radix; }
  std::size_t num_gates() const noexcept { return netlist_.gates.size(); }

  /// Finishes the netlist: QFAC2 gates whose carry output is never read
  /// become QFAC2WC, then wire ids are compacted.
  Netlist build() &&;

private:
  Netlist netlist_;
};

/// Rewrites QFAC2 instances with an unread carry-out as QFAC2WC and drops the
/// orphaned wires. Returns the number of substitutions.
std::size_t substitute_carryless_adders( Netlist& n );

/* serialization */

inline constexpr int netlist_format_version = 1;

std::string to_json( Netlist const& n, int indent = 2 );
/// Parses without validating; throws format_error on malformed documents.
Netlist netlist_from_json( std::string const& text );

void write_netlist( Netlist const& n, std::ostream& os );
Netlist read_netlist( std::istream& is );

} // namespace mvl
