#pragma once

/*! \file logic.hpp
  \brief Multi-valued logic levels and the behavioral semantics of every gate
         used by the binary and quaternary multipliers.

  Gates are behavioral blocks: each one is a pure function over small
  integers. Physical attributes (area, delay) live in the cost and timing
  libraries, see metrics.hpp.
*/

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace mvl
{

/// A logic value together with the largest value its signal may carry.
/// range_max is 1 for bits, 2 for trits, 3 for quits.
class LogicLevel
{
public:
  LogicLevel( unsigned value, unsigned range_max );

  unsigned value() const noexcept { return value_; }
  unsigned range_max() const noexcept { return range_max_; }

  bool operator==( LogicLevel const& ) const = default;

private:
  std::uint8_t value_;
  std::uint8_t range_max_;
};

inline LogicLevel bit( unsigned v ) { return LogicLevel( v, 1u ); }
inline LogicLevel trit( unsigned v ) { return LogicLevel( v, 2u ); }
inline LogicLevel quit( unsigned v ) { return LogicLevel( v, 3u ); }

/// A one-input quaternary operator. The name lists the outputs for inputs
/// 0,1,2,3, e.g. "0321" maps 1->3 and 3->1.
class UnaryTable
{
public:
  UnaryTable( std::string name, std::array<std::uint8_t, 4> outputs );

  /// Builds the table whose outputs are spelled by a 4-digit name.
  static UnaryTable from_name( std::string_view name );

  std::string const& name() const noexcept { return name_; }
  std::array<std::uint8_t, 4> const& outputs() const noexcept { return outputs_; }

private:
  std::string name_;
  std::array<std::uint8_t, 4> outputs_;
};

namespace unary
{
UnaryTable const& zero();     // 0000
UnaryTable const& identity(); // 0123
UnaryTable const& op0202();
UnaryTable const& op0321();
UnaryTable const& op0012();
UnaryTable const& op0001();
UnaryTable const& op0011();
UnaryTable const& op0111();
} // namespace unary

LogicLevel unary_apply( UnaryTable const& table, LogicLevel x );

/// Pseudo-binary outputs of the three threshold inverters; each is 0 or 3.
struct ThresholdOutputs
{
  LogicLevel nqi;
  LogicLevel iqi;
  LogicLevel pqi;
};

ThresholdOutputs decode_thresholds( LogicLevel x );

struct DigitProduct
{
  LogicLevel product; // quit
  LogicLevel carry;   // trit
};

struct AdderResult
{
  LogicLevel sum;
  LogicLevel carry;
};

/// 1x1 quit multiplier, straight from the product table.
DigitProduct qmul1( LogicLevel a, LogicLevel b );

/// 1x1 quit multiplier composed from a 4-way mux over unary operators, the
/// way the circuit is built.
DigitProduct qmul1_mux( LogicLevel a, LogicLevel b );

/// Quaternary full adder with a ternary carry in and out.
/// Throws range_error when cin exceeds 2.
AdderResult qfac2( LogicLevel a, LogicLevel b, LogicLevel cin );

/// QFAC2 without carry output. Throws range_error when cin exceeds 2 or when
/// the discarded carry would be nonzero.
LogicLevel qfac2wc( LogicLevel a, LogicLevel b, LogicLevel cin );

/// Quaternary half adder; carry is binary.
AdderResult qha( LogicLevel a, LogicLevel b );

AdderResult bin_fa( LogicLevel a, LogicLevel b, LogicLevel cin );
AdderResult bin_ha( LogicLevel a, LogicLevel b );
LogicLevel and2( LogicLevel a, LogicLevel b );

/// 4-input multiplexer with quaternary control: returns inputs[sel].
LogicLevel mux4( LogicLevel sel, std::array<LogicLevel, 4> const& inputs );

/* gate kinds */

enum class GateKind : std::uint8_t
{
  and2,
  bin_ha,
  bin_fa,
  qm1,
  qha,
  qfac2,
  qfac2wc,
  mux4,
  decoder
};

inline constexpr std::array<GateKind, 9> all_gate_kinds = {
    GateKind::and2, GateKind::bin_ha, GateKind::bin_fa, GateKind::qm1, GateKind::qha,
    GateKind::qfac2, GateKind::qfac2wc, GateKind::mux4, GateKind::decoder };

/// Tag used in files and reports: AND, BIN_HA, BIN_FA, QM1, QHA, QFAC2,
/// QFAC2WC, MUX4, DECODER.
std::string_view to_string( GateKind kind );
std::optional<GateKind> gate_kind_from_string( std::string_view tag );

struct PortSpec
{
  std::string_view name;
  std::uint8_t range_max;
};

struct GateSignature
{
  std::span<PortSpec const> inputs;
  std::span<PortSpec const> outputs;
};

GateSignature const& signature( GateKind kind );

/// Index of the carry-in port, if the kind has one.
std::optional<std::size_t> carry_in_port( GateKind kind );

/// Evaluates a gate on raw digit values. `in` and `out` must match the
/// signature's arity; input values are range-checked against the ports.
void evaluate_gate( GateKind kind, std::span<std::uint8_t const> in, std::span<std::uint8_t> out );

} // namespace mvl
