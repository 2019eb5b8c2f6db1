#pragma once

/*! \file sim.hpp
  \brief Zero-delay functional simulation and verification against integer
         multiplication.
*/

#include <mvl/netlist.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mvl
{

/// Values of the primary inputs, keyed by wire id.
using Assignment = std::map<WireId, LogicLevel>;

/// Assignment from operand digits (least significant first).
Assignment make_assignment( Netlist const& n, std::span<unsigned const> x, std::span<unsigned const> y );

/// Product digits of n under a, least significant first. Throws range_error
/// on a missing or out-of-range input, and on any wire whose simulated value
/// exceeds its declared range.
std::vector<unsigned> evaluate( Netlist const& n, Assignment const& a );

/// Reusable evaluator: the topological order is computed once.
class Evaluator
{
public:
  explicit Evaluator( Netlist const& n );

  /// Same contract as evaluate(); `inputs` follows Netlist::inputs.
  std::vector<unsigned> operator()( std::span<std::uint8_t const> inputs );

  /// Value of every wire after the last call.
  std::vector<std::uint8_t> const& wire_values() const noexcept { return values_; }

private:
  Netlist const& n_;
  std::vector<GateId> order_;
  std::vector<std::uint8_t> values_;
  std::vector<std::uint8_t> in_buf_, out_buf_;
};

unsigned __int128 digits_to_integer( unsigned radix, std::span<unsigned const> digits );
std::vector<unsigned> integer_to_digits( unsigned radix, unsigned __int128 value, std::size_t count );

/// Expected 2N product digits of x*y.
std::vector<unsigned> oracle( unsigned radix, unsigned width, std::span<unsigned const> x, std::span<unsigned const> y );

enum class VerifyMode : std::uint8_t
{
  exhaustive,
  random
};

struct Mismatch
{
  std::vector<unsigned> x, y;
  std::vector<unsigned> expected;
  std::vector<unsigned> got; // empty when evaluation aborted
  std::string reason;        // set for range faults
};

struct VerificationReport
{
  std::string design_id;
  VerifyMode mode = VerifyMode::exhaustive;
  std::optional<std::uint64_t> seed;
  std::uint64_t vectors = 0;
  std::vector<Mismatch> mismatches;

  bool passed() const noexcept { return mismatches.empty(); }
};

struct VerifyOptions
{
  std::uint64_t cap = std::uint64_t{ 1 } << 20;
  unsigned workers = 1;
};

/// Size of the input space, radix^(2N); nullopt when it does not fit 64 bits.
std::optional<std::uint64_t> input_space( Netlist const& n );

/// Every (x, y) pair. Throws error when the space exceeds opts.cap.
VerificationReport verify_exhaustive( Netlist const& n, VerifyOptions const& opts = {} );

/// `count` vectors drawn from a mt19937_64 stream seeded with `seed`. Throws
/// error when count is 0.
VerificationReport verify_random( Netlist const& n, std::uint64_t count, std::uint64_t seed, VerifyOptions const& opts = {} );

/// The operand pairs verify_random draws for (count, seed).
std::vector<std::pair<std::vector<unsigned>, std::vector<unsigned>>> random_vectors( unsigned radix, unsigned width,
                                                                                      std::uint64_t count, std::uint64_t seed );

std::string to_json( VerificationReport const& r, int indent = 2 );

} // namespace mvl
