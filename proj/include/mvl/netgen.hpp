#pragma once

/*! \file netgen.hpp
  \brief Wallace-tree multiplier generation in radix 2 and radix 4.

  Generation runs in three steps over a dot matrix: partial products, Wallace
  reduction stages until every column holds at most two dots, and a ripple
  carry-propagate add.

  Reduction uses classic row grouping: rows are taken three at a time from
  the top, and inside each group a column with three dots gets a full adder,
  two dots a half adder, and a single dot passes. Sums stay in their column,
  carries move one column left. Once no column is taller than three, the last
  stage compresses every column directly. In radix 4 the full adder is QFAC2,
  whose carry-in port takes ternary values only, so a column of three
  quaternary dots falls back to QHA plus a passing dot.

  Dots landing at or beyond column 2N are provably zero (the product fits in
  2N digits) and are dropped. QFAC2 gates left with an unread carry become
  QFAC2WC.
*/

#include <mvl/netlist.hpp>

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mvl
{

struct Dot
{
  WireId wire;
  std::uint8_t range_max;
};

/// Partial-product bits (or digits) arranged by weight. Rows keep the order in
/// which terms were produced; within a column, dots are ordered oldest first.
class DotMatrix
{
public:
  using Row = std::vector<std::pair<unsigned, Dot>>; // (column, dot), ascending columns

  DotMatrix( unsigned radix, unsigned num_columns );

  unsigned radix() const noexcept { return radix_; }
  unsigned num_columns() const noexcept { return num_columns_; }
  std::vector<Row> const& rows() const noexcept { return rows_; }

  /// Appends a row; dots at columns >= num_columns() are dropped. Returns the
  /// number of dropped dots.
  std::size_t add_row( Row row );

  /// Dots of every column, oldest first.
  std::vector<std::vector<Dot>> columns() const;
  std::size_t height( unsigned column ) const;
  std::size_t max_height() const;
  std::size_t dot_count() const;

  /// Sum over dots of range_max * radix^column.
  unsigned __int128 capacity() const;

private:
  unsigned radix_;
  unsigned num_columns_;
  std::vector<Row> rows_;
};

/// (radix^x_width - 1) * (radix^y_width - 1)
unsigned __int128 max_product( unsigned radix, unsigned x_width, unsigned y_width );

/// x_width*y_width AND gates; bit x_i*y_j lands in column i+j. Row j holds
/// the products with y_j.
DotMatrix build_pp_binary( NetlistBuilder& b, std::span<WireId const> x, std::span<WireId const> y );

/// x_width*y_width QM1 gates. Digit pair (i,j) puts its product quit in column
/// i+j and its ternary carry in column i+j+1. Rows alternate: products with
/// y_j, then carries with y_j.
DotMatrix build_pp_quaternary( NetlistBuilder& b, std::span<WireId const> x, std::span<WireId const> y );

struct StageResult
{
  DotMatrix matrix;
  std::vector<GateId> gates;
};

/// One Wallace reduction stage. A matrix with no column taller than two is
/// returned unchanged. `stage` is recorded on the new gates.
StageResult wallace_stage( NetlistBuilder& b, DotMatrix const& matrix, unsigned stage );

struct FinalAdd
{
  std::vector<WireId> digits; // one per column, least significant first
  std::vector<GateId> gates;
};

/// Ripple carry-propagate add over a matrix with at most two dots per column.
/// Empty columns become constant-zero digits. Throws netlist_error on taller
/// columns.
FinalAdd final_cpa( NetlistBuilder& b, DotMatrix const& matrix );

struct GenerationTrace
{
  std::vector<std::size_t> heights; // max column height before each stage and after the last
  std::vector<unsigned __int128> capacities;
  unsigned stages = 0;
};

/// Complete N x N multiplier. Throws netlist_error for radix other than 2/4
/// or width outside 1..max_width.
Netlist gen_multiplier( unsigned radix, unsigned width, GenerationTrace* trace = nullptr );

inline constexpr unsigned max_width = 16;

} // namespace mvl
