#include <mvl/netgen.hpp>

#include <mvl/error.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <map>

namespace mvl
{

DotMatrix::DotMatrix( unsigned radix, unsigned num_columns ) : radix_( radix ), num_columns_( num_columns )
{
  if ( radix != 2u && radix != 4u )
  {
    throw netlist_error( fmt::format( "dot matrix radix {} is not 2 or 4", radix ) );
  }
}

std::size_t DotMatrix::add_row( Row row )
{
  auto const before = row.size();
  std::erase_if( row, [&]( auto const& e ) { return e.first >= num_columns_; } );
  auto const dropped = before - row.size();
  if ( !row.empty() )
  {
    rows_.push_back( std::move( row ) );
  }
  return dropped;
}

std::vector<std::vector<Dot>> DotMatrix::columns() const
{
  std::vector<std::vector<Dot>> cols( num_columns_ );
  for ( auto const& row : rows_ )
  {
    for ( auto const& [c, dot] : row )
    {
      cols[c].push_back( dot );
    }
  }
  return cols;
}

std::size_t DotMatrix::height( unsigned column ) const
{
  std::size_t h = 0;
  for ( auto const& row : rows_ )
  {
    h += std::count_if( row.begin(), row.end(), [&]( auto const& e ) { return e.first == column; } );
  }
  return h;
}

std::size_t DotMatrix::max_height() const
{
  std::size_t m = 0;
  for ( auto const& col : columns() )
  {
    m = std::max( m, col.size() );
  }
  return m;
}

std::size_t DotMatrix::dot_count() const
{
  std::size_t n = 0;
  for ( auto const& row : rows_ )
  {
    n += row.size();
  }
  return n;
}

unsigned __int128 DotMatrix::capacity() const
{
  unsigned __int128 total = 0;
  for ( auto const& row : rows_ )
  {
    for ( auto const& [c, dot] : row )
    {
      unsigned __int128 weight = 1;
      for ( auto k = 0u; k < c; ++k )
      {
        weight *= radix_;
      }
      total += weight * dot.range_max;
    }
  }
  return total;
}

unsigned __int128 max_product( unsigned radix, unsigned x_width, unsigned y_width )
{
  unsigned __int128 x = 1, y = 1;
  for ( auto k = 0u; k < x_width; ++k )
  {
    x *= radix;
  }
  for ( auto k = 0u; k < y_width; ++k )
  {
    y *= radix;
  }
  return ( x - 1u ) * ( y - 1u );
}

DotMatrix build_pp_binary( NetlistBuilder& b, std::span<WireId const> x, std::span<WireId const> y )
{
  if ( x.empty() || y.empty() )
  {
    throw netlist_error( "partial products need operands of width >= 1" );
  }
  DotMatrix m( 2u, static_cast<unsigned>( x.size() + y.size() ) );
  for ( auto j = 0u; j < y.size(); ++j )
  {
    DotMatrix::Row row;
    for ( auto i = 0u; i < x.size(); ++i )
    {
      auto const added = b.add_gate( GateKind::and2, { x[i], y[j] }, { 1u }, Phase::partial_product, 0u, i + j );
      row.emplace_back( i + j, Dot{ added.outputs[0], 1u } );
    }
    m.add_row( std::move( row ) );
  }
  return m;
}

DotMatrix build_pp_quaternary( NetlistBuilder& b, std::span<WireId const> x, std::span<WireId const> y )
{
  if ( x.empty() || y.empty() )
  {
    throw netlist_error( "partial products need operands of width >= 1" );
  }
  DotMatrix m( 4u, static_cast<unsigned>( x.size() + y.size() ) );
  for ( auto j = 0u; j < y.size(); ++j )
  {
    DotMatrix::Row products, carries;
    for ( auto i = 0u; i < x.size(); ++i )
    {
      auto const added = b.add_gate( GateKind::qm1, { x[i], y[j] }, { 3u, 2u }, Phase::partial_product, 0u, i + j );
      products.emplace_back( i + j, Dot{ added.outputs[0], 3u } );
      carries.emplace_back( i + j + 1u, Dot{ added.outputs[1], 2u } );
    }
    m.add_row( std::move( products ) );
    m.add_row( std::move( carries ) );
  }
  return m;
}

namespace
{

struct AdderOut
{
  Dot sum;
  Dot carry;
  GateId gate;
};

/// Half adder on two dots (HA or QHA).
AdderOut add_half( NetlistBuilder& b, unsigned radix, Dot a, Dot c, Phase phase, unsigned stage, unsigned column )
{
  if ( radix == 2u )
  {
    auto const added = b.add_gate( GateKind::bin_ha, { a.wire, c.wire }, { 1u, 1u }, phase, stage, column );
    return { { added.outputs[0], 1u }, { added.outputs[1], 1u }, added.gate };
  }
  unsigned const top = a.range_max + c.range_max;
  auto const sum_range = static_cast<std::uint8_t>( std::min( 3u, top ) );
  auto const carry_range = static_cast<std::uint8_t>( std::max( 1u, top / 4u ) );
  auto const added = b.add_gate( GateKind::qha, { a.wire, c.wire }, { sum_range, carry_range }, phase, stage, column );
  return { { added.outputs[0], sum_range }, { added.outputs[1], carry_range }, added.gate };
}

/// Full adder on three dots; `cin` goes to the carry-in port.
AdderOut add_full( NetlistBuilder& b, unsigned radix, Dot a, Dot c, Dot cin, Phase phase, unsigned stage, unsigned column )
{
  if ( radix == 2u )
  {
    auto const added = b.add_gate( GateKind::bin_fa, { a.wire, c.wire, cin.wire }, { 1u, 1u }, phase, stage, column );
    return { { added.outputs[0], 1u }, { added.outputs[1], 1u }, added.gate };
  }
  unsigned const top = a.range_max + c.range_max + cin.range_max;
  auto const sum_range = static_cast<std::uint8_t>( std::min( 3u, top ) );
  auto const carry_range = static_cast<std::uint8_t>( std::max( 1u, top / 4u ) );
  auto const added = b.add_gate( GateKind::qfac2, { a.wire, c.wire, cin.wire }, { sum_range, carry_range }, phase, stage, column );
  return { { added.outputs[0], sum_range }, { added.outputs[1], carry_range }, added.gate };
}

/// Index of the dot that should drive a QFAC2 carry-in: the narrowest one,
/// oldest on ties. nullopt when every dot is a full quit.
std::optional<std::size_t> pick_carry_in( std::vector<Dot> const& dots )
{
  std::optional<std::size_t> best;
  for ( auto i = 0u; i < dots.size(); ++i )
  {
    if ( dots[i].range_max <= 2u && ( !best || dots[i].range_max < dots[*best].range_max ) )
    {
      best = i;
    }
  }
  return best;
}

std::vector<DotMatrix::Row> packed_rows( DotMatrix const& m )
{
  auto const cols = m.columns();
  std::vector<DotMatrix::Row> rows;
  for ( auto c = 0u; c < cols.size(); ++c )
  {
    for ( auto k = 0u; k < cols[c].size(); ++k )
    {
      if ( rows.size() <= k )
      {
        rows.resize( k + 1u );
      }
      rows[k].emplace_back( c, cols[c][k] );
    }
  }
  return rows;
}

} // namespace

StageResult wallace_stage( NetlistBuilder& b, DotMatrix const& matrix, unsigned stage )
{
  if ( matrix.max_height() <= 2u )
  {
    return { matrix, {} };
  }
  auto const radix = matrix.radix();
  auto const rows = matrix.max_height() <= 3u ? packed_rows( matrix ) : matrix.rows();

  StageResult result{ DotMatrix( radix, matrix.num_columns() ), {} };
  auto const groups = rows.size() / 3u;
  for ( auto g = 0u; g < groups; ++g )
  {
    std::map<unsigned, std::vector<Dot>> cols;
    for ( auto r = 3u * g; r < 3u * g + 3u; ++r )
    {
      for ( auto const& [c, dot] : rows[r] )
      {
        cols[c].push_back( dot );
      }
    }

    DotMatrix::Row sums, carries, passed;
    for ( auto& [c, dots] : cols )
    {
      if ( dots.size() == 1u )
      {
        sums.emplace_back( c, dots[0] );
        continue;
      }
      std::optional<AdderOut> out;
      if ( dots.size() == 3u )
      {
        if ( radix == 2u )
        {
          out = add_full( b, radix, dots[0], dots[1], dots[2], Phase::reduction, stage, c );
        }
        else if ( auto const ci = pick_carry_in( dots ) )
        {
          std::vector<Dot> operands;
          for ( auto i = 0u; i < 3u; ++i )
          {
            if ( i != *ci )
            {
              operands.push_back( dots[i] );
            }
          }
          out = add_full( b, radix, operands[0], operands[1], dots[*ci], Phase::reduction, stage, c );
        }
        else
        {
          out = add_half( b, radix, dots[0], dots[1], Phase::reduction, stage, c );
          passed.emplace_back( c, dots[2] );
        }
      }
      else
      {
        out = add_half( b, radix, dots[0], dots[1], Phase::reduction, stage, c );
      }
      sums.emplace_back( c, out->sum );
      carries.emplace_back( c + 1u, out->carry );
      result.gates.push_back( out->gate );
    }
    result.matrix.add_row( std::move( sums ) );
    result.matrix.add_row( std::move( carries ) );
    result.matrix.add_row( std::move( passed ) );
  }
  for ( auto r = 3u * groups; r < rows.size(); ++r )
  {
    result.matrix.add_row( rows[r] );
  }
  return result;
}

FinalAdd final_cpa( NetlistBuilder& b, DotMatrix const& matrix )
{
  if ( matrix.max_height() > 2u )
  {
    throw netlist_error( fmt::format( "final add needs at most two rows, column height is {}", matrix.max_height() ) );
  }
  auto const radix = matrix.radix();
  auto const cols = matrix.columns();

  FinalAdd result;
  std::optional<Dot> carry;
  for ( auto c = 0u; c < cols.size(); ++c )
  {
    auto dots = cols[c];
    if ( carry )
    {
      dots.push_back( *carry );
      carry.reset();
    }

    if ( dots.empty() )
    {
      result.digits.push_back( b.add_constant( 0u, fmt::format( "p{}_zero", c ) ) );
      continue;
    }
    if ( dots.size() == 1u )
    {
      result.digits.push_back( dots[0].wire );
      continue;
    }

    AdderOut out;
    if ( dots.size() == 2u )
    {
      out = add_half( b, radix, dots[0], dots[1], Phase::final_add, 0u, c );
    }
    else
    {
      auto const ci = radix == 2u ? std::optional<std::size_t>( 2u ) : pick_carry_in( dots );
      std::vector<Dot> operands;
      for ( auto i = 0u; i < 3u; ++i )
      {
        if ( i != *ci )
        {
          operands.push_back( dots[i] );
        }
      }
      out = add_full( b, radix, operands[0], operands[1], dots[*ci], Phase::final_add, 0u, c );
    }
    result.gates.push_back( out.gate );
    result.digits.push_back( out.sum.wire );
    if ( c + 1u < cols.size() )
    {
      carry = out.carry;
    }
  }
  return result;
}

Netlist gen_multiplier( unsigned radix, unsigned width, GenerationTrace* trace )
{
  if ( radix != 2u && radix != 4u )
  {
    throw netlist_error( fmt::format( "radix {} is not supported (use 2 or 4)", radix ) );
  }
  if ( width < 1u || width > max_width )
  {
    throw netlist_error( fmt::format( "width {} is outside 1..{}", width, max_width ) );
  }

  NetlistBuilder b( radix, width );
  std::vector<WireId> x, y;
  for ( auto i = 0u; i < width; ++i )
  {
    x.push_back( b.add_input( fmt::format( "x{}", i ) ) );
  }
  for ( auto i = 0u; i < width; ++i )
  {
    y.push_back( b.add_input( fmt::format( "y{}", i ) ) );
  }

  auto matrix = radix == 2u ? build_pp_binary( b, x, y ) : build_pp_quaternary( b, x, y );
  unsigned stage = 0;
  auto height = matrix.max_height();
  if ( trace )
  {
    trace->heights.push_back( height );
    trace->capacities.push_back( matrix.capacity() );
  }
  while ( height > 2u )
  {
    auto next = wallace_stage( b, matrix, ++stage );
    auto const next_height = next.matrix.max_height();
    if ( next_height >= height )
    {
      throw netlist_error( fmt::format( "reduction stage {} did not lower the column height ({})", stage, height ) );
    }
    matrix = std::move( next.matrix );
    height = next_height;
    if ( trace )
    {
      trace->heights.push_back( height );
      trace->capacities.push_back( matrix.capacity() );
    }
  }
  if ( trace )
  {
    trace->stages = stage;
  }

  auto cpa = final_cpa( b, matrix );
  b.set_outputs( std::move( cpa.digits ) );
  return std::move( b ).build();
}

} // namespace mvl
