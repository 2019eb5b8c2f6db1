#include <mvl/logic.hpp>

#include <mvl/error.hpp>

#include <fmt/format.h>

namespace mvl
{

LogicLevel::LogicLevel( unsigned value, unsigned range_max )
{
  if ( range_max < 1u || range_max > 3u )
  {
    throw range_error( fmt::format( "range_max {} is not one of 1, 2, 3", range_max ) );
  }
  if ( value > range_max )
  {
    throw range_error( fmt::format( "value {} exceeds range_max {}", value, range_max ) );
  }
  value_ = static_cast<std::uint8_t>( value );
  range_max_ = static_cast<std::uint8_t>( range_max );
}

UnaryTable::UnaryTable( std::string name, std::array<std::uint8_t, 4> outputs )
    : name_( std::move( name ) ), outputs_( outputs )
{
  for ( auto v : outputs_ )
  {
    if ( v > 3u )
    {
      throw range_error( fmt::format( "unary table {} has output {} outside 0..3", name_, v ) );
    }
  }
}

UnaryTable UnaryTable::from_name( std::string_view name )
{
  if ( name.size() != 4u )
  {
    throw range_error( fmt::format( "unary table name '{}' must have 4 digits", name ) );
  }
  std::array<std::uint8_t, 4> outputs{};
  for ( auto i = 0u; i < 4u; ++i )
  {
    if ( name[i] < '0' || name[i] > '3' )
    {
      throw range_error( fmt::format( "unary table name '{}' has a non-quaternary digit", name ) );
    }
    outputs[i] = static_cast<std::uint8_t>( name[i] - '0' );
  }
  return UnaryTable( std::string( name ), outputs );
}

namespace unary
{
#define MVL_UNARY( fn, digits )                                \
  UnaryTable const& fn()                                       \
  {                                                            \
    static UnaryTable const table = UnaryTable::from_name( digits ); \
    return table;                                              \
  }

MVL_UNARY( zero, "0000" )
MVL_UNARY( identity, "0123" )
MVL_UNARY( op0202, "0202" )
MVL_UNARY( op0321, "0321" )
MVL_UNARY( op0012, "0012" )
MVL_UNARY( op0001, "0001" )
MVL_UNARY( op0011, "0011" )
MVL_UNARY( op0111, "0111" )

#undef MVL_UNARY
} // namespace unary

namespace
{

void require_range( LogicLevel x, unsigned max_allowed, std::string_view what )
{
  if ( x.range_max() > max_allowed )
  {
    throw range_error( fmt::format( "{} expects range_max <= {}, got {}", what, max_allowed, x.range_max() ) );
  }
}

void require_quit( LogicLevel x, std::string_view what )
{
  if ( x.range_max() != 3u )
  {
    throw range_error( fmt::format( "{} expects a quaternary level, got range_max {}", what, x.range_max() ) );
  }
}

} // namespace

LogicLevel unary_apply( UnaryTable const& table, LogicLevel x )
{
  require_quit( x, "unary_apply" );
  return quit( table.outputs()[x.value()] );
}

ThresholdOutputs decode_thresholds( LogicLevel x )
{
  require_quit( x, "decode_thresholds" );
  auto const level = [&]( unsigned threshold ) { return quit( x.value() < threshold ? 3u : 0u ); };
  return { level( 1u ), level( 2u ), level( 3u ) };
}

DigitProduct qmul1( LogicLevel a, LogicLevel b )
{
  require_range( a, 3u, "qmul1" );
  require_range( b, 3u, "qmul1" );
  // rows: a, columns: b; entries are (product, carry)
  static constexpr std::uint8_t table[4][4][2] = {
      { { 0, 0 }, { 0, 0 }, { 0, 0 }, { 0, 0 } },
      { { 0, 0 }, { 1, 0 }, { 2, 0 }, { 3, 0 } },
      { { 0, 0 }, { 2, 0 }, { 0, 1 }, { 2, 1 } },
      { { 0, 0 }, { 3, 0 }, { 2, 1 }, { 1, 2 } } };
  auto const& row = table[a.value()][b.value()];
  return { quit( row[0] ), trit( row[1] ) };
}

DigitProduct qmul1_mux( LogicLevel a, LogicLevel b )
{
  require_range( a, 3u, "qmul1_mux" );
  require_range( b, 3u, "qmul1_mux" );
  auto const sel = quit( a.value() );
  auto const bq = quit( b.value() );
  auto const product = mux4( sel, { unary_apply( unary::zero(), bq ), unary_apply( unary::identity(), bq ),
                                    unary_apply( unary::op0202(), bq ), unary_apply( unary::op0321(), bq ) } );
  // a = 1 never carries: 1*b <= 3
  auto const carry = mux4( sel, { unary_apply( unary::zero(), bq ), unary_apply( unary::zero(), bq ),
                                  unary_apply( unary::op0011(), bq ), unary_apply( unary::op0012(), bq ) } );
  return { product, trit( carry.value() ) };
}

AdderResult qfac2( LogicLevel a, LogicLevel b, LogicLevel cin )
{
  require_range( a, 3u, "qfac2 input" );
  require_range( b, 3u, "qfac2 input" );
  if ( cin.value() > 2u )
  {
    throw range_error( fmt::format( "qfac2 carry-in {} exceeds the ternary range", cin.value() ) );
  }
  auto const total = a.value() + b.value() + cin.value();
  return { quit( total % 4u ), trit( total / 4u ) };
}

LogicLevel qfac2wc( LogicLevel a, LogicLevel b, LogicLevel cin )
{
  auto const r = qfac2( a, b, cin );
  if ( r.carry.value() != 0u )
  {
    throw range_error( fmt::format( "qfac2wc drops a nonzero carry ({}+{}+{})", a.value(), b.value(), cin.value() ) );
  }
  return r.sum;
}

AdderResult qha( LogicLevel a, LogicLevel b )
{
  require_range( a, 3u, "qha" );
  require_range( b, 3u, "qha" );
  auto const total = a.value() + b.value();
  return { quit( total % 4u ), bit( total / 4u ) };
}

AdderResult bin_fa( LogicLevel a, LogicLevel b, LogicLevel cin )
{
  require_range( a, 1u, "bin_fa" );
  require_range( b, 1u, "bin_fa" );
  require_range( cin, 1u, "bin_fa" );
  auto const total = a.value() + b.value() + cin.value();
  return { bit( total & 1u ), bit( total >> 1u ) };
}

AdderResult bin_ha( LogicLevel a, LogicLevel b )
{
  require_range( a, 1u, "bin_ha" );
  require_range( b, 1u, "bin_ha" );
  auto const total = a.value() + b.value();
  return { bit( total & 1u ), bit( total >> 1u ) };
}

LogicLevel and2( LogicLevel a, LogicLevel b )
{
  require_range( a, 1u, "and2" );
  require_range( b, 1u, "and2" );
  return bit( a.value() & b.value() );
}

LogicLevel mux4( LogicLevel sel, std::array<LogicLevel, 4> const& inputs )
{
  require_range( sel, 3u, "mux4 select" );
  return inputs[sel.value()];
}

/* gate kinds */

namespace
{

constexpr std::array<PortSpec, 2> two_bits = { { { "a", 1 }, { "b", 1 } } };
constexpr std::array<PortSpec, 3> three_bits = { { { "a", 1 }, { "b", 1 }, { "cin", 1 } } };
constexpr std::array<PortSpec, 1> and_out = { { { "y", 1 } } };
constexpr std::array<PortSpec, 2> bin_adder_out = { { { "sum", 1 }, { "cout", 1 } } };
constexpr std::array<PortSpec, 2> two_quits = { { { "a", 3 }, { "b", 3 } } };
constexpr std::array<PortSpec, 2> qm1_out = { { { "qm", 3 }, { "qc", 2 } } };
constexpr std::array<PortSpec, 2> qha_out = { { { "sum", 3 }, { "cout", 1 } } };
constexpr std::array<PortSpec, 3> qfac2_in = { { { "a", 3 }, { "b", 3 }, { "cin", 2 } } };
constexpr std::array<PortSpec, 2> qfac2_out = { { { "sum", 3 }, { "cout", 2 } } };
constexpr std::array<PortSpec, 1> qfac2wc_out = { { { "sum", 3 } } };
constexpr std::array<PortSpec, 5> mux4_in = { { { "sel", 3 }, { "in0", 3 }, { "in1", 3 }, { "in2", 3 }, { "in3", 3 } } };
constexpr std::array<PortSpec, 1> mux4_out = { { { "y", 3 } } };
constexpr std::array<PortSpec, 1> decoder_in = { { { "x", 3 } } };
constexpr std::array<PortSpec, 3> decoder_out = { { { "nqi", 3 }, { "iqi", 3 }, { "pqi", 3 } } };

std::array<GateSignature, 9> const signatures = { {
    { two_bits, and_out },
    { two_bits, bin_adder_out },
    { three_bits, bin_adder_out },
    { two_quits, qm1_out },
    { two_quits, qha_out },
    { qfac2_in, qfac2_out },
    { qfac2_in, qfac2wc_out },
    { mux4_in, mux4_out },
    { decoder_in, decoder_out } } };

constexpr std::array<std::string_view, 9> tags = { "AND", "BIN_HA", "BIN_FA", "QM1", "QHA",
                                                   "QFAC2", "QFAC2WC", "MUX4", "DECODER" };

} // namespace

std::string_view to_string( GateKind kind )
{
  return tags[static_cast<std::size_t>( kind )];
}

std::optional<GateKind> gate_kind_from_string( std::string_view tag )
{
  for ( auto kind : all_gate_kinds )
  {
    if ( to_string( kind ) == tag )
    {
      return kind;
    }
  }
  return std::nullopt;
}

GateSignature const& signature( GateKind kind )
{
  return signatures[static_cast<std::size_t>( kind )];
}

std::optional<std::size_t> carry_in_port( GateKind kind )
{
  switch ( kind )
  {
  case GateKind::bin_fa:
  case GateKind::qfac2:
  case GateKind::qfac2wc:
    return 2u;
  default:
    return std::nullopt;
  }
}

void evaluate_gate( GateKind kind, std::span<std::uint8_t const> in, std::span<std::uint8_t> out )
{
  auto const& sig = signature( kind );
  if ( in.size() != sig.inputs.size() || out.size() != sig.outputs.size() )
  {
    throw netlist_error( fmt::format( "{} gate evaluated with {} inputs / {} outputs", to_string( kind ), in.size(), out.size() ) );
  }
  auto const level = [&]( std::size_t i ) { return LogicLevel( in[i], sig.inputs[i].range_max ); };

  switch ( kind )
  {
  case GateKind::and2:
    out[0] = static_cast<std::uint8_t>( and2( level( 0 ), level( 1 ) ).value() );
    break;
  case GateKind::bin_ha:
  {
    auto const r = bin_ha( level( 0 ), level( 1 ) );
    out[0] = static_cast<std::uint8_t>( r.sum.value() );
    out[1] = static_cast<std::uint8_t>( r.carry.value() );
    break;
  }
  case GateKind::bin_fa:
  {
    auto const r = bin_fa( level( 0 ), level( 1 ), level( 2 ) );
    out[0] = static_cast<std::uint8_t>( r.sum.value() );
    out[1] = static_cast<std::uint8_t>( r.carry.value() );
    break;
  }
  case GateKind::qm1:
  {
    auto const r = qmul1( level( 0 ), level( 1 ) );
    out[0] = static_cast<std::uint8_t>( r.product.value() );
    out[1] = static_cast<std::uint8_t>( r.carry.value() );
    break;
  }
  case GateKind::qha:
  {
    auto const r = qha( level( 0 ), level( 1 ) );
    out[0] = static_cast<std::uint8_t>( r.sum.value() );
    out[1] = static_cast<std::uint8_t>( r.carry.value() );
    break;
  }
  case GateKind::qfac2:
  {
    auto const r = qfac2( level( 0 ), level( 1 ), level( 2 ) );
    out[0] = static_cast<std::uint8_t>( r.sum.value() );
    out[1] = static_cast<std::uint8_t>( r.carry.value() );
    break;
  }
  case GateKind::qfac2wc:
    out[0] = static_cast<std::uint8_t>( qfac2wc( level( 0 ), level( 1 ), level( 2 ) ).value() );
    break;
  case GateKind::mux4:
    out[0] = static_cast<std::uint8_t>( mux4( level( 0 ), { level( 1 ), level( 2 ), level( 3 ), level( 4 ) } ).value() );
    break;
  case GateKind::decoder:
  {
    auto const r = decode_thresholds( level( 0 ) );
    out[0] = static_cast<std::uint8_t>( r.nqi.value() );
    out[1] = static_cast<std::uint8_t>( r.iqi.value() );
    out[2] = static_cast<std::uint8_t>( r.pqi.value() );
    break;
  }
  }
}

} // namespace mvl
