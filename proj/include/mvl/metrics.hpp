#pragma once

/*! \file metrics.hpp
  \brief Area estimation, timing libraries, critical paths and design
         comparison.

  Area is the sum over gate instances of the block's ΣDi (sum of transistor
  diameters, nm). Timing is a lookup model: one delay per gate kind and
  output port, fitted to aggregate path delays by calibrate_timing().

  Both library types load from a line-oriented key/value text format:

    # comment
    type = timing            (or cost)
    name = paper-0.9V-binary
    load = 2fF
    delay.BIN_FA = 22.3      (every output port)
    delay.BIN_FA.cout = 22.3 (one port)
    sigma_di.QM1 = 132
    diameter.8 = 0.626 0.696 (chirality n = diameter nm, |Vth| V)
    energy.QM1 = 1.5         (optional, unvalidated)
*/

#include <mvl/netlist.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mvl
{

/* cost */

struct DiameterEntry
{
  double diameter_nm;
  double vth_v; // stored only; no analysis reads it

  bool operator==( DiameterEntry const& ) const = default;
};

struct CostLibrary
{
  std::string name = "default";
  std::map<GateKind, double> sigma_di;
  std::map<unsigned, DiameterEntry> diameters;
  std::map<GateKind, double> energy;

  /// Throws library_error when the kind has no entry.
  double lookup( GateKind kind ) const;

  bool operator==( CostLibrary const& ) const = default;
};

CostLibrary default_cost_library();

/// Sum of sigma_di over gate instances. Throws library_error on a missing
/// entry.
double area_estimate( Netlist const& n, CostLibrary const& lib );

/// Sum of the energy attribute, or nullopt when the library does not cover
/// every kind used by n.
std::optional<double> energy_estimate( Netlist const& n, CostLibrary const& lib );

/* timing */

struct TimingLibrary
{
  std::string name;
  std::string load;
  /// (kind, output port name) -> ps
  std::map<std::pair<GateKind, std::string>, double> delays;

  /// Throws library_error when the port has no entry.
  double delay( GateKind kind, std::size_t output_port ) const;
  void set( GateKind kind, std::string_view port, double ps );
  /// Same delay on every output port of kind.
  void set_all( GateKind kind, double ps );
  bool covers( GateKind kind ) const;
  TimingLibrary scaled( double k ) const;

  bool operator==( TimingLibrary const& ) const = default;
};

/// An observed path delay together with the gate kinds it traverses.
struct PathConstraint
{
  std::map<GateKind, unsigned> kinds;
  double observed_ps;
};

/// Least-squares fit of one delay per kind (all output ports equal). Kinds in
/// the same tie class share a delay. Throws library_error when no constraint
/// is given or the system leaves some delays undetermined; the message lists
/// them.
TimingLibrary calibrate_timing( std::vector<PathConstraint> const& constraints,
                                std::vector<std::vector<GateKind>> const& tie_classes = {},
                                std::string name = "calibrated", std::string load = {} );

/// Names of the built-in timing presets.
std::vector<std::string> const& timing_preset_names();

/// Built-in preset by name, fitted on first use. Files listed in
/// MVL_DEFAULT_LIBS (colon separated) replace built-ins with the same name.
/// Throws library_error for unknown names.
TimingLibrary timing_preset( std::string_view name );

/// Default cost library, or the cost file in MVL_DEFAULT_LIBS named `name`.
CostLibrary cost_preset( std::string_view name = "default" );

enum class PathScope : std::uint8_t
{
  full,
  /// Partial-product gates (AND, QM1) are treated as sources: their delay and
  /// their ids are left out of the path.
  reduction_only
};

struct CriticalPath
{
  double delay_ps = 0.0;
  std::vector<GateId> gates; // input side first
};

/// Longest input-to-output path under static analysis. Among equally long
/// paths the lexicographically smallest gate-id sequence wins. Throws
/// library_error on a missing delay and netlist_error on a cycle.
CriticalPath critical_path( Netlist const& n, TimingLibrary const& lib, PathScope scope = PathScope::full );

/* comparison */

struct DesignInput
{
  std::string label;
  Netlist const* netlist;
  CostLibrary cost;
  TimingLibrary timing;
  PathScope scope = PathScope::reduction_only;
};

struct DesignMetrics
{
  std::string label;
  std::string design_id;
  std::string timing_name;
  GateInventory inventory;
  double area_nm = 0.0;
  CriticalPath path;
  std::vector<GateKind> path_kinds;
  std::optional<double> energy;
};

enum class Winner : std::uint8_t
{
  first,
  second,
  tie
};

struct PairRatio
{
  std::size_t first;
  std::size_t second;
  double area_ratio;                 // first / second
  std::optional<double> delay_ratio; // nullopt when the second delay is 0
  Winner area_winner;                // smaller is better
  Winner delay_winner;
};

/// HA and FA area ratios (quaternary over binary) and adder-count ratios of a
/// quaternary and a binary multiplier.
struct ComponentRatios
{
  double ha_area;
  double fa_area;
  double ha_count;
  double fa_count;
};

struct ComparisonReport
{
  std::vector<DesignMetrics> designs;
  std::vector<PairRatio> pairs;
  std::optional<ComponentRatios> components;
};

/// Metrics for every design and ratios for `pairs` (all i<j pairs when
/// empty). Throws error with fewer than two designs.
ComparisonReport compare( std::vector<DesignInput> const& designs,
                          std::vector<std::pair<std::size_t, std::size_t>> const& pairs = {} );

ComponentRatios component_ratios( CostLibrary const& lib, Netlist const& quaternary, Netlist const& binary );

/// "x3.2"
std::string format_ratio( double r );

std::string to_markdown( ComparisonReport const& r );
/// Long format: record,subject,metric,value
std::string to_csv( ComparisonReport const& r );
std::string to_json( ComparisonReport const& r, int indent = 2 );

/* library files */

CostLibrary parse_cost_library( std::string_view text );
TimingLibrary parse_timing_library( std::string_view text );
std::string write_cost_library( CostLibrary const& lib );
std::string write_timing_library( TimingLibrary const& lib );

/// Reads a file; throws std::ios_base::failure when it cannot be opened and
/// format_error on bad content.
CostLibrary load_cost_library( std::filesystem::path const& path );
TimingLibrary load_timing_library( std::filesystem::path const& path );

} // namespace mvl
