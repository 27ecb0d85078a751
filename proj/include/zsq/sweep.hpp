#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zsq/analytic.hpp"
#include "zsq/fock.hpp"
#include "zsq/protocol.hpp"

namespace zsq {

/// Linearly spaced axis with count >= 2 points from min to max inclusive.
struct AxisSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

/// Grid specification: any subset of the three parameters may be swept;
/// the others are fixed. Enumeration is row-major in the order
/// tau_bar, g_bar, dp_bar.
struct SweepGrid {
  std::optional<AxisSpec> tau_axis;
  std::optional<AxisSpec> g_axis;
  std::optional<AxisSpec> dp_axis;
  double tau_fixed = 0.0;
  double g_fixed = 0.0;
  double dp_fixed = 0.0;

  /// Throws std::invalid_argument on malformed axes (count < 2,
  /// min >= max) or non-positive fixed values for tau_bar / dp_bar.
  void validate() const;

  std::vector<ProtocolParams> points() const;
};

enum class SweepQuantity { rate, tanh_r, both };

SweepQuantity parse_quantity(const std::string& s);

/// One evaluated grid point. Degenerate points carry status "degenerate"
/// and empty values; they never abort a sweep.
struct SweepRow {
  ProtocolParams params;
  std::optional<double> rate;
  std::optional<double> tanh_r;
  std::string status;  // "ok" | "degenerate"
};

/// Evaluates the grid with a bounded worker pool; rows come back in
/// deterministic row-major order regardless of scheduling.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, SweepQuantity quantity,
                                int workers = 0);

/// CSV with header tau_bar,g_bar,dp_bar,rate,tanh_r,status. LF line
/// endings, '.' decimal separator, 17 significant digits. Columns not
/// selected by quantity stay empty.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string sweep_to_json(const std::vector<SweepRow>& rows);

/// CSV with header n,step_prob,cum_prob,fidelity,purity. The fidelity
/// column is empty when no target state exists.
std::string trace_to_csv(const SimulationTrace& trace);
std::string trace_to_json(const SimulationTrace& trace);

/// Self-contained gnuplot script for one of the four standard figures,
/// referencing a data file previously written by sweep or run:
///   1: distillation-rate heatmap over (tau_bar, g_bar)
///   2: tanh r heatmap over (tau_bar, g_bar)
///   3: rate and tanh r line scan over tau_bar
///   4: survival probability and fidelity versus measurement count
/// Throws UnknownFigure for any other id. Byte-deterministic.
std::string plot_script(int figure, const std::string& data_path);

/// Initial field state: "vacuum", "coherent:RE,IM" or "thermal:NBAR".
struct InitialStateSpec {
  enum class Kind { vacuum, coherent, thermal };
  Kind kind = Kind::vacuum;
  Complex alpha;
  double nbar = 0.0;
};

InitialStateSpec parse_initial_state(const std::string& text);

DensityMatrix make_initial_state(const InitialStateSpec& spec, int dim);

/// Shortest-of-17-significant-digits, locale-independent rendering used by
/// all CSV output.
std::string format_double(double v);

}  // namespace zsq
