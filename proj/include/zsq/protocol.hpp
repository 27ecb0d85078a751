#pragma once

#include <optional>
#include <vector>

#include "zsq/analytic.hpp"
#include "zsq/fock.hpp"

namespace zsq {

/// One row of a protocol run. Row 0 describes the initial state
/// (step_prob = cum_prob = 1). fidelity is absent when the parameters are
/// degenerate and no target state exists.
struct TraceRow {
  int n = 0;
  double step_prob = 1.0;
  double cum_prob = 1.0;
  std::optional<double> fidelity;
  double purity = 1.0;
};

struct SimulationTrace {
  std::vector<TraceRow> rows;
  std::optional<SqueezedTarget> target;
  int dim = 0;
};

/// The projected evolution operator as a truncated matrix,
///   V = M * exp(-i tau_bar (n + 1/2)) * exp(-(G/2) X^2),
/// X = a^dag e^{i tau_bar/2} + a e^{-i tau_bar/2}. Degenerate parameters are
/// allowed; the matrix exists even when there is no distillation.
FockMatrix build_projected_operator(const ProtocolParams& params, int dim);

/// Iterates rho -> V rho V^dag for n_steps measurements, renormalizing each
/// step and accumulating the survival probability in log space. Fidelity is
/// recorded against the analytic target state when one exists.
SimulationTrace run(const ProtocolParams& params, const DensityMatrix& rho0,
                    int n_steps, int dim);

/// Smallest even dimension (floor 40) whose squeezed-vacuum truncation tail
/// is below tol, found by doubling then bisection.
int choose_dim(const SqueezedTarget& target, double tol);

/// Truncation tail mass of the squeezed vacuum at the given cutoff.
double squeezed_tail_mass(const SqueezedTarget& target, int dim);

}  // namespace zsq
