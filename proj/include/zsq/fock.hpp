#pragma once

#include <Eigen/Dense>
#include <functional>

#include "zsq/analytic.hpp"
#include "zsq/errors.hpp"

namespace zsq {

using FockMatrix = Eigen::MatrixXcd;
using FockVector = Eigen::VectorXcd;

/// Truncated ladder operators. [a, a^dag] = 1 holds exactly on the leading
/// (dim-1) x (dim-1) block; truncation only corrupts the last diagonal entry.
struct Ladder {
  FockMatrix a;
  FockMatrix a_dag;
  FockMatrix number;
};

Ladder ladder(int dim);

/// Normalized pure state in the truncated number basis. truncation_tail is
/// the probability mass of the untruncated state that fell beyond the cutoff.
struct PureState {
  FockVector amplitudes;
  double truncation_tail = 0.0;

  int dim() const { return static_cast<int>(amplitudes.size()); }
};

/// Unit-trace density matrix in the truncated number basis.
struct DensityMatrix {
  FockMatrix entries;
  double truncation_tail = 0.0;

  int dim() const { return static_cast<int>(entries.rows()); }
};

PureState coherent_state(Complex alpha, int dim, double tail_tol = 1e-8);

DensityMatrix thermal_state(double nbar, int dim, double tail_tol = 1e-8);

/// Squeezed vacuum with zeta = tanh(r) e^{i phi}, built from the two-term
/// amplitude recurrence c_{n+2} = -zeta sqrt((n+1)/(n+2)) c_n. Odd
/// amplitudes are exactly zero.
PureState squeezed_vacuum(const SqueezedTarget& target, int dim,
                          double tail_tol = 1e-8);

DensityMatrix projector(const PureState& psi);

/// f(H) for Hermitian H via eigendecomposition. Throws NotHermitian if H
/// deviates from its adjoint by more than 1e-10 (relative to its largest
/// entry), NoConvergence if the eigensolver fails.
FockMatrix apply_hermitian(const FockMatrix& H,
                           const std::function<Complex(double)>& f);

/// Matrix exponential by scaling-and-squaring with a Taylor core and an
/// explicit remainder bound below tol. Works for arbitrary (non-normal)
/// complex matrices.
FockMatrix exp_taylor(const FockMatrix& m, double tol = 1e-12);

/// F = <psi| rho |psi>.
double fidelity(const DensityMatrix& rho, const PureState& psi);

/// Tr rho^2.
double purity(const DensityMatrix& rho);

/// (1/2) || rho1 - rho2 ||_1.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

}  // namespace zsq
