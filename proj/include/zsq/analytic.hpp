#pragma once

#include <complex>
#include <vector>

#include "zsq/errors.hpp"

namespace zsq {

using Complex = std::complex<double>;

/// The three dimensionless knobs of the measurement protocol: the scaled
/// measurement period tau_bar = omega*tau, the scaled particle-field
/// coupling g_bar = g*sqrt(m/(hbar*omega)), and the scaled momentum spread
/// dp_bar = dp0/sqrt(m*hbar*omega) of the state the particle is repeatedly
/// projected onto.
struct ProtocolParams {
  double tau_bar = 0.0;
  double g_bar = 0.0;
  double dp_bar = 0.0;

  /// Throws std::invalid_argument unless tau_bar > 0, dp_bar > 0 and all
  /// fields are finite. g_bar = 0 is allowed here; it surfaces later as
  /// NoDistillation, not as a construction error.
  void validate() const;
};

/// Scalar coefficients of the projected evolution operator
///   V = M * exp(-i tau_bar (n + 1/2)) * exp(-(G/2) X^2),
/// where X = a^dag e^{i tau_bar/2} + a e^{-i tau_bar/2}. beta is the
/// Gaussian exponent of the underlying momentum integral (Re beta = 1 by
/// construction), and c is the linear coupling strength appearing in the
/// pre-integration form, with c^2 = G * beta.
struct OperatorScalars {
  Complex beta;
  Complex M;
  Complex G;
  double c = 0.0;
};

/// Branch-resolved quantities governing the spectrum. lambda is the root of
/// w^2 - 2 q w + 1 = 0 with |w| < 1 and log_lambda its principal logarithm;
/// zeta is the analogous root for q_tilde and determines the squeezing of
/// the distilled state; eta completes the similarity transformation
/// e^{eta A} e^{zeta A^dag} that diagonalizes V (A = a^2/2). upper_branch
/// is true when Re log(q - sqrt(q^2-1)) > 0, which is exactly when
/// zeta = q_tilde + sqrt(q^2-1)/G (the branch of sqrt(q_tilde^2-1) that
/// the diagonalization keeps consistent with the q quadratic).
struct BranchSolution {
  Complex q;
  Complex q_tilde;
  Complex lambda;
  Complex log_lambda;
  Complex zeta;
  Complex eta;
  bool upper_branch = false;
};

/// Degeneracy cutoffs for resolve_branch. The exact degenerate points are
/// |G| = 0 and |lambda| = 1. Near an odd multiple of pi the rounding of
/// tau_bar itself is amplified through sqrt(q^2 - 1): tau_bar = fl(pi)
/// lands at |lambda| ~ 1 - 1e-8, so the unit-circle cutoff must sit above
/// that to classify double-rounded degenerate inputs as degenerate.
struct BranchTolerances {
  double eps_g = 1e-10;
  double eps_lambda = 1e-7;
};

/// Eigenvalues gamma_n = M * lambda^(n + 1/2) of the projected evolution
/// operator, ordered by decreasing magnitude.
struct Spectrum {
  std::vector<Complex> gamma;
};

/// Parameters of the distilled squeezed state: tanh(r) e^{i phi} = zeta.
struct SqueezedTarget {
  double r = 0.0;
  double phi = 0.0;
  double mean_quanta = 0.0;      // sinh^2 r
  double quanta_variance = 0.0;  // 2 sinh^2 r (sinh^2 r + 1)

  Complex zeta() const;
};

/// Builds a SqueezedTarget from the squeezing parameter and phase,
/// populating the derived photon statistics.
SqueezedTarget make_target(double r, double phi);

/// Evaluates the scalar coefficients of the projected evolution operator.
/// Numerically stable down to arbitrarily small tau_bar (series fallback
/// for 1 - sin(tau)/tau).
OperatorScalars compute_scalars(const ProtocolParams& params);

/// Selects the normalizable branch of the diagonalization. Throws
/// NoDistillation at degenerate parameter points (vanishing effective
/// coupling, or measurement periods at odd multiples of pi where both
/// roots sit on the unit circle).
BranchSolution resolve_branch(const ProtocolParams& params,
                              const BranchTolerances& tol = {});

/// gamma_n for n = 0..n_max. Propagates NoDistillation.
Spectrum spectrum(const ProtocolParams& params, int n_max);
Spectrum spectrum(const OperatorScalars& scalars, const BranchSolution& branch,
                  int n_max);

/// Distillation speed -ln|gamma_1/gamma_0| = -ln|lambda| > 0.
double distillation_rate(const ProtocolParams& params);

/// Parameters of the state the protocol distills the field into.
SqueezedTarget target_state(const ProtocolParams& params);
SqueezedTarget target_state(const BranchSolution& branch);

/// Variance of the quadrature x_theta = (a e^{-i theta} + a^dag e^{i theta})
/// / sqrt(2) in the squeezed state. The minimum e^{-2r}/2 is reached at
/// theta = phi/2; the angle offset phi/2 (not phi) is fixed by the
/// Fock-space expectation value, which is authoritative.
double quadrature_variance(const SqueezedTarget& target, double theta);

}  // namespace zsq
