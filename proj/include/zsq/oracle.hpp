#pragma once

#include <vector>

#include "zsq/analytic.hpp"
#include "zsq/fock.hpp"

namespace zsq {

/// Coefficients of the ordered form e^{x A^dag} e^{y B} e^{z A} of a single
/// exponential e^{mu A^dag + nu A + lambda B}, where A = a^2/2 and
/// B = a^dag a + 1/2.
struct FactoredForm {
  Complex x;
  Complex y;
  Complex z;
  Complex kappa;  // sqrt(lambda^2 - mu*nu)
};

/// Coefficients of the single exponential equivalent to the ordered product
/// e^{x A^dag} e^{y B} e^{z A}.
struct UnifiedForm {
  Complex mu;
  Complex nu;
  Complex lambda;
  Complex kappa;  // acosh((e^y + e^-y - x z e^-y)/2), principal branch
};

/// Splits a quadratic-form exponential into the ordered product. Handles the
/// kappa -> 0 limit by series. Throws SingularDenominator when the common
/// denominator 1 - (lambda/kappa) tanh(kappa) vanishes.
FactoredForm factorize(Complex mu, Complex nu, Complex lambda);

/// Merges the ordered product back into a single exponential. The sign of
/// lambda is fixed by requiring the factorize round trip to reproduce the
/// inputs; BranchAmbiguity is thrown when neither sign does.
UnifiedForm unify(Complex x, Complex y, Complex z);

/// Result of the momentum-integral build of the projected evolution
/// operator by Gauss-Hermite quadrature in the dimensionless momentum.
struct QuadratureOperator {
  FockMatrix v;
  int nodes_used = 0;     // node count of the accepted evaluation
  double last_delta = 0;  // max-norm change of the final doubling
};

/// Reconstructs the projected evolution operator from its pre-integration
/// form, e^{-i tau_bar (n+1/2)} (2 pi)^{-1/2} Int du e^{-beta u^2/2}
/// e^{i c u X}, using Gauss-Hermite quadrature with K-doubling convergence
/// control. Starts at max(k_start, 100) nodes and doubles until the result
/// changes by at most tol in max norm; QuadratureNotConverged past 2^16
/// nodes.
QuadratureOperator momentum_quadrature_operator(const ProtocolParams& params,
                                                int dim, int k_start = 100,
                                                double tol = 1e-9);

/// Gauss-Hermite nodes and weights for weight e^{-x^2} (Golub-Welsch).
void gauss_hermite(int k, std::vector<double>& nodes,
                   std::vector<double>& weights);

/// Per-eigenpair comparison between the analytic eigensystem and the
/// numerical eigendecomposition of the truncated operator.
struct CrosscheckEntry {
  int n = 0;
  double eigenvalue_rel_err = 0;  // nearest numerical eigenvalue vs gamma_n
  double residual = 0;            // ||V u_n - gamma_n u_n|| / ||u_n||
  double overlap_deficit = 0;     // 1 - |<u_hat_n|u_n>| / norms
  Complex s_n;                    // <v_n|u_n> (scale of the biorthogonal pair)
  double biorth_max_offdiag = 0;  // max_m |<v_m|u_n>| over m != n
};

struct CrosscheckReport {
  std::vector<CrosscheckEntry> entries;
  double truncation_indicator = 0;  // largest relative eigenvector tail mass
};

/// Builds the analytic right/left eigenvector families
/// u_n = e^{-zeta A^dag} e^{-eta A} |n> and <v_n| = <n| e^{eta A} e^{zeta
/// A^dag} on the truncated space and compares them against the numerical
/// eigendecomposition of the projected operator.
CrosscheckReport eigen_crosscheck(const ProtocolParams& params, int dim,
                                  int n_max);

/// Eigenvalues (1 -+ |zeta|, ascending) of the 2x2 quadratic form that
/// controls normalizability of the squeezed eigenstates; ok iff both are
/// positive, i.e. |zeta| < 1.
struct NormalizabilityResult {
  bool ok = false;
  double eig_low = 0;
  double eig_high = 0;
};

NormalizabilityResult normalizability_check(Complex zeta);

}  // namespace zsq
