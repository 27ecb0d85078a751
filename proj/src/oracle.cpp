#include "zsq/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "zsq/protocol.hpp"

namespace zsq {

namespace {

constexpr Complex kI{0.0, 1.0};

bool close(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a),
                                                         std::abs(b)));
}

// tanh(k)/k, sinh(k)/k and cosh(k), series-stabilized near k = 0.
struct KappaFunctions {
  Complex tanh_over_k;
  Complex sinh_over_k;
  Complex cosh_k;
};

KappaFunctions kappa_functions(Complex kappa) {
  KappaFunctions f;
  if (std::abs(kappa) < 1e-4) {
    const Complex k2 = kappa * kappa;
    f.tanh_over_k = 1.0 + k2 * (-1.0 / 3.0 + k2 * (2.0 / 15.0));
    f.sinh_over_k = 1.0 + k2 * (1.0 / 6.0 + k2 * (1.0 / 120.0));
    f.cosh_k = 1.0 + k2 * (0.5 + k2 * (1.0 / 24.0));
  } else {
    f.tanh_over_k = std::tanh(kappa) / kappa;
    f.sinh_over_k = std::sinh(kappa) / kappa;
    f.cosh_k = std::cosh(kappa);
  }
  return f;
}

}  // namespace

FactoredForm factorize(Complex mu, Complex nu, Complex lambda) {
  FactoredForm out;
  out.kappa = std::sqrt(lambda * lambda - mu * nu);
  const KappaFunctions f = kappa_functions(out.kappa);
  const Complex denom = 1.0 - lambda * f.tanh_over_k;
  if (std::abs(denom) < 1e-12) {
    throw SingularDenominator(
        "factorize: 1 - (lambda/kappa) tanh(kappa) vanishes");
  }
  out.x = mu * f.tanh_over_k / denom;
  out.z = nu * f.tanh_over_k / denom;
  // e^{-y} = cosh(kappa) - lambda sinh(kappa)/kappa. The principal log of w
  // itself (not half the log of w^2, which flips branch for Re w < 0) keeps
  // the ordered product equal to the original exponential on the whole
  // principal domain.
  const Complex w = f.cosh_k - lambda * f.sinh_over_k;
  out.y = -std::log(w);
  return out;
}

UnifiedForm unify(Complex x, Complex y, Complex z) {
  UnifiedForm out;
  const Complex ey = std::exp(y);
  const Complex emy = std::exp(-y);
  out.kappa = std::acosh(0.5 * (ey + emy - x * z * emy));
  Complex k_over_sinh;
  if (std::abs(out.kappa) < 1e-4) {
    k_over_sinh = 1.0 / kappa_functions(out.kappa).sinh_over_k;
  } else {
    k_over_sinh = out.kappa / std::sinh(out.kappa);
  }
  out.mu = k_over_sinh * x * emy;
  out.nu = k_over_sinh * z * emy;

  const Complex lam = -std::sqrt(out.kappa * out.kappa + out.mu * out.nu);
  const auto roundtrip_ok = [&](Complex candidate) {
    try {
      const FactoredForm f = factorize(out.mu, out.nu, candidate);
      return close(f.x, x, 1e-8) && close(f.y, y, 1e-8) &&
             close(f.z, z, 1e-8);
    } catch (const SingularDenominator&) {
      return false;
    }
  };
  if (roundtrip_ok(lam)) {
    out.lambda = lam;
  } else if (roundtrip_ok(-lam)) {
    out.lambda = -lam;
  } else {
    throw BranchAmbiguity(
        "unify: neither sign of lambda reproduces the inputs on the "
        "factorize round trip");
  }
  return out;
}

void gauss_hermite(int k, std::vector<double>& nodes,
                   std::vector<double>& weights) {
  if (k < 1) {
    throw std::invalid_argument("gauss_hermite: need at least one node");
  }
  // Nodes are the eigenvalues of the Jacobi matrix (off-diagonal sqrt(j/2)).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd sub(std::max(0, k - 1));
  for (int j = 1; j < k; ++j) {
    sub(j - 1) = std::sqrt(0.5 * j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("gauss_hermite: tridiagonal eigensolve failed");
  }

  nodes.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  weights.resize(k);
  // w_i = 1 / sum_j p_j(x_i)^2 with orthonormal Hermite polynomials. The
  // recurrence is run on q_j = p_j e^{-x^2/2} so extreme nodes cannot
  // overflow; far-tail weights underflow to zero harmlessly.
  const double q0 = std::pow(std::numbers::pi, -0.25);
  for (int i = 0; i < k; ++i) {
    const double xi = nodes[i];
    double qm = 0.0;
    double q = q0 * std::exp(-0.5 * xi * xi);
    double sum = q * q;
    for (int j = 1; j < k; ++j) {
      const double bj = std::sqrt(0.5 * j);
      const double bj1 = (j > 1) ? std::sqrt(0.5 * (j - 1)) : 0.0;
      const double qn = (xi * q - bj1 * qm) / bj;
      qm = q;
      q = qn;
      sum += q * q;
    }
    weights[i] = (sum > 0.0) ? std::exp(-xi * xi) / sum : 0.0;
  }
}

QuadratureOperator momentum_quadrature_operator(const ProtocolParams& params,
                                                int dim, int k_start,
                                                double tol) {
  const OperatorScalars sc = compute_scalars(params);
  const Ladder lad = ladder(dim);
  const Complex half_phase = std::exp(kI * (0.5 * params.tau_bar));
  const FockMatrix x_op =
      lad.a_dag * half_phase + lad.a * std::conj(half_phase);
  Eigen::SelfAdjointEigenSolver<FockMatrix> es(x_op);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("momentum_quadrature_operator: eigensolve failed");
  }
  const Eigen::VectorXd& xw = es.eigenvalues();
  const FockMatrix& u = es.eigenvectors();

  FockVector phases(dim);
  for (int n = 0; n < dim; ++n) {
    phases(n) = std::exp(-kI * (params.tau_bar * (n + 0.5)));
  }

  // The integrand is diagonal in the eigenbasis of X for every node, so the
  // quadrature sum is accumulated as a diagonal and sandwiched once.
  const auto evaluate = [&](int k) {
    std::vector<double> nodes, wts;
    gauss_hermite(k, nodes, wts);
    FockVector d = FockVector::Zero(dim);
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    for (int i = 0; i < k; ++i) {
      if (wts[i] == 0.0) continue;
      const double ui = std::numbers::sqrt2 * nodes[i];
      const Complex coeff = wts[i] * inv_sqrt_pi *
                            std::exp(-(sc.beta - 1.0) * (0.5 * ui * ui));
      for (int n = 0; n < dim; ++n) {
        d(n) += coeff * std::exp(kI * (sc.c * ui * xw(n)));
      }
    }
    FockMatrix v = u * d.asDiagonal() * u.adjoint();
    return FockMatrix(phases.asDiagonal() * v);
  };

  int k = std::max(k_start, 100);
  FockMatrix prev = evaluate(k);
  while (true) {
    const int k2 = 2 * k;
    FockMatrix next = evaluate(k2);
    const double delta = (next - prev).cwiseAbs().maxCoeff();
    if (delta <= tol) {
      return {std::move(next), k2, delta};
    }
    if (k2 >= (1 << 16)) {
      throw QuadratureNotConverged(
          "momentum_quadrature_operator: no convergence below 65536 nodes");
    }
    prev = std::move(next);
    k = k2;
  }
}

CrosscheckReport eigen_crosscheck(const ProtocolParams& params, int dim,
                                  int n_max) {
  if (n_max < 0 || n_max >= dim) {
    throw std::invalid_argument("eigen_crosscheck: need 0 <= n_max < dim");
  }
  const OperatorScalars sc = compute_scalars(params);
  const BranchSolution br = resolve_branch(params);
  const Spectrum spec = spectrum(sc, br, n_max);

  const FockMatrix v = build_projected_operator(params, dim);
  Eigen::ComplexEigenSolver<FockMatrix> es(v);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("eigen_crosscheck: eigendecomposition failed");
  }

  const Ladder lad = ladder(dim);
  const FockMatrix a_low = 0.5 * lad.a * lad.a;        // A
  const FockMatrix a_raise = 0.5 * lad.a_dag * lad.a_dag;  // A^dag
  const FockMatrix right = exp_taylor(FockMatrix(-br.zeta * a_raise)) *
                           exp_taylor(FockMatrix(-br.eta * a_low));
  const FockMatrix left = exp_taylor(FockMatrix(br.eta * a_low)) *
                          exp_taylor(FockMatrix(br.zeta * a_raise));

  CrosscheckReport report;
  for (int n = 0; n <= n_max; ++n) {
    CrosscheckEntry e;
    e.n = n;
    const FockVector un = right.col(n);
    const Complex gamma_n = spec.gamma[static_cast<size_t>(n)];
    e.residual = (v * un - gamma_n * un).norm() / un.norm();

    // Nearest numerical eigenvalue; the truncated non-normal matrix also
    // carries spurious modes, so match by distance rather than by rank.
    Eigen::Index best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
      const double dist = std::abs(es.eigenvalues()(j) - gamma_n);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    e.eigenvalue_rel_err = best_dist / std::abs(gamma_n);
    const FockVector uhat = es.eigenvectors().col(best);
    e.overlap_deficit = 1.0 - std::abs(uhat.dot(un)) / (uhat.norm() * un.norm());

    // Bilinear pairing <v_m|u_n>: row m of the left family times column n
    // of the right family, no conjugation.
    e.s_n = left.row(n) * right.col(n);
    double cross = 0.0;
    for (int m = 0; m <= n_max; ++m) {
      if (m == n) continue;
      cross = std::max(cross, std::abs(Complex(left.row(m) * right.col(n))));
    }
    e.biorth_max_offdiag = cross;

    const double tail =
        (std::abs(un(dim - 1)) + std::abs(un(dim - 2))) / un.norm();
    report.truncation_indicator = std::max(report.truncation_indicator, tail);
    report.entries.push_back(e);
  }
  return report;
}

NormalizabilityResult normalizability_check(Complex zeta) {
  Eigen::Matrix2d a;
  a << 1.0 + zeta.real(), zeta.imag(),  //
      zeta.imag(), 1.0 - zeta.real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a);
  NormalizabilityResult r;
  r.eig_low = es.eigenvalues()(0);
  r.eig_high = es.eigenvalues()(1);
  // |zeta| = 1 computes to eig_low = O(eps) of either sign; classify the
  // boundary as not normalizable.
  r.ok = r.eig_low > 1e-12;
  return r;
}

}  // namespace zsq
