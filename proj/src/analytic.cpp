#include "zsq/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace zsq {

namespace {

constexpr Complex kI{0.0, 1.0};

// 1 - sin(t)/t with full relative accuracy. The direct form loses all
// significant digits once t^2/6 drops near the rounding unit, so switch to
// the Taylor series below t = 1e-3 (series truncation error < 1e-24 there).
double one_minus_sinc(double t) {
  if (t < 1e-3) {
    const double t2 = t * t;
    return t2 / 6.0 *
           (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)));
  }
  return 1.0 - std::sin(t) / t;
}

// 1 - cos(t) = 2 sin^2(t/2), exact-cancellation-free form.
double one_minus_cos(double t) {
  const double s = std::sin(0.5 * t);
  return 2.0 * s * s;
}

// Picks the root of w^2 - 2 p w + 1 = 0 with the smaller magnitude. The two
// roots are reciprocal, so the small one is computed as the inverse of the
// large one, which avoids subtractive cancellation.
Complex min_magnitude_root(Complex p) {
  const Complex s = std::sqrt(p * p - 1.0);
  const Complex up = p + s;
  const Complex dn = p - s;
  return (std::abs(up) <= std::abs(dn)) ? 1.0 / dn : 1.0 / up;
}

}  // namespace

void ProtocolParams::validate() const {
  if (!std::isfinite(tau_bar) || !std::isfinite(g_bar) ||
      !std::isfinite(dp_bar)) {
    throw std::invalid_argument("protocol parameters must be finite");
  }
  if (tau_bar <= 0.0) {
    throw std::invalid_argument("tau_bar must be positive");
  }
  if (dp_bar <= 0.0) {
    throw std::invalid_argument("dp_bar must be positive");
  }
}

Complex SqueezedTarget::zeta() const {
  return std::tanh(r) * std::exp(kI * phi);
}

SqueezedTarget make_target(double r, double phi) {
  if (!(r >= 0.0)) {
    throw std::invalid_argument("squeezing parameter r must be >= 0");
  }
  SqueezedTarget t;
  t.r = r;
  t.phi = phi;
  const double sh2 = std::sinh(r) * std::sinh(r);
  t.mean_quanta = sh2;
  t.quanta_variance = 2.0 * sh2 * (sh2 + 1.0);
  return t;
}

OperatorScalars compute_scalars(const ProtocolParams& params) {
  params.validate();
  const double tau = params.tau_bar;
  const double g2 = params.g_bar * params.g_bar;
  const double dp2 = params.dp_bar * params.dp_bar;
  const double omc = one_minus_cos(tau);

  OperatorScalars s;
  s.beta = Complex{1.0, dp2 * tau * (1.0 - 2.0 * g2 * one_minus_sinc(tau))};
  s.M = 1.0 / std::sqrt(s.beta);
  s.G = 2.0 * s.M * s.M * g2 * dp2 * omc;
  s.c = params.g_bar * params.dp_bar * std::sqrt(2.0 * omc);
  return s;
}

BranchSolution resolve_branch(const ProtocolParams& params,
                              const BranchTolerances& tol) {
  const OperatorScalars sc = compute_scalars(params);
  if (std::abs(sc.G) < tol.eps_g) {
    throw NoDistillation(
        "effective quadratic coupling vanishes (g_bar = 0 or tau_bar at a "
        "full period 2*pi*l): the projected operator is a scaled unitary "
        "with no spectral gap");
  }

  const double ct = std::cos(params.tau_bar);
  const double st = std::sin(params.tau_bar);

  BranchSolution b;
  b.q = Complex{ct, 0.0} + kI * sc.G * st;
  b.q_tilde = Complex{ct, 0.0} + kI * st / sc.G;

  b.lambda = min_magnitude_root(b.q);
  if (std::abs(b.lambda) >= 1.0 - tol.eps_lambda) {
    throw NoDistillation(
        "degenerate measurement period (tau_bar at an odd multiple of pi): "
        "both spectral roots lie on the unit circle");
  }
  b.log_lambda = std::log(b.lambda);

  b.zeta = min_magnitude_root(b.q_tilde);
  if (std::abs(b.zeta) >= 1.0 - tol.eps_lambda) {
    throw NoDistillation(
        "eigenstate normalizability lost: |zeta| reaches the unit circle");
  }
  // The published sign label: upper exactly when the principal
  // log(q - sqrt(q^2-1)) has positive real part. The unit-circle guard
  // above keeps |Re| >= eps_lambda, so the label is well defined.
  b.upper_branch = std::log(b.q - std::sqrt(b.q * b.q - 1.0)).real() > 0.0;
  // eta completes the diagonalizing transformation. zeta - q_tilde equals
  // the selected branch of sqrt(q_tilde^2 - 1), so the sign co-varies with
  // zeta automatically.
  b.eta = 1.0 / (2.0 * (b.zeta - b.q_tilde));
  return b;
}

Spectrum spectrum(const OperatorScalars& scalars, const BranchSolution& branch,
                  int n_max) {
  if (n_max < 0) {
    throw std::invalid_argument("n_max must be >= 0");
  }
  Spectrum s;
  s.gamma.reserve(static_cast<size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    s.gamma.push_back(scalars.M * std::exp((n + 0.5) * branch.log_lambda));
  }
  return s;
}

Spectrum spectrum(const ProtocolParams& params, int n_max) {
  return spectrum(compute_scalars(params), resolve_branch(params), n_max);
}

double distillation_rate(const ProtocolParams& params) {
  return -std::log(std::abs(resolve_branch(params).lambda));
}

SqueezedTarget target_state(const BranchSolution& branch) {
  return make_target(std::atanh(std::abs(branch.zeta)),
                     std::arg(branch.zeta));
}

SqueezedTarget target_state(const ProtocolParams& params) {
  return target_state(resolve_branch(params));
}

double quadrature_variance(const SqueezedTarget& target, double theta) {
  const double psi = theta - 0.5 * target.phi;
  const double s = std::sin(psi);
  const double c = std::cos(psi);
  return 0.5 * (std::exp(2.0 * target.r) * s * s +
                std::exp(-2.0 * target.r) * c * c);
}

}  // namespace zsq
