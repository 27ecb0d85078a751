#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "zsq/oracle.hpp"
#include "zsq/protocol.hpp"

using namespace zsq;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
const ProtocolParams kRef{0.9 * kPi, 1.0, 0.4};

}  // namespace

TEST_SUITE_BEGIN("oracle");

TEST_CASE("factorize: pure number-operator exponential") {
  // mu = nu = 0 forces kappa = lambda and the ordered form must reduce to
  // the same single exponential: x = z = 0, y = lambda.
  for (Complex lambda : {Complex{0.3, 0.0}, Complex{0.1, -0.2},
                         Complex{-0.25, 0.15}}) {
    const FactoredForm f = factorize({0.0, 0.0}, {0.0, 0.0}, lambda);
    CHECK(std::abs(f.x) < 1e-14);
    CHECK(std::abs(f.z) < 1e-14);
    CHECK(std::abs(f.y - lambda) < 1e-12);
  }
}

TEST_CASE("factorize handles the kappa -> 0 ray exactly") {
  // mu nu = lambda^2 sits on the kappa = 0 ray; the closed limit is
  // x = mu/(1-lambda), y = -log(1-lambda), z = nu/(1-lambda).
  const OperatorScalars sc = compute_scalars(kRef);
  const double tau = kRef.tau_bar;
  const Complex mu = -sc.G * std::exp(kI * tau);
  const Complex nu = -sc.G * std::exp(-kI * tau);
  const FactoredForm f = factorize(mu, nu, -sc.G);
  // kappa^2 cancels exactly in real arithmetic; rounding leaves
  // kappa ~ sqrt(eps)*|G|.
  CHECK(std::abs(f.kappa) < 1e-7);
  CHECK(std::abs(f.x + (sc.G / (1.0 + sc.G)) * std::exp(kI * tau)) < 1e-10);
  CHECK(std::abs(f.z + (sc.G / (1.0 + sc.G)) * std::exp(-kI * tau)) < 1e-10);
  CHECK(std::abs(f.y + std::log(1.0 + sc.G)) < 1e-10);
}

TEST_CASE("factorize/unify round trip on random small-norm triples") {
  std::mt19937 rng(99u);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Complex mu{u(rng), u(rng)};
    const Complex nu{u(rng), u(rng)};
    const Complex lambda{u(rng), u(rng)};
    const FactoredForm f = factorize(mu, nu, lambda);
    const UnifiedForm back = unify(f.x, f.y, f.z);
    worst = std::max({worst, std::abs(back.mu - mu), std::abs(back.nu - nu),
                      std::abs(back.lambda - lambda)});
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("factorization is an operator identity on the truncated space") {
  const int dim = 30;
  const Ladder l = ladder(dim);
  const FockMatrix a_low = 0.5 * l.a * l.a;
  const FockMatrix a_raise = 0.5 * l.a_dag * l.a_dag;
  FockMatrix b_op = FockMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) b_op(n, n) = n + 0.5;

  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int trial = 0; trial < 6; ++trial) {
    const Complex mu{u(rng), u(rng)};
    const Complex nu{u(rng), u(rng)};
    const Complex lambda{u(rng), u(rng)};
    const FactoredForm f = factorize(mu, nu, lambda);
    const FockMatrix lhs =
        exp_taylor(FockMatrix(mu * a_raise + nu * a_low + lambda * b_op));
    const FockMatrix rhs = exp_taylor(FockMatrix(f.x * a_raise)) *
                           exp_taylor(FockMatrix(f.y * b_op)) *
                           exp_taylor(FockMatrix(f.z * a_low));
    CHECK((lhs - rhs).topLeftCorner(15, 15).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("unify reproduces the closed unified-exponent coefficients") {
  // Ordered form of the projected operator -> single exponential. The
  // closed coefficients are known: mu = G log(q - sqrt(q^2-1)) /
  // sqrt(q^2-1) and lambda = (G cos tau + i sin tau) log(...) / sqrt(...).
  const OperatorScalars sc = compute_scalars(kRef);
  const BranchSolution br = resolve_branch(kRef);
  const double tau = kRef.tau_bar;
  const Complex x8 = sc.G / (1.0 + sc.G) * std::exp(-kI * tau);
  const Complex y8 = std::log(1.0 + sc.G) + kI * tau;

  const UnifiedForm u = unify(-x8, -y8, -x8);
  const Complex sq = std::sqrt(br.q * br.q - 1.0);
  const Complex lp = std::log(br.q - sq);
  CHECK(std::abs(u.mu - sc.G * lp / sq) < 1e-10);
  CHECK(std::abs(u.nu - sc.G * lp / sq) < 1e-10);
  CHECK(std::abs(u.lambda -
                 (sc.G * std::cos(tau) + kI * std::sin(tau)) * lp / sq) <
        1e-10);
  // The unified kappa coincides with the spectral logarithm up to sign.
  CHECK(std::min(std::abs(u.kappa - lp), std::abs(u.kappa + lp)) < 1e-10);

  // 60-digit reference values for the same coefficients.
  CHECK(std::abs(u.mu - Complex{-2.30430804222613288113,
                                1.5547287860313854468}) < 1e-10);
  CHECK(std::abs(u.lambda - Complex{1.0188336004203125472,
                                    -2.3471287689407240896}) < 1e-10);
}

TEST_CASE("unify: trivial ordered form") {
  const UnifiedForm u = unify({0.0, 0.0}, {0.37, -0.21}, {0.0, 0.0});
  CHECK(std::abs(u.mu) < 1e-12);
  CHECK(std::abs(u.nu) < 1e-12);
  CHECK(std::abs(u.lambda - Complex{0.37, -0.21}) < 1e-10);
}

TEST_CASE("gauss_hermite integrates analytic references") {
  std::vector<double> x, w;
  gauss_hermite(61, x, w);
  double m0 = 0.0, m2 = 0.0, osc = 0.0;
  const double a = 3.0;
  for (size_t i = 0; i < x.size(); ++i) {
    m0 += w[i];
    m2 += w[i] * x[i] * x[i];
    osc += w[i] * std::cos(a * x[i]);
  }
  const double sqrt_pi = std::sqrt(kPi);
  CHECK(m0 == doctest::Approx(sqrt_pi).epsilon(1e-13));
  CHECK(m2 == doctest::Approx(0.5 * sqrt_pi).epsilon(1e-13));
  CHECK(osc == doctest::Approx(sqrt_pi * std::exp(-a * a / 4.0))
                   .epsilon(1e-12));

  // A strongly oscillatory integrand needs more nodes; the node budget
  // scales with the square of the frequency.
  gauss_hermite(400, x, w);
  const double b = 20.0;
  double osc_hi = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    osc_hi += w[i] * std::cos(b * x[i]);
  }
  CHECK(std::abs(osc_hi - sqrt_pi * std::exp(-b * b / 4.0)) < 1e-12);
}

TEST_CASE("momentum-integral route agrees with the closed-form operator") {
  const int dim = 60;
  const FockMatrix closed = build_projected_operator(kRef, dim);
  const QuadratureOperator quad =
      momentum_quadrature_operator(kRef, dim, 200, 1e-9);
  CHECK((quad.v - closed).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("momentum-integral route with zero coupling is the free rotation") {
  const ProtocolParams p{1.1, 0.0, 0.8};
  const OperatorScalars sc = compute_scalars(p);
  const int dim = 30;
  const QuadratureOperator quad =
      momentum_quadrature_operator(p, dim, 100, 1e-10);
  for (int n = 0; n < dim; ++n) {
    const Complex expected =
        sc.M * std::exp(-kI * (p.tau_bar * (n + 0.5)));
    CHECK(std::abs(quad.v(n, n) - expected) < 1e-9);
  }
}

TEST_CASE("eigen crosscheck at the reference point") {
  const int dim = 80;
  const int n_max = 4;
  const CrosscheckReport report = eigen_crosscheck(kRef, dim, n_max);
  REQUIRE(report.entries.size() == n_max + 1);

  CHECK(report.entries[0].residual < 1e-8);
  for (const CrosscheckEntry& e : report.entries) {
    const double schedule = std::pow(3.0, e.n);
    CHECK(e.residual < 1e-8 * schedule);
    CHECK(e.eigenvalue_rel_err < 1e-6);
    CHECK(e.overlap_deficit < 1e-6 * schedule);
    CHECK(e.biorth_max_offdiag < 1e-8 * schedule);
    // Truncation leaves the pairing scale near its ideal value 1.
    CHECK(std::abs(e.s_n - 1.0) < 1e-6);
  }
  CHECK(report.truncation_indicator < 1e-4);

  // The normalized leading eigenvector is the squeezed vacuum.
  const BranchSolution br = resolve_branch(kRef);
  const Ladder l = ladder(dim);
  const FockMatrix a_raise = 0.5 * l.a_dag * l.a_dag;
  const FockVector u0 =
      exp_taylor(FockMatrix(-br.zeta * a_raise)).col(0);
  const PureState xi = squeezed_vacuum(target_state(br), dim);
  const double deficit =
      1.0 - std::abs(xi.amplitudes.dot(u0)) / u0.norm();
  CHECK(deficit < 1e-8);
  // Unnormalized norm-squared of the analytic leading eigenvector is
  // cosh r.
  CHECK(u0.squaredNorm() ==
        doctest::Approx(std::cosh(target_state(br).r)).epsilon(1e-8));
}

TEST_CASE("eigen crosscheck refuses degenerate points") {
  CHECK_THROWS_AS(eigen_crosscheck({kPi, 1.0, 1.0}, 40, 2), NoDistillation);
}

TEST_CASE("normalizability quadratic form") {
  const NormalizabilityResult zero = normalizability_check({0.0, 0.0});
  CHECK(zero.ok);
  CHECK(zero.eig_low == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(zero.eig_high == doctest::Approx(1.0).epsilon(1e-14));

  const NormalizabilityResult unit =
      normalizability_check(std::polar(1.0, 0.77));
  CHECK_FALSE(unit.ok);
  CHECK(std::abs(unit.eig_low) < 1e-12);

  std::mt19937 rng(3u);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  for (int i = 0; i < 500; ++i) {
    const Complex zeta{u(rng), u(rng)};
    const NormalizabilityResult r = normalizability_check(zeta);
    CHECK(std::abs(r.eig_low - (1.0 - std::abs(zeta))) < 1e-12);
    CHECK(std::abs(r.eig_high - (1.0 + std::abs(zeta))) < 1e-12);
    CHECK(r.ok == (std::abs(zeta) < 1.0));
  }

  // Normalizability coincides with branch resolution succeeding.
  std::uniform_real_distribution<double> tau(0.05, 6.2);
  std::uniform_real_distribution<double> g(-2.0, 2.0);
  std::uniform_real_distribution<double> dp(0.05, 2.0);
  for (int i = 0; i < 500; ++i) {
    const ProtocolParams p{tau(rng), g(rng), dp(rng)};
    try {
      const BranchSolution br = resolve_branch(p);
      CHECK(normalizability_check(br.zeta).ok);
    } catch (const NoDistillation&) {
    }
  }
}

TEST_SUITE_END();
