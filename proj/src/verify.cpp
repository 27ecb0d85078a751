#include "zsq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "zsq/oracle.hpp"
#include "zsq/protocol.hpp"

namespace zsq {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

const ProtocolParams kReferencePoint{0.9 * kPi, 1.0, 0.4};

std::string where_of(const ProtocolParams& p) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "tau_bar=%.6g g_bar=%.6g dp_bar=%.6g",
                p.tau_bar, p.g_bar, p.dp_bar);
  return buf;
}

CheckResult make_result(std::string name, std::string where, double value,
                        double bound, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.where = std::move(where);
  r.value = value;
  r.bound = bound;
  r.status = (value <= bound) ? "pass" : "fail";
  r.detail = std::move(detail);
  return r;
}

CheckResult make_skipped(std::string name, std::string where,
                         std::string reason) {
  CheckResult r;
  r.name = std::move(name);
  r.where = std::move(where);
  r.status = "skipped";
  r.detail = std::move(reason);
  return r;
}

ProtocolParams random_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> tau(0.05, 6.2);
  std::uniform_real_distribution<double> g(-2.0, 2.0);
  std::uniform_real_distribution<double> dp(0.05, 2.0);
  return {tau(rng), g(rng), dp(rng)};
}

// ---- parameter-free / scalar checks -------------------------------------

void scalar_checks(std::vector<CheckResult>& out) {
  std::mt19937 rng(20240901u);

  double worst_identity = 0.0;
  double worst_branch = 0.0;
  double worst_sign = 0.0;
  double worst_gamma = 0.0;  // max |gamma_n| over random params; bound 1
  int accepted = 0;
  for (int i = 0; i < 10000; ++i) {
    const ProtocolParams p = random_params(rng);
    const OperatorScalars sc = compute_scalars(p);
    worst_identity = std::max(worst_identity,
                              std::abs(sc.M * sc.M * sc.beta - 1.0));
    worst_identity =
        std::max(worst_identity, std::abs(sc.G * sc.beta - sc.c * sc.c));
    BranchSolution br;
    try {
      br = resolve_branch(p);
    } catch (const NoDistillation&) {
      continue;
    }
    ++accepted;
    const Complex rejected = 2.0 * br.q - br.lambda;  // the reciprocal root
    worst_branch = std::max(worst_branch,
                            std::abs(br.lambda * rejected - 1.0));
    worst_branch = std::max(
        worst_branch, std::abs(br.zeta * (2.0 * br.q_tilde - br.zeta) - 1.0));
    worst_branch =
        std::max(worst_branch, std::abs(std::exp(br.log_lambda) - br.lambda));
    if (std::abs(br.lambda) >= 1.0 || std::abs(rejected) <= 1.0 ||
        std::abs(br.zeta) >= 1.0) {
      worst_branch = std::max(worst_branch, 1.0);
    }

    // Published sign rule: zeta = q_tilde +- sqrt(q^2-1)/G with the sign of
    // Re log(q - sqrt(q^2-1)), wherever that expression is unambiguous.
    const Complex lp = std::log(br.q - std::sqrt(br.q * br.q - 1.0));
    if (std::abs(lp.real()) > 1e-9) {
      if (br.upper_branch != (lp.real() > 0.0)) {
        worst_sign = std::max(worst_sign, 2.0);
      }
      const Complex root = std::sqrt(br.q * br.q - 1.0) / sc.G;
      const Complex zeta_rule =
          br.q_tilde + (br.upper_branch ? root : -root);
      // Ratio of the value discrepancy to its 1e-9 allowance.
      worst_sign = std::max(
          worst_sign, std::abs(br.zeta - zeta_rule) /
                          std::max(1.0, std::abs(br.zeta)) / 1e-9);
    }

    const Spectrum sp = spectrum(sc, br, 8);
    for (const Complex& g : sp.gamma) {
      worst_gamma = std::max(worst_gamma, std::abs(g));
    }
  }
  std::ostringstream accepted_note;
  accepted_note << accepted << " of 10000 random triples non-degenerate";
  out.push_back(make_result("scalar_identities", "random x10000",
                            worst_identity, 1e-12));
  out.push_back(make_result("branch_consistency", "random x10000",
                            worst_branch, 1e-12, accepted_note.str()));
  out.push_back(make_result("sign_rule_equivalence", "random x10000",
                            worst_sign, 1.0,
                            "value discrepancy as a ratio of its allowance"));
  out.push_back(make_result("spectral_bound_random", "random x10000",
                            worst_gamma, 1.0 - 1e-12));

  // Geometric ladder at the reference point.
  const Spectrum sp = spectrum(kReferencePoint, 8);
  const BranchSolution br = resolve_branch(kReferencePoint);
  double worst_ratio = 0.0;
  for (size_t n = 0; n + 1 < sp.gamma.size(); ++n) {
    worst_ratio = std::max(
        worst_ratio, std::abs(sp.gamma[n + 1] / sp.gamma[n] - br.lambda));
  }
  out.push_back(make_result("spectrum_geometric", where_of(kReferencePoint),
                            worst_ratio, 1e-12));

  // Normalizability quadratic form vs its closed-form eigenvalues.
  std::mt19937 rng2(7u);
  std::uniform_real_distribution<double> unit(-1.5, 1.5);
  double worst_norm_check = 0.0;
  bool coupling_ok = true;
  for (int i = 0; i < 1000; ++i) {
    const Complex zeta{unit(rng2), unit(rng2)};
    const NormalizabilityResult nr = normalizability_check(zeta);
    worst_norm_check =
        std::max(worst_norm_check,
                 std::abs(nr.eig_low - (1.0 - std::abs(zeta))));
    worst_norm_check =
        std::max(worst_norm_check,
                 std::abs(nr.eig_high - (1.0 + std::abs(zeta))));
    if (nr.ok != (std::abs(zeta) < 1.0)) coupling_ok = false;
  }
  out.push_back(make_result("normalizability_closed_form", "random x1000",
                            worst_norm_check, 1e-12));
  out.push_back(make_result("normalizability_coupling", "random x1000",
                            coupling_ok ? 0.0 : 1.0, 0.0));

  // Degenerate parameter guards.
  double guard_failures = 0.0;
  for (const ProtocolParams p :
       {ProtocolParams{kPi, 1.0, 1.0}, ProtocolParams{3.0 * kPi, 1.0, 1.0},
        ProtocolParams{2.0 * kPi, 1.0, 1.0},
        ProtocolParams{1.3, 0.0, 0.7}}) {
    try {
      resolve_branch(p);
      guard_failures += 1.0;
    } catch (const NoDistillation&) {
    }
  }
  out.push_back(make_result("degenerate_guards",
                            "tau=pi,3pi,2pi and g_bar=0", guard_failures,
                            0.0));
}

void factorization_checks(std::vector<CheckResult>& out) {
  std::mt19937 rng(424242u);
  std::uniform_real_distribution<double> small(-0.5, 0.5);

  double worst_roundtrip = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Complex mu{small(rng), small(rng)};
    const Complex nu{small(rng), small(rng)};
    const Complex lambda{small(rng), small(rng)};
    try {
      const FactoredForm f = factorize(mu, nu, lambda);
      const UnifiedForm u = unify(f.x, f.y, f.z);
      worst_roundtrip = std::max({worst_roundtrip, std::abs(u.mu - mu),
                                  std::abs(u.nu - nu),
                                  std::abs(u.lambda - lambda)});
    } catch (const Error&) {
      worst_roundtrip = std::max(worst_roundtrip, 1.0);
    }
  }
  out.push_back(make_result("factorize_roundtrip", "random x1000",
                            worst_roundtrip, 1e-9));

  // Operator identity on a truncated space for small-norm generators.
  const int dim = 30;
  const Ladder lad = ladder(dim);
  const FockMatrix a_low = 0.5 * lad.a * lad.a;
  const FockMatrix a_raise = 0.5 * lad.a_dag * lad.a_dag;
  FockMatrix b_op = FockMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) b_op(n, n) = n + 0.5;

  std::uniform_real_distribution<double> tiny(-0.1, 0.1);
  double worst_identity = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Complex mu{tiny(rng), tiny(rng)};
    const Complex nu{tiny(rng), tiny(rng)};
    const Complex lambda{tiny(rng), tiny(rng)};
    const FactoredForm f = factorize(mu, nu, lambda);
    const FockMatrix lhs =
        exp_taylor(FockMatrix(mu * a_raise + nu * a_low + lambda * b_op));
    const FockMatrix rhs = exp_taylor(FockMatrix(f.x * a_raise)) *
                           exp_taylor(FockMatrix(f.y * b_op)) *
                           exp_taylor(FockMatrix(f.z * a_low));
    // Truncation corrupts the high end of the block; compare the leading
    // half where the identity must hold.
    const int lead = dim / 2;
    worst_identity =
        std::max(worst_identity, (lhs - rhs)
                                     .topLeftCorner(lead, lead)
                                     .cwiseAbs()
                                     .maxCoeff());
  }
  out.push_back(make_result("factorize_operator_identity",
                            "dim=30 random x5", worst_identity, 1e-8));

  // kappa = 0 specialization: mu = -G e^{i tau}, nu = -G e^{-i tau},
  // lambda = -G has exact closed-form factors.
  {
    const OperatorScalars sc = compute_scalars(kReferencePoint);
    const double tau = kReferencePoint.tau_bar;
    const Complex mu = -sc.G * std::exp(kI * tau);
    const Complex nu = -sc.G * std::exp(-kI * tau);
    const FactoredForm f = factorize(mu, nu, -sc.G);
    const Complex x_expect = -(sc.G / (1.0 + sc.G)) * std::exp(kI * tau);
    const Complex z_expect = -(sc.G / (1.0 + sc.G)) * std::exp(-kI * tau);
    const Complex y_expect = -std::log(1.0 + sc.G);
    const double err =
        std::max({std::abs(f.x - x_expect), std::abs(f.y - y_expect),
                  std::abs(f.z - z_expect)});
    out.push_back(make_result("factorize_zero_kappa_form",
                              where_of(kReferencePoint), err, 1e-10));
  }

  // Unifying the ordered form of the projected operator must reproduce the
  // closed single-exponential coefficients.
  {
    const OperatorScalars sc = compute_scalars(kReferencePoint);
    const BranchSolution br = resolve_branch(kReferencePoint);
    const double tau = kReferencePoint.tau_bar;
    const Complex x8 = sc.G / (1.0 + sc.G) * std::exp(-kI * tau);
    const Complex y8 = std::log(1.0 + sc.G) + kI * tau;
    const UnifiedForm u = unify(-x8, -y8, -x8);
    const Complex sq = std::sqrt(br.q * br.q - 1.0);
    const Complex lp = std::log(br.q - sq);
    const Complex mu_expect = sc.G * lp / sq;
    const Complex lambda_expect =
        (sc.G * std::cos(tau) + kI * std::sin(tau)) * lp / sq;
    const double err = std::max({std::abs(u.mu - mu_expect),
                                 std::abs(u.nu - mu_expect),
                                 std::abs(u.lambda - lambda_expect)});
    out.push_back(make_result("unify_unified_exponent",
                              where_of(kReferencePoint), err, 1e-10));
  }
}

// ---- matrix-level checks at one parameter point --------------------------

int quadrature_start_nodes(const ProtocolParams& p, int dim) {
  const OperatorScalars sc = compute_scalars(p);
  const double amax = std::abs(sc.c) * 2.0 * std::sqrt(double(dim));
  return std::max(100, static_cast<int>(0.75 * amax * amax) + 1);
}

void point_checks(const ProtocolParams& p, std::vector<CheckResult>& out) {
  const std::string where = where_of(p);

  BranchSolution br;
  try {
    br = resolve_branch(p);
  } catch (const NoDistillation& e) {
    out.push_back(make_skipped("degenerate_point_skipped", where,
                               std::string("no distillation: ") + e.what()));
    return;
  }
  const OperatorScalars sc = compute_scalars(p);

  // Momentum-integral route against the closed-form route, dim = 60.
  {
    const int dim = 60;
    const FockMatrix closed = build_projected_operator(p, dim);
    const QuadratureOperator quad = momentum_quadrature_operator(
        p, dim, quadrature_start_nodes(p, dim), 1e-9);
    const double err = (quad.v - closed).cwiseAbs().maxCoeff();
    std::ostringstream detail;
    detail << "nodes=" << quad.nodes_used;
    out.push_back(make_result("quadrature_vs_closed_form", where, err, 1e-8,
                              detail.str()));
  }

  const int dim = 80;
  const FockMatrix v = build_projected_operator(p, dim);

  // Analytic spectrum against the numerical one, and the analytic
  // eigenvector families.
  {
    const int n_max = 4;
    const CrosscheckReport cc = eigen_crosscheck(p, dim, n_max);
    double worst_eig = 0.0;
    for (int n = 0; n <= 3; ++n) {
      worst_eig = std::max(worst_eig, cc.entries[n].eigenvalue_rel_err);
    }
    out.push_back(make_result("eigenvalue_match", where, worst_eig, 1e-6));

    // Residual tolerance grows with n: higher eigenvectors lean on the
    // truncated corner. Normalize by the 3^n schedule.
    double worst_resid = 0.0;
    double worst_biorth = 0.0;
    for (const CrosscheckEntry& e : cc.entries) {
      const double schedule = std::pow(3.0, e.n);
      worst_resid = std::max(worst_resid, e.residual / schedule);
      worst_biorth = std::max(worst_biorth, e.biorth_max_offdiag / schedule);
    }
    out.push_back(
        make_result("eigenvector_residuals", where, worst_resid, 1e-8));
    out.push_back(make_result("biorthogonality", where, worst_biorth, 1e-8));

    out.push_back(make_result("leading_eigenvector_target", where,
                              cc.entries[0].overlap_deficit, 1e-8));
  }

  // Three-route agreement on the leading Fock block: closed form,
  // momentum quadrature, and the numerical eigensystem reconstruction.
  {
    Eigen::ComplexEigenSolver<FockMatrix> es(v);
    if (es.info() != Eigen::Success) {
      out.push_back(make_skipped("reconstruction_agreement", where,
                                 "defective truncated eigensystem"));
      return;
    }
    std::vector<int> order(dim);
    for (int i = 0; i < dim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b));
    });
    const FockMatrix winv = es.eigenvectors().inverse();
    FockMatrix recon = FockMatrix::Zero(dim, dim);
    const double lead_mag = std::abs(es.eigenvalues()(order[0]));
    for (int idx : order) {
      if (std::abs(es.eigenvalues()(idx)) < 1e-9 * lead_mag) break;
      recon += es.eigenvalues()(idx) * es.eigenvectors().col(idx) *
               winv.row(idx);
    }
    const QuadratureOperator quad = momentum_quadrature_operator(
        p, dim, quadrature_start_nodes(p, dim), 1e-9);
    const int lead = 10;
    const auto block_err = [lead](const FockMatrix& a, const FockMatrix& b) {
      return (a - b).topLeftCorner(lead, lead).cwiseAbs().maxCoeff();
    };
    const double err = std::max({block_err(recon, v), block_err(quad.v, v),
                                 block_err(recon, quad.v)});
    out.push_back(make_result("reconstruction_agreement", where, err, 1e-6));
  }
}

void free_coupling_check(std::vector<CheckResult>& out) {
  // g_bar = 0 keeps the quadrature operator-free; the integral collapses to
  // the scalar prefactor times the free rotation.
  const ProtocolParams p{1.1, 0.0, 0.8};
  const OperatorScalars sc = compute_scalars(p);
  const int dim = 40;
  const QuadratureOperator quad =
      momentum_quadrature_operator(p, dim, 100, 1e-10);
  FockMatrix expected = FockMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    expected(n, n) = sc.M * std::exp(-kI * (p.tau_bar * (n + 0.5)));
  }
  const double err = (quad.v - expected).cwiseAbs().maxCoeff();
  out.push_back(
      make_result("quadrature_free_coupling", where_of(p), err, 1e-9));
}

}  // namespace

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) {
    return c.status != "fail";
  });
}

std::string VerificationReport::first_failure() const {
  for (const CheckResult& c : checks) {
    if (c.status == "fail") return c.name;
  }
  return {};
}

VerificationReport run_verification(VerifyLevel level) {
  VerificationReport report;
  report.level = (level == VerifyLevel::quick) ? "quick" : "full";

  scalar_checks(report.checks);
  factorization_checks(report.checks);
  free_coupling_check(report.checks);
  point_checks(kReferencePoint, report.checks);

  if (level == VerifyLevel::full) {
    for (double tau_frac : {0.55, 0.70, 0.85}) {
      for (double g : {0.6, 0.85, 1.1}) {
        for (double dp : {0.3, 0.45, 0.6}) {
          point_checks({tau_frac * kPi, g, dp}, report.checks);
        }
      }
    }
    // A deliberately degenerate point: it must be skipped with a reason,
    // not abort the battery.
    point_checks({kPi, 1.0, 1.0}, report.checks);
  }
  return report;
}

std::string report_to_json(const VerificationReport& report) {
  nlohmann::json j;
  j["level"] = report.level;
  j["passed"] = report.passed();
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& c : report.checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["where"] = c.where;
    jc["status"] = c.status;
    jc["value"] = c.value;
    jc["bound"] = c.bound;
    jc["detail"] = c.detail;
    j["checks"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

std::string report_to_text(const VerificationReport& report) {
  std::ostringstream os;
  for (const CheckResult& c : report.checks) {
    os << "[" << c.status << "] " << c.name;
    if (!c.where.empty()) os << " (" << c.where << ")";
    if (c.status != "skipped") {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "  value=%.3e bound=%.3e", c.value,
                    c.bound);
      os << buf;
    }
    if (!c.detail.empty()) os << "  [" << c.detail << "]";
    os << "\n";
  }
  os << (report.passed() ? "VERIFICATION PASSED" : "VERIFICATION FAILED");
  const std::string first = report.first_failure();
  if (!first.empty()) os << " (first failure: " << first << ")";
  os << "\n";
  return os.str();
}

}  // namespace zsq
