#include "zsq/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace zsq {

namespace {
constexpr Complex kI{0.0, 1.0};
}

FockMatrix build_projected_operator(const ProtocolParams& params, int dim) {
  const OperatorScalars sc = compute_scalars(params);
  const Ladder lad = ladder(dim);
  const Complex half_phase = std::exp(kI * (0.5 * params.tau_bar));
  const FockMatrix x_op =
      lad.a_dag * half_phase + lad.a * std::conj(half_phase);
  const Complex g = sc.G;
  const FockMatrix gaussian =
      apply_hermitian(x_op, [g](double x) { return std::exp(-0.5 * g * x * x); });
  FockVector phases(dim);
  for (int n = 0; n < dim; ++n) {
    phases(n) = std::exp(-kI * (params.tau_bar * (n + 0.5)));
  }
  return sc.M * (phases.asDiagonal() * gaussian);
}

SimulationTrace run(const ProtocolParams& params, const DensityMatrix& rho0,
                    int n_steps, int dim) {
  if (rho0.dim() != dim) {
    throw DimMismatch("run: initial state dimension does not match dim");
  }
  if (n_steps < 0) {
    throw std::invalid_argument("run: n_steps must be >= 0");
  }

  SimulationTrace trace;
  trace.dim = dim;

  const FockMatrix v = build_projected_operator(params, dim);

  std::optional<PureState> xi;
  try {
    const SqueezedTarget target = target_state(params);
    xi = squeezed_vacuum(target, dim, 1e-6);
    trace.target = target;
  } catch (const NoDistillation&) {
    // Degenerate parameters: run the protocol anyway, without a fidelity
    // reference.
  }

  FockMatrix rho = rho0.entries;

  const auto record = [&](int n, double step_prob, double log_cum) {
    TraceRow row;
    row.n = n;
    row.step_prob = step_prob;
    row.cum_prob = std::exp(log_cum);
    DensityMatrix wrapped{rho, 0.0};
    if (xi) {
      row.fidelity = fidelity(wrapped, *xi);
    }
    row.purity = purity(wrapped);
    trace.rows.push_back(row);
  };

  record(0, 1.0, 0.0);

  double log_cum = 0.0;
  for (int n = 1; n <= n_steps; ++n) {
    FockMatrix next = v * rho * v.adjoint();
    const double step = next.trace().real();
    if (!(step > 0.0)) {
      throw NoConvergence("run: survival probability collapsed to zero");
    }
    log_cum += std::log(step);
    rho = next / step;
    rho = 0.5 * (rho + rho.adjoint().eval());
    record(n, step, log_cum);
  }
  return trace;
}

double squeezed_tail_mass(const SqueezedTarget& target, int dim) {
  const double z2 = std::tanh(target.r) * std::tanh(target.r);
  double term = 1.0 / std::cosh(target.r);  // |c_0|^2 of the normalized state
  double captured = 0.0;
  for (int n = 0; n < dim; n += 2) {
    captured += term;
    term *= z2 * (n + 1.0) / (n + 2.0);
  }
  return std::max(0.0, 1.0 - captured);
}

int choose_dim(const SqueezedTarget& target, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("choose_dim: tol must be positive");
  }
  constexpr int kFloor = 40;
  if (squeezed_tail_mass(target, kFloor) < tol) {
    return kFloor;
  }
  int lo = kFloor;  // tail(lo) >= tol
  int hi = kFloor;
  while (squeezed_tail_mass(target, hi) >= tol) {
    lo = hi;
    hi *= 2;
    if (hi > (1 << 16)) {
      throw TailTooLarge(
          "choose_dim: no dimension below 65536 meets the tail tolerance");
    }
  }
  // Bisect on even dimensions: smallest even hi with tail(hi) < tol.
  while (hi - lo > 2) {
    int mid = lo + (hi - lo) / 2;
    mid -= mid % 2;
    if (mid <= lo) mid = lo + 2;
    if (squeezed_tail_mass(target, mid) < tol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace zsq
