#include "zsq/fock.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace zsq {

namespace {

void require_dim(int dim) {
  if (dim < 2) {
    throw std::invalid_argument("Fock dimension must be at least 2");
  }
}

[[noreturn]] void throw_tail(const char* what, double tail, double tol,
                             int dim) {
  std::ostringstream os;
  os << what << ": discarded probability mass " << tail << " exceeds "
     << tol << " at dim = " << dim << "; increase the Fock dimension";
  throw TailTooLarge(os.str());
}

}  // namespace

Ladder ladder(int dim) {
  require_dim(dim);
  Ladder l;
  l.a = FockMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    l.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  l.a_dag = l.a.adjoint();
  l.number = FockMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    l.number(n, n) = static_cast<double>(n);
  }
  return l;
}

PureState coherent_state(Complex alpha, int dim, double tail_tol) {
  require_dim(dim);
  FockVector c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) {
    c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  }
  const double captured = c.squaredNorm();
  const double tail = std::max(0.0, 1.0 - captured);
  if (tail > tail_tol) {
    throw_tail("coherent_state", tail, tail_tol, dim);
  }
  PureState psi;
  psi.amplitudes = c / std::sqrt(captured);
  psi.truncation_tail = tail;
  return psi;
}

DensityMatrix thermal_state(double nbar, int dim, double tail_tol) {
  require_dim(dim);
  if (nbar < 0.0) {
    throw std::invalid_argument("thermal occupation nbar must be >= 0");
  }
  const double x = nbar / (1.0 + nbar);
  const double tail = std::pow(x, dim);
  if (tail > tail_tol) {
    throw_tail("thermal_state", tail, tail_tol, dim);
  }
  DensityMatrix rho;
  rho.entries = FockMatrix::Zero(dim, dim);
  double p = 1.0 - x;
  double sum = 0.0;
  for (int n = 0; n < dim; ++n) {
    rho.entries(n, n) = p;
    sum += p;
    p *= x;
  }
  rho.entries /= sum;
  rho.truncation_tail = tail;
  return rho;
}

PureState squeezed_vacuum(const SqueezedTarget& target, int dim,
                          double tail_tol) {
  require_dim(dim);
  const Complex zeta = target.zeta();
  FockVector c = FockVector::Zero(dim);
  c(0) = 1.0;
  for (int n = 0; n + 2 < dim; n += 2) {
    c(n + 2) = -zeta * std::sqrt((n + 1.0) / (n + 2.0)) * c(n);
  }
  const double captured = c.squaredNorm();
  // The untruncated norm of the c0 = 1 amplitude family is exactly cosh r.
  const double full = std::cosh(target.r);
  const double tail = std::max(0.0, 1.0 - captured / full);
  if (tail > tail_tol) {
    throw_tail("squeezed_vacuum", tail, tail_tol, dim);
  }
  PureState psi;
  psi.amplitudes = c / std::sqrt(captured);
  psi.truncation_tail = tail;
  return psi;
}

DensityMatrix projector(const PureState& psi) {
  DensityMatrix rho;
  rho.entries = psi.amplitudes * psi.amplitudes.adjoint();
  rho.truncation_tail = psi.truncation_tail;
  return rho;
}

FockMatrix apply_hermitian(const FockMatrix& H,
                           const std::function<Complex(double)>& f) {
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw NotHermitian("apply_hermitian: matrix is not Hermitian to 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<FockMatrix> es(H);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("apply_hermitian: eigendecomposition failed");
  }
  const Eigen::VectorXd& w = es.eigenvalues();
  FockVector fw(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    fw(i) = f(w(i));
  }
  return es.eigenvectors() * fw.asDiagonal() * es.eigenvectors().adjoint();
}

FockMatrix exp_taylor(const FockMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("exp_taylor: matrix must be square");
  }
  const Eigen::Index d = m.rows();
  const FockMatrix id = FockMatrix::Identity(d, d);

  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm)) {
    throw NoConvergence("exp_taylor: non-finite input");
  }
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.5) {
    scaled *= 0.5;
    ++squarings;
    if (squarings > 100) {
      throw NoConvergence("exp_taylor: norm too large to scale");
    }
  }
  const FockMatrix x = m / std::pow(2.0, squarings);
  // Error doubles per squaring, so tighten the Taylor target accordingly.
  const double tol_core =
      std::max(tol / std::pow(2.0, squarings), 1e-300);

  FockMatrix sum = id;
  FockMatrix term = id;
  bool converged = false;
  for (int k = 1; k <= 200; ++k) {
    term = (x * term) / static_cast<double>(k);
    sum += term;
    const double tnorm = term.cwiseAbs().colwise().sum().maxCoeff();
    // Geometric remainder bound: ||R|| <= ||term|| * q / (1 - q),
    // q = ||x|| / (k+1) <= 1/2 once k >= 1.
    const double qratio = scaled / (k + 1.0);
    if (qratio < 1.0 && tnorm * qratio / (1.0 - qratio) < tol_core) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw NoConvergence("exp_taylor: Taylor series did not converge");
  }
  for (int s = 0; s < squarings; ++s) {
    sum = sum * sum;
  }
  return sum;
}

double fidelity(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim()) {
    throw DimMismatch("fidelity: state and density matrix dimensions differ");
  }
  const Complex v =
      (psi.amplitudes.adjoint() * rho.entries * psi.amplitudes)(0, 0);
  return v.real();
}

double purity(const DensityMatrix& rho) {
  return (rho.entries * rho.entries).trace().real();
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim()) {
    throw DimMismatch("trace_distance: dimensions differ");
  }
  const FockMatrix diff = rho1.entries - rho2.entries;
  Eigen::SelfAdjointEigenSolver<FockMatrix> es(0.5 * (diff + diff.adjoint()));
  if (es.info() != Eigen::Success) {
    throw NoConvergence("trace_distance: eigendecomposition failed");
  }
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace zsq
