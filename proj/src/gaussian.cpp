#include "qfb/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfb {
namespace {

constexpr double kRealTol = 1e-10;
constexpr double kSymTol = 1e-12;
constexpr double kUncertaintyTol = 1e-8;
constexpr double kBogoliubovTol = 1e-6;

// Per-mode map (b, b^dag) -> (q, p) and its inverse.
CMatrix quadrature_basis(Eigen::Index n, bool inverse) {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  Eigen::Matrix2cd t;
  if (!inverse) {
    t << r, r, -i * r, i * r;
  } else {
    t << r, i * r, r, -i * r;
  }
  CMatrix out = CMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) out.block<2, 2>(2 * j, 2 * j) = t;
  return out;
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

CovarianceMatrix::CovarianceMatrix(RMatrix gamma) : gamma_(std::move(gamma)) {
  if (gamma_.rows() != gamma_.cols() || gamma_.rows() % 2 != 0 || gamma_.rows() == 0) {
    throw Error(ErrorCode::invalid_argument, "covariance matrix must be 2n x 2n");
  }
  const double scale = std::max(1.0, gamma_.cwiseAbs().maxCoeff());
  const double asym = (gamma_ - gamma_.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= kSymTol * scale)) {
    throw Error(ErrorCode::invalid_argument,
                "covariance matrix is not symmetric (residual " + std::to_string(asym) + ")");
  }
  gamma_ = 0.5 * (gamma_ + gamma_.transpose()).eval();
}

Eigen::Matrix2d CovarianceMatrix::block(std::size_t j) const {
  if (j >= modes()) throw Error(ErrorCode::invalid_argument, "mode index out of range");
  const auto k = static_cast<Eigen::Index>(2 * j);
  return gamma_.block<2, 2>(k, k);
}

QuadratureTransfer quadrature_transfer(const TransferMatrix& g, const ModeParity& parity) {
  const auto n = static_cast<Eigen::Index>(g.size());
  if (static_cast<Eigen::Index>(parity.size()) != n) {
    throw Error(ErrorCode::invalid_argument, "parity length does not match transfer matrix");
  }
  if (std::abs(g.s.real()) > 1e-12 * std::max(1.0, std::abs(g.s))) {
    throw Error(ErrorCode::not_real, "quadrature map needs s on the imaginary axis");
  }

  // Slot 2j holds b_j, slot 2j+1 holds b_j^dag. Doubled-basis entry j sits in
  // slot 2j or 2j+1 according to its parity; the adjoint relation fills the
  // partner slot with conj(G).
  CMatrix full = CMatrix::Zero(2 * n, 2 * n);
  auto slot = [&](Eigen::Index j) {
    return 2 * j + (parity.conjugated(static_cast<std::size_t>(j)) ? 1 : 0);
  };
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const Eigen::Index row = slot(r), col = slot(c);
      full(row, col) = g.g(r, c);
      full(row ^ 1, col ^ 1) = std::conj(g.g(r, c));
    }
  }

  const CMatrix y = quadrature_basis(n, false) * full * quadrature_basis(n, true);
  const double residual = y.imag().cwiseAbs().maxCoeff();
  if (!(residual <= kRealTol * std::max(1.0, y.real().cwiseAbs().maxCoeff()))) {
    throw Error(ErrorCode::not_real,
                "quadrature transfer keeps imaginary residual " + std::to_string(residual));
  }
  return QuadratureTransfer{y.real()};
}

CovarianceMatrix output_covariance(const QuadratureTransfer& q) {
  const auto dim = q.y.rows();
  CMatrix r = CMatrix::Zero(dim, dim);
  const cplx i(0.0, 1.0);
  for (Eigen::Index j = 0; j < dim; j += 2) {
    r(j, j) = 1.0;
    r(j, j + 1) = i;
    r(j + 1, j) = -i;
    r(j + 1, j + 1) = 1.0;
  }
  const CMatrix y = q.y.cast<cplx>();
  const CMatrix moments = y * r * y.transpose();
  return CovarianceMatrix(0.5 * moments.real());
}

double symplectic_eigenvalue(const CovarianceMatrix& gamma, std::size_t j) {
  const Eigen::Matrix2d b = gamma.block(j);
  const double det = b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0);
  const double sigma = std::sqrt(std::max(det, 0.0));
  if (sigma < 0.5 - kUncertaintyTol) {
    throw Error(ErrorCode::unphysical, "symplectic eigenvalue " + std::to_string(sigma) +
                                           " of mode " + std::to_string(j + 1) +
                                           " violates the uncertainty relation");
  }
  return sigma;
}

double entropy_from_symplectic(double sigma) {
  if (!(sigma > 0.5)) return 0.0;
  // p ln p - m ln m = m ln(1 + 1/m) + ln p, stable for large sigma.
  const double m = sigma - 0.5;
  const double p = sigma + 0.5;
  return m * std::log1p(1.0 / m) + std::log(p);
}

double entanglement_entropy(const CovarianceMatrix& gamma, std::size_t j) {
  return entropy_from_symplectic(symplectic_eigenvalue(gamma, j));
}

double tms_entropy_closed_form(cplx g11, cplx g12) {
  const double a = std::norm(g11);
  const double b = std::norm(g12);
  if (!(std::abs(a - b - 1.0) <= kBogoliubovTol)) {
    throw Error(ErrorCode::not_bogoliubov,
                "|G11|^2 - |G12|^2 = " + std::to_string(a - b) + ", expected 1");
  }
  return xlogx(a) - xlogx(b);
}

}  // namespace qfb
