#pragma once

// Gaussian output states of a linear network driven by vacuum.
//
// Quadratures are ordered (q_1, p_1, ..., q_n, p_n) with q = (b + b^dag)/sqrt2
// and p = (b - b^dag)/(sqrt2 i). Vacuum variance is 1/2; entropies are in nats.

#include <cstddef>

#include "qfb/lqs.hpp"

namespace qfb {

struct QuadratureTransfer {
  RMatrix y;  // x_out = Y x_in
};

class CovarianceMatrix {
 public:
  /// Checks symmetry to 1e-12 (relative to the largest entry) and stores the
  /// symmetrized matrix.
  explicit CovarianceMatrix(RMatrix gamma);

  std::size_t modes() const noexcept { return static_cast<std::size_t>(gamma_.rows() / 2); }
  const RMatrix& matrix() const noexcept { return gamma_; }
  Eigen::Matrix2d block(std::size_t j) const;

 private:
  RMatrix gamma_;
};

/// Expands the doubled-basis relation to (b_1, b_1^dag, ..., b_n, b_n^dag)
/// using G and conj(G), then changes basis to quadratures.
/// Throws Error(not_real) if s is off the imaginary axis or the result keeps
/// an imaginary residual above 1e-10.
QuadratureTransfer quadrature_transfer(const TransferMatrix& g, const ModeParity& parity);

/// gamma = 1/2 Re[Y R Y^T], R = (+)_j [[1, i], [-i, 1]].
CovarianceMatrix output_covariance(const QuadratureTransfer& y);

/// sqrt(det gamma_j); throws Error(unphysical) below 1/2 - 1e-8.
double symplectic_eigenvalue(const CovarianceMatrix& gamma, std::size_t j);

/// (s + 1/2) ln(s + 1/2) - (s - 1/2) ln(s - 1/2), with s clamped to >= 1/2.
double entropy_from_symplectic(double sigma);

/// Entropy of mode j against the rest.
double entanglement_entropy(const CovarianceMatrix& gamma, std::size_t j);

/// |G11|^2 ln|G11|^2 - |G12|^2 ln|G12|^2 for a pure two-mode squeezed output.
/// Throws Error(not_bogoliubov) unless |G11|^2 - |G12|^2 = 1 to 1e-6.
double tms_entropy_closed_form(cplx g11, cplx g12);

}  // namespace qfb
