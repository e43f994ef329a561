#pragma once

// Linear quantum systems in the doubled (annihilation / creation) basis.
//
// Every mode contributes a single entry to the state and port vectors. The
// entry is b_j when the mode's parity is +1 and b_j^dagger when it is -1, so a
// two-mode amplifier lives in the basis (b_1, b_2^dagger). Mode indices in the
// C++ API are zero-based.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qfb/error.hpp"

namespace qfb {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

class ModeParity {
 public:
  /// Entries must be exactly +1 or -1.
  explicit ModeParity(std::vector<int> signs);

  std::size_t size() const noexcept { return signs_.size(); }
  int operator[](std::size_t j) const { return signs_.at(j); }
  bool conjugated(std::size_t j) const { return signs_.at(j) < 0; }
  std::span<const int> signs() const noexcept { return signs_; }

  /// Sigma = diag(sigma_1, ..., sigma_n), the metric of the Bogoliubov identity.
  RMatrix metric() const;

  friend bool operator==(const ModeParity&, const ModeParity&) = default;

 private:
  std::vector<int> signs_;
};

/// G(s) = D + C (sI - A)^{-1} B. Used for closed loops, whose port maps are
/// no longer the bare cavity coupling.
struct StateSpace {
  CMatrix a;
  CMatrix b;
  CMatrix c;
  CMatrix d;
};

/// n-mode cavity system driven by two-mode-squeezing couplings.
///
/// The drift is assembled from its physical parameters:
///   A_jj = -(sigma_j i Delta_j + kappa_j / 2),   A_jk = Lambda_jk (j != k).
/// Lambda is real symmetric and may only couple modes of opposite parity.
class LinearQuantumSystem {
 public:
  LinearQuantumSystem(ModeParity parity, Eigen::VectorXd damping,
                      Eigen::VectorXd detuning, RMatrix coupling);

  std::size_t modes() const noexcept { return parity_.size(); }
  const ModeParity& parity() const noexcept { return parity_; }
  const CMatrix& drift() const noexcept { return drift_; }
  const Eigen::VectorXd& damping() const noexcept { return damping_; }
  const Eigen::VectorXd& detuning() const noexcept { return detuning_; }
  const RMatrix& coupling() const noexcept { return coupling_; }

  /// B = -Gamma^{1/2}, C = Gamma^{1/2}, D = I with Gamma = diag(kappa_j).
  StateSpace realization() const;

 private:
  ModeParity parity_;
  Eigen::VectorXd damping_;
  Eigen::VectorXd detuning_;
  RMatrix coupling_;
  CMatrix drift_;
};

struct TransferMatrix {
  cplx s;
  CMatrix g;

  std::size_t size() const noexcept { return static_cast<std::size_t>(g.rows()); }
  cplx operator()(std::size_t i, std::size_t j) const {
    return g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

/// Throws Error(singular_at_pole) when the smallest singular value of
/// (sI - A) is below 1e-12 * ||A||_2.
TransferMatrix transfer_matrix(const StateSpace& ss, cplx s);
TransferMatrix transfer_matrix(const LinearQuantumSystem& sys, cplx s);

/// Eigenvalues of a drift matrix, multiplicity included, sorted by
/// (real, imag) so output order is reproducible.
std::vector<cplx> eigenvalues(const CMatrix& drift);
std::vector<cplx> poles(const LinearQuantumSystem& sys);

double max_real_part(std::span<const cplx> values);

/// 1e-9 * max_j kappa_j.
double default_stability_margin(const LinearQuantumSystem& sys);

/// True iff every pole has real part < -margin.
bool is_stable(std::span<const cplx> poles, double margin);
bool is_stable(const LinearQuantumSystem& sys, double margin);
bool is_stable(const LinearQuantumSystem& sys);

}  // namespace qfb
