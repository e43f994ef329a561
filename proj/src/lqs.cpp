#include "qfb/lqs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qfb {
namespace {

constexpr double kSingularTol = 1e-12;

void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(ErrorCode::invalid_argument, msg);
}

}  // namespace

ModeParity::ModeParity(std::vector<int> signs) : signs_(std::move(signs)) {
  require(!signs_.empty(), "parity needs at least one mode");
  for (int s : signs_) require(s == 1 || s == -1, "parity entries must be +1 or -1");
}

RMatrix ModeParity::metric() const {
  const auto n = static_cast<Eigen::Index>(signs_.size());
  RMatrix sigma = RMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) sigma(j, j) = signs_[static_cast<std::size_t>(j)];
  return sigma;
}

LinearQuantumSystem::LinearQuantumSystem(ModeParity parity, Eigen::VectorXd damping,
                                         Eigen::VectorXd detuning, RMatrix coupling)
    : parity_(std::move(parity)),
      damping_(std::move(damping)),
      detuning_(std::move(detuning)),
      coupling_(std::move(coupling)) {
  const auto n = static_cast<Eigen::Index>(parity_.size());
  require(damping_.size() == n, "damping vector length must equal the mode count");
  require(detuning_.size() == n, "detuning vector length must equal the mode count");
  require(coupling_.rows() == n && coupling_.cols() == n, "coupling must be n x n");

  for (Eigen::Index j = 0; j < n; ++j) {
    require(std::isfinite(damping_(j)) && damping_(j) > 0.0, "damping rates must be > 0");
    require(std::isfinite(detuning_(j)), "detuning must be finite");
    require(coupling_(j, j) == 0.0, "coupling diagonal must vanish");
    for (Eigen::Index k = j + 1; k < n; ++k) {
      require(std::isfinite(coupling_(j, k)), "coupling must be finite");
      require(coupling_(j, k) == coupling_(k, j), "coupling must be symmetric");
      if (coupling_(j, k) != 0.0) {
        require(parity_[static_cast<std::size_t>(j)] == -parity_[static_cast<std::size_t>(k)],
                "couplings may only join modes of opposite parity");
      }
    }
  }

  drift_ = coupling_.cast<cplx>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double sigma = parity_[static_cast<std::size_t>(j)];
    drift_(j, j) = -cplx(damping_(j) / 2.0, sigma * detuning_(j));
  }
}

StateSpace LinearQuantumSystem::realization() const {
  const auto n = static_cast<Eigen::Index>(modes());
  const CMatrix root = damping_.cwiseSqrt().cast<cplx>().asDiagonal();
  return StateSpace{drift_, -root, root, CMatrix::Identity(n, n)};
}

TransferMatrix transfer_matrix(const StateSpace& ss, cplx s) {
  const auto n = ss.a.rows();
  const CMatrix resolvent_arg = s * CMatrix::Identity(n, n) - ss.a;

  const Eigen::JacobiSVD<CMatrix> svd_m(resolvent_arg);
  const Eigen::JacobiSVD<CMatrix> svd_a(ss.a);
  const double smallest = svd_m.singularValues()(n - 1);
  const double scale = svd_a.singularValues()(0);
  if (!(smallest >= kSingularTol * scale)) {
    throw Error(ErrorCode::singular_at_pole,
                "sI - A is numerically singular at s = (" + std::to_string(s.real()) + ", " +
                    std::to_string(s.imag()) + ")");
  }

  const CMatrix x = resolvent_arg.partialPivLu().solve(ss.b);
  return TransferMatrix{s, ss.d + ss.c * x};
}

TransferMatrix transfer_matrix(const LinearQuantumSystem& sys, cplx s) {
  return transfer_matrix(sys.realization(), s);
}

std::vector<cplx> eigenvalues(const CMatrix& drift) {
  Eigen::ComplexEigenSolver<CMatrix> solver(drift, /*computeEigenvectors=*/false);
  std::vector<cplx> out(solver.eigenvalues().data(),
                        solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

std::vector<cplx> poles(const LinearQuantumSystem& sys) { return eigenvalues(sys.drift()); }

double max_real_part(std::span<const cplx> values) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : values) m = std::max(m, v.real());
  return m;
}

double default_stability_margin(const LinearQuantumSystem& sys) {
  return 1e-9 * sys.damping().maxCoeff();
}

bool is_stable(std::span<const cplx> poles, double margin) {
  require(margin >= 0.0, "stability margin must be >= 0");
  return max_real_part(poles) < -margin;
}

bool is_stable(const LinearQuantumSystem& sys, double margin) {
  const auto p = poles(sys);
  return is_stable(p, margin);
}

bool is_stable(const LinearQuantumSystem& sys) {
  return is_stable(sys, default_stability_margin(sys));
}

}  // namespace qfb
