#include "qfb/feedback.hpp"

#include <cmath>
#include <string>

namespace qfb {
namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kLoopTol = 1e-12;

}  // namespace

BeamsplitterController::BeamsplitterController(double transmissivity, double reflectivity)
    : tau_(transmissivity), rho_(reflectivity) {
  if (!std::isfinite(tau_) || !std::isfinite(rho_) ||
      std::abs(tau_ * tau_ + rho_ * rho_ - 1.0) > kUnitTol) {
    throw Error(ErrorCode::invalid_argument,
                "beamsplitter needs tau^2 + rho^2 = 1 (tau = " + std::to_string(tau_) +
                    ", rho = " + std::to_string(rho_) + ")");
  }
}

BeamsplitterController BeamsplitterController::from_reflectivity(double reflectivity) {
  if (!(std::abs(reflectivity) <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "reflectivity must satisfy |rho| <= 1");
  }
  return BeamsplitterController(std::sqrt(1.0 - reflectivity * reflectivity), reflectivity);
}

Matrix2c controller_matrix(const BeamsplitterController& c) {
  Matrix2c k;
  k << c.transmissivity(), -c.reflectivity(), c.reflectivity(), c.transmissivity();
  return k;
}

TransferMatrix closed_loop_tf(const TransferMatrix& plant, const Matrix2c& k, std::size_t j) {
  const auto n = static_cast<Eigen::Index>(plant.size());
  const auto jj = static_cast<Eigen::Index>(j);
  if (jj >= n) throw Error(ErrorCode::invalid_argument, "fed mode out of range");

  const CMatrix& g = plant.g;
  const cplx k11 = k(0, 0), k12 = k(0, 1), k21 = k(1, 0), k22 = k(1, 1);
  const cplx det_k = k11 * k22 - k12 * k21;
  const cplx loop = k21 * g(jj, jj);
  const cplx den = 1.0 - loop;
  if (std::abs(den) < kLoopTol * (1.0 + std::abs(loop))) {
    throw Error(ErrorCode::loop_singular, "1 - K21 G_jj vanishes at this s");
  }

  CMatrix out(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index c = 0; c < n; ++c) {
      if (l == jj && c == jj) {
        out(l, c) = (k12 + g(jj, jj) * det_k) / den;
      } else if (l == jj) {
        out(l, c) = g(jj, c) * k11 / den;
      } else if (c == jj) {
        out(l, c) = g(l, jj) * k22 / den;
      } else {
        out(l, c) = (g(l, c) + k21 * (g(l, jj) * g(jj, c) - g(jj, jj) * g(l, c))) / den;
      }
    }
  }
  return TransferMatrix{plant.s, std::move(out)};
}

ClosedLoopSystem close_loop(const LinearQuantumSystem& plant, const BeamsplitterController& c,
                            std::size_t j) {
  const auto n = static_cast<Eigen::Index>(plant.modes());
  const auto jj = static_cast<Eigen::Index>(j);
  if (jj >= n) throw Error(ErrorCode::invalid_argument, "fed mode out of range");

  const StateSpace ss = plant.realization();
  const Matrix2c k = controller_matrix(c);
  const cplx k11 = k(0, 0), k12 = k(0, 1), k21 = k(1, 0), k22 = k(1, 1);

  const cplx loop = k21 * ss.d(jj, jj);
  if (std::abs(1.0 - loop) < kLoopTol * (1.0 + std::abs(loop))) {
    throw Error(ErrorCode::ill_posed_loop, "algebraic loop 1 - K21 D_jj is singular");
  }
  const cplx alpha = 1.0 / (1.0 - loop);

  const CMatrix e = CMatrix::Identity(n, n).col(jj);
  const CMatrix sel = e * e.transpose();
  const CMatrix pass = CMatrix::Identity(n, n) - sel;

  // Plant input as a function of state x and external input v: u = F x + H v.
  const CMatrix f = alpha * k21 * e * ss.c.row(jj);
  const CMatrix h = pass + alpha * e * (k21 * ss.d.row(jj) * pass + k22 * e.transpose());
  const CMatrix out_map = pass + k11 * sel;

  StateSpace cl;
  cl.a = ss.a + ss.b * f;
  cl.b = ss.b * h;
  cl.c = out_map * (ss.c + ss.d * f);
  cl.d = out_map * ss.d * h + k12 * sel;
  return ClosedLoopSystem(plant, c, j, std::move(cl));
}

std::vector<cplx> closed_loop_poles(const ClosedLoopSystem& cl) { return eigenvalues(cl.drift()); }

TransferMatrix transfer_matrix(const ClosedLoopSystem& cl, cplx s) {
  return transfer_matrix(cl.realization(), s);
}

}  // namespace qfb
