#pragma once

// Shared helpers for the unit and acceptance tests. The oracles here are
// written out from the physical model directly and share no code with the
// library beyond the basic matrix types.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace qfb::testing {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

constexpr cplx I{0.0, 1.0};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

 private:
  std::mt19937_64 engine_;
};

inline bool rel_close(cplx got, cplx want, double tol) {
  return std::abs(got - want) <= tol * std::abs(want);
}

inline double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

// Two-mode NDPO, basis (b1, b2^dagger).
inline Mat2 two_mode_g(cplx s, double lambda, double kappa, double d1, double d2) {
  const double k2 = kappa / 2.0;
  const cplx den = (s + k2 + I * d1) * (s + k2 - I * d2) - lambda * lambda;
  Mat2 g;
  g(0, 0) = ((s - k2 + I * d1) * (s + k2 - I * d2) - lambda * lambda) / den;
  g(0, 1) = -lambda * kappa / den;
  g(1, 0) = g(0, 1);
  g(1, 1) = ((s + k2 + I * d1) * (s - k2 - I * d2) - lambda * lambda) / den;
  return g;
}

struct LinearClusterParams {
  double lambda[3];  // couplings 1-2, 1-4, 2-3
  double kappa[4];
  double detuning[4];
};

// Four-mode linear cluster, basis (b1, b2^dagger, b3, b4^dagger).
inline Mat4 linear_cluster_g(cplx s, const LinearClusterParams& p) {
  const double l1 = p.lambda[0], l2 = p.lambda[1], l3 = p.lambda[2];
  const double* k = p.kappa;
  const double* d = p.detuning;
  const cplx a1 = s + I * d[0] + k[0] / 2.0;
  const cplx a2 = s - I * d[1] + k[1] / 2.0;
  const cplx a3 = s + I * d[2] + k[2] / 2.0;
  const cplx a4 = s - I * d[3] + k[3] / 2.0;
  const cplx den = l1 * l1 * a3 * a4 - (a1 * a4 - l2 * l2) * (a2 * a3 - l3 * l3);
  auto rk = [&](int i, int j) { return std::sqrt(k[i] * k[j]); };

  Mat4 g;
  g(0, 0) = 1.0 + k[0] * a4 * (a2 * a3 - l3 * l3) / den;
  g(0, 1) = l1 * rk(0, 1) * a3 * a4 / den;
  g(0, 2) = l1 * l3 * rk(0, 2) * a4 / den;
  g(0, 3) = l2 * rk(0, 3) * (a2 * a3 - l3 * l3) / den;
  g(1, 1) = 1.0 + k[1] * a3 * (a1 * a4 - l2 * l2) / den;
  g(1, 2) = l3 * rk(1, 2) * (a1 * a4 - l2 * l2) / den;
  g(1, 3) = l1 * l2 * rk(1, 3) * a3 / den;
  g(2, 2) = 1.0 + k[2] * (a1 * a2 * a4 - l1 * l1 * a4 - l2 * l2 * a2) / den;
  g(2, 3) = l1 * l2 * l3 * rk(2, 3) / den;
  g(3, 3) = 1.0 + k[3] * (a1 * a2 * a3 - l1 * l1 * a3 - l3 * l3 * a1) / den;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

// |G11(0)|^2 of the two-mode NDPO with equal detunings.
inline double dc_gain(double lambda, double kappa, double detuning) {
  const double l2 = lambda * lambda, d2 = detuning * detuning, k2 = kappa * kappa;
  const double num = k2 * k2 + 16.0 * (d2 - l2) * (d2 - l2) + 8.0 * k2 * (d2 + l2);
  const double den = k2 - 4.0 * l2 + 4.0 * d2;
  return num / (den * den);
}

// Two-mode-squeezed entropy from the output gains a = |G11|^2, b = |G12|^2.
inline double tms_entropy(double a, double b) {
  return b > 0.0 ? a * std::log(a) - b * std::log(b) : a * std::log(a);
}

// Feedback interconnection by direct elimination: input j of the plant is
// driven by K21 y_j + K22 w, the external output is K11 y_j + K12 w.
inline Eigen::MatrixXcd interconnect(const Eigen::MatrixXcd& g, const Mat2& k, int j) {
  const int n = static_cast<int>(g.rows());
  Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(n, n);
  lhs.col(j) -= k(1, 0) * g.col(j);
  Eigen::MatrixXcd drive = g;
  drive.col(j) = k(1, 1) * g.col(j);
  const Eigen::MatrixXcd y = lhs.partialPivLu().solve(drive);

  Eigen::MatrixXcd out = y;
  out.row(j) = k(0, 0) * y.row(j);
  out(j, j) += k(0, 1);
  return out;
}

inline Mat2 beamsplitter(double rho) {
  const double tau = std::sqrt(1.0 - rho * rho);
  Mat2 k;
  k << tau, -rho, rho, tau;
  return k;
}

}  // namespace qfb::testing
