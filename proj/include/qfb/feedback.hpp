#pragma once

// Coherent feedback through a static beamsplitter: output j of the plant is
// routed back into input j, with the controller's second port carrying the
// external field.

#include <cstddef>
#include <vector>

#include "qfb/lqs.hpp"

namespace qfb {

/// Lossless beamsplitter K = [[tau, -rho], [rho, tau]], tau^2 + rho^2 = 1.
class BeamsplitterController {
 public:
  /// Validates tau^2 + rho^2 = 1 to 1e-12.
  BeamsplitterController(double transmissivity, double reflectivity);

  /// tau = sqrt(1 - rho^2); requires |rho| <= 1.
  static BeamsplitterController from_reflectivity(double reflectivity);

  double transmissivity() const noexcept { return tau_; }
  double reflectivity() const noexcept { return rho_; }

 private:
  double tau_;
  double rho_;
};

using Matrix2c = Eigen::Matrix2cd;

Matrix2c controller_matrix(const BeamsplitterController& c);

/// Frequency-domain mode-j loop closure of a plant transfer matrix.
///
///   G^fb_jj = (K12 + G_jj det K) / den,  G^fb_jk = G_jk K11 / den,
///   G^fb_lj = G_lj K22 / den,
///   G^fb_lk = (G_lk + K21 (G_lj G_jk - G_jj G_lk)) / den,
/// with den = 1 - K21 G_jj. Throws Error(loop_singular) when
/// |den| < 1e-12 (1 + |K21 G_jj|).
TransferMatrix closed_loop_tf(const TransferMatrix& plant, const Matrix2c& k, std::size_t j);

/// State-space realization of the same interconnection. Controller wiring:
///   plant input j  = K21 * (plant output j) + K22 * w
///   external out j = K11 * (plant output j) + K12 * w
/// All other ports pass straight through.
class ClosedLoopSystem {
 public:
  ClosedLoopSystem(LinearQuantumSystem plant, BeamsplitterController controller,
                   std::size_t fed_mode, StateSpace realization)
      : plant_(std::move(plant)),
        controller_(controller),
        fed_mode_(fed_mode),
        realization_(std::move(realization)) {}

  const LinearQuantumSystem& plant() const noexcept { return plant_; }
  const BeamsplitterController& controller() const noexcept { return controller_; }
  std::size_t fed_mode() const noexcept { return fed_mode_; }
  const ModeParity& parity() const noexcept { return plant_.parity(); }
  const StateSpace& realization() const noexcept { return realization_; }
  const CMatrix& drift() const noexcept { return realization_.a; }

 private:
  LinearQuantumSystem plant_;
  BeamsplitterController controller_;
  std::size_t fed_mode_;
  StateSpace realization_;
};

/// Throws Error(ill_posed_loop) when 1 - K21 D_jj vanishes (rho = 1 for the
/// bare cavity, whose direct feedthrough is the identity).
ClosedLoopSystem close_loop(const LinearQuantumSystem& plant, const BeamsplitterController& c,
                            std::size_t j);

std::vector<cplx> closed_loop_poles(const ClosedLoopSystem& cl);
TransferMatrix transfer_matrix(const ClosedLoopSystem& cl, cplx s);

}  // namespace qfb
