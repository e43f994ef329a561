#include "doctest.h"

#include "qfb/feedback.hpp"
#include "qfb/systems.hpp"
#include "support.hpp"

using namespace qfb;
namespace t = qfb::testing;

namespace {

LinearQuantumSystem nominal(Topology topo, double lambda) {
  TopologyParams p;
  p.lambda = lambda;
  return build_topology(topo, p);
}

}  // namespace

TEST_CASE("controller validation") {
  CHECK_NOTHROW(BeamsplitterController(0.6, 0.8));
  CHECK_THROWS_AS(BeamsplitterController(0.6, 0.7), Error);
  CHECK_THROWS_AS(BeamsplitterController::from_reflectivity(1.01), Error);
  const auto c = BeamsplitterController::from_reflectivity(-0.28);
  CHECK(c.transmissivity() == doctest::Approx(0.96));

  const auto k = controller_matrix(BeamsplitterController(0.6, 0.8));
  CHECK(k(0, 0) == cplx(0.6));
  CHECK(k(0, 1) == cplx(-0.8));
  CHECK(k(1, 0) == cplx(0.8));
  CHECK(k(1, 1) == cplx(0.6));
}

TEST_CASE("zero reflectivity leaves the plant untouched") {
  const auto k = controller_matrix(BeamsplitterController::from_reflectivity(0.0));
  for (auto topo : {Topology::tms, Topology::linear4, Topology::square4}) {
    const auto plant = nominal(topo, 3.0);
    const auto g = transfer_matrix(plant, cplx(0.0, 0.4));
    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(closed_loop_tf(g, k, j).g == g.g);
      const auto cl = close_loop(plant, BeamsplitterController::from_reflectivity(0.0), j);
      CHECK(cl.drift() == plant.drift());
    }
  }
}

TEST_CASE("two-mode closed loop matches the mode-2 closed-form entries") {
  const double rho = 0.04;
  const auto k = t::beamsplitter(rho);
  const auto plant = ndpo_tms(10.0, 1.0, 10.0, 10.0);
  for (double w : {0.0, 0.3, 2.0}) {
    const cplx s(0.0, w);
    const auto g = t::two_mode_g(s, 10.0, 1.0, 10.0, 10.0);
    const cplx den = 1.0 - k(1, 0) * g(1, 1);
    const cplx det_g = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    const cplx fb11 = (g(0, 0) - k(1, 0) * det_g) / den;
    const cplx fb12 = g(0, 1) * k(1, 1) / den;
    const cplx fb21 = g(1, 0) * k(0, 0) / den;
    const cplx fb22 = (k(0, 1) + g(1, 1) * k.determinant()) / den;

    const auto got = transfer_matrix(close_loop(plant, BeamsplitterController::from_reflectivity(rho), 1), s);
    CHECK(t::rel_err(got(0, 0), fb11) < 1e-10);
    CHECK(t::rel_err(got(0, 1), fb12) < 1e-10);
    CHECK(t::rel_err(got(1, 0), fb21) < 1e-10);
    CHECK(t::rel_err(got(1, 1), fb22) < 1e-10);
  }
}

TEST_CASE("state-space and frequency-domain loops agree with direct elimination") {
  t::Rng rng(31);
  for (auto topo : {Topology::tms, Topology::linear4, Topology::tshape4, Topology::square4}) {
    const auto plant = nominal(topo, rng.uniform(1.0, 10.0));
    for (std::size_t j = 0; j < plant.modes(); ++j) {
      const double rho = rng.uniform(-0.3, 0.3);
      const auto c = BeamsplitterController::from_reflectivity(rho);
      const auto cl = close_loop(plant, c, j);
      for (int n = 0; n < 10; ++n) {
        const cplx s(0.0, rng.uniform(-20.0, 20.0));
        const auto g = transfer_matrix(plant, s);
        const auto want = t::interconnect(g.g, t::beamsplitter(rho), static_cast<int>(j));
        const auto freq = closed_loop_tf(g, controller_matrix(c), j).g;
        const auto ss = transfer_matrix(cl, s).g;
        const double scale = want.cwiseAbs().maxCoeff();
        CHECK((freq - want).cwiseAbs().maxCoeff() <= 1e-10 * scale);
        CHECK((ss - want).cwiseAbs().maxCoeff() <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("closed loop stays lossless") {
  const auto plant = nominal(Topology::linear4, 10.0);
  const CMatrix sigma = plant.parity().metric().cast<cplx>();
  for (std::size_t j = 0; j < 4; ++j) {
    const auto cl = close_loop(plant, BeamsplitterController::from_reflectivity(0.04), j);
    for (double w : {0.0, 1.0, 4.0}) {
      const auto g = transfer_matrix(cl, cplx(0.0, w)).g;
      CHECK((g * sigma * g.adjoint() - sigma).cwiseAbs().maxCoeff() < 1e-10 * g.squaredNorm());
    }
  }
}

TEST_CASE("loop errors") {
  const auto plant = ndpo_tms(1.0, 1.0, 1.0, 1.0);
  try {
    close_loop(plant, BeamsplitterController::from_reflectivity(1.0), 0);
    FAIL("expected IllPosedLoop");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ill_posed_loop);
  }
  CHECK_THROWS_AS(close_loop(plant, BeamsplitterController::from_reflectivity(0.1), 2), Error);

  TransferMatrix g{cplx(0.0), CMatrix::Identity(2, 2)};
  g.g(0, 0) = 1.0 / 0.5;  // K21 G_00 = 1 at rho = 0.5
  try {
    closed_loop_tf(g, controller_matrix(BeamsplitterController::from_reflectivity(0.5)), 0);
    FAIL("expected LoopSingular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::loop_singular);
  }
}

TEST_CASE("feedback moves the two-mode poles") {
  const auto plant = ndpo_tms(10.0, 1.0, 10.0, 10.0);
  const double margin = default_stability_margin(plant);
  CHECK(is_stable(closed_loop_poles(close_loop(plant, BeamsplitterController::from_reflectivity(0.04), 1)), margin));
  CHECK_FALSE(is_stable(closed_loop_poles(close_loop(plant, BeamsplitterController::from_reflectivity(0.06), 1)), margin));
  CHECK_FALSE(is_stable(closed_loop_poles(close_loop(plant, BeamsplitterController::from_reflectivity(-0.05), 1)), margin));
}
