#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "qfb/systems.hpp"
#include "support.hpp"

using namespace qfb;
using qfb::testing::Rng;

namespace {

ErrorCode code_of(const InteractionGraph& g) {
  try {
    build_from_graph(g);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::config;
}

InteractionGraph uniform(std::size_t n, std::vector<Coupling> edges) {
  InteractionGraph g;
  g.edges = std::move(edges);
  g.damping.assign(n, 1.0);
  g.detuning.assign(n, 0.0);
  return g;
}

std::vector<double> real_parts(const std::vector<cplx>& p) {
  std::vector<double> r;
  for (const auto& z : p) r.push_back(z.real());
  return r;
}

}  // namespace

TEST_CASE("bipartite coloring gives the lowest index parity +1") {
  const auto sys = build_from_graph(uniform(4, {{0, 1, 0.1}, {0, 3, 0.1}, {1, 2, 0.1}}));
  CHECK(sys.parity() == ModeParity({1, -1, 1, -1}));

  const auto two = build_from_graph(uniform(4, {{0, 1, 0.1}, {2, 3, 0.1}}));
  CHECK(two.parity() == ModeParity({1, -1, 1, -1}));

  const auto lone = build_from_graph(uniform(3, {{1, 2, 0.1}}));
  CHECK(lone.parity() == ModeParity({1, 1, -1}));
}

TEST_CASE("graph errors") {
  CHECK(code_of(uniform(3, {{0, 1, 0.1}, {1, 2, 0.1}, {0, 2, 0.1}})) ==
        ErrorCode::non_bipartite_graph);
  CHECK(code_of(uniform(2, {{0, 0, 0.1}})) == ErrorCode::invalid_argument);
  CHECK(code_of(uniform(2, {{0, 1, 0.1}, {1, 0, 0.2}})) == ErrorCode::invalid_argument);
  CHECK(code_of(uniform(2, {{0, 2, 0.1}})) == ErrorCode::invalid_argument);
  CHECK(code_of(uniform(9, {})) == ErrorCode::invalid_argument);

  auto bad = uniform(2, {{0, 1, 0.1}});
  bad.damping[1] = 0.0;
  CHECK(code_of(bad) == ErrorCode::invalid_argument);
}

TEST_CASE("topology catalogue") {
  for (auto t : {Topology::tms, Topology::linear4, Topology::tshape4, Topology::square4}) {
    CHECK(parse_topology(name(t)) == t);
  }
  CHECK_FALSE(parse_topology("ring5").has_value());
  CHECK(mode_count(Topology::tms) == 2);
  CHECK(mode_count(Topology::square4) == 4);
  CHECK(detuning_ratio(Topology::linear4) == doctest::Approx(std::sqrt((3.0 + std::sqrt(5.0)) / 2.0)));
  CHECK(detuning_ratio(Topology::tshape4) == doctest::Approx(std::sqrt(3.0)));
  CHECK(detuning_ratio(Topology::square4) == 2.0);

  TopologyParams p;
  p.lambda = 1.0;
  p.edge_lambda = {1.0, 2.0};
  CHECK_THROWS_AS(build_topology(Topology::linear4, p), Error);
}

TEST_CASE("tms builder equals the explicit NDPO") {
  TopologyParams p;
  p.lambda = 2.0;
  p.kappa = 0.5;
  const auto a = build_topology(Topology::tms, p);
  const auto b = ndpo_tms(2.0, 0.5, 2.0, 2.0);
  CHECK(a.drift() == b.drift());
  CHECK(a.parity() == b.parity());
}

TEST_CASE("cluster builders sit on the stability boundary of the detuning rule") {
  // At the rule the poles coalesce into defective pairs, which dense
  // eigensolvers only resolve to about sqrt(machine epsilon).
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (const auto& sys : {cluster_linear(10.0 * kappa, kappa), cluster_tshape(10.0 * kappa, kappa),
                            cluster_square(10.0 * kappa, kappa)}) {
      for (double re : real_parts(poles(sys))) CHECK(re == doctest::Approx(-kappa / 2.0).epsilon(1e-6));
      CHECK(is_stable(sys));
    }
  }
}

TEST_CASE("cluster poles at generic detuning") {
  const double lambda = 1.3, kappa = 0.8;
  TopologyParams p;
  p.lambda = lambda;
  p.kappa = kappa;

  SUBCASE("square") {
    p.detuning = 1.1;  // 4 lambda^2 > Delta^2: two real branches
    auto re = real_parts(poles(build_topology(Topology::square4, p)));
    std::sort(re.begin(), re.end());
    const double r = std::sqrt(4.0 * lambda * lambda - 1.21);
    CHECK(re[0] == doctest::Approx(-kappa / 2 - r).epsilon(1e-12));
    CHECK(re[1] == doctest::Approx(-kappa / 2).epsilon(1e-12));
    CHECK(re[2] == doctest::Approx(-kappa / 2).epsilon(1e-12));
    CHECK(re[3] == doctest::Approx(-kappa / 2 + r).epsilon(1e-12));
  }
  SUBCASE("T-shape") {
    p.detuning = 2.5;  // Delta > sqrt(3) lambda: every real part is -kappa/2
    for (double re : real_parts(poles(build_topology(Topology::tshape4, p))))
      CHECK(re == doctest::Approx(-kappa / 2).epsilon(1e-12));
  }
}

TEST_CASE("relabelling modes permutes the transfer matrix") {
  Rng rng(21);
  // Path 0-1-2-3 with random rates. Two relabellings: one keeps mode 0 at
  // index 0 (same parities), one moves a parity -1 mode to index 0, which
  // conjugates the whole basis.
  InteractionGraph g;
  g.edges = {{0, 1, 0.2}, {1, 2, 0.3}, {2, 3, 0.25}};
  for (int j = 0; j < 4; ++j) {
    g.damping.push_back(rng.uniform(0.5, 1.5));
    g.detuning.push_back(rng.uniform(-1.0, 1.0));
  }
  const auto base = build_from_graph(g);

  for (const std::vector<std::size_t> perm : {std::vector<std::size_t>{0, 3, 2, 1},
                                              std::vector<std::size_t>{1, 0, 3, 2}}) {
    InteractionGraph h;
    h.damping.resize(4);
    h.detuning.resize(4);
    for (const auto& e : g.edges) h.edges.push_back({perm[e.a], perm[e.b], e.strength});
    for (std::size_t j = 0; j < 4; ++j) {
      h.damping[perm[j]] = g.damping[j];
      h.detuning[perm[j]] = g.detuning[j];
    }
    const auto moved = build_from_graph(h);
    const bool flipped = moved.parity()[perm[0]] != base.parity()[0];
    CHECK(flipped == (perm[0] == 1));

    for (double w : {0.0, 0.7, -2.3}) {
      const auto gm = transfer_matrix(moved, cplx(0.0, w)).g;
      const auto gb = transfer_matrix(base, cplx(0.0, flipped ? -w : w)).g;
      for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
          const cplx want = flipped ? std::conj(gb(i, j)) : gb(i, j);
          CHECK(std::abs(gm(perm[i], perm[j]) - want) < 1e-12);
        }
      }
    }
  }
}
