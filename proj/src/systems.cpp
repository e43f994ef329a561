#include "qfb/systems.hpp"

#include <cmath>
#include <deque>
#include <set>
#include <string>

namespace qfb {
namespace {

constexpr std::size_t kMaxModes = 8;

void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(ErrorCode::invalid_argument, msg);
}

std::vector<int> two_coloring(std::size_t n, const std::vector<Coupling>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }

  std::vector<int> color(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    color[root] = 1;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (auto v : adj[u]) {
        if (color[v] == 0) {
          color[v] = -color[u];
          queue.push_back(v);
        } else if (color[v] == color[u]) {
          throw Error(ErrorCode::non_bipartite_graph,
                      "modes " + std::to_string(u + 1) + " and " + std::to_string(v + 1) +
                          " close an odd cycle");
        }
      }
    }
  }
  return color;
}

}  // namespace

LinearQuantumSystem build_from_graph(const InteractionGraph& graph) {
  const std::size_t n = graph.modes();
  require(n >= 1 && n <= kMaxModes, "mode count must be in 1..8");
  require(graph.detuning.size() == n, "detuning must have one entry per mode");

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : graph.edges) {
    require(e.a < n && e.b < n, "edge endpoint out of range");
    require(e.a != e.b, "self-loops are not two-mode-squeezing terms");
    require(std::isfinite(e.strength), "coupling strength must be finite");
    const auto key = std::minmax(e.a, e.b);
    require(seen.insert(key).second, "duplicate edge between modes " +
                                         std::to_string(key.first + 1) + " and " +
                                         std::to_string(key.second + 1));
  }

  const auto colors = two_coloring(n, graph.edges);

  const auto m = static_cast<Eigen::Index>(n);
  RMatrix coupling = RMatrix::Zero(m, m);
  for (const auto& e : graph.edges) {
    coupling(static_cast<Eigen::Index>(e.a), static_cast<Eigen::Index>(e.b)) = e.strength;
    coupling(static_cast<Eigen::Index>(e.b), static_cast<Eigen::Index>(e.a)) = e.strength;
  }
  const Eigen::Map<const Eigen::VectorXd> damping(graph.damping.data(), m);
  const Eigen::Map<const Eigen::VectorXd> detuning(graph.detuning.data(), m);
  return LinearQuantumSystem(ModeParity(colors), damping, detuning, coupling);
}

LinearQuantumSystem ndpo_tms(double lambda, double kappa, double detuning1, double detuning2) {
  require(lambda >= 0.0, "lambda must be >= 0");
  require(kappa > 0.0, "kappa must be > 0");
  InteractionGraph g;
  g.edges = {{0, 1, lambda}};
  g.damping = {kappa, kappa};
  g.detuning = {detuning1, detuning2};
  return build_from_graph(g);
}

std::string_view name(Topology t) noexcept {
  switch (t) {
    case Topology::tms: return "tms";
    case Topology::linear4: return "linear4";
    case Topology::tshape4: return "tshape4";
    case Topology::square4: return "square4";
  }
  return "?";
}

std::optional<Topology> parse_topology(std::string_view text) noexcept {
  for (auto t : {Topology::tms, Topology::linear4, Topology::tshape4, Topology::square4}) {
    if (name(t) == text) return t;
  }
  return std::nullopt;
}

std::size_t mode_count(Topology t) noexcept { return t == Topology::tms ? 2 : 4; }

std::vector<std::pair<std::size_t, std::size_t>> topology_edges(Topology t) {
  switch (t) {
    case Topology::tms: return {{0, 1}};
    case Topology::linear4: return {{0, 1}, {0, 3}, {1, 2}};
    case Topology::tshape4: return {{0, 1}, {0, 2}, {0, 3}};
    case Topology::square4: return {{0, 1}, {1, 2}, {0, 3}, {2, 3}};
  }
  return {};
}

double detuning_ratio(Topology t) noexcept {
  switch (t) {
    case Topology::tms: return 1.0;
    case Topology::linear4: return std::sqrt((3.0 + std::sqrt(5.0)) / 2.0);
    case Topology::tshape4: return std::sqrt(3.0);
    case Topology::square4: return 2.0;
  }
  return 0.0;
}

InteractionGraph topology_graph(Topology t, const TopologyParams& p) {
  require(p.lambda >= 0.0, "lambda must be >= 0");
  require(p.kappa > 0.0, "kappa must be > 0");

  const auto edges = topology_edges(t);
  const std::size_t n = mode_count(t);
  require(p.edge_lambda.empty() || p.edge_lambda.size() == edges.size(),
          "edge lambda overrides need one value per edge");
  require(p.mode_kappa.empty() || p.mode_kappa.size() == n,
          "kappa overrides need one value per mode");
  require(p.mode_detuning.empty() || p.mode_detuning.size() == n,
          "detuning overrides need one value per mode");

  InteractionGraph g;
  for (std::size_t l = 0; l < edges.size(); ++l) {
    const double strength = p.edge_lambda.empty() ? p.lambda : p.edge_lambda[l];
    g.edges.push_back({edges[l].first, edges[l].second, strength});
  }
  g.damping = p.mode_kappa.empty() ? std::vector<double>(n, p.kappa) : p.mode_kappa;
  if (!p.mode_detuning.empty()) {
    g.detuning = p.mode_detuning;
  } else {
    const double delta = p.detuning.value_or(detuning_ratio(t) * p.lambda);
    g.detuning.assign(n, delta);
  }
  return g;
}

LinearQuantumSystem build_topology(Topology t, const TopologyParams& params) {
  return build_from_graph(topology_graph(t, params));
}

LinearQuantumSystem cluster_linear(double lambda, double kappa) {
  TopologyParams p;
  p.lambda = lambda;
  p.kappa = kappa;
  return build_topology(Topology::linear4, p);
}

LinearQuantumSystem cluster_tshape(double lambda, double kappa) {
  TopologyParams p;
  p.lambda = lambda;
  p.kappa = kappa;
  return build_topology(Topology::tshape4, p);
}

LinearQuantumSystem cluster_square(double lambda, double kappa) {
  TopologyParams p;
  p.lambda = lambda;
  p.kappa = kappa;
  return build_topology(Topology::square4, p);
}

}  // namespace qfb
