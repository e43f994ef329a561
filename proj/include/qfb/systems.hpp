#pragma once

// Concrete parametric-oscillator networks built from two-mode-squeezing
// interaction graphs.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qfb/lqs.hpp"

namespace qfb {

/// One pumped two-mode-squeezing term lambda (a_a^dag a_b^dag - h.c.), with the
/// pump amplitude already folded into `strength`.
struct Coupling {
  std::size_t a = 0;
  std::size_t b = 0;
  double strength = 0.0;
};

struct InteractionGraph {
  std::vector<Coupling> edges;
  std::vector<double> damping;   // kappa_j > 0
  std::vector<double> detuning;  // Delta_j, rotating frame
  // Pump frequencies only fix the rotating frame; kept for provenance of a
  // configuration and never read by the model.
  std::vector<double> pump_frequencies;

  std::size_t modes() const noexcept { return damping.size(); }
};

/// Parity is a 2-coloring of the graph. Components are colored independently
/// and the lowest-indexed mode of each component gets +1.
/// Throws Error(non_bipartite_graph) on an odd cycle and
/// Error(invalid_argument) on self-loops, duplicates or bad indices.
LinearQuantumSystem build_from_graph(const InteractionGraph& graph);

/// The two-mode amplifier in the basis (b_1, b_2^dag).
LinearQuantumSystem ndpo_tms(double lambda, double kappa, double detuning1, double detuning2);

enum class Topology { tms, linear4, tshape4, square4 };

std::string_view name(Topology t) noexcept;
std::optional<Topology> parse_topology(std::string_view text) noexcept;
std::size_t mode_count(Topology t) noexcept;

/// Edges in coupling-label order (lambda_1, lambda_2, ...), zero-based.
///   tms     {1-2}
///   linear4 {1-2, 1-4, 2-3}
///   tshape4 {1-2, 1-3, 1-4}
///   square4 {1-2, 2-3, 1-4, 3-4}
std::vector<std::pair<std::size_t, std::size_t>> topology_edges(Topology t);

/// Delta / lambda that places every pole on Re s = -kappa/2:
/// 1, sqrt((3 + sqrt 5) / 2), sqrt 3 and 2.
double detuning_ratio(Topology t) noexcept;

/// Uniform parameters plus optional per-edge / per-mode overrides.
struct TopologyParams {
  double lambda = 0.0;
  double kappa = 1.0;
  /// nullopt applies the topology's detuning rule to `lambda`.
  std::optional<double> detuning;
  std::vector<double> edge_lambda;    // empty or one entry per edge
  std::vector<double> mode_kappa;     // empty or one entry per mode
  std::vector<double> mode_detuning;  // empty or one entry per mode
};

InteractionGraph topology_graph(Topology t, const TopologyParams& params);
LinearQuantumSystem build_topology(Topology t, const TopologyParams& params);

LinearQuantumSystem cluster_linear(double lambda, double kappa);
LinearQuantumSystem cluster_tshape(double lambda, double kappa);
LinearQuantumSystem cluster_square(double lambda, double kappa);

}  // namespace qfb
