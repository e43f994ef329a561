#pragma once

// Robustness experiments: entropy spectra, sensitivity to the pump coupling,
// and deterministic (lambda, kappa) fluctuation sweeps with and without
// mode-j coherent feedback.

#include <cstddef>
#include <optional>
#include <vector>

#include "qfb/feedback.hpp"
#include "qfb/gaussian.hpp"
#include "qfb/systems.hpp"

namespace qfb {

struct FeedbackSpec {
  std::size_t mode = 0;  // zero-based
  double rho = 0.0;
};

/// A nominal device plus the experiment around it. Perturbations scale every
/// coupling by (1 + delta1) and every damping rate by (1 + delta2). Unless a
/// detuning is pinned, Delta follows the topology rule at the perturbed lambda.
struct ScenarioConfig {
  Topology topology = Topology::tms;
  double lambda0 = 10.0;
  double kappa0 = 1.0;
  std::optional<double> detuning;
  std::vector<double> edge_lambda;    // nominal per-edge overrides
  std::vector<double> mode_kappa;     // nominal per-mode overrides
  std::vector<double> mode_detuning;  // pinned per-mode detunings
  std::optional<FeedbackSpec> feedback;
  std::vector<double> omegas;  // absolute frequencies
  std::size_t reference_mode = 0;

  void validate() const;
};

/// 200 points, omega / kappa0 in [0, 5].
std::vector<double> default_frequency_grid(double kappa0);
std::vector<double> linspace(double lo, double hi, std::size_t points);

LinearQuantumSystem scenario_plant(const ScenarioConfig& cfg, double delta1, double delta2);

/// Open-loop poles, or closed-loop poles when feedback is configured.
std::vector<cplx> scenario_poles(const ScenarioConfig& cfg, double delta1, double delta2);
bool scenario_stable(const ScenarioConfig& cfg, double delta1, double delta2);

/// Transfer matrix at s = i omega, closed with the frequency-domain formulas
/// when feedback is configured.
TransferMatrix scenario_transfer(const ScenarioConfig& cfg, double delta1, double delta2,
                                 double omega);

/// S_j for every mode of the output state described by `g`.
std::vector<double> mode_entropies(const TransferMatrix& g, const ModeParity& parity);

struct CurvePoint {
  double omega;
  double entropy;
};

/// Reference-mode entropy at every grid frequency.
/// Throws Error(unstable_perturbation) if the perturbed system is unstable.
std::vector<CurvePoint> entropy_curve(const ScenarioConfig& cfg, double delta1, double delta2);

/// Per-frequency rows of S_1..S_n.
std::vector<std::vector<double>> entropy_table(const ScenarioConfig& cfg, double delta1,
                                               double delta2);

/// Central difference of the reference-mode entropy in lambda:
/// [S(lambda0 (1 + h)) - S(lambda0 (1 - h))] / (2 h lambda0).
double sensitivity(const ScenarioConfig& cfg, double omega, double step = 1e-5);

enum class Pairing { grid, diagonal };

struct SweepSpec {
  double delta_range = 0.1;
  std::size_t samples = 90;
  Pairing pairing = Pairing::grid;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

struct SweepPoint {
  double delta1;
  double delta2;
};

/// grid: delta1 over r values and delta2 over c values, r * c = samples with
/// r the largest divisor <= sqrt(samples) (90 -> 9 x 10), delta1 outer.
/// diagonal: delta1 = delta2 over `samples` values.
std::vector<SweepPoint> sweep_points(const SweepSpec& spec);

struct SweepSample {
  std::size_t id;
  double delta1;
  double delta2;
  bool stable;
  std::vector<double> entropy;  // per omega; empty when unstable
};

struct SweepResult {
  std::vector<double> omegas;
  std::vector<SweepSample> samples;
  std::vector<double> spread;  // max - min over stable samples, per omega
  std::size_t unstable_count = 0;
};

/// Samples are evaluated in parallel and merged by grid index, so the result
/// does not depend on the thread count.
SweepResult fluctuation_sweep(const ScenarioConfig& cfg, const SweepSpec& spec);

struct ComparisonRow {
  double omega;
  double nominal_a;
  double spread_a;
  double nominal_b;
  double spread_b;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;  // on cfg_a's frequency grid
  ComparisonRow at_zero;
  double relative_gap;  // |S_b(0) - S_a(0)| / S_a(0)
  bool within_band;
  bool b_more_robust;  // spread_b(0) < spread_a(0)
  std::size_t unstable_a;
  std::size_t unstable_b;
};

/// Both scenarios are swept over the same delta grid and cfg_a's frequencies.
ComparisonReport compare_fixed_entropy(const ScenarioConfig& cfg_a, const ScenarioConfig& cfg_b,
                                       const SweepSpec& spec, double band = 0.15);

}  // namespace qfb
