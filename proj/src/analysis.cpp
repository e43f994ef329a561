#include "qfb/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

namespace qfb {
namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(ErrorCode::invalid_argument, msg);
}

std::vector<double> scaled(const std::vector<double>& v, double factor) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [&](double x) { return x * factor; });
  return out;
}

std::string describe(double d1, double d2) {
  return "(delta1 = " + std::to_string(d1) + ", delta2 = " + std::to_string(d2) + ")";
}

}  // namespace

void ScenarioConfig::validate() const {
  require(lambda0 >= 0.0 && std::isfinite(lambda0), "lambda0 must be >= 0");
  require(kappa0 > 0.0 && std::isfinite(kappa0), "kappa0 must be > 0");
  const std::size_t n = mode_count(topology);
  require(reference_mode < n, "reference mode out of range");
  if (feedback) {
    require(feedback->mode < n, "feedback mode out of range");
    require(std::abs(feedback->rho) <= 1.0, "feedback rho must satisfy |rho| <= 1");
  }
  require(!omegas.empty(), "frequency grid is empty");
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  require(points >= 1, "linspace needs at least one point");
  if (points == 1) return {0.5 * (lo + hi)};
  std::vector<double> out(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) out[k] = lo + step * static_cast<double>(k);
  out.back() = hi;
  return out;
}

std::vector<double> default_frequency_grid(double kappa0) {
  return linspace(0.0, 5.0 * kappa0, 200);
}

LinearQuantumSystem scenario_plant(const ScenarioConfig& cfg, double delta1, double delta2) {
  const double lambda = cfg.lambda0 * (1.0 + delta1);
  TopologyParams p;
  p.lambda = lambda;
  p.kappa = cfg.kappa0 * (1.0 + delta2);
  p.detuning = cfg.detuning;
  p.edge_lambda = scaled(cfg.edge_lambda, 1.0 + delta1);
  p.mode_kappa = scaled(cfg.mode_kappa, 1.0 + delta2);
  p.mode_detuning = cfg.mode_detuning;
  return build_topology(cfg.topology, p);
}

std::vector<cplx> scenario_poles(const ScenarioConfig& cfg, double delta1, double delta2) {
  const auto plant = scenario_plant(cfg, delta1, delta2);
  if (!cfg.feedback) return poles(plant);
  const auto c = BeamsplitterController::from_reflectivity(cfg.feedback->rho);
  return closed_loop_poles(close_loop(plant, c, cfg.feedback->mode));
}

bool scenario_stable(const ScenarioConfig& cfg, double delta1, double delta2) {
  const auto plant = scenario_plant(cfg, delta1, delta2);
  const double margin = default_stability_margin(plant);
  if (!cfg.feedback) return is_stable(poles(plant), margin);
  const auto c = BeamsplitterController::from_reflectivity(cfg.feedback->rho);
  return is_stable(closed_loop_poles(close_loop(plant, c, cfg.feedback->mode)), margin);
}

TransferMatrix scenario_transfer(const ScenarioConfig& cfg, double delta1, double delta2,
                                 double omega) {
  const auto plant = scenario_plant(cfg, delta1, delta2);
  auto g = transfer_matrix(plant, cplx(0.0, omega));
  if (!cfg.feedback) return g;
  const auto k = controller_matrix(BeamsplitterController::from_reflectivity(cfg.feedback->rho));
  return closed_loop_tf(g, k, cfg.feedback->mode);
}

std::vector<double> mode_entropies(const TransferMatrix& g, const ModeParity& parity) {
  const auto gamma = output_covariance(quadrature_transfer(g, parity));
  std::vector<double> out(gamma.modes());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = entanglement_entropy(gamma, j);
  return out;
}

namespace {

// Shared by the curve, table and sweep paths: builds the plant once per
// (delta1, delta2) and evaluates every grid frequency.
std::vector<std::vector<double>> evaluate(const ScenarioConfig& cfg, double delta1,
                                          double delta2, bool all_modes) {
  const auto plant = scenario_plant(cfg, delta1, delta2);
  const double margin = default_stability_margin(plant);

  std::optional<Matrix2c> k;
  if (cfg.feedback) {
    const auto c = BeamsplitterController::from_reflectivity(cfg.feedback->rho);
    if (!is_stable(closed_loop_poles(close_loop(plant, c, cfg.feedback->mode)), margin)) {
      throw Error(ErrorCode::unstable_perturbation, "closed loop unstable at " +
                                                        describe(delta1, delta2));
    }
    k = controller_matrix(c);
  } else if (!is_stable(poles(plant), margin)) {
    throw Error(ErrorCode::unstable_perturbation, "plant unstable at " + describe(delta1, delta2));
  }

  const auto realization = plant.realization();
  std::vector<std::vector<double>> rows;
  rows.reserve(cfg.omegas.size());
  for (double omega : cfg.omegas) {
    auto g = transfer_matrix(realization, cplx(0.0, omega));
    if (k) g = closed_loop_tf(g, *k, cfg.feedback->mode);
    const auto gamma = output_covariance(quadrature_transfer(g, plant.parity()));
    if (all_modes) {
      std::vector<double> row(gamma.modes());
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = entanglement_entropy(gamma, j);
      rows.push_back(std::move(row));
    } else {
      rows.push_back({entanglement_entropy(gamma, cfg.reference_mode)});
    }
  }
  return rows;
}

}  // namespace

std::vector<CurvePoint> entropy_curve(const ScenarioConfig& cfg, double delta1, double delta2) {
  cfg.validate();
  const auto rows = evaluate(cfg, delta1, delta2, false);
  std::vector<CurvePoint> out(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) out[k] = {cfg.omegas[k], rows[k][0]};
  return out;
}

std::vector<std::vector<double>> entropy_table(const ScenarioConfig& cfg, double delta1,
                                               double delta2) {
  cfg.validate();
  return evaluate(cfg, delta1, delta2, true);
}

double sensitivity(const ScenarioConfig& cfg, double omega, double step) {
  require(step > 0.0 && step < 1.0, "finite-difference step must be in (0, 1)");
  ScenarioConfig probe = cfg;
  probe.omegas = {omega};
  probe.validate();
  // S is even in lambda (b_2 -> -b_2 flips its sign), so the central
  // difference at lambda0 = 0 vanishes identically.
  if (cfg.lambda0 == 0.0) return 0.0;
  const double up = evaluate(probe, step, 0.0, false)[0][0];
  const double down = evaluate(probe, -step, 0.0, false)[0][0];
  return (up - down) / (2.0 * step * cfg.lambda0);
}

std::vector<SweepPoint> sweep_points(const SweepSpec& spec) {
  require(spec.samples >= 1, "sweep needs at least one sample");
  require(spec.delta_range >= 0.0 && spec.delta_range < 1.0, "delta range must be in [0, 1)");
  const double r = spec.delta_range;
  std::vector<SweepPoint> pts;
  pts.reserve(spec.samples);
  if (spec.pairing == Pairing::diagonal) {
    for (double d : linspace(-r, r, spec.samples)) pts.push_back({d, d});
    return pts;
  }
  std::size_t rows = 1;
  for (std::size_t d = 1; d * d <= spec.samples; ++d) {
    if (spec.samples % d == 0) rows = d;
  }
  const std::size_t cols = spec.samples / rows;
  const auto d1 = linspace(-r, r, rows);
  const auto d2 = linspace(-r, r, cols);
  for (double a : d1) {
    for (double b : d2) pts.push_back({a, b});
  }
  return pts;
}

SweepResult fluctuation_sweep(const ScenarioConfig& cfg, const SweepSpec& spec) {
  cfg.validate();
  const auto points = sweep_points(spec);

  SweepResult result;
  result.omegas = cfg.omegas;
  result.samples.resize(points.size());

  std::size_t workers = spec.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, points.size());

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr error;

  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      auto& sample = result.samples[i];
      sample = {i, points[i].delta1, points[i].delta2, true, {}};
      try {
        const auto rows = evaluate(cfg, points[i].delta1, points[i].delta2, false);
        sample.entropy.reserve(rows.size());
        for (const auto& row : rows) sample.entropy.push_back(row[0]);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::unstable_perturbation) {
          sample.stable = false;
          continue;
        }
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  const std::size_t m = cfg.omegas.size();
  std::vector<double> lo(m, std::numeric_limits<double>::infinity());
  std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
  for (const auto& s : result.samples) {
    if (!s.stable) {
      ++result.unstable_count;
      continue;
    }
    for (std::size_t k = 0; k < m; ++k) {
      lo[k] = std::min(lo[k], s.entropy[k]);
      hi[k] = std::max(hi[k], s.entropy[k]);
    }
  }
  result.spread.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    result.spread[k] = result.unstable_count == result.samples.size()
                           ? std::numeric_limits<double>::quiet_NaN()
                           : hi[k] - lo[k];
  }
  return result;
}

ComparisonReport compare_fixed_entropy(const ScenarioConfig& cfg_a, const ScenarioConfig& cfg_b,
                                       const SweepSpec& spec, double band) {
  require(band >= 0.0, "comparison band must be >= 0");
  ScenarioConfig b = cfg_b;
  b.omegas = cfg_a.omegas;

  const auto nominal_a = entropy_curve(cfg_a, 0.0, 0.0);
  const auto nominal_b = entropy_curve(b, 0.0, 0.0);
  const auto sweep_a = fluctuation_sweep(cfg_a, spec);
  const auto sweep_b = fluctuation_sweep(b, spec);

  ComparisonReport report{};
  for (std::size_t k = 0; k < cfg_a.omegas.size(); ++k) {
    report.rows.push_back({cfg_a.omegas[k], nominal_a[k].entropy, sweep_a.spread[k],
                           nominal_b[k].entropy, sweep_b.spread[k]});
  }

  ScenarioConfig a0 = cfg_a, b0 = b;
  a0.omegas = b0.omegas = {0.0};
  const auto za = fluctuation_sweep(a0, spec);
  const auto zb = fluctuation_sweep(b0, spec);
  report.at_zero = {0.0, entropy_curve(a0, 0.0, 0.0)[0].entropy, za.spread[0],
                    entropy_curve(b0, 0.0, 0.0)[0].entropy, zb.spread[0]};

  const double sa = report.at_zero.nominal_a, sb = report.at_zero.nominal_b;
  if (sa != 0.0) {
    report.relative_gap = std::abs(sb - sa) / std::abs(sa);
  } else {
    report.relative_gap = sb == sa ? 0.0 : std::numeric_limits<double>::infinity();
  }
  report.within_band = report.relative_gap <= band;
  report.b_more_robust = report.at_zero.spread_b < report.at_zero.spread_a;
  report.unstable_a = sweep_a.unstable_count;
  report.unstable_b = sweep_b.unstable_count;
  return report;
}

}  // namespace qfb
