#include "qfb/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qfb/csv.hpp"

namespace qfb {
namespace {

using csv::number;

std::string feedback_label(const ScenarioConfig& sc) {
  if (!sc.feedback) return "none";
  return "mode-" + std::to_string(sc.feedback->mode + 1);
}

void add_poles(csv::Table& t, const std::string& loop, const std::vector<cplx>& p, bool stable) {
  for (const auto& z : p) t.add_row({loop, number(z.real()), number(z.imag()), stable ? "true" : "false"});
}

ScenarioConfig without_feedback(ScenarioConfig sc) {
  sc.feedback.reset();
  return sc;
}

}  // namespace

CommandOutput cmd_poles(const RunConfig& rc) {
  const ScenarioConfig& sc = rc.scenario;
  const auto plant = scenario_plant(sc, 0.0, 0.0);
  const double margin = default_stability_margin(plant);

  csv::Table t({"loop", "re", "im", "stable"});
  const auto open = poles(plant);
  const bool open_ok = is_stable(open, margin);
  add_poles(t, "open", open, open_ok);

  bool verdict = open_ok;
  std::ostringstream notes;
  notes << "open loop: " << (open_ok ? "stable" : "unstable") << "\n";
  if (sc.feedback) {
    const auto c = BeamsplitterController::from_reflectivity(sc.feedback->rho);
    const auto closed = closed_loop_poles(close_loop(plant, c, sc.feedback->mode));
    verdict = is_stable(closed, margin);
    add_poles(t, "closed", closed, verdict);
    notes << "closed loop (" << feedback_label(sc) << ", rho = " << sc.feedback->rho
          << "): " << (verdict ? "stable" : "unstable") << "\n";
  }
  return {verdict ? kExitOk : kExitUnstable, t.str(), std::nullopt, notes.str()};
}

CommandOutput cmd_entropy(const RunConfig& rc) {
  const ScenarioConfig& sc = rc.scenario;
  if (!scenario_stable(sc, 0.0, 0.0)) {
    return {kExitUnstable, "", std::nullopt, "nominal system is unstable\n"};
  }
  const std::size_t n = mode_count(sc.topology);
  std::vector<std::string> header{"omega"};
  for (std::size_t j = 1; j <= n; ++j) header.push_back("S_" + std::to_string(j));
  csv::Table t(header);

  const auto rows = entropy_table(sc, 0.0, 0.0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::vector<std::string> cells{number(sc.omegas[k])};
    for (double s : rows[k]) cells.push_back(number(s));
    t.add_row(std::move(cells));
  }
  return {kExitOk, t.str(), std::nullopt, ""};
}

CommandOutput cmd_sensitivity(const RunConfig& rc) {
  const ScenarioConfig& sc = rc.scenario;
  csv::Table t({"topology", "feedback", "dS_dlambda"});
  const std::string topo(name(sc.topology));

  std::vector<ScenarioConfig> cases{without_feedback(sc)};
  if (sc.feedback) cases.push_back(sc);
  for (const auto& c : cases) {
    t.add_row({topo, feedback_label(c), number(sensitivity(c, rc.sensitivity_omega, rc.sensitivity_step))});
  }
  return {kExitOk, t.str(), std::nullopt, ""};
}

CommandOutput cmd_sweep(const RunConfig& rc) {
  const auto result = fluctuation_sweep(rc.scenario, rc.sweep);

  csv::Table samples({"sample_id", "delta1", "delta2", "omega", "S"});
  for (const auto& s : result.samples) {
    if (!s.stable) continue;
    for (std::size_t k = 0; k < result.omegas.size(); ++k) {
      samples.add_row({std::to_string(s.id), number(s.delta1), number(s.delta2),
                       number(result.omegas[k]), number(s.entropy[k])});
    }
  }
  csv::Table summary({"omega", "spread"});
  for (std::size_t k = 0; k < result.omegas.size(); ++k) {
    summary.add_row({number(result.omegas[k]), number(result.spread[k])});
  }

  std::ostringstream notes;
  notes << result.samples.size() << " samples, " << result.unstable_count
        << " unstable (excluded from spread)\n";
  return {kExitOk, samples.str(), summary.str(), notes.str()};
}

CommandOutput cmd_compare(const RunConfig& rc) {
  nlohmann::json doc_b = rc.document;
  for (const auto& [key, value] : rc.compare_set.items()) apply_override(doc_b, key, value);
  doc_b.erase("compare");
  const RunConfig rb = parse_run_config(doc_b);

  const auto report = compare_fixed_entropy(rc.scenario, rb.scenario, rc.sweep, rc.compare_band);
  csv::Table t({"omega", "nominal_a", "spread_a", "nominal_b", "spread_b"});
  for (const auto& r : report.rows) {
    t.add_row({number(r.omega), number(r.nominal_a), number(r.spread_a), number(r.nominal_b),
               number(r.spread_b)});
  }

  std::ostringstream notes;
  const auto& z = report.at_zero;
  notes << "omega = 0: S_a = " << z.nominal_a << " (spread " << z.spread_a << "), S_b = "
        << z.nominal_b << " (spread " << z.spread_b << ")\n"
        << "relative gap " << report.relative_gap << (report.within_band ? " within" : " outside")
        << " band " << rc.compare_band << "; b is "
        << (report.b_more_robust ? "more" : "not more") << " robust\n";
  return {kExitOk, t.str(), std::nullopt, notes.str()};
}

std::string summary_path(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "_summary.csv";
  }
  return path.substr(0, dot) + "_summary" + path.substr(dot);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherent-feedback entanglement analysis for parametric oscillator networks"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--set", overrides, "dotted-path override, key=value (repeatable)");
  app.add_option("--out", out_path, "output CSV path (default: output.path or stdout)");

  const std::vector<std::pair<std::string, std::string>> subcommands{
      {"poles", "open- and closed-loop poles with a stability verdict"},
      {"entropy", "entanglement entropy spectrum of every mode"},
      {"sensitivity", "dS/dlambda with and without feedback"},
      {"sweep", "deterministic (lambda, kappa) fluctuation sweep"},
      {"compare", "compare two scenarios on the same fluctuation grid"},
  };
  for (const auto& [cmd, help] : subcommands) app.add_subcommand(cmd, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  CommandOutput result;
  std::string target;
  try {
    nlohmann::json doc = config_path.empty() ? nlohmann::json::object()
                                             : load_config_document(config_path);
    for (const auto& o : overrides) apply_override(doc, o);
    RunConfig rc = parse_run_config(doc);

    if (const char* env = std::getenv("QFB_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 0) {
        throw Error(ErrorCode::config, "QFB_THREADS must be a non-negative integer");
      }
      rc.sweep.threads = static_cast<std::size_t>(v);
    }
    target = !out_path.empty() ? out_path : rc.output_path.value_or("");

    if (command == "poles") result = cmd_poles(rc);
    else if (command == "entropy") result = cmd_entropy(rc);
    else if (command == "sensitivity") result = cmd_sensitivity(rc);
    else if (command == "sweep") result = cmd_sweep(rc);
    else result = cmd_compare(rc);
  } catch (const Error& e) {
    err << "qfb " << command << ": " << e.what() << "\n";
    if (e.code() == ErrorCode::unstable_perturbation) return kExitUnstable;
    return kExitConfig;
  }

  err << result.notes;
  if (target.empty()) {
    out << result.csv;
    return result.exit_code;
  }
  auto write = [&](const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) {
      err << "qfb " << command << ": cannot write '" << path << "'\n";
      return false;
    }
    return true;
  };
  if (!write(target, result.csv)) return kExitConfig;
  if (result.summary_csv && !write(summary_path(target), *result.summary_csv)) return kExitConfig;
  return result.exit_code;
}

}  // namespace qfb
