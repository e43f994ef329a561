#pragma once

// JSON run configuration for the command-line front end.
//
// Every rate (lambda, detuning, frequencies, overrides) is written in units of
// the nominal damping rate `system.kappa`. Mode indices are one-based here and
// converted to zero-based when the ScenarioConfig is built.
//
//   {
//     "system":   {"topology": "tms", "lambda_over_kappa": 10, "kappa": 1,
//                  "detuning": "rule", "reference_mode": 1,
//                  "overrides": {"lambda": [...], "kappa": [...], "detuning": [...]}},
//     "feedback": {"mode": 2, "rho": 0.04},            // or "mode": "none"
//     "sweep":    {"delta_range": 0.1, "samples": 90, "pairing": "grid"},
//     "freq":     {"min": 0, "max": 5, "points": 200},
//     "sensitivity": {"omega": 0, "step": 1e-5},
//     "compare":  {"set": {"system.lambda_over_kappa": 5}, "band": 0.15},
//     "output":   {"path": "out.csv", "format": "csv"}
//   }

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "qfb/analysis.hpp"

namespace qfb {

struct RunConfig {
  ScenarioConfig scenario;
  SweepSpec sweep;
  double sensitivity_omega = 0.0;  // absolute
  double sensitivity_step = 1e-5;
  nlohmann::json compare_set = nlohmann::json::object();
  double compare_band = 0.15;
  std::optional<std::string> output_path;
  nlohmann::json document;  // the validated source, overrides applied
};

/// Throws Error(config) when the file is unreadable or not JSON.
nlohmann::json load_config_document(const std::filesystem::path& path);

/// Applies "a.b.c=value". The value is parsed as JSON when possible and kept
/// as a string otherwise; intermediate objects are created on demand.
void apply_override(nlohmann::json& doc, std::string_view assignment);
void apply_override(nlohmann::json& doc, std::string_view dotted_key, nlohmann::json value);

/// Schema validation plus defaults. Unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json& doc);

}  // namespace qfb
