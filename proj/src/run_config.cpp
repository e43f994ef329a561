#include "qfb/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace qfb {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::config, msg); }

void only_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) fail("'" + where + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail("unknown key '" + where + "." + key + "'");
  }
}

json section(const json& doc, const std::string& name) {
  if (!doc.contains(name)) return json::object();
  const json& s = doc.at(name);
  if (!s.is_object()) fail("'" + name + "' must be an object");
  return s;
}

double number(const json& obj, const std::string& where, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail("'" + where + "." + key + "' must be a number");
  return v.get<double>();
}

std::size_t count(const json& obj, const std::string& where, const std::string& key,
                  std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail("'" + where + "." + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> numbers(const json& obj, const std::string& where, const std::string& key,
                            double unit) {
  if (!obj.contains(key)) return {};
  const json& v = obj.at(key);
  if (!v.is_array()) fail("'" + where + "." + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail("'" + where + "." + key + "' must be an array of numbers");
    out.push_back(x.get<double>() * unit);
  }
  return out;
}

std::size_t mode_index(const json& v, const std::string& where, std::size_t modes) {
  if (!v.is_number_integer()) fail("'" + where + "' must be an integer mode index");
  const auto j = v.get<long long>();
  if (j < 1 || static_cast<std::size_t>(j) > modes) {
    fail("'" + where + "' must be in 1.." + std::to_string(modes));
  }
  return static_cast<std::size_t>(j - 1);
}

}  // namespace

json load_config_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config '" + path.string() + "'");
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    fail("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void apply_override(json& doc, std::string_view dotted_key, json value) {
  if (dotted_key.empty()) fail("empty override key");
  if (!doc.is_object()) doc = json::object();
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted_key.find('.', start);
    const std::string key(dotted_key.substr(start, dot - start));
    if (key.empty()) fail("malformed override key '" + std::string(dotted_key) + "'");
    if (dot == std::string_view::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    json& child = (*node)[key];
    if (!child.is_object()) child = json::object();
    node = &child;
    start = dot + 1;
  }
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) fail("override '" + std::string(assignment) + "' lacks '='");
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;
  apply_override(doc, assignment.substr(0, eq), std::move(value));
}

RunConfig parse_run_config(const json& doc) {
  only_keys(doc, "<root>", {"system", "feedback", "sweep", "freq", "sensitivity", "compare",
                            "output"});
  RunConfig rc;
  rc.document = doc;
  ScenarioConfig& sc = rc.scenario;

  const json sys = section(doc, "system");
  only_keys(sys, "system",
            {"topology", "lambda_over_kappa", "kappa", "detuning", "reference_mode", "overrides"});
  if (sys.contains("topology")) {
    if (!sys.at("topology").is_string()) fail("'system.topology' must be a string");
    const auto t = parse_topology(sys.at("topology").get<std::string>());
    if (!t) fail("'system.topology' must be one of tms | linear4 | tshape4 | square4");
    sc.topology = *t;
  }
  const std::size_t n = mode_count(sc.topology);
  sc.kappa0 = number(sys, "system", "kappa", 1.0);
  if (!(sc.kappa0 > 0.0)) fail("'system.kappa' must be > 0");
  const double unit = sc.kappa0;
  sc.lambda0 = number(sys, "system", "lambda_over_kappa", 10.0) * unit;
  if (!(sc.lambda0 >= 0.0)) fail("'system.lambda_over_kappa' must be >= 0");
  if (sys.contains("detuning")) {
    const json& d = sys.at("detuning");
    if (d.is_number()) {
      sc.detuning = d.get<double>() * unit;
    } else if (!(d.is_string() && d.get<std::string>() == "rule")) {
      fail("'system.detuning' must be \"rule\" or a number");
    }
  }
  sc.reference_mode =
      sys.contains("reference_mode") ? mode_index(sys.at("reference_mode"), "system.reference_mode", n) : 0;
  if (sys.contains("overrides")) {
    const json& o = sys.at("overrides");
    only_keys(o, "system.overrides", {"lambda", "kappa", "detuning"});
    sc.edge_lambda = numbers(o, "system.overrides", "lambda", unit);
    sc.mode_kappa = numbers(o, "system.overrides", "kappa", unit);
    sc.mode_detuning = numbers(o, "system.overrides", "detuning", unit);
    const auto edges = topology_edges(sc.topology).size();
    if (!sc.edge_lambda.empty() && sc.edge_lambda.size() != edges) {
      fail("'system.overrides.lambda' needs " + std::to_string(edges) + " values");
    }
    if (!sc.mode_kappa.empty() && sc.mode_kappa.size() != n) {
      fail("'system.overrides.kappa' needs " + std::to_string(n) + " values");
    }
    if (!sc.mode_detuning.empty() && sc.mode_detuning.size() != n) {
      fail("'system.overrides.detuning' needs " + std::to_string(n) + " values");
    }
    for (double k : sc.mode_kappa) {
      if (!(k > 0.0)) fail("'system.overrides.kappa' entries must be > 0");
    }
  }

  const json fb = section(doc, "feedback");
  only_keys(fb, "feedback", {"mode", "rho"});
  const bool fb_off = !fb.contains("mode") ||
                      (fb.at("mode").is_string() && fb.at("mode").get<std::string>() == "none");
  if (!fb_off) {
    FeedbackSpec spec;
    spec.mode = mode_index(fb.at("mode"), "feedback.mode", n);
    if (!fb.contains("rho")) fail("'feedback.rho' is required when feedback.mode is set");
    spec.rho = number(fb, "feedback", "rho", 0.0);
    if (!(std::abs(spec.rho) < 1.0)) fail("'feedback.rho' must satisfy |rho| < 1");
    sc.feedback = spec;
  }

  const json sw = section(doc, "sweep");
  only_keys(sw, "sweep", {"delta_range", "samples", "pairing"});
  rc.sweep.delta_range = number(sw, "sweep", "delta_range", 0.1);
  if (!(rc.sweep.delta_range >= 0.0 && rc.sweep.delta_range < 1.0)) {
    fail("'sweep.delta_range' must be in [0, 1)");
  }
  rc.sweep.samples = count(sw, "sweep", "samples", 90);
  if (rc.sweep.samples == 0) fail("'sweep.samples' must be >= 1");
  if (sw.contains("pairing")) {
    const json& p = sw.at("pairing");
    if (p == "grid") {
      rc.sweep.pairing = Pairing::grid;
    } else if (p == "diagonal") {
      rc.sweep.pairing = Pairing::diagonal;
    } else {
      fail("'sweep.pairing' must be \"grid\" or \"diagonal\"");
    }
  }

  const json fr = section(doc, "freq");
  only_keys(fr, "freq", {"min", "max", "points"});
  const double fmin = number(fr, "freq", "min", 0.0);
  const double fmax = number(fr, "freq", "max", 5.0);
  const std::size_t points = count(fr, "freq", "points", 200);
  if (points == 0) fail("'freq.points' must be >= 1");
  if (!(fmax >= fmin)) fail("'freq.max' must be >= 'freq.min'");
  sc.omegas = linspace(fmin * unit, fmax * unit, points);
  if (points == 1) sc.omegas = {fmin * unit};

  const json se = section(doc, "sensitivity");
  only_keys(se, "sensitivity", {"omega", "step"});
  rc.sensitivity_omega = number(se, "sensitivity", "omega", 0.0) * unit;
  rc.sensitivity_step = number(se, "sensitivity", "step", 1e-5);
  if (!(rc.sensitivity_step > 0.0 && rc.sensitivity_step < 1.0)) {
    fail("'sensitivity.step' must be in (0, 1)");
  }

  const json cmp = section(doc, "compare");
  only_keys(cmp, "compare", {"set", "band"});
  if (cmp.contains("set")) {
    if (!cmp.at("set").is_object()) fail("'compare.set' must be an object of dotted keys");
    rc.compare_set = cmp.at("set");
  }
  rc.compare_band = number(cmp, "compare", "band", 0.15);
  if (!(rc.compare_band >= 0.0)) fail("'compare.band' must be >= 0");

  const json out = section(doc, "output");
  only_keys(out, "output", {"path", "format"});
  if (out.contains("path")) {
    if (!out.at("path").is_string()) fail("'output.path' must be a string");
    rc.output_path = out.at("path").get<std::string>();
  }
  if (out.contains("format") && out.at("format") != "csv") fail("'output.format' must be \"csv\"");

  try {
    sc.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  return rc;
}

}  // namespace qfb
