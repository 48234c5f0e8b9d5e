#include "stoken/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stoken/errors.hpp"

namespace stoken {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& section, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError("section '" + section + "' must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + section + "." + it.key() + "'");
  }
}

template <class T>
T get(const json& j, const std::string& section, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + section + "." + key + "' has the wrong type");
  }
}

template <class T>
T require(const json& j, const std::string& section, const char* key) {
  if (!j.contains(key)) throw ConfigError("missing key '" + section + "." + key + "'");
  return get<T>(j, section, key, T{});
}

void in_unit(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(what + " must lie in [0,1]");
}

constexpr double kDeg = M_PI / 180.0;

SourceParams parse_source(const json& j) {
  only_keys(j, "source",
            {"beta_pb", "beta_ps", "sign_pb", "sign_ps", "theta_deg", "p_theta", "p_noqub", "error_rates"});
  SourceParams s;
  s.beta_pb = get(j, "source", "beta_pb", 0.0);
  s.beta_ps = get(j, "source", "beta_ps", 0.0);
  s.sign_pb = get(j, "source", "sign_pb", 1);
  s.sign_ps = get(j, "source", "sign_ps", 1);
  s.theta = get(j, "source", "theta_deg", 0.0) * kDeg;
  s.p_theta = get(j, "source", "p_theta", 0.0);
  s.p_noqub = get(j, "source", "p_noqub", 0.0);
  const auto e = get(j, "source", "error_rates", std::vector<double>(4, 0.0));
  if (e.size() != 4) throw ConfigError("source.error_rates needs 4 entries indexed 2t+u");
  for (int i = 0; i < 4; ++i) s.error_rates[i] = e[i];
  s.validate();
  return s;
}

MeasurementPolicy parse_measurement(const json& j) {
  only_keys(j, "measurement", {"scheme", "beta_e", "sign_e", "report_losses", "gamma_det", "detector"});
  MeasurementPolicy m;
  const auto scheme = get<std::string>(j, "measurement", "scheme", "QT2");
  if (scheme == "QT1") {
    m.scheme = Scheme::QT1;
  } else if (scheme == "QT2") {
    m.scheme = Scheme::QT2;
  } else {
    throw ConfigError("measurement.scheme must be QT1 or QT2");
  }
  m.beta_e = get(j, "measurement", "beta_e", 0.0);
  m.sign_e = get(j, "measurement", "sign_e", 1);
  m.report_losses = get(j, "measurement", "report_losses", false);
  m.gamma_det = get(j, "measurement", "gamma_det", 1.0);
  if (j.contains("detector")) {
    const json& d = j.at("detector");
    if (d.is_string()) {
      const auto name = d.get<std::string>();
      if (name == "paper") {
        m.detector = paper_detector_model();
      } else if (name != "ideal") {
        throw ConfigError("measurement.detector must be 'paper', 'ideal' or an object");
      }
    } else {
      only_keys(d, "measurement.detector", {"p_no_click", "p_double_click"});
      m.detector.p_no_click = get(d, "measurement.detector", "p_no_click", 0.0);
      m.detector.p_double_click = get(d, "measurement.detector", "p_double_click", 0.0);
    }
  }
  m.validate();
  return m;
}

SchemeSection parse_scheme(const json& j) {
  only_keys(j, "scheme",
            {"n_pulses", "n_reported", "gamma_err", "gamma_det", "nu_cor", "nu_unf", "p_det", "e_max",
             "beta_e", "p_bound", "p_bound_margin", "multi_node_m", "confidence"});
  SchemeSection s;
  SchemeParams& p = s.params;
  p.N = require<std::int64_t>(j, "scheme", "n_pulses");
  p.n = get(j, "scheme", "n_reported", p.N);
  p.gamma_err = require<double>(j, "scheme", "gamma_err");
  p.gamma_det = get(j, "scheme", "gamma_det", 1.0);
  p.nu_cor = require<double>(j, "scheme", "nu_cor");
  p.nu_unf = require<double>(j, "scheme", "nu_unf");
  p.p_det = get(j, "scheme", "p_det", 1.0);
  p.E = require<double>(j, "scheme", "e_max");
  p.beta_e = get(j, "scheme", "beta_e", 0.0);
  if (p.N < 1) throw ConfigError("scheme.n_pulses must be at least 1");
  if (p.n < 0 || p.n > p.N) throw ConfigError("scheme.n_reported must lie in [0, n_pulses]");
  in_unit(p.gamma_err, "scheme.gamma_err");
  in_unit(p.gamma_det, "scheme.gamma_det");
  in_unit(p.p_det, "scheme.p_det");
  in_unit(p.E, "scheme.e_max");
  if (j.contains("p_bound")) s.p_bound = get(j, "scheme", "p_bound", 0.0);
  s.p_bound_margin = get(j, "scheme", "p_bound_margin", s.p_bound_margin);
  if (s.p_bound_margin < 0.0) throw ConfigError("scheme.p_bound_margin must be nonnegative");
  if (j.contains("multi_node_m")) {
    s.multi_node_m = get(j, "scheme", "multi_node_m", 1);
    if (*s.multi_node_m < 1) throw ConfigError("scheme.multi_node_m must be at least 1");
  }
  if (j.contains("confidence")) {
    const json& c = j.at("confidence");
    only_keys(c, "scheme.confidence", {"p_wrong", "k_cor", "k_unf"});
    s.confidence.p_wrong = get(c, "scheme.confidence", "p_wrong", s.confidence.p_wrong);
    s.confidence.k_cor = get(c, "scheme.confidence", "k_cor", s.confidence.k_cor);
    s.confidence.k_unf = get(c, "scheme.confidence", "k_unf", s.confidence.k_unf);
    in_unit(s.confidence.p_wrong, "scheme.confidence.p_wrong");
    if (s.confidence.k_cor < 1 || s.confidence.k_unf < 1) throw ConfigError("confidence K values must be at least 1");
  }
  return s;
}

TimingTopology parse_topology(const json& j) {
  only_keys(j, "topology",
            {"l_fibre_m", "d_direct_m", "c_fibre_m_per_s", "c_vac_m_per_s", "dt_proc_ns", "t_bit_gap_ns",
             "window_ns"});
  TimingTopology t;
  t.l_fibre_m = require<double>(j, "topology", "l_fibre_m");
  t.d_direct_m = get(j, "topology", "d_direct_m", t.l_fibre_m);
  t.c_fibre = get(j, "topology", "c_fibre_m_per_s", t.c_fibre);
  t.c_vac = get(j, "topology", "c_vac_m_per_s", t.c_vac);
  t.dt_proc_s = get(j, "topology", "dt_proc_ns", 1500.0) * 1e-9;
  t.t_bit_gap_s = get(j, "topology", "t_bit_gap_ns", 0.0) * 1e-9;
  t.window_s = get(j, "topology", "window_ns", 0.0) * 1e-9;
  t.validate();
  return t;
}

ForgingStrategy parse_strategy(const json& j) {
  ForgingStrategy s;
  if (j.is_string()) {
    s.kind = strategy_from_name(j.get<std::string>());
  } else {
    only_keys(j, "adversary.strategies[]", {"kind", "basis"});
    s.kind = strategy_from_name(require<std::string>(j, "adversary.strategies[]", "kind"));
    s.basis = get(j, "adversary.strategies[]", "basis", 0);
  }
  s.validate();
  return s;
}

AdversarySection parse_adversary(const json& j) {
  only_keys(j, "adversary", {"n_pulses", "trials", "gamma_err", "strategies", "ideal_source"});
  AdversarySection a;
  a.n_pulses = get(j, "adversary", "n_pulses", a.n_pulses);
  if (j.contains("trials")) {
    const auto t = get<std::int64_t>(j, "adversary", "trials", 0);
    if (t < 1) throw ConfigError("at least one trial required");
    a.trials = static_cast<std::uint64_t>(t);
  }
  a.gamma_err = get(j, "adversary", "gamma_err", a.gamma_err);
  if (a.gamma_err.empty()) throw ConfigError("adversary.gamma_err must list at least one value");
  for (double g : a.gamma_err) in_unit(g, "adversary.gamma_err");
  if (j.contains("strategies")) {
    const json& s = j.at("strategies");
    if (!s.is_array() || s.empty()) throw ConfigError("adversary.strategies must be a nonempty array");
    a.strategies.clear();
    for (const auto& e : s) a.strategies.push_back(parse_strategy(e));
  }
  a.ideal_source = get(j, "adversary", "ideal_source", a.ideal_source);
  if (a.n_pulses < 1) throw ConfigError("adversary.n_pulses must be at least 1");
  return a;
}

std::string resolve(const std::string& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? p : (std::filesystem::path(base) / path).lexically_normal().string();
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j, "<root>",
            {"seed", "source", "measurement", "scheme", "topology", "estimation_inputs", "adversary",
             "simulation", "output"});
  RunConfig c;
  c.seed = get<std::uint64_t>(j, "<root>", "seed", c.seed);
  if (j.contains("source")) c.source = parse_source(j.at("source"));
  if (j.contains("measurement")) c.measurement = parse_measurement(j.at("measurement"));
  if (j.contains("scheme")) c.scheme = parse_scheme(j.at("scheme"));
  if (j.contains("topology")) c.topology = parse_topology(j.at("topology"));
  if (j.contains("estimation_inputs")) {
    const json& e = j.at("estimation_inputs");
    only_keys(e, "estimation_inputs", {"counts_file", "optics_file"});
    EstimationSection s;
    if (e.contains("counts_file")) s.counts_file = resolve(base_dir, require<std::string>(e, "estimation_inputs", "counts_file"));
    if (e.contains("optics_file")) s.optics_file = resolve(base_dir, require<std::string>(e, "estimation_inputs", "optics_file"));
    c.estimation_inputs = s;
  }
  if (j.contains("adversary")) c.adversary = parse_adversary(j.at("adversary"));
  if (j.contains("simulation")) {
    const json& s = j.at("simulation");
    only_keys(s, "simulation", {"trials", "b"});
    c.simulation.b = get(s, "simulation", "b", -1);
    if (c.simulation.b < -1 || c.simulation.b > 1) throw ConfigError("simulation.b must be 0, 1 or -1 (random)");
    const auto t = get<std::int64_t>(s, "simulation", "trials", 20);
    if (t < 1) throw ConfigError("simulation.trials must be at least 1");
    c.simulation.trials = static_cast<std::size_t>(t);
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    only_keys(o, "output", {"format", "dir"});
    c.output_format = get<std::string>(o, "output", "format", c.output_format);
    c.output_dir = get<std::string>(o, "output", "dir", "");
    if (c.output_format != "json" && c.output_format != "csv") throw ConfigError("output.format must be csv or json");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  try {
    return parse_config(ss.str(), dir.empty() ? "." : dir.string());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace stoken
