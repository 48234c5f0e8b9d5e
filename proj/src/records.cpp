#include "stoken/records.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "stoken/errors.hpp"

namespace stoken {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& s, int line, const std::string& key) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) fail(line, "field '" + key + "' is not a number: " + s);
  return v;
}

const FlatRecord& find_one(const std::vector<FlatRecord>& recs, const std::string& kind) {
  const FlatRecord* hit = nullptr;
  for (const auto& r : recs) {
    if (r.kind != kind) continue;
    if (hit) fail(r.line, "duplicate '" + kind + "' record");
    hit = &r;
  }
  if (!hit) throw ConfigError("missing '" + kind + "' record");
  return *hit;
}

const char* kStateNames[4] = {"0", "1", "+", "-"};

int state_index(const std::string& s, int line) {
  for (int i = 0; i < 4; ++i) {
    if (s == kStateNames[i]) return i;
  }
  fail(line, "state must be one of 0, 1, +, -");
}

ContrastStats contrast_from(const FlatRecord& r) {
  ContrastStats c;
  c.mean_c = r.real("mean");
  c.sigma_c = r.real("sigma");
  c.n_samples = r.has("samples") ? static_cast<int>(r.count("samples")) : 0;
  if (!(c.mean_c > 0.0) || c.sigma_c < 0.0) fail(r.line, "contrast needs mean > 0 and sigma >= 0");
  return c;
}

}  // namespace

std::string FlatRecord::text(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) fail(line, "'" + kind + "' record lacks field '" + key + "'");
  return it->second;
}

std::int64_t FlatRecord::count(const std::string& key) const {
  const std::string s = text(key);
  std::int64_t v = 0;
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || v < 0) {
    fail(line, "field '" + key + "' must be a nonnegative integer: " + s);
  }
  return v;
}

double FlatRecord::real(const std::string& key) const { return parse_real(text(key), line, key); }

std::vector<double> FlatRecord::reals(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(text(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item, line, key));
  if (out.empty()) fail(line, "field '" + key + "' is empty");
  return out;
}

std::vector<FlatRecord> parse_flat(std::istream& in, const std::string& source) {
  std::vector<FlatRecord> out;
  std::string raw;
  int line = 0;
  try {
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::stringstream ss(raw);
      std::string tok;
      if (!(ss >> tok)) continue;
      FlatRecord rec;
      rec.kind = tok;
      rec.line = line;
      while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size()) {
          fail(line, "expected key=value, got '" + tok + "'");
        }
        const std::string key = tok.substr(0, eq);
        if (!rec.fields.emplace(key, tok.substr(eq + 1)).second) fail(line, "duplicate field '" + key + "'");
      }
      out.push_back(std::move(rec));
    }
    if (out.empty()) throw ConfigError("no records found");
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return out;
}

std::vector<FlatRecord> parse_flat_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return parse_flat(in, path);
}

EstimationInputs estimation_inputs_from(const std::vector<FlatRecord>& records) {
  EstimationInputs in;
  const FlatRecord& c = find_one(records, "counts");
  in.counts.t_exp = c.real("t_exp_s");
  in.counts.f_sys = c.real("f_sys_hz");
  in.counts.n_b = c.count("n_b");
  in.counts.n_u0 = c.count("n_u0");
  in.counts.n_t0 = c.count("n_t0");
  const char* tu[4] = {"00", "01", "10", "11"};
  for (int i = 0; i < 4; ++i) {
    in.counts.n_tu[i] = c.count(std::string("n_tu_") + tu[i]);
    in.counts.n_err_tu[i] = c.count(std::string("n_err_tu_") + tu[i]);
  }
  in.counts.n0 = c.count("n0");
  in.counts.n1 = c.count("n1");
  in.counts.n2 = c.count("n2");
  try {
    in.counts.validate();
  } catch (const ConfigError& e) {
    fail(c.line, e.what());
  }

  const FlatRecord& d = find_one(records, "dark");
  in.dark.t_d = d.real("t_d_s");
  in.dark.n_db = d.count("n_db");
  in.dark.n_da0 = d.count("n_da0");
  in.dark.n_da1 = d.count("n_da1");
  try {
    in.dark.validate();
  } catch (const ConfigError& e) {
    fail(d.line, e.what());
  }

  const FlatRecord& k = find_one(records, "coincidence");
  in.coincidence.n_a = k.count("n_a");
  in.coincidence.n_b = k.count("n_b");
  in.coincidence.n_c = k.count("n_c");
  try {
    in.coincidence.validate();
  } catch (const ConfigError& e) {
    fail(k.line, e.what());
  }
  return in;
}

OpticsInputs optics_inputs_from(const std::vector<FlatRecord>& records) {
  OpticsInputs o;
  const FlatRecord& a = find_one(records, "alphas");
  o.alphas = {a.real("a0_deg"), a.real("a1_deg"), a.real("aplus_deg"), a.real("aminus_deg")};
  for (const auto& r : records) {
    if (r.kind == "contrast") {
      const std::string name = r.text("name");
      if (name == "pbs") {
        o.pbs = contrast_from(r);
      } else if (name == "hwp01") {
        o.hwp_01 = contrast_from(r);
      } else if (name == "hwppm") {
        o.hwp_pm = contrast_from(r);
      } else {
        fail(r.line, "unknown contrast name '" + name + "'");
      }
    } else if (r.kind == "contrast_series") {
      o.alphas[state_index(r.text("state"), r.line)] = alpha_from_contrasts(r.reals("values"));
    } else if (r.kind == "rotation_mount") {
      o.delta_rm = r.real("delta_deg");
    } else if (r.kind == "p_alpha") {
      o.p_alpha = r.real("value");
      o.n_alpha = static_cast<int>(r.count("pulses"));
    } else if (r.kind != "alphas") {
      fail(r.line, "unknown record kind '" + r.kind + "'");
    }
  }
  if (o.pbs.mean_c == 0.0 || o.hwp_01.mean_c == 0.0 || o.hwp_pm.mean_c == 0.0) {
    throw ConfigError("optics file needs contrast records pbs, hwp01 and hwppm");
  }
  return o;
}

}  // namespace stoken
