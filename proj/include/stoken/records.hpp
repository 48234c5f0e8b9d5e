#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "stoken/estimation.hpp"
#include "stoken/theta.hpp"

namespace stoken {

// One line: `kind key=value key=value ...`; '#' starts a comment.
struct FlatRecord {
  std::string kind;
  std::map<std::string, std::string> fields;
  int line = 0;

  bool has(const std::string& key) const { return fields.count(key) != 0; }
  std::int64_t count(const std::string& key) const;  // nonnegative integer
  double real(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;  // comma separated
  std::string text(const std::string& key) const;
};

// Throws ConfigError("<source>:<line>: ...").
std::vector<FlatRecord> parse_flat(std::istream& in, const std::string& source);
std::vector<FlatRecord> parse_flat_file(const std::string& path);

struct EstimationInputs {
  CountRecord counts;
  DarkRecord dark;
  CoincidenceRecord coincidence;
};

EstimationInputs estimation_inputs_from(const std::vector<FlatRecord>& records);

struct OpticsInputs {
  std::array<double, 4> alphas{};  // degrees, order 0, 1, +, -
  ContrastStats hwp_01;
  ContrastStats hwp_pm;
  ContrastStats pbs;
  double delta_rm = 0.1;
  double p_alpha = 0.027;
  int n_alpha = 1000;
};

// Per-state contrast series, when present, replace the listed alpha maxima.
OpticsInputs optics_inputs_from(const std::vector<FlatRecord>& records);

}  // namespace stoken
