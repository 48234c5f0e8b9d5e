#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stoken/adversary.hpp"
#include "stoken/bounds.hpp"
#include "stoken/measurement.hpp"
#include "stoken/netsim.hpp"
#include "stoken/source_model.hpp"

namespace stoken {

struct SchemeSection {
  SchemeParams params;  // bias, theta and P_noqub fields are copied from the source section
  ConfidenceParams confidence;
  std::optional<double> p_bound;  // pinned value skips the optimizer
  double p_bound_margin = 1e-4;   // added to an optimized P_bound
  std::optional<int> multi_node_m;
};

struct SimulationSection {
  std::size_t trials = 20;
  int b = -1;  // presentation location; -1 draws it per trial from the seeded stream
};

struct EstimationSection {
  std::string counts_file;  // resolved against the config directory
  std::string optics_file;
};

struct AdversarySection {
  std::size_t n_pulses = 200;
  std::uint64_t trials = 10000;
  std::vector<double> gamma_err{0.094};
  std::vector<ForgingStrategy> strategies{ForgingStrategy{}};
  bool ideal_source = true;  // ignore the source section's imperfections
};

// Sections absent from the file stay disengaged; commands that need them raise ConfigError.
struct RunConfig {
  std::uint64_t seed = 1;
  std::optional<SourceParams> source;
  std::optional<MeasurementPolicy> measurement;
  std::optional<SchemeSection> scheme;
  std::optional<TimingTopology> topology;
  std::optional<EstimationSection> estimation_inputs;
  std::optional<AdversarySection> adversary;
  SimulationSection simulation;
  std::string output_format = "json";
  std::string output_dir;
};

// Unknown keys, wrong types and invariant violations raise ConfigError.
RunConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

}  // namespace stoken
