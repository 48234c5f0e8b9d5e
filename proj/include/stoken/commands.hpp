#pragma once

#include <optional>
#include <string>

#include "stoken/config.hpp"
#include "stoken/report.hpp"

namespace stoken {

Report cmd_bounds(const RunConfig& config);
Report cmd_simulate(const RunConfig& config);
// Either path may be empty; at least one is required.
Report cmd_estimate(const std::string& counts_path, const std::string& optics_path);
Report cmd_forge(const RunConfig& config, unsigned threads = 0);
Report cmd_advantage(const RunConfig& config);
Report cmd_multinode(const RunConfig& config, std::optional<int> m);

// Golden-value suite; `passed` is false when any row mismatches.
struct CheckOutcome {
  Report report;
  bool passed = true;
};
CheckOutcome cmd_check(const RunConfig& config);

}  // namespace stoken
