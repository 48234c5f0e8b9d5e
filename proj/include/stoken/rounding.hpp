#pragma once

#include <cmath>

namespace stoken {

// Round up at the given decimal. Excess below 1e-7 of the last kept digit counts as
// representation noise, so 5.115515 stays 5.115515.
inline double ceil_decimals(double x, int places) {
  const double s = std::pow(10.0, places);
  return std::ceil(x * s - 1e-7) / s;
}

inline double round_decimals(double x, int places) {
  const double s = std::pow(10.0, places);
  return std::round(x * s) / s;
}

}  // namespace stoken
