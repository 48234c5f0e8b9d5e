#pragma once

#include <stdexcept>
#include <string>

namespace stoken {

// Malformed or out-of-domain configuration and input records.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A lemma/theorem constraint on the scheme parameters does not hold.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace stoken
