#pragma once

#include <stdexcept>
#include <string>

namespace pda {

/// Bad or inconsistent configuration (roster, tables, experiment files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Lookup of an unknown motion or action name.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Statistical input with no information (all-zero or constant differences).
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace pda
