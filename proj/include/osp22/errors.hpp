#pragma once

#include <stdexcept>
#include <string>

namespace osp22 {

/// Inputs built over incompatible generator sets or otherwise ill-configured.
struct ConfigurationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operands of different truncation.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A precondition on parity/homogeneity was not met.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Parameter outside the domain of a formula (e.g. |z| >= 1).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A numeric procedure did not reach its tolerance; carries what it achieved.
struct NumericError : std::runtime_error {
  NumericError(const std::string& what, double achieved)
      : std::runtime_error(what), estimate(achieved) {}
  double estimate;
};

/// A series could not be certified within the available truncation.
struct TruncationError : std::runtime_error {
  TruncationError(const std::string& what, double tail_bound)
      : std::runtime_error(what), bound(tail_bound) {}
  double bound;
};

}  // namespace osp22
