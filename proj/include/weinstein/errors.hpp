#pragma once

#include <stdexcept>
#include <string>

namespace weinstein {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Invalid grid or solver configuration.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operation applied to data in the wrong state (space tag, grid mismatch).
struct UsageError : std::logic_error {
  using std::logic_error::logic_error;
};

/// The evolved field reached the edge of the computational box.
struct GridTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sup-norm overflow during a nonlinear evolution.
struct BlowupAbort : std::runtime_error {
  BlowupAbort(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace weinstein
