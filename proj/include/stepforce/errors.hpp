#pragma once

#include <stdexcept>
#include <string>

namespace stepforce {

//! Physics-domain failure: thresholds, under-resolved models, contaminated
//! boxes. `kind()` is a stable short tag such as "below-threshold".
class DomainError : public std::runtime_error {
public:
  DomainError(std::string kind, const std::string &message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string &kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

//! Malformed configuration or command line input.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace stepforce
