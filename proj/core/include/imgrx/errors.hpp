#pragma once

#include <stdexcept>
#include <string>

namespace imgrx {

// Input outside the domain of a physical model (non-positive length, BER out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Inconsistent layout: non-square counts, PDs that do not fit, lens pitch below aperture.
class GeometryError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Requested FOV is wider than the FOV model can deliver for any L >= 0.
class InfeasibleFovError : public DomainError {
 public:
  InfeasibleFovError(const std::string& what, double max_fov_deg)
      : DomainError(what), max_fov_deg_(max_fov_deg) {}
  double max_fov_deg() const noexcept { return max_fov_deg_; }

 private:
  double max_fov_deg_;
};

// Empirical fit queried outside the range it was fitted on.
class ModelRangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace imgrx
