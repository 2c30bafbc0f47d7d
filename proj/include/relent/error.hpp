#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace relent {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an entropy or of a log-type
/// integrand. Functionals attach the offending cell index.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what,
                       std::optional<std::size_t> cell = std::nullopt)
      : Error(cell ? what + " (cell " + std::to_string(*cell) + ")" : what),
        cell_(cell) {}

  std::optional<std::size_t> cell() const noexcept { return cell_; }

 private:
  std::optional<std::size_t> cell_;
};

/// Two fields that must share a grid and component count do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A sequence parameter does not fall on an integer number of cells.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of a check or experiment does not hold for the input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration. `key()` names the offending JSON path.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error("config key '" + key + "': " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace relent
