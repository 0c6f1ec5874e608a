// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace losmimo {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// Fisher information (or X^H X) that cannot be inverted.
class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, std::vector<std::string> parameters = {})
      : Error(what), parameters_(std::move(parameters)) {}
  const std::vector<std::string>& parameters() const noexcept { return parameters_; }

 private:
  std::vector<std::string> parameters_;
};

// Structure classes that received no observation.
class CoverageError : public Error {
 public:
  CoverageError(const std::string& what, std::vector<std::size_t> missing)
      : Error(what), missing_(std::move(missing)) {}
  const std::vector<std::size_t>& missing_classes() const noexcept { return missing_; }

 private:
  std::vector<std::size_t> missing_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace losmimo
