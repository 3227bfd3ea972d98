/**
 * @file error.hpp
 * @brief Exception hierarchy. Every error carries a category so front ends
 * can map failures onto exit codes.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pinngm {

enum class ErrorCategory {
  kConfig,
  kIo,
  kGeometry,
  kSingularity,
  kNumerical,
  kInvalidArgument,
};

std::string_view to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::kConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::kIo, what) {}
};

/// Malformed meshes: open edges, non-triangular records, bad indices.
class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& what) : Error(ErrorCategory::kGeometry, what) {}
};

/// Field point coincides with a singularity (origin, mascon, polyhedron
/// edge or facet).
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what)
      : Error(ErrorCategory::kSingularity, what) {}
};

/// Non-finite values, lost positive definiteness, divergence.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorCategory::kNumerical, what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCategory::kInvalidArgument, what) {}
};

}  // namespace pinngm
