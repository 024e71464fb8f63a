#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nsfemdg {

using Index = std::int64_t;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr Index kNoElement = -1;

// Error hierarchy. Everything thrown by the library derives from one of the
// standard exception types so callers can catch broadly.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidMesh : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a density argument leaves the admissible set (rho < 0 for the
/// pressure law, rho <= 0 for the scheme residual).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsfemdg
