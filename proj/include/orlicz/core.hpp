#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace orlicz {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr const char* kVersion = "0.1.0";

// A structural hypothesis the requested pipeline depends on does not hold
// for the supplied Orlicz function (e.g. submultiplicativity constant <= 1).
// Callers that reach a CLI boundary map this to exit code 3.
struct HypothesisViolation : std::runtime_error {
  explicit HypothesisViolation(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem-level failure while reading inputs or writing reports (exit code 4).
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace orlicz
