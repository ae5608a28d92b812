#ifndef QAPBNB_COMMON_HPP_
#define QAPBNB_COMMON_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qapbnb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown on malformed input data (instance files, solution files).
class ParseError : public std::runtime_error {
 public:
  enum class Kind { TokenCount, NonNumeric, Asymmetric, SizeOutOfRange, ValueMismatch };

  ParseError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Thrown on violated preconditions of model operations.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an eigensolver fails to converge.
class EigenFailure : public std::runtime_error {
 public:
  explicit EigenFailure(const std::string& what) : std::runtime_error(what) {}
};

inline bool nearly_integral(double v) { return std::abs(v - std::round(v)) < 1e-9; }

}  // namespace qapbnb

#endif  // QAPBNB_COMMON_HPP_
