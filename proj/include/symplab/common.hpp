#ifndef SYMPLAB_COMMON_HPP_
#define SYMPLAB_COMMON_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace symplab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IMat = Eigen::MatrixXi;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

/// Raised when an integration leaves the chart domain; carries the exit
/// time and the last in-chart point.
struct ChartExitError : Error {
  double exit_time;
  Vec last_point;

  ChartExitError(const std::string& what, double t, Vec x)
      : Error(what), exit_time(t), last_point(std::move(x)) {}
};

struct SingularFormError : Error {
  double condition_number;

  SingularFormError(const std::string& what, double cond)
      : Error(what), condition_number(cond) {}
};

namespace detail {

template <typename... Args>
std::string cat(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

}  // namespace detail

/// Wraps a value into [lo, lo + period); returns the wrapped value and the
/// integer number of periods removed.
inline std::pair<double, int> wrap_periodic(double value, double lo, double period) {
  double shifted = (value - lo) / period;
  double f = std::floor(shifted);
  int k = static_cast<int>(f);
  double wrapped = lo + (shifted - f) * period;
  if (wrapped >= lo + period) {  // guard against floating-point roundup
    wrapped -= period;
    ++k;
  }
  return {wrapped, k};
}

}  // namespace symplab

#endif  // SYMPLAB_COMMON_HPP_
