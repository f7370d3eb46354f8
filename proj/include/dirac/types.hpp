#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dirac {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Error type for contract violations; messages name the violated assumption.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define DIRAC_REQUIRE(cond, msg)          \
  do {                                    \
    if (!(cond)) throw ::dirac::Error(msg); \
  } while (0)

}  // namespace dirac
