#pragma once

#include <functional>
#include <vector>

#include "dirac/types.hpp"

namespace dirac {

// Thrown when an index/winding computation cannot certify its contour
// (integrand vanishes or refinement is exhausted).
class ContourUnsafe : public Error {
 public:
  explicit ContourUnsafe(const std::string& msg) : Error(msg) {}
};

// Closed positively oriented contour. Adaptive engines refine the sample
// set until every tracked segment carries a phase change below pi/2.
class Contour {
 public:
  static Contour circle(Complex center, double radius, int initial_nodes = 64);
  static Contour rectangle(Complex corner_lo, Complex corner_hi,
                           int nodes_per_side = 16);
  static Contour polyline(std::vector<Complex> vertices);

  // Piecewise-linear representation: ordered vertex list, closed implicitly.
  const std::vector<Complex>& vertices() const { return vertices_; }
  double diameter() const;

 private:
  std::vector<Complex> vertices_;
};

// q-regularized determinant det_{ceil(q)}(I - T): product over eigenvalues
// mu of T of (1 - mu) exp(sum_{k<ceil(q)} mu^k / k). q = 1 is det(I - T).
Complex det_reg(const Matrix& t, double q);

// Both orderings of the commutation property det_q(I - AB) = det_q(I - BA).
std::pair<Complex, Complex> det_commute_check(const Matrix& a, const Matrix& b,
                                              double q);

// Norm-ball Lipschitz majorant ||T1-T2||_Sq exp(Gamma (||T1||+||T2||+1)^ceil(q)).
double lipschitz_bound(const Matrix& t1, const Matrix& t2, double q,
                       double gamma_q = 1.0);

struct WindingOptions {
  double max_phase_step = 0.5 * kPi;
  double max_log_step = 0.7;       // refinement trigger on log|f| jumps
  double integer_tol = 1e-3;
  int max_depth = 26;
  double min_param_step = 1e-13;
};

// Winding number of exp(log_f(z)) along the closed contour by adaptive
// phase tracking; log_f returns log|f| + i arg f (any branch). When
// residual_out is given it receives |total/2pi - nearest integer|.
int winding_number(const std::function<Complex(Complex)>& log_f,
                   const Contour& contour, const WindingOptions& opt = {},
                   double* residual_out = nullptr);

// Argument-principle index (1/2 pi i) contour integral of f'/f.
int scalar_index(const std::function<Complex(Complex)>& f,
                 const Contour& contour, const WindingOptions& opt = {},
                 double* residual_out = nullptr);

// Operator index (1/2 pi i) Tr of the contour integral of A'(z) A(z)^{-1},
// with A' by Richardson-extrapolated central differences (step scaled to
// the contour diameter) and trapezoid quadrature doubled until the value
// settles on an integer.
int operator_index(const std::function<Matrix(Complex)>& a,
                   const Contour& contour, double rel_step = 1e-5);

// Jensen-type zero-count bound on a disc: c_prime * (boundary mean of
// ln|g| - ln|g(center_value)|). Calibrated default c_prime = 1/ln 2 counts
// zeros in the concentric half-radius disc for polynomial families.
double jensen_count_bound(const std::function<Complex(Complex)>& g,
                          Complex center, double radius,
                          double c_prime = 1.4426950408889634);

}  // namespace dirac
