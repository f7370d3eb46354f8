#pragma once

#include <functional>

#include "dirac/types.hpp"

namespace dirac {

// Uniform midpoint grid on [-L, L] (one-point panels): nodes
// x_j = -L + (j+1/2)h, h = 2L/N, weights h. Vectors are carried in the
// weighted representation v_j = sqrt(w_j) u(x_j), which for uniform
// weights leaves operator matrices unchanged.
struct AxialGrid {
  double halfwidth = 12.0;
  int n = 128;

  double h() const { return 2.0 * halfwidth / n; }
  double node(int j) const { return -halfwidth + (j + 0.5) * h(); }
  double weight(int) const { return h(); }

  void validate() const {
    DIRAC_REQUIRE(halfwidth > 0.0 && n >= 4, "AxialGrid: need L > 0, N >= 4");
  }
};

// Complex square root with argument halved from the (0, 2pi) branch:
// image is the closed upper half plane, cut along [0, +inf).
// Throws if z lies on the cut.
Complex branch_sqrt(Complex z);

// Integral kernel of (-d^2/dx3^2 - z)^{-1} for z off [0, +inf):
// -exp(i sqrt(z) |x3 - x3p|) / (2 i sqrt(z)), Im sqrt(z) > 0.
Complex resolvent_kernel(Complex z, double x3, double x3p);

// Limiting-absorption kernel on the positive axis (lambda > 0):
// i exp(i sqrt(lambda) |x3 - x3p|) / (2 sqrt(lambda)).
Complex limiting_kernel(double lambda, double x3, double x3p);

// Regular-part kernel (1 - exp(iW|d|)) / (2iW) where W is the branch root
// of the squared threshold momentum; finite at W -> 0 with value -|d|/2.
// Evaluated through sin/sinc so no cancellation occurs for small W|d|.
Complex s_kernel_value(Complex w_branch, double dist);

// Nystrom matrix of the s-kernel for threshold sign_m (+1 -> +m, -1 -> -m)
// at parameter k; the branch root W = sqrt(k^2 (z + sign_m*m)^2) is resolved
// internally. k = 0 returns the analytic limit kernel -|d|/2.
// `corrected` adds the 3-band diagonal kink correction (exact center-panel
// moments + h^2 Euler-Maclaurin edge terms) so the matrix represents the
// whole-line operator beyond naive O(h^2) accuracy.
Matrix s_matrix(const AxialGrid& grid, Complex k, double mass, int sign_m,
                bool corrected = true);

// Same correction machinery for an arbitrary branch root W.
Matrix s_matrix_from_w(const AxialGrid& grid, Complex w_branch, bool corrected);

// Kernel of (-i d/dx3) R(zeta): (i/2) sign(x - y) e^{iW|x-y|} (odd, with a
// jump across the diagonal; the diagonal entry is its principal value 0).
// `corrected` adds the antisymmetric 5-band jump correction.
Matrix deriv_resolvent_matrix_from_w(const AxialGrid& grid, Complex w_branch,
                                     bool corrected = true);

// Nystrom matrix of the resolvent kernel; with `corrected` it is assembled
// as (i/2W)|1><1| + corrected s-matrix (the two kernels differ by the
// constant i/2W), which removes the diagonal-kink quadrature error.
Matrix resolvent_matrix(const AxialGrid& grid, Complex z, bool corrected = false);
Matrix limiting_matrix(const AxialGrid& grid, double lambda);

// Rank-one operator a(u) = (i/2) <u, G+> G+ on the grid, plus the factor
// row vector c (c(u) = <u, G+>), satisfying -2i a = c* c exactly.
struct RankOneFactors {
  Matrix a;        // N x N
  Vector c;        // row vector as a column: c(u) = c.dot(u) in weighted rep
};
RankOneFactors rank_one_a(const AxialGrid& grid,
                          const std::function<double(double)>& g_axial);

// Spectral realization of -i d/dx3 and its resolvent family on the grid:
// period-2L Fourier modes, Nyquist row zeroed so the matrix is Hermitian
// with an exact constant zero mode.
class AxialOperators {
 public:
  explicit AxialOperators(const AxialGrid& grid);

  const AxialGrid& grid() const { return grid_; }
  const Matrix& derivative() const { return deriv_; }        // -i d/dx3
  const RealVector& frequencies() const { return kappa_; }   // spectrum of derivative

  // (Dax^2 - zeta)^{-1} as a dense matrix.
  Matrix second_derivative_resolvent(Complex zeta) const;
  // (Dax^2 - zeta)^{-1} X without forming the full resolvent.
  Matrix apply_second_derivative_resolvent(Complex zeta, const Matrix& x) const;

 private:
  AxialGrid grid_;
  Matrix modes_;      // unitary N x N, columns are plane-wave modes
  RealVector kappa_;  // mode frequencies (Nyquist zeroed)
  Matrix deriv_;
};

}  // namespace dirac
