#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dirac/axial.hpp"

using namespace dirac;

namespace {

// Independent oracle for (-d^2/dx^2 + 1)^{-1} f: second-order finite
// differences with Dirichlet ends on a fine grid, Richardson-extrapolated.
// Thomas solve; the fine grid is chosen so the coarse midpoints are nodes.
std::vector<double> fd_resolvent_at(const AxialGrid& grid, int refine,
                                    const std::function<double(double)>& f) {
  const double L = grid.halfwidth;
  auto solve_fd = [&](int nfd) {
    const double h = 2.0 * L / nfd;
    const int n = nfd - 1;  // interior points
    std::vector<double> a(n, -1.0 / (h * h)), b(n, 2.0 / (h * h) + 1.0),
        c(n, -1.0 / (h * h)), d(n);
    for (int i = 0; i < n; ++i) d[i] = f(-L + (i + 1) * h);
    for (int i = 1; i < n; ++i) {
      const double m = a[i] / b[i - 1];
      b[i] -= m * c[i - 1];
      d[i] -= m * d[i - 1];
    }
    std::vector<double> u(n);
    u[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i) u[i] = (d[i] - c[i] * u[i + 1]) / b[i];
    return u;
  };
  // Fine spacing h_f = grid.h()/(2*refine) puts every midpoint on the grid.
  const int nfd = grid.n * 2 * refine;
  auto u1 = solve_fd(nfd);
  auto u2 = solve_fd(2 * nfd);
  std::vector<double> out(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const int i1 = (2 * j + 1) * refine;      // index into u1 (interior offset 1)
    const int i2 = (2 * j + 1) * 2 * refine;  // index into u2
    const double v1 = u1[i1 - 1], v2 = u2[i2 - 1];
    out[j] = (4.0 * v2 - v1) / 3.0;
  }
  return out;
}

}  // namespace

TEST_CASE("branch sqrt lands in the upper half plane") {
  CHECK(std::abs(branch_sqrt(Complex(-4.0, 0.0)) - Complex(0.0, 2.0)) < 1e-15);
  CHECK(std::abs(branch_sqrt(Complex(0.0, 2.0)) - Complex(1.0, 1.0)) < 1e-15);
  // root identity on a sample sweep avoiding the cut
  for (int i = 0; i < 50; ++i) {
    const double th = 0.05 + 0.12 * i;
    const Complex z = std::polar(0.3 + 0.1 * i, std::fmod(th, 2.0 * kPi - 0.1) + 0.05);
    if (z.imag() == 0.0 && z.real() >= 0.0) continue;
    const Complex r = branch_sqrt(z);
    CHECK(r.imag() >= 0.0);
    CHECK(std::abs(r * r - z) <= 1e-14 * std::abs(z));
  }
  CHECK_THROWS_AS(branch_sqrt(Complex(1.0, 0.0)), Error);
  CHECK_THROWS_AS(branch_sqrt(Complex(0.0, 0.0)), Error);
}

TEST_CASE("resolvent kernel at z = -1 is e^{-|d|}/2") {
  CHECK(std::abs(resolvent_kernel(Complex(-1, 0), 0.3, 0.3) - Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(resolvent_kernel(Complex(-1, 0), 1.0, 0.0) -
                 Complex(0.5 * std::exp(-1.0), 0)) < 1e-12);
  // decay
  CHECK(std::abs(resolvent_kernel(Complex(-1, 0), 30.0, 0.0)) < 1e-12);
  CHECK_THROWS_AS(resolvent_kernel(Complex(2.0, 0.0), 0.0, 0.0), Error);
}

TEST_CASE("limiting absorption kernel on the positive axis") {
  CHECK(std::abs(limiting_kernel(1.0, 0.0, 0.0) - Complex(0.0, 0.5)) < 1e-15);
  CHECK(std::abs(limiting_kernel(1.0, kPi, 0.0) - Complex(0.0, -0.5)) < 1e-12);
  CHECK_THROWS_AS(limiting_kernel(-1.0, 0.0, 0.0), Error);
  // resolvent(lambda + i delta) -> limiting(lambda) at rate O(delta)
  double prev_err = 1.0;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    const Complex diff =
        resolvent_kernel(Complex(1.0, delta), 0.7, 0.0) - limiting_kernel(1.0, 0.7, 0.0);
    CHECK(std::abs(diff) < 1.0 * delta);
    CHECK(std::abs(diff) < prev_err);
    prev_err = std::abs(diff);
  }
}

TEST_CASE("s kernel: k -> 0 limit is -|d|/2 with O(|k|) rate") {
  CHECK(std::abs(s_kernel_value(Complex(0, 0), 1.0) - Complex(-0.5, 0)) < 1e-15);
  CHECK(std::abs(s_kernel_value(Complex(0, 0), 0.0)) == 0.0);
  const double mass = 1.0;
  double prev = 1.0;
  for (double kk : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const Complex k(kk, 0.5 * kk);
    const Complex w = branch_sqrt(k * k * std::pow(2.0 * mass / (1.0 - k * k), 2));
    const double err = std::abs(s_kernel_value(w, 1.0) - Complex(-0.5, 0.0));
    CHECK(err < 2.0 * std::abs(k));  // O(|k|) convergence
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("s matrix is continuous in k on the closed half-disc") {
  AxialGrid grid{6.0, 48};
  const double mass = 1.0;
  std::vector<Complex> ks = {{0.05, 0.02}, {0.0501, 0.02}, {0.01, 0.001}, {0.0101, 0.001}};
  // Lipschitz-in-k on samples; the slope scales like h * L^2 * m.
  const double cbound = 4.0 * mass * std::pow(grid.halfwidth, 3);
  Matrix s0 = s_matrix(grid, ks[0], mass, +1);
  Matrix s1 = s_matrix(grid, ks[1], mass, +1);
  CHECK((s0 - s1).norm() < cbound * std::abs(ks[0] - ks[1]));
  Matrix s2 = s_matrix(grid, ks[2], mass, +1);
  Matrix s3 = s_matrix(grid, ks[3], mass, +1);
  CHECK((s2 - s3).norm() < cbound * std::abs(ks[2] - ks[3]));
  // k = 0 returns the analytic limit kernel -|d|/2 (uncorrected sampling
  // reproduces it exactly; the corrected form only adds the O(h^2) band).
  Matrix sz = s_matrix(grid, Complex(0, 0), mass, +1, false);
  Matrix slim(grid.n, grid.n);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      slim(i, j) = -0.5 * grid.h() * std::abs(grid.node(i) - grid.node(j));
  CHECK((sz - slim).cwiseAbs().maxCoeff() < 1e-14);
  Matrix szc = s_matrix(grid, Complex(0, 0), mass, +1, true);
  CHECK((szc - slim).cwiseAbs().maxCoeff() < 0.5 * grid.h() * grid.h());
}

TEST_CASE("rank-one factor: Gaussian norm and the -2ia = c*c identity") {
  AxialGrid grid{10.0, 200};
  auto g = [](double x) { return std::exp(-x * x); };
  RankOneFactors r = rank_one_a(grid, g);
  // nonzero eigenvalue of a is (i/2)||G+||^2 = (i/2) sqrt(pi)
  const Complex tr = r.a.trace();  // rank one: trace = the nonzero eigenvalue
  CHECK(std::abs(tr - 0.5 * kI * std::sqrt(kPi)) < 1e-10);
  // rank 1: second singular value negligible
  Eigen::JacobiSVD<Matrix> svd(r.a);
  CHECK(svd.singularValues()(1) < 1e-12);
  // -2i a == c* c as matrices
  Matrix cc = r.c * r.c.adjoint();
  CHECK((Matrix(-2.0 * kI * r.a) - cc).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("decomposition of the resolvent kernel into rank-one plus regular part") {
  // Sampled kernel identity: R = (i/2W)*ones + s, pointwise to rounding.
  AxialGrid grid{8.0, 64};
  const Complex k(0.08, 0.03);
  const double mass = 1.0;
  const Complex zeta = k * k * std::pow(2.0 * mass / (1.0 - k * k), 2);
  const Complex w = branch_sqrt(zeta);
  Matrix r = resolvent_matrix(grid, zeta, false);
  Matrix s = s_matrix_from_w(grid, w, false);
  Matrix ones = Matrix::Constant(grid.n, grid.n, grid.h() * kI / (2.0 * w));
  CHECK((r - (ones + s)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Nystrom resolvent at z = -1 matches a dense finite-difference solve") {
  AxialGrid grid{12.0, 256};
  auto f = [](double x) { return std::exp(-x * x); };
  Vector fv(grid.n);
  for (int j = 0; j < grid.n; ++j) fv(j) = std::sqrt(grid.h()) * f(grid.node(j));
  Matrix r = resolvent_matrix(grid, Complex(-1.0, 0.0), true);
  Vector u = r * fv;
  auto oracle = fd_resolvent_at(grid, 4, f);
  // Bulk interior window: the FD oracle carries a Dirichlet boundary layer
  // of relative size ~e^{-2(L-|x|)} near the edges of its domain.
  double max_rel = 0.0;
  for (int j = grid.n / 3; j < 2 * grid.n / 3; ++j) {
    const double uj = u(j).real() / std::sqrt(grid.h());
    max_rel = std::max(max_rel, std::abs(uj - oracle[j]) / std::abs(oracle[j]));
    CHECK(std::abs(u(j).imag()) < 1e-10);
  }
  CHECK(max_rel <= 1e-6);
}

TEST_CASE("spectral derivative: Hermitian, exact zero mode, clean spectrum") {
  AxialGrid grid{12.0, 128};
  AxialOperators ops(grid);
  const Matrix& d = ops.derivative();
  CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  Vector ones = Vector::Constant(grid.n, 1.0);
  CHECK((d * ones).cwiseAbs().maxCoeff() < 1e-12);
  // resolvent of the squared derivative agrees with its applied form
  const Complex zeta(-0.3, 0.4);
  Matrix r1 = ops.second_derivative_resolvent(zeta);
  Matrix probe = Matrix::Random(grid.n, 3);
  Matrix r2 = ops.apply_second_derivative_resolvent(zeta, probe);
  CHECK((r1 * probe - r2).cwiseAbs().maxCoeff() < 1e-10);
  // (D^2 - zeta) * resolvent == I on the probe
  Matrix lhs = d * (d * r2) - zeta * r2;
  CHECK((lhs - probe).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("kink-corrected s matrix converges to a fine-grid reference form") {
  // Quadratic form <g1, S g2> with smooth decaying (asymmetric) test
  // functions; the fine-grid corrected value is the reference.
  const Complex w(0.21, 0.095);
  auto test_vectors = [](const AxialGrid& grid, Vector& g1, Vector& g2) {
    g1.resize(grid.n);
    g2.resize(grid.n);
    for (int j = 0; j < grid.n; ++j) {
      const double x = grid.node(j);
      g1(j) = std::sqrt(grid.h()) * std::exp(-0.5 * (x - 0.4) * (x - 0.4));
      g2(j) = std::sqrt(grid.h()) * std::exp(-0.7 * (x + 0.3) * (x + 0.3));
    }
  };
  auto form = [&](int n, bool corrected) {
    AxialGrid grid{10.0, n};
    Matrix s = s_matrix_from_w(grid, w, corrected);
    Vector g1, g2;
    test_vectors(grid, g1, g2);
    return Complex(g1.adjoint() * (s * g2));
  };
  const Complex ref = form(1600, true);
  const Complex coarse = form(100, true);
  const Complex naive = form(100, false);
  CHECK(std::abs(coarse - ref) < 2e-7);
  CHECK(std::abs(coarse - ref) < 0.002 * std::abs(naive - ref));  // correction matters
}

TEST_CASE("axial grid invariants") {
  AxialGrid grid{9.5, 77};
  double total = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    CHECK(grid.weight(j) > 0.0);
    total += grid.weight(j);
  }
  CHECK(std::abs(total - 2.0 * grid.halfwidth) < 1e-12);
}
