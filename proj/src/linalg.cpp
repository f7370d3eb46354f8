#include "dirac/linalg.hpp"

#include <cmath>

#include <lapacke.h>

namespace dirac::linalg {

namespace {
lapack_complex_double* lp(Matrix& m) {
  return reinterpret_cast<lapack_complex_double*>(m.data());
}
lapack_complex_double* lp(Vector& v) {
  return reinterpret_cast<lapack_complex_double*>(v.data());
}
}  // namespace

Vector eigenvalues(const Matrix& a) {
  DIRAC_REQUIRE(a.rows() == a.cols(), "eigenvalues: matrix must be square");
  Matrix work = a;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Vector w(n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, lp(work), n,
                                  lp(w), nullptr, 1, nullptr, 1);
  DIRAC_REQUIRE(info == 0, "zgeev failed, info=" + std::to_string(info));
  return w;
}

void eigensystem(const Matrix& a, Vector& values, Matrix& vectors) {
  DIRAC_REQUIRE(a.rows() == a.cols(), "eigensystem: matrix must be square");
  Matrix work = a;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  values.resize(n);
  vectors.resize(n, n);
  lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, lp(work), n,
                                  lp(values), nullptr, 1, lp(vectors), n);
  DIRAC_REQUIRE(info == 0, "zgeev failed, info=" + std::to_string(info));
}

RealVector eigenvalues_hermitian(const Matrix& a) {
  Matrix work = a;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  RealVector w(n);
  lapack_int info =
      LAPACKE_zheev(LAPACK_COL_MAJOR, 'N', 'U', n, lp(work), n, w.data());
  DIRAC_REQUIRE(info == 0, "zheev failed, info=" + std::to_string(info));
  return w;
}

void eigensystem_hermitian(const Matrix& a, RealVector& values, Matrix& vectors) {
  vectors = a;
  const lapack_int n = static_cast<lapack_int>(a.rows());
  values.resize(n);
  lapack_int info =
      LAPACKE_zheev(LAPACK_COL_MAJOR, 'V', 'U', n, lp(vectors), n, values.data());
  DIRAC_REQUIRE(info == 0, "zheev failed, info=" + std::to_string(info));
}

Complex log_det(Matrix a) {
  DIRAC_REQUIRE(a.rows() == a.cols(), "log_det: matrix must be square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  std::vector<lapack_int> ipiv(n);
  lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lp(a), n, ipiv.data());
  DIRAC_REQUIRE(info >= 0, "zgetrf failed, info=" + std::to_string(info));
  if (info > 0) {
    // Exactly singular: log|det| = -inf.
    return Complex(-std::numeric_limits<double>::infinity(), 0.0);
  }
  double re = 0.0, im = 0.0;
  for (lapack_int i = 0; i < n; ++i) {
    Complex d = a(i, i);
    re += std::log(std::abs(d));
    im += std::arg(d);
    if (ipiv[i] != i + 1) im += kPi;  // row swap flips the sign
  }
  // Fold the accumulated argument into (-pi, pi].
  im = std::remainder(im, 2.0 * kPi);
  return Complex(re, im);
}

Matrix solve(Matrix a, const Matrix& b) {
  DIRAC_REQUIRE(a.rows() == a.cols() && a.rows() == b.rows(),
                "solve: dimension mismatch");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  const lapack_int nrhs = static_cast<lapack_int>(b.cols());
  Matrix x = b;
  std::vector<lapack_int> ipiv(n);
  lapack_int info = LAPACKE_zgesv(LAPACK_COL_MAJOR, n, nrhs, lp(a), n,
                                  ipiv.data(), lp(x), n);
  DIRAC_REQUIRE(info == 0, "zgesv failed, info=" + std::to_string(info));
  return x;
}

RealVector singular_values(const Matrix& a) {
  Matrix work = a;
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  RealVector s(k);
  std::vector<double> superb(std::max<lapack_int>(1, k - 1));
  lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', m, n, lp(work), m,
                                   s.data(), nullptr, 1, nullptr, 1, superb.data());
  DIRAC_REQUIRE(info == 0, "zgesvd failed, info=" + std::to_string(info));
  return s;
}

double schatten_norm(const Matrix& a, double q) {
  DIRAC_REQUIRE(q >= 1.0, "schatten_norm: q must be >= 1");
  RealVector s = singular_values(a);
  double acc = 0.0;
  for (int i = 0; i < s.size(); ++i) acc += std::pow(s(i), q);
  return std::pow(acc, 1.0 / q);
}

}  // namespace dirac::linalg
