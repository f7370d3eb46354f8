#pragma once

#include <vector>

#include "dirac/types.hpp"

namespace dirac::linalg {

// Eigenvalues of a general complex dense matrix (LAPACK zgeev).
Vector eigenvalues(const Matrix& a);

// Eigenvalues + right eigenvectors.
void eigensystem(const Matrix& a, Vector& values, Matrix& vectors);

// Eigenvalues of a Hermitian matrix, ascending (LAPACK zheev).
RealVector eigenvalues_hermitian(const Matrix& a);

void eigensystem_hermitian(const Matrix& a, RealVector& values, Matrix& vectors);

// log det(A) as a complex number (real part log|det|, imaginary part arg),
// via LU with partial pivoting. The argument is only defined mod 2*pi.
Complex log_det(Matrix a);

// X = A^{-1} B by LU solve (A overwritten internally).
Matrix solve(Matrix a, const Matrix& b);

// Singular values, descending.
RealVector singular_values(const Matrix& a);

// Schatten-q norm from singular values: (sum s_k^q)^(1/q).
double schatten_norm(const Matrix& a, double q);

}  // namespace dirac::linalg
