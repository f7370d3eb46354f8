#include "dirac/core.hpp"

#include <cmath>

namespace dirac {

DiracAlgebra dirac_matrices() {
  DiracAlgebra d;
  const Complex i = kI;
  // Pauli blocks: alpha_j = [[0, sigma_j], [sigma_j, 0]], beta = diag(1,1,-1,-1).
  d.alpha1 << 0, 0, 0, 1,
              0, 0, 1, 0,
              0, 1, 0, 0,
              1, 0, 0, 0;
  d.alpha2 << 0, 0, 0, -i,
              0, 0, i, 0,
              0, -i, 0, 0,
              i, 0, 0, 0;
  d.alpha3 << 0, 0, 1, 0,
              0, 0, 0, -1,
              1, 0, 0, 0,
              0, -1, 0, 0;
  d.beta << 1, 0, 0, 0,
            0, 1, 0, 0,
            0, 0, -1, 0,
            0, 0, 0, -1;
  return d;
}

double TransverseProfile::operator()(double r2) const {
  switch (kind) {
    case TransverseKind::Gaussian:
      return std::exp(-c * r2);
    case TransverseKind::Bump: {
      const double u = c * r2;  // (r/R)^2 with c = 1/R^2
      if (u >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - u));
    }
  }
  return 0.0;
}

double AxialProfile::operator()(double x3) const {
  switch (kind) {
    case AxialKind::Gaussian:
      return std::exp(-x3 * x3);
    case AxialKind::Polynomial:
      return std::pow(1.0 + x3 * x3, -0.5 * beta);
  }
  return 0.0;
}

double AxialProfile::suggested_halfwidth(double tol) const {
  switch (kind) {
    case AxialKind::Gaussian:
      return std::max(8.0, std::sqrt(-std::log(tol)) + 2.0);
    case AxialKind::Polynomial: {
      // Tail mass of <x>^{-beta} beyond L is ~ L^{1-beta}/(beta-1).
      const double L = std::pow(tol * (beta - 1.0), 1.0 / (1.0 - beta));
      return std::max(12.0, L);
    }
  }
  return 12.0;
}

Mat4 PotentialSpec::value(double x1, double x2, double x3) const {
  const double w = transverse(x1 * x1 + x2 * x2) * axial(x3);
  return (epsilon * phi * w) * spinor_factor;
}

double PotentialSpec::max_w() const {
  // Profiles peak at the origin with value 1 for both families.
  Eigen::SelfAdjointEigenSolver<Mat4> es(spinor_factor);
  return transverse(0.0) * axial(0.0) * es.eigenvalues().maxCoeff();
}

PotentialSpec validate_potential(const PotentialSpec& spec) {
  DIRAC_REQUIRE(std::abs(spec.phi) > 0.0,
                "Assumption 2.1 violated: Phi must be nonzero");
  DIRAC_REQUIRE(spec.epsilon >= 0.0, "coupling epsilon must be >= 0");
  if (spec.axial.kind == AxialKind::Polynomial) {
    DIRAC_REQUIRE(spec.axial.beta > 3.0,
                  "Assumption 1.1 violated: polynomial axial decay needs beta > 3");
  }
  DIRAC_REQUIRE(spec.transverse.c > 0.0, "transverse profile scale must be > 0");
  const double herm_err = (spec.spinor_factor - spec.spinor_factor.adjoint()).norm();
  DIRAC_REQUIRE(herm_err < 1e-12,
                "Assumption 2.1 violated: spinor factor must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat4> es(spec.spinor_factor);
  DIRAC_REQUIRE(es.eigenvalues().minCoeff() > -1e-12,
                "Assumption 2.1 violated: spinor factor must be positive "
                "semidefinite (sign-definite W)");
  PotentialSpec out = spec;
  out.sign_j = +1;  // W >= 0 family
  return out;
}

}  // namespace dirac
