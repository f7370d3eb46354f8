#pragma once

#include <functional>
#include <optional>
#include <string>

#include "dirac/types.hpp"

namespace dirac {

// The four 4x4 matrices of the standard (Pauli-Dirac) representation.
// Entries are exactly 0, +-1 or +-i, so the anticommutation relations hold
// with zero rounding error.
struct DiracAlgebra {
  Mat4 alpha1, alpha2, alpha3, beta;
};

DiracAlgebra dirac_matrices();

// Model constants for the constant-field specialization: the transverse
// spectral gap is zeta = 2*b0.
struct ModelParams {
  double mass = 1.0;  // m > 0
  double b0 = 2.0;    // field strength > 0

  double zeta() const { return 2.0 * b0; }

  void validate() const {
    DIRAC_REQUIRE(mass > 0.0, "ModelParams: mass must be > 0");
    DIRAC_REQUIRE(b0 > 0.0, "ModelParams: b0 must be > 0");
  }
};

enum class TransverseKind { Gaussian, Bump };
enum class AxialKind { Gaussian, Polynomial };

// Transverse profile: Gaussian e^{-c r^2} or a compactly supported bump
// exp(1 - 1/(1 - (r/R)^2)) for r < R (c plays the role of 1/R^2).
struct TransverseProfile {
  TransverseKind kind = TransverseKind::Gaussian;
  double c = 1.0;

  double operator()(double r2) const;  // takes |x_perp|^2
};

// Axial profile: Gaussian e^{-x3^2} or polynomial <x3>^{-beta}.
struct AxialProfile {
  AxialKind kind = AxialKind::Gaussian;
  double beta = 4.0;  // decay exponent, only for the polynomial kind

  double operator()(double x3) const;
  // Half-width L such that the profile tail beyond L is below tol.
  double suggested_halfwidth(double tol = 1e-12) const;
};

// V = epsilon * Phi * W with W(x) = w_perp(x_perp) * g_axial(x3) * S,
// S a Hermitian PSD 4x4 spinor factor. This family satisfies the model
// assumptions and keeps every integral quadrature friendly.
struct PotentialSpec {
  Complex phi{0.0, 1.0};          // nonzero complex phase factor
  double epsilon = 1.0;           // coupling >= 0
  TransverseProfile transverse{};
  AxialProfile axial{};
  Mat4 spinor_factor = Mat4::Identity();
  int sign_j = +1;                // sign(W); +1 for the W >= 0 family

  double arg_phi() const { return std::arg(phi); }
  double abs_phi() const { return std::abs(phi); }
  // Pointwise 4x4 potential matrix V(x) = eps*Phi*W(x).
  Mat4 value(double x1, double x2, double x3) const;
  // sup_x ||W(x)|| (spectral norm), used by the numerical-range guard.
  double max_w() const;
};

// Validation per the model assumptions: profiles nonnegative/positive,
// polynomial axial decay needs beta > 3, spinor factor Hermitian PSD.
// Idempotent: validating an accepted spec returns it unchanged.
PotentialSpec validate_potential(const PotentialSpec& spec);

// k-plane domain parameters: 0 < eta < m, gamma in (0,1),
// 0 < eps_k < min(gamma, eta(1-gamma)/(2m)), so eps_k < eta/m.
struct KDomainParams {
  double eta = 0.9;
  double gamma = 0.3;
  double eps_k = 0.28;
  double delta = 0.2;     // sector half-aperture
  double nu_gap = 0.3;    // Toeplitz gap fraction in (0,1)

  void validate(double mass) const {
    DIRAC_REQUIRE(eta > 0.0 && eta < mass, "KDomainParams: need 0 < eta < m");
    DIRAC_REQUIRE(gamma > 0.0 && gamma < 1.0, "KDomainParams: gamma in (0,1)");
    const double cap = std::min(gamma, eta * (1.0 - gamma) / (2.0 * mass));
    DIRAC_REQUIRE(eps_k > 0.0 && eps_k < cap,
                  "KDomainParams: need 0 < eps_k < min(gamma, eta(1-gamma)/(2m))");
    DIRAC_REQUIRE(delta > 0.0, "KDomainParams: delta > 0");
    DIRAC_REQUIRE(nu_gap > 0.0 && nu_gap < 1.0, "KDomainParams: nu_gap in (0,1)");
  }
};

}  // namespace dirac
