#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dirac/core.hpp"

using namespace dirac;

TEST_CASE("dirac matrices satisfy every anticommutation relation exactly") {
  const DiracAlgebra d = dirac_matrices();
  const Mat4 alphas[3] = {d.alpha1, d.alpha2, d.alpha3};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      Mat4 anti = alphas[j] * alphas[k] + alphas[k] * alphas[j];
      Mat4 expected = (j == k) ? Mat4(2.0 * Mat4::Identity()) : Mat4(Mat4::Zero());
      CHECK((anti - expected).cwiseAbs().maxCoeff() == 0.0);
    }
    Mat4 ab = alphas[j] * d.beta + d.beta * alphas[j];
    CHECK(ab.cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((d.beta * d.beta - Mat4::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("alpha matrices are traceless and Hermitian") {
  const DiracAlgebra d = dirac_matrices();
  for (const Mat4& a : {d.alpha1, d.alpha2, d.alpha3}) {
    CHECK(std::abs(a.trace()) == 0.0);
    CHECK((a - a.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(d.beta(0, 0) == Complex(1, 0));
  CHECK(d.beta(2, 2) == Complex(-1, 0));
}

TEST_CASE("validate_potential accepts the Gaussian family") {
  PotentialSpec s;
  s.phi = Complex(0.0, 1.0);
  s.epsilon = 0.1;
  s.transverse = {TransverseKind::Gaussian, 1.0};
  s.axial = {AxialKind::Gaussian, 0.0};
  s.spinor_factor = Mat4::Identity();
  PotentialSpec checked = validate_potential(s);
  CHECK(checked.sign_j == 1);
  // Idempotent: validating the accepted spec changes nothing.
  PotentialSpec again = validate_potential(checked);
  CHECK(again.phi == checked.phi);
  CHECK(again.epsilon == checked.epsilon);
  CHECK((again.spinor_factor - checked.spinor_factor).norm() == 0.0);
}

TEST_CASE("validate_potential rejects slow polynomial axial decay") {
  PotentialSpec s;
  s.axial = {AxialKind::Polynomial, 2.5};
  bool threw = false;
  try {
    validate_potential(s);
  } catch (const Error& e) {
    threw = true;
    CHECK(std::string(e.what()).find("Assumption 1.1") != std::string::npos);
  }
  CHECK(threw);
}

TEST_CASE("validate_potential rejects an indefinite spinor factor") {
  PotentialSpec s;
  s.spinor_factor = Mat4::Zero();
  s.spinor_factor(0, 0) = 1.0;
  s.spinor_factor(1, 1) = -1.0;
  CHECK_THROWS_AS(validate_potential(s), Error);
}

TEST_CASE("validate_potential rejects a non-Hermitian spinor factor") {
  PotentialSpec s;
  s.spinor_factor = Mat4::Identity();
  s.spinor_factor(0, 1) = Complex(0.0, 0.5);
  CHECK_THROWS_AS(validate_potential(s), Error);
}

TEST_CASE("k-domain parameter constraints") {
  KDomainParams p;
  p.validate(1.0);  // defaults are consistent for m = 1
  CHECK(p.eps_k < p.eta / 1.0);

  KDomainParams bad = p;
  bad.eps_k = 0.9;  // violates eps_k < eta(1-gamma)/(2m)
  CHECK_THROWS_AS(bad.validate(1.0), Error);
  KDomainParams bad2 = p;
  bad2.eta = 1.5;  // eta >= m
  CHECK_THROWS_AS(bad2.validate(1.0), Error);
}

TEST_CASE("model params: constant-field gap is 2 b0") {
  ModelParams mp;
  mp.mass = 1.0;
  mp.b0 = 2.0;
  mp.validate();
  CHECK(mp.zeta() == 4.0);
}
