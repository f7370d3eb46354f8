#pragma once

#include <functional>
#include <vector>

#include "dirac/core.hpp"
#include "dirac/types.hpp"

namespace dirac {

// Transverse quadrature: radial Gauss-Legendre panels in t = r^2 on [0, T]
// and a uniform angular rule, with the measure (1/2) dt dtheta.
struct TransverseQuadrature {
  std::vector<double> t_nodes, t_weights;  // radial, in t = r^2
  int n_theta = 0;

  int node_count() const { return static_cast<int>(t_nodes.size()) * n_theta; }
  double theta(int a) const { return 2.0 * kPi * a / n_theta; }
  // combined weight for (radial q, angular a)
  double weight(int q, int /*a*/) const {
    return 0.5 * t_weights[q] * (2.0 * kPi / n_theta);
  }
};

// Landau states of the constant-field problem in symmetric gauge, built by
// the two commuting ladder operators acting on polynomial coefficients:
// psi_{n,m}(x) = f_{n,m}(w, wbar) exp(-b0 |w|^2 / 4), w = x1 + i x2.
// The level ladder acts exactly: pi_- |n,m> = sqrt(2 b0 (n+1)) |n+1,m>,
// pi_+ |n,m> = sqrt(2 b0 n) |n-1,m>.
class LandauBasis {
 public:
  // Retains levels n = 0..n_levels-1, angular labels m = 0..m_cut-1.
  LandauBasis(double b0, int n_levels, int m_cut,
              const TransverseQuadrature& quad);

  double b0() const { return b0_; }
  int n_levels() const { return n_levels_; }
  int m_cut() const { return m_cut_; }
  const TransverseQuadrature& quadrature() const { return quad_; }

  // Weighted samples: values(state, node) = sqrt(weight) * psi(node).
  // States are ordered (n major, m minor): index = n * m_cut + m.
  const Matrix& values() const { return values_; }
  int state_index(int n, int m) const { return n * m_cut_ + m; }
  int state_count() const { return n_levels_ * m_cut_; }

  // Max Gram-matrix deviation from identity under the quadrature.
  double gram_error() const;

  // Pointwise state evaluation (polynomial factor times Gaussian).
  Complex evaluate(int n, int m, double x1, double x2) const;

  // Matrix <psi_i, F psi_j> of a bounded transverse profile F(x1, x2),
  // restricted to rows in [row_lo, row_hi) and columns in [col_lo, col_hi).
  Matrix profile_matrix(const std::function<double(double, double)>& f,
                        int row_lo, int row_hi, int col_lo, int col_hi) const;
  Matrix profile_matrix(const std::function<double(double, double)>& f) const;

 private:
  double b0_;
  int n_levels_, m_cut_;
  TransverseQuadrature quad_;
  Matrix values_;
  std::vector<Matrix> polys_;  // coefficient matrices c(i,j) <-> w^i wbar^j
};

// Default quadrature sized for a basis with the given cutoffs; a break
// point (e.g. a bump profile's support edge in t = r^2) can be forced
// onto a panel boundary.
TransverseQuadrature make_transverse_quadrature(double b0, int n_levels,
                                                int m_cut,
                                                double force_break = -1.0);

// Spec-facing LLL basis: single Landau level with angular cutoff M.
// Refuses cutoffs the quadrature cannot certify orthonormal to 1e-10.
struct LLLBasis {
  double b0 = 2.0;
  int m_cut = 4;
  LandauBasis basis;

  LLLBasis(double b0_in, int m_cut_in);
};

// Toeplitz compression of a profile to the LLL: Hermitian M x M.
Matrix toeplitz_matrix(const std::function<double(double, double)>& profile,
                       const LLLBasis& basis);
Matrix toeplitz_matrix_radial(const std::function<double(double)>& radial_r2,
                              const LLLBasis& basis);

// Decreasing eigenvalues mu_j of a Toeplitz compression with gap-selected
// radii: each stored r_l sits in a relative spectral gap of width
// >= nu_gap * mu_j and satisfies dist(r_l, {mu_j}) >= nu_gap * r_l / 2.
struct ToeplitzSpectrum {
  std::vector<double> mu;      // decreasing, >= 0
  std::vector<double> radii;   // decreasing
  double nu_gap = 0.3;
  std::string warning;         // set when no gap qualifies
};

ToeplitzSpectrum gap_radii(const std::vector<double>& mu_decreasing,
                           double nu_gap, int count);

// Trace of 1_{(r, inf)} on the stored spectrum (step function in r).
int trace_above(const ToeplitzSpectrum& s, double r);
int trace_in_band(const ToeplitzSpectrum& s, double lo, double hi);

enum class ProfileWeighting { V, W };  // |V| = eps|Phi| W vs bare |W|

// Threshold profile V_{+m} (spinor entry 1,1) or V_{-m} (entry 3,3):
// r2 -> (1/2) * integral over x3 of the diagonal entry of |V(x)| computed by
// pointwise 4x4 Hermitian eigendecomposition, quadratured on an internal
// axial grid.
std::function<double(double)> vm_profile(const PotentialSpec& spec, int sign_m,
                                         ProfileWeighting weighting);

}  // namespace dirac
