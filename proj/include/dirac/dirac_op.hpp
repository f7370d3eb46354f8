#pragma once

#include <memory>
#include <vector>

#include "dirac/axial.hpp"
#include "dirac/core.hpp"
#include "dirac/landau.hpp"

namespace dirac {

// Basis truncation for the product discretization
// (spinor x Landau level x angular x axial node).
// Spinor components 0 and 2 retain levels 0..n_levels-1; components 1 and 3
// retain one level fewer, which closes the ladder algebra exactly: the
// squared free operator is block-diagonal with transverse eigenvalues
// 2 b0 n (components 0,2) and 2 b0 (n+1) (components 1,3) and no spurious
// top-level modes.
struct TruncationScheme {
  int n_levels = 1;
  int m_cut = 2;
  AxialGrid grid{12.0, 128};
  int dim_cap = 20000;

  int levels_for_spinor(int s) const {
    return (s == 0 || s == 2) ? n_levels : n_levels - 1;
  }
  int total_dim() const {
    return (4 * n_levels - 2) * m_cut * grid.n;
  }
  void validate() const {
    DIRAC_REQUIRE(n_levels >= 1 && m_cut >= 1, "TruncationScheme: cutoffs >= 1");
    grid.validate();
    DIRAC_REQUIRE(total_dim() <= dim_cap,
                  "TruncationScheme: total dimension " +
                      std::to_string(total_dim()) + " exceeds cap " +
                      std::to_string(dim_cap));
  }
};

enum class OperatorRole { Free, Potential, Resolvent, Projector };

struct OperatorMatrix {
  Matrix mat;
  OperatorRole role = OperatorRole::Free;
};

// Shared discretization state: Landau basis, axial spectral operators and
// the flat index maps. Row/column index = ts * N + j where ts enumerates
// (spinor, level, angular) and j is the axial node.
class Discretization {
 public:
  Discretization(const ModelParams& params, const TruncationScheme& trunc);

  const ModelParams& params() const { return params_; }
  const TruncationScheme& trunc() const { return trunc_; }
  const LandauBasis& landau() const { return landau_; }
  const AxialOperators& axial() const { return axial_; }

  int ts_count() const { return ts_total_; }
  int total_dim() const { return ts_total_ * trunc_.grid.n; }
  int ts_index(int s, int n, int m) const;
  // inverse map
  struct TsLabel { int s, n, m; };
  const TsLabel& ts_label(int ts) const { return labels_[ts]; }

  Matrix assemble_free() const;

  // Transverse-spinor factor of |V|^{1/2} (no phase): entries
  // sqrt(eps |Phi|) * (S^{1/2})_{s s'} * <psi_{n m}, w_perp^{1/2} psi_{n' m'}>.
  // The full factor is B (x) diag(g^{1/2}(x_j)); J~|V|^{1/2} adds e^{i Arg Phi}.
  Matrix sqrt_v_transverse(const PotentialSpec& spec) const;

  // Potential matrix realized as the product (J~|V|^{1/2})(|V|^{1/2}) of the
  // projected factors, so the Birman-Schwinger determinant and the direct
  // eigenproblem agree exactly on the truncated model.
  Matrix assemble_potential(const PotentialSpec& spec) const;

  // Threshold projector mask: true for (s in {0,2}, n = 0).
  bool in_threshold_block(int ts) const;
  Matrix projector_p() const;  // dense P
  Matrix projector_q() const;  // dense I - P

 private:
  ModelParams params_;
  TruncationScheme trunc_;
  LandauBasis landau_;
  AxialOperators axial_;
  std::vector<TsLabel> labels_;
  std::vector<int> ts_of_snm_;  // lookup
  int ts_total_ = 0;
};

OperatorMatrix assemble_free(const ModelParams& params,
                             const Discretization& disc);
OperatorMatrix assemble_potential(const PotentialSpec& spec,
                                  const Discretization& disc);

// Dense non-Hermitian eigensolve; eigenvalues inside the disc
// |z - center| < radius, clustered into multiplicities within cluster_tol.
struct SpectrumEntry {
  Complex z;
  int multiplicity;
};
std::vector<SpectrumEntry> direct_spectrum(const Matrix& op, Complex center,
                                           double radius,
                                           double cluster_tol = 1e-8);

// (P, Q) pair per the threshold block structure, verified against the free
// operator: commutation, P-block spectrum reaching +-m, Q-gap
// sqrt(m^2 + 2 b0). A mismatch is a representation error (hard throw).
std::pair<OperatorMatrix, OperatorMatrix> projectors(const ModelParams& params,
                                                     const Discretization& disc);

// Lower bound on dist(z, numerical range) by support-function sampling:
// max over directions of -lambda_max(Re(e^{i theta}(A - z))), refined
// around the best direction; clamped at 0.
double numerical_range_distance(const Matrix& a, Complex z,
                                int coarse_samples = 72);

}  // namespace dirac
