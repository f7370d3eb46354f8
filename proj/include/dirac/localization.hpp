#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dirac/bs.hpp"
#include "dirac/det_index.hpp"
#include "dirac/landau.hpp"

namespace dirac {

// Threshold parametrization z = m~ (1 + k^2)/(1 - k^2), k^2 = (z - m~)/(z + m~).
Complex z_of_k(Complex k, int sign_m, double mass);
// Inverse through the branch root, reflected to Re(k) >= 0.
Complex k_of_z(Complex z, int sign_m, double mass);

struct KPoint {
  Complex k;
  int sign_m;
  Complex z;
  int half_plane;  // +1: upper half-disc, -1: lower
};

KPoint make_kpoint(Complex k, int sign_m, double mass);

// k-plane sectors used by the localization statements. `rotation` maps the
// base set S to rotation * S (membership tests k / rotation).
struct SectorSpec {
  enum class Kind { Cone, GammaBand, LambdaBand, Annulus };
  Kind kind = Kind::Cone;
  double delta = 0.2;   // aperture (Cone, GammaBand, LambdaBand)
  int j_sign = +1;      // J for the cone
  double r_lo = 0.0, r_hi = 0.0;  // radial band (GammaBand/LambdaBand/Annulus)
  double nu = 0.0;      // annulus axis exclusion
  Complex rotation{1.0, 0.0};
  int half_plane = 0;   // 0: no restriction; +-1 intersect with D_+-*

  bool contains(Complex k) const;
  // approximate distance to the sector boundary (for flagging points)
  double boundary_distance(Complex k) const;
};

struct ZeroRecord {
  KPoint point;
  int multiplicity = 1;
  double residual = 0.0;       // |det_q(I + T)| at the refined point
  Complex box_lo, box_hi;      // isolating box
  bool near_sector_boundary = false;
};

struct SearchRegion {
  Complex lo, hi;              // axis-aligned rectangle in k
};

struct FindZerosOptions {
  double tol = 1e-7;           // smallest box size / refinement target
  int w_max = 4;               // max winding accepted in a terminal box
  int max_evaluations = 2000000;
  int boundary_nodes = 8;      // initial nodes per box side
  double q_reg = 4.0;          // regularization order for reported residuals
  // Half-disc scans keep this fraction of eps_k away from the real-k axis:
  // z(k) meets the essential spectrum there and the model's near-real
  // eigenvalue strings make phase tracking adversarial.
  double axis_standoff_frac = 0.02;
};

struct FindZerosResult {
  std::vector<ZeroRecord> zeros;
  std::vector<SearchRegion> unresolved;
  long evaluations = 0;
  int total_winding = 0;
};

// Adaptive rectangle subdivision driven by boundary winding of exp(log_f).
FindZerosResult find_zeros_logf(const std::function<Complex(Complex)>& log_f,
                                const SearchRegion& region,
                                const FindZerosOptions& opt);

// Determinant-zero search for the Birman-Schwinger family at threshold
// sign_m. The region must lie in one open half-disc (the search cannot
// cross the real-k axis, where z(k) meets the essential spectrum).
FindZerosResult find_zeros(const BSAssembler& bs, int sign_m,
                           const SearchRegion& region, BSBackend backend,
                           const FindZerosOptions& opt = {},
                           AxialResolventMode mode =
                               AxialResolventMode::ContinuumKernel);

// Counting function: total multiplicity of zeros whose z lies in omega.
int counting_function(const std::vector<ZeroRecord>& zeros,
                      const std::function<bool(Complex)>& omega);

// ---- theorem-check pipelines ----

// Upper-bound scan over shrinking annuli: counts against
// C_fit (Tr 1_{(r,inf)}(pV p) |ln r| + 1) with C_fit frozen at the largest r.
struct AnnulusScanRow {
  double r;
  int count;          // multiplicities in the annulus pair of half-discs
  int trace_above;
  double bound;       // C_fit (trace |ln r| + 1)
  bool bound_ok;
};
struct AnnulusScanReport {
  std::vector<AnnulusScanRow> rows;
  double c_fit = 0.0;
  double nu_used = 0.0;
  std::vector<ZeroRecord> zeros;
  bool all_ok = true;
};
AnnulusScanReport annulus_upper_bound_scan(const BSAssembler& bs, int sign_m,
                                           const std::vector<double>& r_values,
                                           const KDomainParams& dom,
                                           const FindZerosOptions& opt = {});

// Absence-of-eigenvalues check in the rotated cone (empirical coupling
// threshold by bisection on "the sector scan finds no zeros").
struct SectorCheckReport {
  bool pass = false;
  int zero_count = 0;
  double eps_used = 0.0;
  double eps0_empirical = 0.0;
  int sign_m = +1;
  std::vector<ZeroRecord> offenders;
  std::vector<SearchRegion> unresolved;
  SectorSpec sector;
};
SectorCheckReport sector_absence_check(
    const ModelParams& params, const TruncationScheme& trunc,
    const PotentialSpec& spec, const KDomainParams& dom, int sign_m,
    double eps_hi, int bisection_steps, const FindZerosOptions& opt = {});

// Cluster lower bounds per gap band: zero count (with multiplicity) in the
// rotated band -iJ Phi Gamma^delta(eps r_{l+1}, eps r_l) against the band
// trace of pWp, plus the accumulation-axis spread of the zeros.
struct ClusterBandRow {
  int ell;
  double r_hi, r_lo;            // gap radii (unscaled)
  int trace_band;
  int zero_count;
  bool inconclusive = false;    // unresolved regions overlapped the band
  bool satisfied = false;
  std::vector<ZeroRecord> zeros;
};
struct ClusterCheckReport {
  std::vector<ClusterBandRow> rows;
  double median_angle = 0.0;     // median arg(z - m~) over all band zeros
  double axis_angle = 0.0;       // 2 Arg Phi -+ pi
  bool angle_ok = false;
  ToeplitzSpectrum toeplitz;
  int sign_m = +1;
};
ClusterCheckReport cluster_lower_bound_check(const BSAssembler& bs, int sign_m,
                                             const KDomainParams& dom,
                                             int ell_max,
                                             const FindZerosOptions& opt = {});

// Backend-equivalence check: non-real eigenvalues of the dense model inside
// the scanned image region versus determinant zeros, matched bijectively
// with equal multiplicities.
struct EquivalenceReport {
  struct Pair {
    Complex z_direct, z_zero;
    int mult_direct, mult_zero;
  };
  std::vector<Pair> matched;
  std::vector<SpectrumEntry> unmatched_direct;
  std::vector<ZeroRecord> unmatched_zeros;
  double max_distance = 0.0;
  bool pass = false;
};
EquivalenceReport bs_equivalence_check(const BSAssembler& bs, int sign_m,
                                       const KDomainParams& dom,
                                       const FindZerosOptions& opt = {});

}  // namespace dirac
