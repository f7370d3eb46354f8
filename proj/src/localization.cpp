#include "dirac/localization.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>

#include "dirac/linalg.hpp"

namespace dirac {

Complex z_of_k(Complex k, int sign_m, double mass) {
  DIRAC_REQUIRE(sign_m == 1 || sign_m == -1, "z_of_k: sign_m must be +-1");
  DIRAC_REQUIRE(k != Complex(1, 0) && k != Complex(-1, 0), "z_of_k: k = +-1");
  const double mt = sign_m * mass;
  return mt * (1.0 + k * k) / (1.0 - k * k);
}

Complex k_of_z(Complex z, int sign_m, double mass) {
  DIRAC_REQUIRE(sign_m == 1 || sign_m == -1, "k_of_z: sign_m must be +-1");
  const double mt = sign_m * mass;
  const Complex psi = (z - mt) / (z + mt);
  DIRAC_REQUIRE(!(psi.imag() == 0.0 && psi.real() >= 0.0),
                "k_of_z: z maps onto the branch cut (essential spectrum)");
  Complex k = branch_sqrt(psi);
  if (k.real() < 0.0) k = -k;
  return k;
}

KPoint make_kpoint(Complex k, int sign_m, double mass) {
  KPoint p;
  p.k = k;
  p.sign_m = sign_m;
  p.z = z_of_k(k, sign_m, mass);
  p.half_plane = (k.imag() > 0.0) ? +1 : (k.imag() < 0.0 ? -1 : 0);
  return p;
}

bool SectorSpec::contains(Complex k) const {
  if (half_plane != 0) {
    if (!(k.real() > 0.0)) return false;
    if (half_plane > 0 && !(k.imag() > 0.0)) return false;
    if (half_plane < 0 && !(k.imag() < 0.0)) return false;
  }
  const Complex kt = k / rotation;
  switch (kind) {
    case Kind::Cone:
      return -delta * j_sign * kt.imag() <= std::abs(kt.real());
    case Kind::GammaBand:
      return kt.real() > r_lo && kt.real() < r_hi &&
             std::abs(kt.imag()) < delta * kt.real();
    case Kind::LambdaBand:
      return kt.real() >= r_lo && kt.real() <= r_hi &&
             std::abs(kt.imag()) <= delta * kt.real();
    case Kind::Annulus: {
      const double a = std::abs(kt);
      return a > r_lo && a < r_hi && std::abs(kt.real()) > std::sqrt(nu) &&
             std::abs(kt.imag()) > std::sqrt(nu);
    }
  }
  return false;
}

double SectorSpec::boundary_distance(Complex k) const {
  const Complex kt = k / rotation;
  switch (kind) {
    case Kind::Cone:
      return std::abs(std::abs(kt.real()) + delta * j_sign * kt.imag()) /
             std::sqrt(1.0 + delta * delta);
    case Kind::GammaBand:
    case Kind::LambdaBand: {
      const double dx = std::min(std::abs(kt.real() - r_lo),
                                 std::abs(r_hi - kt.real()));
      const double dy = std::abs(delta * kt.real() - std::abs(kt.imag())) /
                        std::sqrt(1.0 + delta * delta);
      return std::min(dx, dy);
    }
    case Kind::Annulus: {
      const double a = std::abs(kt);
      double d = std::min(std::abs(a - r_lo), std::abs(r_hi - a));
      d = std::min(d, std::abs(std::abs(kt.real()) - std::sqrt(nu)));
      d = std::min(d, std::abs(std::abs(kt.imag()) - std::sqrt(nu)));
      return d;
    }
  }
  return 0.0;
}

namespace {

Contour box_contour(Complex lo, Complex hi, int nodes_per_side) {
  return Contour::rectangle(lo, hi, nodes_per_side);
}

struct Box {
  Complex lo, hi;
  int winding = -1;
  double size() const { return std::max(hi.real() - lo.real(), hi.imag() - lo.imag()); }
};

}  // namespace

FindZerosResult find_zeros_logf(const std::function<Complex(Complex)>& log_f,
                                const SearchRegion& region,
                                const FindZerosOptions& opt) {
  FindZerosResult result;
  long evals = 0;
  auto counted_log_f = [&](Complex k) {
    ++evals;
    DIRAC_REQUIRE(evals <= opt.max_evaluations,
                  "find_zeros: evaluation budget exhausted");
    return log_f(k);
  };
  WindingOptions wopt;
  wopt.integer_tol = 1e-3;

  auto winding_of = [&](const Box& b) -> std::optional<int> {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double pad = attempt * opt.tol / 10.0;
      try {
        return winding_number(
            counted_log_f,
            box_contour(b.lo - Complex(pad, pad), b.hi + Complex(pad, pad),
                        opt.boundary_nodes),
            wopt);
      } catch (const ContourUnsafe&) {
        continue;  // zero pinched on the boundary: pad and retry
      }
    }
    return std::nullopt;
  };

  // Newton refinement on d(log f)/dk with multiplicity-aware steps.
  // Returns the refined point only when the iteration demonstrably
  // converged (nearby poles of log f' can stall it, e.g. the free
  // operator's real spectrum next to a determinant zero).
  struct Refined {
    Complex k;
    bool converged;
  };
  auto refine = [&](Complex k0, int mult, double box_size) -> Refined {
    Complex k = k0;
    double step_size = box_size;
    for (int it = 0; it < 40; ++it) {
      const double h = std::max(1e-9, 1e-3 * step_size);
      const Complex lp = counted_log_f(k + h);
      const Complex lm = counted_log_f(k - h);
      Complex dphase((lp.real() - lm.real()) / (2 * h), 0.0);
      dphase.imag(std::remainder(lp.imag() - lm.imag(), 2.0 * kPi) / (2 * h));
      if (std::abs(dphase) < 1e-14) return {k, false};
      const Complex step = -double(mult) / dphase;
      if (std::abs(step) > 2.0 * box_size) return {k, false};
      k += step;
      step_size = std::abs(step);
      if (step_size < 0.5 * opt.tol) return {k, true};
    }
    return {k, false};
  };

  std::deque<Box> queue;
  queue.push_back({region.lo, region.hi, -1});
  while (!queue.empty()) {
    Box b = queue.front();
    queue.pop_front();
    auto w = winding_of(b);
    if (!w) {
      result.unresolved.push_back({b.lo, b.hi});
      continue;
    }
    if (*w == 0) continue;
    if (*w < 0) {
      // tracking failure (a pole slipped in or phase aliasing): unresolved
      result.unresolved.push_back({b.lo, b.hi});
      continue;
    }
    const double size = b.size();
    if (*w > opt.w_max && size <= opt.tol) {
      result.unresolved.push_back({b.lo, b.hi});
      continue;
    }
    if (*w <= opt.w_max && (*w == 1 || size <= opt.tol)) {
      const Complex center = 0.5 * (b.lo + b.hi);
      Refined ref = refine(center, *w, size);
      const bool in_box =
          ref.k.real() >= b.lo.real() && ref.k.real() <= b.hi.real() &&
          ref.k.imag() >= b.lo.imag() && ref.k.imag() <= b.hi.imag();
      if ((ref.converged && in_box) || size <= opt.tol) {
        const Complex k = (ref.converged && in_box) ? ref.k : center;
        ZeroRecord rec;
        rec.point.k = k;
        rec.multiplicity = *w;
        rec.box_lo = b.lo;
        rec.box_hi = b.hi;
        const Complex lf = counted_log_f(k);
        rec.residual = std::exp(std::min(700.0, lf.real()));
        result.zeros.push_back(rec);
        result.total_winding += *w;
        continue;
      }
      // Newton not certified: keep subdividing towards its basin
    }
    // subdivide; shift the split lines if a zero sits on them, and insist
    // the children's windings add up to the parent's
    bool placed = false;
    for (double fr : {0.5, 0.43, 0.57, 0.35, 0.65}) {
      const double mx = b.lo.real() + fr * (b.hi.real() - b.lo.real());
      const double my = b.lo.imag() + fr * (b.hi.imag() - b.lo.imag());
      Box children[4] = {
          {b.lo, Complex(mx, my)},
          {Complex(mx, b.lo.imag()), Complex(b.hi.real(), my)},
          {Complex(b.lo.real(), my), Complex(mx, b.hi.imag())},
          {Complex(mx, my), b.hi}};
      int sum = 0;
      bool ok = true;
      std::array<int, 4> wc{};
      for (int c = 0; c < 4 && ok; ++c) {
        auto wcv = winding_of(children[c]);
        if (!wcv) {
          ok = false;
          break;
        }
        wc[c] = *wcv;
        sum += *wcv;
      }
      if (ok && sum == *w) {
        for (int c = 0; c < 4; ++c)
          if (wc[c] > 0) queue.push_back({children[c].lo, children[c].hi, wc[c]});
        placed = true;
        break;
      }
    }
    if (!placed) result.unresolved.push_back({b.lo, b.hi});
  }
  result.evaluations = evals;
  return result;
}

FindZerosResult find_zeros(const BSAssembler& bs, int sign_m,
                           const SearchRegion& region, BSBackend backend,
                           const FindZerosOptions& opt, AxialResolventMode mode) {
  DIRAC_REQUIRE(region.hi.real() > region.lo.real() &&
                    region.hi.imag() > region.lo.imag(),
                "find_zeros: degenerate region");
  const bool upper = region.lo.imag() > 0.0;
  const bool lower = region.hi.imag() < 0.0;
  DIRAC_REQUIRE(upper || lower,
                "find_zeros: region must stay inside one open half-disc "
                "(the real-k axis maps to the essential spectrum)");
  const double mass = bs.params().mass;
  auto log_f = [&](Complex k) { return bs.log_det(z_of_k(k, sign_m, mass), backend, mode); };
  FindZerosResult res = find_zeros_logf(log_f, region, opt);
  for (ZeroRecord& rec : res.zeros) {
    rec.point = make_kpoint(rec.point.k, sign_m, mass);
    // residual of the regularized determinant at the refined point
    BSBackend rb = backend;
    Matrix t = (rb == BSBackend::Kernel)
                   ? bs.bs_operator(rec.point.z, rb, mode).t
                   : bs.bs_operator(rec.point.z, rb).t;
    rec.residual = std::abs(det_reg(-t, opt.q_reg));
  }
  return res;
}

int counting_function(const std::vector<ZeroRecord>& zeros,
                      const std::function<bool(Complex)>& omega) {
  int n = 0;
  for (const auto& z : zeros)
    if (omega(z.point.z)) n += z.multiplicity;
  return n;
}

namespace {

// Scan both half-discs of D_*(eps_k), staying an inner exclusion away from
// the axes, and concatenate the zero lists.
FindZerosResult scan_half_discs(const BSAssembler& bs, int sign_m,
                                const KDomainParams& dom,
                                const FindZerosOptions& opt, BSBackend backend,
                                AxialResolventMode mode, bool upper, bool lower) {
  const double r_in = std::max(1e-3, opt.axis_standoff_frac) * dom.eps_k;
  FindZerosResult all;
  if (upper) {
    SearchRegion reg{Complex(0.0, r_in), Complex(dom.eps_k, dom.eps_k)};
    FindZerosResult r = find_zeros(bs, sign_m, reg, backend, opt, mode);
    all.zeros.insert(all.zeros.end(), r.zeros.begin(), r.zeros.end());
    all.unresolved.insert(all.unresolved.end(), r.unresolved.begin(),
                          r.unresolved.end());
    all.evaluations += r.evaluations;
    all.total_winding += r.total_winding;
  }
  if (lower) {
    SearchRegion reg{Complex(0.0, -dom.eps_k), Complex(dom.eps_k, -r_in)};
    FindZerosResult r = find_zeros(bs, sign_m, reg, backend, opt, mode);
    all.zeros.insert(all.zeros.end(), r.zeros.begin(), r.zeros.end());
    all.unresolved.insert(all.unresolved.end(), r.unresolved.begin(),
                          r.unresolved.end());
    all.evaluations += r.evaluations;
    all.total_winding += r.total_winding;
  }
  // drop records outside the pointed disc |k| < eps_k
  std::vector<ZeroRecord> kept;
  for (auto& z : all.zeros)
    if (std::abs(z.point.k) < dom.eps_k && std::abs(z.point.k) > r_in)
      kept.push_back(z);
  all.zeros = std::move(kept);
  return all;
}

}  // namespace

AnnulusScanReport annulus_upper_bound_scan(const BSAssembler& bs, int sign_m,
                                           const std::vector<double>& r_values,
                                           const KDomainParams& dom,
                                           const FindZerosOptions& opt) {
  const double vnorm =
      bs.spec().epsilon * bs.spec().abs_phi() * bs.spec().max_w();
  DIRAC_REQUIRE(vnorm < bs.params().mass,
                "annulus scan: requires ||V|| < m");
  AnnulusScanReport rep;
  FindZerosResult scan = scan_half_discs(bs, sign_m, dom, opt,
                                         BSBackend::Kernel,
                                         AxialResolventMode::ContinuumKernel,
                                         true, true);
  rep.zeros = scan.zeros;
  // Toeplitz trace side
  LLLBasis lll(bs.params().b0, bs.disc().trunc().m_cut);
  Matrix toep = toeplitz_matrix_radial(
      vm_profile(bs.spec(), sign_m, ProfileWeighting::V), lll);
  RealVector mu = linalg::eigenvalues_hermitian(toep);
  std::vector<double> mu_desc(mu.data(), mu.data() + mu.size());
  std::sort(mu_desc.rbegin(), mu_desc.rend());

  bool first = true;
  for (double r : r_values) {
    AnnulusScanRow row;
    row.r = r;
    const double nu = dom.nu_gap > 0 ? r * r / 100.0 : r * r / 100.0;
    rep.nu_used = nu;
    SectorSpec annulus;
    annulus.kind = SectorSpec::Kind::Annulus;
    annulus.r_lo = r;
    annulus.r_hi = 2.0 * r;
    annulus.nu = nu;
    int count = 0;
    for (const auto& z : scan.zeros)
      if (annulus.contains(z.point.k)) count += z.multiplicity;
    row.count = count;
    row.trace_above = 0;
    for (double m : mu_desc)
      if (m > r) ++row.trace_above;
    const double rhs = row.trace_above * std::abs(std::log(r)) + 1.0;
    if (first) {
      rep.c_fit = std::max(1.0, count / rhs);
      first = false;
    }
    row.bound = rep.c_fit * rhs;
    row.bound_ok = count <= row.bound + 1e-12;
    rep.all_ok = rep.all_ok && row.bound_ok;
    rep.rows.push_back(row);
  }
  return rep;
}

SectorCheckReport sector_absence_check(
    const ModelParams& params, const TruncationScheme& trunc,
    const PotentialSpec& spec, const KDomainParams& dom, int sign_m,
    double eps_hi, int bisection_steps, const FindZerosOptions& opt) {
  SectorCheckReport rep;
  rep.sign_m = sign_m;
  const double arg_phi = std::arg(spec.phi);
  DIRAC_REQUIRE(arg_phi != 0.0 && std::abs(arg_phi) < kPi,
                "sector check: Arg Phi must lie in (0,pi) or -(0,pi)");
  const bool upper_variant = arg_phi > 0.0;
  // sector Phi C_delta(J) (upper variant) or -Phi C_delta(J) (lower)
  rep.sector.kind = SectorSpec::Kind::Cone;
  rep.sector.delta = dom.delta;
  rep.sector.j_sign = spec.sign_j;
  rep.sector.rotation = upper_variant ? spec.phi : -spec.phi;
  rep.sector.half_plane = upper_variant ? +1 : -1;

  auto run_once = [&](double eps) {
    PotentialSpec s = spec;
    s.epsilon = eps;
    BSAssembler bs(params, trunc, s);
    FindZerosResult scan = scan_half_discs(
        bs, sign_m, dom, opt, BSBackend::Kernel,
        AxialResolventMode::ContinuumKernel, upper_variant, !upper_variant);
    int count = 0;
    std::vector<ZeroRecord> offenders;
    for (auto& z : scan.zeros)
      if (rep.sector.contains(z.point.k)) {
        z.near_sector_boundary =
            rep.sector.boundary_distance(z.point.k) < opt.tol;
        count += z.multiplicity;
        offenders.push_back(z);
      }
    return std::make_tuple(count, offenders, scan.unresolved);
  };

  // bisect for the largest coupling with an empty sector
  double lo = 0.0, hi = eps_hi;
  double best_pass = 0.0;
  for (int it = 0; it <= bisection_steps; ++it) {
    const double eps = (it == 0) ? eps_hi : 0.5 * (lo + hi);
    auto [count, offenders, unresolved] = run_once(eps);
    const bool ok = (count == 0) && unresolved.empty();
    if (ok) {
      best_pass = std::max(best_pass, eps);
      lo = eps;
      if (it == 0) break;  // already empty at the top of the range
    } else {
      hi = eps;
    }
  }
  rep.eps0_empirical = best_pass;
  rep.eps_used = 0.5 * best_pass;
  auto [count, offenders, unresolved] = run_once(rep.eps_used);
  rep.zero_count = count;
  rep.offenders = offenders;
  rep.unresolved = unresolved;
  rep.pass = (count == 0) && unresolved.empty();
  return rep;
}

ClusterCheckReport cluster_lower_bound_check(const BSAssembler& bs, int sign_m,
                                             const KDomainParams& dom,
                                             int ell_max,
                                             const FindZerosOptions& opt) {
  ClusterCheckReport rep;
  rep.sign_m = sign_m;
  const PotentialSpec& spec = bs.spec();
  const double arg_phi = spec.arg_phi();
  const double eps = spec.epsilon;
  DIRAC_REQUIRE(eps > 0.0, "cluster check: coupling must be positive");
  // accumulation axis angle about the threshold
  rep.axis_angle = (arg_phi > 0) ? 2.0 * arg_phi - kPi : 2.0 * arg_phi + kPi;

  // gap radii of the bare-profile Toeplitz spectrum
  LLLBasis lll(bs.params().b0, bs.disc().trunc().m_cut);
  Matrix toep = toeplitz_matrix_radial(
      vm_profile(spec, sign_m, ProfileWeighting::W), lll);
  RealVector mu = linalg::eigenvalues_hermitian(toep);
  std::vector<double> mu_desc(mu.data(), mu.data() + mu.size());
  std::sort(mu_desc.rbegin(), mu_desc.rend());
  rep.toeplitz = gap_radii(mu_desc, dom.nu_gap, ell_max + 2);
  DIRAC_REQUIRE(static_cast<int>(rep.toeplitz.radii.size()) >= ell_max + 1,
                "cluster check: not enough qualifying gaps; raise M or lower "
                "nu_gap");

  const Complex rot = -kI * double(spec.sign_j) * (spec.phi / std::abs(spec.phi));
  const bool upper = (arg_phi > 0.0);
  std::vector<double> angles;
  for (int ell = 0; ell <= ell_max; ++ell) {
    ClusterBandRow row;
    row.ell = ell;
    row.r_hi = rep.toeplitz.radii[ell];
    row.r_lo = rep.toeplitz.radii[ell + 1];
    row.trace_band = trace_in_band(rep.toeplitz, row.r_lo, row.r_hi);
    SectorSpec band;
    band.kind = SectorSpec::Kind::GammaBand;
    band.delta = dom.delta;
    band.r_lo = eps * row.r_lo;
    band.r_hi = eps * row.r_hi;
    band.rotation = rot;
    band.half_plane = upper ? +1 : -1;
    // bounding rectangle of the rotated wedge
    const double theta = std::arg(rot);
    const double spread = std::atan(dom.delta);
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (double rr : {band.r_lo / std::cos(spread), band.r_hi / std::cos(spread),
                      band.r_lo, band.r_hi})
      for (double th : {theta - spread, theta, theta + spread}) {
        xmin = std::min(xmin, rr * std::cos(th));
        xmax = std::max(xmax, rr * std::cos(th));
        ymin = std::min(ymin, rr * std::sin(th));
        ymax = std::max(ymax, rr * std::sin(th));
      }
    const double pad = 0.1 * (xmax - xmin);
    const double floor_y = 1e-4 * dom.eps_k;
    SearchRegion reg{Complex(std::max(0.0, xmin - pad),
                             upper ? std::max(floor_y, ymin - pad)
                                   : ymin - pad),
                     Complex(xmax + pad, upper ? ymax + pad
                                               : std::min(-floor_y, ymax + pad))};
    FindZerosResult scan = find_zeros(bs, sign_m, reg, BSBackend::Kernel, opt,
                                      AxialResolventMode::ContinuumKernel);
    row.inconclusive = !scan.unresolved.empty();
    row.zero_count = 0;
    for (auto& z : scan.zeros)
      if (band.contains(z.point.k)) {
        z.near_sector_boundary = band.boundary_distance(z.point.k) < opt.tol;
        row.zero_count += z.multiplicity;
        row.zeros.push_back(z);
        const double mt = sign_m * bs.params().mass;
        angles.push_back(std::arg(z.point.z - mt));
      }
    row.satisfied = !row.inconclusive && row.zero_count >= row.trace_band;
    rep.rows.push_back(row);
  }
  if (!angles.empty()) {
    std::sort(angles.begin(), angles.end());
    rep.median_angle = angles[angles.size() / 2];
    rep.angle_ok = std::abs(std::remainder(rep.median_angle - rep.axis_angle,
                                           2.0 * kPi)) <= 2.0 * dom.delta;
  }
  return rep;
}

EquivalenceReport bs_equivalence_check(const BSAssembler& bs, int sign_m,
                                       const KDomainParams& dom,
                                       const FindZerosOptions& opt) {
  EquivalenceReport rep;
  const double mass = bs.params().mass;
  const double mt = sign_m * mass;

  // direct eigensolve, filtered to the scanned image region
  const double standoff = std::max(1e-3, opt.axis_standoff_frac) * dom.eps_k;
  auto spectrum = direct_spectrum(bs.full_matrix(), Complex(mt, 0.0), dom.eta);
  std::vector<SpectrumEntry> direct;
  for (const auto& e : spectrum) {
    if (std::abs(e.z.imag()) < 1e-9) continue;  // non-real only
    const Complex k = k_of_z(e.z, sign_m, mass);
    if (std::abs(k) >= dom.eps_k || std::abs(k) <= standoff) continue;
    if (std::abs(k.imag()) <= standoff) continue;  // outside the scanned strips
    direct.push_back(e);
  }

  FindZerosResult scan =
      scan_half_discs(bs, sign_m, dom, opt, BSBackend::MatrixSolve,
                      AxialResolventMode::Spectral, true, true);

  std::vector<bool> used(scan.zeros.size(), false);
  const double match_tol = 1e-6 * mass;
  for (const auto& d : direct) {
    int best = -1;
    double bestdist = match_tol;
    for (size_t i = 0; i < scan.zeros.size(); ++i) {
      if (used[i]) continue;
      const double dist = std::abs(scan.zeros[i].point.z - d.z);
      if (dist < bestdist) {
        bestdist = dist;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0 && scan.zeros[best].multiplicity == d.multiplicity) {
      used[best] = true;
      rep.matched.push_back(
          {d.z, scan.zeros[best].point.z, d.multiplicity,
           scan.zeros[best].multiplicity});
      rep.max_distance = std::max(rep.max_distance, bestdist);
    } else {
      rep.unmatched_direct.push_back(d);
    }
  }
  for (size_t i = 0; i < scan.zeros.size(); ++i)
    if (!used[i]) rep.unmatched_zeros.push_back(scan.zeros[i]);
  rep.pass = rep.unmatched_direct.empty() && rep.unmatched_zeros.empty() &&
             !rep.matched.empty();
  return rep;
}

}  // namespace dirac
