#include "dirac/landau.hpp"
#include <sstream>

#include <algorithm>
#include <cmath>

namespace dirac {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton on Legendre polynomials.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

// Polynomial in (w, wbar) as a coefficient matrix c(i,j) <-> w^i wbar^j.
using Poly = Matrix;

Poly apply_raise_level(const Poly& f, double b0) {
  // a^dagger: f -> (-2i/sqrt(2 b0)) (df/dw - (b0/2) wbar f)
  const int ni = static_cast<int>(f.rows()), nj = static_cast<int>(f.cols());
  Poly g = Poly::Zero(ni + 1, nj + 1);
  const Complex pref = -2.0 * kI / std::sqrt(2.0 * b0);
  for (int i = 0; i < ni; ++i)
    for (int j = 0; j < nj; ++j) {
      if (f(i, j) == Complex(0, 0)) continue;
      if (i >= 1) g(i - 1, j) += pref * double(i) * f(i, j);
      g(i, j + 1) += pref * (-0.5 * b0) * f(i, j);
    }
  return g;
}

Poly apply_raise_angular(const Poly& f, double b0) {
  // b^dagger: f -> (-2i/sqrt(2 b0)) (df/dwbar - (b0/2) w f)
  const int ni = static_cast<int>(f.rows()), nj = static_cast<int>(f.cols());
  Poly g = Poly::Zero(ni + 1, nj + 1);
  const Complex pref = -2.0 * kI / std::sqrt(2.0 * b0);
  for (int i = 0; i < ni; ++i)
    for (int j = 0; j < nj; ++j) {
      if (f(i, j) == Complex(0, 0)) continue;
      if (j >= 1) g(i, j - 1) += pref * double(j) * f(i, j);
      g(i + 1, j) += pref * (-0.5 * b0) * f(i, j);
    }
  return g;
}

Complex eval_poly(const Poly& f, double r, double theta) {
  // sum_ij c(i,j) r^{i+j} e^{i (i-j) theta}
  Complex acc(0, 0);
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j) {
      if (f(i, j) == Complex(0, 0)) continue;
      acc += f(i, j) * std::pow(r, i + j) *
             std::exp(kI * double(i - j) * theta);
    }
  return acc;
}

}  // namespace

TransverseQuadrature make_transverse_quadrature(double b0, int n_levels,
                                                int m_cut, double force_break) {
  DIRAC_REQUIRE(b0 > 0 && n_levels >= 1 && m_cut >= 1,
                "transverse quadrature: bad cutoffs");
  const int maxdeg = 2 * (n_levels + m_cut + 2);
  // Endpoint T in tau = (b0/2) t units: tail of tau^d e^{-tau} relative to
  // Gamma(d+1) below 1e-21.
  double tau_max = maxdeg + 20.0;
  const double lg = std::lgamma(maxdeg + 1.0);
  while (maxdeg * std::log(tau_max) - tau_max > lg - 48.0) tau_max += 10.0;
  const double T = 2.0 * tau_max / b0;
  TransverseQuadrature q;
  // Panels of tau-width ~2 keep 10-point Gauss-Legendre at machine accuracy
  // for tau^maxdeg e^{-tau} integrands.
  const int per_panel = 10;
  std::vector<double> gx, gw;
  gauss_legendre(per_panel, gx, gw);
  std::vector<double> breaks;
  breaks.push_back(0.0);
  if (force_break > 0.0 && force_break < T) breaks.push_back(force_break);
  breaks.push_back(T);
  for (size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double lo = breaks[b], hi = breaks[b + 1];
    const int np = std::max(4, static_cast<int>(std::ceil((hi - lo) * b0 / 4.0)));
    const double ph = (hi - lo) / np;
    for (int p = 0; p < np; ++p) {
      const double a = lo + p * ph, c = a + 0.5 * ph;
      for (int g = 0; g < per_panel; ++g) {
        q.t_nodes.push_back(c + 0.5 * ph * gx[g]);
        q.t_weights.push_back(0.5 * ph * gw[g]);
      }
    }
  }
  q.n_theta = 2 * (n_levels + m_cut) + 9;
  return q;
}

LandauBasis::LandauBasis(double b0, int n_levels, int m_cut,
                         const TransverseQuadrature& quad)
    : b0_(b0), n_levels_(n_levels), m_cut_(m_cut), quad_(quad) {
  DIRAC_REQUIRE(b0 > 0.0 && n_levels >= 1 && m_cut >= 1,
                "LandauBasis: need b0 > 0, cutoffs >= 1");
  // Generate polynomial factors: ground state, then ladder actions with
  // the incremental normalizations 1/sqrt(m), 1/sqrt(n).
  std::vector<std::vector<Poly>> f(n_levels, std::vector<Poly>(m_cut));
  f[0][0] = Poly::Zero(1, 1);
  f[0][0](0, 0) = std::sqrt(b0 / (2.0 * kPi));
  for (int m = 1; m < m_cut; ++m)
    f[0][m] = apply_raise_angular(f[0][m - 1], b0) / std::sqrt(double(m));
  for (int n = 1; n < n_levels; ++n)
    for (int m = 0; m < m_cut; ++m)
      f[n][m] = apply_raise_level(f[n - 1][m], b0) / std::sqrt(double(n));
  polys_.resize(state_count());
  for (int n = 0; n < n_levels; ++n)
    for (int m = 0; m < m_cut; ++m) polys_[state_index(n, m)] = f[n][m];

  const int nr = static_cast<int>(quad_.t_nodes.size());
  values_.resize(state_count(), nr * quad_.n_theta);
  for (int n = 0; n < n_levels; ++n)
    for (int m = 0; m < m_cut; ++m) {
      const int row = state_index(n, m);
      for (int qr = 0; qr < nr; ++qr) {
        const double r = std::sqrt(quad_.t_nodes[qr]);
        const double gauss = std::exp(-0.25 * b0 * quad_.t_nodes[qr]);
        for (int a = 0; a < quad_.n_theta; ++a) {
          const double sw = std::sqrt(quad_.weight(qr, a));
          values_(row, qr * quad_.n_theta + a) =
              sw * gauss * eval_poly(f[n][m], r, quad_.theta(a));
        }
      }
    }
}

Complex LandauBasis::evaluate(int n, int m, double x1, double x2) const {
  const double r2 = x1 * x1 + x2 * x2;
  const double r = std::sqrt(r2);
  const double theta = std::atan2(x2, x1);
  return std::exp(-0.25 * b0_ * r2) * eval_poly(polys_[state_index(n, m)], r, theta);
}

double LandauBasis::gram_error() const {
  Matrix gram = values_ * values_.adjoint();
  gram -= Matrix::Identity(gram.rows(), gram.cols());
  return gram.cwiseAbs().maxCoeff();
}

Matrix LandauBasis::profile_matrix(
    const std::function<double(double, double)>& f, int row_lo, int row_hi,
    int col_lo, int col_hi) const {
  const int nr = static_cast<int>(quad_.t_nodes.size());
  Vector fv(nr * quad_.n_theta);
  for (int qr = 0; qr < nr; ++qr) {
    const double r = std::sqrt(quad_.t_nodes[qr]);
    for (int a = 0; a < quad_.n_theta; ++a) {
      const double th = quad_.theta(a);
      fv(qr * quad_.n_theta + a) = f(r * std::cos(th), r * std::sin(th));
    }
  }
  const auto rows = values_.middleRows(row_lo, row_hi - row_lo);
  const auto cols = values_.middleRows(col_lo, col_hi - col_lo);
  Matrix out = rows.conjugate() * fv.asDiagonal() * cols.transpose();
  if (row_lo == col_lo && row_hi == col_hi)
    out = 0.5 * (out + out.adjoint()).eval();
  return out;
}

Matrix LandauBasis::profile_matrix(
    const std::function<double(double, double)>& f) const {
  return profile_matrix(f, 0, state_count(), 0, state_count());
}

namespace {
TransverseQuadrature checked_lll_quadrature(double b0, int m_cut) {
  DIRAC_REQUIRE(m_cut >= 1 && m_cut <= 256,
                "LLLBasis: angular cutoff out of supported range [1, 256]");
  return make_transverse_quadrature(b0, 1, m_cut);
}
}  // namespace

LLLBasis::LLLBasis(double b0_in, int m_cut_in)
    : b0(b0_in),
      m_cut(m_cut_in),
      basis(b0_in, 1, m_cut_in, checked_lll_quadrature(b0_in, m_cut_in)) {
  const double err = basis.gram_error();
  if (err >= 1e-10) {
    std::ostringstream os;
    os << "LLLBasis: quadrature cannot certify orthonormality (Gram error "
       << std::scientific << err << "); reduce M";
    throw Error(os.str());
  }
}

Matrix toeplitz_matrix(const std::function<double(double, double)>& profile,
                       const LLLBasis& basis) {
  return basis.basis.profile_matrix(profile);
}

Matrix toeplitz_matrix_radial(const std::function<double(double)>& radial_r2,
                              const LLLBasis& basis) {
  return toeplitz_matrix(
      [&radial_r2](double x1, double x2) { return radial_r2(x1 * x1 + x2 * x2); },
      basis);
}

ToeplitzSpectrum gap_radii(const std::vector<double>& mu, double nu_gap,
                           int count) {
  DIRAC_REQUIRE(nu_gap > 0.0 && nu_gap < 1.0, "gap_radii: nu_gap in (0,1)");
  for (size_t j = 0; j + 1 < mu.size(); ++j)
    DIRAC_REQUIRE(mu[j] >= mu[j + 1], "gap_radii: spectrum must be decreasing");
  ToeplitzSpectrum out;
  out.mu = mu;
  out.nu_gap = nu_gap;
  int positive = 0;
  for (double m : mu)
    if (m > 0.0) ++positive;
  if (positive < 2) {
    out.warning = "fewer than 2 distinct positive eigenvalues: no gaps";
    return out;
  }
  for (size_t j = 0; j + 1 < mu.size() && static_cast<int>(out.radii.size()) < count;
       ++j) {
    if (mu[j + 1] <= 0.0) break;
    if (mu[j] - mu[j + 1] <= nu_gap * mu[j]) continue;  // relative gap test
    const double r = std::sqrt(mu[j] * mu[j + 1]);      // geometric mean
    double dist = std::numeric_limits<double>::infinity();
    for (double m : mu) dist = std::min(dist, std::abs(r - m));
    if (dist >= 0.5 * nu_gap * r) out.radii.push_back(r);
  }
  if (out.radii.empty()) out.warning = "no qualifying gaps for given nu_gap";
  return out;
}

int trace_above(const ToeplitzSpectrum& s, double r) {
  int c = 0;
  for (double m : s.mu)
    if (m > r) ++c;
  return c;
}

int trace_in_band(const ToeplitzSpectrum& s, double lo, double hi) {
  int c = 0;
  for (double m : s.mu)
    if (m > lo && m < hi) ++c;
  return c;
}

std::function<double(double)> vm_profile(const PotentialSpec& spec, int sign_m,
                                         ProfileWeighting weighting) {
  DIRAC_REQUIRE(sign_m == 1 || sign_m == -1, "vm_profile: sign_m must be +-1");
  PotentialSpec checked = validate_potential(spec);
  const int entry = (sign_m == 1) ? 0 : 2;  // v_11 near +m, v_33 near -m
  // Internal axial quadrature sized by the profile's decay.
  const double L = checked.axial.suggested_halfwidth(1e-14);
  const int nax = 600;
  const double h = 2.0 * L / nax;
  const double scale =
      (weighting == ProfileWeighting::V) ? checked.epsilon * checked.abs_phi() : 1.0;
  return [checked, entry, L, nax, h, scale](double r2) {
    const double r = std::sqrt(std::max(0.0, r2));
    double acc = 0.0;
    for (int j = 0; j < nax; ++j) {
      const double x3 = -L + (j + 0.5) * h;
      const double wval = checked.transverse(r2) * checked.axial(x3);
      Mat4 m = wval * checked.spinor_factor;  // |W|(x) for PSD spinor factor
      // Pointwise |M| = sqrt(M^* M) via Hermitian eigendecomposition.
      Eigen::SelfAdjointEigenSolver<Mat4> es(m.adjoint() * m);
      Mat4 absm = Mat4::Zero();
      for (int e = 0; e < 4; ++e) {
        const double lam = std::sqrt(std::max(0.0, es.eigenvalues()(e)));
        absm += lam * es.eigenvectors().col(e) * es.eigenvectors().col(e).adjoint();
      }
      acc += h * absm(entry, entry).real();
    }
    (void)r;
    return 0.5 * scale * acc;
  };
}

}  // namespace dirac
