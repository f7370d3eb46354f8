#include "dirac/bs.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dirac/linalg.hpp"

namespace dirac {

namespace {

Mat4 hermitian_sqrt(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m);
  Mat4 out = Mat4::Zero();
  for (int e = 0; e < 4; ++e) {
    const double lam = std::max(0.0, es.eigenvalues()(e));
    out += std::sqrt(lam) * es.eigenvectors().col(e) *
           es.eigenvectors().col(e).adjoint();
  }
  return out;
}

}  // namespace

PolarFactors polar_factors(const PotentialSpec& spec) {
  const PotentialSpec checked = validate_potential(spec);
  PolarFactors pf;
  pf.abs_v = [checked](double x1, double x2, double x3) {
    const Mat4 v = checked.value(x1, x2, x3);
    Eigen::SelfAdjointEigenSolver<Mat4> es(v.adjoint() * v);
    Mat4 out = Mat4::Zero();
    for (int e = 0; e < 4; ++e) {
      const double lam = std::sqrt(std::max(0.0, es.eigenvalues()(e)));
      out += lam * es.eigenvectors().col(e) * es.eigenvectors().col(e).adjoint();
    }
    return out;
  };
  pf.sqrt_abs_v = [abs_v = pf.abs_v](double x1, double x2, double x3) {
    return hermitian_sqrt(abs_v(x1, x2, x3));
  };
  pf.j_tilde = [checked, abs_v = pf.abs_v](double x1, double x2, double x3) {
    // J~ = V |V|^{+} (Moore-Penrose on ran |V|): phase times range projector.
    const Mat4 v = checked.value(x1, x2, x3);
    const Mat4 av = abs_v(x1, x2, x3);
    Eigen::SelfAdjointEigenSolver<Mat4> es(av);
    const double top = es.eigenvalues().maxCoeff();
    Mat4 pinv = Mat4::Zero();
    for (int e = 0; e < 4; ++e) {
      const double lam = es.eigenvalues()(e);
      if (lam > 1e-13 * std::max(top, 1e-300))
        pinv += (1.0 / lam) * es.eigenvectors().col(e) *
                es.eigenvectors().col(e).adjoint();
    }
    return Mat4(v * pinv);
  };
  return pf;
}

BSAssembler::BSAssembler(const ModelParams& params, const TruncationScheme& trunc,
                         const PotentialSpec& spec)
    : params_(params),
      spec_(validate_potential(spec)),
      disc_(std::make_shared<Discretization>(params, trunc)) {
  b_factor_ = disc_->sqrt_v_transverse(spec_);
  const AxialGrid& grid = trunc.grid;
  g_half_.resize(grid.n);
  c_axial_.resize(grid.n);
  const double sqh = std::sqrt(grid.h());
  for (int j = 0; j < grid.n; ++j) {
    const double g = spec_.axial(grid.node(j));
    g_half_(j) = std::sqrt(g);
    c_axial_(j) = sqh * g_half_(j);
  }
  phase_ = std::polar(1.0, spec_.arg_phi());

  const int ts = disc_->ts_count();
  const int mcut = trunc.m_cut;
  m_p0_ = Matrix::Zero(ts, ts);
  m_p2_ = Matrix::Zero(ts, ts);
  m_x_ = Matrix::Zero(ts, ts);
  k_plus_ = Matrix::Zero(mcut, dim());
  k_minus_ = Matrix::Zero(mcut, dim());
  const int nn = grid.n;
  for (int m = 0; m < mcut; ++m) {
    const int ch0 = disc_->ts_index(0, 0, m);
    const int ch2 = disc_->ts_index(2, 0, m);
    m_p0_ += b_factor_.col(ch0) * b_factor_.row(ch0);
    m_p2_ += b_factor_.col(ch2) * b_factor_.row(ch2);
    m_x_ += b_factor_.col(ch0) * b_factor_.row(ch2) +
            b_factor_.col(ch2) * b_factor_.row(ch0);
    for (int tsc = 0; tsc < ts; ++tsc)
      for (int j = 0; j < nn; ++j) {
        k_plus_(m, tsc * nn + j) =
            (1.0 / std::sqrt(2.0)) * b_factor_(ch0, tsc) * c_axial_(j);
        k_minus_(m, tsc * nn + j) =
            (1.0 / std::sqrt(2.0)) * b_factor_(ch2, tsc) * c_axial_(j);
      }
  }
}

void BSAssembler::require_off_rays(Complex z) const {
  const bool on_ray =
      std::abs(z.imag()) < 1e-10 && std::abs(z.real()) >= params_.mass - 1e-10;
  DIRAC_REQUIRE(!on_ray, "bs_operator: z within 1e-10 of the essential spectrum");
}

const Matrix& BSAssembler::free_matrix() const {
  if (!d_free_) d_free_ = std::make_unique<Matrix>(disc_->assemble_free());
  return *d_free_;
}

const Matrix& BSAssembler::full_matrix() const {
  if (!d_full_)
    d_full_ = std::make_unique<Matrix>(free_matrix() +
                                       disc_->assemble_potential(spec_));
  return *d_full_;
}

Matrix BSAssembler::k_factor(int sign_m) const {
  DIRAC_REQUIRE(sign_m == 1 || sign_m == -1, "k_factor: sign_m must be +-1");
  return sign_m == 1 ? k_plus_ : k_minus_;
}

BSOperator BSAssembler::bs_operator(Complex z, BSBackend backend,
                                    AxialResolventMode mode) const {
  require_off_rays(z);
  BSOperator out;
  out.z = z;
  const int n = dim();
  if (spec_.epsilon == 0.0) {
    out.t = Matrix::Zero(n, n);
    return out;
  }
  if (backend == BSBackend::Kernel) {
    const Complex zeta = z * z - params_.mass * params_.mass;
    out.t = assemble_kernel_t(z, branch_sqrt(zeta), mode);
    return out;
  }
  out.t = solve_sandwich(free_matrix(), z);
  return out;
}

Matrix BSAssembler::perturbed_sandwich(Complex z) const {
  return solve_sandwich(full_matrix(), z);
}

// phase * F (base - z)^{-1} F with F = B (x) diag(g^{1/2}); columns where
// g^{1/2} is below 1e-15 of its peak are dropped (the factor annihilates
// them to the same accuracy).
Matrix BSAssembler::solve_sandwich(const Matrix& base, Complex z) const {
  const int n = dim();
  const AxialGrid& grid = disc_->trunc().grid;
  const int nn = grid.n;
  const int ts = disc_->ts_count();
  const double gmax = g_half_.maxCoeff();
  std::vector<int> active;
  for (int j = 0; j < nn; ++j)
    if (g_half_(j) > 1e-15 * gmax) active.push_back(j);
  const int ncols = static_cast<int>(active.size()) * ts;
  Matrix rhs = Matrix::Zero(n, ncols);
  for (int tsc = 0, col = 0; tsc < ts; ++tsc)
    for (int aj : active) {
      for (int tsr = 0; tsr < ts; ++tsr) {
        const Complex bv = b_factor_(tsr, tsc);
        if (bv != Complex(0, 0)) rhs(tsr * nn + aj, col) = bv * g_half_(aj);
      }
      ++col;
    }
  Matrix dz = base;
  dz.diagonal().array() -= z;
  Matrix x = linalg::solve(std::move(dz), rhs);
  Matrix t = Matrix::Zero(n, n);
  for (int tsc = 0, col = 0; tsc < ts; ++tsc)
    for (int aj : active) {
      // left application of phase * F to the solved column
      for (int tsr = 0; tsr < ts; ++tsr) {
        for (int j = 0; j < nn; ++j) {
          Complex acc(0, 0);
          for (int tsm = 0; tsm < ts; ++tsm)
            acc += b_factor_(tsr, tsm) * x(tsm * nn + j, col);
          t(tsr * nn + j, tsc * nn + aj) = phase_ * g_half_(j) * acc;
        }
      }
      ++col;
    }
  return t;
}

void BSAssembler::add_kron(Matrix& t, Complex coef, const Matrix& tsm,
                           const Matrix& axm) const {
  const int nn = disc_->trunc().grid.n;
  const int ts = disc_->ts_count();
  for (int r = 0; r < ts; ++r)
    for (int c = 0; c < ts; ++c) {
      const Complex v = coef * tsm(r, c);
      if (v == Complex(0, 0)) continue;
      t.block(r * nn, c * nn, nn, nn) += v * axm;
    }
}

Matrix BSAssembler::sandwich(const Matrix& ax) const {
  const int nn = disc_->trunc().grid.n;
  Matrix out = ax;
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) out(i, j) *= g_half_(i) * g_half_(j);
  return out;
}

// Threshold part minus its rank-one singular term: the regular-part
// sandwich [p (x) s(k)] with the spinor weights plus the (-i d3) R piece.
void BSAssembler::add_threshold_regular(Matrix& t, Complex z, Complex w) const {
  const AxialGrid& grid = disc_->trunc().grid;
  const double m = params_.mass;
  Matrix sg = sandwich(s_matrix_from_w(grid, w, true));
  add_kron(t, phase_ * (z + m), m_p0_, sg);
  add_kron(t, phase_ * (z - m), m_p2_, sg);
  Matrix drg = sandwich(deriv_resolvent_matrix_from_w(grid, w, true));
  add_kron(t, phase_, m_x_, drg);
}

// Complement part: (D + z) applied through the channel-diagonal block
// resolvent (Dax^2 + Lambda + m^2 - z^2)^{-1}, sandwiched by the factors.
void BSAssembler::add_complement(Matrix& t, Complex z) const {
  const int ts = disc_->ts_count();
  const double m = params_.mass;
  const double b0 = params_.b0;
  const Complex zeta = z * z - m * m;
  std::map<long, std::pair<Matrix, Matrix>> cache;  // lambda -> (Rg, DaxRg)
  auto channel_resolvents = [&](double lambda) -> const std::pair<Matrix, Matrix>& {
    const long key = std::lround(lambda * 1e9);
    auto it = cache.find(key);
    if (it == cache.end()) {
      Matrix r = disc_->axial().second_derivative_resolvent(zeta - lambda);
      Matrix dr = disc_->axial().derivative() * r;
      it = cache.emplace(key, std::make_pair(sandwich(r), sandwich(dr))).first;
    }
    return it->second;
  };
  for (int ch = 0; ch < ts; ++ch) {
    if (disc_->in_threshold_block(ch)) continue;
    const auto& l = disc_->ts_label(ch);
    const double lambda =
        (l.s == 0 || l.s == 2) ? 2.0 * b0 * l.n : 2.0 * b0 * (l.n + 1);
    const auto& [rg, drg] = channel_resolvents(lambda);
    // mass + z terms land in the channel itself
    const double beta_sign = (l.s <= 1) ? 1.0 : -1.0;
    Matrix outer = b_factor_.col(ch) * b_factor_.row(ch);
    add_kron(t, phase_ * (beta_sign * m + z), outer, rg);
    // axial coupling: alpha_3 swaps 0<->2 (+Dax) and 1<->3 (-Dax)
    const int s_ax = (l.s == 0) ? 2 : (l.s == 2) ? 0 : (l.s == 1) ? 3 : 1;
    const double ax_sign = (l.s == 0 || l.s == 2) ? 1.0 : -1.0;
    Matrix outer_ax =
        b_factor_.col(disc_->ts_index(s_ax, l.n, l.m)) * b_factor_.row(ch);
    add_kron(t, phase_ * ax_sign, outer_ax, drg);
    // ladder couplings: rows fed by this column channel follow the
    // free-operator pattern s0 <- pi_- s3, s1 <- pi_+ s2, s2 <- pi_- s1,
    // s3 <- pi_+ s0.
    auto add_ladder = [&](int s_to, int n_to, double coef) {
      if (n_to < 0 || n_to >= disc_->trunc().levels_for_spinor(s_to)) return;
      Matrix o = b_factor_.col(disc_->ts_index(s_to, n_to, l.m)) * b_factor_.row(ch);
      add_kron(t, phase_ * coef, o, rg);
    };
    if (l.s == 3) add_ladder(0, l.n + 1, std::sqrt(2.0 * b0 * (l.n + 1)));
    if (l.s == 2) add_ladder(1, l.n - 1, std::sqrt(2.0 * b0 * l.n));
    if (l.s == 1) add_ladder(2, l.n + 1, std::sqrt(2.0 * b0 * (l.n + 1)));
    if (l.s == 0) add_ladder(3, l.n - 1, std::sqrt(2.0 * b0 * l.n));
  }
}

Matrix BSAssembler::assemble_kernel_t(Complex z, Complex w,
                                      AxialResolventMode mode) const {
  const AxialGrid& grid = disc_->trunc().grid;
  const int n = dim();
  const double m = params_.mass;
  Matrix t = Matrix::Zero(n, n);
  Matrix r_th, dr_th;
  if (mode == AxialResolventMode::ContinuumKernel) {
    // full threshold resolvent R = (i/2W)|1><1| + s(k)
    r_th = s_matrix_from_w(grid, w, true);
    r_th.array() += grid.h() * kI / (2.0 * w);
    dr_th = deriv_resolvent_matrix_from_w(grid, w, true);
  } else {
    const Complex zeta = z * z - m * m;
    r_th = disc_->axial().second_derivative_resolvent(zeta);
    dr_th = disc_->axial().derivative() * r_th;
  }
  Matrix rg = sandwich(r_th);
  add_kron(t, phase_ * (z + m), m_p0_, rg);
  add_kron(t, phase_ * (z - m), m_p2_, rg);
  add_kron(t, phase_, m_x_, sandwich(dr_th));
  add_complement(t, z);
  return t;
}

BSOperator BSAssembler::singular_split(Complex k, int sign_m) const {
  DIRAC_REQUIRE(sign_m == 1 || sign_m == -1, "singular_split: sign_m must be +-1");
  DIRAC_REQUIRE(k != Complex(0, 0), "singular_split: k must be nonzero");
  const double mt = sign_m * params_.mass;
  const Complex z = mt * (1.0 + k * k) / (1.0 - k * k);
  const bool boundary_k = (k.imag() == 0.0 || k.real() == 0.0);
  // boundary k maps z onto the rays; the limiting-absorption kernels are
  // still defined there, so only interior points enforce the ray guard
  if (!boundary_k) require_off_rays(z);
  const Complex w_raw = k * (2.0 * mt / (1.0 - k * k));  // k (z + m~)
  BSOperator out;
  out.z = z;
  out.k = k;
  out.sign_m = sign_m;
  Complex w;
  if (boundary_k) {
    // boundary of the half-discs: branch resolved by limiting absorption,
    // flagged for the caller (sign conventions are sensitive here)
    out.branch_flagged = true;
    w = (w_raw.imag() > 0.0 || (w_raw.imag() == 0.0 && w_raw.real() >= 0.0))
            ? w_raw
            : -w_raw;
  } else {
    w = branch_sqrt(w_raw * w_raw);
  }
  const Complex sigma_c = w / w_raw;
  out.branch_sign = (sigma_c.real() > 0.0) ? +1 : -1;
  const double sigma = out.branch_sign;

  const Matrix& k_sing = (sign_m == 1) ? k_plus_ : k_minus_;
  const Matrix& k_reg = (sign_m == 1) ? k_minus_ : k_plus_;
  out.b_singular = k_sing.adjoint() * k_sing;

  // A(k) = sigma i J~ k K* K (opposite threshold) + regular sandwich +
  // complement part; T reconstructs as sigma i J~ / k B + A exactly.
  Matrix a = (sigma * kI * phase_ * k) * (k_reg.adjoint() * k_reg);
  add_threshold_regular(a, z, w);
  add_complement(a, z);
  out.a_regular = std::move(a);
  out.t = (sigma * kI * phase_ / k) * out.b_singular + out.a_regular;
  out.has_split = true;
  return out;
}

BSAssembler::KKCheck BSAssembler::kk_star_check(int sign_m) const {
  KKCheck out;
  const Matrix& kf = k_factor(sign_m);
  out.kk_star = kf * kf.adjoint();
  LLLBasis lll(params_.b0, disc_->trunc().m_cut);
  auto profile = vm_profile(spec_, sign_m, ProfileWeighting::V);
  out.toeplitz = toeplitz_matrix_radial(profile, lll);
  RealVector e1 = linalg::eigenvalues_hermitian(out.kk_star);
  RealVector e2 = linalg::eigenvalues_hermitian(out.toeplitz);
  double diff = 0.0;
  for (int i = 0; i < e1.size(); ++i) diff = std::max(diff, std::abs(e1(i) - e2(i)));
  out.spectral_difference = diff;
  return out;
}

Complex BSAssembler::log_det(Complex z, BSBackend backend,
                             AxialResolventMode mode) const {
  require_off_rays(z);
  const int n = dim();
  if (backend == BSBackend::MatrixSolve) {
    Matrix a = full_matrix();
    a.diagonal().array() -= z;
    Matrix b = free_matrix();
    b.diagonal().array() -= z;
    return linalg::log_det(std::move(a)) - linalg::log_det(std::move(b));
  }
  BSOperator op = bs_operator(z, BSBackend::Kernel, mode);
  op.t += Matrix::Identity(n, n);
  return linalg::log_det(std::move(op.t));
}

double resolvent_weight_sup(double s0, Complex zeta) {
  const double a = zeta.real(), b = zeta.imag();
  auto f = [&](double s) {
    const double num = std::abs(s + 1.0);
    const double den = std::hypot(s - a, b);
    DIRAC_REQUIRE(den > 0.0, "resolvent_weight_sup: zeta on the domain");
    return num / den;
  };
  double best = std::max(f(s0), 1.0);  // s -> infinity limit is 1
  if (std::abs(a + 1.0) > 1e-14) {
    const double s_star = (a * a + b * b + a) / (a + 1.0);
    if (s_star > s0) best = std::max(best, f(s_star));
  }
  return best;
}

SchattenReport schatten_diagnostics(const BSAssembler& bs, Complex z, double q,
                                    double tau) {
  DIRAC_REQUIRE(q >= 2.0, "schatten_diagnostics: q >= 2 for the threshold part");
  DIRAC_REQUIRE(tau > 0.5, "schatten_diagnostics: tau > 1/2");
  const Discretization& disc = bs.disc();
  const ModelParams& mp = bs.params();
  const AxialGrid& grid = disc.trunc().grid;
  const int nn = grid.n;
  const int n = bs.dim();
  SchattenReport rep;
  rep.q = q;
  rep.tau = tau;

  // weighted resolvent columns on the threshold / complement ranges
  Matrix dz = bs.free_matrix();
  dz.diagonal().array() -= z;
  std::vector<int> pidx, qidx;
  for (int ts = 0; ts < disc.ts_count(); ++ts)
    for (int j = 0; j < nn; ++j)
      (disc.in_threshold_block(ts) ? pidx : qidx).push_back(ts * nn + j);
  Matrix rhs_p = Matrix::Zero(n, pidx.size());
  for (size_t c = 0; c < pidx.size(); ++c) rhs_p(pidx[c], c) = 1.0;
  Matrix xp = linalg::solve(dz, rhs_p);

  // transverse weight U = F_perp^{1/2} over the Landau states
  const auto& tp = bs.spec().transverse;
  Matrix u_t = disc.landau().profile_matrix([&tp](double x1, double x2) {
    return std::sqrt(tp(x1 * x1 + x2 * x2));
  });
  auto apply_weight = [&](const Matrix& x, bool with_axial_tau,
                          bool with_axial_g) {
    Matrix y = Matrix::Zero(x.rows(), x.cols());
    for (int tsr = 0; tsr < disc.ts_count(); ++tsr) {
      const auto& lr = disc.ts_label(tsr);
      for (int tsc = 0; tsc < disc.ts_count(); ++tsc) {
        const auto& lc = disc.ts_label(tsc);
        if (lr.s != lc.s) continue;  // spinor-diagonal weight
        const Complex uv = u_t(disc.landau().state_index(lr.n, lr.m),
                               disc.landau().state_index(lc.n, lc.m));
        if (uv == Complex(0, 0)) continue;
        for (int j = 0; j < nn; ++j) {
          double wj = 1.0;
          const double x3 = grid.node(j);
          if (with_axial_tau) wj *= std::pow(1.0 + x3 * x3, -0.5 * tau);
          if (with_axial_g) wj *= std::sqrt(bs.spec().axial(x3));
          y.row(tsr * nn + j) += uv * wj * x.row(tsc * nn + j);
        }
      }
    }
    return y;
  };
  rep.lhs_p = linalg::schatten_norm(apply_weight(xp, true, false), q);

  const Complex zeta = z * z - mp.mass * mp.mass;
  const double lq = std::exp((0.5 * std::log(kPi) +
                              std::lgamma(0.5 * (tau * q - 1.0)) -
                              std::lgamma(0.5 * tau * q)) /
                             q);
  const double l2 = std::exp(0.5 * (0.5 * std::log(kPi) +
                                    std::lgamma(tau - 0.5) - std::lgamma(tau)));
  rep.m_value = lq * (std::abs(z + mp.mass) + std::abs(z - mp.mass)) *
                    resolvent_weight_sup(0.0, zeta) +
                l2 / std::sqrt(branch_sqrt(zeta).imag());

  if (!qidx.empty()) {
    Matrix rhs_q = Matrix::Zero(n, qidx.size());
    for (size_t c = 0; c < qidx.size(); ++c) rhs_q(qidx[c], c) = 1.0;
    Matrix dz2 = bs.free_matrix();
    dz2.diagonal().array() -= z;
    Matrix xq = linalg::solve(dz2, rhs_q);
    rep.lhs_q = linalg::schatten_norm(apply_weight(xq, false, true), q);
    const double zg = mp.zeta();
    const double m2 = mp.mass * mp.mass;
    const double first = std::sqrt(std::max(1.0, (zg + 1.0) / (zg + m2)));
    rep.m_tilde = first + (std::abs(z) + std::norm(z)) *
                              resolvent_weight_sup(zg, zeta);
  } else {
    rep.lhs_q = 0.0;
    rep.m_tilde = 0.0;
  }
  return rep;
}

}  // namespace dirac
