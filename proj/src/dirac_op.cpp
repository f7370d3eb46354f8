#include "dirac/dirac_op.hpp"

#include <algorithm>
#include <cmath>

#include "dirac/linalg.hpp"

namespace dirac {

Discretization::Discretization(const ModelParams& params,
                               const TruncationScheme& trunc)
    : params_(params),
      trunc_(trunc),
      landau_(params.b0, trunc.n_levels, trunc.m_cut,
              make_transverse_quadrature(params.b0, trunc.n_levels, trunc.m_cut)),
      axial_(trunc.grid) {
  params_.validate();
  trunc_.validate();
  DIRAC_REQUIRE(landau_.gram_error() < 1e-10,
                "Discretization: Landau quadrature not orthonormal");
  ts_of_snm_.assign(4 * trunc.n_levels * trunc.m_cut, -1);
  for (int s = 0; s < 4; ++s)
    for (int n = 0; n < trunc_.levels_for_spinor(s); ++n)
      for (int m = 0; m < trunc_.m_cut; ++m) {
        ts_of_snm_[(s * trunc.n_levels + n) * trunc.m_cut + m] = ts_total_;
        labels_.push_back({s, n, m});
        ++ts_total_;
      }
}

int Discretization::ts_index(int s, int n, int m) const {
  const int v = ts_of_snm_[(s * trunc_.n_levels + n) * trunc_.m_cut + m];
  DIRAC_REQUIRE(v >= 0, "ts_index: state not retained");
  return v;
}

bool Discretization::in_threshold_block(int ts) const {
  const TsLabel& l = labels_[ts];
  return (l.s == 0 || l.s == 2) && l.n == 0;
}

Matrix Discretization::assemble_free() const {
  const int nn = trunc_.grid.n;
  const int dim = total_dim();
  const double m = params_.mass;
  const double b0 = params_.b0;
  Matrix d = Matrix::Zero(dim, dim);
  const Matrix& dax = axial_.derivative();

  auto block = [&](int ts_r, int ts_c) {
    return d.block(ts_r * nn, ts_c * nn, nn, nn);
  };
  for (int ts = 0; ts < ts_total_; ++ts) {
    const TsLabel& l = labels_[ts];
    // mass term: beta = diag(1,1,-1,-1)
    const double sgn = (l.s <= 1) ? 1.0 : -1.0;
    block(ts, ts) += (sgn * m) * Matrix::Identity(nn, nn);
    // axial term: alpha_3 couples 0<->2 (+), 1<->3 (-)
    if (l.s == 0) block(ts, ts_index(2, l.n, l.m)) += dax;
    if (l.s == 2) block(ts, ts_index(0, l.n, l.m)) += dax;
    if (l.s == 1) block(ts, ts_index(3, l.n, l.m)) -= dax;
    if (l.s == 3) block(ts, ts_index(1, l.n, l.m)) -= dax;
    // transverse ladder: row s0 <- pi_- s3, s1 <- pi_+ s2,
    //                    s2 <- pi_- s1, s3 <- pi_+ s0
    if (l.s == 0 && l.n >= 1)
      block(ts, ts_index(3, l.n - 1, l.m)) +=
          std::sqrt(2.0 * b0 * l.n) * Matrix::Identity(nn, nn);
    if (l.s == 1 && l.n + 1 < trunc_.levels_for_spinor(2))
      block(ts, ts_index(2, l.n + 1, l.m)) +=
          std::sqrt(2.0 * b0 * (l.n + 1)) * Matrix::Identity(nn, nn);
    if (l.s == 2 && l.n >= 1)
      block(ts, ts_index(1, l.n - 1, l.m)) +=
          std::sqrt(2.0 * b0 * l.n) * Matrix::Identity(nn, nn);
    if (l.s == 3 && l.n + 1 < trunc_.levels_for_spinor(0))
      block(ts, ts_index(0, l.n + 1, l.m)) +=
          std::sqrt(2.0 * b0 * (l.n + 1)) * Matrix::Identity(nn, nn);
  }
  return d;
}

Matrix Discretization::sqrt_v_transverse(const PotentialSpec& spec) const {
  const PotentialSpec checked = validate_potential(spec);
  // S^{1/2} via the Hermitian eigendecomposition (PSD by validation).
  Eigen::SelfAdjointEigenSolver<Mat4> es(checked.spinor_factor);
  Mat4 s_half = Mat4::Zero();
  for (int e = 0; e < 4; ++e) {
    const double lam = std::max(0.0, es.eigenvalues()(e));
    s_half += std::sqrt(lam) * es.eigenvectors().col(e) *
              es.eigenvectors().col(e).adjoint();
  }
  // Matrix square root of the compressed profile, so that the factor
  // squares back to the honest Toeplitz compression of w_perp on the
  // retained states (the quadrature of sqrt(w_perp) would square to a
  // truncation-order different operator).
  const auto& tp = checked.transverse;
  Matrix t_w = landau_.profile_matrix(
      [&tp](double x1, double x2) { return tp(x1 * x1 + x2 * x2); });
  RealVector tev;
  Matrix tvec;
  linalg::eigensystem_hermitian(t_w, tev, tvec);
  Matrix f_w = Matrix::Zero(t_w.rows(), t_w.cols());
  for (int e = 0; e < tev.size(); ++e) {
    const double lam = std::max(0.0, tev(e));
    f_w += std::sqrt(lam) * tvec.col(e) * tvec.col(e).adjoint();
  }
  const double scale = std::sqrt(checked.epsilon * checked.abs_phi());
  Matrix b = Matrix::Zero(ts_total_, ts_total_);
  for (int r = 0; r < ts_total_; ++r) {
    const TsLabel& lr = labels_[r];
    for (int c = 0; c < ts_total_; ++c) {
      const TsLabel& lc = labels_[c];
      const Complex sv = s_half(lr.s, lc.s);
      if (sv == Complex(0, 0)) continue;
      b(r, c) = scale * sv *
                f_w(landau_.state_index(lr.n, lr.m),
                    landau_.state_index(lc.n, lc.m));
    }
  }
  return b;
}

Matrix Discretization::assemble_potential(const PotentialSpec& spec) const {
  const PotentialSpec checked = validate_potential(spec);
  const int nn = trunc_.grid.n;
  Matrix b = sqrt_v_transverse(checked);
  Matrix b2 = b * b;
  const Complex phase = std::polar(1.0, checked.arg_phi());
  Matrix v = Matrix::Zero(total_dim(), total_dim());
  for (int r = 0; r < ts_total_; ++r)
    for (int c = 0; c < ts_total_; ++c) {
      const Complex val = phase * b2(r, c);
      if (val == Complex(0, 0)) continue;
      for (int j = 0; j < nn; ++j)
        v(r * nn + j, c * nn + j) = val * checked.axial(trunc_.grid.node(j));
    }
  return v;
}

Matrix Discretization::projector_p() const {
  const int nn = trunc_.grid.n;
  Matrix p = Matrix::Zero(total_dim(), total_dim());
  for (int ts = 0; ts < ts_total_; ++ts)
    if (in_threshold_block(ts))
      p.block(ts * nn, ts * nn, nn, nn) = Matrix::Identity(nn, nn);
  return p;
}

Matrix Discretization::projector_q() const {
  Matrix q = Matrix::Identity(total_dim(), total_dim()) - projector_p();
  return q;
}

OperatorMatrix assemble_free(const ModelParams& /*params*/,
                             const Discretization& disc) {
  OperatorMatrix out;
  out.mat = disc.assemble_free();
  out.role = OperatorRole::Free;
  const double herm = (out.mat - out.mat.adjoint()).cwiseAbs().maxCoeff();
  DIRAC_REQUIRE(herm < 1e-12, "assemble_free: operator not Hermitian");
  return out;
}

OperatorMatrix assemble_potential(const PotentialSpec& spec,
                                  const Discretization& disc) {
  OperatorMatrix out;
  out.mat = disc.assemble_potential(spec);
  out.role = OperatorRole::Potential;
  return out;
}

std::vector<SpectrumEntry> direct_spectrum(const Matrix& op, Complex center,
                                           double radius, double cluster_tol) {
  Vector w = linalg::eigenvalues(op);
  std::vector<Complex> inside;
  for (int i = 0; i < w.size(); ++i)
    if (std::abs(w(i) - center) < radius) inside.push_back(w(i));
  std::sort(inside.begin(), inside.end(), [](Complex a, Complex b) {
    return (a.real() != b.real()) ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<SpectrumEntry> out;
  for (const Complex& z : inside) {
    if (!out.empty() && std::abs(out.back().z - z) < cluster_tol) {
      // running mean keeps the cluster centroid stable
      const int k = out.back().multiplicity;
      out.back().z = (out.back().z * double(k) + z) / double(k + 1);
      out.back().multiplicity = k + 1;
    } else {
      out.push_back({z, 1});
    }
  }
  return out;
}

std::pair<OperatorMatrix, OperatorMatrix> projectors(
    const ModelParams& params, const Discretization& disc) {
  OperatorMatrix p, q;
  p.mat = disc.projector_p();
  p.role = OperatorRole::Projector;
  q.mat = disc.projector_q();
  q.role = OperatorRole::Projector;

  // Verify the representation: the retained threshold block must be exactly
  // the +-m eigenspace structure of the free operator.
  Matrix d = disc.assemble_free();
  const double comm = (p.mat * d - d * p.mat).cwiseAbs().maxCoeff();
  DIRAC_REQUIRE(comm < 1e-8,
                "projectors: threshold block does not commute with the free "
                "operator (representation mismatch)");
  // Compressions: collect index sets and check the spectral gaps.
  const int nn = disc.trunc().grid.n;
  std::vector<int> pidx, qidx;
  for (int ts = 0; ts < disc.ts_count(); ++ts)
    for (int j = 0; j < nn; ++j)
      (disc.in_threshold_block(ts) ? pidx : qidx).push_back(ts * nn + j);
  auto compress = [&d](const std::vector<int>& idx) {
    Matrix c(idx.size(), idx.size());
    for (size_t r = 0; r < idx.size(); ++r)
      for (size_t cix = 0; cix < idx.size(); ++cix)
        c(r, cix) = d(idx[r], idx[cix]);
    return c;
  };
  RealVector pev = linalg::eigenvalues_hermitian(compress(pidx));
  double pmin = 1e300;
  for (int i = 0; i < pev.size(); ++i) pmin = std::min(pmin, std::abs(pev(i)));
  DIRAC_REQUIRE(std::abs(pmin - params.mass) < 1e-8,
                "projectors: threshold block spectrum does not reach +-m "
                "(representation mismatch)");
  if (!qidx.empty()) {
    RealVector qev = linalg::eigenvalues_hermitian(compress(qidx));
    double qmin = 1e300;
    for (int i = 0; i < qev.size(); ++i) qmin = std::min(qmin, std::abs(qev(i)));
    const double gap = std::sqrt(params.mass * params.mass + params.zeta());
    DIRAC_REQUIRE(qmin > gap - 1e-8,
                  "projectors: complement block enters the threshold gap "
                  "(representation mismatch)");
  }
  return {p, q};
}

double numerical_range_distance(const Matrix& a, Complex z, int coarse_samples) {
  DIRAC_REQUIRE(a.rows() == a.cols(), "numerical_range_distance: square matrix");
  auto support_gap = [&](double theta) {
    const Complex rot = std::polar(1.0, theta);
    Matrix shifted = rot * (a - z * Matrix::Identity(a.rows(), a.cols()));
    Matrix herm = 0.5 * (shifted + shifted.adjoint());
    RealVector ev = linalg::eigenvalues_hermitian(herm);
    return -ev(ev.size() - 1);  // separation of the half plane from 0
  };
  double best = 0.0, best_theta = 0.0;
  for (int i = 0; i < coarse_samples; ++i) {
    const double th = 2.0 * kPi * i / coarse_samples;
    const double g = support_gap(th);
    if (g > best) {
      best = g;
      best_theta = th;
    }
  }
  if (best <= 0.0) return 0.0;
  // golden-section refinement around the best direction
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = best_theta - 2.0 * kPi / coarse_samples;
  double hi = best_theta + 2.0 * kPi / coarse_samples;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = support_gap(x1), f2 = support_gap(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = support_gap(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = support_gap(x1);
    }
  }
  return std::max({best, f1, f2, 0.0});
}

}  // namespace dirac
