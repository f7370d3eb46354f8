#include "dirac/axial.hpp"

#include <cmath>

namespace dirac {

namespace {

// f2(t) = (e^t - 1 - t)/t^2, f2(0) = 1/2.
Complex f2(Complex t) {
  if (std::abs(t) < 0.05) {
    Complex acc(0.0, 0.0);
    double inv_fact = 1.0 / 2.0;
    Complex tp(1.0, 0.0);
    for (int n = 2; n <= 12; ++n) {
      acc += tp * inv_fact;
      tp *= t;
      inv_fact /= (n + 1);
    }
    return acc;
  }
  return (std::exp(t) - 1.0 - t) / (t * t);
}

// m0(a, W) = integral of s over [-a, a]; s(u) = (1 - e^{iW|u|})/(2iW).
Complex s_moment0(double a, Complex w) {
  const Complex t = kI * w * a;
  return -a * a * f2(t);
}

// m2(a, W) = integral of u^2 s(u) over [-a, a].
Complex s_moment2(double a, Complex w) {
  const Complex tau = kI * w;
  if (std::abs(tau) * a < 0.05) {
    // -(a^4/4 + tau a^5/10 + tau^2 a^6/36 + tau^3 a^7/168 + ...)
    Complex acc(0.0, 0.0);
    Complex tp(1.0, 0.0);
    double apow = a * a * a * a;
    double fact = 1.0;
    for (int n = 1; n <= 10; ++n) {
      fact *= n;
      acc += tp * (apow / (fact * (n + 3)));
      tp *= tau;
      apow *= a;
    }
    return -acc;
  }
  const Complex ea = std::exp(tau * a);
  const Complex i1 = ea * (a * a / tau - 2.0 * a / (tau * tau) + 2.0 / (tau * tau * tau)) -
                     2.0 / (tau * tau * tau);
  return (a * a * a / 3.0 - i1) / tau;
}

}  // namespace

Complex branch_sqrt(Complex z) {
  DIRAC_REQUIRE(!(z.imag() == 0.0 && z.real() >= 0.0),
                "branch_sqrt: input on the cut [0, +inf)");
  double theta = std::arg(z);           // (-pi, pi]
  if (theta <= 0.0) theta += 2.0 * kPi; // move to (0, 2pi)
  const double r = std::sqrt(std::abs(z));
  return Complex(r * std::cos(0.5 * theta), r * std::sin(0.5 * theta));
}

Complex resolvent_kernel(Complex z, double x3, double x3p) {
  DIRAC_REQUIRE(!(z.imag() == 0.0 && z.real() >= 0.0),
                "resolvent_kernel: z on [0, +inf); use limiting_kernel");
  const Complex rt = branch_sqrt(z);
  return -std::exp(kI * rt * std::abs(x3 - x3p)) / (2.0 * kI * rt);
}

Complex limiting_kernel(double lambda, double x3, double x3p) {
  DIRAC_REQUIRE(lambda > 0.0, "limiting_kernel: lambda must be > 0");
  const double rt = std::sqrt(lambda);
  return kI * std::exp(kI * rt * std::abs(x3 - x3p)) / (2.0 * rt);
}

Complex s_kernel_value(Complex w, double dist) {
  // (1 - e^{iu})/(2iW) = -e^{iu/2} sin(u/2)/W with u = W*dist;
  // sin(u/2)/W = (dist/2) sinc(u/2), series for tiny arguments.
  const Complex u_half = 0.5 * w * dist;
  Complex sinc;
  if (std::abs(u_half) < 1e-4) {
    const Complex x2 = u_half * u_half;
    sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  } else {
    sinc = std::sin(u_half) / u_half;
  }
  return -std::exp(kI * u_half) * (0.5 * dist) * sinc;
}

Matrix s_matrix_from_w(const AxialGrid& grid, Complex w, bool corrected) {
  grid.validate();
  const int n = grid.n;
  const double h = grid.h();
  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s(i, j) = h * s_kernel_value(w, std::abs(grid.node(i) - grid.node(j)));
  if (!corrected) return s;

  // Kink correction. The integrand g(y) = s(x_i - y) phi(y) has a |.|-kink
  // at the panel center y = x_i. Row i is corrected by the exact moments of
  // the diagonal panel plus the h^2 and h^4 Euler-Maclaurin terms from the
  // cut points x_i +- h/2, with phi interpolated to O(h^4) from neighbors:
  //   C_i = m0 phi_i + (m2/2) phi''_i
  //       + (h^2/24) [ (E/2)(phi_- + phi_+) + s_e (phi'_- - phi'_+) ]
  //       - (7h^4/5760) [ -(W^2 E/2)(phi_-+phi_+) - (3iWE/2)(phi'_- - phi'_+)
  //                        + 3E phi''_i ]
  // where E = e^{iWh/2}, s_e = s(h/2), phi_-/+ the values at x_i -+ h/2.
  const double a = 0.5 * h;
  const Complex m0 = s_moment0(a, w);
  const Complex m2 = s_moment2(a, w);
  const Complex E = std::exp(kI * w * a);
  const Complex s_e = s_kernel_value(w, a);
  const double em2 = h * h / 24.0;
  const double em4 = 7.0 * h * h * h * h / 5760.0;
  const Complex A = em2 * (0.5 * E) + em4 * (0.5 * w * w * E);
  const Complex B = em2 * s_e + em4 * (1.5 * kI * w * E);
  const Complex Cq = 0.5 * m2 - em4 * 3.0 * E;
  // 5-band symmetric stencil (offsets -2..2).
  Complex st5[5];
  st5[0] = st5[4] = A * (-1.0 / 16.0) + B / (24.0 * h);
  st5[1] = st5[3] = A * (8.0 / 16.0) - B * (28.0 / (24.0 * h)) + Cq / (h * h);
  st5[2] = m0 + A * (18.0 / 16.0) + B * (54.0 / (24.0 * h)) - 2.0 * Cq / (h * h);
  // 3-band fallback for near-edge rows (second-order accurate).
  Complex st3[3];
  st3[0] = st3[2] = em2 * (0.25 * E) - em2 * s_e / h + 0.5 * m2 / (h * h);
  st3[1] = m0 + em2 * (0.5 * E) + 2.0 * em2 * s_e / h - m2 / (h * h);
  for (int i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      for (int o = -2; o <= 2; ++o) s(i, i + o) += st5[o + 2];
    } else if (i >= 1 && i + 1 < n) {
      for (int o = -1; o <= 1; ++o) s(i, i + o) += st3[o + 1];
    }
  }
  return s;
}

Matrix deriv_resolvent_matrix_from_w(const AxialGrid& grid, Complex w,
                                     bool corrected) {
  grid.validate();
  const int n = grid.n;
  const double h = grid.h();
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        m(i, j) = 0.0;  // principal value of the odd kernel
        continue;
      }
      const double d = grid.node(i) - grid.node(j);
      const double sg = (d > 0) ? 1.0 : -1.0;
      m(i, j) = h * 0.5 * kI * sg * std::exp(kI * w * std::abs(d));
    }
  }
  if (!corrected) return m;

  // Jump correction for the odd kernel x(u) = (i/2) sign(u) e^{iW|u|}:
  //   C_i = -m1 phi'_i - (m3/6) phi'''_i
  //       + (h^2/24) [ (WE/2)(phi_- - phi_+) + (iE/2)(phi'_- + phi'_+) ]
  //       - (7h^4/5760) [ -(W^3 E/2)(phi_- - phi_+)
  //                       - (3iW^2 E/2)(phi'_- + phi'_+)
  //                       + (3WE/2) h phi'''_i + iE phi'''_i ]
  // with E = e^{iWa}, a = h/2, m1 = i int_0^a u e^{iWu} du,
  // m3 = i int_0^a u^3 e^{iWu} du (series for small arguments).
  const double a = 0.5 * h;
  const Complex tau = kI * w;
  auto moment = [&](int pw) {  // i * int_0^a u^pw e^{tau u} du by series/closed form
    if (std::abs(tau) * a < 0.05) {
      Complex acc(0, 0);
      Complex tp(1.0, 0.0);
      double fact = 1.0;
      for (int nn2 = 0; nn2 <= 10; ++nn2) {
        if (nn2 > 0) fact *= nn2;
        acc += tp * (std::pow(a, nn2 + pw + 1) / (fact * (nn2 + pw + 1)));
        tp *= tau;
      }
      return kI * acc;
    }
    // closed forms for pw = 1, 3 by repeated integration by parts
    const Complex ea = std::exp(tau * a);
    if (pw == 1) return kI * (ea * (a / tau - 1.0 / (tau * tau)) + 1.0 / (tau * tau));
    const Complex t2 = tau * tau, t3 = t2 * tau, t4 = t3 * tau;
    return kI * (ea * (a * a * a / tau - 3.0 * a * a / t2 + 6.0 * a / t3 - 6.0 / t4) +
                 6.0 / t4);
  };
  const Complex m1 = moment(1);
  const Complex m3 = moment(3);
  const Complex E = std::exp(kI * w * a);
  const double em2 = h * h / 24.0;
  const double em4 = 7.0 * h * h * h * h / 5760.0;
  // stencil weights for phi_{i-2..i+2}
  // phi_- - phi_+      : (-1, 10, 0, -10, 1)/16
  // phi'_- + phi'_+    : (1, -26, 0, 26, -1)/(24h)
  // phi'_i (4th order) : (1, -8, 0, 8, -1)/(12h)
  // phi'''_i           : (-1, 2, 0, -2, 1)/(2h^3)
  const Complex cd = em2 * (0.5 * w * E) + em4 * (0.5 * w * w * w * E);
  const Complex cp = em2 * (0.5 * kI * E) + em4 * (1.5 * kI * w * w * E);
  const Complex c1 = -m1;
  const Complex c3 = -m3 / 6.0 + em4 * (1.5 * w * E * h - kI * E);
  Complex st[5];
  const double h3 = h * h * h;
  st[0] = cd * (-1.0 / 16.0) + cp / (24.0 * h) + c1 / (12.0 * h) + c3 * (-1.0 / (2.0 * h3));
  st[1] = cd * (10.0 / 16.0) - cp * (26.0 / (24.0 * h)) - c1 * (8.0 / (12.0 * h)) +
          c3 * (2.0 / (2.0 * h3));
  st[2] = Complex(0, 0);
  st[3] = -st[1];
  st[4] = -st[0];
  for (int i = 2; i + 2 < n; ++i)
    for (int o = -2; o <= 2; ++o) m(i, i + o) += st[o + 2];
  return m;
}

Matrix s_matrix(const AxialGrid& grid, Complex k, double mass, int sign_m,
                bool corrected) {
  DIRAC_REQUIRE(sign_m == 1 || sign_m == -1, "s_matrix: sign_m must be +-1");
  if (k == Complex(0.0, 0.0)) return s_matrix_from_w(grid, Complex(0.0, 0.0), corrected);
  const double mt = sign_m * mass;
  // z + mt = 2*mt/(1 - k^2) on the z_{mt}(k) curve.
  const Complex w_sq = k * k * std::pow(2.0 * mt / (1.0 - k * k), 2);
  return s_matrix_from_w(grid, branch_sqrt(w_sq), corrected);
}

Matrix resolvent_matrix(const AxialGrid& grid, Complex z, bool corrected) {
  const int n = grid.n;
  const double h = grid.h();
  if (!corrected) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = h * resolvent_kernel(z, grid.node(i), grid.node(j));
    return m;
  }
  const Complex w = branch_sqrt(z);
  Matrix m = s_matrix_from_w(grid, w, true);
  m.array() += h * kI / (2.0 * w);
  return m;
}

Matrix limiting_matrix(const AxialGrid& grid, double lambda) {
  const int n = grid.n;
  const double h = grid.h();
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = h * limiting_kernel(lambda, grid.node(i), grid.node(j));
  return m;
}

RankOneFactors rank_one_a(const AxialGrid& grid,
                          const std::function<double(double)>& g_axial) {
  grid.validate();
  const int n = grid.n;
  const double sqh = std::sqrt(grid.h());
  RankOneFactors out;
  out.c.resize(n);
  for (int j = 0; j < n; ++j) {
    const double g = g_axial(grid.node(j));
    DIRAC_REQUIRE(g > 0.0, "rank_one_a: axial profile must be > 0");
    out.c(j) = sqh * std::sqrt(g);
  }
  out.a = (0.5 * kI) * (out.c * out.c.adjoint());
  return out;
}

AxialOperators::AxialOperators(const AxialGrid& grid) : grid_(grid) {
  grid.validate();
  const int n = grid.n;
  modes_.resize(n, n);
  kappa_.resize(n);
  const double norm = 1.0 / std::sqrt(double(n));
  for (int c = 0; c < n; ++c) {
    const int p = c - n / 2;
    const double kp = kPi * p / grid.halfwidth;
    kappa_(c) = kp;  // true symbol, including the unpaired Nyquist mode
    for (int j = 0; j < n; ++j)
      modes_(j, c) = norm * std::exp(kI * kp * grid.node(j));
  }
  deriv_ = modes_ * kappa_.asDiagonal() * modes_.adjoint();
  deriv_ = 0.5 * (deriv_ + deriv_.adjoint()).eval();
}

Matrix AxialOperators::second_derivative_resolvent(Complex zeta) const {
  const int n = grid_.n;
  Vector d(n);
  for (int c = 0; c < n; ++c) {
    const Complex den = kappa_(c) * kappa_(c) - zeta;
    DIRAC_REQUIRE(std::abs(den) > 1e-300,
                  "second_derivative_resolvent: zeta hits a grid mode");
    d(c) = 1.0 / den;
  }
  return modes_ * d.asDiagonal() * modes_.adjoint();
}

Matrix AxialOperators::apply_second_derivative_resolvent(Complex zeta,
                                                         const Matrix& x) const {
  const int n = grid_.n;
  Vector d(n);
  for (int c = 0; c < n; ++c) d(c) = 1.0 / (kappa_(c) * kappa_(c) - zeta);
  return modes_ * (d.asDiagonal() * (modes_.adjoint() * x));
}

}  // namespace dirac
