#include "dirac/det_index.hpp"

#include <cmath>

#include "dirac/linalg.hpp"

namespace dirac {

Contour Contour::circle(Complex center, double radius, int initial_nodes) {
  DIRAC_REQUIRE(radius > 0.0 && initial_nodes >= 8, "Contour::circle: bad input");
  Contour c;
  for (int i = 0; i < initial_nodes; ++i) {
    const double t = 2.0 * kPi * i / initial_nodes;
    c.vertices_.push_back(center + std::polar(radius, t));
  }
  return c;
}

Contour Contour::rectangle(Complex lo, Complex hi, int nodes_per_side) {
  DIRAC_REQUIRE(hi.real() > lo.real() && hi.imag() > lo.imag(),
                "Contour::rectangle: degenerate corners");
  Contour c;
  const Complex corners[4] = {lo, Complex(hi.real(), lo.imag()), hi,
                              Complex(lo.real(), hi.imag())};
  for (int side = 0; side < 4; ++side) {
    const Complex a = corners[side], b = corners[(side + 1) % 4];
    for (int i = 0; i < nodes_per_side; ++i)
      c.vertices_.push_back(a + (b - a) * (double(i) / nodes_per_side));
  }
  return c;
}

Contour Contour::polyline(std::vector<Complex> vertices) {
  DIRAC_REQUIRE(vertices.size() >= 3, "Contour::polyline: need >= 3 vertices");
  Contour c;
  c.vertices_ = std::move(vertices);
  return c;
}

double Contour::diameter() const {
  double d = 0.0;
  for (size_t i = 0; i < vertices_.size(); ++i)
    for (size_t j = i + 1; j < vertices_.size(); ++j)
      d = std::max(d, std::abs(vertices_[i] - vertices_[j]));
  return d;
}

Complex det_reg(const Matrix& t, double q) {
  DIRAC_REQUIRE(t.rows() == t.cols(), "det_reg: matrix must be square");
  DIRAC_REQUIRE(q >= 1.0, "det_reg: q >= 1");
  const int p = static_cast<int>(std::ceil(q - 1e-12));
  Vector mu = linalg::eigenvalues(t);
  Complex out(1.0, 0.0);
  for (int i = 0; i < mu.size(); ++i) {
    Complex corr(0.0, 0.0);
    Complex pw = mu(i);
    for (int k = 1; k <= p - 1; ++k) {
      corr += pw / double(k);
      pw *= mu(i);
    }
    out *= (1.0 - mu(i)) * std::exp(corr);
  }
  return out;
}

std::pair<Complex, Complex> det_commute_check(const Matrix& a, const Matrix& b,
                                              double q) {
  DIRAC_REQUIRE(a.cols() == b.rows() && b.cols() == a.rows(),
                "det_commute_check: AB and BA must be square");
  return {det_reg(a * b, q), det_reg(b * a, q)};
}

double lipschitz_bound(const Matrix& t1, const Matrix& t2, double q,
                       double gamma_q) {
  const int p = static_cast<int>(std::ceil(q - 1e-12));
  const double diff = linalg::schatten_norm(t1 - t2, q);
  const double balls = linalg::schatten_norm(t1, q) + linalg::schatten_norm(t2, q);
  return diff * std::exp(gamma_q * std::pow(balls + 1.0, p));
}

namespace {

double wrap_to_pi(double x) { return std::remainder(x, 2.0 * kPi); }

struct Sample {
  double t;   // parameter on the segment [0,1]
  Complex lf; // log f
};

}  // namespace

int winding_number(const std::function<Complex(Complex)>& log_f,
                   const Contour& contour, const WindingOptions& opt,
                   double* residual_out) {
  const auto& v = contour.vertices();
  const size_t n = v.size();
  double total = 0.0;
  auto eval = [&](Complex z) {
    const Complex lf = log_f(z);
    DIRAC_REQUIRE(std::isfinite(lf.real()) && std::isfinite(lf.imag()),
                  "winding_number: integrand invalid on contour");
    return lf;
  };
  Complex first = eval(v[0]);
  Complex prev = first;
  for (size_t i = 0; i < n; ++i) {
    const Complex za = v[i];
    const Complex zb = v[(i + 1) % n];
    // adaptive bisection of the segment za -> zb
    std::vector<Sample> stack;  // pending right endpoints, descending t
    Sample cur{0.0, prev};
    stack.push_back({1.0, (i + 1 == n) ? first : eval(zb)});
    int depth_guard = 0;
    while (!stack.empty()) {
      Sample right = stack.back();
      const double dphase = wrap_to_pi(right.lf.imag() - cur.lf.imag());
      const double dlog = right.lf.real() - cur.lf.real();
      if ((std::abs(dphase) <= opt.max_phase_step &&
           std::abs(dlog) <= opt.max_log_step) ||
          (right.t - cur.t) <= opt.min_param_step) {
        if ((right.t - cur.t) <= opt.min_param_step &&
            (std::abs(dphase) > opt.max_phase_step ||
             std::abs(dlog) > opt.max_log_step))
          throw ContourUnsafe(
              "winding_number: refinement exhausted (zero near contour?)");
        total += dphase;
        cur = right;
        stack.pop_back();
      } else {
        if (++depth_guard > (1 << opt.max_depth))
          throw ContourUnsafe("winding_number: refinement budget exhausted");
        const double tm = 0.5 * (cur.t + right.t);
        stack.push_back({tm, eval(za + (zb - za) * tm)});
      }
    }
    prev = cur.lf;
  }
  const double w = total / (2.0 * kPi);
  const double rounded = std::lround(w);
  if (residual_out) *residual_out = std::abs(w - rounded);
  DIRAC_REQUIRE(std::abs(w - rounded) < opt.integer_tol,
                "winding_number: residual from integer exceeds tolerance");
  return static_cast<int>(std::lround(w));
}

int scalar_index(const std::function<Complex(Complex)>& f,
                 const Contour& contour, const WindingOptions& opt,
                 double* residual_out) {
  auto log_f = [&f](Complex z) {
    const Complex fz = f(z);
    if (!(std::abs(fz) > 0.0) || !std::isfinite(std::abs(fz)))
      throw ContourUnsafe("scalar_index: f vanishes on the contour");
    return Complex(std::log(std::abs(fz)), std::arg(fz));
  };
  return winding_number(log_f, contour, opt, residual_out);
}

int operator_index(const std::function<Matrix(Complex)>& a,
                   const Contour& contour, double rel_step) {
  const double h = rel_step * contour.diameter();
  DIRAC_REQUIRE(h > 0.0, "operator_index: degenerate contour");
  auto integrand = [&](Complex z) {
    // Richardson-extrapolated central difference for A'(z).
    Matrix d1 = (a(z + h) - a(z - h)) / (2.0 * h);
    Matrix d2 = (a(z + 2.0 * h) - a(z - 2.0 * h)) / (4.0 * h);
    Matrix ap = (4.0 * d1 - d2) / 3.0;
    Matrix az = a(z);
    Matrix x = linalg::solve(az, ap);  // A^{-1} A'
    return x.trace();
  };
  const auto& v = contour.vertices();
  const size_t nv = v.size();
  auto integrate = [&](int subdiv) {
    Complex acc(0.0, 0.0);
    for (size_t i = 0; i < nv; ++i) {
      const Complex za = v[i], zb = v[(i + 1) % nv];
      const Complex dz = (zb - za) / double(subdiv);
      Complex prevval = integrand(za);
      for (int s = 1; s <= subdiv; ++s) {
        const Complex znext = za + dz * double(s);
        const Complex nextval = integrand(znext);
        acc += 0.5 * (prevval + nextval) * dz;
        prevval = nextval;
      }
    }
    return acc / (2.0 * kPi * kI);
  };
  Complex val = integrate(1);
  for (int subdiv = 2; subdiv <= 64; subdiv *= 2) {
    const Complex next = integrate(subdiv);
    const double settle = std::abs(next - val);
    val = next;
    const double res = std::abs(val - Complex(std::lround(val.real()), 0.0));
    if (settle < 5e-4 && res < 1e-3) break;
  }
  const double rounded = std::lround(val.real());
  if (!(std::abs(val - Complex(rounded, 0.0)) < 1e-3))
    throw ContourUnsafe("operator_index: quadrature did not settle on an integer");
  return static_cast<int>(rounded);
}

double jensen_count_bound(const std::function<Complex(Complex)>& g,
                          Complex center, double radius, double c_prime) {
  const Complex g0 = g(center);
  DIRAC_REQUIRE(std::abs(g0) > 1e-300, "jensen_count_bound: g(center) ~ 0");
  double mean = 0.0;
  int nodes = 128;
  double prev = 1e300;
  for (int round = 0; round < 8; ++round) {
    mean = 0.0;
    for (int i = 0; i < nodes; ++i) {
      const Complex z = center + std::polar(radius, 2.0 * kPi * i / nodes);
      const double av = std::abs(g(z));
      DIRAC_REQUIRE(av > 0.0, "jensen_count_bound: g vanishes on the boundary");
      mean += std::log(av);
    }
    mean /= nodes;
    if (std::abs(mean - prev) < 1e-9 * (1.0 + std::abs(mean))) break;
    prev = mean;
    nodes *= 2;
  }
  return c_prime * (mean - std::log(std::abs(g0)));
}

}  // namespace dirac
