#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "special.hpp"

namespace bargmann::quadrature {

enum class MeasureKind { GaussLine, WeightedHalfLine, Disk, GaussianPlane };

struct Measure {
  MeasureKind kind = MeasureKind::GaussLine;
  double param = 0.0;  // alpha for WeightedHalfLine, gamma for Disk

  double total_mass() const {
    switch (kind) {
      case MeasureKind::GaussLine: return std::sqrt(special::pi);
      case MeasureKind::WeightedHalfLine: return std::tgamma(param + 1.0);
      case MeasureKind::Disk: return special::pi / (param + 1.0);
      case MeasureKind::GaussianPlane: return special::pi;
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind) {
      case MeasureKind::GaussLine: return "GaussLine";
      case MeasureKind::WeightedHalfLine: return "WeightedHalfLine(" + std::to_string(param) + ")";
      case MeasureKind::Disk: return "Disk(" + std::to_string(param) + ")";
      case MeasureKind::GaussianPlane: return "GaussianPlane";
    }
    return "?";
  }
};

struct QuadratureRule {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  Measure measure;
  int order = 0;  // guaranteed polynomial exactness degree

  std::size_t size() const { return nodes.size(); }

  std::vector<double> real_nodes() const {
    std::vector<double> x(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) x[i] = nodes[i].real();
    return x;
  }
};

// Three-term recurrence x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1} for the
// orthonormal polynomials of a weight with total mass mu0. a has n entries, b has n+1 (b[0] unused).
struct Recurrence {
  std::vector<double> a;
  std::vector<double> b;
  double mu0 = 1.0;
};

namespace detail {

// Eigenvalues of a symmetric tridiagonal matrix (implicit QL with Wilkinson shifts).
inline std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
  const int n = static_cast<int>(d.size());
  e.resize(n, 0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) + dd == dd) break;
      }
      if (m != l) {
        if (++iter > 200) throw std::runtime_error("tridiagonal_eigenvalues: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double bb = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * bb;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - bb;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

struct Eval {
  double pn = 0.0, dpn = 0.0;  // scaled p_n and p_n'
  double log_sum_sq = 0.0;     // log of sum_{k<n} p_k^2 (orthonormal, p_0 = 1/sqrt(mu0))
};

// Orthonormal recurrence with rescaling so that large nodes (e.g. Laguerre) never overflow.
inline Eval evaluate(const Recurrence& rc, int n, double x) {
  double p0 = 0.0, p1 = 1.0 / std::sqrt(rc.mu0);
  double d0 = 0.0, d1 = 0.0;
  double sum = 0.0, log_scale = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += p1 * p1;
    const double p2 = ((x - rc.a[k]) * p1 - rc.b[k] * p0) / rc.b[k + 1];
    const double d2 = ((x - rc.a[k]) * d1 + p1 - rc.b[k] * d0) / rc.b[k + 1];
    p0 = p1;
    p1 = p2;
    d0 = d1;
    d1 = d2;
    const double mag = std::max(std::abs(p1), std::abs(p0));
    if (mag > 1e150) {
      const double s = 1.0 / mag;
      p0 *= s;
      p1 *= s;
      d0 *= s;
      d1 *= s;
      sum *= s * s;
      log_scale += std::log(mag);
    }
  }
  return {p1, d1, std::log(sum) + 2.0 * log_scale};
}

// Golub-Welsch nodes, Newton polish on p_n, Christoffel weights 1 / sum p_k^2.
inline std::pair<std::vector<double>, std::vector<double>> gauss_from_recurrence(const Recurrence& rc, int n) {
  std::vector<double> off(n, 0.0);
  for (int k = 1; k < n; ++k) off[k - 1] = rc.b[k];
  std::vector<double> x = tridiagonal_eigenvalues(std::vector<double>(rc.a.begin(), rc.a.begin() + n), off);
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    for (int it = 0; it < 8; ++it) {
      const Eval ev = evaluate(rc, n, x[i]);
      if (ev.dpn == 0.0) break;
      const double dx = ev.pn / ev.dpn;
      x[i] -= dx;
      if (std::abs(dx) <= 4e-16 * std::max(1.0, std::abs(x[i]))) break;
    }
    w[i] = std::exp(-evaluate(rc, n, x[i]).log_sum_sq);
  }
  return {x, w};
}

inline Recurrence hermite_recurrence(int n) {
  Recurrence rc;
  rc.a.assign(n, 0.0);
  rc.b.assign(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) rc.b[k] = std::sqrt(0.5 * k);
  rc.mu0 = std::sqrt(special::pi);
  return rc;
}

inline Recurrence laguerre_recurrence(int n, double alpha) {
  Recurrence rc;
  rc.a.resize(n);
  rc.b.assign(n + 1, 0.0);
  for (int k = 0; k < n; ++k) rc.a[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k <= n; ++k) rc.b[k] = std::sqrt(k * (k + alpha));
  rc.mu0 = std::tgamma(alpha + 1.0);
  return rc;
}

// Weight (1-x)^a (1+x)^b on [-1, 1].
inline Recurrence jacobi_recurrence(int n, double a, double b) {
  Recurrence rc;
  rc.a.resize(n);
  rc.b.assign(n + 1, 0.0);
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    rc.a[k] = k == 0 ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k <= n; ++k) {
    const double s = 2.0 * k + ab;
    double beta;
    if (k == 1)
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    else
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    rc.b[k] = std::sqrt(beta);
  }
  rc.mu0 = std::exp((ab + 1.0) * std::log(2.0) + special::log_beta(a + 1.0, b + 1.0));
  return rc;
}

inline void require_order(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": number of points must be >= 1");
}

}  // namespace detail

// Gauss-Jacobi nodes/weights on [-1, 1] for (1-x)^a (1+x)^b.
inline std::pair<std::vector<double>, std::vector<double>> gauss_jacobi(int n, double a, double b) {
  detail::require_order(n, "gauss_jacobi");
  if (!(a > -1.0) || !(b > -1.0)) throw std::invalid_argument("gauss_jacobi: exponents must be > -1");
  return detail::gauss_from_recurrence(detail::jacobi_recurrence(n, a, b), n);
}

inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

inline QuadratureRule gauss_line(int n) {
  detail::require_order(n, "gauss_line");
  auto [x, w] = detail::gauss_from_recurrence(detail::hermite_recurrence(n), n);
  for (int i = 0; i < n / 2; ++i) {  // exact symmetry
    const double s = 0.5 * (x[n - 1 - i] - x[i]);
    const double ws = 0.5 * (w[i] + w[n - 1 - i]);
    x[i] = -s;
    x[n - 1 - i] = s;
    w[i] = w[n - 1 - i] = ws;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  QuadratureRule r;
  r.nodes.assign(x.begin(), x.end());
  r.weights = std::move(w);
  r.measure = {MeasureKind::GaussLine, 0.0};
  r.order = 2 * n - 1;
  return r;
}

inline QuadratureRule gauss_halfline(int n, double alpha) {
  detail::require_order(n, "gauss_halfline");
  if (!(alpha > -1.0)) throw std::invalid_argument("gauss_halfline: alpha must be > -1");
  auto [x, w] = detail::gauss_from_recurrence(detail::laguerre_recurrence(n, alpha), n);
  QuadratureRule r;
  r.nodes.assign(x.begin(), x.end());
  r.weights = std::move(w);
  r.measure = {MeasureKind::WeightedHalfLine, alpha};
  r.order = 2 * n - 1;
  return r;
}

namespace detail {

// Radial Gauss-Jacobi rule in u = r^2 for (1-u)^gamma du / 2 on (0, 1).
inline std::pair<std::vector<double>, std::vector<double>> radial_rule(int n_r, double gamma) {
  auto [s, ws] = gauss_jacobi(n_r, gamma, 0.0);
  const double scale = std::pow(2.0, -gamma - 2.0);
  std::vector<double> u(n_r), wu(n_r);
  for (int i = 0; i < n_r; ++i) {
    u[i] = 0.5 * (1.0 + s[i]);
    wu[i] = scale * ws[i];
  }
  return {u, wu};
}

inline void append_ring(QuadratureRule& r, double u, double wu, int n_theta) {
  const double rad = std::sqrt(u);
  const double wt = wu * 2.0 * special::pi / n_theta;
  for (int k = 0; k < n_theta; ++k) {
    const double th = 2.0 * special::pi * k / n_theta;
    r.nodes.push_back(std::polar(rad, th));
    r.weights.push_back(wt);
  }
}

}  // namespace detail

inline QuadratureRule disk_rule(int n_r, int n_theta, double gamma) {
  detail::require_order(n_r, "disk_rule");
  detail::require_order(n_theta, "disk_rule");
  if (!(gamma > -1.0)) throw std::invalid_argument("disk_rule: gamma must be > -1");
  auto [u, wu] = detail::radial_rule(n_r, gamma);
  QuadratureRule r;
  r.nodes.reserve(static_cast<std::size_t>(n_r) * n_theta);
  r.weights.reserve(static_cast<std::size_t>(n_r) * n_theta);
  for (int i = 0; i < n_r; ++i) detail::append_ring(r, u[i], wu[i], n_theta);
  r.measure = {MeasureKind::Disk, gamma};
  r.order = std::min(2 * n_r - 1, n_theta - 1);
  return r;
}

// Disk rule whose angular resolution grows toward the boundary: the ring at radius r
// carries max(n_theta_min, ceil(ring_factor / (1 - r))) points.
inline QuadratureRule graded_disk_rule(int n_r, int n_theta_min, double gamma, double ring_factor) {
  detail::require_order(n_r, "graded_disk_rule");
  detail::require_order(n_theta_min, "graded_disk_rule");
  if (!(gamma > -1.0)) throw std::invalid_argument("graded_disk_rule: gamma must be > -1");
  if (!(ring_factor >= 0.0)) throw std::invalid_argument("graded_disk_rule: ring factor must be >= 0");
  auto [u, wu] = detail::radial_rule(n_r, gamma);
  QuadratureRule r;
  for (int i = 0; i < n_r; ++i) {
    const double rad = std::sqrt(u[i]);
    const int nt = std::max(n_theta_min, static_cast<int>(std::ceil(ring_factor / (1.0 - rad))));
    detail::append_ring(r, u[i], wu[i], nt);
  }
  r.measure = {MeasureKind::Disk, gamma};
  r.order = std::min(2 * n_r - 1, n_theta_min - 1);
  return r;
}

inline QuadratureRule gaussian_plane_rule(int n) {
  detail::require_order(n, "gaussian_plane_rule");
  const QuadratureRule line = gauss_line(n);
  QuadratureRule r;
  r.nodes.reserve(static_cast<std::size_t>(n) * n);
  r.weights.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      r.nodes.emplace_back(line.nodes[i].real(), line.nodes[k].real());
      r.weights.push_back(line.weights[i] * line.weights[k]);
    }
  r.measure = {MeasureKind::GaussianPlane, 0.0};
  r.order = 2 * n - 1;
  return r;
}

template <class F>
cplx integrate(const QuadratureRule& rule, F&& f) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * cplx(f(rule.nodes[i]));
  return s;
}

inline cplx integrate_values(const QuadratureRule& rule, const std::vector<cplx>& values) {
  if (values.size() != rule.size()) throw std::invalid_argument("integrate: value count does not match node count");
  cplx s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * values[i];
  return s;
}

}  // namespace bargmann::quadrature
