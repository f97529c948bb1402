#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quadrature.hpp"
#include "special.hpp"

namespace bargmann::kernels {

using quadrature::QuadratureRule;
using special::BasisFamily;
using special::pi;

namespace detail {

inline void require_disk(cplx z, const char* who) {
  if (!(std::norm(z) < 1.0)) throw std::domain_error(std::string(who) + ": z must lie in the open unit disk");
}

template <class X>
void require_nonnegative(X x, const char* who) {
  if constexpr (std::is_same_v<X, double>)
    if (x < 0.0) throw std::domain_error(std::string(who) + ": x must be nonnegative");
}

inline void check_eigen_params(double nu, int ell) {
  if (!(nu > 0.5)) throw std::invalid_argument("nu must be > 1/2");
  if (ell < 0 || ell > static_cast<int>(std::floor(nu - 0.5)))
    throw std::invalid_argument("ell must lie in [0, floor(nu - 1/2)]");
  if (!(2.0 * (nu - ell) - 1.0 > 0.0)) throw std::invalid_argument("2(nu - ell) - 1 must be positive");
}

}  // namespace detail

// ---- closed-form kernels ------------------------------------------------

template <class X>
cplx classical_kernel(cplx z, X x) {
  return std::pow(pi, -0.75) * std::exp(std::sqrt(2.0) * cplx(x) * z - 0.5 * z * z);
}

inline cplx classical_kernel_flat(cplx z, double x) { return classical_kernel(z, x) * std::exp(-0.5 * x * x); }

template <class X>
cplx second_kernel(double delta, cplx z, X x) {
  if (!(delta > 0.0)) throw std::invalid_argument("second_kernel: delta must be > 0");
  detail::require_disk(z, "second_kernel");
  detail::require_nonnegative(x, "second_kernel");
  const cplx w = 1.0 - z;
  return std::exp(-0.5 * std::lgamma(delta + 1.0)) * std::pow(w, -delta - 1.0) * std::exp(-cplx(x) * z / w);
}

// Kernel against x^delta / Gamma(1 + delta) dx.
inline cplx second_kernel_flat(double delta, cplx z, double x) {
  return std::exp(0.5 * std::lgamma(delta + 1.0) - 0.5 * x) * second_kernel(delta, z, x);
}

// Sign (-1)^ell makes the closed form agree with sum_j phi_j(x) psi_j^{nu,ell}(z).
template <class X>
cplx generalized_second_kernel(double nu, int ell, cplx z, X x) {
  detail::check_eigen_params(nu, ell);
  detail::require_disk(z, "generalized_second_kernel");
  detail::require_nonnegative(x, "generalized_second_kernel");
  const double beta = 2.0 * (nu - ell) - 1.0;
  const cplx w = 1.0 - z;
  const double q = (1.0 - std::norm(z)) / std::norm(w);
  const double pref = ((ell % 2 == 0) ? 1.0 : -1.0) *
                      std::exp(0.5 * (special::log_factorial(ell) + std::log(beta) - std::log(pi) -
                                      std::lgamma(2.0 * nu - ell)));
  return pref * std::pow(q, -static_cast<double>(ell)) * std::pow(w, -2.0 * nu) * std::exp(-cplx(x) * z / w) *
         special::laguerre(ell, beta, cplx(x) * q);
}

// ---- Dirichlet kernel -----------------------------------------------------

inline constexpr int default_dirichlet_points = 200;

inline QuadratureRule dirichlet_rule(int n = default_dirichlet_points) { return quadrature::gauss_halfline(n, 0.5); }

namespace detail {
inline void require_sqrt_rule(const QuadratureRule& rule) {
  if (rule.measure.kind != quadrature::MeasureKind::WeightedHalfLine || rule.measure.param != 0.5)
    throw std::invalid_argument("dirichlet_kernel: rule must be a half-line rule with alpha = 1/2");
}
}  // namespace detail

inline cplx dirichlet_kernel(cplx z, double x, const QuadratureRule& rule) {
  detail::require_disk(z, "dirichlet_kernel");
  detail::require_nonnegative(x, "dirichlet_kernel");
  detail::require_sqrt_rule(rule);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const cplx s = z * std::exp(-rule.nodes[i].real());
    const cplx q = 1.0 / (1.0 - s);
    acc += rule.weights[i] * q * q * std::exp(-x * s * q) * (1.0 - x * q);
  }
  return (1.0 + z * acc / std::tgamma(1.5)) / std::sqrt(pi);
}

// Kernel against dx: the unitary factor x -> e^{x/2} composed with the e^{-x} density.
inline cplx dirichlet_kernel_flat(cplx z, double x, const QuadratureRule& rule) {
  return std::exp(-0.5 * x) * dirichlet_kernel(z, x, rule);
}

// ---- series evaluation ------------------------------------------------------

// Smallest J with r^J J^{3/4} <= tol.
inline int default_series_truncation(double r, double tol = 1e-12, int cap = 20000) {
  if (!(r < 1.0)) throw std::domain_error("series truncation: |z| must be < 1");
  if (r <= 0.0) return 1;
  for (int J = 1; J <= cap; ++J)
    if (J * std::log(r) + 0.75 * std::log(static_cast<double>(J)) <= std::log(tol)) return J;
  return cap;
}

inline std::vector<double> laguerre_sequence(int J, double alpha, double x) {
  std::vector<double> L(J + 1);
  L[0] = 1.0;
  if (J >= 1) L[1] = 1.0 + alpha - x;
  for (int k = 1; k < J; ++k) L[k + 1] = ((2.0 * k + 1.0 + alpha - x) * L[k] - (k + alpha) * L[k - 1]) / (k + 1.0);
  return L;
}

// sum_{j <= J} phi_j(x) psi_j(z) with the source and target bases given.
inline cplx basis_series(const BasisFamily& source, const BasisFamily& target, cplx z, double x, int J) {
  cplx s = 0.0;
  if (source.space == special::Space::LaguerreL2) {
    const auto L = laguerre_sequence(J, source.alpha, x);
    for (int j = 0; j <= J; ++j) {
      const double phi = std::exp(0.5 * (special::log_factorial(j) - std::lgamma(source.alpha + j + 1.0))) * L[j];
      s += phi * special::basis_eval(target, j, z);
    }
    return s;
  }
  for (int j = 0; j <= J; ++j) s += special::basis_eval(source, j, x) * special::basis_eval(target, j, z);
  return s;
}

inline cplx dirichlet_kernel_series(cplx z, double x, int J) {
  detail::require_disk(z, "dirichlet_kernel_series");
  const auto L = laguerre_sequence(J, 0.0, x);
  cplx s = 1.0, zp = 1.0;
  for (int j = 1; j <= J; ++j) {
    zp *= z;
    s += zp * L[j] / std::sqrt(static_cast<double>(j));
  }
  return s / std::sqrt(pi);
}

// ---- omega weight -----------------------------------------------------------

enum class ConvolutionOrder { LeftToRight, Reversed };

namespace detail {

inline double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// c_n = sum_{k=0}^{n} f_k g_{n-k}
inline std::vector<double> raw_convolution(const std::vector<double>& f, const std::vector<double>& g) {
  const std::size_t N = f.size();
  std::vector<double> grev(g.rbegin(), g.rend());
  std::vector<double> c(N);
  for (std::size_t n = 0; n < N; ++n) c[n] = dot(f.data(), grev.data() + (N - 1 - n), n + 1);
  return c;
}

inline std::vector<double> trapezoid_convolution(const std::vector<double>& f, const std::vector<double>& g,
                                                 double h) {
  std::vector<double> c = raw_convolution(f, g);
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = h * (c[n] - 0.5 * (f[n] * g[0] + f[0] * g[n]));
  return c;
}

// int_0^{t_n} sqrt(u) e^{-u} g(t_n - u) du, exact against sqrt(u) for a piecewise
// linear interpolant of e^{-u} g(t_n - u).
inline std::vector<double> sqrt_exp_convolution(const std::vector<double>& g, double h) {
  const std::size_t N = g.size();
  std::vector<double> A(N, 0.0), B(N, 0.0);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const double u0 = h * i, u1 = h * (i + 1);
    const double I0 = (2.0 / 3.0) * (std::pow(u1, 1.5) - std::pow(u0, 1.5));
    const double I1 = (2.0 / 5.0) * (std::pow(u1, 2.5) - std::pow(u0, 2.5));
    A[i] = (u1 * I0 - I1) / h;
    B[i] = (I1 - u0 * I0) / h;
  }
  std::vector<double> p(N);
  for (std::size_t k = 0; k < N; ++k) p[k] = (A[k] + (k > 0 ? B[k - 1] : 0.0)) * std::exp(-h * k);
  std::vector<double> c = raw_convolution(p, g);
  for (std::size_t n = 0; n < N; ++n) c[n] -= A[n] * std::exp(-h * n) * g[0];
  return c;
}

// (sqrt(t) e^{-l t}) * (e^{-(alpha+l) t} / sqrt(t)) = 2 t e^{-l t} int_0^{pi/2} cos^2 e^{-alpha t sin^2} (s = t sin^2)
inline std::vector<double> inner_factor(double alpha, int l, double h, std::size_t N) {
  static const auto gl = quadrature::gauss_legendre(64);
  std::vector<double> th(gl.first.size()), wth(gl.first.size());
  for (std::size_t i = 0; i < th.size(); ++i) {
    th[i] = 0.25 * pi * (gl.first[i] + 1.0);
    wth[i] = 0.25 * pi * gl.second[i];
  }
  std::vector<double> out(N);
  for (std::size_t k = 0; k < N; ++k) {
    const double t = h * k;
    double s = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) {
      const double sn = std::sin(th[i]), cs = std::cos(th[i]);
      s += wth[i] * cs * cs * std::exp(-alpha * t * sn * sn);
    }
    out[k] = 2.0 * t * std::exp(-l * t) * s;
  }
  return out;
}

}  // namespace detail

inline std::vector<double> omega_samples(double alpha, int m, double h, std::size_t N,
                                         ConvolutionOrder order = ConvolutionOrder::LeftToRight) {
  std::vector<std::vector<double>> phi;
  for (int l = 2; l <= m; ++l) phi.push_back(detail::inner_factor(alpha, l, h, N));
  if (order == ConvolutionOrder::LeftToRight) {
    std::vector<double> w = detail::sqrt_exp_convolution(phi[0], h);
    for (std::size_t i = 1; i < phi.size(); ++i) w = detail::trapezoid_convolution(w, phi[i], h);
    return w;
  }
  std::vector<double> v = phi.back();
  for (std::size_t i = phi.size() - 1; i-- > 0;) v = detail::trapezoid_convolution(phi[i], v, h);
  return detail::sqrt_exp_convolution(v, h);
}

struct OmegaOptions {
  bool companion = true;   // also sample on the 2h grid for extrapolated integrals
  bool self_check = true;  // recompute in reversed association order
};

class OmegaWeight {
 public:
  double alpha = 0.0;
  int m = 2;
  double T = 0.0;  // effective end point N h
  double h = 0.0;
  std::vector<double> values;       // omega(k h), k = 0..N
  std::vector<double> coarse;       // omega(2 k h), empty without companion
  double reversed_discrepancy = -1;  // max |LR - reversed| / max |omega|, < 0 when not computed

  std::size_t size() const { return values.size(); }
  double t(std::size_t k) const { return h * k; }
  bool has_companion() const { return !coarse.empty(); }

  double laplace(double j) const {
    double s = 0.0;
    const std::size_t N = values.size();
    for (std::size_t k = 0; k < N; ++k) s += values[k] * std::exp(-j * h * k);
    s -= 0.5 * (values[0] + values[N - 1] * std::exp(-j * h * (N - 1)));
    return h * s;
  }

  double laplace_extrapolated(double j) const {
    if (!has_companion()) return laplace(j);
    double s = 0.0;
    const std::size_t M = coarse.size();
    for (std::size_t k = 0; k < M; ++k) s += coarse[k] * std::exp(-j * 2.0 * h * k);
    s -= 0.5 * (coarse[0] + coarse[M - 1] * std::exp(-j * 2.0 * h * (M - 1)));
    return (4.0 * laplace(j) - 2.0 * h * s) / 3.0;
  }

  // int_0^T omega(t) g(t) dt from g sampled on the fine grid.
  cplx integrate(const std::vector<cplx>& g) const {
    const std::size_t N = values.size();
    if (g.size() != N) throw std::invalid_argument("OmegaWeight::integrate: sample count mismatch");
    cplx fine = 0.0;
    for (std::size_t k = 0; k < N; ++k) fine += values[k] * g[k];
    fine = h * (fine - 0.5 * (values[0] * g[0] + values[N - 1] * g[N - 1]));
    if (!has_companion()) return fine;
    const std::size_t M = coarse.size();
    cplx crs = 0.0;
    for (std::size_t k = 0; k < M; ++k) crs += coarse[k] * g[2 * k];
    crs = 2.0 * h * (crs - 0.5 * (coarse[0] * g[0] + coarse[M - 1] * g[2 * (M - 1)]));
    return (4.0 * fine - crs) / 3.0;
  }

  // sup_t omega(t) / (t^p sqrt(t) e^{-t}) over grid points t > 0.
  double envelope(double p) const {
    double best = 0.0;
    for (std::size_t k = 1; k < values.size(); ++k) {
      const double t = h * k;
      best = std::max(best, values[k] / (std::pow(t, p + 0.5) * std::exp(-t)));
    }
    return best;
  }

  double min_value() const { return *std::min_element(values.begin(), values.end()); }
};

inline OmegaWeight omega(double alpha, int m, double T, double h, OmegaOptions opt = {}) {
  if (!(alpha > -1.0)) throw std::invalid_argument("omega: alpha must be > -1");
  if (m < 2) throw std::invalid_argument("omega: m must be >= 2");
  if (!(T > 0.0) || !(h > 0.0) || h > T) throw std::invalid_argument("omega: need T > 0 and 0 < h <= T");
  std::size_t N = static_cast<std::size_t>(std::llround(T / h));
  if (N < 2) N = 2;
  if (N % 2) ++N;
  OmegaWeight w;
  w.alpha = alpha;
  w.m = m;
  w.h = h;
  w.T = h * N;
  w.values = omega_samples(alpha, m, h, N + 1);
  if (opt.companion) w.coarse = omega_samples(alpha, m, 2.0 * h, N / 2 + 1);
  if (opt.self_check) {
    const auto rev = omega_samples(alpha, m, h, N + 1, ConvolutionOrder::Reversed);
    double diff = 0.0, top = 0.0;
    for (std::size_t k = 0; k <= N; ++k) {
      diff = std::max(diff, std::abs(rev[k] - w.values[k]));
      top = std::max(top, std::abs(w.values[k]));
    }
    w.reversed_discrepancy = top > 0.0 ? diff / top : diff;
  }
  return w;
}

// Gamma(3/2)^m Gamma(1/2)^{m-1} / ([(j+1)...(j+m)]^{3/2} [(j+alpha+2)...(j+alpha+m)]^{1/2})
inline double omega_laplace_closed(double alpha, int m, double j) {
  if (m < 2) throw std::invalid_argument("omega_laplace_closed: m must be >= 2");
  if (!(j >= 0.0)) throw std::invalid_argument("omega_laplace_closed: j must be >= 0");
  double lg = m * std::lgamma(1.5) + (m - 1) * std::lgamma(0.5);
  for (int k = 1; k <= m; ++k) lg -= 1.5 * std::log(j + k);
  for (int k = 2; k <= m; ++k) lg -= 0.5 * std::log(j + alpha + k);
  return std::exp(lg);
}

// Product of single-factor transforms L(t^a e^{-bt})(j) = Gamma(a+1)/(j+b)^{a+1}.
inline double omega_laplace_factors(double alpha, int m, double j) {
  auto lap = [j](double a, double b) { return std::tgamma(a + 1.0) / std::pow(j + b, a + 1.0); };
  double v = lap(0.5, 1.0);
  for (int l = 2; l <= m; ++l) v *= lap(0.5, l) * lap(-0.5, alpha + l);
  return v;
}

inline constexpr double default_omega_T = 40.0;
inline constexpr double default_omega_h = 1e-3;

// ---- generalized Bergman-Dirichlet kernel -----------------------------------

class GenDirichletKernel {
 public:
  GenDirichletKernel(double alpha, int m, std::shared_ptr<const OmegaWeight> w) : alpha_(alpha), m_(m), omega_(std::move(w)) {
    if (!(alpha > -1.0)) throw std::invalid_argument("gen_dirichlet_kernel: alpha must be > -1");
    if (m < 2) throw std::invalid_argument("gen_dirichlet_kernel: m must be >= 2");
    if (!omega_ || omega_->alpha != alpha || omega_->m != m)
      throw std::invalid_argument("gen_dirichlet_kernel: omega built for different (alpha, m)");
    norm_ = 1.0 / std::sqrt(pi * std::tgamma(1.0 + alpha));
    pref_ = std::exp(special::log_factorial(m) - m * std::lgamma(1.5) - (m - 1) * std::lgamma(0.5)) * norm_;
  }

  double alpha() const { return alpha_; }
  int m() const { return m_; }
  const OmegaWeight& omega() const { return *omega_; }

  cplx operator()(cplx z, double x) const {
    const double xs[1] = {x};
    return evaluate(z, xs)[0];
  }

  std::vector<cplx> evaluate(cplx z, std::span<const double> xs) const {
    detail::require_disk(z, "gen_dirichlet_kernel");
    const std::size_t N = omega_->size();
    std::vector<cplx> q(N), sq(N), pw(N);
    for (std::size_t k = 0; k < N; ++k) {
      const cplx s = z * std::exp(-omega_->t(k));
      q[k] = 1.0 / (1.0 - s);
      sq[k] = s * q[k];
      pw[k] = std::pow(q[k], alpha_ + m_ + 1.0);
    }
    std::vector<cplx> out(xs.size());
    std::vector<cplx> g(N);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i];
      detail::require_nonnegative(x, "gen_dirichlet_kernel");
      cplx head = 0.0, zp = 1.0;
      for (int j = 0; j < m_; ++j) {
        head += zp * special::laguerre(j, alpha_, x);
        zp *= z;
      }
      for (std::size_t k = 0; k < N; ++k) g[k] = pw[k] * std::exp(-x * sq[k]) * special::laguerre(m_, alpha_, x * q[k]);
      out[i] = norm_ * head + pref_ * zp * omega_->integrate(g);
    }
    return out;
  }

  cplx flat(cplx z, double x) const {
    return std::pow(x, 0.5 * alpha_) * std::exp(-0.5 * x) * (*this)(z, x);
  }

  // [z^k] K(z, x) through the Laplace transform of the sampled omega.
  double taylor_coefficient(int k, double x) const {
    if (k < m_) return norm_ * special::laguerre(k, alpha_, x);
    const int j = k - m_;
    const double binom = std::exp(special::log_factorial(j + m_) - special::log_factorial(m_) - special::log_factorial(j));
    return pref_ * binom * special::laguerre(k, alpha_, x) * omega_->laplace_extrapolated(j);
  }

 private:
  double alpha_;
  int m_;
  std::shared_ptr<const OmegaWeight> omega_;
  double norm_ = 0.0, pref_ = 0.0;
};

inline cplx gen_dirichlet_kernel(double alpha, int m, cplx z, double x, std::shared_ptr<const OmegaWeight> w) {
  return GenDirichletKernel(alpha, m, std::move(w))(z, x);
}

inline cplx gen_dirichlet_kernel_series(double alpha, int m, cplx z, double x, int J) {
  return basis_series(BasisFamily::laguerre_l2(alpha), BasisFamily::gen_dirichlet(alpha, m), z, x, J);
}

// ---- kernel families and evaluators ----------------------------------------

enum class KernelKind { ClassicalBargmann, SecondBargmann, GeneralizedSecond, Dirichlet, GenBergmanDirichlet };
enum class Strategy { ClosedForm, TruncatedSeries, IntegralRep };

inline std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::ClosedForm: return "closed";
    case Strategy::TruncatedSeries: return "series";
    case Strategy::IntegralRep: return "integral";
  }
  return "?";
}

struct KernelFamily {
  KernelKind kind = KernelKind::ClassicalBargmann;
  double delta = 0.0;
  double nu = 0.0;
  int ell = 0;
  double alpha = 0.0;
  int m = 2;

  static KernelFamily classical() { return {KernelKind::ClassicalBargmann}; }
  static KernelFamily second(double d) { return {KernelKind::SecondBargmann, d}; }
  static KernelFamily generalized_second(double nu, int ell) { return {KernelKind::GeneralizedSecond, 0.0, nu, ell}; }
  static KernelFamily dirichlet() { return {KernelKind::Dirichlet}; }
  static KernelFamily gen_bergman_dirichlet(double a, int m) {
    return {KernelKind::GenBergmanDirichlet, 0.0, 0.0, 0, a, m};
  }

  void validate() const {
    switch (kind) {
      case KernelKind::SecondBargmann:
        if (!(delta > 0.0)) throw std::invalid_argument("SecondBargmann: delta must be > 0");
        break;
      case KernelKind::GeneralizedSecond:
        detail::check_eigen_params(nu, ell);
        break;
      case KernelKind::GenBergmanDirichlet:
        if (!(alpha > -1.0)) throw std::invalid_argument("GenBergmanDirichlet: alpha must be > -1");
        if (m < 2) throw std::invalid_argument("GenBergmanDirichlet: m must be >= 2");
        break;
      default:
        break;
    }
  }

  // alpha of the x^alpha e^{-x} source measure (classical: none)
  double source_alpha() const {
    switch (kind) {
      case KernelKind::SecondBargmann: return delta;
      case KernelKind::GeneralizedSecond: return 2.0 * (nu - ell) - 1.0;
      case KernelKind::Dirichlet: return 0.0;
      case KernelKind::GenBergmanDirichlet: return alpha;
      default: return 0.0;
    }
  }

  BasisFamily source_basis() const {
    if (kind == KernelKind::ClassicalBargmann) return BasisFamily::hermite_l2();
    return BasisFamily::laguerre_l2(source_alpha());
  }

  BasisFamily target_basis() const {
    switch (kind) {
      case KernelKind::ClassicalBargmann: return BasisFamily::bargmann_fock();
      case KernelKind::SecondBargmann: return BasisFamily::bergman(delta);
      case KernelKind::GeneralizedSecond: return BasisFamily::disk_eigen(nu, ell);
      case KernelKind::Dirichlet: return BasisFamily::dirichlet();
      case KernelKind::GenBergmanDirichlet: return BasisFamily::gen_dirichlet(alpha, m);
    }
    return {};
  }

  bool integral_kernel() const { return kind == KernelKind::Dirichlet || kind == KernelKind::GenBergmanDirichlet; }
  bool on_disk() const { return kind != KernelKind::ClassicalBargmann; }
  Strategy primary_strategy() const { return integral_kernel() ? Strategy::IntegralRep : Strategy::ClosedForm; }

  std::string name() const {
    switch (kind) {
      case KernelKind::ClassicalBargmann: return "classical";
      case KernelKind::SecondBargmann: return "second";
      case KernelKind::GeneralizedSecond: return "generalized-second";
      case KernelKind::Dirichlet: return "dirichlet";
      case KernelKind::GenBergmanDirichlet: return "gen-dirichlet";
    }
    return "?";
  }
};

struct KernelConfig {
  int series_terms = 0;  // 0: choose from |z|
  int dirichlet_points = default_dirichlet_points;
  double omega_T = default_omega_T;
  double omega_h = default_omega_h;
};

class KernelEvaluator {
 public:
  KernelEvaluator(KernelFamily fam, Strategy s, KernelConfig cfg = {},
                  std::shared_ptr<const OmegaWeight> shared_omega = nullptr)
      : fam_(fam), strategy_(s), cfg_(cfg) {
    fam_.validate();
    if (s == Strategy::ClosedForm && fam_.integral_kernel())
      throw std::invalid_argument(fam_.name() + " kernel has no closed form; use the integral strategy");
    if (s == Strategy::IntegralRep && !fam_.integral_kernel())
      throw std::invalid_argument(fam_.name() + " kernel has no integral representation; use the closed strategy");
    if (s == Strategy::IntegralRep || (fam_.integral_kernel() && s == Strategy::TruncatedSeries)) {
      if (fam_.kind == KernelKind::Dirichlet) {
        rule_ = std::make_shared<QuadratureRule>(dirichlet_rule(cfg_.dirichlet_points));
      } else if (s == Strategy::IntegralRep) {
        if (!shared_omega) shared_omega = std::make_shared<OmegaWeight>(omega(fam_.alpha, fam_.m, cfg_.omega_T, cfg_.omega_h,
                                                                              OmegaOptions{true, false}));
        gbd_ = std::make_shared<GenDirichletKernel>(fam_.alpha, fam_.m, shared_omega);
      }
    }
  }

  const KernelFamily& family() const { return fam_; }
  Strategy strategy() const { return strategy_; }
  const KernelConfig& config() const { return cfg_; }
  std::shared_ptr<const OmegaWeight> omega_weight() const {
    return gbd_ ? std::shared_ptr<const OmegaWeight>(gbd_, &gbd_->omega()) : nullptr;
  }

  int series_terms_for(cplx z) const {
    if (cfg_.series_terms > 0) return cfg_.series_terms;
    if (!fam_.on_disk()) return std::max(80, static_cast<int>(std::ceil(6.0 * std::norm(z) + 60.0)));
    return default_series_truncation(std::abs(z));
  }

  cplx operator()(cplx z, double x) const {
    switch (strategy_) {
      case Strategy::TruncatedSeries:
        return series(z, x, series_terms_for(z));
      case Strategy::ClosedForm:
        return closed(z, cplx(x));
      case Strategy::IntegralRep:
        if (fam_.kind == KernelKind::Dirichlet) return dirichlet_kernel(z, x, *rule_);
        return (*gbd_)(z, x);
    }
    return 0.0;
  }

  std::vector<cplx> evaluate(cplx z, std::span<const double> xs) const {
    if (strategy_ == Strategy::IntegralRep && gbd_) return gbd_->evaluate(z, xs);
    std::vector<cplx> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (*this)(z, xs[i]);
    return out;
  }

  cplx series(cplx z, double x, int J) const {
    if (fam_.kind == KernelKind::Dirichlet) return dirichlet_kernel_series(z, x, J);
    if (fam_.on_disk()) detail::require_disk(z, "kernel series");
    return basis_series(fam_.source_basis(), fam_.target_basis(), z, x, J);
  }

  // closed form at complex x (analytic continuation used by rotated-contour forward transforms)
  cplx closed(cplx z, cplx x) const {
    switch (fam_.kind) {
      case KernelKind::ClassicalBargmann: return classical_kernel(z, x);
      case KernelKind::SecondBargmann: return second_kernel(fam_.delta, z, x);
      case KernelKind::GeneralizedSecond: return generalized_second_kernel(fam_.nu, fam_.ell, z, x);
      default: throw std::invalid_argument(fam_.name() + " kernel has no closed form");
    }
  }

  // [z^k] K(z, x) for holomorphic targets, through the integral representation.
  double taylor_coefficient(int k, double x) const {
    if (k < 0) throw std::invalid_argument("taylor_coefficient: negative index");
    switch (fam_.kind) {
      case KernelKind::Dirichlet: {
        if (k == 0) return 1.0 / std::sqrt(pi);
        const int j = k - 1;
        double lap = 0.0;
        for (std::size_t i = 0; i < rule_->size(); ++i) lap += rule_->weights[i] * std::exp(-j * rule_->nodes[i].real());
        return (j + 1.0) * special::laguerre(k, 0.0, x) * lap / (std::tgamma(1.5) * std::sqrt(pi));
      }
      case KernelKind::GenBergmanDirichlet:
        if (gbd_) return gbd_->taylor_coefficient(k, x);
        [[fallthrough]];
      default: {
        if (!fam_.target_basis().holomorphic())
          throw std::invalid_argument("taylor_coefficient: target basis is not holomorphic");
        const auto src = fam_.source_basis();
        return special::basis_eval(src, k, x).real() * special::monomial_coefficient(fam_.target_basis(), k);
      }
    }
  }

 private:
  KernelFamily fam_;
  Strategy strategy_;
  KernelConfig cfg_;
  std::shared_ptr<QuadratureRule> rule_;
  std::shared_ptr<GenDirichletKernel> gbd_;
};

// ---- reproducing kernels ------------------------------------------------------

enum class RKSpace { BargmannFock, WeightedBergman, WeightedBergmanArea, DiskEigen, Dirichlet, GenBergmanDirichlet };

struct ReproducingKernel {
  RKSpace space = RKSpace::BargmannFock;
  double param = 0.0;  // delta (WeightedBergman), alpha (WeightedBergmanArea, GenBergmanDirichlet), nu (DiskEigen)
  int index = 0;       // ell (DiskEigen), m (GenBergmanDirichlet)

  static ReproducingKernel bargmann_fock() { return {RKSpace::BargmannFock}; }
  // (delta/pi)(1-|z|^2)^{delta-1} normalisation
  static ReproducingKernel weighted_bergman(double delta) { return {RKSpace::WeightedBergman, delta}; }
  // (1-|z|^2)^alpha area normalisation
  static ReproducingKernel weighted_bergman_area(double alpha) { return {RKSpace::WeightedBergmanArea, alpha}; }
  static ReproducingKernel disk_eigen(double nu, int ell) { return {RKSpace::DiskEigen, nu, ell}; }
  static ReproducingKernel dirichlet() { return {RKSpace::Dirichlet}; }
  static ReproducingKernel gen_bergman_dirichlet(double alpha, int m) { return {RKSpace::GenBergmanDirichlet, alpha, m}; }

  BasisFamily basis() const {
    switch (space) {
      case RKSpace::BargmannFock: return BasisFamily::bargmann_fock();
      case RKSpace::WeightedBergman: return BasisFamily::bergman(param);
      case RKSpace::WeightedBergmanArea: return BasisFamily::disk_eigen(0.5 * param + 1.0, 0);
      case RKSpace::DiskEigen: return BasisFamily::disk_eigen(param, index);
      case RKSpace::Dirichlet: return BasisFamily::dirichlet();
      case RKSpace::GenBergmanDirichlet: return BasisFamily::gen_dirichlet(param, index);
    }
    return {};
  }

  std::string name() const {
    switch (space) {
      case RKSpace::BargmannFock: return "BargmannFock";
      case RKSpace::WeightedBergman: return "WeightedBergman(" + std::to_string(param) + ")";
      case RKSpace::WeightedBergmanArea: return "WeightedBergmanArea(" + std::to_string(param) + ")";
      case RKSpace::DiskEigen: return "DiskEigen(" + std::to_string(param) + "," + std::to_string(index) + ")";
      case RKSpace::Dirichlet: return "Dirichlet";
      case RKSpace::GenBergmanDirichlet:
        return "GenBergmanDirichlet(" + std::to_string(param) + "," + std::to_string(index) + ")";
    }
    return "?";
  }
};

inline cplx reproducing_kernel(const ReproducingKernel& k, cplx z, cplx w) {
  if (k.space != RKSpace::BargmannFock) {
    detail::require_disk(z, "reproducing_kernel");
    detail::require_disk(w, "reproducing_kernel");
  }
  const cplx zw = z * std::conj(w);
  switch (k.space) {
    case RKSpace::BargmannFock:
      return std::exp(zw) / pi;
    case RKSpace::WeightedBergman:
      if (!(k.param > 0.0)) throw std::invalid_argument("WeightedBergman: delta must be > 0");
      return std::pow(1.0 - zw, -k.param - 1.0);
    case RKSpace::WeightedBergmanArea:
      if (!(k.param > -1.0)) throw std::invalid_argument("WeightedBergmanArea: alpha must be > -1");
      return (k.param + 1.0) / pi * std::pow(1.0 - zw, -k.param - 2.0);
    case RKSpace::DiskEigen: {
      const double nu = k.param;
      const int ell = k.index;
      detail::check_eigen_params(nu, ell);
      const double beta = 2.0 * (nu - ell) - 1.0;
      const double a = std::norm(1.0 - zw);
      const double b = (1.0 - std::norm(z)) * (1.0 - std::norm(w));
      return beta / pi * std::pow(1.0 - zw, -2.0 * nu) * std::pow(a / b, static_cast<double>(ell)) *
             special::jacobi(ell, 0.0, beta, 2.0 * b / a - 1.0);
    }
    case RKSpace::Dirichlet:
      return (1.0 + std::log(1.0 / (1.0 - zw))) / pi;
    case RKSpace::GenBergmanDirichlet: {
      const double a = k.param;
      const int m = k.index;
      if (!(a > -1.0)) throw std::invalid_argument("GenBergmanDirichlet: alpha must be > -1");
      if (m < 1) throw std::invalid_argument("GenBergmanDirichlet: m must be >= 1");
      cplx head = 0.0, p = 1.0;
      for (int j = 0; j < m; ++j) {
        head += special::pochhammer(a + 1.0, j) / std::exp(special::log_factorial(j)) * p;
        p *= zw;
      }
      const cplx tail = (a + 1.0) * p / std::exp(2.0 * special::log_factorial(m)) *
                        special::hyp3f2<cplx>(1.0, 1.0, a + 2.0, m + 1.0, m + 1.0, zw).value;
      return (head + tail) / pi;
    }
  }
  return 0.0;
}

inline cplx papadakis_sum(const BasisFamily& basis, cplx z, cplx w, int J) {
  cplx s = 0.0;
  for (int j = 0; j <= J; ++j) s += special::basis_eval(basis, j, z) * std::conj(special::basis_eval(basis, j, w));
  return s;
}

}  // namespace bargmann::kernels
