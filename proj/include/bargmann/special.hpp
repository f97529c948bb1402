#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bargmann {

using cplx = std::complex<double>;

class non_convergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace special {

inline constexpr double pi = std::numbers::pi;

// z^n for integer n >= 0; z^0 == 1 even at z == 0.
template <class T>
T ipow(T z, int n) {
  T r = T(1);
  while (n > 0) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

template <class T>
T hermite(int j, T x) {
  if (j < 0) throw std::invalid_argument("hermite: negative degree");
  T h0 = T(1);
  if (j == 0) return h0;
  T h1 = T(2) * x;
  for (int k = 1; k < j; ++k) {
    T h2 = T(2) * x * h1 - T(2.0 * k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

template <class T>
T laguerre(int j, double alpha, T x) {
  if (j < 0) throw std::invalid_argument("laguerre: negative degree");
  if (!(alpha > -1.0)) throw std::invalid_argument("laguerre: alpha must be > -1");
  T l0 = T(1);
  if (j == 0) return l0;
  T l1 = T(1.0 + alpha) - x;
  for (int k = 1; k < j; ++k) {
    T l2 = ((T(2.0 * k + 1.0 + alpha) - x) * l1 - T(k + alpha) * l0) / T(k + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

namespace detail {

inline bool is_nonpositive_integer(double a) {
  return a <= 0.0 && a == std::floor(a);
}

template <class T>
T jacobi_recurrence(int n, double a, double b, T x) {
  T p0 = T(1);
  if (n == 0) return p0;
  T p1 = T(0.5 * (a - b)) + T(0.5 * (a + b + 2.0)) * x;
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * (k + 1) * (k + a + b + 1) * s;
    const double c2 = (s + 1) * (a * a - b * b);
    const double c3 = s * (s + 1) * (s + 2);
    const double c4 = 2.0 * (k + a) * (k + b) * (s + 2);
    T p2 = ((T(c2) + T(c3) * x) * p1 - T(c4) * p0) / T(c1);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// Negative-integer first parameter: P^{(a,b)}(x) = (-1)^n P^{(b,a)}(-x) and
// P^{(b,a)}(t) = C(n+b, n) 2F1(-n, n+a+b+1; b+1; (1-t)/2) at t = -x.
template <class T>
T jacobi_terminating(int n, double a, double b, T x) {
  const T y = (T(1) + x) / T(2);
  T term = T(1);
  T sum = T(1);
  const double c = n + a + b + 1.0;
  for (int k = 0; k < n; ++k) {
    term *= T((k - n) * (c + k) / ((b + 1.0 + k) * (k + 1.0))) * y;
    sum += term;
  }
  double binom = 1.0;
  for (int k = 1; k <= n; ++k) binom *= (b + k) / k;
  return T((n % 2 == 0) ? binom : -binom) * sum;
}

}  // namespace detail

template <class T>
T jacobi(int n, double a, double b, T x) {
  if (n < 0) throw std::invalid_argument("jacobi: negative degree");
  if (a > -1.0 && b > -1.0) return detail::jacobi_recurrence(n, a, b, x);
  if (detail::is_nonpositive_integer(a) && b > -1.0) return detail::jacobi_terminating(n, a, b, x);
  if (detail::is_nonpositive_integer(b) && a > -1.0) {
    T v = detail::jacobi_terminating(n, b, a, -x);
    return (n % 2 == 0) ? v : -v;
  }
  throw std::invalid_argument("jacobi: parameters must exceed -1 (or be a nonpositive integer)");
}

// ---- Gamma family -------------------------------------------------------

inline double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
  return std::lgamma(x);
}

inline double gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma: argument must be positive");
  return std::tgamma(x);
}

inline double log_beta(double x, double y) {
  return log_gamma(x) + log_gamma(y) - log_gamma(x + y);
}

inline double beta(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("beta: arguments must be positive");
  return std::exp(log_beta(x, y));
}

struct SignedLog {
  double log_abs = 0.0;
  int sign = 1;

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  SignedLog operator*(const SignedLog& o) const { return {log_abs + o.log_abs, sign * o.sign}; }
  SignedLog operator/(const SignedLog& o) const {
    if (o.sign == 0) throw std::domain_error("SignedLog: division by zero");
    return {log_abs - o.log_abs, sign * o.sign};
  }
};

inline SignedLog signed_log(double v) {
  if (v == 0.0) return {0.0, 0};
  return {std::log(std::abs(v)), v > 0 ? 1 : -1};
}

// (x)_n = x (x+1) ... (x+n-1), any real x.
inline SignedLog log_pochhammer(double x, int n) {
  if (n < 0) throw std::invalid_argument("pochhammer: negative count");
  if (x > 0.0) return {std::lgamma(x + n) - std::lgamma(x), 1};
  SignedLog r;
  for (int k = 0; k < n; ++k) r = r * signed_log(x + k);
  return r;
}

inline double pochhammer(double x, int n) { return log_pochhammer(x, n).value(); }

inline double log_factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  return std::lgamma(n + 1.0);
}

// Gamma(a) / Gamma(b) for positive a, b.
inline double gamma_ratio(double a, double b) { return std::exp(log_gamma(a) - log_gamma(b)); }

// ---- hypergeometric series ----------------------------------------------

enum class HypKind { F11, F21, F32 };

template <class T>
struct HypSum {
  T value{};
  double first_omitted = 0.0;  // |first term not included|; 0 when the series terminated
  int terms = 0;
  bool terminated = false;
};

inline constexpr int default_hyp_truncation = 200;

template <class T>
HypSum<T> hyp_series(HypKind kind, std::span<const double> upper, std::span<const double> lower, T x,
                     int truncation = default_hyp_truncation) {
  const std::size_t p = kind == HypKind::F11 ? 1 : kind == HypKind::F21 ? 2 : 3;
  const std::size_t q = kind == HypKind::F32 ? 2 : 1;
  if (upper.size() != p || lower.size() != q)
    throw std::invalid_argument("hyp_series: parameter count does not match the series kind");
  if (truncation < 1) throw std::invalid_argument("hyp_series: truncation must be positive");

  int stop = -1;  // index of the first identically zero term
  for (double a : upper)
    if (detail::is_nonpositive_integer(a)) {
      int k = static_cast<int>(-a) + 1;
      if (stop < 0 || k < stop) stop = k;
    }
  for (double b : lower)
    if (detail::is_nonpositive_integer(b)) {
      int k = static_cast<int>(-b);
      if (stop < 0 || k < stop - 1) throw std::invalid_argument("hyp_series: lower parameter is a nonpositive integer");
    }
  if (kind != HypKind::F11 && stop < 0 && !(std::abs(x) < 1.0))
    throw std::domain_error("hyp_series: |x| must be < 1 for a non-terminating series");

  HypSum<T> out;
  T term = T(1);
  T sum = T(0);
  double prev_mag = 0.0;
  int k = 0;
  while (k < truncation) {
    sum += term;
    prev_mag = std::abs(term);
    ++k;
    if (stop >= 0 && k >= stop) {
      out.terminated = true;
      break;
    }
    double ratio = 1.0 / k;
    for (double a : upper) ratio *= (a + k - 1);
    for (double b : lower) ratio /= (b + k - 1);
    term *= T(ratio) * x;
  }
  out.value = sum;
  out.terms = k;
  if (out.terminated) return out;
  out.first_omitted = std::abs(term);
  if (out.first_omitted >= prev_mag && out.first_omitted > 1e-16 * std::abs(sum))
    throw non_convergence("hyp_series: terms still growing at truncation " + std::to_string(truncation));
  return out;
}

template <class T>
HypSum<T> hyp1f1(double a, double c, T x, int truncation = default_hyp_truncation) {
  const double u[1] = {a}, l[1] = {c};
  return hyp_series<T>(HypKind::F11, u, l, x, truncation);
}

template <class T>
HypSum<T> hyp2f1(double a, double b, double c, T x, int truncation = default_hyp_truncation) {
  const double u[2] = {a, b}, l[1] = {c};
  return hyp_series<T>(HypKind::F21, u, l, x, truncation);
}

template <class T>
HypSum<T> hyp3f2(double a1, double a2, double a3, double b1, double b2, T x, int truncation = default_hyp_truncation) {
  const double u[3] = {a1, a2, a3}, l[2] = {b1, b2};
  return hyp_series<T>(HypKind::F32, u, l, x, truncation);
}

// ---- orthonormal bases --------------------------------------------------

enum class Space { HermiteL2, LaguerreL2, BargmannFock, Bergman, DiskEigen, Dirichlet, GenDirichlet };

struct BasisFamily {
  Space space = Space::HermiteL2;
  double alpha = 0.0;  // LaguerreL2, GenDirichlet
  double delta = 0.0;  // Bergman
  double nu = 0.0;     // DiskEigen
  int ell = 0;         // DiskEigen
  int m = 0;           // GenDirichlet

  static BasisFamily hermite_l2() { return {Space::HermiteL2}; }
  static BasisFamily laguerre_l2(double a) { return {Space::LaguerreL2, a}; }
  static BasisFamily bargmann_fock() { return {Space::BargmannFock}; }
  static BasisFamily bergman(double d) { return {Space::Bergman, 0.0, d}; }
  static BasisFamily disk_eigen(double nu, int ell) { return {Space::DiskEigen, 0.0, 0.0, nu, ell}; }
  static BasisFamily dirichlet() { return {Space::Dirichlet}; }
  static BasisFamily gen_dirichlet(double a, int m) { return {Space::GenDirichlet, a, 0.0, 0.0, 0, m}; }

  // 2(nu - ell) - 1, the Laguerre/Jacobi parameter attached to DiskEigen.
  double eigen_beta() const { return 2.0 * (nu - ell) - 1.0; }

  bool holomorphic() const {
    return space == Space::BargmannFock || space == Space::Bergman || space == Space::Dirichlet ||
           space == Space::GenDirichlet || (space == Space::DiskEigen && ell == 0);
  }
  bool on_half_line() const { return space == Space::LaguerreL2; }
  bool on_line() const { return space == Space::HermiteL2; }
  bool on_disk() const {
    return space == Space::Bergman || space == Space::DiskEigen || space == Space::Dirichlet ||
           space == Space::GenDirichlet;
  }

  void validate() const {
    switch (space) {
      case Space::LaguerreL2:
        if (!(alpha > -1.0)) throw std::invalid_argument("LaguerreL2: alpha must be > -1");
        break;
      case Space::Bergman:
        if (!(delta > 0.0)) throw std::invalid_argument("Bergman: delta must be > 0");
        break;
      case Space::DiskEigen:
        if (!(nu > 0.5)) throw std::invalid_argument("DiskEigen: nu must be > 1/2");
        if (ell < 0 || ell > static_cast<int>(std::floor(nu - 0.5)))
          throw std::invalid_argument("DiskEigen: ell must lie in [0, floor(nu - 1/2)]");
        if (!(eigen_beta() > 0.0)) throw std::invalid_argument("DiskEigen: 2(nu - ell) - 1 must be positive");
        break;
      case Space::GenDirichlet:
        if (!(alpha > -1.0)) throw std::invalid_argument("GenDirichlet: alpha must be > -1");
        if (m < 1) throw std::invalid_argument("GenDirichlet: m must be >= 1");
        break;
      default:
        break;
    }
  }

  std::string name() const {
    switch (space) {
      case Space::HermiteL2: return "HermiteL2";
      case Space::LaguerreL2: return "LaguerreL2(" + std::to_string(alpha) + ")";
      case Space::BargmannFock: return "BargmannFock";
      case Space::Bergman: return "Bergman(" + std::to_string(delta) + ")";
      case Space::DiskEigen: return "DiskEigen(" + std::to_string(nu) + "," + std::to_string(ell) + ")";
      case Space::Dirichlet: return "Dirichlet";
      case Space::GenDirichlet: return "GenDirichlet(" + std::to_string(alpha) + "," + std::to_string(m) + ")";
    }
    return "?";
  }
};

// c_j with psi_j(z) = c_j z^j, for holomorphic families.
inline double monomial_coefficient(const BasisFamily& f, int j) {
  if (j < 0) throw std::invalid_argument("basis index must be nonnegative");
  switch (f.space) {
    case Space::BargmannFock:
      return std::exp(-0.5 * (std::log(pi) + log_factorial(j)));
    case Space::Bergman:
      return std::exp(0.5 * (std::lgamma(1.0 + f.delta + j) - log_factorial(j) - std::lgamma(1.0 + f.delta)));
    case Space::DiskEigen: {
      if (f.ell != 0) break;
      const double b = f.eigen_beta();
      return std::sqrt(b / pi) * std::exp(0.5 * (std::lgamma(b + 1.0 + j) - log_factorial(j) - std::lgamma(b + 1.0)));
    }
    case Space::Dirichlet:
      return j == 0 ? 1.0 / std::sqrt(pi) : 1.0 / std::sqrt(pi * j);
    case Space::GenDirichlet: {
      const double a = f.alpha;
      if (j < f.m)
        return std::exp(0.5 * (std::lgamma(j + 1.0 + a) - std::log(pi) - log_factorial(j) - std::lgamma(a + 1.0)));
      return std::exp(0.5 * (log_factorial(j - f.m) + std::lgamma(j - f.m + 2.0 + a) - std::log(pi) -
                             2.0 * log_factorial(j) - std::lgamma(a + 1.0)));
    }
    default:
      break;
  }
  throw std::invalid_argument("monomial_coefficient: family is not a monomial basis");
}

namespace detail {

inline double hermite_function(int j, double x) {
  double h0 = std::pow(pi, -0.25);
  if (j == 0) return h0;
  double h1 = std::sqrt(2.0) * x * h0;
  for (int k = 1; k < j; ++k) {
    double h2 = std::sqrt(2.0 / (k + 1)) * x * h1 - std::sqrt(static_cast<double>(k) / (k + 1)) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

inline double real_point(cplx p, const char* who) {
  if (p.imag() != 0.0)
    throw std::domain_error(std::string(who) + ": point must be real");
  return p.real();
}

// psi_j^{nu,ell}(z) without the singular zbar^{ell-j} factor for j > ell.
inline cplx disk_eigen(const BasisFamily& f, int j, cplx z) {
  const double r2 = std::norm(z);
  if (!(r2 < 1.0)) throw std::domain_error("DiskEigen: point must lie in the open unit disk");
  const int l = f.ell;
  const double b = f.eigen_beta();
  const double x = 1.0 - 2.0 * r2;
  const double damp = std::pow(1.0 - r2, -l);
  if (j <= l) {
    const double c = std::sqrt(b / pi) *
                     std::exp(0.5 * (log_factorial(j) + std::lgamma(b + 1.0 + l) - log_factorial(l) -
                                     std::lgamma(b + 1.0 + j)));
    const double p = jacobi(j, static_cast<double>(l - j), b, x);
    const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
    return sgn * c * damp * ipow(std::conj(z), l - j) * p;
  }
  const double c = std::sqrt(b / pi) *
                   std::exp(0.5 * (std::lgamma(b + 1.0 + j) + log_factorial(l) - log_factorial(j) -
                                   std::lgamma(b + 1.0 + l)));
  const double p = jacobi(l, static_cast<double>(j - l), b, x);
  const double sgn = (l % 2 == 0) ? 1.0 : -1.0;
  return sgn * c * damp * ipow(z, j - l) * p;
}

}  // namespace detail

inline cplx basis_eval(const BasisFamily& f, int j, cplx point) {
  if (j < 0) throw std::invalid_argument("basis index must be nonnegative");
  f.validate();
  switch (f.space) {
    case Space::HermiteL2:
      return detail::hermite_function(j, detail::real_point(point, "HermiteL2"));
    case Space::LaguerreL2: {
      const double x = detail::real_point(point, "LaguerreL2");
      if (x < 0.0) throw std::domain_error("LaguerreL2: point must be nonnegative");
      return std::exp(0.5 * (log_factorial(j) - std::lgamma(f.alpha + j + 1.0))) * laguerre(j, f.alpha, x);
    }
    case Space::DiskEigen:
      return detail::disk_eigen(f, j, point);
    case Space::BargmannFock:
      return monomial_coefficient(f, j) * ipow(point, j);
    default:
      if (!(std::norm(point) < 1.0)) throw std::domain_error(f.name() + ": point must lie in the open unit disk");
      return monomial_coefficient(f, j) * ipow(point, j);
  }
}

// Same as basis_eval, except that half-line basis functions accept complex points
// through their polynomial continuation.
inline cplx basis_continued(const BasisFamily& f, int j, cplx point) {
  if (f.space != Space::LaguerreL2 || point.imag() == 0.0) return basis_eval(f, j, point);
  if (j < 0) throw std::invalid_argument("basis index must be nonnegative");
  f.validate();
  return std::exp(0.5 * (log_factorial(j) - std::lgamma(f.alpha + j + 1.0))) * laguerre(j, f.alpha, point);
}

}  // namespace special
}  // namespace bargmann
