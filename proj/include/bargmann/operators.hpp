#pragma once

#include <bit>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "quadrature.hpp"
#include "report.hpp"
#include "special.hpp"

namespace bargmann::operators {

using special::pi;

// -4(1-|z|^2) [ (1-|z|^2) d^2/dz dzbar - gamma zbar d/dzbar ] + shift
struct DiskOperator {
  double gamma = 0.0;
  double shift = 0.0;

  static DiskOperator d(double g) { return {g, 0.0}; }
  static DiskOperator casimir(double g) { return {g, -g * g + 2 * g}; }
  static DiskOperator landau(double nu) { return {2 * nu, 0.0}; }         // H_nu
  static DiskOperator dirichlet() { return {2.0, 0.0}; }                 // invariant Laplacian
  static DiskOperator gen_dirichlet(double a) { return {a + 2, 0.0}; }   // Delta_alpha

  friend bool operator==(const DiskOperator&, const DiskOperator&) = default;
};

// sum c_ab z^a zbar^b
class MonomialExpansion {
 public:
  using Key = std::pair<int, int>;

  MonomialExpansion() = default;
  MonomialExpansion(std::initializer_list<std::pair<const Key, cplx>> terms) {
    for (const auto& [k, c] : terms) add(k.first, k.second, c);
  }

  static MonomialExpansion monomial(int a, int b, cplx c = 1.0) {
    MonomialExpansion e;
    e.add(a, b, c);
    return e;
  }

  void add(int a, int b, cplx c) {
    if (a < 0 || b < 0) throw std::invalid_argument("MonomialExpansion: negative exponent");
    if (c == cplx(0.0)) return;
    auto [it, fresh] = terms_.try_emplace({a, b}, c);
    if (!fresh) {
      it->second += c;
      if (it->second == cplx(0.0)) terms_.erase(it);
    }
  }

  const std::map<Key, cplx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  bool holomorphic() const {
    for (const auto& [k, c] : terms_)
      if (k.second != 0) return false;
    return true;
  }
  int degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
    return d;
  }
  cplx coefficient(int a, int b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? cplx(0.0) : it->second;
  }

  cplx operator()(cplx z) const {
    cplx s = 0.0;
    for (const auto& [k, c] : terms_) s += c * special::ipow(z, k.first) * special::ipow(std::conj(z), k.second);
    return s;
  }

  // d^k/dz^k
  MonomialExpansion dz(int k = 1) const {
    MonomialExpansion e;
    for (const auto& [key, c] : terms_) {
      const auto [a, b] = key;
      if (a < k) continue;
      double f = 1.0;
      for (int i = 0; i < k; ++i) f *= a - i;
      e.add(a - k, b, c * f);
    }
    return e;
  }

  MonomialExpansion& operator+=(const MonomialExpansion& o) {
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
    return *this;
  }
  friend MonomialExpansion operator*(cplx s, const MonomialExpansion& e) {
    MonomialExpansion r;
    for (const auto& [k, c] : e.terms_) r.add(k.first, k.second, s * c);
    return r;
  }
  friend bool operator==(const MonomialExpansion&, const MonomialExpansion&) = default;

 private:
  std::map<Key, cplx> terms_;
};

// keys "a,b", values [re, im] or a bare real
inline MonomialExpansion expansion_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("expansion: expected an object of \"a,b\": [re, im] entries");
  MonomialExpansion e;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const auto comma = key.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("expansion: bad key \"" + key + "\"");
    int a = 0, b = 0;
    try {
      std::size_t u1 = 0, u2 = 0;
      a = std::stoi(key.substr(0, comma), &u1);
      b = std::stoi(key.substr(comma + 1), &u2);
      if (u1 != comma || u2 != key.size() - comma - 1) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw std::invalid_argument("expansion: bad key \"" + key + "\"");
    }
    const auto& v = it.value();
    cplx c;
    if (v.is_number()) c = v.get<double>();
    else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) c = {v[0].get<double>(), v[1].get<double>()};
    else throw std::invalid_argument("expansion: coefficient of \"" + key + "\" must be a number or [re, im]");
    e.add(a, b, c);
  }
  return e;
}

inline nlohmann::ordered_json expansion_to_json(const MonomialExpansion& e) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, c] : e.terms())
    j[std::to_string(k.first) + "," + std::to_string(k.second)] = {c.real(), c.imag()};
  return j;
}

// z^a zbar^b -> -4ab z^{a-1}zbar^{b-1} + (8ab + 4 gamma b) z^a zbar^b - 4(ab + gamma b) z^{a+1}zbar^{b+1}
inline MonomialExpansion apply_exact(const DiskOperator& op, const MonomialExpansion& f) {
  MonomialExpansion out;
  for (const auto& [k, c] : f.terms()) {
    const auto [a, b] = k;
    const double ab = static_cast<double>(a) * b;
    if (b > 0) {
      if (a > 0) out.add(a - 1, b - 1, -4 * ab * c);
      out.add(a, b, (8 * ab + 4 * op.gamma * b) * c);
      out.add(a + 1, b + 1, -4 * (ab + op.gamma * b) * c);
    }
    if (op.shift != 0.0) out.add(a, b, op.shift * c);
  }
  return out;
}

// second-order central differences in x, y
template <class F>
cplx apply_fd(const DiskOperator& op, F&& fn, cplx z, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("apply_fd: step must be positive");
  if (!(std::abs(z) + 2 * h < 1.0)) throw std::domain_error("apply_fd: stencil leaves the unit disk");
  const cplx ex(h, 0.0), ey(0.0, h);
  const cplx f0 = fn(z);
  const cplx fxp = fn(z + ex), fxm = fn(z - ex), fyp = fn(z + ey), fym = fn(z - ey);
  const cplx fxx = (fxp - 2.0 * f0 + fxm) / (h * h);
  const cplx fyy = (fyp - 2.0 * f0 + fym) / (h * h);
  const cplx fx = (fxp - fxm) / (2 * h);
  const cplx fy = (fyp - fym) / (2 * h);
  const cplx lap = 0.25 * (fxx + fyy);
  const cplx dbar = 0.5 * (fx + cplx(0, 1) * fy);
  const double s = 1.0 - std::norm(z);
  return -4.0 * s * (s * lap - op.gamma * std::conj(z) * dbar) + op.shift * f0;
}

// h and h/2 combined to cancel the h^2 term
template <class F>
cplx apply_fd_richardson(const DiskOperator& op, F&& fn, cplx z, double h) {
  return (4.0 * apply_fd(op, fn, z, h / 2) - apply_fd(op, fn, z, h)) / 3.0;
}

// 20 points on |z| = 0.3 and |z| = 0.6, off the coordinate axes
inline std::vector<cplx> operator_sample_points() {
  std::vector<cplx> pts;
  for (double r : {0.3, 0.6})
    for (int k = 0; k < 10; ++k) pts.push_back(std::polar(r, 2 * pi * (k + 0.37) / 10));
  return pts;
}

inline double landau_level(double nu, int ell) { return 4.0 * ell * (2 * nu - ell - 1); }

inline void check_eigen_params(double nu, int ell) {
  if (!(nu > 0.5)) throw std::invalid_argument("eigen_check: nu must exceed 1/2");
  if (ell < 0 || ell > static_cast<int>(std::floor(nu - 0.5)))
    throw std::invalid_argument("eigen_check: ell must lie in [0, floor(nu - 1/2)]");
}

struct EigenResidual {
  double nu;
  int ell, j;
  double eigenvalue;
  double residual;  // max |H psi - lambda psi| / max |psi|
};

inline EigenResidual eigen_residual(double nu, int ell, int j, const std::vector<cplx>& points, double h = 1e-3) {
  check_eigen_params(nu, ell);
  if (j < 0) throw std::invalid_argument("eigen_check: j must be nonnegative");
  const auto basis = special::BasisFamily::disk_eigen(nu, ell);
  const auto op = DiskOperator::landau(nu);
  const double lambda = landau_level(nu, ell);
  auto psi = [&](cplx z) { return special::basis_eval(basis, j, z); };
  double num = 0.0, den = 0.0;
  for (cplx z : points) {
    const cplx p = psi(z);
    num = std::max(num, std::abs(apply_fd_richardson(op, psi, z, h) - lambda * p));
    den = std::max(den, std::abs(p));
  }
  return {nu, ell, j, lambda, den > 0 ? num / den : num};
}

inline report::Check eigen_check(double nu, int ell, int j, const std::vector<cplx>& points, double h = 1e-3,
                                 double tol = 1e-4) {
  const auto r = eigen_residual(nu, ell, j, points, h);
  char id[64];
  std::snprintf(id, sizeof id, "operators.eigen.nu%g.l%d.j%d", nu, ell, j);
  return report::make_check(id, "relative eigenresidual of H_nu on psi_j^{nu,l}, eigenvalue " + report::fmt17(r.eigenvalue),
                            r.residual, tol, "H_nu psi = 4l(2nu-l-1) psi");
}

enum class SpectrumKind { Landau, GenDirichlet };

struct Spectrum {
  std::vector<std::pair<int, double>> levels;
  bool flagged = false;  // empty index range; (0, 0) returned anyway
  std::string note;
};

inline Spectrum point_spectrum(SpectrumKind kind, double param) {
  Spectrum s;
  if (kind == SpectrumKind::Landau) {
    if (!(param > 0.5)) throw std::invalid_argument("point_spectrum: nu must exceed 1/2");
    const int top = static_cast<int>(std::floor(param - 0.5));
    for (int l = 0; l <= top; ++l) s.levels.emplace_back(l, landau_level(param, l));
    return s;
  }
  if (!(param > -1.0)) throw std::invalid_argument("point_spectrum: alpha must exceed -1");
  const int top = static_cast<int>(std::floor((param - 1) / 2));
  if (top < 0) {
    s.levels.emplace_back(0, 0.0);
    s.flagged = true;
    s.note = "index bound floor((alpha-1)/2) is negative; 0 listed because the harmonic space is its null space";
    return s;
  }
  for (int l = 0; l <= top; ++l) s.levels.emplace_back(l, 4.0 * l * (param - l + 1));
  return s;
}

// ---- harmonic-space membership ----------------------------------------------

struct HarmonicSpace {
  double alpha = 0.0;
  int m = 1;
  static HarmonicSpace dirichlet() { return {0.0, 1}; }
  static HarmonicSpace gen_dirichlet(double a, int m) {
    if (!(a > -1.0) || m < 1) throw std::invalid_argument("HarmonicSpace: need alpha > -1, m >= 1");
    return {a, m};
  }
  DiskOperator laplacian() const { return DiskOperator::gen_dirichlet(alpha); }
};

struct Membership {
  double residual = 0.0;      // ||Delta F|| on the disk rule
  double norm = 0.0;          // ||F|| in L^2((1-|z|^2)^alpha)
  double derivative_norm = 0.0;  // ||d^m F / dz^m|| in the same space
  double refinement_growth = 1.0;  // norm ratio under rule refinement
  bool tail_divergent = false;
  bool member = false;
};

namespace detail {

inline double rule_norm(const quadrature::QuadratureRule& r, const std::function<cplx(cplx)>& f) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::norm(f(r.nodes[i]));
  return std::sqrt(static_cast<double>(s));
}

// weight of |a_j|^2 in ||d^m F/dz^m||^2 for F = sum a_j z^j, measure (1-|z|^2)^alpha dA
inline double derivative_weight(double alpha, int m, int j) {
  if (j < m) return 0.0;
  return std::exp(std::log(pi) + 2 * special::log_factorial(j) - 2 * special::log_factorial(j - m) + special::log_factorial(j - m) +
                  std::lgamma(alpha + 1) - std::lgamma(j - m + alpha + 2));
}

}  // namespace detail

inline constexpr double residual_tolerance = 1e-12;

inline Membership harmonic_membership(const MonomialExpansion& F, const HarmonicSpace& sp, int n_r = 24, int n_theta = 64) {
  Membership out;
  const auto coarse = quadrature::disk_rule(n_r, n_theta, sp.alpha);
  const auto fine = quadrature::disk_rule(2 * n_r, 2 * n_theta, sp.alpha);
  const auto DF = apply_exact(sp.laplacian(), F);
  out.residual = DF.empty() ? 0.0 : detail::rule_norm(quadrature::disk_rule(n_r, n_theta, 0.0), DF);
  const auto dm = F.dz(sp.m);
  out.norm = detail::rule_norm(fine, F);
  out.derivative_norm = detail::rule_norm(fine, dm);
  const double n0 = detail::rule_norm(coarse, F) + detail::rule_norm(coarse, dm);
  const double n1 = out.norm + out.derivative_norm;
  out.refinement_growth = n0 > 0 ? n1 / n0 : 1.0;
  out.member = out.residual <= residual_tolerance && std::isfinite(out.norm) && std::isfinite(out.derivative_norm) &&
               out.refinement_growth < 1.5;
  return out;
}

// F = sum a_j z^j given by its coefficients; divergence of sum_j w_j |a_j|^2 is judged from the
// growth of dyadic blocks of the partial sums.
inline Membership harmonic_membership(const std::function<cplx(int)>& a, const HarmonicSpace& sp, int J = 4096) {
  if (J < 64) throw std::invalid_argument("harmonic_membership: need at least 64 coefficients");
  Membership out;
  long double norm2 = 0.0L, deriv2 = 0.0L;
  std::vector<long double> blocks;  // sums over [2^k, 2^{k+1})
  for (int j = 0; j < J; ++j) {
    const double c2 = std::norm(a(j));
    const double wn = std::exp(std::log(pi) + special::log_factorial(j) + std::lgamma(sp.alpha + 1) - std::lgamma(j + sp.alpha + 2));
    const double wd = detail::derivative_weight(sp.alpha, sp.m, j);
    norm2 += wn * c2;
    deriv2 += wd * c2;
    if (j >= 1) {
      const auto k = static_cast<std::size_t>(std::bit_width(static_cast<unsigned>(j)) - 1);
      if (blocks.size() <= k) blocks.resize(k + 1, 0.0L);
      blocks[k] += wd * c2;
    }
  }
  out.norm = std::sqrt(static_cast<double>(norm2));
  out.derivative_norm = std::sqrt(static_cast<double>(deriv2));
  // convergent power tails j^{-p}, p > 1, shrink the dyadic blocks by 2^{1-p}
  const std::size_t K = blocks.size();
  const long double last = blocks[K - 2], prev = blocks[K - 3];
  out.refinement_growth = prev > 0 ? static_cast<double>(last / prev) : 0.0;
  out.tail_divergent = prev > 0 && last / prev > 0.9L;
  out.residual = 0.0;  // holomorphic
  out.member = !out.tail_divergent && std::isfinite(out.norm) && std::isfinite(out.derivative_norm);
  return out;
}

}  // namespace bargmann::operators
