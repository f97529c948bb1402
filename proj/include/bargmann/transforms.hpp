#pragma once

#include <functional>
#include <random>
#include <variant>

#include "kernels.hpp"
#include "report.hpp"

namespace bargmann::transforms {

using kernels::KernelEvaluator;
using kernels::KernelFamily;
using kernels::KernelKind;
using quadrature::QuadratureRule;
using special::BasisFamily;
using special::pi;

// Target space sitting inside L^2(rule measure x density).
struct L2Target {
  BasisFamily basis;
  QuadratureRule rule;
  std::function<double(cplx)> density;
};

// Target space with a coefficient (Dirichlet-type) inner product only.
struct CoefficientTarget {
  BasisFamily basis;
};

class capability_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct CoefficientVector {
  std::vector<cplx> values;
  BasisFamily basis;
  int truncation() const { return static_cast<int>(values.size()) - 1; }
};

// ---- coefficient inner products -------------------------------------------

// ||z^j||^2 in the target space
inline double monomial_norm_sq(const BasisFamily& b, int j) {
  const double c = special::monomial_coefficient(b, j);
  return 1.0 / (c * c);
}

inline double dirichlet_weight(int j) { return j == 0 ? pi : pi * j; }

inline double gen_dirichlet_weight(double alpha, int m, int j) {
  if (j < m) return std::exp(std::log(pi) + special::log_factorial(j) + std::lgamma(alpha + 1) - std::lgamma(j + alpha + 1));
  return std::exp(std::log(pi) + 2 * special::log_factorial(j) + std::lgamma(alpha + 1) - special::log_factorial(j - m) -
                  std::lgamma(j - m + alpha + 2));
}

// <f, g> from Taylor coefficients: pi a_0 conj(b_0) + pi sum j a_j conj(b_j)
inline cplx dirichlet_inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < std::min(a.size(), b.size()); ++j) s += dirichlet_weight(static_cast<int>(j)) * a[j] * std::conj(b[j]);
  return s;
}

inline cplx gen_dirichlet_inner(double alpha, int m, const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < std::min(a.size(), b.size()); ++j)
    s += gen_dirichlet_weight(alpha, m, static_cast<int>(j)) * a[j] * std::conj(b[j]);
  return s;
}

inline cplx coefficient_inner(const BasisFamily& basis, const std::vector<cplx>& a, const std::vector<cplx>& b) {
  switch (basis.space) {
    case special::Space::Dirichlet: return dirichlet_inner(a, b);
    case special::Space::GenDirichlet: return gen_dirichlet_inner(basis.alpha, basis.m, a, b);
    default: {
      cplx s = 0.0;
      for (std::size_t j = 0; j < std::min(a.size(), b.size()); ++j) s += monomial_norm_sq(basis, static_cast<int>(j)) * a[j] * std::conj(b[j]);
      return s;
    }
  }
}

// Taylor coefficients a_0..a_J of a holomorphic F from N samples on |z| = r.
template <class F>
std::vector<cplx> taylor_coefficients_dft(F&& fn, int J, double r = 0.6, int N = 32) {
  if (J >= N) throw std::invalid_argument("taylor_coefficients_dft: need more samples than coefficients");
  std::vector<cplx> samples(N);
  for (int i = 0; i < N; ++i) samples[i] = fn(std::polar(r, 2 * pi * i / N));
  std::vector<cplx> a(J + 1);
  for (int k = 0; k <= J; ++k) {
    cplx s = 0.0;
    for (int i = 0; i < N; ++i) s += samples[i] * std::polar(1.0, -2 * pi * k * i / N);
    a[k] = s / (N * std::pow(r, k));
  }
  return a;
}

// ---- coefficient maps ---------------------------------------------------------

template <class F>
CoefficientVector coefficients(F&& f, const BasisFamily& basis, const QuadratureRule& rule, int J) {
  CoefficientVector c{std::vector<cplx>(J + 1, 0.0), basis};
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const cplx fv = cplx(f(rule.nodes[i])) * rule.weights[i];
    for (int j = 0; j <= J; ++j) c.values[j] += fv * std::conj(special::basis_eval(basis, j, rule.nodes[i]));
  }
  return c;
}

inline cplx series_transform(const CoefficientVector& c, const BasisFamily& target, cplx z) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < c.values.size(); ++j) s += c.values[j] * special::basis_eval(target, static_cast<int>(j), z);
  return s;
}

// <F, psi_j> are the source coefficients of the inverse image.
inline CoefficientVector inverse_series(const std::vector<cplx>& target_coefficients, const BasisFamily& source_basis) {
  return {target_coefficients, source_basis};
}

// sum_j c_j phi_j(x)
inline cplx synthesize(const CoefficientVector& c, cplx x) {
  cplx s = 0.0;
  for (std::size_t j = 0; j < c.values.size(); ++j) s += c.values[j] * special::basis_continued(c.basis, static_cast<int>(j), x);
  return s;
}

inline std::vector<cplx> random_coefficients(int J, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cplx> c(J + 1);
  for (auto& v : c) v = cplx(n(rng), n(rng));
  return c;
}

inline double norm2(const std::vector<cplx>& c) {
  double s = 0.0;
  for (const auto& v : c) s += std::norm(v);
  return std::sqrt(s);
}

// ---- transform operator ---------------------------------------------------------

struct TransformConfig {
  int hermite_nodes = 96;
  int halfline_nodes = 64;
  int plane_nodes = 60;
  int disk_radial = 32;
  int disk_angular = 256;
  double disk_ring_factor = 60.0;
  kernels::KernelConfig kernel;

  static TransformConfig from(const report::RunConfig& rc) {
    TransformConfig c;
    c.hermite_nodes = rc.get_int("hermite_nodes");
    c.halfline_nodes = rc.get_int("halfline_nodes");
    c.plane_nodes = rc.get_int("plane_nodes");
    c.disk_radial = rc.get_int("disk_radial");
    c.disk_angular = rc.get_int("disk_angular");
    c.disk_ring_factor = rc.get("disk_ring_factor");
    c.kernel.series_terms = rc.get_int("series_terms");
    c.kernel.dirichlet_points = rc.get_int("dirichlet_points");
    c.kernel.omega_T = rc.get("omega_T");
    c.kernel.omega_h = rc.get("omega_h");
    return c;
  }
};

inline QuadratureRule source_rule_for(const KernelFamily& fam, int n) {
  if (fam.kind == KernelKind::ClassicalBargmann) return quadrature::gauss_line(n);
  return quadrature::gauss_halfline(n, fam.source_alpha());
}

template <class Target>
class TransformOperator {
 public:
  static constexpr bool l2_target = std::is_same_v<Target, L2Target>;

  TransformOperator(KernelEvaluator kernel, QuadratureRule source_rule, Target target)
      : kernel_(std::move(kernel)), source_(std::move(source_rule)), target_(std::move(target)) {
    const auto& fam = kernel_.family();
    const auto want = fam.kind == KernelKind::ClassicalBargmann
                          ? quadrature::Measure{quadrature::MeasureKind::GaussLine, 0.0}
                          : quadrature::Measure{quadrature::MeasureKind::WeightedHalfLine, fam.source_alpha()};
    if (source_.measure.kind != want.kind || source_.measure.param != want.param)
      throw std::invalid_argument("source rule " + source_.measure.name() + " does not match the " + fam.name() +
                                  " source measure " + want.name());
  }

  const KernelEvaluator& kernel() const { return kernel_; }
  const QuadratureRule& source_rule() const { return source_; }
  const Target& target() const { return target_; }
  BasisFamily source_basis() const { return kernel_.family().source_basis(); }
  BasisFamily target_basis() const { return kernel_.family().target_basis(); }

  // sum_i w_i K(z, x_i) f_i with f sampled at the source nodes
  cplx forward(const std::vector<cplx>& f_nodes, cplx z) const {
    if (f_nodes.size() != source_.size()) throw std::invalid_argument("forward: sample count does not match source rule");
    const auto xs = source_.real_nodes();
    const auto k = kernel_.evaluate(z, xs);
    cplx s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += source_.weights[i] * k[i] * f_nodes[i];
    return s;
  }

  template <class F>
    requires std::is_invocable_v<F, cplx>
  cplx forward(F&& f, cplx z) const {
    return forward(sample(f), z);
  }

  template <class F>
    requires std::is_invocable_v<F, cplx>
  std::vector<cplx> sample(F&& f) const {
    std::vector<cplx> v(source_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(source_.nodes[i]);
    return v;
  }

  std::vector<cplx> sample(const CoefficientVector& c) const {
    return sample([&](cplx x) { return synthesize(c, x); });
  }

  // Forward transform of a polynomial f along the rotated ray x = (1 - z) y; exact for
  // polynomial f with an n-point rule of degree >= deg f + ell. Only for the
  // second and generalized-second kernels.
  template <class F>
  cplx forward_contour(F&& f, cplx z, int n = 0) const {
    const auto& fam = kernel_.family();
    if (fam.kind != KernelKind::SecondBargmann && fam.kind != KernelKind::GeneralizedSecond)
      throw capability_error("forward_contour: only available for the second and generalized-second kernels");
    if (n <= 0) n = static_cast<int>(source_.size());
    const QuadratureRule& r = contour_rule(n);
    const double b = fam.source_alpha();
    const cplx w = 1.0 - z;
    cplx s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double y = r.nodes[i].real();
      const cplx x = w * y;
      s += r.weights[i] * std::exp(z * y) * kernel_.closed(z, x) * cplx(f(x));
    }
    return std::pow(w, b + 1.0) * s;
  }

  // B phi_j(z) for j = 0..J sharing one set of kernel values; rotated ray on disks
  std::vector<cplx> forward_basis(cplx z, int J) const {
    const auto& fam = kernel_.family();
    const auto src = source_basis();
    std::vector<cplx> out(J + 1, 0.0);
    if (!fam.on_disk() || fam.integral_kernel()) {
      const auto xs = source_.real_nodes();
      const auto k = kernel_.evaluate(z, xs);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const cplx wk = source_.weights[i] * k[i];
        for (int j = 0; j <= J; ++j) out[j] += wk * special::basis_eval(src, j, xs[i]);
      }
      return out;
    }
    const QuadratureRule& r = contour_rule(J + fam.ell + 2);
    const double b = fam.source_alpha();
    const cplx w = 1.0 - z;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double y = r.nodes[i].real();
      const cplx x = w * y;
      const cplx wk = r.weights[i] * std::exp(z * y) * kernel_.closed(z, x);
      for (int j = 0; j <= J; ++j) out[j] += wk * special::basis_continued(src, j, x);
    }
    const cplx pre = std::pow(w, b + 1.0);
    for (auto& v : out) v *= pre;
    return out;
  }

  // sum_k w_k density(z_k) conj(K(z_k, x)) F_k with F sampled at the target nodes
  cplx inverse_integral(const std::vector<cplx>& F_nodes, double x) const
    requires l2_target
  {
    const auto& rule = target_.rule;
    if (F_nodes.size() != rule.size()) throw std::invalid_argument("inverse_integral: sample count does not match target rule");
    cplx s = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k)
      s += rule.weights[k] * target_.density(rule.nodes[k]) * std::conj(kernel_(rule.nodes[k], x)) * F_nodes[k];
    return s;
  }

  // several inverse images at one x sharing the kernel column
  std::vector<cplx> inverse_integral(const std::vector<std::vector<cplx>>& Fs, double x) const
    requires l2_target
  {
    const auto& rule = target_.rule;
    for (const auto& F : Fs)
      if (F.size() != rule.size()) throw std::invalid_argument("inverse_integral: sample count does not match target rule");
    std::vector<cplx> out(Fs.size(), 0.0);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const cplx kc = rule.weights[k] * target_.density(rule.nodes[k]) * std::conj(kernel_(rule.nodes[k], x));
      for (std::size_t q = 0; q < Fs.size(); ++q) out[q] += kc * Fs[q][k];
    }
    return out;
  }

  template <class F>
  std::vector<cplx> sample_target(F&& fn) const
    requires l2_target
  {
    std::vector<cplx> v(target_.rule.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(target_.rule.nodes[k]);
    return v;
  }

  // <F, G> in the target space by quadrature
  template <class F, class G>
  cplx target_inner(F&& fn, G&& gn) const
    requires l2_target
  {
    const auto& rule = target_.rule;
    cplx s = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const cplx z = rule.nodes[k];
      s += rule.weights[k] * target_.density(z) * cplx(fn(z)) * std::conj(cplx(gn(z)));
    }
    return s;
  }

  // <B f, psi_k> for k <= J from the kernel's Taylor coefficients (holomorphic targets)
  std::vector<cplx> forward_coefficients(const std::vector<cplx>& f_nodes, int J) const {
    const auto tb = target_basis();
    if (!tb.holomorphic()) throw capability_error("forward_coefficients: target basis is not holomorphic");
    std::vector<cplx> out(J + 1, 0.0);
    for (int k = 0; k <= J; ++k) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < source_.size(); ++i)
        s += source_.weights[i] * kernel_.taylor_coefficient(k, source_.nodes[i].real()) * f_nodes[i];
      out[k] = s / special::monomial_coefficient(tb, k);
    }
    return out;
  }

 private:
  KernelEvaluator kernel_;
  QuadratureRule source_;
  Target target_;
  mutable std::map<int, QuadratureRule> contour_rules_;

  const QuadratureRule& contour_rule(int n) const {
    auto it = contour_rules_.find(n);
    if (it == contour_rules_.end())
      it = contour_rules_.emplace(n, quadrature::gauss_halfline(n, kernel_.family().source_alpha())).first;
    return it->second;
  }
};

using L2Transform = TransformOperator<L2Target>;
using CoefficientTransform = TransformOperator<CoefficientTarget>;
using AnyTransform = std::variant<L2Transform, CoefficientTransform>;

inline L2Target l2_target_for(const KernelFamily& fam, const TransformConfig& cfg) {
  switch (fam.kind) {
    case KernelKind::ClassicalBargmann:
      return {fam.target_basis(), quadrature::gaussian_plane_rule(cfg.plane_nodes), [](cplx) { return 1.0; }};
    case KernelKind::SecondBargmann: {
      const double d = fam.delta;
      return {fam.target_basis(), quadrature::graded_disk_rule(cfg.disk_radial, cfg.disk_angular, d - 1.0, cfg.disk_ring_factor),
              [d](cplx) { return d / pi; }};
    }
    case KernelKind::GeneralizedSecond: {
      const int l = fam.ell;
      const double g = 2.0 * fam.nu - 2.0 * l - 2.0;
      return {fam.target_basis(), quadrature::graded_disk_rule(cfg.disk_radial, cfg.disk_angular, g, cfg.disk_ring_factor),
              [l](cplx z) { return std::pow(1.0 - std::norm(z), 2 * l); }};
    }
    default:
      throw capability_error(fam.name() + " target carries a coefficient inner product; use inverse_series");
  }
}

inline L2Transform make_l2_transform(const KernelFamily& fam, const TransformConfig& cfg = {}) {
  const int n = fam.kind == KernelKind::ClassicalBargmann ? cfg.hermite_nodes : cfg.halfline_nodes;
  return L2Transform(KernelEvaluator(fam, fam.primary_strategy(), cfg.kernel), source_rule_for(fam, n), l2_target_for(fam, cfg));
}

inline CoefficientTransform make_coefficient_transform(const KernelFamily& fam, const TransformConfig& cfg = {},
                                                       std::shared_ptr<const kernels::OmegaWeight> w = nullptr) {
  if (!fam.integral_kernel()) throw std::invalid_argument(fam.name() + " target is an L2 space; use make_l2_transform");
  return CoefficientTransform(KernelEvaluator(fam, fam.primary_strategy(), cfg.kernel, std::move(w)),
                              source_rule_for(fam, cfg.halfline_nodes), CoefficientTarget{fam.target_basis()});
}

inline AnyTransform make_transform(const KernelFamily& fam, const TransformConfig& cfg = {}) {
  if (fam.integral_kernel()) return make_coefficient_transform(fam, cfg);
  return make_l2_transform(fam, cfg);
}

// ---- isometry -----------------------------------------------------------------

struct Isometry {
  double source_norm = 0.0;
  double target_norm = 0.0;
  double discrepancy() const { return std::abs(source_norm - target_norm); }
};

// ||B f|| vs ||f|| for f = sum_j c_j phi_j. L2 targets integrate |B f|^2 over the target rule
// (rotated-ray forward on disks); coefficient targets take Taylor coefficients of B f on a circle.
inline Isometry isometry(const L2Transform& op, const std::vector<cplx>& c) {
  const CoefficientVector cv{c, op.source_basis()};
  const auto f_nodes = op.sample(cv);
  const bool disk = op.kernel().family().on_disk();
  const auto& rule = op.target().rule;
  double acc = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const cplx z = rule.nodes[k];
    const cplx bf = disk ? op.forward_contour([&](cplx x) { return synthesize(cv, x); }, z,
                                             static_cast<int>(c.size()) + op.kernel().family().ell + 2)
                         : op.forward(f_nodes, z);
    acc += rule.weights[k] * op.target().density(z) * std::norm(bf);
  }
  return {norm2(c), std::sqrt(acc)};
}

inline Isometry isometry(const CoefficientTransform& op, const std::vector<cplx>& c, double r = 0.6, int N = 32) {
  const auto f_nodes = op.sample(CoefficientVector{c, op.source_basis()});
  const auto a = taylor_coefficients_dft([&](cplx z) { return op.forward(f_nodes, z); }, static_cast<int>(c.size()) + 4, r, N);
  return {norm2(c), std::sqrt(std::abs(coefficient_inner(op.target_basis(), a, a)))};
}

// images[j][k] = B phi_j at target node k, j = 0..J
inline std::vector<std::vector<cplx>> basis_images(const L2Transform& op, int J) {
  const auto& rule = op.target().rule;
  std::vector<std::vector<cplx>> img(J + 1, std::vector<cplx>(rule.size()));
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const auto v = op.forward_basis(rule.nodes[k], J);
    for (int j = 0; j <= J; ++j) img[j][k] = v[j];
  }
  return img;
}

// G_jk = <B phi_j, B phi_k>; ||B f||^2 = c^* G c for f = sum c_j phi_j
inline std::vector<std::vector<cplx>> target_gram(const L2Transform& op, const std::vector<std::vector<cplx>>& img) {
  const auto& rule = op.target().rule;
  const std::size_t n = img.size();
  std::vector<double> wd(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) wd[q] = rule.weights[q] * op.target().density(rule.nodes[q]);
  std::vector<std::vector<cplx>> G(n, std::vector<cplx>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k <= j; ++k) {
      cplx s = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) s += wd[q] * img[j][q] * std::conj(img[k][q]);
      G[j][k] = s;
      G[k][j] = std::conj(s);
    }
  return G;
}

inline Isometry isometry(const std::vector<std::vector<cplx>>& gram, const std::vector<cplx>& c) {
  if (c.size() > gram.size()) throw std::invalid_argument("isometry: coefficient vector longer than the Gram matrix");
  cplx s = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j)
    for (std::size_t k = 0; k < c.size(); ++k) s += c[j] * gram[j][k] * std::conj(c[k]);
  return {norm2(c), std::sqrt(std::abs(s.real()))};
}

// Taylor coefficients (via the circle DFT) of B phi_j, j = 0..J, from one kernel matrix
inline std::vector<std::vector<cplx>> basis_images(const CoefficientTransform& op, int J, double r = 0.6, int N = 32) {
  const auto xs = op.source_rule().real_nodes();
  const auto src = op.source_basis();
  std::vector<std::vector<double>> phi(J + 1, std::vector<double>(xs.size()));
  for (int j = 0; j <= J; ++j)
    for (std::size_t i = 0; i < xs.size(); ++i) phi[j][i] = op.source_rule().weights[i] * special::basis_eval(src, j, xs[i]).real();
  std::vector<std::vector<cplx>> samples(J + 1, std::vector<cplx>(N));
  for (int p = 0; p < N; ++p) {
    const auto k = op.kernel().evaluate(std::polar(r, 2 * pi * p / N), xs);
    for (int j = 0; j <= J; ++j) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) s += phi[j][i] * k[i];
      samples[j][p] = s;
    }
  }
  std::vector<std::vector<cplx>> out;
  for (int j = 0; j <= J; ++j) {
    int p = 0;
    out.push_back(taylor_coefficients_dft([&](cplx) { return samples[j][p++]; }, J + 4, r, N));
  }
  return out;
}

// G_jk = <B phi_j, B phi_k> in the coefficient inner product
inline std::vector<std::vector<cplx>> target_gram(const CoefficientTransform& op, const std::vector<std::vector<cplx>>& img) {
  const std::size_t n = img.size();
  std::vector<std::vector<cplx>> G(n, std::vector<cplx>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) G[j][k] = coefficient_inner(op.target_basis(), img[j], img[k]);
  return G;
}

template <class Op>
report::Check isometry_check(const Op& op, const std::vector<cplx>& c, const std::string& id, double tol) {
  const auto iso = isometry(op, c);
  return report::make_check(id, "| ||B f|| - ||f|| | for " + op.kernel().family().name(), iso.discrepancy(), tol,
                            "isometry <B f, B g> = <f, g>");
}

}  // namespace bargmann::transforms
