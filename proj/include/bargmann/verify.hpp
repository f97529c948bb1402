#pragma once

#include <array>
#include <chrono>
#include <future>
#include <random>
#include <string>
#include <vector>

#include "kernels.hpp"
#include "operators.hpp"
#include "report.hpp"
#include "transforms.hpp"

namespace bargmann::verify {

using report::Check;
using report::make_check;
using report::RunConfig;
using report::VerificationReport;
using special::BasisFamily;
using special::pi;

inline const std::array<const char*, 5> suite_names = {"special", "quadrature", "kernels", "transforms", "operators"};

inline bool known_suite(const std::string& s) {
  if (s == "all") return true;
  for (const char* n : suite_names)
    if (s == n) return true;
  return false;
}

namespace detail {

inline std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

inline double rel(cplx got, cplx ref) { return std::abs(got - ref) / std::max(std::abs(ref), 1e-300); }

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// seconds since the previous lap, accumulated per phase name
struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  std::map<std::string, double> phases;
  void lap(const std::string& phase) {
    const auto t = std::chrono::steady_clock::now();
    phases[phase] += std::chrono::duration<double>(t - t0).count();
    t0 = t;
  }
  nlohmann::ordered_json json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : phases) j[k] = v;
    return j;
  }
};

}  // namespace detail

// ---- special --------------------------------------------------------------------

inline VerificationReport suite_special(const RunConfig& rc) {
  using namespace special;
  VerificationReport r{"special", {}, {}};
  auto tol = [&](double t) { return rc.tol(t); };

  double e = 0.0;
  for (double x = -3.0; x <= 3.0; x += 0.5)
    for (double t : {-0.6, -0.2, 0.3, 0.6}) {
      double s = 0.0, tj = 1.0;
      for (int j = 0; j <= 80; ++j, tj *= t / j) s += hermite(j, x) * tj;
      e = std::max(e, detail::rel(s, std::exp(2 * x * t - t * t)));
    }
  r.add(make_check("special.genfun.hermite", "Hermite generating function, 81 terms, x in [-3,3], |t| <= 0.6", e, tol(1e-8),
                   "sum H_j(x) t^j / j! = exp(2xt - t^2)"));

  e = 0.0;
  for (double d : {0.0, 0.5, 1.5})
    for (double x : {0.0, 0.5, 2.0, 6.0})
      for (cplx z : {cplx(0.6, 0), cplx(-0.3, 0.4), cplx(0, -0.55), cplx(0.2, 0.2)}) {
        cplx s = 0.0;
        for (int j = 0; j <= 120; ++j) s += ipow(z, j) * laguerre(j, d, x);
        e = std::max(e, detail::rel(s, std::pow(1.0 - z, -d - 1) * std::exp(-x * z / (1.0 - z))));
      }
  r.add(make_check("special.genfun.laguerre", "Laguerre generating function, 121 terms, |z| <= 0.6", e, tol(1e-8),
                   "sum L_j^a(x) z^j = (1-z)^{-a-1} exp(-xz/(1-z))"));

  e = 0.0;
  for (double a : {0.0, 0.5, 1.0})
    for (int k : {1, 2, 3})
      for (double y : {0.5, 2.0})
        for (cplx sv : {cplx(0.3, 0), cplx(-0.5, 0), cplx(0.2, -0.3)}) {
          cplx acc = 0.0;
          for (int j = 0; j <= 120; ++j)
            acc += std::exp(log_factorial(j + k) - log_factorial(k) - log_factorial(j)) * laguerre(j + k, a, y) * ipow(sv, j);
          const cplx ref = std::pow(1.0 - sv, -a - k - 1) * std::exp(-y * sv / (1.0 - sv)) * laguerre(k, a, y / (1.0 - sv));
          e = std::max(e, detail::rel(acc, ref));
        }
  r.add(make_check("special.genfun.shifted_laguerre", "shifted Laguerre generating function, 121 terms", e, tol(1e-8),
                   "sum C(j+k,j) L_{j+k}^a(y) s^j = (1-s)^{-a-k-1} exp(-ys/(1-s)) L_k^a(y/(1-s))"));

  e = 0.0;
  for (double lam : {0.3, 0.4})
    for (double x : {0.5, 1.0, 3.0}) {
      const double b = 5.0, a = 3.0, y = 0.36;
      double lhs = 0.0;
      for (int j = 0; j <= 120; ++j) lhs += std::pow(lam, j) * hyp2f1(-static_cast<double>(j), b, 1.0 + a, y).value * laguerre(j, a, x);
      const double rhs = std::pow(1 - lam, b - 1 - a) / std::pow(1 - lam + lam * y, b) * std::exp(-x * lam / (1 - lam)) *
                         hyp1f1(b, 1.0 + a, x * y * lam / ((1 - lam) * (1 - lam + lam * y))).value;
      e = std::max(e, detail::rel(lhs, rhs));
    }
  r.add(make_check("special.genfun.bilateral", "bilateral Laguerre/2F1 generating function, 121 terms", e, tol(1e-8),
                   "sum lam^j 2F1(-j,b;1+a;y) L_j^a(x) closed form with 1F1"));

  // hypergeometric identities
  e = std::max({detail::rel(hyp1f1(3.5, 2.0, 0.7).value, std::exp(0.7) * hyp1f1(-1.5, 2.0, -0.7).value),
                detail::rel(hyp2f1(1.0, 1.0, 2.0, 0.5).value, 2 * std::log(2.0)),
                detail::rel(hyp3f2(1.0, 1.0, 1.0, 2.0, 2.0, 0.5).value,
                            2 * (pi * pi / 12.0 - 0.5 * std::log(2.0) * std::log(2.0))),
                detail::rel(hyp1f1(0.7, 0.7, -1.3).value, std::exp(-1.3))});
  r.add(make_check("special.hypergeometric.identities", "Kummer transformation, 2F1 logarithm, 3F2 dilogarithm, 1F1(a;a;x)", e,
                   tol(1e-13), "closed forms of 1F1, 2F1, 3F2"));

  e = std::max({detail::rel(beta(1.5, 0.5), pi / 2), detail::rel(special::gamma(5.3), pochhammer(2.3, 3) * special::gamma(2.3)),
                detail::rel(log_gamma(0.5), 0.5 * std::log(pi))});
  r.add(make_check("special.gamma", "gamma, beta, Pochhammer identities", e, tol(1e-13), "Gamma(x+n) = (x)_n Gamma(x)"));

  e = 0.0;
  for (int n = 0; n <= 10; ++n)
    for (double x : {-0.7, 0.1, 0.55})
      for (auto [a, b] : {std::pair{0.5, 1.5}, std::pair{-2.0, 3.0}, std::pair{2.0, 0.0}})
        e = std::max(e, std::abs(jacobi(n, a, b, -x) - ((n % 2) ? -1.0 : 1.0) * jacobi(n, b, a, x)));
  r.add(make_check("special.jacobi.symmetry", "Jacobi reflection including a negative integer parameter", e, tol(1e-11),
                   "P_n^{(a,b)}(-x) = (-1)^n P_n^{(b,a)}(x)"));

  constexpr int J = 8;
  auto gram = [&](const BasisFamily& f, const quadrature::QuadratureRule& rule, auto density) {
    double worst = 0.0;
    std::vector<std::vector<cplx>> vals(J + 1, std::vector<cplx>(rule.size()));
    for (int j = 0; j <= J; ++j)
      for (std::size_t q = 0; q < rule.size(); ++q) vals[j][q] = basis_eval(f, j, rule.nodes[q]);
    for (int i = 0; i <= J; ++i)
      for (int k = 0; k <= J; ++k) {
        cplx g = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) g += rule.weights[q] * density(rule.nodes[q]) * vals[i][q] * std::conj(vals[k][q]);
        worst = std::max(worst, std::abs(g - (i == k ? 1.0 : 0.0)));
      }
    return worst;
  };
  auto one = [](cplx) { return 1.0; };
  r.add(make_check("special.orthonormal.hermite", "Gram matrix of normalized Hermite polynomials, j <= 8",
                   gram(BasisFamily::hermite_l2(), quadrature::gauss_line(40), one), tol(1e-10), "<phi_i, phi_k> = delta_ik"));
  e = 0.0;
  for (double a : {-0.5, 0.0, 2.5}) e = std::max(e, gram(BasisFamily::laguerre_l2(a), quadrature::gauss_halfline(30, a), one));
  r.add(make_check("special.orthonormal.laguerre", "Gram matrix of normalized Laguerre polynomials, j <= 8", e, tol(1e-10),
                   "<phi_i, phi_k> = delta_ik"));
  r.add(make_check("special.orthonormal.fock", "Gram matrix of the Fock basis, j <= 8",
                   gram(BasisFamily::bargmann_fock(), quadrature::gaussian_plane_rule(30), one), tol(1e-10), "<psi_i, psi_k> = delta_ik"));
  e = 0.0;
  for (double d : {0.5, 2.0})
    e = std::max(e, gram(BasisFamily::bergman(d), quadrature::disk_rule(20, 40, d - 1), [d](cplx) { return d / pi; }));
  r.add(make_check("special.orthonormal.bergman", "Gram matrix of the weighted Bergman basis, j <= 8", e, tol(1e-10),
                   "<psi_i, psi_k> = delta_ik"));
  e = 0.0;
  for (auto [nu, l] : {std::pair{2.0, 1}, std::pair{3.0, 2}, std::pair{1.25, 0}})
    e = std::max(e, gram(BasisFamily::disk_eigen(nu, l), quadrature::disk_rule(24, 48, 2 * nu - 2 - 2 * l),
                         [l](cplx p) { return std::pow(1 - std::norm(p), 2 * l); }));
  r.add(make_check("special.orthonormal.disk_eigen", "Gram matrix of the disk eigenbasis, j <= 8", e, tol(1e-10),
                   "<psi_i, psi_k> = delta_ik in L^2((1-|z|^2)^{2nu-2})"));
  return r;
}

// ---- quadrature -------------------------------------------------------------------

inline VerificationReport suite_quadrature(const RunConfig& rc) {
  using namespace quadrature;
  VerificationReport r{"quadrature", {}, {}};
  const double t = rc.tol(1e-11);
  for (int n : {4, 16, 64}) {
    const std::string sn = std::to_string(n);
    double e = 0.0;
    const auto line = gauss_line(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      long double s = 0.0L;
      for (std::size_t i = 0; i < line.size(); ++i) s += line.weights[i] * std::pow(static_cast<long double>(line.nodes[i].real()), k);
      const double scale = std::tgamma((k + 1) / 2.0);
      e = std::max(e, std::abs(static_cast<double>(s) - ((k % 2) ? 0.0 : scale)) / scale);
    }
    r.add(make_check("quadrature.moments.line.n" + sn, "Gauss-Hermite moments x^k, k <= 2n-1", e, t, "int x^k e^{-x^2} dx"));

    e = 0.0;
    for (double a : {-0.5, 0.0, 0.5, 2.0}) {
      const auto hl = gauss_halfline(n, a);
      for (int k = 0; k <= 2 * n - 1; ++k) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < hl.size(); ++i) s += hl.weights[i] * std::pow(static_cast<long double>(hl.nodes[i].real()), k);
        e = std::max(e, std::abs(static_cast<double>(s / std::exp(static_cast<long double>(std::lgamma(a + k + 1)))) - 1.0));
      }
    }
    r.add(make_check("quadrature.moments.halfline.n" + sn, "Gauss-Laguerre moments x^k, k <= 2n-1, alpha in {-1/2,0,1/2,2}", e, t,
                     "int x^{k+a} e^{-x} dx = Gamma(a+k+1)"));

    e = 0.0;
    for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{-0.5, 0.5}, std::pair{1.5, 0.0}}) {
      const auto [x, w] = gauss_jacobi(n, a, b);
      for (int k = 0; k <= 2 * n - 1; ++k) {
        // int (1-x)^a (1+x)^b ((1+x)/2)^k dx = 2^{a+b+1} B(a+1, b+k+1)
        long double s = 0.0L;
        for (int i = 0; i < n; ++i) s += w[i] * std::pow((1.0L + x[i]) / 2, k);
        const double ref = std::exp((a + b + 1) * std::log(2.0) + special::log_beta(a + 1, b + k + 1));
        e = std::max(e, std::abs(static_cast<double>(s) / ref - 1.0));
      }
    }
    r.add(make_check("quadrature.moments.jacobi.n" + sn, "Gauss-Jacobi moments ((1+x)/2)^k, k <= 2n-1", e, t,
                     "int (1-x)^a (1+x)^b ((1+x)/2)^k dx = 2^{a+b+1} B(a+1,b+k+1)"));

    // disk: z^a zbar^b with a, b < n; off-diagonal moments are scaled by the diagonal norms
    e = 0.0;
    for (double g : {-0.5, 0.0, 1.0, 2.5}) {
      const auto rule = disk_rule(n, 2 * n, g);
      const int deg = std::min(n - 1, 12);
      auto norm = [&](int a) { return pi * std::exp(special::log_factorial(a) + std::lgamma(g + 1) - std::lgamma(a + g + 2)); };
      std::vector<std::vector<cplx>> pw(deg + 1, std::vector<cplx>(rule.size()));
      for (std::size_t q = 0; q < rule.size(); ++q) {
        cplx p = 1.0;
        for (int a = 0; a <= deg; ++a, p *= rule.nodes[q]) pw[a][q] = p;
      }
      for (int a = 0; a <= deg; ++a)
        for (int b = 0; b <= deg; ++b) {
          cplx s = 0.0;
          for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * pw[a][q] * std::conj(pw[b][q]);
          const double scale = std::sqrt(norm(a) * norm(b));
          e = std::max(e, std::abs(s - (a == b ? norm(a) : 0.0)) / scale);
        }
    }
    r.add(make_check("quadrature.moments.disk.n" + sn, "disk rule monomial norms and orthogonality, gamma in {-1/2,0,1,5/2}", e, t,
                     "||z^a||^2 = pi a! Gamma(g+1)/Gamma(a+g+2)"));

    e = 0.0;
    const auto pl = gaussian_plane_rule(n);
    for (int a = 0; a <= std::min(n - 1, 12); ++a)
      for (int b = 0; b <= std::min(n - 1, 12); ++b) {
        const cplx s = integrate(pl, [&](cplx z) { return special::ipow(z, a) * special::ipow(std::conj(z), b); });
        const double na = pi * std::exp(special::log_factorial(a)), nb = pi * std::exp(special::log_factorial(b));
        e = std::max(e, std::abs(s - (a == b ? na : 0.0)) / std::sqrt(na * nb));
      }
    r.add(make_check("quadrature.moments.plane.n" + sn, "Gaussian plane rule moments z^a zbar^b", e, t,
                     "int |z|^{2a} e^{-|z|^2} dA = pi a!"));
  }
  const auto gr = graded_disk_rule(rc.get_int("disk_radial"), rc.get_int("disk_angular"), 0.5, rc.get("disk_ring_factor"));
  long double s = 0.0L;
  for (double w : gr.weights) s += w;
  r.add(make_check("quadrature.graded_disk.mass", "graded disk rule total mass, gamma = 1/2",
                   std::abs(static_cast<double>(s) / (pi / 1.5) - 1.0), rc.tol(1e-12), "int (1-|z|^2)^g dA = pi/(g+1)"));
  r.metadata["graded_disk_nodes"] = gr.size();
  return r;
}

// ---- kernels ----------------------------------------------------------------------

struct OmegaBank {
  std::map<std::pair<double, int>, std::shared_ptr<const kernels::OmegaWeight>> w;

  static OmegaBank build(const std::vector<std::pair<double, int>>& keys, double T, double h) {
    std::vector<std::future<kernels::OmegaWeight>> jobs;
    for (const auto& [a, m] : keys) jobs.push_back(std::async(std::launch::async, [=] { return kernels::omega(a, m, T, h); }));
    OmegaBank b;
    for (std::size_t i = 0; i < keys.size(); ++i) b.w[keys[i]] = std::make_shared<kernels::OmegaWeight>(jobs[i].get());
    return b;
  }
  std::shared_ptr<const kernels::OmegaWeight> at(double a, int m) const { return w.at({a, m}); }
};

inline std::vector<kernels::KernelFamily> verification_families() {
  using kernels::KernelFamily;
  return {KernelFamily::classical(), KernelFamily::second(1.5), KernelFamily::generalized_second(2.0, 1), KernelFamily::dirichlet(),
          KernelFamily::gen_bergman_dirichlet(0.5, 2)};
}

inline kernels::KernelConfig kernel_config(const RunConfig& rc) { return transforms::TransformConfig::from(rc).kernel; }

inline VerificationReport suite_kernels(const RunConfig& rc) {
  using namespace kernels;
  VerificationReport r{"kernels", {}, {}};
  const double T = rc.get("omega_T"), h = rc.get("omega_h");
  std::vector<std::pair<double, int>> keys;
  for (int m : {2, 3})
    for (double a : {0.0, 0.5, 1.5}) keys.emplace_back(a, m);
  detail::Stopwatch sw;
  const auto bank = OmegaBank::build(keys, T, h);
  sw.lap("omega_build");

  const std::vector<cplx> zs = {{0.0, 0.0}, {0.3, 0.0}, {-0.2, 0.45}, {0.1, -0.6}, {0.55, 0.2}};
  const std::vector<double> xs = {0.5, 1.7, 4.0, 8.0};
  for (const auto& f : verification_families()) {
    const auto omega = f.kind == KernelKind::GenBergmanDirichlet ? bank.at(0.5, 2) : nullptr;
    KernelEvaluator prim(f, f.primary_strategy(), kernel_config(rc), omega);
    KernelEvaluator ser(f, Strategy::TruncatedSeries);
    const double tol = f.kind == KernelKind::Dirichlet ? 1e-7 : f.kind == KernelKind::GenBergmanDirichlet ? 1e-5 : 1e-10;
    double worst = 0.0;
    for (cplx z : zs)
      for (double x : xs) {
        const cplx s = ser(z, x);
        worst = std::max(worst, std::abs(prim(z, x) - s) / std::max(1.0, std::abs(s)));
      }
    r.add(make_check("kernels.dual_path." + f.name(), std::string(strategy_name(f.primary_strategy())) + " vs truncated series, 20 (z,x) points, |z| <= 0.6",
                     worst, rc.tol(tol), "K(z,x) = sum_j phi_j(x) psi_j(z)"));
  }
  sw.lap("dual_path");

  for (const auto& [key, w] : bank.w) {
    const auto [a, m] = key;
    const std::string tag = detail::fmt("a%g", a) + ".m" + std::to_string(m);
    double e = 0.0;
    for (int j = 0; j <= 5; ++j) e = std::max(e, std::abs(w->laplace(j) / omega_laplace_closed(a, m, j) - 1.0));
    r.add(make_check("kernels.omega.laplace." + tag, "trapezoid Laplace transform of omega vs closed form, j <= 5", e, rc.tol(1e-4),
                     "int omega(t) e^{-jt} dt = closed Gamma-ratio product"));
    r.add(make_check("kernels.omega.order." + tag, "omega convolution order reversed", w->reversed_discrepancy, rc.tol(1e-10),
                     "convolution is commutative"));
    r.add(make_check("kernels.omega.nonnegative." + tag, "negative part of omega samples", std::max(0.0, -w->min_value()), 0.0,
                     "omega >= 0"));
    r.metadata["omega_envelope"][tag] = {w->envelope(m - 1), w->envelope(m)};
  }
  sw.lap("omega_checks");

  using RK = ReproducingKernel;
  const std::vector<cplx> pts = {{0.1, 0.2}, {-0.4, 0.3}, {0.5, 0.0}, {0.0, -0.45}, {0.25, -0.25}};
  const std::vector<RK> spaces = {RK::bargmann_fock(), RK::weighted_bergman(1.5), RK::weighted_bergman_area(0.5),
                                  RK::disk_eigen(2.0, 1), RK::disk_eigen(3.0, 2), RK::dirichlet(),
                                  RK::gen_bergman_dirichlet(0.5, 2), RK::gen_bergman_dirichlet(1.5, 3)};
  for (const auto& sp : spaces) {
    const auto basis = sp.basis();
    const int J = sp.space == RKSpace::BargmannFock ? 60 : 200;
    double pap = 0.0, herm = 0.0, cs = 0.0;
    for (cplx p : pts)
      for (cplx q : pts) {
        const cplx kpq = reproducing_kernel(sp, p, q);
        pap = std::max(pap, std::abs(papadakis_sum(basis, p, q, J) - kpq));
        herm = std::max(herm, std::abs(kpq - std::conj(reproducing_kernel(sp, q, p))) / std::max(1.0, std::abs(kpq)));
        const double kpp = reproducing_kernel(sp, p, p).real(), kqq = reproducing_kernel(sp, q, q).real();
        cs = std::max(cs, std::max(0.0, std::norm(kpq) / (kpp * kqq) - 1.0));
      }
    r.add(make_check("kernels.papadakis." + sp.name(), "basis sum vs closed reproducing kernel, |z|,|w| <= 0.5, " + std::to_string(J + 1) + " terms",
                     pap, rc.tol(1e-6), "K(z,w) = sum_j psi_j(z) conj(psi_j(w))"));
    r.add(make_check("kernels.hermitian." + sp.name(), "K(z,w) - conj K(w,z)", herm, rc.tol(1e-13), "K(z,w) = conj K(w,z)"));
    r.add(make_check("kernels.cauchy_schwarz." + sp.name(), "excess of |K(z,w)|^2 over K(z,z)K(w,w)", cs, rc.tol(1e-12),
                     "|K(z,w)|^2 <= K(z,z) K(w,w)"));
  }
  double red = 0.0;
  for (cplx z : pts)
    for (cplx w : pts)
      red = std::max(red, std::abs(reproducing_kernel(RK::gen_bergman_dirichlet(0.0, 1), z, w) - reproducing_kernel(RK::dirichlet(), z, w)));
  r.add(make_check("kernels.reduction.gen_dirichlet_to_dirichlet", "generalized kernel at (alpha, m) = (0, 1) vs Dirichlet kernel", red,
                   rc.tol(1e-9), "D_1^0 = Dirichlet space"));
  sw.lap("reproducing");
  r.metadata["omega_grid"] = {{"T", T}, {"h", h}};
  r.metadata["phase_s"] = sw.json();
  return r;
}

// ---- transforms -------------------------------------------------------------------

inline VerificationReport suite_transforms(const RunConfig& rc) {
  using namespace transforms;
  using kernels::KernelKind;
  VerificationReport r{"transforms", {}, {}};
  const auto cfg = TransformConfig::from(rc);
  const int J = rc.get_int("coefficient_terms");
  const int nvec = rc.get_int("random_vectors");
  std::mt19937_64 rng(static_cast<std::uint64_t>(rc.get("seed")));
  detail::Stopwatch sw;
  const auto omega = std::make_shared<kernels::OmegaWeight>(kernels::omega(0.5, 2, rc.get("omega_T"), rc.get("omega_h")));
  sw.lap("setup");

  const std::vector<cplx> disk_points = {{0.0, 0.0},  {0.3, 0.1},  {-0.25, 0.4}, {0.5, -0.2}, {-0.6, -0.1},
                                         {0.1, 0.65}, {0.45, 0.45}, {-0.3, -0.5}, {0.62, 0.0}, {0.0, -0.35}};
  const std::vector<cplx> plane_points = {{0.0, 0.0}, {0.5, 0.2}, {-1.0, 0.3}, {1.2, -0.8}, {0.0, 1.5},
                                          {-0.7, -1.1}, {2.0, 0.1}, {0.3, 0.3}, {-1.6, 0.9}, {0.8, 1.4}};

  for (const auto& fam : verification_families()) {
    const auto src = fam.source_basis(), tgt = fam.target_basis();
    const std::string name = fam.name();
    const auto& pts = fam.on_disk() ? disk_points : plane_points;
    auto pairing = [&](const auto& op) {
      double worst = 0.0;
      for (int j = 0; j <= 8; ++j) {
        const auto f = op.sample([&](cplx x) { return special::basis_eval(src, j, x); });
        for (cplx z : pts) worst = std::max(worst, std::abs(op.forward(f, z) - special::basis_eval(tgt, j, z)));
      }
      r.add(make_check("transforms.pairing." + name, "max |B phi_j(z) - psi_j(z)|, j <= 8, 10 points", worst, rc.tol(1e-7),
                       "B phi_j = psi_j"));
    };

    if (fam.integral_kernel()) {
      const auto op = make_coefficient_transform(fam, cfg, fam.kind == KernelKind::GenBergmanDirichlet ? omega : nullptr);
      sw.lap("setup");
      pairing(op);
      sw.lap("pairing");
      const auto G = target_gram(op, basis_images(op, J));
      double iso = 0.0, rt = 0.0;
      for (int v = 0; v < nvec; ++v) {
        const auto c = random_coefficients(J, rng);
        iso = std::max(iso, isometry(G, c).discrepancy());
        if (v == 0) iso = std::max(iso, isometry(op, c).discrepancy());  // one vector without the Gram shortcut
        const auto a = op.forward_coefficients(op.sample(CoefficientVector{c, src}), J);
        const auto back = inverse_series(a, src);
        for (int j = 0; j <= J; ++j) rt = std::max(rt, std::abs(back.values[j] - c[j]));
      }
      r.add(make_check("transforms.isometry." + name, "| ||B f|| - ||f|| | over random coefficient vectors (coefficient inner product)",
                       iso, rc.tol(1e-6), "||B f|| = ||f||"));
      r.add(make_check("transforms.round_trip." + name, "inverse_series(forward(f)) - f on coefficients", rt, rc.tol(1e-8),
                       "B^{-1} B = I"));
      sw.lap("isometry_round_trip_coefficient");
      continue;
    }

    const auto op = make_l2_transform(fam, cfg);
    sw.lap("setup");
    pairing(op);
    sw.lap("pairing");
    const auto img = basis_images(op, std::max(J, 8));
    const auto G = target_gram(op, img);
    double gram = 0.0;
    for (int j = 0; j <= 8; ++j)
      for (int k = 0; k <= 8; ++k) gram = std::max(gram, std::abs(G[j][k] - (j == k ? 1.0 : 0.0)));
    r.add(make_check("transforms.adjoint." + name, "Gram matrix of B phi_j in the target space, j <= 8", gram, rc.tol(1e-8),
                     "B* B = I"));

    double iso = 0.0;
    std::vector<std::vector<cplx>> cs;
    for (int v = 0; v < nvec; ++v) {
      cs.push_back(random_coefficients(J, rng));
      iso = std::max(iso, isometry(G, cs.back()).discrepancy());
    }
    iso = std::max(iso, isometry(op, cs.front()).discrepancy());  // one vector without the Gram shortcut
    r.add(make_check("transforms.isometry." + name, "| ||B f|| - ||f|| | over random coefficient vectors (target quadrature)", iso,
                     rc.tol(1e-6), "||B f|| = ||f||"));
    sw.lap("isometry");

    // reverse pairing and round trip share the kernel column at each check node
    std::vector<std::vector<cplx>> Fs;
    for (int j = 0; j <= 8; ++j) Fs.push_back(op.sample_target([&](cplx z) { return special::basis_eval(tgt, j, z); }));
    std::vector<cplx> F(op.target().rule.size(), 0.0);
    for (int j = 0; j <= J; ++j)
      for (std::size_t q = 0; q < F.size(); ++q) F[q] += cs.front()[j] * img[j][q];
    Fs.push_back(F);
    const CoefficientVector cf{cs.front(), src};
    double rev = 0.0, rt = 0.0;
    for (double x : source_rule_for(fam, rc.get_int("check_nodes")).real_nodes()) {
      const auto v = op.inverse_integral(Fs, x);
      for (int j = 0; j <= 8; ++j) rev = std::max(rev, std::abs(v[j] - special::basis_eval(src, j, x)));
      rt = std::max(rt, std::abs(v.back() - synthesize(cf, x)));
    }
    r.add(make_check("transforms.reverse_pairing." + name, "max |B^{-1} psi_j(x) - phi_j(x)| at check nodes, j <= 8", rev, rc.tol(1e-6),
                     "B^{-1} psi_j = phi_j"));
    r.add(make_check("transforms.round_trip." + name, "inverse_integral(forward(f)) - f at check nodes", rt, rc.tol(1e-4),
                     "B^{-1} B = I"));
    r.metadata["target_nodes"][name] = op.target().rule.size();
    sw.lap("inverse");
  }

  // reproducing identity of weighted Bergman kernels on polynomials of degree <= 6
  double rp = 0.0;
  for (double a : {0.0, 0.5, 2.0}) {
    const auto rule = quadrature::disk_rule(16, 64, a);
    const auto coef = random_coefficients(6, rng);
    auto f = [&](cplx w) {
      cplx s = 0.0;
      for (int k = 6; k >= 0; --k) s = s * w + coef[k];
      return s;
    };
    for (cplx z : {cplx(0.2, 0.1), cplx(-0.45, 0.3), cplx(0.0, 0.5)}) {
      const cplx v = quadrature::integrate(rule, [&](cplx w) {
        return kernels::reproducing_kernel(kernels::ReproducingKernel::weighted_bergman_area(a), z, w) * f(w);
      });
      rp = std::max(rp, std::abs(v - f(z)) / std::abs(f(z)));
    }
  }
  sw.lap("reproducing");
  r.metadata["phase_s"] = sw.json();
  r.add(make_check("transforms.reproducing.weighted_bergman", "int K(z,w) f(w) (1-|w|^2)^a dA(w) vs f(z), degree 6", rp, rc.tol(1e-8),
                   "<f, K_z> = f(z)"));
  return r;
}

// ---- operators -------------------------------------------------------------------

inline VerificationReport suite_operators(const RunConfig& rc) {
  using namespace operators;
  VerificationReport r{"operators", {}, {}};
  const double h = rc.get("fd_step");

  double bad = 0.0;
  for (double g : {1.0, 2.0, 2.5, 4.0})
    for (int j = 0; j <= 12; ++j) bad += !apply_exact(DiskOperator::d(g), MonomialExpansion::monomial(j, 0)).empty();
  r.add(make_check("operators.annihilation", "number of nonzero D_gamma z^j, j <= 12, gamma in {1, 2, 5/2, 4}", bad, 0.0,
                   "dbar z^j = 0"));

  const MonomialExpansion want{{{0, 1}, 8.0}, {{1, 2}, -8.0}};
  r.add(make_check("operators.exact.dirichlet_zbar", "D_2(zbar) vs 8 zbar - 8 z zbar^2, mismatching terms",
                   apply_exact(DiskOperator::dirichlet(), MonomialExpansion::monomial(0, 1)) == want ? 0.0 : 1.0, 0.0,
                   "D_2 zbar = 8 zbar (1 - |z|^2)"));
  bad = 0.0;
  for (double g : {0.5, 1.0, 2.0, 3.0})
    bad += !(apply_exact(DiskOperator::casimir(g), MonomialExpansion::monomial(0, 0)) == MonomialExpansion::monomial(0, 0, 2 * g - g * g));
  r.add(make_check("operators.exact.casimir_constant", "mismatches of Casimir(1) = (2g - g^2)", bad, 0.0, "constant term 2g - g^2"));

  std::mt19937_64 rng(static_cast<std::uint64_t>(rc.get("seed")));
  std::normal_distribution<double> nd;
  auto random_expansion = [&](int deg) {
    MonomialExpansion e;
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) e.add(a, b, cplx(nd(rng), nd(rng)));
    return e;
  };
  bad = 0.0;
  for (double a : {0.0, 0.5, 1.0, 3.0}) {
    const auto f = random_expansion(6);
    bad += !(apply_exact(DiskOperator::gen_dirichlet(a), f) == apply_exact(DiskOperator::landau(a / 2 + 1), f));
  }
  r.add(make_check("operators.exact.specialization", "mismatches of Delta_alpha f vs H_{alpha/2+1} f coefficientwise", bad, 0.0,
                   "Delta_alpha = H_{alpha/2+1}"));

  std::uniform_real_distribution<double> u(0, 1);
  double agree = 0.0, order = 1e300;
  for (double g : {1.0, 2.0, 3.5}) {
    const auto op = DiskOperator::casimir(g);
    const auto f = random_expansion(4);
    const auto ex = apply_exact(op, f);
    double e1 = 0.0, e2 = 0.0;
    for (int k = 0; k < 10; ++k) {
      const cplx z = std::polar(0.85 * std::sqrt(u(rng)), 2 * pi * u(rng));
      const cplx ref = ex(z);
      const double d = std::abs(apply_fd(op, f, z, 1e-3) - ref) / std::max(1.0, std::abs(ref));
      agree = std::max(agree, d);
      e1 = std::max(e1, std::abs(apply_fd(op, f, z, 1e-2) - ref));
      e2 = std::max(e2, std::abs(apply_fd(op, f, z, 1e-3) - ref));
    }
    order = std::min(order, std::log10(e1 / e2));
  }
  r.add(make_check("operators.fd.agreement", "finite differences (h = 1e-3) vs exact action on degree-4 expansions", agree,
                   rc.tol(1e-5), "apply_fd = apply_exact + O(h^2)"));
  r.add(make_check("operators.fd.order", "2 minus the measured order over h in {1e-2, 1e-3}", 2.0 - order, 0.1,
                   "second-order central differences"));

  const auto pts = operator_sample_points();
  for (double nu : {1.0, 2.0, 3.0})
    for (int l = 0; l <= static_cast<int>(std::floor(nu - 0.5)); ++l)
      for (int j = 0; j <= 5; ++j) r.add(eigen_check(nu, l, j, pts, h, rc.tol(1e-4)));

  using L = std::vector<std::pair<int, double>>;
  auto enumerate = [](double top_real, auto level) {
    L out;
    for (int l = 0; l <= static_cast<int>(std::floor(top_real)); ++l) out.emplace_back(l, level(l));
    return out;
  };
  bad = 0.0;
  for (double nu : {1.0, 1.5, 2.0, 3.0, 4.5})
    bad += !(point_spectrum(SpectrumKind::Landau, nu).levels == enumerate(nu - 0.5, [nu](int l) { return 4.0 * l * (2 * nu - l - 1); }));
  for (double a : {1.0, 2.0, 5.0, 8.0})
    bad += !(point_spectrum(SpectrumKind::GenDirichlet, a).levels == enumerate((a - 1) / 2, [a](int l) { return 4.0 * l * (a - l + 1); }));
  const auto low = point_spectrum(SpectrumKind::GenDirichlet, 0.5);
  bad += !(low.flagged && low.levels == L{{0, 0.0}});
  r.add(make_check("operators.spectrum", "mismatching point-spectrum enumerations", bad, 0.0,
                   "4l(2nu-l-1), l <= floor(nu-1/2); 4l(alpha-l+1), l <= floor((alpha-1)/2)"));

  bad = 0.0;
  bad += !harmonic_membership(MonomialExpansion::monomial(3, 0), HarmonicSpace::dirichlet()).member;
  bad += harmonic_membership(MonomialExpansion::monomial(0, 1), HarmonicSpace::dirichlet()).member;
  bad += harmonic_membership([](int j) { return cplx(1.0 / (j + 1)); }, HarmonicSpace::dirichlet()).member;
  bad += !harmonic_membership([](int j) { return cplx(1.0 / ((j + 1.0) * (j + 1))); }, HarmonicSpace::dirichlet()).member;
  bad += !harmonic_membership(MonomialExpansion::monomial(5, 0, cplx(0, 1)), HarmonicSpace::gen_dirichlet(0.5, 2)).member;
  bad += harmonic_membership(MonomialExpansion::monomial(2, 1), HarmonicSpace::gen_dirichlet(0.5, 2)).member;
  r.add(make_check("operators.membership", "wrong harmonic-space verdicts among six reference functions", bad, 0.0,
                   "null space of the invariant Laplacian with derivative in L^2"));
  return r;
}

// ---- dispatch -------------------------------------------------------------------

inline VerificationReport run_one(const std::string& s, const RunConfig& rc) {
  if (s == "special") return suite_special(rc);
  if (s == "quadrature") return suite_quadrature(rc);
  if (s == "kernels") return suite_kernels(rc);
  if (s == "transforms") return suite_transforms(rc);
  if (s == "operators") return suite_operators(rc);
  throw std::invalid_argument("unknown suite " + s);
}

// Suites of "all" run concurrently; checks keep declaration order.
inline VerificationReport run(const std::string& suite, const RunConfig& rc) {
  if (!known_suite(suite)) throw std::invalid_argument("unknown suite " + suite);
  VerificationReport out{suite, {}, {}};
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> names;
  if (suite == "all") names.assign(suite_names.begin(), suite_names.end());
  else names = {suite};
  std::vector<std::future<std::pair<VerificationReport, double>>> jobs;
  for (const auto& n : names)
    jobs.push_back(std::async(std::launch::async, [&rc, n] {
      VerificationReport rep;
      const double t = detail::timed([&] { rep = run_one(n, rc); });
      return std::pair{std::move(rep), t};
    }));
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto [rep, t] = jobs[i].get();
    out.append(rep);
    out.metadata["suites"][names[i]] = {{"checks", rep.checks.size()}, {"wall_time_s", t}};
    if (!rep.metadata.empty()) out.metadata["suites"][names[i]]["details"] = rep.metadata;
  }
  out.metadata["config"] = rc.to_json();
  out.metadata["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace bargmann::verify
