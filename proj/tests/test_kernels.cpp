#include <catch2/catch_amalgamated.hpp>

#include <bargmann/kernels.hpp>

using namespace bargmann;
using namespace bargmann::kernels;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using special::BasisFamily;

namespace {

std::shared_ptr<const OmegaWeight> shared_omega(double a, int m) {
  static std::map<std::pair<double, int>, std::shared_ptr<const OmegaWeight>> cache;
  auto& slot = cache[{a, m}];
  if (!slot) slot = std::make_shared<OmegaWeight>(omega(a, m, default_omega_T, default_omega_h, {true, false}));
  return slot;
}

// L_j^a by explicit alternating sum in extended precision
double laguerre_ref(int j, double a, double x) {
  long double s = 0.0L;
  for (int k = 0; k <= j; ++k)
    s += ((k % 2) ? -1.0L : 1.0L) * std::tgamma(static_cast<long double>(j + a + 1)) /
         (std::tgamma(static_cast<long double>(k + a + 1)) * std::tgamma(j - k + 1.0L) * std::tgamma(k + 1.0L)) *
         std::pow(static_cast<long double>(x), k);
  return static_cast<double>(s);
}

const std::vector<cplx> zs = {{0.0, 0.0}, {0.3, 0.0}, {-0.2, 0.45}, {0.1, -0.6}, {0.55, 0.2}};
const std::vector<double> xs = {0.5, 1.7, 4.0, 8.0};

}  // namespace

TEST_CASE("classical kernel", "[kernels]") {
  CHECK_THAT(classical_kernel(0.0, 2.3).real(), WithinRel(std::pow(special::pi, -0.75), 1e-15));
  const cplx z(0.5, 0.2);
  CHECK(std::abs(classical_kernel(z, 0.0) - std::pow(special::pi, -0.75) * std::exp(-z * z / 2.0)) < 1e-15);
  const cplx s = basis_series(BasisFamily::hermite_l2(), BasisFamily::bargmann_fock(), 0.3, 0.7, 80);
  CHECK(std::abs(classical_kernel(0.3, 0.7) - s) < 1e-10);
}

TEST_CASE("second kernel", "[kernels]") {
  const double d = 1.5;
  CHECK_THAT(second_kernel(d, 0.0, 3.0).real(), WithinRel(1 / std::sqrt(std::tgamma(d + 1)), 1e-15));
  cplx s = 0.0;
  for (int j = 0; j <= 100; ++j) s += std::pow(0.4, j) * laguerre_ref(j, d, 2.0);
  CHECK(std::abs(second_kernel(d, 0.4, 2.0) - s / std::sqrt(std::tgamma(d + 1))) < 1e-9);
  const cplx z(0.2, -0.3);
  CHECK(std::abs(second_kernel(d, z, 0.0) - std::pow(1.0 - z, -d - 1) / std::sqrt(std::tgamma(d + 1))) < 1e-14);
  CHECK_THROWS_AS(second_kernel(d, cplx(1.0, 0.0), 1.0), std::domain_error);
  CHECK_THROWS_AS(second_kernel(-1.0, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("generalized second kernel", "[kernels]") {
  const cplx z(0.3, -0.25);
  for (double nu : {1.0, 1.75, 3.0}) {
    const cplx ref = std::sqrt((2 * nu - 1) / (special::pi * std::tgamma(2 * nu))) * std::pow(1.0 - z, -2 * nu) * std::exp(1.3 * z / (z - 1.0));
    CHECK(std::abs(generalized_second_kernel(nu, 0, z, 1.3) - ref) < 1e-13 * std::abs(ref));
  }
  // z = 0: (-1)^ell (ell! beta / (pi Gamma(2 nu - ell)))^{1/2} L_ell^beta(x), beta = 2(nu - ell) - 1 = 1
  CHECK_THAT(generalized_second_kernel(2.0, 1, 0.0, 1.1).real(),
             WithinRel(-std::sqrt(1.0 / (special::pi * 2.0)) * laguerre_ref(1, 1.0, 1.1), 1e-14));
  const cplx zz(0.3, 0.1);
  const cplx s = basis_series(BasisFamily::laguerre_l2(1.0), BasisFamily::disk_eigen(2.0, 1), zz, 1.5, 120);
  CHECK(std::abs(generalized_second_kernel(2.0, 1, zz, 1.5) - s) < 1e-7);
  CHECK_THROWS_AS(generalized_second_kernel(2.0, 2, zz, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generalized_second_kernel(0.5, 0, zz, 1.0), std::invalid_argument);
}

TEST_CASE("l = 0 reduction", "[kernels]") {
  const double nu = 1.6, d = 2 * nu - 1;
  const cplx ratio0 = generalized_second_kernel(nu, 0, zs[1], xs[0]) / second_kernel(d, zs[1], xs[0]);
  const double expected = std::sqrt(d * std::tgamma(d + 1) / (special::pi * std::tgamma(2 * nu)));
  CHECK_THAT(ratio0.real(), WithinRel(expected, 1e-13));
  for (cplx z : zs)
    for (double x : xs) CHECK(std::abs(generalized_second_kernel(nu, 0, z, x) / second_kernel(d, z, x) - ratio0) < 1e-12);
}

TEST_CASE("dirichlet kernel", "[kernels]") {
  const auto rule = dirichlet_rule();
  CHECK_THAT(dirichlet_kernel(0.0, 2.0, rule).real(), WithinRel(1 / std::sqrt(special::pi), 1e-15));
  cplx s = 1.0;
  for (int j = 1; j <= 400; ++j) s += std::pow(0.4, j) * special::laguerre(j, 0.0, 1.0) / std::sqrt(j * 1.0);
  CHECK(std::abs(dirichlet_kernel(0.4, 1.0, rule) - s / std::sqrt(special::pi)) < 1e-7);
  const double h = 1e-4;
  const cplx deriv = (dirichlet_kernel(h, 1.0, rule) - dirichlet_kernel(-h, 1.0, rule)) / (2 * h);
  CHECK(std::abs(deriv) < 1e-7);
  CHECK_THROWS_AS(dirichlet_kernel(cplx(0.8, 0.8), 1.0, rule), std::domain_error);
  CHECK_THROWS_AS(dirichlet_kernel(0.1, 1.0, quadrature::gauss_halfline(20, 0.0)), std::invalid_argument);
}

TEST_CASE("omega weight", "[kernels]") {
  const auto w = omega(0.0, 2, default_omega_T, default_omega_h);
  CHECK(w.values[0] == 0.0);
  CHECK(w.min_value() >= 0.0);
  const double ref = std::pow(special::pi, 1.5) / 16;
  CHECK_THAT(w.laplace(0.0), WithinRel(ref, 1e-4));
  CHECK_THAT(w.laplace_extrapolated(0.0), WithinRel(ref, 1e-8));
  CHECK_THAT(omega_laplace_closed(0.0, 2, 0.0), WithinRel(ref, 1e-14));
  CHECK_THAT(omega_laplace_closed(0.5, 3, 2.0), WithinRel(omega_laplace_factors(0.5, 3, 2.0), 1e-12));
  for (double j = 0; j < 10; j += 0.5) CHECK(omega_laplace_closed(1.5, 3, j + 0.5) < omega_laplace_closed(1.5, 3, j));
  CHECK_THROWS_AS(omega(-1.0, 2, 40, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(omega(0.0, 1, 40, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(omega(0.0, 2, 40, 0.0), std::invalid_argument);
}

TEST_CASE("omega laplace identity and self check", "[kernels][slow]") {
  for (int m : {2, 3})
    for (double a : {0.0, 0.5, 1.5}) {
      const auto w = omega(a, m, default_omega_T, default_omega_h);
      CHECK(w.reversed_discrepancy < 1e-12);
      CHECK(w.min_value() >= 0.0);
      for (int j = 0; j <= 5; ++j) CHECK_THAT(w.laplace(j), WithinRel(omega_laplace_closed(a, m, j), 1e-4));
      // reported, not asserted as a bound
      CHECK(std::isfinite(w.envelope(m - 1)));
      CHECK(std::isfinite(w.envelope(m)));
    }
  // a coarse grid misses the tolerance
  const auto coarse = omega(0.0, 2, default_omega_T, 0.1, {false, false});
  CHECK(std::abs(coarse.laplace(0.0) / omega_laplace_closed(0.0, 2, 0.0) - 1) > 1e-4);
}

TEST_CASE("generalized Bergman-Dirichlet kernel", "[kernels]") {
  for (double a : {0.0, 1.5}) {
    GenDirichletKernel k(a, 2, shared_omega(a, 2));
    CHECK_THAT(k(0.0, 2.0).real(), WithinRel(1 / std::sqrt(special::pi * std::tgamma(1 + a)), 1e-14));
  }
  GenDirichletKernel k(0.0, 2, shared_omega(0.0, 2));
  CHECK(std::abs(k(0.4, 1.5) - gen_dirichlet_kernel_series(0.0, 2, 0.4, 1.5, 400)) < 1e-5);
  for (double a : {0.0, 0.5}) {
    GenDirichletKernel kk(a, 2, shared_omega(a, 2));
    const int m = 2;
    const double ref = std::sqrt(std::tgamma(a + 2) / (2.0 * std::tgamma(m + a + 1))) * laguerre_ref(m, a, 1.3) /
                       std::sqrt(special::pi * std::tgamma(1 + a));
    CHECK_THAT(kk.taylor_coefficient(m, 1.3), WithinRel(ref, 1e-8));
    // Taylor coefficient through a Cauchy integral of the kernel itself
    cplx c = 0.0;
    const int n = 32;
    const double r = 0.5;
    for (int i = 0; i < n; ++i) {
      const cplx z = std::polar(r, 2 * special::pi * i / n);
      c += kk(z, 1.3) * std::pow(z, -m);
    }
    CHECK(std::abs(c / double(n) - ref) < 1e-7);
  }
  CHECK_THROWS_AS(GenDirichletKernel(0.5, 2, shared_omega(0.0, 2)), std::invalid_argument);
}

TEST_CASE("dual-path agreement", "[kernels]") {
  const std::vector<KernelFamily> fams = {KernelFamily::classical(), KernelFamily::second(1.5),
                                          KernelFamily::generalized_second(2.0, 1), KernelFamily::dirichlet(),
                                          KernelFamily::gen_bergman_dirichlet(0.5, 2)};
  for (const auto& f : fams) {
    const Strategy primary = f.primary_strategy();
    KernelEvaluator prim(f, primary, {}, f.kind == KernelKind::GenBergmanDirichlet ? shared_omega(0.5, 2) : nullptr);
    KernelEvaluator ser(f, Strategy::TruncatedSeries);
    const double tol = f.kind == KernelKind::Dirichlet ? 1e-7 : f.kind == KernelKind::GenBergmanDirichlet ? 1e-5 : 1e-10;
    double worst = 0.0;
    for (cplx z : zs)
      for (double x : xs) worst = std::max(worst, std::abs(prim(z, x) - ser(z, x)) / std::max(1.0, std::abs(ser(z, x))));
    INFO(f.name() << " worst " << worst);
    CHECK(worst <= tol);
  }
  CHECK_THROWS_AS(KernelEvaluator(KernelFamily::dirichlet(), Strategy::ClosedForm), std::invalid_argument);
  CHECK_THROWS_AS(KernelEvaluator(KernelFamily::classical(), Strategy::IntegralRep), std::invalid_argument);
}

TEST_CASE("reproducing kernels", "[kernels]") {
  using RK = ReproducingKernel;
  CHECK_THAT(reproducing_kernel(RK::bargmann_fock(), 0.0, 0.0).real(), WithinRel(1 / special::pi, 1e-15));
  CHECK_THAT(reproducing_kernel(RK::dirichlet(), 0.0, 0.0).real(), WithinRel(1 / special::pi, 1e-15));
  const double a = 0.7;
  const cplx z(0.3, 0.0), w(0.0, 0.2);
  const cplx ref = (a + 1) / special::pi * std::pow(1.0 - z * std::conj(w), -a - 2);
  CHECK(std::abs(reproducing_kernel(RK::weighted_bergman_area(a), z, w) - ref) < 1e-15);

  CHECK(std::abs(papadakis_sum(BasisFamily::bargmann_fock(), 0.5, 0.5, 60) - std::exp(0.25) / special::pi) < 1e-12);
  CHECK(std::abs(papadakis_sum(BasisFamily::dirichlet(), 0.4, 0.3, 400) - (1 + std::log(1 / (1 - 0.12))) / special::pi) < 1e-8);
  CHECK(std::abs(papadakis_sum(BasisFamily::disk_eigen(2.0, 1), 0.2, 0.2, 150) - reproducing_kernel(RK::disk_eigen(2.0, 1), 0.2, 0.2)) < 1e-6);

  // Gen Bergman-Dirichlet at (alpha, m) = (0, 1) is the Dirichlet kernel
  for (cplx zz : {cplx(0.3, 0.1), cplx(-0.5, 0.2)})
    for (cplx ww : {cplx(0.4, -0.3), cplx(0.1, 0.0)})
      CHECK(std::abs(reproducing_kernel(RK::gen_bergman_dirichlet(0.0, 1), zz, ww) - reproducing_kernel(RK::dirichlet(), zz, ww)) < 1e-9);

  const std::vector<RK> spaces = {RK::bargmann_fock(), RK::weighted_bergman(1.5), RK::weighted_bergman_area(0.5),
                                  RK::disk_eigen(2.0, 1), RK::disk_eigen(3.0, 2), RK::dirichlet(),
                                  RK::gen_bergman_dirichlet(0.5, 2), RK::gen_bergman_dirichlet(1.5, 3)};
  const std::vector<cplx> pts = {{0.1, 0.2}, {-0.4, 0.3}, {0.5, -0.1}, {0.0, -0.45}};
  for (const auto& sp : spaces) {
    INFO(sp.name());
    const auto basis = sp.basis();
    for (cplx p : pts)
      for (cplx q : pts) {
        const cplx kpq = reproducing_kernel(sp, p, q);
        CHECK(std::abs(kpq - std::conj(reproducing_kernel(sp, q, p))) < 1e-13 * std::max(1.0, std::abs(kpq)));
        const cplx kpp = reproducing_kernel(sp, p, p), kqq = reproducing_kernel(sp, q, q);
        CHECK(kpp.real() > 0.0);
        CHECK(std::abs(kpp.imag()) < 1e-14 * kpp.real());
        CHECK(kpp.real() * kqq.real() >= std::norm(kpq) * (1 - 1e-12));
        const int J = sp.space == RKSpace::BargmannFock ? 60 : 200;
        CHECK(std::abs(papadakis_sum(basis, p, q, J) - kpq) < 1e-6);
      }
  }
}

TEST_CASE("flat kernels", "[kernels]") {
  const cplx z(0.25, -0.3);
  // Dirichlet: against dx, e^{-x/2} phi_j maps to psi_j
  const auto lag = quadrature::gauss_halfline(60, 0.0);
  const auto drule = dirichlet_rule();
  for (int j = 0; j <= 4; ++j) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < lag.size(); ++i) {
      const double x = lag.nodes[i].real();
      const double fj = std::exp(-x / 2) * special::basis_eval(BasisFamily::laguerre_l2(0.0), j, x).real();
      acc += lag.weights[i] * std::exp(x) * dirichlet_kernel_flat(z, x, drule) * fj;
    }
    CHECK(std::abs(acc - special::basis_eval(BasisFamily::dirichlet(), j, z)) < 1e-8);
  }
  // second Bargmann: against x^d / Gamma(1+d) dx, sqrt(Gamma(1+d)) e^{-x/2} phi_j maps to psi_j
  const double d = 1.5;
  const auto lagd = quadrature::gauss_halfline(60, d);
  for (int j = 0; j <= 4; ++j) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < lagd.size(); ++i) {
      const double x = lagd.nodes[i].real();
      const double fj = std::sqrt(std::tgamma(1 + d)) * std::exp(-x / 2) * special::basis_eval(BasisFamily::laguerre_l2(d), j, x).real();
      acc += lagd.weights[i] * std::exp(x) / std::tgamma(1 + d) * second_kernel_flat(d, z, x) * fj;
    }
    CHECK(std::abs(acc - special::basis_eval(BasisFamily::bergman(d), j, z)) < 1e-8);
  }
  // gen Bergman-Dirichlet: against dx, x^{a/2} e^{-x/2} phi_j maps to psi_j
  const double a = 0.5;
  GenDirichletKernel k(a, 2, shared_omega(a, 2));
  const auto laga = quadrature::gauss_halfline(40, a);
  for (int j = 0; j <= 3; ++j) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < laga.size(); ++i) {
      const double x = laga.nodes[i].real();
      const double fj = std::pow(x, a / 2) * std::exp(-x / 2) * special::basis_eval(BasisFamily::laguerre_l2(a), j, x).real();
      acc += laga.weights[i] * std::exp(x) * std::pow(x, -a) * k.flat(z, x) * fj;
    }
    CHECK(std::abs(acc - special::basis_eval(BasisFamily::gen_dirichlet(a, 2), j, z)) < 1e-5);
  }
  CHECK(std::abs(classical_kernel_flat(0.2, 0.5) - classical_kernel(0.2, 0.5) * std::exp(-0.125)) < 1e-16);
}
