#include <catch2/catch_amalgamated.hpp>

#include <bargmann/quadrature.hpp>
#include <bargmann/special.hpp>

using namespace bargmann;
using namespace bargmann::special;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double fact(int n) { return std::tgamma(n + 1.0); }

// explicit sum H_j(x) = j! sum_k (-1)^k (2x)^{j-2k} / (k! (j-2k)!)
double hermite_sum(int j, double x) {
  double s = 0.0;
  for (int k = 0; 2 * k <= j; ++k) s += std::pow(-1.0, k) * std::pow(2.0 * x, j - 2 * k) / (fact(k) * fact(j - 2 * k));
  return fact(j) * s;
}

// L_j^a(x) = sum_k (-1)^k Gamma(j+a+1) / (Gamma(k+a+1) (j-k)! k!) x^k, in extended precision
double laguerre_sum(int j, double a, double x) {
  long double s = 0.0L;
  for (int k = 0; k <= j; ++k)
    s += ((k % 2) ? -1.0L : 1.0L) * std::tgamma(static_cast<long double>(j + a + 1)) /
         (std::tgamma(static_cast<long double>(k + a + 1)) * std::tgamma(j - k + 1.0L) * std::tgamma(k + 1.0L)) *
         std::pow(static_cast<long double>(x), k);
  return static_cast<double>(s);
}

// generalized binomial (n choose k) = n (n-1) ... (n-k+1) / k!
long double gbinom(long double n, int k) {
  long double r = 1.0L;
  for (int i = 0; i < k; ++i) r *= (n - i) / (i + 1.0L);
  return r;
}

// P_n^{(a,b)}(x) = sum_s binom(n+a, n-s) binom(n+b, s) ((x-1)/2)^s ((x+1)/2)^{n-s}
double jacobi_sum(int n, double a, double b, double x) {
  long double s = 0.0L;
  const long double xm = (x - 1.0L) / 2, xp = (x + 1.0L) / 2;
  for (int k = 0; k <= n; ++k) s += gbinom(n + a, n - k) * gbinom(n + b, k) * std::pow(xm, k) * std::pow(xp, n - k);
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("hermite values", "[special]") {
  CHECK(hermite(0, 3.7) == 1.0);
  CHECK_THAT(hermite(1, 2.0), WithinAbs(4.0, 1e-15));
  CHECK_THAT(hermite(2, 1.0), WithinAbs(2.0, 1e-15));
  for (int j = 0; j <= 12; ++j)
    for (double x : {-2.5, -0.3, 0.0, 1.1, 3.0}) CHECK_THAT(hermite(j, x), WithinAbs(hermite_sum(j, x), 1e-9 * (1 + std::abs(hermite_sum(j, x)))));
}

TEST_CASE("laguerre values and domain", "[special]") {
  CHECK(laguerre(0, 0.3, 5.0) == 1.0);
  for (double a : {-0.5, 0.0, 1.5}) CHECK_THAT(laguerre(1, a, 0.8), WithinAbs(1.0 + a - 0.8, 1e-15));
  CHECK_THAT(laguerre(2, 0.0, 2.0), WithinAbs(-1.0, 1e-15));
  for (int j = 0; j <= 15; ++j)
    for (double a : {-0.5, 0.0, 0.5, 3.0})
      for (double x : {0.0, 0.7, 4.0, 11.0})
        CHECK_THAT(laguerre(j, a, x), WithinAbs(laguerre_sum(j, a, x), 1e-9 * (1 + std::abs(laguerre_sum(j, a, x)))));
  CHECK_THROWS_AS(laguerre(2, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("jacobi values and symmetry", "[special]") {
  CHECK(jacobi(0, 0.2, 0.4, 0.9) == 1.0);
  for (double a : {0.0, 0.5, 2.0})
    for (double b : {-0.5, 1.5}) CHECK_THAT(jacobi(1, a, b, 0.3), WithinAbs((a - b) / 2 + (a + b + 2) * 0.3 / 2, 1e-14));
  CHECK_THAT(jacobi(2, 0.5, 1.5, 0.3), WithinAbs(jacobi(2, 1.5, 0.5, -0.3), 1e-14));
  for (int j = 0; j <= 10; ++j)
    for (double x : {-0.8, 0.1, 0.6}) {
      CHECK_THAT(jacobi(j, 0.7, 2.2, x), WithinAbs(jacobi_sum(j, 0.7, 2.2, x), 1e-11));
      CHECK_THAT(jacobi(j, 0.7, 2.2, x), WithinAbs(std::pow(-1.0, j) * jacobi(j, 2.2, 0.7, -x), 1e-11));
    }
  // negative integer first parameter, value of the terminating sum
  for (int j = 1; j <= 6; ++j)
    for (int l = 1; l <= j; ++l)
      for (double x : {-0.4, 0.2, 0.9}) CHECK_THAT(jacobi(j, -static_cast<double>(l), 1.3, x), WithinAbs(jacobi_sum(j, -static_cast<double>(l), 1.3, x), 1e-10));
}

TEST_CASE("hypergeometric series", "[special]") {
  CHECK(hyp1f1(0.3, 1.7, 0.0).value == 1.0);
  const double g = 0.5, s = 1.2;
  CHECK_THAT(hyp1f1(-2.0, 1.0 + g, s).value,
             WithinRel(2.0 * std::tgamma(1.0 + g) / std::tgamma(3.0 + g) * laguerre_sum(2, g, s), 1e-13));
  const auto lhs = hyp1f1(3.5, 2.0, 0.7);
  const auto rhs = hyp1f1(2.0 - 3.5, 2.0, -0.7);
  CHECK_THAT(lhs.value, WithinRel(std::exp(0.7) * rhs.value, 1e-13));
  CHECK(lhs.first_omitted < 1e-15);
  CHECK(hyp1f1(-3.0, 1.0, 2.0).terminated);
  // 2F1(1,1;2;x) = -log(1-x)/x
  CHECK_THAT(hyp2f1(1.0, 1.0, 2.0, 0.5).value, WithinRel(-std::log(0.5) / 0.5, 1e-13));
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 2.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(hyp1f1(1.0, -2.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(hyp1f1(1.0, 1.0, 50.0, 20), non_convergence);
  CHECK(hyp2f1(1.0, 1.0, 2.0, 0.9999, 20).first_omitted > 1e-3);
  // 3F2(1,1,1;2,2;x) = Li2(x)/x, Li2(1/2) = pi^2/12 - log(2)^2/2
  const double li2 = pi * pi / 12.0 - 0.5 * std::log(2.0) * std::log(2.0);
  CHECK_THAT(hyp3f2(1.0, 1.0, 1.0, 2.0, 2.0, 0.5).value, WithinRel(li2 / 0.5, 1e-13));
}

TEST_CASE("gamma and beta", "[special]") {
  CHECK_THAT(beta(1.5, 0.5), WithinRel(pi / 2, 1e-14));
  CHECK_THAT(special::gamma(1.7), WithinRel(0.7 * special::gamma(0.7), 1e-13));
  CHECK_THAT(special::gamma(2.3 + 3), WithinRel(pochhammer(2.3, 3) * special::gamma(2.3), 1e-13));
  CHECK_THAT(log_gamma(0.5), WithinRel(0.5 * std::log(pi), 1e-14));
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(beta(-1.0, 2.0), std::domain_error);
  const auto sl = log_pochhammer(-2.5, 3);  // (-2.5)(-1.5)(-0.5) < 0
  CHECK(sl.sign == -1);
  CHECK_THAT(sl.value(), WithinRel(-2.5 * -1.5 * -0.5, 1e-14));
}

TEST_CASE("basis evaluation", "[special]") {
  const cplx z(1, 1);
  CHECK_THAT(std::abs(basis_eval(BasisFamily::bargmann_fock(), 2, z) - z * z / std::sqrt(2 * pi)), WithinAbs(0.0, 1e-15));
  CHECK_THAT(basis_eval(BasisFamily::dirichlet(), 0, cplx(0.3, 0.2)).real(), WithinRel(1 / std::sqrt(pi), 1e-15));
  CHECK_THAT(basis_eval(BasisFamily::disk_eigen(2.0, 0), 0, 0.3).real(), WithinRel(std::sqrt(3 / pi), 1e-14));
  CHECK_THAT(basis_eval(BasisFamily::hermite_l2(), 3, 0.4).real(),
             WithinRel(hermite_sum(3, 0.4) / (std::pow(pi, 0.25) * std::sqrt(fact(3) * 8)), 1e-13));
  CHECK_THROWS_AS(basis_eval(BasisFamily::disk_eigen(2.0, 1), 1, cplx(1.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(basis_eval(BasisFamily::disk_eigen(2.0, 2), 1, 0.1), std::invalid_argument);
  // GenDirichlet branch at j = m
  const auto gd = BasisFamily::gen_dirichlet(0.5, 2);
  CHECK_THAT(monomial_coefficient(gd, 1), WithinRel(std::sqrt(std::tgamma(2.5) / (pi * std::tgamma(1.5))), 1e-14));
  CHECK_THAT(monomial_coefficient(gd, 2), WithinRel(std::sqrt(std::tgamma(2.5) / (pi * 4 * std::tgamma(1.5))), 1e-14));
}

TEST_CASE("generating functions", "[special]") {
  for (double x = -3.0; x <= 3.0; x += 0.5)
    for (double t : {-0.6, -0.2, 0.3, 0.6}) {
      double s = 0.0;
      for (int j = 0; j <= 80; ++j) s += hermite(j, x) * std::pow(t, j) / fact(j);
      CHECK_THAT(s, WithinRel(std::exp(2 * x * t - t * t), 1e-9));
    }
  for (double d : {0.5, 1.5})
    for (double x : {0.0, 0.5, 2.0, 6.0})
      for (cplx z : {cplx(0.6, 0), cplx(-0.3, 0.4), cplx(0, -0.55)}) {
        cplx s = 0.0;
        for (int j = 0; j <= 120; ++j) s += ipow(z, j) * laguerre(j, d, x);
        const cplx ref = std::pow(1.0 - z, -d - 1) * std::exp(-x * z / (1.0 - z));
        CHECK(std::abs(s - ref) <= 1e-9 * std::abs(ref));
      }
  // shifted: sum_j binom(j+k, j) L_{j+k}^b(y) s^j = (1-s)^{-b-k-1} exp(-ys/(1-s)) L_k^b(y/(1-s))
  for (int k : {1, 3})
    for (double y : {0.5, 2.0})
      for (double sv : {0.3, -0.5}) {
        double acc = 0.0;
        for (int j = 0; j <= 150; ++j) acc += fact(j + k) / (fact(k) * fact(j)) * laguerre(j + k, 0.5, y) * std::pow(sv, j);
        const double ref = std::pow(1 - sv, -0.5 - k - 1) * std::exp(-y * sv / (1 - sv)) * laguerre_sum(k, 0.5, y / (1 - sv));
        CHECK_THAT(acc, WithinRel(ref, 1e-9));
      }
}

TEST_CASE("bilateral generating function", "[special]") {
  const double lam = 0.4, b = 5.0, a = 3.0, y = 0.36, x = 1.0;
  double lhs = 0.0;
  for (int j = 0; j <= 200; ++j) lhs += std::pow(lam, j) * hyp2f1(-static_cast<double>(j), b, 1.0 + a, y).value * laguerre(j, a, x);
  const double rhs = std::pow(1 - lam, b - 1 - a) / std::pow(1 - lam + lam * y, b) * std::exp(-x * lam / (1 - lam)) *
                     hyp1f1(b, 1.0 + a, x * y * lam / ((1 - lam) * (1 - lam + lam * y))).value;
  CHECK_THAT(lhs, WithinRel(rhs, 1e-8));
}

TEST_CASE("orthonormality by quadrature", "[special]") {
  constexpr int J = 8;
  auto gram_check = [](const BasisFamily& f, const quadrature::QuadratureRule& rule, auto density) {
    double worst = 0.0;
    for (int i = 0; i <= J; ++i)
      for (int k = 0; k <= J; ++k) {
        const cplx g = quadrature::integrate(rule, [&](cplx p) {
          return basis_eval(f, i, p) * std::conj(basis_eval(f, k, p)) * density(p);
        });
        worst = std::max(worst, std::abs(g - (i == k ? 1.0 : 0.0)));
      }
    return worst;
  };
  auto one = [](cplx) { return 1.0; };
  CHECK(gram_check(BasisFamily::hermite_l2(), quadrature::gauss_line(40), one) < 1e-8);
  for (double a : {-0.5, 0.0, 2.5}) CHECK(gram_check(BasisFamily::laguerre_l2(a), quadrature::gauss_halfline(30, a), one) < 1e-8);
  CHECK(gram_check(BasisFamily::bargmann_fock(), quadrature::gaussian_plane_rule(30), one) < 1e-8);
  for (double d : {0.5, 2.0})
    CHECK(gram_check(BasisFamily::bergman(d), quadrature::disk_rule(20, 40, d - 1), [d](cplx) { return d / pi; }) < 1e-8);
  for (auto [nu, l] : {std::pair{2.0, 1}, std::pair{3.0, 2}, std::pair{1.25, 0}}) {
    const double g = 2 * nu - 2 - 2 * l;
    CHECK(gram_check(BasisFamily::disk_eigen(nu, l), quadrature::disk_rule(24, 48, g),
                     [l](cplx p) { return std::pow(1 - std::norm(p), 2 * l); }) < 1e-8);
  }
}

TEST_CASE("laguerre growth stays bounded", "[special]") {
  double worst = 0.0;
  for (int j = 1; j <= 500; ++j) worst = std::max(worst, std::abs(laguerre(j, 0.0, 1.0)) * std::pow(j * 1.0, 0.25));
  CHECK(worst < 2.0);
}
