// Acceptance: one PASS/FAIL line per criterion. Tolerances and runtime limits are pinned here,
// independent of the tolerances carried by the verification checks themselves.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <bargmann/verify.hpp>

using namespace bargmann;
using report::Check;
using report::VerificationReport;

namespace {

struct Rule {
  std::string prefix;
  double tolerance;
  std::size_t expected;  // number of checks with this prefix
};

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
};

bool starts_with(const std::string& s, const std::string& p) { return s.compare(0, p.size(), p) == 0; }

// every check under each prefix must exist in the expected number and sit at or below the pinned tolerance
void apply(const std::vector<Rule>& rules, const std::map<std::string, VerificationReport>& reps, Outcome& out, double& worst_ratio) {
  for (const auto& rule : rules) {
    std::size_t n = 0;
    for (const auto& [name, rep] : reps)
      for (const Check& c : rep.checks) {
        if (!starts_with(c.id, rule.prefix)) continue;
        ++n;
        const bool ok = std::isfinite(c.measured) && c.measured <= rule.tolerance;
        if (rule.tolerance > 0) worst_ratio = std::max(worst_ratio, c.measured / rule.tolerance);
        if (!ok) out.fail(c.id + " = " + report::fmt17(c.measured) + " > " + report::fmt17(rule.tolerance));
      }
    if (n != rule.expected) out.fail(rule.prefix + "*: " + std::to_string(n) + " checks, expected " + std::to_string(rule.expected));
  }
}

double phase(const VerificationReport& r, const std::string& key) {
  const auto& p = r.metadata.at("phase_s");
  return p.contains(key) ? p.at(key).get<double>() : 0.0;
}

void limit(Outcome& out, const std::string& what, double seconds, double max_seconds) {
  if (!(seconds < max_seconds)) out.fail(what + " took " + report::fmt17(seconds) + " s, limit " + report::fmt17(max_seconds) + " s");
}

void line(int k, const std::string& title, const Outcome& o, const std::string& measured) {
  std::printf("%s criterion %d: %s | %s%s%s\n", o.ok ? "PASS" : "FAIL", k, title.c_str(), measured.c_str(), o.detail.empty() ? "" : " | ",
              o.detail.c_str());
}

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

}  // namespace

int main() {
  const report::RunConfig rc;  // defaults, whatever the environment says
  std::map<std::string, VerificationReport> reps;
  std::map<std::string, double> wall;
  for (const auto& s : verify::suite_names) {
    const auto t0 = std::chrono::steady_clock::now();
    reps[s] = verify::run_one(s, rc);
    wall[s] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  const auto& K = reps.at("kernels");
  const auto& T = reps.at("transforms");
  int failed = 0;
  auto finish = [&](int k, const std::string& title, const Outcome& o, const std::string& measured) {
    line(k, title, o, measured);
    failed += !o.ok;
  };

  {
    Outcome o;
    double w = 0;
    apply({{"special.genfun.", 1e-8, 4}}, reps, o, w);
    limit(o, "special suite", wall["special"], 2.0);
    finish(1, "generating functions", o, fmt("worst/tol %.3g", w) + fmt(", %.3f s", wall["special"]));
  }
  {
    Outcome o;
    double w = 0;
    apply({{"quadrature.moments.", 1e-11, 15}}, reps, o, w);
    limit(o, "quadrature suite", wall["quadrature"], 2.0);
    finish(2, "quadrature exactness and disk monomial norms", o, fmt("worst/tol %.3g", w) + fmt(", %.3f s", wall["quadrature"]));
  }
  {
    Outcome o;
    double w = 0;
    apply({{"kernels.dual_path.classical", 1e-10, 1},
           {"kernels.dual_path.second", 1e-10, 1},
           {"kernels.dual_path.generalized-second", 1e-10, 1},
           {"kernels.dual_path.dirichlet", 1e-7, 1},
           {"kernels.dual_path.gen-dirichlet", 1e-5, 1}},
          reps, o, w);
    const double t = phase(K, "omega_build") + phase(K, "dual_path");
    limit(o, "omega build + dual path", t, 30.0);
    finish(3, "kernel dual-path agreement", o, fmt("worst/tol %.3g", w) + fmt(", %.2f s", t));
  }
  {
    Outcome o;
    double w = 0;
    if (rc.get("omega_T") != 40.0 || rc.get("omega_h") != 1e-3) o.fail("omega grid is not T = 40, h = 1e-3");
    apply({{"kernels.omega.laplace.", 1e-4, 6}}, reps, o, w);
    const double t = phase(K, "omega_build") + phase(K, "omega_checks");
    limit(o, "omega build + Laplace checks", t, 20.0);
    finish(4, "omega Laplace identity", o, fmt("worst/tol %.3g", w) + fmt(", %.2f s", t));
  }
  {
    Outcome o;
    double w = 0;
    apply({{"transforms.pairing.", 1e-7, 5}, {"transforms.reverse_pairing.", 1e-6, 3}}, reps, o, w);
    const double t = phase(T, "setup") + phase(T, "pairing") + phase(T, "inverse");
    limit(o, "setup + pairing + inverse", t, 30.0);
    finish(5, "pairing and reverse pairing", o, fmt("worst/tol %.3g", w) + fmt(", %.2f s", t));
  }
  {
    Outcome o;
    double w = 0;
    if (rc.get_int("random_vectors") != 20 || rc.get_int("coefficient_terms") != 8) o.fail("not 20 vectors of degree 8");
    apply({{"transforms.isometry.", 1e-6, 5}}, reps, o, w);
    finish(6, "isometry", o, fmt("worst/tol %.3g", w));
  }
  {
    Outcome o;
    double w = 0;
    apply({{"transforms.round_trip.classical", 1e-4, 1},
           {"transforms.round_trip.second", 1e-4, 1},
           {"transforms.round_trip.generalized-second", 1e-4, 1},
           {"transforms.round_trip.dirichlet", 1e-8, 1},
           {"transforms.round_trip.gen-dirichlet", 1e-8, 1}},
          reps, o, w);
    finish(7, "round trips", o, fmt("worst/tol %.3g", w));
  }
  {
    Outcome o;
    double w = 0;
    apply({{"operators.annihilation", 0.0, 1},
           {"operators.exact.dirichlet_zbar", 0.0, 1},
           {"operators.exact.specialization", 0.0, 1},
           {"operators.eigen.nu1.", 1e-4, 6},
           {"operators.eigen.nu2.", 1e-4, 12},
           {"operators.eigen.nu3.", 1e-4, 18},
           {"operators.spectrum", 0.0, 1}},
          reps, o, w);
    finish(8, "operator suite", o, fmt("worst/tol %.3g", w));
  }
  {
    Outcome o;
    double w = 0;
    apply({{"kernels.papadakis.", 1e-6, 8}, {"transforms.reproducing.weighted_bergman", 1e-8, 1}}, reps, o, w);
    finish(9, "reproducing property and basis sums", o, fmt("worst/tol %.3g", w));
  }
  {
    Outcome o;
    const std::string cmd = std::string("env -u ") + report::config_env_var + " '" BARGMANN_CLI "' verify all --quiet --output /dev/null";
    const auto t0 = std::chrono::steady_clock::now();
    const int status = std::system(cmd.c_str());
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (code != 0) o.fail("exit code " + std::to_string(code));
    limit(o, "verify all", t, 180.0);
    finish(10, "verify all", o, fmt("%.1f s", t) + ", exit " + std::to_string(code));
  }
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
