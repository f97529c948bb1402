#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <bargmann/operators.hpp>
#include <bargmann/quadrature.hpp>
#include <bargmann/report.hpp>
#include <bargmann/transforms.hpp>
#include <bargmann/verify.hpp>

using namespace bargmann;
using nlohmann::ordered_json;
using report::fmt17;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ordered_json cjson(cplx v) { return {report::number(v.real()), report::number(v.imag())}; }

cplx parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  try {
    std::size_t u = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(s, &u);
      if (u != s.size()) throw std::invalid_argument(s);
      return re;
    }
    const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
    std::size_t ua = 0, ub = 0;
    const double re = std::stod(a, &ua), im = std::stod(b, &ub);
    if (ua != a.size() || ub != b.size()) throw std::invalid_argument(s);
    return {re, im};
  } catch (const std::exception&) {
    throw UsageError("expected a complex number as re,im: " + s);
  }
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& it : items) {
    std::stringstream ss(it);
    std::string kv;
    while (std::getline(ss, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("expected key=value in --params: " + kv);
      try {
        std::size_t u = 0;
        const std::string v = kv.substr(eq + 1);
        out[kv.substr(0, eq)] = std::stod(v, &u);
        if (u != v.size()) throw std::invalid_argument(v);
      } catch (const std::invalid_argument&) {
        throw UsageError("not a number in --params: " + kv);
      }
    }
  }
  return out;
}

kernels::KernelFamily make_family(const std::string& name, const std::map<std::string, double>& p) {
  auto get = [&](const char* k, double def) {
    auto it = p.find(k);
    return it == p.end() ? def : it->second;
  };
  auto integer = [&](const char* k, double def) {
    const double v = get(k, def);
    if (v != std::floor(v)) throw UsageError(std::string("parameter ") + k + " must be an integer");
    return static_cast<int>(v);
  };
  const std::map<std::string, std::vector<std::string>> allowed = {
      {"classical", {}}, {"second", {"delta"}}, {"generalized-second", {"nu", "ell"}}, {"dirichlet", {}}, {"gen-dirichlet", {"alpha", "m"}}};
  auto a = allowed.find(name);
  if (a == allowed.end()) throw UsageError("unknown kernel family " + name);
  for (const auto& [k, v] : p)
    if (std::find(a->second.begin(), a->second.end(), k) == a->second.end())
      throw UsageError("family " + name + " takes no parameter " + k);
  kernels::KernelFamily f;
  if (name == "classical") f = kernels::KernelFamily::classical();
  else if (name == "second") f = kernels::KernelFamily::second(get("delta", 1.0));
  else if (name == "generalized-second") f = kernels::KernelFamily::generalized_second(get("nu", 2.0), integer("ell", 1));
  else if (name == "dirichlet") f = kernels::KernelFamily::dirichlet();
  else f = kernels::KernelFamily::gen_bergman_dirichlet(get("alpha", 0.0), integer("m", 2));
  try {
    f.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return f;
}

ordered_json family_json(const kernels::KernelFamily& f) {
  ordered_json j{{"name", f.name()}};
  switch (f.kind) {
    case kernels::KernelKind::SecondBargmann: j["delta"] = f.delta; break;
    case kernels::KernelKind::GeneralizedSecond: j["nu"] = f.nu; j["ell"] = f.ell; break;
    case kernels::KernelKind::GenBergmanDirichlet: j["alpha"] = f.alpha; j["m"] = f.m; break;
    default: break;
  }
  return j;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void emit(const ordered_json& j, const std::string& path) {
  const std::string text = report::dump(j) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

// Config flags: --config or BARGMANN_CONFIG, then --set key=value and one --<key> flag per entry.
struct ConfigFlags {
  std::string file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> direct;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "flat key = value config file (default: $" + std::string(report::config_env_var) + ")");
    app->add_option("--set", sets, "override a config entry, key=value (repeatable)");
    const report::RunConfig defaults;
    for (const auto& [k, e] : defaults.entries()) {
      std::string flag = k;
      std::replace(flag.begin(), flag.end(), '_', '-');
      app->add_option("--" + flag, direct[k], e.help);
    }
  }

  report::RunConfig resolve() const {
    report::RunConfig rc;
    try {
      std::string path = file;
      if (path.empty())
        if (const char* env = std::getenv(report::config_env_var)) path = env;
      if (!path.empty()) rc.load_file(path);
      for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value: " + s);
        rc.set(s.substr(0, eq), s.substr(eq + 1));
      }
      for (const auto& [k, v] : direct)
        if (!v.empty()) rc.set(k, v);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return rc;
  }
};

// ---- nodes --------------------------------------------------------------------

struct NodesCmd {
  std::string rule = "line", format = "csv";
  int n = 8, n_theta = 0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0, ring_factor = 60.0;
  bool header = false;

  void attach(CLI::App* app) {
    app->add_option("--rule", rule, "line | halfline | jacobi | disk | graded-disk | plane")->capture_default_str();
    app->add_option("--n", n, "order (radial order for disk rules)")->capture_default_str();
    app->add_option("--alpha", alpha, "half-line exponent x^alpha, or Jacobi (1-x)^alpha")->capture_default_str();
    app->add_option("--beta", beta, "Jacobi exponent (1+x)^beta")->capture_default_str();
    app->add_option("--gamma", gamma, "disk weight (1-|z|^2)^gamma")->capture_default_str();
    app->add_option("--n-theta", n_theta, "angular points of disk rules (default 2n; minimum for graded-disk)");
    app->add_option("--ring-factor", ring_factor, "graded-disk ring refinement factor")->capture_default_str();
    app->add_option("--format", format, "csv | json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
    app->add_flag("--header", header, "print a CSV header line");
  }

  int run() const {
    quadrature::QuadratureRule r;
    try {
      const int nt = n_theta > 0 ? n_theta : 2 * n;
      if (rule == "line") r = quadrature::gauss_line(n);
      else if (rule == "halfline") r = quadrature::gauss_halfline(n, alpha);
      else if (rule == "disk") r = quadrature::disk_rule(n, nt, gamma);
      else if (rule == "graded-disk") r = quadrature::graded_disk_rule(n, n_theta > 0 ? n_theta : 256, gamma, ring_factor);
      else if (rule == "plane") r = quadrature::gaussian_plane_rule(n);
      else if (rule == "jacobi") {
        auto [x, w] = quadrature::gauss_jacobi(n, alpha, beta);
        for (std::size_t i = 0; i < x.size(); ++i) {
          r.nodes.push_back(x[i]);
          r.weights.push_back(w[i]);
        }
      } else {
        throw UsageError("unknown rule " + rule);
      }
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (format == "json") {
      ordered_json j{{"rule", rule}, {"size", r.size()}, {"nodes", ordered_json::array()}, {"weights", ordered_json::array()}};
      for (std::size_t i = 0; i < r.size(); ++i) {
        j["nodes"].push_back(cjson(r.nodes[i]));
        j["weights"].push_back(r.weights[i]);
      }
      emit(j, "");
      return 0;
    }
    if (header) std::printf("node_re, node_im, weight\n");
    for (std::size_t i = 0; i < r.size(); ++i)
      std::printf("%s, %s, %s\n", fmt17(r.nodes[i].real()).c_str(), fmt17(r.nodes[i].imag()).c_str(), fmt17(r.weights[i]).c_str());
    return 0;
  }
};

// ---- kernel-eval ----------------------------------------------------------------

struct KernelEvalCmd {
  std::string family, strategy = "primary", z = "0,0";
  std::vector<std::string> params;
  std::vector<double> xs;
  bool cross_check = false;
  ConfigFlags cfg;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "classical | second | generalized-second | dirichlet | gen-dirichlet")->required();
    app->add_option("--params", params, "family parameters, e.g. delta=1.5 or nu=2,ell=1 or alpha=0.5,m=2");
    app->add_option("--z", z, "target point re,im")->capture_default_str();
    app->add_option("--x", xs, "source point(s)")->required();
    app->add_option("--strategy", strategy, "primary | closed | series | integral")
        ->capture_default_str()
        ->check(CLI::IsMember({"primary", "closed", "series", "integral"}));
    app->add_flag("--cross-check", cross_check, "also evaluate the truncated series and report the discrepancy");
    cfg.attach(app);
  }

  int run() const {
    const auto fam = make_family(family, parse_params(params));
    const auto rc = cfg.resolve();
    const auto kc = verify::kernel_config(rc);
    const cplx zz = parse_complex(z);
    kernels::Strategy s = fam.primary_strategy();
    if (strategy == "closed") s = kernels::Strategy::ClosedForm;
    if (strategy == "series") s = kernels::Strategy::TruncatedSeries;
    if (strategy == "integral") s = kernels::Strategy::IntegralRep;
    std::unique_ptr<kernels::KernelEvaluator> ev;
    try {
      ev = std::make_unique<kernels::KernelEvaluator>(fam, s, kc);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const double tol = fam.kind == kernels::KernelKind::Dirichlet ? 1e-7
                       : fam.kind == kernels::KernelKind::GenBergmanDirichlet ? 1e-5
                                                                              : 1e-10;
    ordered_json out{{"family", family_json(fam)}, {"strategy", kernels::strategy_name(s)}, {"z", cjson(zz)},
                     {"values", ordered_json::array()}};
    bool ok = true;
    std::unique_ptr<kernels::KernelEvaluator> ser;
    if (cross_check) ser = std::make_unique<kernels::KernelEvaluator>(fam, kernels::Strategy::TruncatedSeries, kc);
    for (double x : xs) {
      cplx v;
      try {
        v = (*ev)(zz, x);
      } catch (const std::domain_error& e) {
        throw UsageError(e.what());
      }
      ordered_json row{{"x", x}, {"value", cjson(v)}};
      if (ser) {
        const cplx sv = (*ser)(zz, x);
        const double d = std::abs(v - sv) / std::max(1.0, std::abs(sv));
        row["series"] = cjson(sv);
        row["series_terms"] = ser->series_terms_for(zz);
        row["discrepancy"] = d;
        row["tolerance"] = rc.tol(tol);
        row["passed"] = d <= rc.tol(tol);
        ok = ok && d <= rc.tol(tol);
      }
      out["values"].push_back(row);
    }
    emit(out, "");
    return ok ? 0 : 1;
  }
};

// ---- transform -----------------------------------------------------------------

struct TransformCmd {
  std::string family, input;
  std::vector<std::string> params, at;
  std::vector<double> inverse_at;
  ConfigFlags cfg;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "classical | second | generalized-second | dirichlet | gen-dirichlet")->required();
    app->add_option("--params", params, "family parameters");
    app->add_option("--input", input, "JSON file: {\"coefficients\": [[re, im], ...]} in the source basis")->required();
    app->add_option("--at", at, "target point(s) re,im for the forward transform");
    app->add_option("--inverse-at", inverse_at, "source point(s) for the integral inverse of B f (L^2 targets)");
    cfg.attach(app);
  }

  static std::vector<cplx> read_coefficients(const nlohmann::json& j) {
    const auto& arr = j.is_object() ? j.at("coefficients") : j;
    if (!arr.is_array() || arr.empty()) throw UsageError("coefficients: expected a nonempty array");
    std::vector<cplx> c;
    for (const auto& v : arr) {
      if (v.is_number()) c.emplace_back(v.get<double>());
      else if (v.is_array() && v.size() == 2) c.emplace_back(v[0].get<double>(), v[1].get<double>());
      else throw UsageError("coefficients: entries must be numbers or [re, im]");
    }
    return c;
  }

  int run() const {
    const auto fam = make_family(family, parse_params(params));
    const auto rc = cfg.resolve();
    const auto tc = transforms::TransformConfig::from(rc);
    std::vector<cplx> c;
    try {
      c = read_coefficients(read_json_file(input));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(input + ": " + e.what());
    }
    const transforms::CoefficientVector cv{c, fam.source_basis()};
    ordered_json out{{"family", family_json(fam)}, {"coefficients", c.size()}, {"forward", ordered_json::array()}};
    auto forward_rows = [&](const auto& op) {
      const auto f = op.sample(cv);
      for (const auto& s : at) {
        const cplx z = parse_complex(s);
        try {
          const bool contour = fam.on_disk() && !fam.integral_kernel();
          const cplx q = contour ? op.forward_contour([&](cplx x) { return transforms::synthesize(cv, x); }, z,
                                                      static_cast<int>(c.size()) + fam.ell + 2)
                                 : op.forward(f, z);
          const cplx series = transforms::series_transform(transforms::CoefficientVector{c, fam.target_basis()}, fam.target_basis(), z);
          out["forward"].push_back({{"z", cjson(z)}, {"value", cjson(q)}, {"series", cjson(series)}, {"discrepancy", std::abs(q - series)}});
        } catch (const std::domain_error& e) {
          throw UsageError(e.what());
        }
      }
    };
    if (fam.integral_kernel()) {
      if (!inverse_at.empty()) throw UsageError(fam.name() + " has a coefficient target; --inverse-at needs an L2 target");
      const auto op = transforms::make_coefficient_transform(fam, tc);
      forward_rows(op);
      out["target_coefficients"] = ordered_json::array();
      for (const auto& v : op.forward_coefficients(op.sample(cv), static_cast<int>(c.size()) - 1)) out["target_coefficients"].push_back(cjson(v));
    } else {
      const auto op = transforms::make_l2_transform(fam, tc);
      forward_rows(op);
      if (!inverse_at.empty()) {
        const int J = static_cast<int>(c.size()) - 1;
        const auto img = transforms::basis_images(op, J);
        std::vector<cplx> F(op.target().rule.size(), 0.0);
        for (int j = 0; j <= J; ++j)
          for (std::size_t q = 0; q < F.size(); ++q) F[q] += c[j] * img[j][q];
        out["inverse"] = ordered_json::array();
        for (double x : inverse_at) {
          const cplx v = op.inverse_integral(F, x);
          const cplx ref = transforms::synthesize(cv, x);
          out["inverse"].push_back({{"x", x}, {"value", cjson(v)}, {"f", cjson(ref)}, {"discrepancy", std::abs(v - ref)}});
        }
      }
    }
    emit(out, "");
    return 0;
  }
};

// ---- operator ------------------------------------------------------------------

struct OperatorCmd {
  double gamma = 2.0, h = 0.0;
  bool casimir = false, fd = false;
  std::string apply, at;
  ConfigFlags cfg;

  void attach(CLI::App* app) {
    app->add_option("--gamma", gamma, "coefficient of the zbar d/dzbar term")->capture_default_str();
    app->add_flag("--casimir", casimir, "add the constant -gamma^2 + 2 gamma");
    app->add_option("--apply", apply, "expansion JSON: {\"a,b\": [re, im], ...} for sum c z^a zbar^b")->required();
    app->add_flag("--fd", fd, "also apply finite differences at --at");
    app->add_option("--at", at, "interior point re,im");
    app->add_option("--step", h, "finite-difference step (default: fd_step from the config)");
    cfg.attach(app);
  }

  int run() const {
    const auto rc = cfg.resolve();
    const auto op = casimir ? operators::DiskOperator::casimir(gamma) : operators::DiskOperator::d(gamma);
    operators::MonomialExpansion f;
    try {
      f = operators::expansion_from_json(read_json_file(apply));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto ex = operators::apply_exact(op, f);
    ordered_json out{{"gamma", gamma}, {"shift", op.shift}, {"result", operators::expansion_to_json(ex)}};
    if (!at.empty()) {
      const cplx z = parse_complex(at);
      out["at"] = cjson(z);
      out["exact"] = cjson(ex(z));
      if (fd) {
        const double step = h > 0 ? h : rc.get("fd_step");
        try {
          const cplx v = operators::apply_fd(op, f, z, step);
          out["fd"] = cjson(v);
          out["h"] = step;
          out["discrepancy"] = std::abs(v - ex(z));
        } catch (const std::domain_error& e) {
          throw UsageError(e.what());
        }
      }
    } else if (fd) {
      throw UsageError("--fd needs --at");
    }
    emit(out, "");
    return 0;
  }
};

// ---- verify --------------------------------------------------------------------

struct VerifyCmd {
  std::string suite = "all", output;
  bool quiet = false;
  ConfigFlags cfg;

  void attach(CLI::App* app) {
    app->add_option("suite,--suite", suite, "special | quadrature | kernels | transforms | operators | all")->capture_default_str();
    app->add_option("--output", output, "write the JSON report here instead of stdout");
    app->add_flag("--quiet", quiet, "no summary on stderr");
    cfg.attach(app);
  }

  int run() const {
    if (!verify::known_suite(suite)) throw UsageError("unknown suite " + suite);
    const auto rc = cfg.resolve();
    const auto rep = verify::run(suite, rc);
    emit(report::to_json(rep), output);
    if (!quiet) {
      for (const auto& c : rep.checks)
        if (!c.passed) std::fprintf(stderr, "FAIL %s: %s > %s\n", c.id.c_str(), fmt17(c.measured).c_str(), fmt17(c.tolerance).c_str());
      std::fprintf(stderr, "%s: %zu checks, %zu failed\n", suite.c_str(), rep.checks.size(), rep.failures());
    }
    return rep.all_passed() ? 0 : 1;
  }
};

}  // namespace

int run_cli(int argc, char** argv);

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Generalized Bargmann transforms: quadrature, kernels, transforms, operators, verification"};
  app.require_subcommand(1);
  NodesCmd nodes;
  KernelEvalCmd keval;
  TransformCmd transform;
  OperatorCmd op;
  VerifyCmd ver;
  auto* s_nodes = app.add_subcommand("nodes", "print quadrature nodes and weights");
  auto* s_keval = app.add_subcommand("kernel-eval", "evaluate a transform kernel K(z, x)");
  auto* s_trans = app.add_subcommand("transform", "apply a transform to a function given by source-basis coefficients");
  auto* s_op = app.add_subcommand("operator", "apply an invariant disk operator to a monomial expansion");
  auto* s_ver = app.add_subcommand("verify", "run verification suites and emit a JSON report");
  nodes.attach(s_nodes);
  keval.attach(s_keval);
  transform.attach(s_trans);
  op.attach(s_op);
  ver.attach(s_ver);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (s_nodes->parsed()) return nodes.run();
    if (s_keval->parsed()) return keval.run();
    if (s_trans->parsed()) return transform.run();
    if (s_op->parsed()) return op.run();
    if (s_ver->parsed()) return ver.run();
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
