// ineq_lab: constants, estimators and chain checks for transport-entropy and
// log-Sobolev inequalities on finite metric spaces.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ineqlab/config.hpp"
#include "ineqlab/density_expr.hpp"
#include "ineqlab/error.hpp"
#include "ineqlab/report.hpp"

using namespace ineqlab;

namespace {

enum class Kind { text, number, integer };

struct OptionDef {
  const char* name;
  Kind kind;
  const char* help;
};

const OptionDef kOptions[] = {
    {"space", Kind::text, "space JSON file or inline JSON"},
    {"measure", Kind::text, "uniform | dirac:i | weights:... | density:<expr> | file:<path>"},
    {"alpha", Kind::text, "power:p1,p2 | quadratic | table:<path>"},
    {"nu", Kind::text, "second measure for transport"},
    {"phi", Kind::text, "comma separated perturbation potential"},
    {"f", Kind::text, "comma separated function values, or expr:<expression>"},
    {"grid", Kind::text, "lo:hi:n for xi-table"},
    {"sign", Kind::text, "plus | minus"},
    {"slope", Kind::text, "global | neighbors"},
    {"fractions", Kind::text, "lambda C* fractions for T-to-tauLSI"},
    {"out", Kind::text, "output directory"},
    {"A", Kind::number, "premise constant A for constants"},
    {"lambda", Kind::number, "inf-convolution parameter"},
    {"C", Kind::number, "transport constant"},
    {"c", Kind::number, "dual exponent c, or tensor-dual c"},
    {"c_hi", Kind::number, "upper end of the dual threshold bisection"},
    {"tau", Kind::number, "tensor-dual tau"},
    {"a", Kind::number, "tensor-dual a"},
    {"b", Kind::number, "tensor-dual b"},
    {"premise", Kind::number, "premise constant (skips its estimation)"},
    {"tolerance", Kind::number, "verdict tolerance"},
    {"surrogate_tolerance", Kind::number, "slack for surrogate chains"},
    {"t", Kind::number, "lemma-bounds t in (0,1)"},
    {"omega", Kind::number, "ball constant omega"},
    {"ball_p", Kind::number, "exponent of the ball check"},
    {"slack", Kind::number, "relative slack on the ball radius"},
    {"p", Kind::number, "concentration exponent"},
    {"fd_step", Kind::number, "finite-difference step"},
    {"clamp", Kind::number, "simplex interior clamp"},
    {"f_box", Kind::number, "f search box"},
    {"seed", Kind::integer, "RNG seed (required for searches)"},
    {"starts", Kind::integer, "multistart count"},
    {"iterations", Kind::integer, "ascent iterations per start"},
    {"n", Kind::integer, "tensor order"},
    {"functions", Kind::integer, "random functions in the concentration battery"},
    {"bisections", Kind::integer, "dual threshold bisection steps"},
};

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::config, msg); }

struct Ctx {
  Json cfg = Json::object();
  std::string command;
  std::map<std::string, std::string> files;  // extra outputs

  bool has(const char* k) const { return cfg.contains(k); }

  double num(const char* k, std::optional<double> def = std::nullopt) {
    if (!cfg.contains(k)) {
      if (!def) config_error(std::string("--") + k + " is required for " + command);
      cfg[k] = *def;
    }
    if (!cfg[k].is_number()) config_error(std::string(k) + ": expected a number");
    return cfg[k].get<double>();
  }

  long long integer(const char* k, std::optional<long long> def = std::nullopt) {
    if (!cfg.contains(k)) {
      if (!def) config_error(std::string("--") + k + " is required for " + command);
      cfg[k] = *def;
    }
    if (!cfg[k].is_number_integer()) config_error(std::string(k) + ": expected an integer");
    return cfg[k].get<long long>();
  }

  std::string text(const char* k, std::optional<std::string> def = std::nullopt) {
    if (!cfg.contains(k)) {
      if (!def) config_error(std::string("--") + k + " is required for " + command);
      cfg[k] = *def;
    }
    if (!cfg[k].is_string()) config_error(std::string(k) + ": expected a string");
    return cfg[k].get<std::string>();
  }

  FiniteMetricSpace space() {
    if (!cfg.contains("space")) config_error("--space is required for " + command);
    return load_space(space_spec());
  }

  Json space_spec() {
    const Json& s = cfg["space"];
    if (s.is_string()) {
      auto str = s.get<std::string>();
      if (!str.empty() && str.front() == '{') return parse_json(str, "--space");
    }
    return s;
  }

  ProbMeasure measure(const FiniteMetricSpace& sp, const char* key = "measure") {
    if (!cfg.contains(key)) cfg[key] = "uniform";
    return load_measure(cfg[key], sp);
  }

  YoungFunction alpha() { return parse_alpha(text("alpha", "quadratic")); }

  SearchOptions search() {
    if (!cfg.contains("seed")) {
      config_error("--seed is required for " + command + " (no wall-clock default)");
    }
    auto o = search_options(cfg);
    cfg["search"] = to_json(o);
    return o;
  }
};

Sign parse_sign(const std::string& s) {
  if (s == "plus") return Sign::plus;
  if (s == "minus") return Sign::minus;
  config_error("sign: expected plus or minus");
}

SlopeMode parse_slope(const std::string& s) {
  if (s == "global") return SlopeMode::global;
  if (s == "neighbors") return SlopeMode::neighbors;
  config_error("slope: expected global or neighbors");
}

double rel_diff(double a, double b) {
  if (std::isinf(a) && std::isinf(b) && (a > 0) == (b > 0)) return 0.0;
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), 1e-300);
}

struct Outcome {
  Json result;
  Verdict verdict = Verdict::pass;
};

Outcome cmd_validate_space(Ctx& ctx) {
  Outcome o;
  Json spec = ctx.space_spec();
  if (spec.is_string() && !spec.get<std::string>().empty()) spec = load_json_file(spec.get<std::string>());
  if (spec.is_object() && spec.contains("dist") && !spec.contains("generator")) {
    Matrix m;
    try {
      m = spec["dist"].get<Matrix>();
    } catch (const Json::exception&) {
      config_error("space.dist: expected a numeric matrix");
    }
    std::vector<std::string> labels;
    if (spec.contains("labels")) {
      for (const auto& l : spec["labels"]) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    } else {
      for (std::size_t i = 0; i < m.size(); ++i) labels.push_back(std::to_string(i));
    }
    auto diags = validate(labels, m);
    Json d = Json::array();
    for (const auto& x : diags) d.push_back(Json{{"axiom", x.axiom}, {"message", x.message}});
    o.result["points"] = m.size();
    o.result["diagnostics"] = d;
    o.result["valid"] = diags.empty();
    if (!diags.empty()) {
      o.verdict = Verdict::fail;
      return o;
    }
  }
  auto sp = load_space(spec);
  o.result["points"] = sp.size();
  o.result["valid"] = true;
  if (!o.result.contains("diagnostics")) o.result["diagnostics"] = Json::array();
  o.result["min_distance"] = json_number(sp.min_distance());
  o.result["diameter"] = json_number(sp.diameter());
  return o;
}

Outcome cmd_xi_table(Ctx& ctx) {
  auto a = ctx.alpha();
  auto g = ctx.text("grid", "0.01:10:1000");
  std::vector<double> parts;
  {
    std::string s = g;
    for (auto& ch : s) {
      if (ch == ':') ch = ',';
    }
    parts = parse_list(s, "grid");
  }
  if (parts.size() != 3 || !(parts[0] > 0) || !(parts[1] > parts[0]) || parts[2] < 2) {
    config_error("grid: expected lo:hi:n with 0 < lo < hi and n >= 2");
  }
  auto n = static_cast<std::size_t>(parts[2]);
  auto ex = exponents(a);
  std::ostringstream csv;
  csv.precision(17);
  csv << "x,xi_closed,xi_numeric,rel_diff,xi_upper_bound\n";
  double worst = 0.0;
  bool bound_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    double x = parts[0] + (parts[1] - parts[0]) * static_cast<double>(i) / static_cast<double>(n - 1);
    double c = xi(a, x), m = xi_numeric(a, x);
    double ub = xi_upper_bound(ex.r_alpha, ex.p_alpha, x);
    double d = rel_diff(c, m);
    worst = std::max(worst, d);
    if (c > ub * (1 + 1e-9) + 1e-12) bound_ok = false;
    csv << x << "," << c << "," << m << "," << d << "," << ub << "\n";
  }
  ctx.files["xi_table.csv"] = csv.str();
  Outcome o;
  o.result = Json{{"alpha", a.describe()},
                  {"points", n},
                  {"max_rel_diff", json_number(worst)},
                  {"tolerance", 1e-5},
                  {"upper_bound_holds", bound_ok}};
  o.verdict = (worst <= 1e-5 && bound_ok) ? Verdict::pass : Verdict::fail;
  return o;
}

Outcome cmd_constants(Ctx& ctx) {
  auto a = ctx.alpha();
  auto b = implication_constants(a, ctx.num("A", 1.0), ctx.num("lambda", 1.0));
  return {to_json(b), Verdict::pass};
}

Outcome cmd_transport(Ctx& ctx) {
  auto sp = ctx.space();
  auto a = ctx.alpha();
  auto mu = ctx.measure(sp);
  if (!ctx.has("nu")) config_error("--nu is required for transport");
  auto nu = ctx.measure(sp, "nu");
  TransportProblem tp(a, sp);
  auto plan = tp.solve(nu, mu);
  Outcome o;
  o.result = to_json(plan);
  o.result["relative_entropy"] = json_number(relative_entropy(nu, mu));
  if (sp.size() <= 5) o.result["brute_force_cost"] = json_number(brute_force_cost(a, sp, nu, mu));
  std::ostringstream csv;
  write_plan_csv(plan, tp.costs(), csv);
  ctx.files["transport_plan.csv"] = csv.str();
  bool ok = plan.dual_gap <= 1e-9 && plan.row_residual <= 1e-9 && plan.col_residual <= 1e-9;
  o.verdict = ok ? Verdict::pass : Verdict::fail;
  return o;
}

Outcome cmd_estimate(Ctx& ctx, const std::string& kind) {
  auto sp = ctx.space();
  auto a = ctx.alpha();
  auto mu = ctx.measure(sp);
  auto opt = ctx.search();
  Outcome o;
  if (kind == "T") {
    o.result = to_json(transport_constant_estimate(mu, a, sp, opt));
  } else if (kind == "tauLSI") {
    o.result = to_json(tau_lsi_constant_estimate(mu, a, ctx.num("lambda", 1.0), sp, opt));
  } else if (kind == "mLSI") {
    auto sign = parse_sign(ctx.text("sign", "minus"));
    auto mode = parse_slope(ctx.text("slope", "neighbors"));
    o.result = to_json(mlsi_constant_estimate(mu, a, sign, mode, sp, opt));
    o.result["surrogate"] = true;
  } else {
    config_error("estimate: expected T, tauLSI or mLSI");
  }
  o.result["quantity"] = kind;
  return o;
}

Potential potential_option(Ctx& ctx, const char* key, std::size_t size,
                           const FiniteMetricSpace& base, int order) {
  auto s = ctx.text(key);
  Potential f;
  if (s.rfind("expr:", 0) == 0) {
    auto e = DensityExpr::parse(s.substr(5));
    ProductSpace ps(base, order);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      std::map<std::string, double> vars{{"i", static_cast<double>(k)},
                                         {"n", static_cast<double>(ps.size())}};
      for (int c = 0; c < order; ++c) {
        std::size_t idx = ps.coord(k, c);
        double x = base.has_coordinates() ? base.coordinates()[idx] : static_cast<double>(idx);
        vars["x" + std::to_string(c + 1)] = x;
        if (c == 0) vars["x"] = x;
      }
      f.push_back(e.eval(vars));
    }
  } else {
    f = parse_list(s, key);
  }
  if (f.size() != size) {
    config_error(std::string(key) + ": " + std::to_string(f.size()) + " values, expected " +
                 std::to_string(size));
  }
  for (double v : f) {
    if (!std::isfinite(v)) config_error(std::string(key) + ": values must be finite");
  }
  return f;
}

Outcome cmd_verify(Ctx& ctx, const std::string& what) {
  auto sp = ctx.space();
  auto a = ctx.alpha();
  auto mu = ctx.measure(sp);
  auto opt = ctx.search();
  Outcome o;
  if (what == "T-to-tauLSI" || what == "tauLSI-to-T" || what == "lsi-to-T") {
    ChainParams prm;
    prm.search = opt;
    prm.premise_constant = ctx.num("premise", 0.0);
    if (what == "T-to-tauLSI") {
      prm.direction = Direction::t_to_tau_lsi;
      prm.lambda_fractions = parse_list(ctx.text("fractions", "0.25,0.5,0.75"), "fractions");
      for (double f : prm.lambda_fractions) {
        if (!(f > 0.0 && f < 1.0)) config_error("fractions: each must be in (0, 1)");
      }
      prm.tolerance = ctx.num("tolerance", 1e-6);
    } else if (what == "tauLSI-to-T") {
      prm.direction = Direction::tau_lsi_to_t;
      prm.lambda = ctx.num("lambda", 1.0);
      if (!(prm.lambda > 0.0)) config_error("lambda: must be > 0");
      prm.tolerance = ctx.num("tolerance", 1e-6);
    } else {
      prm.direction = Direction::lsi_to_t;
      prm.sign = parse_sign(ctx.text("sign", "minus"));
      prm.slope_mode = parse_slope(ctx.text("slope", "neighbors"));
      prm.surrogate_tolerance = ctx.num("surrogate_tolerance", 0.05);
    }
    auto r = verify_chain(mu, a, sp, prm);
    o.result = to_json(r);
    o.verdict = r.verdict;
    std::ostringstream csv;
    csv.precision(17);
    csv << "label,lambda,constant,best_ratio,verdict\n";
    for (const auto& s : r.steps) {
      csv << '"' << s.label << '"' << "," << s.lambda << "," << s.constant << "," << s.best_ratio
          << "," << to_string(s.verdict) << "\n";
    }
    ctx.files["steps.csv"] = csv.str();
  } else if (what == "holley-stroock") {
    auto phi = potential_option(ctx, "phi", sp.size(), sp, 1);
    double C = ctx.has("C") ? ctx.num("C") : transport_constant_estimate(mu, a, sp, opt).value;
    ctx.cfg["C"] = json_number(C);
    auto h = holley_stroock(mu, phi, a, C, sp, opt, ctx.num("tolerance", 1e-9));
    o.result = to_json(h);
    o.verdict = h.report.verdict;
  } else if (what == "dual") {
    int n = static_cast<int>(ctx.integer("n", 1));
    double tol = ctx.num("tolerance", 1e-12);
    auto r = dual_check(mu, a, ctx.num("c"), n, sp, opt, tol);
    o.result = to_json(r);
    if (ctx.has("c_hi")) {
      auto t = dual_threshold(mu, a, n, sp, ctx.num("c_hi"), opt,
                              static_cast<int>(ctx.integer("bisections", 40)), tol);
      o.result["threshold"] = to_json(t);
    }
    o.verdict = r.violated ? Verdict::fail : Verdict::pass;
  } else if (what == "tensor-dual") {
    TensorDualParams prm;
    prm.n = static_cast<int>(ctx.integer("n", 2));
    prm.tau = ctx.num("tau");
    prm.a = ctx.num("a", 1.0);
    prm.b = ctx.num("b", prm.tau);
    prm.c = ctx.num("c", 0.0);
    auto r = tensor_dual_check(mu, a, sp, prm, opt, ctx.num("tolerance", 1e-9));
    o.result = to_json(r);
    o.verdict = r.verdict;
  } else if (what == "concentration") {
    double p = ctx.num("p", 2.0);
    double C = ctx.has("C") ? ctx.num("C") : transport_constant_estimate(mu, a, sp, opt).value;
    ctx.cfg["C"] = json_number(C);
    auto r = concentration_check(mu, p, C, static_cast<int>(ctx.integer("n", 1)), sp,
                                 static_cast<std::size_t>(ctx.integer("functions", 100)), opt.seed,
                                 ctx.num("tolerance", 1e-12));
    o.result = to_json(r);
    o.verdict = r.violations == 0 ? Verdict::pass : Verdict::fail;
  } else {
    config_error("verify: unknown check '" + what + "'");
  }
  return o;
}

Outcome cmd_lemma_bounds(Ctx& ctx) {
  auto sp = ctx.space();
  auto a = ctx.alpha();
  int n = static_cast<int>(ctx.integer("n", 1));
  ProductSpace ps(sp, n);
  auto f = potential_option(ctx, "f", ps.size(), sp, n);
  LemmaBoundsOptions lo;
  lo.t = ctx.num("t", 0.5);
  lo.omega = ctx.num("omega", 1.0);
  lo.ball_p = ctx.num("ball_p", 0.0);
  lo.ball_rel_slack = ctx.num("slack", 0.0);
  lo.tol = ctx.num("tolerance", 1e-9);
  lo.slope_mode = parse_slope(ctx.text("slope", "global"));
  auto r = lemma_bounds(a, f, ps, lo);
  Outcome o{to_json(r), r.exact_bounds_hold() ? Verdict::pass : Verdict::fail};
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ineq_lab: transport-entropy and log-Sobolev checks on finite metric spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  bool quiet = false, no_dense = false;
  app.add_option("--config", config_path, "JSON config file; flags override it");
  app.add_flag("--quiet", quiet, "do not print the text report");
  app.add_flag("--no-dense", no_dense, "use multistart searches even on tiny spaces");
  std::map<std::string, std::string> values;
  for (const auto& d : kOptions) {
    app.add_option(std::string("--") + d.name, values[d.name], d.help);
  }

  std::string estimate_kind, verify_kind;
  auto* validate_cmd = app.add_subcommand("validate-space", "check the metric axioms");
  auto* xi_cmd = app.add_subcommand("xi-table", "closed-form and numeric xi on a grid");
  auto* const_cmd = app.add_subcommand("constants", "implication constants for (alpha, A, lambda)");
  auto* transport_cmd = app.add_subcommand("transport", "optimal coupling of nu and mu");
  auto* estimate_cmd = app.add_subcommand("estimate", "lower bound on a best constant");
  estimate_cmd->add_option("quantity", estimate_kind, "T | tauLSI | mLSI")->required();
  auto* verify_cmd = app.add_subcommand("verify", "falsification check of an implication");
  verify_cmd
      ->add_option("check", verify_kind,
                   "T-to-tauLSI | tauLSI-to-T | lsi-to-T | holley-stroock | dual | tensor-dual | "
                   "concentration")
      ->required();
  auto* lemma_cmd = app.add_subcommand("lemma-bounds", "pointwise inf-convolution bounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error [config]: " << e.what() << "\n";
    return 1;
  }

  Ctx ctx;
  try {
    if (!config_path.empty()) {
      ctx.cfg = load_json_file(config_path);
      if (!ctx.cfg.is_object()) config_error(config_path + ": expected a JSON object");
    }
    for (const auto& d : kOptions) {
      auto* opt = app.get_option(std::string("--") + d.name);
      if (opt->count() == 0) continue;
      const auto& v = values[d.name];
      switch (d.kind) {
        case Kind::text: ctx.cfg[d.name] = v; break;
        case Kind::number: ctx.cfg[d.name] = parse_list(v, d.name).at(0); break;
        case Kind::integer: {
          std::size_t used = 0;
          long long x = 0;
          try {
            x = std::stoll(v, &used);
          } catch (const std::exception&) {
            used = 0;
          }
          if (used != v.size() || v.empty()) config_error(std::string(d.name) + ": expected an integer");
          if (std::string(d.name) == "seed" && x < 0) config_error("seed: must be >= 0");
          ctx.cfg[d.name] = x;
          break;
        }
      }
    }
    if (no_dense) ctx.cfg["dense"] = false;

    Outcome out;
    std::string file_stem;
    if (validate_cmd->parsed()) {
      ctx.command = file_stem = "validate-space";
      out = cmd_validate_space(ctx);
    } else if (xi_cmd->parsed()) {
      ctx.command = file_stem = "xi-table";
      out = cmd_xi_table(ctx);
    } else if (const_cmd->parsed()) {
      ctx.command = file_stem = "constants";
      out = cmd_constants(ctx);
    } else if (transport_cmd->parsed()) {
      ctx.command = file_stem = "transport";
      out = cmd_transport(ctx);
    } else if (estimate_cmd->parsed()) {
      ctx.command = "estimate " + estimate_kind;
      file_stem = "estimate-" + estimate_kind;
      out = cmd_estimate(ctx, estimate_kind);
    } else if (verify_cmd->parsed()) {
      ctx.command = "verify " + verify_kind;
      file_stem = "verify-" + verify_kind;
      out = cmd_verify(ctx, verify_kind);
    } else if (lemma_cmd->parsed()) {
      ctx.command = file_stem = "lemma-bounds";
      out = cmd_lemma_bounds(ctx);
    }

    std::string dir = ctx.text("out", "ineq_lab_out");
    std::filesystem::create_directories(dir);
    Json echoed = ctx.cfg;
    echoed.erase("out");
    auto report = envelope(ctx.command, echoed, out.result, out.verdict);
    write_atomic(dir + "/" + file_stem + ".json", report.dump(2) + "\n");
    for (const auto& [name, content] : ctx.files) {
      write_atomic(dir + "/" + file_stem + "." + name, content);
    }
    if (!quiet) std::cout << render_text(report);
    return exit_code(out.verdict);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    std::cerr << "error [config]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
