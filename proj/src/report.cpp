#include "ineqlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ineqlab/error.hpp"

namespace ineqlab {

Json json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json json_numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(json_number(x));
  return a;
}

Json to_json(const SearchOptions& o) {
  return Json{{"seed", o.seed},
              {"starts", o.starts},
              {"iterations", o.iterations},
              {"fd_step", o.fd_step},
              {"clamp", o.clamp},
              {"f_box", o.f_box},
              {"dense", o.dense},
              {"nu_step_1d", o.nu_step_1d},
              {"nu_step_2d", o.nu_step_2d},
              {"f_range_1d", o.f_range_1d},
              {"f_step_1d", o.f_step_1d},
              {"f_range_2d", o.f_range_2d},
              {"f_step_2d", o.f_step_2d},
              {"deficit_floor", o.deficit_floor}};
}

Json to_json(const Estimate& e) {
  Json j{{"value", json_number(e.value)},
         {"lower_bound", true},
         {"method", e.method},
         {"witness", json_numbers(e.witness)},
         {"evaluations", e.evaluations},
         {"starts", e.starts},
         {"skipped", e.skipped},
         {"degenerate", e.degenerate},
         {"certified_unbounded", e.certified_unbounded}};
  if (e.certified_unbounded) {
    j["unbounded_witness"] = json_numbers(e.unbounded_witness);
    j["certificate"] = e.certificate;
  }
  return j;
}

Json to_json(const ChainStep& s) {
  return Json{{"label", s.label},
              {"lambda", json_number(s.lambda)},
              {"constant", json_number(s.constant)},
              {"best_ratio", json_number(s.best_ratio)},
              {"witness", json_numbers(s.witness)},
              {"evaluations", s.evaluations},
              {"verdict", to_string(s.verdict)},
              {"note", s.note}};
}

Json to_json(const VerificationReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) steps.push_back(to_json(s));
  return Json{{"theorem", r.theorem},
              {"premise_constant", json_number(r.premise_constant)},
              {"conclusion_constant", json_number(r.conclusion_constant)},
              {"premise_unbounded", r.premise_unbounded},
              {"surrogate", r.surrogate},
              {"starts", r.starts},
              {"evaluations", r.evaluations},
              {"best_violation_ratio", json_number(r.best_violation_ratio)},
              {"tolerance", r.tolerance},
              {"steps", steps},
              {"notes", r.notes},
              {"verdict", to_string(r.verdict)}};
}

Json to_json(const ConstantBundle& b) {
  return Json{{"alpha", b.alpha.describe()},
              {"r_alpha", json_number(b.exps.r_alpha)},
              {"p_alpha", json_number(b.exps.p_alpha)},
              {"delta2_K", json_number(b.exps.delta2_K)},
              {"A", json_number(b.A_in)},
              {"lambda", json_number(b.lambda_in)},
              {"t_alpha", json_number(b.t_alpha)},
              {"C_plus", json_number(b.c_plus)},
              {"C_minus", json_number(b.c_minus)},
              {"t_A", json_number(b.t_A)},
              {"B_minus", json_number(b.B_minus)},
              {"kappa", json_number(b.kappa)},
              {"kappa_tilde", json_number(b.kappa_tilde)},
              {"C_tau_lsi_to_T", json_number(b.c_tau_lsi_to_t)},
              {"C_tilde_factor", json_number(b.C_tilde_factor)},
              {"a_p_omega1", json_number(b.a_p_omega1)},
              {"a_p_omegap", json_number(b.a_p_omegap)},
              {"C_concentration_omega1", json_number(b.c_concentration_omega1)},
              {"C_concentration_omegap", json_number(b.c_concentration_omegap)}};
}

Json to_json(const TransportPlan& p) {
  Json cells = Json::array();
  for (std::size_t i = 0; i < p.rows; ++i) {
    for (std::size_t j = 0; j < p.cols; ++j) {
      if (p.at(i, j) > 0.0) cells.push_back(Json{i, j, p.at(i, j)});
    }
  }
  return Json{{"cost", json_number(p.cost)},
              {"dual_value", json_number(p.dual_value)},
              {"dual_gap", json_number(p.dual_gap)},
              {"dual_infeasibility", json_number(p.dual_infeasibility)},
              {"row_residual", json_number(p.row_residual)},
              {"col_residual", json_number(p.col_residual)},
              {"pivots", p.pivots},
              {"phi", json_numbers(p.phi)},
              {"psi", json_numbers(p.psi)},
              {"cells", cells}};
}

Json to_json(const LemmaBoundsReport& r) {
  return Json{{"points", r.points},
              {"eps_max_excess", json_number(r.eps_max_excess)},
              {"eps_violations", r.eps_violations},
              {"lipschitz_L", json_number(r.lipschitz_L)},
              {"ball_radius", json_number(r.ball_radius)},
              {"ball_max_displacement", json_number(r.ball_max_displacement)},
              {"ball_violations", r.ball_violations},
              {"gradient_max_excess", json_number(r.gradient_max_excess)},
              {"gradient_exceedances", r.gradient_exceedances},
              {"exact_bounds_hold", r.exact_bounds_hold()}};
}

Json to_json(const DualReport& r) {
  return Json{{"c", json_number(r.c)},
              {"order", r.order},
              {"best_log_excess", json_number(r.best_log_excess)},
              {"witness", json_numbers(r.witness)},
              {"evaluations", r.evaluations},
              {"violated", r.violated},
              {"tolerance", r.tolerance}};
}

Json to_json(const DualThreshold& t) {
  Json probes = Json::array();
  for (const auto& p : t.probes) {
    probes.push_back(Json{{"c", json_number(p.c)},
                          {"best_log_excess", json_number(p.best_log_excess)},
                          {"violated", p.violated}});
  }
  return Json{{"c_max", json_number(t.c_max)},
              {"c_numeric", json_number(t.c_numeric)},
              {"c_hi", json_number(t.c_hi)},
              {"bisections", t.bisections},
              {"structural_failure", t.structural_failure},
              {"structural_witness", json_numbers(t.structural_witness)},
              {"probes", probes}};
}

Json to_json(const ConcentrationReport& r) {
  return Json{{"p", r.p},
              {"C", json_number(r.C)},
              {"order", r.order},
              {"functions", r.functions},
              {"checks", r.checks},
              {"violations", r.violations},
              {"worst_ratio", json_number(r.worst_ratio)},
              {"worst_u", json_number(r.worst_u)},
              {"worst_function", json_numbers(r.worst_function)}};
}

Json to_json(const HolleyStroockResult& h) {
  return Json{{"mu_tilde", json_numbers(h.mu_tilde.weights())},
              {"oscillation", json_number(h.oscillation)},
              {"C_tilde", json_number(h.c_tilde)},
              {"C_tighter", json_number(h.c_tighter)},
              {"lambda_star", json_number(h.lambda_star)},
              {"estimate", to_json(h.estimate)},
              {"report", to_json(h.report)}};
}

Json envelope(const std::string& command, const Json& config, const Json& result,
              Verdict verdict) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = command;
  j["verdict"] = to_string(verdict);
  j["seed"] = config.contains("seed") ? config["seed"] : Json();
  j["config"] = config;
  j["result"] = result;
  return j;
}

namespace {

void flatten(const Json& j, const std::string& key,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), key.empty() ? it.key() : key + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    bool scalars = true;
    for (const auto& v : j) scalars = scalars && !v.is_structured();
    if (scalars && j.size() <= 8) {
      out.emplace_back(key, j.dump());
    } else if (scalars) {
      out.emplace_back(key, "[" + std::to_string(j.size()) + " values]");
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], key + "[" + std::to_string(i) + "]", out);
    }
  } else if (j.is_string()) {
    out.emplace_back(key, j.get<std::string>());
  } else {
    out.emplace_back(key, j.dump());
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(report, "", rows);
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.first.size());
  std::ostringstream os;
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(w + 2)) << r.first << r.second << "\n";
  }
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::config, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::config, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::config, "cannot rename onto '" + path + "': " + ec.message());
  }
}

}  // namespace ineqlab
