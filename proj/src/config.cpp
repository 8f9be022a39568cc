#include "ineqlab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ineqlab/density_expr.hpp"
#include "ineqlab/error.hpp"

namespace ineqlab {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::config, field + ": " + msg);
}

double number_at(const Json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  return j.get<double>();
}

std::size_t count_at(const Json& j, const std::string& field) {
  if (!j.is_number_integer() && !(j.is_number() && std::floor(j.get<double>()) == j.get<double>())) {
    bad(field, "expected an integer");
  }
  long long v = j.get<long long>();
  if (v < 1) bad(field, "must be >= 1");
  return static_cast<std::size_t>(v);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::config, origin + ":" + std::to_string(line) + ":" +
                                       std::to_string(col) + ": invalid JSON");
  }
}

Json load_json_file(const std::string& path) { return parse_json(read_file(path), path); }

FiniteMetricSpace load_space(const Json& spec) {
  if (spec.is_string()) return load_space(load_json_file(spec.get<std::string>()));
  if (!spec.is_object()) bad("space", "expected an object or a file path");
  auto make = [&]() -> FiniteMetricSpace {
    if (spec.contains("generator")) {
      if (!spec["generator"].is_string()) bad("space.generator", "expected a string");
      auto gen = spec["generator"].get<std::string>();
      if (!spec.contains("count")) bad("space.count", "missing");
      std::size_t n = count_at(spec["count"], "space.count");
      double h = spec.contains("spacing") ? number_at(spec["spacing"], "space.spacing") : 1.0;
      if (!(h > 0.0)) bad("space.spacing", "must be > 0");
      if (gen == "path") return FiniteMetricSpace::path(n, h);
      if (gen == "cycle") return FiniteMetricSpace::cycle(n, h);
      if (gen == "grid1d") {
        double x0 = spec.contains("origin") ? number_at(spec["origin"], "space.origin") : 0.0;
        return FiniteMetricSpace::grid1d(n, h, x0);
      }
      bad("space.generator", "unknown generator '" + gen + "' (path, cycle, grid1d)");
    }
    if (!spec.contains("dist")) bad("space", "needs 'dist' or 'generator'");
    const auto& d = spec["dist"];
    if (!d.is_array()) bad("space.dist", "expected a matrix");
    Matrix m;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!d[i].is_array()) bad("space.dist[" + std::to_string(i) + "]", "expected a row");
      std::vector<double> row;
      for (std::size_t j = 0; j < d[i].size(); ++j) {
        row.push_back(number_at(d[i][j], "space.dist[" + std::to_string(i) + "][" +
                                             std::to_string(j) + "]"));
      }
      m.push_back(std::move(row));
    }
    std::vector<std::string> labels;
    if (spec.contains("labels")) {
      if (!spec["labels"].is_array()) bad("space.labels", "expected an array");
      for (const auto& l : spec["labels"]) {
        labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
      }
    } else {
      for (std::size_t i = 0; i < m.size(); ++i) labels.push_back(std::to_string(i));
    }
    try {
      return FiniteMetricSpace(labels, m);
    } catch (const Error& e) {
      bad("space", e.what());
    }
  };
  auto space = make();
  if (spec.contains("neighbors")) {
    const auto& nb = spec["neighbors"];
    if (!nb.is_array() || nb.size() != space.size()) {
      bad("space.neighbors", "expected one list per point");
    }
    Adjacency adj(space.size());
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (const auto& j : nb[i]) {
        auto k = j.get<long long>();
        if (k < 0 || static_cast<std::size_t>(k) >= space.size() || static_cast<std::size_t>(k) == i) {
          bad("space.neighbors[" + std::to_string(i) + "]", "bad index");
        }
        adj[i].push_back(static_cast<std::size_t>(k));
      }
    }
    space.set_neighbors(std::move(adj));
  }
  return space;
}

ProbMeasure load_measure(const Json& spec, const FiniteMetricSpace& space) {
  std::size_t n = space.size();
  auto from_weights = [&](std::vector<double> w) {
    if (w.size() != n) {
      bad("measure.weights", std::to_string(w.size()) + " weights for " + std::to_string(n) +
                                 " points");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!(w[i] >= 0.0) || std::isinf(w[i])) {
        bad("measure.weights[" + std::to_string(i) + "]", "must be finite and >= 0");
      }
      s += w[i];
    }
    if (!(std::abs(s - 1.0) <= 1e-12)) {
      std::ostringstream os;
      os.precision(15);
      os << "weights sum to " << s << ", expected 1 within 1e-12 (normalize the weights"
         << " or use a density)";
      bad("measure.weights", os.str());
    }
    return ProbMeasure(std::move(w));
  };
  auto from_density = [&](const std::string& text) {
    auto expr = DensityExpr::parse(text);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      double x = space.has_coordinates() ? space.coordinates()[i] : static_cast<double>(i);
      w[i] = expr.eval({{"x", x}, {"i", static_cast<double>(i)}, {"n", static_cast<double>(n)}});
      if (!(w[i] >= 0.0) || std::isinf(w[i])) {
        bad("measure.density", "value at point " + std::to_string(i) + " is not finite and >= 0");
      }
    }
    double s = 0.0;
    for (double v : w) s += v;
    if (!(s > 0.0)) bad("measure.density", "total mass is 0");
    return ProbMeasure::normalized(std::move(w));
  };

  if (spec.is_string()) {
    auto s = spec.get<std::string>();
    if (s == "uniform") return ProbMeasure::uniform(n);
    auto colon = s.find(':');
    std::string kind = s.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (kind == "dirac") {
      std::size_t used = 0;
      long long i = -1;
      try {
        i = std::stoll(rest, &used);
      } catch (const std::exception&) {
      }
      if (i < 0 || static_cast<std::size_t>(i) >= n || used != rest.size()) {
        bad("measure", "dirac needs an index in [0, " + std::to_string(n) + ")");
      }
      return ProbMeasure::dirac(n, static_cast<std::size_t>(i));
    }
    if (kind == "weights") return from_weights(parse_list(rest, "measure.weights"));
    if (kind == "density") return from_density(rest);
    if (kind == "file") return load_measure(load_json_file(rest), space);
    bad("measure", "unknown measure '" + s + "' (uniform, dirac:i, weights:..., density:...)");
  }
  if (spec.is_object()) {
    if (spec.contains("weights")) {
      std::vector<double> w;
      const auto& a = spec["weights"];
      if (!a.is_array()) bad("measure.weights", "expected an array");
      for (std::size_t i = 0; i < a.size(); ++i) {
        w.push_back(number_at(a[i], "measure.weights[" + std::to_string(i) + "]"));
      }
      return from_weights(std::move(w));
    }
    if (spec.contains("density")) return from_density(spec["density"].get<std::string>());
  }
  bad("measure", "expected a string or an object with 'weights' or 'density'");
}

YoungFunction parse_alpha(const std::string& spec) {
  if (spec == "quadratic") return YoungFunction();
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "power") {
    auto p = parse_list(rest, "alpha");
    if (p.size() != 2) bad("alpha", "power needs two exponents, e.g. power:2,2");
    try {
      return YoungFunction::power(p[0], p[1]);
    } catch (const Error& e) {
      bad("alpha", e.what());
    }
  }
  if (kind == "table") return YoungFunction::load_table(rest);
  bad("alpha", "unknown alpha '" + spec + "' (power:p1,p2, quadratic, table:path)");
}

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      bad(field, "'" + item + "' is not a number");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) bad(field, "'" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) bad(field, "empty list");
  return out;
}

SearchOptions search_options(const Json& cfg) {
  SearchOptions o;
  auto num_or = [&](const char* key, double def) {
    return cfg.contains(key) ? number_at(cfg[key], key) : def;
  };
  if (cfg.contains("seed")) o.seed = cfg["seed"].get<std::uint64_t>();
  o.starts = static_cast<int>(num_or("starts", o.starts));
  o.iterations = static_cast<int>(num_or("iterations", o.iterations));
  o.fd_step = num_or("fd_step", o.fd_step);
  o.clamp = num_or("clamp", o.clamp);
  o.f_box = num_or("f_box", o.f_box);
  if (cfg.contains("dense")) o.dense = cfg["dense"].get<bool>();
  if (o.starts < 1) bad("starts", "must be >= 1");
  if (o.iterations < 0) bad("iterations", "must be >= 0");
  if (!(o.fd_step > 0.0)) bad("fd_step", "must be > 0");
  if (!(o.clamp > 0.0) || o.clamp >= 0.1) bad("clamp", "must be in (0, 0.1)");
  if (!(o.f_box > 0.0)) bad("f_box", "must be > 0");
  return o;
}

}  // namespace ineqlab
