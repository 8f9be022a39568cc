#include "ineqlab/young.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ineqlab/error.hpp"
#include "ineqlab/numerics.hpp"

namespace ineqlab {

using num::inf;

double two_branch_power(double p1, double p2, double x) {
  x = std::abs(x);
  if (x <= 1.0) return std::pow(x, p1);
  return (p1 / p2) * std::pow(x, p2) + 1.0 - p1 / p2;
}

YoungFunction YoungFunction::power(double p1, double p2) {
  if (!(p1 >= 2.0) || !(p2 >= 1.0) || !std::isfinite(p1) || !std::isfinite(p2)) {
    throw Error(ErrorCode::domain,
                "power Young function needs p1 >= 2 and p2 >= 1");
  }
  YoungFunction a;
  a.kind_ = Kind::power;
  a.p1_ = p1;
  a.p2_ = p2;
  return a;
}

YoungFunction YoungFunction::tabulated(std::vector<double> x,
                                       std::vector<double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw Error(ErrorCode::domain, "table columns differ in length or are empty");
  }
  if (x.front() != 0.0) {
    x.insert(x.begin(), 0.0);
    y.insert(y.begin(), 0.0);
  }
  if (y.front() != 0.0) throw Error(ErrorCode::domain, "table must have alpha(0) = 0");
  if (x.size() < 2) throw Error(ErrorCode::domain, "table needs a positive node");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) {
      throw Error(ErrorCode::domain, "table x column must be strictly increasing");
    }
    if (!(y[i] > 0.0) || !std::isfinite(y[i])) {
      throw Error(ErrorCode::domain, "table values must be positive and finite off 0");
    }
  }
  double prev = 2.0 * y[1] / x[1];
  for (std::size_t i = 2; i < x.size(); ++i) {
    double s = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    if (s < prev * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "table is not convex at node " << i - 1 << " (x = " << x[i - 1] << ")";
      throw Error(ErrorCode::domain, msg.str());
    }
    prev = s;
  }
  YoungFunction a;
  a.kind_ = Kind::tabulated;
  a.tx_ = std::make_shared<const std::vector<double>>(std::move(x));
  a.ty_ = std::make_shared<const std::vector<double>>(std::move(y));
  a.name_ = "table";
  return a;
}

YoungFunction YoungFunction::load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config, "cannot open table file " + path);
  std::vector<double> x, y;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) {
      throw Error(ErrorCode::config,
                  path + ":" + std::to_string(lineno) + ": expected two columns");
    }
    x.push_back(a);
    y.push_back(b);
  }
  try {
    auto f = tabulated(std::move(x), std::move(y));
    f.name_ = "table:" + path;
    return f;
  } catch (const Error& e) {
    throw Error(ErrorCode::config, path + ": " + e.what());
  }
}

YoungFunction YoungFunction::custom(std::function<double(double)> f,
                                    std::string name) {
  YoungFunction a;
  a.kind_ = Kind::custom;
  a.fn_ = std::make_shared<const std::function<double(double)>>(std::move(f));
  a.name_ = std::move(name);
  return a;
}

YoungFunction YoungFunction::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::domain, "scale factor must be positive");
  }
  YoungFunction a = *this;
  a.scale_ *= c;
  return a;
}

std::optional<PowerParams> YoungFunction::power_params() const {
  if (kind_ != Kind::power) return std::nullopt;
  return PowerParams{p1_, p2_};
}

std::string YoungFunction::describe() const {
  std::ostringstream s;
  if (kind_ == Kind::power) {
    s << "power:" << p1_ << "," << p2_;
  } else {
    s << name_;
  }
  if (scale_ != 1.0) s << "*" << scale_;
  return s.str();
}

double YoungFunction::base_value(double x) const {
  switch (kind_) {
    case Kind::power:
      return two_branch_power(p1_, p2_, x);
    case Kind::tabulated: {
      const auto& tx = *tx_;
      const auto& ty = *ty_;
      if (x <= tx[1]) {
        double s = x / tx[1];
        return ty[1] * s * s;
      }
      std::size_t m = tx.size() - 1;
      if (x >= tx[m]) {
        double slope = (m == 1) ? 2.0 * ty[1] / tx[1]
                                : (ty[m] - ty[m - 1]) / (tx[m] - tx[m - 1]);
        return ty[m] + slope * (x - tx[m]);
      }
      auto it = std::upper_bound(tx.begin(), tx.end(), x);
      std::size_t j = static_cast<std::size_t>(it - tx.begin());
      double w = (x - tx[j - 1]) / (tx[j] - tx[j - 1]);
      return ty[j - 1] + w * (ty[j] - ty[j - 1]);
    }
    case Kind::custom:
      return (*fn_)(x);
  }
  return 0.0;
}

double YoungFunction::operator()(double x) const {
  return scale_ * base_value(std::abs(x));
}

namespace {

struct OneSided {
  double left;
  double right;
};

// Central difference, switching to one-sided quotients at kinks.
OneSided fd_derivative(const YoungFunction& a, double x) {
  double h = 1e-6 * std::max(1.0, x);
  double f0 = a(x);
  double fwd = (a(x + h) - f0) / h;
  if (x <= h) return {x == 0.0 ? 0.0 : f0 / x, fwd};
  double bwd = (f0 - a(x - h)) / h;
  if (std::abs(fwd - bwd) > 1e-3 * std::max(1.0, std::abs(fwd))) return {bwd, fwd};
  double c = 0.5 * (fwd + bwd);
  return {c, c};
}

}  // namespace

double YoungFunction::right_derivative(double x) const {
  if (x < 0.0) return -left_derivative(-x);
  if (kind_ == Kind::power) {
    if (x == 0.0) return 0.0;
    double e = (x <= 1.0) ? p1_ - 1.0 : p2_ - 1.0;
    return scale_ * p1_ * std::pow(x, e);
  }
  if (x == 0.0) return 0.0;
  return fd_derivative(*this, x).right;
}

double YoungFunction::left_derivative(double x) const {
  if (x < 0.0) return -right_derivative(-x);
  if (x == 0.0) return 0.0;
  if (kind_ == Kind::power) {
    double e = (x <= 1.0) ? p1_ - 1.0 : p2_ - 1.0;
    return scale_ * p1_ * std::pow(x, e);
  }
  return fd_derivative(*this, x).left;
}

double YoungFunction::conjugate(double y) const {
  y = std::abs(y);
  if (kind_ != Kind::power) return conjugate_numeric(y);
  // (c a)*(y) = c a*(y/c) and a_{p1,p2}*(y) = p1 abar_{q1,q2}(y/p1)
  double z = y / scale_ / p1_;
  double q1 = p1_ / (p1_ - 1.0);
  double inner;
  if (z <= 1.0) {
    inner = std::pow(z, q1) / q1;
  } else if (p2_ == 1.0) {
    return inf;
  } else {
    double q2 = p2_ / (p2_ - 1.0);
    inner = std::pow(z, q2) / q2 + 1.0 / q1 - 1.0 / q2;
  }
  return scale_ * p1_ * inner;
}

double YoungFunction::conjugate_numeric(double y) const {
  y = std::abs(y);
  if (y == 0.0) return 0.0;
  double x_max = 1.0;
  while (right_derivative(x_max) < y) {
    x_max *= 2.0;
    if (x_max > 1e15) return inf;
  }
  auto g = [&](double x) { return x * y - (*this)(x); };
  auto r = num::golden_max(g, 0.0, x_max, 1e-10);
  return std::max(r.value, 0.0);
}

namespace {

void check_delta2(const ExponentPair& e) {
  if (!std::isfinite(e.p_alpha) || e.p_alpha > 64.0 || !std::isfinite(e.delta2_K) ||
      e.delta2_K > 0x1.0p64) {
    throw Error(ErrorCode::delta2_violation,
                "doubling ratio alpha(2x)/alpha(x) is not bounded on the grid");
  }
}

double doubling_sup(const YoungFunction& a) {
  return num::log_grid_sup([&](double x) { return a(2.0 * x) / a(x); }).value;
}

}  // namespace

ExponentPair exponents_numeric(const YoungFunction& a) {
  ExponentPair e;
  e.delta2_K = doubling_sup(a);
  e.p_alpha = num::log_grid_sup(
                  [&](double x) { return x * a.right_derivative(x) / a(x); })
                  .value;
  check_delta2(e);
  e.r_alpha = num::log_grid_inf(
                  [&](double x) { return x * a.left_derivative(x) / a(x); })
                  .value;
  e.r_alpha = std::max(1.0, e.r_alpha);
  return e;
}

ExponentPair exponents(const YoungFunction& a) {
  auto pp = a.power_params();
  if (!pp) return exponents_numeric(a);
  ExponentPair e;
  e.r_alpha = std::min(pp->p1, pp->p2);
  e.p_alpha = std::max(pp->p1, pp->p2);
  e.delta2_K = doubling_sup(a);
  check_delta2(e);
  return e;
}

double xi_numeric(const YoungFunction& a, double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::domain, "xi needs x > 0");
  auto f = [&](double u) {
    double c = a.conjugate(x * a.right_derivative(u));
    if (std::isinf(c)) return inf;
    return c / (x * a(u));
  };
  double v = num::log_grid_sup(f).value;
  return v > 1e300 ? inf : v;
}

double xi(const YoungFunction& a, double x) {
  auto pp = a.power_params();
  if (!pp) return xi_numeric(a, x);
  if (!(x > 0.0)) throw Error(ErrorCode::domain, "xi needs x > 0");
  double p1 = pp->p1;
  double p2 = pp->p2;
  double p = std::max(p1, p2);
  if (x <= 1.0) return (p - 1.0) * std::pow(x, 1.0 / (p - 1.0));
  if (p2 == 1.0) return inf;
  if (p1 >= p2) {
    double q1 = p1 / (p1 - 1.0);
    double q2 = p2 / (p2 - 1.0);
    return p1 * (std::pow(x, 1.0 / (p2 - 1.0)) / q2 + (1.0 / q1 - 1.0 / q2) / x);
  }
  return std::max((p1 - 1.0) * std::pow(x, 1.0 / (p1 - 1.0)),
                  (p2 - 1.0) * std::pow(x, 1.0 / (p2 - 1.0)));
}

double xi_upper_bound(double r, double p, double x) {
  double er = (r <= 1.0) ? inf : 1.0 / (r - 1.0);
  return (p - 1.0) * std::max(std::pow(x, 1.0 / (p - 1.0)), num::pow_ext(x, er));
}

double epsilon(double p, double t) {
  if (!(t >= 0.0) || !(t < 1.0)) throw Error(ErrorCode::domain, "epsilon needs 0 <= t < 1");
  if (!(p > 1.0)) throw Error(ErrorCode::domain, "epsilon needs p > 1");
  if (t == 0.0) return 0.0;
  double s = std::pow(t, 1.0 / (p - 1.0));
  return std::expm1(-(p - 1.0) * std::log1p(-s));
}

FiniteMetricSpace change_metric(const YoungFunction& a,
                                const FiniteMetricSpace& space) {
  double p = exponents(a).p_alpha;
  Matrix d = space.matrix();
  for (auto& row : d) {
    for (auto& v : row) v = std::pow(a(v), 1.0 / p);
  }
  FiniteMetricSpace out(space.labels(), d);
  out.set_neighbors(space.neighbors());
  return out;
}

double kappa(double p) {
  return std::pow(p, p * (p - 1.0)) / std::pow(p - 1.0, (p - 1.0) * (p - 1.0));
}

double kappa_tilde(double p) {
  return std::pow(p, p * p) / std::pow(p - 1.0, p * (p - 1.0));
}

double c_tilde_factor(double p) { return std::pow(p, p) / std::pow(p - 1.0, p - 1.0); }

double a_p(double p, double omega) {
  if (!(p > 1.0) || !(omega >= 1.0)) throw Error(ErrorCode::domain, "a_p needs p > 1, omega >= 1");
  double m = p - 1.0;
  double q = p / m;
  // int_0^t eps(u)/u du with u = v^m
  auto integrand = [m](double v) {
    if (v < 1e-14) return m * m;
    return m * std::expm1(-m * std::log1p(-v)) / v;
  };
  double coef = std::pow(p / omega, q) / m;
  auto value = [&](double t, double I) {
    return std::pow(t, -(q - 1.0)) * (1.0 + coef * I);
  };
  // cumulative integral over the grid nodes, then refine between neighbours
  constexpr int kGrid = 400;
  std::vector<double> node_t(kGrid), node_i(kGrid);
  double acc = 0.0;
  double prev_v = 0.0;
  int best = 1;
  double best_f = inf;
  for (int k = 1; k < kGrid; ++k) {
    double t = static_cast<double>(k) / kGrid;
    double v = std::pow(t, 1.0 / m);
    acc += num::simpson(integrand, prev_v, v, 1e-13);
    prev_v = v;
    node_t[k] = t;
    node_i[k] = acc;
    double f = value(t, acc);
    if (f < best_f) {
      best_f = f;
      best = k;
    }
  }
  int lo = std::max(best - 1, 1);
  int hi = std::min(best + 1, kGrid - 1);
  auto objective = [&](double t) {
    double v0 = std::pow(node_t[lo], 1.0 / m);
    double I = node_i[lo] + num::simpson(integrand, v0, std::pow(t, 1.0 / m), 1e-13);
    return -value(t, I);
  };
  auto r = num::golden_max(objective, node_t[lo], node_t[hi], 1e-12);
  return std::min(best_f, -r.value);
}

double ConstantBundle::xi(double x) const { return ineqlab::xi(alpha, x); }

double ConstantBundle::epsilon(double t) const {
  return ineqlab::epsilon(exps.p_alpha, t);
}

namespace {

// int_0^t g(u) du for g = A xi/(u(1 + sign A xi)), substituting u = v^m.
double herbst_integral(const ConstantBundle& b, double t, double sign) {
  if (t <= 0.0) return 0.0;
  double m = b.exps.p_alpha - 1.0;
  double A = b.A_in;
  auto g = [&](double v) {
    v = std::max(v, 1e-12);
    double u = std::pow(v, m);
    double x = b.xi(u);
    double frac = std::isinf(x) ? ((sign > 0) ? 1.0 : -1.0) : A * x / (1.0 + sign * A * x);
    return m * frac / v;
  };
  return num::simpson(g, 0.0, std::pow(t, 1.0 / m), 1e-10);
}

}  // namespace

double ConstantBundle::herbst_plus(double t) const {
  if (!(t < t_A)) throw Error(ErrorCode::domain, "herbst_plus needs t < t_A");
  return std::exp(herbst_integral(*this, t, -1.0));
}

double ConstantBundle::herbst_minus(double t) const {
  return std::exp(-herbst_integral(*this, t, 1.0));
}

double ConstantBundle::b_minus_map(double t) const {
  return std::exp(herbst_integral(*this, t, 1.0)) / t;
}

namespace {

double find_t_alpha(const ConstantBundle& b) {
  if (auto pp = b.alpha.power_params()) return pp->p2 == 1.0 ? 1.0 : inf;
  if (b.exps.r_alpha > 1.0 + 1e-9) return inf;
  double lo = 0.0;
  double hi = 1.0;
  if (std::isfinite(b.xi(1.0))) {
    lo = 1.0;
    hi = 2.0;
    while (std::isfinite(b.xi(hi))) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) return inf;
    }
  }
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (std::isfinite(b.xi(mid))) lo = mid; else hi = mid;
  }
  return lo;
}

double find_t_A(const ConstantBundle& b) {
  double target = 1.0 / b.A_in;
  auto below = [&](double t) { return b.xi(t) < target; };
  double lo, hi;
  if (below(1.0)) {
    lo = 1.0;
    hi = 2.0;
    while (below(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) return inf;
    }
  } else {
    hi = 1.0;
    lo = 0.5;
    while (!below(lo)) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) {
        throw Error(ErrorCode::t_a_zero, "xi(t) >= 1/A on the whole search bracket");
      }
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (below(mid)) lo = mid; else hi = mid;
  }
  return lo;
}

double find_b_minus(const ConstantBundle& b) {
  if (std::isfinite(b.t_alpha)) return b.b_minus_map(1.0);
  double A = b.A_in;
  double log_f = herbst_integral(b, 1.0, 1.0);
  // d/ds log F(e^s) = -1/(1 + A xi(e^s)) past t = 1
  auto h = [&](double s) {
    double x = b.xi(std::exp(s));
    return std::isinf(x) ? 0.0 : 1.0 / (1.0 + A * x);
  };
  double s = 0.0;
  double width = 1.0;
  for (int chunk = 0; chunk < 4000; ++chunk) {
    double piece = num::simpson(h, s, s + width, 1e-12);
    log_f -= piece;
    s += width;
    if (piece < 1e-10) break;
    if (chunk >= 64) width *= 1.5;
  }
  return std::exp(log_f);
}

}  // namespace

ConstantBundle implication_constants(const YoungFunction& alpha, double A,
                                     double lambda) {
  if (!(A > 0.0) || !(lambda > 0.0)) {
    throw Error(ErrorCode::domain, "constants need A > 0 and lambda > 0");
  }
  ConstantBundle b;
  b.alpha = alpha;
  b.exps = exponents(alpha);
  b.A_in = A;
  b.lambda_in = lambda;
  double r = b.exps.r_alpha;
  double p = b.exps.p_alpha;
  double pa = (p - 1.0) * A;
  b.c_plus = std::max(std::pow(pa, r - 1.0), std::pow(pa, p - 1.0));
  b.c_minus = std::pow(1.0 + pa, p - r) * std::pow(pa, r - 1.0);
  b.kappa = kappa(p);
  b.kappa_tilde = kappa_tilde(p);
  b.C_tilde_factor = c_tilde_factor(p);
  b.c_tau_lsi_to_t = b.kappa * std::pow(std::max(A, 1.0), p - 1.0) / lambda;
  b.a_p_omega1 = a_p(p, 1.0);
  b.a_p_omegap = a_p(p, p);
  b.c_concentration_omega1 = std::pow(b.a_p_omega1 * std::max(1.0, A), p - 1.0);
  b.c_concentration_omegap = std::pow(b.a_p_omegap * std::max(1.0, A), p - 1.0);
  b.t_alpha = find_t_alpha(b);
  b.t_A = find_t_A(b);
  b.B_minus = find_b_minus(b);
  return b;
}

}  // namespace ineqlab
