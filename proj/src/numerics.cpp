#include "ineqlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "ineqlab/error.hpp"

namespace ineqlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "DOMAIN_ERROR";
    case ErrorCode::unbounded: return "UNBOUNDED";
    case ErrorCode::delta2_violation: return "DELTA2_VIOLATION";
    case ErrorCode::t_a_zero: return "T_A_ZERO";
    case ErrorCode::metric_invalid: return "METRIC_INVALID";
    case ErrorCode::size_overflow: return "SIZE_OVERFLOW";
    case ErrorCode::degenerate: return "DEGENERATE";
    case ErrorCode::solver_failure: return "SOLVER_FAILURE";
    case ErrorCode::config: return "CONFIG_ERROR";
    case ErrorCode::not_lipschitz: return "NOT_LIPSCHITZ";
  }
  return "UNKNOWN";
}

}  // namespace ineqlab

namespace ineqlab::num {

namespace {
constexpr double kInvPhi = 0.6180339887498949;
}

Extremum golden_max(const std::function<double(double)>& f, double a, double b,
                    double rel_tol, int max_iter) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter; ++it) {
    double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    if (b - a <= rel_tol * scale) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  double fa = f(a);
  double fb = f(b);
  Extremum best{c, fc};
  if (fd > best.value) best = {d, fd};
  if (fa > best.value) best = {a, fa};
  if (fb > best.value) best = {b, fb};
  return best;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  double la = std::log(lo);
  double lb = std::log(hi);
  for (int i = 0; i < n; ++i) {
    g[i] = std::exp(la + (lb - la) * i / (n - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

Extremum log_grid_sup(const std::function<double(double)>& f, double lo,
                      double hi, int n) {
  auto grid = log_grid(lo, hi, n);
  int best = 0;
  double best_v = -inf;
  for (int i = 0; i < n; ++i) {
    double v = f(grid[i]);
    if (std::isnan(v)) continue;
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  if (!std::isfinite(best_v)) return {grid[best], best_v};
  double a = std::log(grid[std::max(best - 1, 0)]);
  double b = std::log(grid[std::min(best + 1, n - 1)]);
  auto g = [&](double s) {
    double v = f(std::exp(s));
    return std::isnan(v) ? -inf : v;
  };
  Extremum r = golden_max(g, a, b, 1e-13);
  if (r.value > best_v) return {std::exp(r.x), r.value};
  return {grid[best], best_v};
}

Extremum log_grid_inf(const std::function<double(double)>& f, double lo,
                      double hi, int n) {
  Extremum r = log_grid_sup([&](double x) { return -f(x); }, lo, hi, n);
  return {r.x, -r.value};
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
      std::abs(delta) <= 1e-13 * std::abs(left + right)) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b,
               double abs_tol, int max_depth) {
  if (b <= a) return 0.0;
  // A fixed first split avoids accepting a lucky coarse estimate.
  constexpr int kPanels = 16;
  double h = (b - a) / kPanels;
  double total = 0.0;
  for (int k = 0; k < kPanels; ++k) {
    double x0 = a + k * h;
    double x1 = (k + 1 == kPanels) ? b : x0 + h;
    double f0 = f(x0);
    double f1 = f(x1);
    double fm = f(0.5 * (x0 + x1));
    double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    total += simpson_rec(f, x0, x1, f0, fm, f1, whole, abs_tol / kPanels,
                         max_depth);
  }
  return total;
}

double pow_ext(double x, double e) {
  if (std::isinf(e)) return x <= 1.0 ? 0.0 : inf;
  return std::pow(x, e);
}

double entropy_kernel(double r) {
  double d = r - 1.0;
  if (std::abs(d) < 0.25) {
    // sum_{k>=2} (-d)^k / (k (k-1))
    double term = d * d, s = 0.0;
    for (int k = 2; k < 80; ++k) {
      double add = term / (k * (k - 1.0));
      s += add;
      if (std::abs(add) < 1e-17 * s) break;
      term *= -d;
    }
    return s;
  }
  if (r == 0.0) return 1.0;
  return r * std::log(r) - d;
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

std::size_t Rng::index(std::size_t n) {
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("INEQ_LAB_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) return std::min(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  unsigned workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace ineqlab::num
