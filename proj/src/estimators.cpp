#include "ineqlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ineqlab/error.hpp"

namespace ineqlab {

namespace {

struct Best {
  double value = 0.0;
  std::size_t index = 0;
  bool found = false;
};

// Parallel map over candidates; ties keep the smallest index so the result
// does not depend on the worker count.
Best scan_max(std::size_t count, const std::function<double(std::size_t)>& eval) {
  std::vector<double> vals(count, 0.0);
  num::parallel_for(count, [&](std::size_t i) { vals[i] = eval(i); });
  Best b;
  for (std::size_t i = 0; i < count; ++i) {
    double v = vals[i];
    if (std::isnan(v)) continue;
    if (!b.found || v > b.value) {
      b.value = v;
      b.index = i;
      b.found = true;
    }
  }
  return b;
}

bool constant_on_support(const ProbMeasure& mu, const Potential& f) {
  double lo = num::inf, hi = -num::inf;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) {
      lo = std::min(lo, f[i]);
      hi = std::max(hi, f[i]);
    }
  }
  return !(hi > lo);
}

void gauge(Potential& f, double box) {
  double m = *std::max_element(f.begin(), f.end());
  for (auto& v : f) v = std::max(v - m, -box);
}

std::vector<double> unbounded_measure(const ProbMeasure& mu) {
  // mu + eps (delta_a - delta_b) for the first two support points
  auto sup = mu.support();
  std::vector<double> w = mu.weights();
  double eps = 1e-6 * std::min(w[sup[0]], w[sup[1]]);
  w[sup[0]] += eps;
  w[sup[1]] -= eps;
  return w;
}

// 2-point: nu0 = mu0 + i h.  3-point: nu = mu + h (i, j, -i-j).
std::vector<std::vector<double>> dense_nu_grid(const ProbMeasure& mu, double h1,
                                               double h2) {
  std::vector<std::vector<double>> out;
  const auto& m = mu.weights();
  if (m.size() == 2) {
    long lo = -static_cast<long>(std::floor(m[0] / h1));
    long hi = static_cast<long>(std::floor((1.0 - m[0]) / h1));
    for (long i = lo; i <= hi; ++i) {
      if (i == 0) continue;
      double n0 = m[0] + i * h1;
      if (n0 < 0.0 || n0 > 1.0) continue;
      out.push_back({n0, 1.0 - n0});
    }
    out.push_back({0.0, 1.0});
    out.push_back({1.0, 0.0});
  } else if (m.size() == 3) {
    long ilo = -static_cast<long>(std::floor(m[0] / h2));
    long ihi = static_cast<long>(std::floor((1.0 - m[0]) / h2));
    long jlo = -static_cast<long>(std::floor(m[1] / h2));
    long jhi = static_cast<long>(std::floor((1.0 - m[1]) / h2));
    for (long i = ilo; i <= ihi; ++i) {
      for (long j = jlo; j <= jhi; ++j) {
        if (i == 0 && j == 0) continue;
        double a = m[0] + i * h2, b = m[1] + j * h2;
        double c = 1.0 - a - b;
        if (a < 0.0 || b < 0.0 || c < 0.0) continue;
        out.push_back({a, b, c});
      }
    }
  }
  return out;
}

double safe_ratio(const TransportProblem& tp, const std::vector<double>& w,
                  const ProbMeasure& mu) {
  double s = 0.0;
  for (double v : w) s += v;
  if (!(std::abs(s - 1.0) <= 1e-12)) return std::numeric_limits<double>::quiet_NaN();
  return transport_ratio(tp, ProbMeasure(w), mu);
}

std::vector<double> simplex_project(std::vector<double> w, double clamp) {
  double s = 0.0;
  for (auto& v : w) {
    v = std::max(v, clamp);
    s += v;
  }
  for (auto& v : w) v /= s;
  return w;
}

}  // namespace

std::vector<double> SupportView::lift_measure(const std::vector<double>& w,
                                              std::size_t full) const {
  std::vector<double> out(full, 0.0);
  for (std::size_t k = 0; k < index.size(); ++k) out[index[k]] = w[k];
  return out;
}

Potential SupportView::lift_potential(const Potential& f, std::size_t full) const {
  double m = f.empty() ? 0.0 : *std::max_element(f.begin(), f.end());
  Potential out(full, m + 1.0);
  for (std::size_t k = 0; k < index.size(); ++k) out[index[k]] = f[k];
  return out;
}

SupportView support_view(const ProbMeasure& mu, const FiniteMetricSpace& space) {
  if (mu.size() != space.size()) {
    throw Error(ErrorCode::domain, "measure and space sizes differ");
  }
  auto idx = mu.support();
  return SupportView{idx, space.restrict(idx), mu.restrict(idx)};
}

double smallest_cost(const YoungFunction& alpha, const FiniteMetricSpace& space) {
  double m = num::inf;
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (i != j) m = std::min(m, alpha(space.dist(i, j)));
    }
  }
  return m;
}

double transport_ratio(const TransportProblem& tp, const ProbMeasure& nu,
                       const ProbMeasure& mu) {
  double h = relative_entropy(nu, mu);
  if (!(h > 0.0) || std::isinf(h)) return 0.0;
  return tp.solve(nu, mu).cost / h;
}

double TauLsiTerms::ratio() const {
  if (!(entropy > 0.0)) return 0.0;
  if (!(deficit > 0.0)) return num::inf;
  return entropy / deficit;
}

TauLsiTerms tau_lsi_terms(const ProbMeasure& mu, const InfConvolution& conv,
                          const Potential& f) {
  TauLsiTerms t;
  if (constant_on_support(mu, f)) return t;
  t.entropy = exp_entropy(mu, f);
  auto q = conv.q(f).values;
  double m = -num::inf;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) m = std::max(m, f[i]);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) s += mu[i] * (f[i] - q[i]) * std::exp(f[i] - m);
  }
  t.deficit = s * std::exp(m);
  return t;
}

double tau_lsi_ratio(const ProbMeasure& mu, const YoungFunction& alpha,
                     double lambda, const FiniteMetricSpace& space,
                     const Potential& f) {
  InfConvolution conv(alpha, ProductSpace(space, 1), lambda);
  return tau_lsi_terms(mu, conv, f).ratio();
}

double mlsi_ratio(const ProbMeasure& mu, const YoungFunction& alpha, Sign sign,
                  SlopeMode mode, const FiniteMetricSpace& space,
                  const Potential& f) {
  if (constant_on_support(mu, f)) return 0.0;
  double m = -num::inf;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) m = std::max(m, f[i]);
  }
  Potential g = f;
  for (auto& v : g) v -= m;
  double ent = exp_entropy(mu, g);
  double den = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] == 0.0) continue;
    auto s = slope(space, g, i, sign, mode);
    den += mu[i] * alpha.conjugate(s.value) * std::exp(g[i]);
  }
  if (!(ent > 0.0)) return 0.0;
  if (std::isinf(den)) return 0.0;
  if (!(den > 0.0)) return num::inf;
  return ent / den;
}

std::vector<Potential> dense_f_grid(std::size_t k, const SearchOptions& opt) {
  std::vector<Potential> out;
  if (k == 2) {
    long n = static_cast<long>(std::llround(opt.f_range_1d / opt.f_step_1d));
    for (long i = -n; i <= n; ++i) {
      if (i != 0) out.push_back({0.0, i * opt.f_step_1d});
    }
  } else if (k == 3) {
    long n = static_cast<long>(std::llround(opt.f_range_2d / opt.f_step_2d));
    for (std::size_t face = 0; face < 3; ++face) {
      for (long i = 0; i <= n; ++i) {
        for (long j = 0; j <= n; ++j) {
          if (i == 0 && j == 0) continue;
          Potential f(3, 0.0);
          f[(face + 1) % 3] = -i * opt.f_step_2d;
          f[(face + 2) % 3] = -j * opt.f_step_2d;
          out.push_back(f);
        }
      }
    }
  }
  return out;
}

Estimate maximize_over_f(std::size_t size,
                         const std::function<double(const Potential&)>& ratio,
                         const SearchOptions& opt) {
  struct Run {
    double value = -num::inf;
    Potential f;
    std::size_t evals = 0;
  };
  std::size_t starts = static_cast<std::size_t>(std::max(opt.starts, 1));
  std::vector<Run> runs(starts);
  num::parallel_for(starts, [&](std::size_t s) {
    num::Rng rng(num::Rng::mix(opt.seed, s));
    Run& run = runs[s];
    double scale = std::exp(rng.uniform(std::log(1e-3), std::log(opt.f_box)));
    Potential f(size);
    for (auto& v : f) v = scale * rng.normal();
    gauge(f, opt.f_box);
    auto eval = [&](const Potential& g) {
      ++run.evals;
      double r = ratio(g);
      return std::isnan(r) ? -num::inf : r;
    };
    double r = eval(f);
    run.value = r;
    run.f = f;
    double step = 0.1 * std::max(scale, 1e-3);
    Potential grad(size);
    for (int it = 0; it < opt.iterations && step > 1e-12; ++it) {
      if (std::isinf(r) && r > 0) break;
      if (run.value > opt.stop_above) break;
      double gmax = 0.0;
      for (std::size_t i = 0; i < size; ++i) {
        Potential fp = f, fm = f;
        fp[i] += opt.fd_step;
        fm[i] -= opt.fd_step;
        double a = eval(fp), b = eval(fm);
        grad[i] = (std::isfinite(a) && std::isfinite(b)) ? (a - b) / (2 * opt.fd_step) : 0.0;
        gmax = std::max(gmax, std::abs(grad[i]));
      }
      if (!(gmax > 0.0)) break;
      bool moved = false;
      while (step > 1e-12) {
        Potential trial = f;
        for (std::size_t i = 0; i < size; ++i) trial[i] += step * grad[i] / gmax;
        gauge(trial, opt.f_box);
        double rt = eval(trial);
        if (rt > r) {
          f = std::move(trial);
          r = rt;
          step = std::min(2 * step, opt.f_box);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (r > run.value) {
        run.value = r;
        run.f = f;
      }
      if (!moved) break;
    }
  });
  Estimate e;
  e.method = "multistart";
  e.starts = starts;
  e.value = 0.0;
  bool have = false;
  for (const auto& run : runs) {
    e.evaluations += run.evals;
    if (!have || run.value > e.value) {
      e.value = run.value;
      e.witness = run.f;
      have = true;
    }
  }
  if (!(e.value > 0.0)) e.value = 0.0;
  return e;
}

Estimate transport_constant_estimate(const ProbMeasure& mu,
                                     const YoungFunction& alpha,
                                     const FiniteMetricSpace& space,
                                     const SearchOptions& opt,
                                     const std::vector<ProbMeasure>& extra) {
  Estimate e;
  auto view = support_view(mu, space);
  std::size_t k = view.size();
  if (k <= 1) {
    e.degenerate = true;
    e.method = "degenerate";
    e.witness = mu.weights();
    return e;
  }
  TransportProblem tp(alpha, view.space);
  const ProbMeasure& m = view.mu;

  if (smallest_cost(alpha, view.space) > 0.0) {
    // Any coupling moves eps of mass at cost >= min alpha(d) while H = O(eps^2).
    e.certified_unbounded = true;
    e.unbounded_witness = view.lift_measure(unbounded_measure(m), mu.size());
    e.certificate = "transport cost is linear and entropy quadratic near mu";
  }

  std::vector<std::vector<double>> cands;
  if (opt.dense && k <= 3) {
    cands = dense_nu_grid(m, opt.nu_step_1d, opt.nu_step_2d);
    e.method = (k == 2) ? "dense-1d" : "dense-2d";
  }
  for (const auto& nu : extra) {
    std::vector<double> w(k);
    double off = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      if (mu[i] == 0.0) off += nu[i];
    }
    if (off > 0.0) continue;
    for (std::size_t j = 0; j < k; ++j) w[j] = nu[view.index[j]];
    cands.push_back(std::move(w));
  }

  Best best;
  if (!cands.empty()) {
    best = scan_max(cands.size(), [&](std::size_t i) { return safe_ratio(tp, cands[i], m); });
    e.evaluations += cands.size();
    if (best.found) {
      e.value = best.value;
      e.witness = view.lift_measure(cands[best.index], mu.size());
    }
  }
  if (opt.dense && k <= 3) return e;

  // Projected ascent on the simplex.  The gradient of T is the row potential
  // of the optimal plan; the gradient of H is log(nu/mu) + 1.
  struct Run {
    double value = 0.0;
    std::vector<double> w;
    std::size_t evals = 0;
  };
  std::size_t starts = static_cast<std::size_t>(std::max(opt.starts, 1));
  std::vector<Run> runs(starts);
  num::parallel_for(starts, [&](std::size_t s) {
    num::Rng rng(num::Rng::mix(opt.seed, s));
    Run& run = runs[s];
    double scale = std::exp(rng.uniform(std::log(1e-3), std::log(3.0)));
    Potential g(k);
    for (auto& v : g) v = scale * rng.normal();
    auto w = simplex_project(tilt(m, g).weights(), opt.clamp);
    auto eval = [&](const std::vector<double>& x, TransportPlan* plan_out) {
      ++run.evals;
      ProbMeasure nu(x);
      double h = relative_entropy(nu, m);
      if (!(h > 0.0)) return 0.0;
      auto plan = tp.solve(nu, m);
      if (plan_out) *plan_out = plan;
      return plan.cost / h;
    };
    TransportPlan plan;
    double r = eval(w, &plan);
    run.value = r;
    run.w = w;
    double step = 0.05;
    std::vector<double> grad(k);
    for (int it = 0; it < opt.iterations && step > 1e-15; ++it) {
      if (run.value > opt.stop_above || plan.phi.size() != k) break;
      double h = relative_entropy(ProbMeasure(w), m);
      if (!(h > 0.0)) break;
      double mean = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        grad[i] = (plan.phi[i] - r * (std::log(w[i] / m[i]) + 1.0)) / h;
        mean += grad[i];
      }
      mean /= static_cast<double>(k);
      double gmax = 0.0;
      for (auto& v : grad) {
        v -= mean;
        gmax = std::max(gmax, std::abs(v));
      }
      if (!(gmax > 0.0)) break;
      bool moved = false;
      while (step > 1e-15) {
        std::vector<double> trial(k);
        for (std::size_t i = 0; i < k; ++i) trial[i] = w[i] + step * grad[i] / gmax;
        trial = simplex_project(std::move(trial), opt.clamp);
        TransportPlan tplan;
        double rt = eval(trial, &tplan);
        if (rt > r) {
          w = std::move(trial);
          r = rt;
          plan = std::move(tplan);
          step = std::min(2 * step, 0.5);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (r > run.value) {
        run.value = r;
        run.w = w;
      }
      if (!moved) break;
    }
  });
  e.method = best.found ? "multistart+candidates" : "multistart";
  e.starts = starts;
  for (const auto& run : runs) {
    e.evaluations += run.evals;
    if (run.value > e.value || e.witness.empty()) {
      e.value = run.value;
      e.witness = view.lift_measure(run.w, mu.size());
    }
  }
  return e;
}

Estimate tau_lsi_constant_estimate(const ProbMeasure& mu, const YoungFunction& alpha,
                                   double lambda, const FiniteMetricSpace& space,
                                   const SearchOptions& opt) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::domain, "tau-LSI needs lambda > 0");
  Estimate e;
  auto view = support_view(mu, space);
  std::size_t k = view.size();
  if (k <= 1) {
    e.degenerate = true;
    e.method = "degenerate";
    e.witness = Potential(mu.size(), 0.0);
    return e;
  }
  InfConvolution conv(alpha, ProductSpace(view.space, 1), lambda);
  const ProbMeasure& m = view.mu;

  double floor_cost = lambda * smallest_cost(alpha, space);
  if (floor_cost > 0.0) {
    // osc f < lambda min alpha(d) gives Q f = f: zero deficit, positive entropy.
    Potential f(mu.size(), 0.0);
    f[view.index[1]] = -0.5 * floor_cost;
    e.certified_unbounded = true;
    e.unbounded_witness = f;
    e.certificate = "f with oscillation below lambda min alpha(d) has Q f = f";
  }

  std::size_t skipped = 0;
  auto ratio = [&](const Potential& f) {
    auto t = tau_lsi_terms(m, conv, f);
    if (t.deficit < opt.deficit_floor) return std::numeric_limits<double>::quiet_NaN();
    return t.ratio();
  };

  if (opt.dense && k <= 3) {
    auto grid = dense_f_grid(k, opt);
    auto best = scan_max(grid.size(), [&](std::size_t i) { return ratio(grid[i]); });
    for (const auto& f : grid) {
      if (tau_lsi_terms(m, conv, f).deficit < opt.deficit_floor) ++skipped;
    }
    e.method = (k == 2) ? "dense-1d" : "dense-2d";
    e.evaluations = grid.size();
    e.skipped = skipped;
    if (best.found) {
      e.value = best.value;
      e.witness = view.lift_potential(grid[best.index], mu.size());
    }
    return e;
  }
  auto r = maximize_over_f(k, [&](const Potential& f) {
    double v = ratio(f);
    return std::isnan(v) ? 0.0 : v;
  }, opt);
  r.witness = view.lift_potential(r.witness, mu.size());
  r.certified_unbounded = e.certified_unbounded;
  r.unbounded_witness = e.unbounded_witness;
  r.certificate = e.certificate;
  return r;
}

Estimate mlsi_constant_estimate(const ProbMeasure& mu, const YoungFunction& alpha,
                                Sign sign, SlopeMode mode,
                                const FiniteMetricSpace& space,
                                const SearchOptions& opt) {
  Estimate e;
  if (mu.support().size() <= 1) {
    e.degenerate = true;
    e.method = "degenerate";
    e.witness = Potential(mu.size(), 0.0);
    return e;
  }
  auto ratio = [&](const Potential& f) {
    return mlsi_ratio(mu, alpha, sign, mode, space, f);
  };
  std::size_t n = space.size();
  Estimate cert;
  auto pp = alpha.power_params();
  if (sign == Sign::plus && alpha.kind() == YoungFunction::Kind::power && pp && pp->p2 > 1.0) {
    // f = 0 at one support point and -M elsewhere: the plus slope lives on the
    // low points, weighted by e^{-M}, while the entropy stays positive.
    Potential f(n, -700.0);
    f[mu.support().front()] = 0.0;
    cert.certified_unbounded = true;
    cert.unbounded_witness = std::move(f);
    cert.certificate = "one-sided slope vanishes on the maximum set of f";
  }
  auto finish = [&](Estimate e) {
    e.certified_unbounded = cert.certified_unbounded;
    e.unbounded_witness = cert.unbounded_witness;
    e.certificate = cert.certificate;
    return e;
  };
  if (opt.dense && n <= 3) {
    auto grid = dense_f_grid(n, opt);
    auto best = scan_max(grid.size(), [&](std::size_t i) { return ratio(grid[i]); });
    e.method = (n == 2) ? "dense-1d" : "dense-2d";
    e.evaluations = grid.size();
    if (best.found) {
      e.value = best.value;
      e.witness = grid[best.index];
    }
    return finish(e);
  }
  return finish(maximize_over_f(n, ratio, opt));
}

}  // namespace ineqlab
