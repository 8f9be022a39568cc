#include "ineqlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ineqlab/error.hpp"

namespace ineqlab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 2;
    case Verdict::inconclusive: return 3;
  }
  return 1;
}

Verdict worst(Verdict a, Verdict b) {
  auto rank = [](Verdict v) {
    return v == Verdict::fail ? 2 : (v == Verdict::inconclusive ? 1 : 0);
  };
  return rank(a) >= rank(b) ? a : b;
}

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

// Small bumps with Q f = f (or P f = f): one support point lowered by half
// the smallest cost.  These seed every search of a dual inequality.
std::vector<Potential> flat_bumps(const ProbMeasure& mu_n, double floor_cost) {
  std::vector<Potential> out;
  if (!(floor_cost > 0.0) || std::isinf(floor_cost)) return out;
  for (auto i : mu_n.support()) {
    Potential f(mu_n.size(), 0.0);
    f[i] = -0.5 * floor_cost;
    out.push_back(f);
  }
  return out;
}

struct Search {
  double value = -num::inf;
  Potential witness;
  std::size_t evaluations = 0;
};

// Max of objective over a dense grid (<= 3 points) or a multistart ascent,
// plus seeded candidates.
Search search_f(std::size_t size, const std::function<double(const Potential&)>& obj,
                const SearchOptions& opt, const std::vector<Potential>& seeds) {
  Search s;
  auto consider = [&](const Potential& f) {
    ++s.evaluations;
    double v = obj(f);
    if (v > s.value) {
      s.value = v;
      s.witness = f;
    }
  };
  for (const auto& f : seeds) consider(f);
  if (opt.dense && size <= 3) {
    for (const auto& f : dense_f_grid(size, opt)) consider(f);
    return s;
  }
  auto e = maximize_over_f(size, obj, opt);
  s.evaluations += e.evaluations;
  if (!e.witness.empty()) {
    double v = obj(e.witness);
    if (v > s.value) {
      s.value = v;
      s.witness = e.witness;
    }
  }
  return s;
}


VerificationReport vacuous(const std::string& theorem, double tol) {
  VerificationReport r;
  r.theorem = theorem;
  r.tolerance = tol;
  r.notes.push_back("mu is a Dirac mass: every nu << mu equals mu, all constants are 0");
  return r;
}

double kappa_bound(const YoungFunction& alpha, double A, double lambda) {
  double p = exponents(alpha).p_alpha;
  return kappa(p) * std::pow(std::max(A, 1.0), p - 1.0) / lambda;
}

struct Attack {
  double best_ratio = 0.0;
  Potential witness;
  std::size_t violations = 0;
  std::size_t intact = 0;  // violations whose tilt satisfies the premise
};

VerificationReport t_to_tau_lsi(const ProbMeasure& mu, const FiniteMetricSpace& space,
                                const YoungFunction& alpha, const ChainParams& prm) {
  VerificationReport r;
  r.theorem = "T=>tauLSI";
  r.tolerance = prm.tolerance;
  const auto& opt = prm.search;
  auto view = support_view(mu, space);
  const auto& m = view.mu;
  std::size_t k = view.size();
  TransportProblem tp(alpha, view.space);
  bool dense = opt.dense && k <= 3;

  // On dense spaces the premise scan also contains the tilt e^f mu / Z of
  // every attacked f, which is the only measure the implication uses.
  std::vector<Potential> attack;
  if (dense) attack = dense_f_grid(k, opt);

  double C = prm.premise_constant;
  if (C > 0.0) {
    r.premise_unbounded = smallest_cost(alpha, view.space) > 0.0;
  } else {
    std::vector<ProbMeasure> tilts;
    tilts.reserve(attack.size());
    for (const auto& f : attack) {
      tilts.emplace_back(view.lift_measure(tilt(m, f).weights(), mu.size()));
    }
    auto est = transport_constant_estimate(mu, alpha, space, opt, tilts);
    C = est.value;
    r.premise_unbounded = est.certified_unbounded;
    r.starts += est.starts;
    r.evaluations += est.evaluations;
  }
  r.premise_constant = C;
  if (r.premise_unbounded) {
    r.notes.push_back("the best T constant is +inf here; the chain runs at the scan-certified C* = " +
                      fmt(C));
  }
  if (!(C > 0.0)) {
    r.verdict = Verdict::inconclusive;
    r.notes.push_back("no positive premise constant");
    return r;
  }

  for (double frac : prm.lambda_fractions) {
    ChainStep st;
    st.lambda = frac / C;
    st.constant = 1.0 / (1.0 - frac);
    st.label = "lambda C* = " + fmt(frac);
    InfConvolution conv(alpha, ProductSpace(view.space, 1), st.lambda);
    auto violation = [&](const Potential& f) {
      auto t = tau_lsi_terms(m, conv, f);
      if (!(t.entropy > 0.0)) return 0.0;
      if (!(t.deficit > 0.0)) return num::inf;
      return t.entropy / (st.constant * t.deficit);
    };
    std::vector<Potential> cands = attack;
    if (!dense) {
      for (auto& f : flat_bumps(m, st.lambda * smallest_cost(alpha, view.space))) cands.push_back(f);
      auto s = search_f(k, [&](const Potential& f) { return std::min(violation(f), 1e300); }, opt, {});
      st.evaluations += s.evaluations;
      if (!s.witness.empty()) cands.push_back(s.witness);
    }
    Attack a;
    for (const auto& f : cands) {
      double v = violation(f);
      ++st.evaluations;
      if (a.witness.empty() || v > a.best_ratio) {
        a.best_ratio = v;
        a.witness = f;
      }
      if (v > 1.0 + prm.tolerance) {
        ++a.violations;
        double pr = transport_ratio(tp, tilt(m, f), m);
        if (pr <= C * (1.0 + prm.tolerance)) ++a.intact;
      }
    }
    st.best_ratio = a.best_ratio;
    st.witness = view.lift_potential(a.witness, mu.size());
    if (a.violations == 0) {
      st.verdict = Verdict::pass;
    } else if (a.intact > 0) {
      st.verdict = Verdict::fail;
      st.note = std::to_string(a.intact) + " violations with the premise intact at the tilt";
    } else {
      st.verdict = Verdict::inconclusive;
      st.note = std::to_string(a.violations) +
                " violations, each tilt e^f mu / Z breaks T(C*): premise falsified";
    }
    r.evaluations += st.evaluations;
    r.best_violation_ratio = std::max(r.best_violation_ratio, st.best_ratio);
    r.conclusion_constant = std::max(r.conclusion_constant, st.constant);
    r.verdict = worst(r.verdict, st.verdict);
    r.steps.push_back(std::move(st));
  }
  return r;
}

VerificationReport tau_lsi_to_t(const ProbMeasure& mu, const FiniteMetricSpace& space,
                                const YoungFunction& alpha, const ChainParams& prm) {
  VerificationReport r;
  r.theorem = "tauLSI=>T";
  r.tolerance = prm.tolerance;
  const auto& opt = prm.search;
  double lam = prm.lambda;
  double A = prm.premise_constant;
  if (A > 0.0) {
    r.premise_unbounded = lam * smallest_cost(alpha, support_view(mu, space).space) > 0.0;
  } else {
    auto est = tau_lsi_constant_estimate(mu, alpha, lam, space, opt);
    A = est.value;
    r.premise_unbounded = est.certified_unbounded;
    r.starts += est.starts;
    r.evaluations += est.evaluations;
  }
  r.premise_constant = A;
  double C = kappa_bound(alpha, A, lam);

  auto tce = transport_constant_estimate(mu, alpha, space, opt);
  r.starts += tce.starts;
  r.evaluations += tce.evaluations;
  ChainStep st;
  st.label = r.premise_unbounded ? "scan-level A (premise false for every finite A)" : "A*";
  st.lambda = lam;
  st.constant = C;
  st.best_ratio = tce.value / C;
  st.witness = tce.witness;
  st.evaluations = tce.evaluations;
  bool ok = st.best_ratio <= 1.0 + prm.tolerance;
  r.best_violation_ratio = st.best_ratio;
  if (r.premise_unbounded) {
    r.conclusion_constant = num::inf;
    st.verdict = ok ? Verdict::pass : Verdict::inconclusive;
    r.verdict = Verdict::inconclusive;
    r.notes.push_back(
        "no finite A satisfies tau-LSI: an f with oscillation below lambda min alpha(d) has "
        "Q f = f, zero deficit and positive entropy");
  } else {
    r.conclusion_constant = C;
    st.verdict = ok ? Verdict::pass : Verdict::fail;
    r.verdict = st.verdict;
  }
  r.steps.push_back(std::move(st));
  return r;
}

VerificationReport lsi_to_t(const ProbMeasure& mu, const FiniteMetricSpace& space,
                            const YoungFunction& alpha, const ChainParams& prm) {
  VerificationReport r;
  r.theorem = prm.sign == Sign::plus ? "LSI+=>T" : "LSI-=>T";
  r.surrogate = true;
  r.tolerance = prm.surrogate_tolerance;
  const auto& opt = prm.search;
  double A = prm.premise_constant;
  if (!(A > 0.0)) {
    auto est = mlsi_constant_estimate(mu, alpha, prm.sign, prm.slope_mode, space, opt);
    A = est.value;
    r.starts += est.starts;
    r.evaluations += est.evaluations;
  }
  r.premise_constant = A;
  r.notes.push_back("premise estimated under the discrete slope surrogate");
  if (!(A > 0.0) || std::isinf(A)) {
    r.verdict = Verdict::inconclusive;
    r.notes.push_back("surrogate constant is not a positive finite number");
    return r;
  }
  std::vector<std::pair<std::string, double>> consts;
  try {
    auto b = implication_constants(alpha, A, 1.0);
    if (prm.sign == Sign::plus) {
      consts.emplace_back("C+", b.c_plus);
      if (b.t_A > 0.0 && std::isfinite(b.t_A)) consts.emplace_back("1/t_A", 1.0 / b.t_A);
    } else {
      consts.emplace_back("C-", b.c_minus);
      if (std::isfinite(b.B_minus)) consts.emplace_back("B-", b.B_minus);
    }
  } catch (const Error& e) {
    r.notes.push_back(std::string("constant calculator: ") + e.what());
  }
  if (consts.empty()) {
    r.verdict = Verdict::inconclusive;
    return r;
  }
  double cmax = 0.0;
  for (const auto& c : consts) cmax = std::max(cmax, c.second);
  SearchOptions topt = opt;
  topt.stop_above = cmax * (1.0 + prm.surrogate_tolerance);
  auto tce = transport_constant_estimate(mu, alpha, space, topt);
  r.starts += tce.starts;
  r.evaluations += tce.evaluations;
  if (tce.certified_unbounded) {
    r.notes.push_back("the best T constant is +inf here: " + tce.certificate);
  }
  for (const auto& c : consts) {
    ChainStep st;
    st.label = c.first;
    st.constant = c.second;
    st.best_ratio = tce.value / c.second;
    st.witness = tce.witness;
    st.evaluations = tce.evaluations;
    if (st.best_ratio <= 1.0 + prm.surrogate_tolerance) {
      st.verdict = Verdict::pass;
    } else {
      st.verdict = Verdict::inconclusive;
      st.note = "violation under the surrogate; capped at INCONCLUSIVE";
    }
    r.conclusion_constant = std::max(r.conclusion_constant, c.second);
    r.best_violation_ratio = std::max(r.best_violation_ratio, st.best_ratio);
    r.verdict = worst(r.verdict, st.verdict);
    r.steps.push_back(std::move(st));
  }
  return r;
}

double log_mean_exp(const ProbMeasure& mu, const Potential& g) {
  double m = -num::inf;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) m = std::max(m, g[i]);
  }
  if (m < 50.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu[i] > 0.0) s += mu[i] * std::expm1(g[i]);
    }
    return std::log1p(s);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) s += mu[i] * std::exp(g[i] - m);
  }
  return m + std::log(s);
}

std::vector<double> product_distances(const ProductSpace& ps, std::size_t z, double p) {
  std::vector<double> out(ps.size());
  const auto& base = ps.base();
  for (std::size_t x = 0; x < ps.size(); ++x) {
    double s = 0.0;
    for (int i = 0; i < ps.order(); ++i) {
      s += std::pow(base.dist(ps.coord(x, i), ps.coord(z, i)), p);
    }
    out[x] = std::pow(s, 1.0 / p);
  }
  return out;
}

}  // namespace

VerificationReport verify_chain(const ProbMeasure& mu, const YoungFunction& alpha,
                                const FiniteMetricSpace& space,
                                const ChainParams& params) {
  const char* names[] = {"T=>tauLSI", "tauLSI=>T", "LSI=>T"};
  int idx = static_cast<int>(params.direction);
  if (mu.size() != space.size()) throw Error(ErrorCode::domain, "measure and space sizes differ");
  if (mu.is_dirac()) {
    auto r = vacuous(names[idx], params.tolerance);
    r.surrogate = params.direction == Direction::lsi_to_t;
    return r;
  }
  switch (params.direction) {
    case Direction::t_to_tau_lsi: return t_to_tau_lsi(mu, space, alpha, params);
    case Direction::tau_lsi_to_t: return tau_lsi_to_t(mu, space, alpha, params);
    case Direction::lsi_to_t: return lsi_to_t(mu, space, alpha, params);
  }
  throw Error(ErrorCode::domain, "unknown chain direction");
}

HolleyStroockResult holley_stroock(const ProbMeasure& mu, const Potential& phi,
                                   const YoungFunction& alpha, double C,
                                   const FiniteMetricSpace& space,
                                   const SearchOptions& opt, double tolerance) {
  if (phi.size() != mu.size()) throw Error(ErrorCode::domain, "phi and mu sizes differ");
  if (!(C > 0.0)) throw Error(ErrorCode::domain, "Holley-Stroock needs C > 0");
  HolleyStroockResult out;
  auto [lo, hi] = std::minmax_element(phi.begin(), phi.end());
  out.oscillation = *hi - *lo;
  out.mu_tilde = out.oscillation == 0.0 ? mu : tilt(mu, phi);
  double p = exponents(alpha).p_alpha;
  double growth = std::exp((p - 1.0) * out.oscillation);
  out.c_tilde = kappa_tilde(p) * C * growth;
  auto best = num::golden_max(
      [&](double s) { return -1.0 / (s * std::pow(1.0 - s, p - 1.0)); }, 1e-9, 1.0 - 1e-9, 1e-12);
  out.lambda_star = best.x / C;
  out.c_tighter = kappa(p) * C * (-best.value) * growth;
  out.estimate = transport_constant_estimate(out.mu_tilde, alpha, space, opt);

  auto& r = out.report;
  r.theorem = "Holley-Stroock";
  r.premise_constant = C;
  r.conclusion_constant = std::min(out.c_tilde, out.c_tighter);
  r.tolerance = tolerance;
  r.starts = out.estimate.starts;
  r.evaluations = out.estimate.evaluations;
  for (auto [label, c] : {std::pair<const char*, double>{"C~", out.c_tilde},
                          std::pair<const char*, double>{"inf over lambda", out.c_tighter}}) {
    ChainStep st;
    st.label = label;
    st.constant = c;
    st.lambda = out.lambda_star;
    st.best_ratio = out.estimate.value / c;
    st.witness = out.estimate.witness;
    st.evaluations = out.estimate.evaluations;
    st.verdict = st.best_ratio <= 1.0 + tolerance ? Verdict::pass : Verdict::fail;
    r.best_violation_ratio = std::max(r.best_violation_ratio, st.best_ratio);
    r.verdict = worst(r.verdict, st.verdict);
    r.steps.push_back(std::move(st));
  }
  return out;
}

double dual_log_excess(const ProbMeasure& mu_n, const InfConvolution& conv, double c,
                       const Potential& f) {
  auto q = conv.q(f).values;
  double mean = mu_n.integrate(f);
  Potential g(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) g[i] = c * (q[i] - mean);
  return log_mean_exp(mu_n, g);
}

DualReport dual_check(const ProbMeasure& mu, const YoungFunction& alpha, double c, int n,
                      const FiniteMetricSpace& space, const SearchOptions& opt,
                      double tolerance) {
  if (!(c > 0.0)) throw Error(ErrorCode::domain, "dual check needs c > 0");
  ProductSpace ps(space, n);
  InfConvolution conv(alpha, ps, 1.0);
  auto mu_n = ps.power(mu);
  auto seeds = flat_bumps(mu_n, smallest_cost(alpha, space));
  auto s = search_f(ps.size(), [&](const Potential& f) { return dual_log_excess(mu_n, conv, c, f); },
                    opt, seeds);
  DualReport r;
  r.c = c;
  r.order = n;
  r.best_log_excess = s.value;
  r.witness = s.witness;
  r.evaluations = s.evaluations;
  r.tolerance = tolerance;
  r.violated = s.value > tolerance;
  return r;
}

DualThreshold dual_threshold(const ProbMeasure& mu, const YoungFunction& alpha, int n,
                             const FiniteMetricSpace& space, double c_hi,
                             const SearchOptions& opt, int bisections, double tolerance) {
  DualThreshold t;
  t.c_hi = c_hi;
  ProductSpace ps(space, n);
  auto mu_n = ps.power(mu);
  auto bumps = flat_bumps(mu_n, smallest_cost(alpha, space));
  if (mu_n.support().size() >= 2 && !bumps.empty()) {
    // Q f = f on the bump, so the excess is log mu(e^{c f}) - c mu(f) > 0.
    t.structural_failure = true;
    t.structural_witness = bumps.front();
  }
  auto probe = [&](double c) {
    auto r = dual_check(mu, alpha, c, n, space, opt, tolerance);
    t.probes.push_back(r);
    return !r.violated;
  };
  if (probe(c_hi)) {
    t.c_numeric = c_hi;
  } else {
    double lo = 0.0, hi = c_hi;
    for (int b = 0; b < bisections; ++b) {
      double mid = 0.5 * (lo + hi);
      ++t.bisections;
      if (probe(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    t.c_numeric = lo;
  }
  t.c_max = t.structural_failure ? 0.0 : t.c_numeric;
  return t;
}

double tensor_dual_log_excess(const ProbMeasure& mu_n, const InfConvolution& conv,
                              const TensorDualParams& prm, const Potential& f) {
  auto pf = conv.p(f).values;
  Potential g(pf.size());
  for (std::size_t i = 0; i < pf.size(); ++i) g[i] = prm.tau * pf[i];
  double sup = 0.0;
  for (double v : f) sup = std::max(sup, std::abs(v));
  double lhs = log_mean_exp(mu_n, g);
  double rhs = std::log(prm.a) + prm.b * mu_n.integrate(pf) + prm.tau * prm.c * sup;
  return lhs - rhs;
}

VerificationReport tensor_dual_check(const ProbMeasure& mu, const YoungFunction& alpha,
                                     const FiniteMetricSpace& space,
                                     const TensorDualParams& prm, const SearchOptions& opt,
                                     double tolerance) {
  if (!(prm.tau > 0.0) || !(prm.a > 0.0) || !(prm.c < 1.0) || prm.c < 0.0) {
    throw Error(ErrorCode::domain, "tensor dual needs tau > 0, a > 0, 0 <= c < 1");
  }
  ProductSpace ps(space, prm.n);
  InfConvolution conv(alpha, ps, 1.0);
  auto mu_n = ps.power(mu);
  auto seeds = flat_bumps(mu_n, smallest_cost(alpha, space));
  auto s = search_f(ps.size(),
                    [&](const Potential& f) { return tensor_dual_log_excess(mu_n, conv, prm, f); },
                    opt, seeds);
  VerificationReport r;
  r.theorem = "tensor-dual=>T";
  r.tolerance = tolerance;
  r.evaluations = s.evaluations;
  ChainStep pre;
  pre.label = "premise at n = " + std::to_string(prm.n);
  pre.constant = prm.a;
  pre.best_ratio = std::exp(s.value);
  pre.witness = s.witness;
  pre.evaluations = s.evaluations;
  bool premise_ok = s.value <= tolerance;
  pre.verdict = premise_ok ? Verdict::pass : Verdict::inconclusive;
  if (!premise_ok) pre.note = "premise violated by the witness";
  r.premise_constant = prm.tau;
  r.conclusion_constant = 1.0 / (prm.tau * (1.0 - prm.c));

  auto tce = transport_constant_estimate(mu, alpha, space, opt);
  ChainStep con;
  con.label = "T(1/(tau(1-c)))";
  con.constant = r.conclusion_constant;
  con.best_ratio = tce.value / con.constant;
  con.witness = tce.witness;
  con.evaluations = tce.evaluations;
  con.verdict = con.best_ratio <= 1.0 + tolerance ? Verdict::pass : Verdict::fail;
  r.evaluations += tce.evaluations;
  r.starts = tce.starts;
  r.best_violation_ratio = std::max(pre.best_ratio, con.best_ratio);
  if (!premise_ok) {
    r.verdict = Verdict::inconclusive;
    r.notes.push_back("premise fails for these (tau, a, b, c); the implication is not exercised");
    if (con.verdict == Verdict::fail) con.verdict = Verdict::inconclusive;
  } else {
    r.verdict = con.verdict;
  }
  r.steps.push_back(std::move(pre));
  r.steps.push_back(std::move(con));
  return r;
}

double upper_tail(const ProbMeasure& mu, const Potential& f, double u) {
  double mean = mu.integrate(f);
  double thr = mean + u;
  double slack = 1e-12 * (1.0 + std::abs(mean) + std::abs(u));
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0 && f[i] >= thr - slack) s += mu[i];
  }
  return s;
}

ConcentrationReport concentration_check(const ProbMeasure& mu, double p, double C, int n,
                                        const FiniteMetricSpace& space,
                                        std::size_t random_functions, std::uint64_t seed,
                                        double tolerance) {
  if (!(p >= 1.0) || !(C > 0.0)) throw Error(ErrorCode::domain, "concentration needs p >= 1, C > 0");
  ProductSpace ps(space, n);
  auto mu_n = ps.power(mu);
  std::size_t N = ps.size();
  std::vector<std::vector<double>> dz(N);
  for (std::size_t z = 0; z < N; ++z) dz[z] = product_distances(ps, z, p);

  std::vector<Potential> battery;
  for (std::size_t z = 0; z < N; ++z) {
    battery.push_back(dz[z]);
    Potential neg = dz[z];
    for (auto& v : neg) v = -v;
    battery.push_back(neg);
  }
  num::Rng rng(seed);
  for (std::size_t k = 0; k < random_functions; ++k) {
    Potential f(N, rng.uniform(-1, 1));
    std::size_t terms = 1 + rng.index(3);
    for (std::size_t t = 0; t < terms; ++t) {
      double w = rng.uniform(-1, 1);
      const auto& d = dz[rng.index(N)];
      for (std::size_t x = 0; x < N; ++x) f[x] += w * d[x];
    }
    battery.push_back(f);
  }

  ConcentrationReport r;
  r.p = p;
  r.C = C;
  r.order = n;
  for (const auto& f : battery) {
    double L = lipschitz_constant(f, ps, p);
    if (!(L > 0.0)) continue;
    ++r.functions;
    double mean = mu_n.integrate(f);
    double top = *std::max_element(f.begin(), f.end()) - mean;
    std::vector<double> us{0.0};
    for (double v : f) {
      if (v - mean > 0.0) us.push_back(v - mean);
    }
    for (int g = 1; g <= 32; ++g) us.push_back(top * g / 32.0);
    for (double u : us) {
      if (u < 0.0) continue;
      double tail = upper_tail(mu_n, f, u);
      double bound = std::exp(-std::pow(u, p) / (std::pow(L, p) * C));
      ++r.checks;
      double ratio = bound > 0.0 ? tail / bound : (tail > 0.0 ? num::inf : 0.0);
      if (tail > bound * (1.0 + tolerance)) ++r.violations;
      if (ratio > r.worst_ratio) {
        r.worst_ratio = ratio;
        r.worst_function = f;
        r.worst_u = u;
      }
    }
  }
  return r;
}

}  // namespace ineqlab
