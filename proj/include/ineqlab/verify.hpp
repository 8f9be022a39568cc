#pragma once

#include <string>
#include <vector>

#include "ineqlab/estimators.hpp"

namespace ineqlab {

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);
// Exit status of the command line tool for a verdict: 0, 2 or 3.
int exit_code(Verdict v);
Verdict worst(Verdict a, Verdict b);

// One falsification attack on one conclusion constant.
struct ChainStep {
  std::string label;
  double lambda = 0.0;
  double constant = 0.0;
  double best_ratio = 0.0;  // max of lhs / (constant * rhs) found
  std::vector<double> witness;
  std::size_t evaluations = 0;
  Verdict verdict = Verdict::pass;
  std::string note;
};

struct VerificationReport {
  std::string theorem;
  double premise_constant = 0.0;
  double conclusion_constant = 0.0;
  bool premise_unbounded = false;
  bool surrogate = false;
  std::size_t starts = 0;
  std::size_t evaluations = 0;
  double best_violation_ratio = 0.0;
  double tolerance = 0.0;
  std::vector<ChainStep> steps;
  std::vector<std::string> notes;
  Verdict verdict = Verdict::pass;
};

enum class Direction { t_to_tau_lsi, tau_lsi_to_t, lsi_to_t };

struct ChainParams {
  Direction direction = Direction::t_to_tau_lsi;
  // t_to_tau_lsi: lambda = fraction / C*
  std::vector<double> lambda_fractions{0.25, 0.5, 0.75};
  // tau_lsi_to_t: lambda used for the premise
  double lambda = 1.0;
  // lsi_to_t
  Sign sign = Sign::plus;
  SlopeMode slope_mode = SlopeMode::neighbors;
  double tolerance = 1e-6;
  double surrogate_tolerance = 0.05;
  double premise_constant = 0.0;  // 0 means estimate it
  SearchOptions search;
};

VerificationReport verify_chain(const ProbMeasure& mu, const YoungFunction& alpha,
                                const FiniteMetricSpace& space,
                                const ChainParams& params);

struct HolleyStroockResult {
  ProbMeasure mu_tilde{std::vector<double>{1.0}};
  double oscillation = 0.0;
  double c_tilde = 0.0;
  // inf over lambda of kappa/(lambda (1 - lambda C)^{p-1}) e^{(p-1) Osc}
  double c_tighter = 0.0;
  double lambda_star = 0.0;
  Estimate estimate;  // T-constant search on mu_tilde
  VerificationReport report;
};

HolleyStroockResult holley_stroock(const ProbMeasure& mu, const Potential& phi,
                                   const YoungFunction& alpha, double C,
                                   const FiniteMetricSpace& space,
                                   const SearchOptions& opt = {},
                                   double tolerance = 1e-9);

struct DualReport {
  double c = 0.0;
  int order = 1;
  // max over f of log int e^{c Q f} dmu^n - c mu^n(f)
  double best_log_excess = 0.0;
  Potential witness;
  std::size_t evaluations = 0;
  bool violated = false;
  double tolerance = 0.0;
};

// log int e^{c Q f} dmu^n - c mu^n(f), computed with log1p/expm1.
double dual_log_excess(const ProbMeasure& mu_n, const InfConvolution& conv,
                       double c, const Potential& f);

DualReport dual_check(const ProbMeasure& mu, const YoungFunction& alpha, double c,
                      int n, const FiniteMetricSpace& space,
                      const SearchOptions& opt = {}, double tolerance = 1e-12);

struct DualThreshold {
  double c_max = 0.0;      // 0 under a structural failure, else c_numeric
  double c_numeric = 0.0;  // largest c passing every probe of the bisection
  double c_hi = 0.0;
  int bisections = 0;
  // A non-constant f with Q f = f exists, so every c > 0 fails.
  bool structural_failure = false;
  Potential structural_witness;
  std::vector<DualReport> probes;
};

DualThreshold dual_threshold(const ProbMeasure& mu, const YoungFunction& alpha,
                             int n, const FiniteMetricSpace& space, double c_hi,
                             const SearchOptions& opt = {}, int bisections = 40,
                             double tolerance = 1e-12);

struct TensorDualParams {
  int n = 2;
  double tau = 1.0;
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;  // must be < 1
};

// Premise: int e^{tau P f} dmu^n <= a e^{b mu^n(P f)} e^{tau c |f|_inf}.
// Conclusion: mu satisfies T_alpha(1/(tau (1 - c))).
double tensor_dual_log_excess(const ProbMeasure& mu_n, const InfConvolution& conv,
                              const TensorDualParams& prm, const Potential& f);

VerificationReport tensor_dual_check(const ProbMeasure& mu, const YoungFunction& alpha,
                                     const FiniteMetricSpace& space,
                                     const TensorDualParams& prm,
                                     const SearchOptions& opt = {},
                                     double tolerance = 1e-9);

struct ConcentrationReport {
  double p = 2.0;
  double C = 0.0;
  int order = 1;
  std::size_t functions = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  // max of tail(u) / exp(-u^p / (L^p C))
  double worst_ratio = 0.0;
  Potential worst_function;
  double worst_u = 0.0;
};

// Tail of f under mu at mean + u.
double upper_tail(const ProbMeasure& mu, const Potential& f, double u);

ConcentrationReport concentration_check(const ProbMeasure& mu, double p, double C,
                                        int n, const FiniteMetricSpace& space,
                                        std::size_t random_functions = 100,
                                        std::uint64_t seed = 1,
                                        double tolerance = 1e-12);

}  // namespace ineqlab
