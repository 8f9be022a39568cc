#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ineqlab/infconv.hpp"
#include "ineqlab/metric_space.hpp"
#include "ineqlab/numerics.hpp"
#include "ineqlab/transport.hpp"
#include "ineqlab/young.hpp"

namespace ineqlab {

// Budgets shared by all sup-searches.  Dense scans are used whenever the
// support has at most three points and dense is set.
struct SearchOptions {
  std::uint64_t seed = 1;
  int starts = 50;
  int iterations = 500;
  double fd_step = 1e-6;
  double clamp = 1e-9;       // minimum mass kept by the simplex ascent
  double f_box = 30.0;       // f in [-f_box, 0] after gauge fixing
  bool dense = true;
  double nu_step_1d = 1e-4;  // two-point nu grid, anchored at mu
  double nu_step_2d = 2e-3;  // three-point nu grid, anchored at mu
  double f_range_1d = 20.0;
  double f_step_1d = 1e-3;
  double f_range_2d = 20.0;
  double f_step_2d = 0.1;
  double deficit_floor = 1e-14;  // tau-LSI denominators below this are skipped
  double stop_above = num::inf;  // stop once a ratio exceeds this
};

// Best ratio found by a sup-search: a lower bound on the best constant.
struct Estimate {
  double value = 0.0;
  std::vector<double> witness;  // nu weights or f, indexed on the full space
  std::size_t evaluations = 0;
  std::size_t starts = 0;
  std::size_t skipped = 0;
  std::string method;  // dense-1d, dense-2d, multistart, degenerate
  bool degenerate = false;
  // The true constant is +inf; unbounded_witness exhibits why.
  bool certified_unbounded = false;
  std::vector<double> unbounded_witness;
  std::string certificate;
};

// mu and space restricted to supp(mu).  Searches run on the restriction:
// nu must be << mu, and f off the support only lowers Q f there.
struct SupportView {
  std::vector<std::size_t> index;
  FiniteMetricSpace space;
  ProbMeasure mu;

  std::size_t size() const { return index.size(); }
  // Zero mass off the support.
  std::vector<double> lift_measure(const std::vector<double>& w, std::size_t full) const;
  // Off-support entries set to 1 + max f so they never attain Q f.
  Potential lift_potential(const Potential& f, std::size_t full) const;
};

SupportView support_view(const ProbMeasure& mu, const FiniteMetricSpace& space);

// min over x != y of alpha(d(x, y)); +inf on a single point.
double smallest_cost(const YoungFunction& alpha, const FiniteMetricSpace& space);

// T_alpha(nu, mu) / H(nu|mu), 0 when nu = mu.
double transport_ratio(const TransportProblem& tp, const ProbMeasure& nu,
                       const ProbMeasure& mu);

struct TauLsiTerms {
  double entropy = 0.0;  // Ent_mu(e^f)
  double deficit = 0.0;  // int (f - Q f) e^f dmu
  double ratio() const;  // 0 for 0/0, +inf for e/0
};

TauLsiTerms tau_lsi_terms(const ProbMeasure& mu, const InfConvolution& conv,
                          const Potential& f);
double tau_lsi_ratio(const ProbMeasure& mu, const YoungFunction& alpha,
                     double lambda, const FiniteMetricSpace& space,
                     const Potential& f);

// Ent_mu(e^f) / int alpha*(|grad^{+/-} f|) e^f dmu under the discrete slope.
double mlsi_ratio(const ProbMeasure& mu, const YoungFunction& alpha, Sign sign,
                  SlopeMode mode, const FiniteMetricSpace& space,
                  const Potential& f);

// Sup over nu of T/H.  extra lists additional candidate measures to evaluate.
Estimate transport_constant_estimate(const ProbMeasure& mu,
                                     const YoungFunction& alpha,
                                     const FiniteMetricSpace& space,
                                     const SearchOptions& opt = {},
                                     const std::vector<ProbMeasure>& extra = {});

Estimate tau_lsi_constant_estimate(const ProbMeasure& mu, const YoungFunction& alpha,
                                   double lambda, const FiniteMetricSpace& space,
                                   const SearchOptions& opt = {});

Estimate mlsi_constant_estimate(const ProbMeasure& mu, const YoungFunction& alpha,
                                Sign sign, SlopeMode mode,
                                const FiniteMetricSpace& space,
                                const SearchOptions& opt = {});

// Dense gauge-fixed f grid on k points: (0, u) for k = 2, the faces
// {f_j = 0, others in [-range, 0]} for k = 3.
std::vector<Potential> dense_f_grid(std::size_t k, const SearchOptions& opt);

// Generic gauge-fixed ascent of ratio(f) over the box, multistart with
// central differences and step halving.
Estimate maximize_over_f(std::size_t size,
                         const std::function<double(const Potential&)>& ratio,
                         const SearchOptions& opt);

}  // namespace ineqlab
