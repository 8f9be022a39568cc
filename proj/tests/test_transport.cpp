#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ineqlab/numerics.hpp"
#include "ineqlab/transport.hpp"

using namespace ineqlab;

namespace {

FiniteMetricSpace random_space(num::Rng& rng, std::size_t n) {
  // points in the plane give a valid metric
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.uniform(0, 2);
    y[i] = rng.uniform(0, 2);
  }
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) d[i][j] = std::hypot(x[i] - x[j], y[i] - y[j]) + 0.05;
    }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("q" + std::to_string(i));
  return FiniteMetricSpace(labels, d);
}

ProbMeasure random_measure(num::Rng& rng, std::size_t n, bool allow_zero) {
  std::vector<double> w(n);
  for (auto& v : w) v = -std::log(1.0 - rng.uniform());
  if (allow_zero && rng.uniform() < 0.3) w[rng.index(n)] = 0.0;
  if (allow_zero && rng.uniform() < 0.1) std::fill(w.begin(), w.end(), 0.0), w[0] = 1.0;
  return ProbMeasure::normalized(w);
}

}  // namespace

TEST_CASE("transport examples") {
  auto sq = YoungFunction::power(2, 2);
  FiniteMetricSpace two({"a", "b"}, {{0, 3}, {3, 0}});
  auto u = ProbMeasure::uniform(2);
  auto plan = optimal_transport(sq, two, u, u);
  CHECK(plan.cost == 0.0);
  CHECK(plan.at(0, 0) == doctest::Approx(0.5));
  CHECK(plan.at(1, 1) == doctest::Approx(0.5));
  CHECK(optimal_cost(sq, two, ProbMeasure::dirac(2, 0), ProbMeasure::dirac(2, 1)) == 9.0);
  CHECK(brute_force_cost(sq, two, u, u) == 0.0);
  // mass |nu(a) - mu(a)| crosses the single edge
  num::Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    double s = rng.uniform(), t = rng.uniform();
    ProbMeasure nu({s, 1 - s}), mu({t, 1 - t});
    CHECK(brute_force_cost(sq, two, nu, mu) == doctest::Approx(9 * std::abs(s - t)).epsilon(1e-12));
    CHECK(optimal_cost(sq, two, nu, mu) == doctest::Approx(9 * std::abs(s - t)).epsilon(1e-12));
  }
}

TEST_CASE("simplex matches vertex enumeration") {
  num::Rng rng(42);
  std::vector<YoungFunction> alphas = {YoungFunction::power(2, 2), YoungFunction::power(2, 1),
                                       YoungFunction::power(3, 2)};
  for (int k = 0; k < 310; ++k) {
    std::size_t n = k < 300 ? 2 + rng.index(3) : 5;
    auto space = random_space(rng, n);
    auto nu = random_measure(rng, n, true);
    auto mu = random_measure(rng, n, true);
    const auto& a = alphas[rng.index(3)];
    auto plan = optimal_transport(a, space, nu, mu);
    double bf = brute_force_cost(a, space, nu, mu);
    CHECK(std::abs(plan.cost - bf) <= 1e-9);
    CHECK(plan.dual_gap <= 1e-9);
    CHECK(plan.dual_infeasibility <= 1e-9);
    CHECK(plan.row_residual <= 1e-9);
    CHECK(plan.col_residual <= 1e-9);
  }
}

TEST_CASE("transport cost properties") {
  num::Rng rng(8);
  auto lo = YoungFunction::power(2, 1);  // below x^2 pointwise
  auto hi = YoungFunction::power(2, 2);
  for (int k = 0; k < 100; ++k) {
    std::size_t n = 2 + rng.index(8);
    auto space = random_space(rng, n);
    auto nu = random_measure(rng, n, false);
    auto mu = random_measure(rng, n, false);
    double t = optimal_cost(hi, space, nu, mu);
    CHECK(t > 0.0);
    CHECK(optimal_cost(hi, space, mu, nu) == doctest::Approx(t).epsilon(1e-10));
    CHECK(optimal_cost(lo, space, nu, mu) <= t + 1e-12);
    CHECK(optimal_cost(hi, space, nu, nu) <= 1e-15);
    // scaling the cost scales the optimum
    CHECK(optimal_cost(hi.scaled(2.5), space, nu, mu) == doctest::Approx(2.5 * t).epsilon(1e-10));
  }
}

TEST_CASE("larger instances carry a dual certificate") {
  num::Rng rng(13);
  for (int k = 0; k < 10; ++k) {
    std::size_t n = 20 + rng.index(30);
    auto space = random_space(rng, n);
    auto plan = optimal_transport(YoungFunction::power(3, 2), space,
                                  random_measure(rng, n, true), random_measure(rng, n, true));
    CHECK(plan.dual_gap <= 1e-9);
    CHECK(plan.dual_infeasibility <= 1e-9);
  }
  // on a line with convex cost the monotone coupling is optimal
  auto grid = FiniteMetricSpace::grid1d(201, 0.05, -5.0);
  auto nu = random_measure(rng, 201, false);
  auto mu = random_measure(rng, 201, false);
  auto plan = optimal_transport(YoungFunction::power(2, 2), grid, nu, mu);
  CHECK(plan.dual_gap <= 1e-9);
  CHECK(plan.dual_infeasibility <= 1e-9);
}

TEST_CASE("plan csv export") {
  FiniteMetricSpace two({"a", "b"}, {{0, 2}, {2, 0}});
  TransportProblem p(YoungFunction::power(2, 2), two);
  auto plan = p.solve(ProbMeasure({1.0, 0.0}), ProbMeasure({0.5, 0.5}));
  std::ostringstream os;
  write_plan_csv(plan, p.costs(), os);
  CHECK(os.str() == "i,j,mass,cost_contrib\n0,0,0.5,0\n0,1,0.5,2\n");
}
