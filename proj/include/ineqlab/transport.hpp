#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ineqlab/metric_space.hpp"
#include "ineqlab/young.hpp"

namespace ineqlab {

// Coupling with rows distributed as nu and columns as mu.
struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> mass;  // row-major
  double cost = 0.0;
  double row_residual = 0.0;
  double col_residual = 0.0;
  // Kantorovich potentials: phi(i) + psi(j) <= c(i,j).
  std::vector<double> phi;
  std::vector<double> psi;
  double dual_value = 0.0;
  double dual_gap = 0.0;
  double dual_infeasibility = 0.0;
  int pivots = 0;

  double at(std::size_t i, std::size_t j) const { return mass[i * cols + j]; }
};

// Transportation simplex on a dense row-major cost matrix.
TransportPlan solve_transport(const std::vector<double>& cost, std::size_t m,
                              std::size_t n, const std::vector<double>& supply,
                              const std::vector<double>& demand);

// Minimum over vertices of the transport polytope, enumerated through
// spanning-tree bases.  m, n <= 5.
double brute_force_transport(const std::vector<double>& cost, std::size_t m,
                             std::size_t n, const std::vector<double>& supply,
                             const std::vector<double>& demand);

// Caches the cost matrix alpha(d(i,j)) for repeated solves on one space.
class TransportProblem {
 public:
  TransportProblem(const YoungFunction& alpha, const FiniteMetricSpace& space);
  TransportPlan solve(const ProbMeasure& nu, const ProbMeasure& mu) const;
  double cost(std::size_t i, std::size_t j) const { return c_[i * n_ + j]; }
  const std::vector<double>& costs() const { return c_; }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> c_;
};

TransportPlan optimal_transport(const YoungFunction& alpha,
                                const FiniteMetricSpace& space,
                                const ProbMeasure& nu, const ProbMeasure& mu);
double optimal_cost(const YoungFunction& alpha, const FiniteMetricSpace& space,
                    const ProbMeasure& nu, const ProbMeasure& mu);
double brute_force_cost(const YoungFunction& alpha, const FiniteMetricSpace& space,
                        const ProbMeasure& nu, const ProbMeasure& mu);

// CSV with header i,j,mass,cost_contrib; zero cells omitted.
void write_plan_csv(const TransportPlan& plan, const std::vector<double>& cost,
                    std::ostream& out);

}  // namespace ineqlab
