#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ineqlab/metric_space.hpp"

namespace ineqlab {

// |x|^p1 for |x| <= 1, (p1/p2)|x|^p2 + 1 - p1/p2 beyond.  Any p1, p2 > 0.
double two_branch_power(double p1, double p2, double x);

struct PowerParams {
  double p1;
  double p2;
};

class YoungFunction {
 public:
  enum class Kind { power, tabulated, custom };

  YoungFunction() = default;  // x^2

  // p1 >= 2, p2 >= 1.
  static YoungFunction power(double p1, double p2);
  // Nodes x strictly increasing from 0 (prepended if absent).  Quadratic on the
  // first cell, linear between nodes, linear extension past the last node.
  static YoungFunction tabulated(std::vector<double> x, std::vector<double> y);
  static YoungFunction load_table(const std::string& path);
  static YoungFunction custom(std::function<double(double)> f, std::string name);

  YoungFunction scaled(double c) const;

  double operator()(double x) const;
  double right_derivative(double x) const;
  double left_derivative(double x) const;

  // sup_x {x|y| - alpha(x)}; +inf when unbounded.  Closed form for power kind.
  double conjugate(double y) const;
  double conjugate_numeric(double y) const;

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  std::optional<PowerParams> power_params() const;
  std::string describe() const;

 private:
  double base_value(double x) const;  // x >= 0, unscaled

  Kind kind_ = Kind::power;
  double p1_ = 2.0;
  double p2_ = 2.0;
  double scale_ = 1.0;
  std::shared_ptr<const std::vector<double>> tx_;
  std::shared_ptr<const std::vector<double>> ty_;
  std::shared_ptr<const std::function<double(double)>> fn_;
  std::string name_;
};

struct ExponentPair {
  double r_alpha;
  double p_alpha;
  double delta2_K;
};

// Closed form r, p for power kind; grid estimates otherwise.  Throws
// Error(delta2_violation) when the doubling ratio runs away.
ExponentPair exponents(const YoungFunction& alpha);
ExponentPair exponents_numeric(const YoungFunction& alpha);

double xi(const YoungFunction& alpha, double x);
double xi_numeric(const YoungFunction& alpha, double x);
// (p-1) max(x^{1/(p-1)}, x^{1/(r-1)}), with x^inf = 0 or inf.
double xi_upper_bound(double r, double p, double x);

double epsilon(double p, double t);

FiniteMetricSpace change_metric(const YoungFunction& alpha,
                                const FiniteMetricSpace& space);

double kappa(double p);
double kappa_tilde(double p);
// inf over lambda of 1/(lambda (1 - lambda C)^{p-1}) divided by C.
double c_tilde_factor(double p);
double a_p(double p, double omega);

class ConstantBundle {
 public:
  YoungFunction alpha;
  ExponentPair exps{};
  double A_in = 0.0;
  double lambda_in = 0.0;
  double t_alpha = 0.0;
  double c_plus = 0.0;
  double c_minus = 0.0;
  double t_A = 0.0;
  double B_minus = 0.0;
  double kappa = 0.0;
  double kappa_tilde = 0.0;
  double c_tau_lsi_to_t = 0.0;
  double C_tilde_factor = 0.0;
  double a_p_omega1 = 0.0;
  double a_p_omegap = 0.0;
  double c_concentration_omega1 = 0.0;
  double c_concentration_omegap = 0.0;

  double xi(double x) const;
  double epsilon(double t) const;
  // exp int_0^t A xi/(u(1 - A xi)) du, for t < t_A.
  double herbst_plus(double t) const;
  // exp(-int_0^t A xi/(u(1 + A xi)) du).
  double herbst_minus(double t) const;
  // (1/t) exp int_0^t A xi/(u(1 + A xi)) du.
  double b_minus_map(double t) const;
};

ConstantBundle implication_constants(const YoungFunction& alpha, double A,
                                     double lambda);

}  // namespace ineqlab
