#pragma once

#include <cstddef>
#include <vector>

#include "ineqlab/metric_space.hpp"
#include "ineqlab/young.hpp"

namespace ineqlab {

struct ConvResult {
  Potential values;
  std::vector<std::size_t> argmin;  // optimizer y^x, smallest index on ties
  std::vector<double> achieved;     // objective recomputed at y^x
};

// Q f(x) = min_y f(y) + lambda sum_i alpha(d(x_i, y_i)) on a product space,
// and the sup-convolution P f(x) = max_y f(y) - lambda sum_i alpha(d(x_i, y_i)).
class InfConvolution {
 public:
  InfConvolution(const YoungFunction& alpha, const ProductSpace& space,
                 double lambda = 1.0);

  ConvResult q(const Potential& f) const;
  ConvResult p(const Potential& f) const;
  // Inf-convolution in coordinate i only (0-based).
  Potential partial_q(const Potential& h, int i) const;

  double cost(std::size_t x, std::size_t y) const { return table_[x * size_ + y]; }
  double coordinate_cost(std::size_t a, std::size_t b) const { return base_[a * m_ + b]; }
  const ProductSpace& space() const { return space_; }
  double lambda() const { return lambda_; }

 private:
  ProductSpace space_;
  double lambda_;
  std::size_t size_;
  std::size_t m_;
  std::vector<double> base_;   // lambda alpha(d(a,b)) on the base space
  std::vector<double> table_;  // summed over coordinates
};

ConvResult q_conv(const YoungFunction& alpha, double lambda, const Potential& f,
                  const ProductSpace& space);
ConvResult p_conv(const YoungFunction& alpha, const Potential& f,
                  const ProductSpace& space, double lambda = 1.0);
Potential partial_q(const YoungFunction& alpha, double lambda, const Potential& h,
                    const ProductSpace& space, int i);

struct LemmaBoundsOptions {
  double t = 0.5;
  double omega = 1.0;
  double ball_p = 0.0;           // exponent of the d^p ball check; 0 means p_alpha
  double ball_rel_slack = 0.0;   // multiplicative slack on the ball radius
  double tol = 1e-9;
  SlopeMode slope_mode = SlopeMode::global;
};

struct LemmaBoundsReport {
  // sum_i (tPf - Q^(i)(tPf)) <= t eps(t) sum_i alpha(d(x_i, y_i))
  double eps_max_excess = 0.0;
  std::size_t eps_violations = 0;
  // argmax of y -> f(y) - sum_i d^p(x_i, y_i) stays in the (L/omega)^q ball
  double lipschitz_L = 0.0;
  double ball_radius = 0.0;
  double ball_max_displacement = 0.0;
  std::size_t ball_violations = 0;
  // diagnostic: sum_i alpha*(t slope_i^+(Qf)) vs t xi(t) (Qf - f(y^x))
  double gradient_max_excess = 0.0;
  std::size_t gradient_exceedances = 0;
  std::size_t points = 0;

  bool exact_bounds_hold() const { return eps_violations == 0 && ball_violations == 0; }
};

// Lipschitz constant of f for the product distance (sum_i d^p)^{1/p}.
double lipschitz_constant(const Potential& f, const ProductSpace& space, double p);

LemmaBoundsReport lemma_bounds(const YoungFunction& alpha, const Potential& f,
                               const ProductSpace& space, const LemmaBoundsOptions& opt);

}  // namespace ineqlab
