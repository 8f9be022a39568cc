#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace ineqlab {

using Matrix = std::vector<std::vector<double>>;
using Potential = std::vector<double>;
using Adjacency = std::vector<std::vector<std::size_t>>;

struct Diagnostic {
  std::string axiom;  // shape, finite, diagonal, symmetry, positivity, triangle
  std::string message;
};

// Lists every violated metric axiom; empty means valid.
std::vector<Diagnostic> validate(const std::vector<std::string>& labels,
                                 const Matrix& dist, double rel_tol = 1e-12);

class FiniteMetricSpace {
 public:
  // Throws Error(metric_invalid) with the diagnostics joined.
  FiniteMetricSpace(std::vector<std::string> labels, const Matrix& dist);

  static FiniteMetricSpace path(std::size_t count, double spacing);
  static FiniteMetricSpace cycle(std::size_t count, double spacing);
  static FiniteMetricSpace grid1d(std::size_t count, double spacing,
                                  double origin = 0.0);

  std::size_t size() const { return n_; }
  double dist(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  Matrix matrix() const;

  bool has_coordinates() const { return !coords_.empty(); }
  const std::vector<double>& coordinates() const { return coords_; }

  // Adjacency for the neighbor slope.  Generators set the graph edges; for
  // explicit matrices it defaults to the nearest points of each point.
  const Adjacency& neighbors() const { return adj_; }
  void set_neighbors(Adjacency adj);

  FiniteMetricSpace restrict(const std::vector<std::size_t>& idx) const;
  double min_distance() const;
  double diameter() const;

 private:
  FiniteMetricSpace() = default;
  void default_neighbors();

  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> d_;
  std::vector<double> coords_;
  Adjacency adj_;
};

class ProbMeasure {
 public:
  // Weights must be non-negative and sum to 1 within 1e-12.
  explicit ProbMeasure(std::vector<double> weights);
  static ProbMeasure normalized(std::vector<double> weights);
  static ProbMeasure uniform(std::size_t n);
  static ProbMeasure dirac(std::size_t n, std::size_t i);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }
  std::vector<std::size_t> support() const;
  bool is_dirac() const { return support().size() == 1; }
  double integrate(const Potential& f) const;
  ProbMeasure restrict(const std::vector<std::size_t>& idx) const;

 private:
  std::vector<double> w_;
};

// H(nu|mu), +inf when nu is not absolutely continuous with respect to mu.
double relative_entropy(const ProbMeasure& nu, const ProbMeasure& mu);

// Ent_mu(e^f).
double exp_entropy(const ProbMeasure& mu, const Potential& f);

// e^f mu / Z.
ProbMeasure tilt(const ProbMeasure& mu, const Potential& f);

enum class Sign { plus, minus };
enum class SlopeMode { global, neighbors };

struct SlopeValue {
  double value = 0.0;
  bool isolated = false;
};

// Discrete surrogate for |grad^{+/-} f|(x_i).
SlopeValue slope(const FiniteMetricSpace& space, const Potential& f,
                 std::size_t i, Sign sign, SlopeMode mode);

class ProductSpace {
 public:
  // 1 <= n <= 3 and |base|^n <= 1e6, else Error(size_overflow).
  ProductSpace(FiniteMetricSpace base, int n);

  const FiniteMetricSpace& base() const { return base_; }
  int order() const { return n_; }
  std::size_t size() const { return size_; }

  // Tuples are enumerated with the first coordinate most significant.
  std::size_t coord(std::size_t k, int i) const;
  std::vector<std::size_t> coords(std::size_t k) const;
  std::size_t index(const std::vector<std::size_t>& c) const;
  std::size_t replace(std::size_t k, int i, std::size_t y) const;

  ProbMeasure power(const ProbMeasure& mu) const;

  // Row-major size() x size() table of sum_i cost(d(x_i, y_i)).
  std::vector<double> cost_table(const std::function<double(double)>& cost) const;

 private:
  FiniteMetricSpace base_;
  int n_;
  std::size_t size_;
  std::vector<std::size_t> stride_;
};

}  // namespace ineqlab
