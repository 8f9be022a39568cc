#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

// Small numerical helpers shared by the modules.
namespace ineqlab::num {

inline constexpr double inf = std::numeric_limits<double>::infinity();

struct Extremum {
  double x;
  double value;
};

// Golden-section maximization of a unimodal function on [a, b].
Extremum golden_max(const std::function<double(double)>& f, double a, double b,
                    double rel_tol = 1e-10, int max_iter = 400);

// Log-spaced grid with n points from lo to hi (inclusive).
std::vector<double> log_grid(double lo, double hi, int n);

// Sup of f over a log grid, refined by golden section around the best node
// in log coordinates.  f may return +inf.
Extremum log_grid_sup(const std::function<double(double)>& f, double lo = 1e-6,
                      double hi = 1e6, int n = 2049);
Extremum log_grid_inf(const std::function<double(double)>& f, double lo = 1e-6,
                      double hi = 1e6, int n = 2049);

// Adaptive Simpson quadrature with absolute tolerance.
double simpson(const std::function<double(double)>& f, double a, double b,
               double abs_tol = 1e-10, int max_depth = 30);

// x^e with the convention x^inf = 0 for x <= 1 and inf otherwise.
double pow_ext(double x, double e);

// r log r - r + 1, accurate near r = 1.
double entropy_kernel(double r);

// Deterministic RNG with platform-independent distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  std::size_t index(std::size_t n);       // [0, n)
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

// Number of workers, capped by INEQ_LAB_THREADS.
unsigned worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ineqlab::num
