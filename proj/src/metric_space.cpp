#include "ineqlab/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ineqlab/error.hpp"
#include "ineqlab/numerics.hpp"

namespace ineqlab {

std::vector<Diagnostic> validate(const std::vector<std::string>& labels,
                                 const Matrix& dist, double rel_tol) {
  std::vector<Diagnostic> out;
  auto add = [&](const char* axiom, const std::string& msg) {
    out.push_back({axiom, msg});
  };
  std::size_t n = dist.size();
  if (n == 0) {
    add("shape", "empty distance matrix");
    return out;
  }
  if (labels.size() != n) {
    add("shape", "label count " + std::to_string(labels.size()) +
                     " does not match matrix size " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) {
      add("shape", "row " + std::to_string(i) + " has " +
                       std::to_string(dist[i].size()) + " entries");
      return out;
    }
  }
  auto name = [&](std::size_t i) {
    return i < labels.size() ? labels[i] : std::to_string(i);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(dist[i][j])) {
        add("finite", "d(" + name(i) + "," + name(j) + ") is not finite");
        return out;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i][i] != 0.0) add("diagonal", "d(" + name(i) + "," + name(i) + ") != 0");
    for (std::size_t j = i + 1; j < n; ++j) {
      double a = dist[i][j];
      double b = dist[j][i];
      if (std::abs(a - b) > rel_tol * std::max(std::abs(a), std::abs(b))) {
        std::ostringstream m;
        m << "d(" << name(i) << "," << name(j) << ") = " << a << " but d("
          << name(j) << "," << name(i) << ") = " << b;
        add("symmetry", m.str());
      }
      if (!(a > 0.0) || !(b > 0.0)) {
        add("positivity", "distinct points " + name(i) + ", " + name(j) +
                              " at non-positive distance");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k) continue;
      for (std::size_t j = 0; j < n; ++j) {
        double via = dist[i][j] + dist[j][k];
        if (dist[i][k] > via * (1.0 + rel_tol)) {
          std::ostringstream m;
          m << "d(" << name(i) << "," << name(k) << ") = " << dist[i][k]
            << " > d(" << name(i) << "," << name(j) << ") + d(" << name(j) << ","
            << name(k) << ") = " << via;
          add("triangle", m.str());
        }
      }
    }
  }
  return out;
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels,
                                     const Matrix& dist) {
  auto diags = validate(labels, dist);
  if (!diags.empty()) {
    std::string msg = "invalid metric space:";
    for (const auto& d : diags) msg += " [" + d.axiom + "] " + d.message + ";";
    throw Error(ErrorCode::metric_invalid, msg);
  }
  n_ = dist.size();
  labels_ = std::move(labels);
  d_.resize(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      // symmetrize exactly so downstream identities hold bitwise
      d_[i * n_ + j] = (i <= j) ? dist[i][j] : dist[j][i];
    }
  }
  default_neighbors();
}

namespace {

FiniteMetricSpace line_space(std::size_t count, double spacing, bool wrap,
                              const std::string& prefix) {
  if (count < 1) throw Error(ErrorCode::domain, "generator needs count >= 1");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(ErrorCode::domain, "generator needs spacing > 0");
  }
  Matrix d(count, std::vector<double>(count, 0.0));
  std::vector<std::string> labels(count);
  for (std::size_t i = 0; i < count; ++i) {
    labels[i] = prefix + std::to_string(i);
    for (std::size_t j = 0; j < count; ++j) {
      std::size_t k = i > j ? i - j : j - i;
      if (wrap) k = std::min(k, count - k);
      d[i][j] = static_cast<double>(k) * spacing;
    }
  }
  FiniteMetricSpace s(labels, d);
  Adjacency adj(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) adj[i].push_back(i - 1);
    if (i + 1 < count) adj[i].push_back(i + 1);
    if (wrap && count > 2) {
      if (i == 0) adj[i].push_back(count - 1);
      if (i + 1 == count) adj[i].push_back(0);
    }
    std::sort(adj[i].begin(), adj[i].end());
    adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
  }
  s.set_neighbors(std::move(adj));
  return s;
}

}  // namespace

FiniteMetricSpace FiniteMetricSpace::path(std::size_t count, double spacing) {
  auto s = line_space(count, spacing, false, "p");
  s.coords_.resize(count);
  for (std::size_t i = 0; i < count; ++i) s.coords_[i] = spacing * static_cast<double>(i);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::cycle(std::size_t count, double spacing) {
  return line_space(count, spacing, true, "c");
}

FiniteMetricSpace FiniteMetricSpace::grid1d(std::size_t count, double spacing,
                                            double origin) {
  auto s = line_space(count, spacing, false, "x");
  s.coords_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    s.coords_[i] = origin + spacing * static_cast<double>(i);
    std::ostringstream l;
    l << s.coords_[i];
    s.labels_[i] = l.str();
  }
  return s;
}

Matrix FiniteMetricSpace::matrix() const {
  Matrix m(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) m[i][j] = dist(i, j);
  }
  return m;
}

void FiniteMetricSpace::set_neighbors(Adjacency adj) {
  if (adj.size() != n_) throw Error(ErrorCode::domain, "adjacency size mismatch");
  for (const auto& row : adj) {
    for (auto j : row) {
      if (j >= n_) throw Error(ErrorCode::domain, "adjacency index out of range");
    }
  }
  adj_ = std::move(adj);
}

void FiniteMetricSpace::default_neighbors() {
  adj_.assign(n_, {});
  for (std::size_t i = 0; i < n_; ++i) {
    double best = num::inf;
    for (std::size_t j = 0; j < n_; ++j) {
      if (j != i) best = std::min(best, dist(i, j));
    }
    for (std::size_t j = 0; j < n_; ++j) {
      if (j != i && dist(i, j) <= best * (1.0 + 1e-12)) adj_[i].push_back(j);
    }
  }
}

FiniteMetricSpace FiniteMetricSpace::restrict(const std::vector<std::size_t>& idx) const {
  FiniteMetricSpace s;
  s.n_ = idx.size();
  s.labels_.reserve(idx.size());
  s.d_.resize(s.n_ * s.n_);
  std::vector<std::ptrdiff_t> where(n_, -1);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] >= n_) throw Error(ErrorCode::domain, "restriction index out of range");
    where[idx[a]] = static_cast<std::ptrdiff_t>(a);
    s.labels_.push_back(labels_[idx[a]]);
    for (std::size_t b = 0; b < idx.size(); ++b) {
      s.d_[a * s.n_ + b] = dist(idx[a], idx[b]);
    }
  }
  if (!coords_.empty()) {
    for (auto i : idx) s.coords_.push_back(coords_[i]);
  }
  s.adj_.assign(s.n_, {});
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (auto j : adj_[idx[a]]) {
      if (where[j] >= 0) s.adj_[a].push_back(static_cast<std::size_t>(where[j]));
    }
  }
  return s;
}

double FiniteMetricSpace::min_distance() const {
  double m = num::inf;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) m = std::min(m, dist(i, j));
  }
  return m;
}

double FiniteMetricSpace::diameter() const {
  double m = 0.0;
  for (double v : d_) m = std::max(m, v);
  return m;
}

ProbMeasure::ProbMeasure(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw Error(ErrorCode::domain, "measure has no points");
  double s = 0.0;
  for (double v : w_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::domain, "measure weights must be finite and non-negative");
    }
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12) {
    std::ostringstream m;
    m.precision(17);
    m << "measure weights sum to " << s << ", not 1 (tolerance 1e-12)";
    throw Error(ErrorCode::domain, m.str());
  }
}

ProbMeasure ProbMeasure::normalized(std::vector<double> weights) {
  double s = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::domain, "density values must be finite and non-negative");
    }
    s += v;
  }
  if (!(s > 0.0)) throw Error(ErrorCode::domain, "density has zero total mass");
  for (double& v : weights) v /= s;
  return ProbMeasure(std::move(weights));
}

ProbMeasure ProbMeasure::uniform(std::size_t n) {
  return ProbMeasure(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbMeasure ProbMeasure::dirac(std::size_t n, std::size_t i) {
  std::vector<double> w(n, 0.0);
  w.at(i) = 1.0;
  return ProbMeasure(std::move(w));
}

std::vector<std::size_t> ProbMeasure::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (w_[i] > 0.0) s.push_back(i);
  }
  return s;
}

double ProbMeasure::integrate(const Potential& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (w_[i] > 0.0) s += w_[i] * f[i];
  }
  return s;
}

ProbMeasure ProbMeasure::restrict(const std::vector<std::size_t>& idx) const {
  std::vector<double> w;
  for (auto i : idx) w.push_back(w_.at(i));
  return normalized(std::move(w));
}

double relative_entropy(const ProbMeasure& nu, const ProbMeasure& mu) {
  if (nu.size() != mu.size()) throw Error(ErrorCode::domain, "measures on different spaces");
  double h = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] == 0.0) {
      if (nu[i] > 0.0) return num::inf;
      continue;
    }
    // sum of mu * (r log r - r + 1) avoids cancellation near nu = mu
    h += mu[i] * num::entropy_kernel(nu[i] / mu[i]);
  }
  return h;
}

double exp_entropy(const ProbMeasure& mu, const Potential& f) {
  double m = -num::inf;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) m = std::max(m, f[i]);
  }
  double z = 0.0;
  std::vector<double> g(mu.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) {
      g[i] = std::exp(f[i] - m);
      z += mu[i] * g[i];
    }
  }
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) s += mu[i] * num::entropy_kernel(g[i] / z);
  }
  return std::exp(m) * z * s;
}

ProbMeasure tilt(const ProbMeasure& mu, const Potential& f) {
  double m = -num::inf;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) m = std::max(m, f[i]);
  }
  std::vector<double> w(mu.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] > 0.0) w[i] = mu[i] * std::exp(f[i] - m);
  }
  return ProbMeasure::normalized(std::move(w));
}

SlopeValue slope(const FiniteMetricSpace& space, const Potential& f,
                 std::size_t i, Sign sign, SlopeMode mode) {
  SlopeValue out;
  auto consider = [&](std::size_t j) {
    double diff = f[j] - f[i];
    double part = (sign == Sign::plus) ? std::max(diff, 0.0) : std::max(-diff, 0.0);
    out.value = std::max(out.value, part / space.dist(i, j));
  };
  if (mode == SlopeMode::global) {
    if (space.size() < 2) {
      out.isolated = true;
      return out;
    }
    for (std::size_t j = 0; j < space.size(); ++j) {
      if (j != i) consider(j);
    }
  } else {
    const auto& nb = space.neighbors()[i];
    if (nb.empty()) {
      out.isolated = true;
      return out;
    }
    for (auto j : nb) consider(j);
  }
  return out;
}

ProductSpace::ProductSpace(FiniteMetricSpace base, int n)
    : base_(std::move(base)), n_(n) {
  if (n < 1 || n > 3) throw Error(ErrorCode::size_overflow, "product order must be 1, 2 or 3");
  double total = std::pow(static_cast<double>(base_.size()), n);
  if (total > 1e6) throw Error(ErrorCode::size_overflow, "product space exceeds 1e6 points");
  size_ = 1;
  stride_.assign(n, 1);
  for (int i = n - 1; i >= 0; --i) {
    stride_[i] = size_;
    size_ *= base_.size();
  }
}

std::size_t ProductSpace::coord(std::size_t k, int i) const {
  return (k / stride_[i]) % base_.size();
}

std::vector<std::size_t> ProductSpace::coords(std::size_t k) const {
  std::vector<std::size_t> c(n_);
  for (int i = 0; i < n_; ++i) c[i] = coord(k, i);
  return c;
}

std::size_t ProductSpace::index(const std::vector<std::size_t>& c) const {
  std::size_t k = 0;
  for (int i = 0; i < n_; ++i) k += c[i] * stride_[i];
  return k;
}

std::size_t ProductSpace::replace(std::size_t k, int i, std::size_t y) const {
  return k - coord(k, i) * stride_[i] + y * stride_[i];
}

ProbMeasure ProductSpace::power(const ProbMeasure& mu) const {
  if (mu.size() != base_.size()) throw Error(ErrorCode::domain, "measure size mismatch");
  std::vector<double> w(size_, 1.0);
  for (std::size_t k = 0; k < size_; ++k) {
    for (int i = 0; i < n_; ++i) w[k] *= mu[coord(k, i)];
  }
  // renormalize to absorb rounding in the products
  return ProbMeasure::normalized(std::move(w));
}

std::vector<double> ProductSpace::cost_table(
    const std::function<double(double)>& cost) const {
  std::size_t m = base_.size();
  std::vector<double> base_cost(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) base_cost[a * m + b] = cost(base_.dist(a, b));
  }
  std::vector<double> t(size_ * size_, 0.0);
  for (std::size_t x = 0; x < size_; ++x) {
    for (std::size_t y = 0; y < size_; ++y) {
      double s = 0.0;
      for (int i = 0; i < n_; ++i) s += base_cost[coord(x, i) * m + coord(y, i)];
      t[x * size_ + y] = s;
    }
  }
  return t;
}

}  // namespace ineqlab
