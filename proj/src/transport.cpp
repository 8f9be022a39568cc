#include "ineqlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ineqlab/error.hpp"
#include "ineqlab/numerics.hpp"

namespace ineqlab {

namespace {

struct Cell {
  std::size_t i;
  std::size_t j;
  double x;
};

// Basis of the reduced problem kept as a spanning tree on m + n nodes
// (rows 0..m-1, columns m..m+n-1).
class Simplex {
 public:
  Simplex(const std::vector<double>& c, std::size_t ld, std::vector<std::size_t> rows,
          std::vector<std::size_t> cols, std::vector<double> a, std::vector<double> b)
      : c_(c), ld_(ld), rows_(std::move(rows)), cols_(std::move(cols)),
        a_(std::move(a)), b_(std::move(b)), m_(rows_.size()), n_(cols_.size()) {
    in_basis_.assign(m_ * n_, -1);
    adj_.assign(m_ + n_, {});
    north_west();
  }

  double cost(std::size_t i, std::size_t j) const { return c_[rows_[i] * ld_ + cols_[j]]; }

  int run() {
    double scale = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) scale = std::max(scale, std::abs(cost(i, j)));
    }
    const double tol = 1e-12 * scale;
    const int max_pivots = 1000 + 50 * static_cast<int>((m_ + n_) * (m_ + n_));
    int pivots = 0;
    int degenerate_run = 0;
    while (true) {
      potentials();
      bool bland = degenerate_run > static_cast<int>(m_ + n_);
      std::size_t ep = 0, eq = 0;
      double best = -tol;
      bool found = false;
      for (std::size_t i = 0; i < m_ && !(bland && found); ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          if (in_basis_[i * n_ + j] >= 0) continue;
          double rc = cost(i, j) - u_[i] - v_[j];
          if (rc < best) {
            best = rc;
            ep = i;
            eq = j;
            found = true;
            if (bland) break;
          }
        }
      }
      if (!found) break;
      if (++pivots > max_pivots) {
        throw Error(ErrorCode::solver_failure, "transport simplex exceeded pivot limit");
      }
      double theta = pivot(ep, eq);
      degenerate_run = (theta == 0.0) ? degenerate_run + 1 : 0;
    }
    return pivots;
  }

  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& v() const { return v_; }

 private:
  void add_cell(std::size_t i, std::size_t j, double x) {
    int id = static_cast<int>(cells_.size());
    cells_.push_back({i, j, x});
    in_basis_[i * n_ + j] = id;
    adj_[i].push_back(id);
    adj_[m_ + j].push_back(id);
  }

  void north_west() {
    std::vector<double> ra = a_;
    std::vector<double> rb = b_;
    std::size_t i = 0, j = 0;
    while (true) {
      double x = std::min(ra[i], rb[j]);
      add_cell(i, j, x);
      ra[i] -= x;
      rb[j] -= x;
      if (i + 1 == m_ && j + 1 == n_) break;
      if (j + 1 == n_ || (i + 1 < m_ && ra[i] <= rb[j])) {
        rb[j] = std::max(rb[j], 0.0);
        ++i;
      } else {
        ra[i] = std::max(ra[i], 0.0);
        ++j;
      }
    }
    // the last cell absorbs rounding in the totals
    cells_.back().x = std::max(cells_.back().x, 0.0);
  }

  void potentials() {
    u_.assign(m_, 0.0);
    v_.assign(n_, 0.0);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      std::size_t node = stack.back();
      stack.pop_back();
      for (int id : adj_[node]) {
        const Cell& c = cells_[id];
        std::size_t other = (node < m_) ? m_ + c.j : c.i;
        if (seen[other]) continue;
        seen[other] = 1;
        if (node < m_) v_[c.j] = cost(c.i, c.j) - u_[c.i];
        else u_[c.i] = cost(c.i, c.j) - v_[c.j];
        stack.push_back(other);
      }
    }
  }

  // Adds (p,q), pushes theta around the cycle, drops the leaving cell.
  double pivot(std::size_t p, std::size_t q) {
    // path from column node q to row node p in the tree
    std::vector<int> parent_edge(m_ + n_, -1);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> queue{m_ + q};
    seen[m_ + q] = 1;
    for (std::size_t h = 0; h < queue.size() && !seen[p]; ++h) {
      std::size_t node = queue[h];
      for (int id : adj_[node]) {
        const Cell& c = cells_[id];
        std::size_t other = (node < m_) ? m_ + c.j : c.i;
        if (seen[other]) continue;
        seen[other] = 1;
        parent_edge[other] = id;
        queue.push_back(other);
      }
    }
    std::vector<int> path;  // from p back to q
    std::size_t node = p;
    while (node != m_ + q) {
      int id = parent_edge[node];
      path.push_back(id);
      const Cell& c = cells_[id];
      node = (node < m_) ? m_ + c.j : c.i;
    }
    // edges adjacent to p and every second one after it lose mass
    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const Cell& c = cells_[path[k]];
      if (c.x < theta || (c.x == theta && leave >= 0 &&
                          cells_[path[k]].i * n_ + cells_[path[k]].j <
                              cells_[leave].i * n_ + cells_[leave].j)) {
        theta = c.x;
        leave = path[k];
      }
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      Cell& c = cells_[path[k]];
      if (k % 2 == 0) c.x = std::max(c.x - theta, 0.0);
      else c.x += theta;
    }
    // reuse the leaving slot for the entering cell
    Cell old = cells_[leave];
    in_basis_[old.i * n_ + old.j] = -1;
    auto drop = [&](std::size_t nd) {
      auto& v = adj_[nd];
      v.erase(std::find(v.begin(), v.end(), leave));
    };
    drop(old.i);
    drop(m_ + old.j);
    cells_[leave] = {p, q, theta};
    in_basis_[p * n_ + q] = leave;
    adj_[p].push_back(leave);
    adj_[m_ + q].push_back(leave);
    return theta;
  }

  const std::vector<double>& c_;
  std::size_t ld_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> cols_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::size_t m_;
  std::size_t n_;
  std::vector<Cell> cells_;
  std::vector<int> in_basis_;
  std::vector<std::vector<int>> adj_;
  std::vector<double> u_;
  std::vector<double> v_;
};

void check_marginal(const std::vector<double>& w, const char* what) {
  double s = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::domain, std::string(what) + " has a negative or non-finite entry");
    }
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-9) {
    throw Error(ErrorCode::domain, std::string(what) + " does not have unit mass");
  }
}

}  // namespace

TransportPlan solve_transport(const std::vector<double>& cost, std::size_t m,
                              std::size_t n, const std::vector<double>& supply,
                              const std::vector<double>& demand) {
  if (cost.size() != m * n || supply.size() != m || demand.size() != n) {
    throw Error(ErrorCode::domain, "transport input sizes disagree");
  }
  check_marginal(supply, "row marginal");
  check_marginal(demand, "column marginal");
  std::vector<std::size_t> rows, cols;
  std::vector<double> a, b;
  for (std::size_t i = 0; i < m; ++i) {
    if (supply[i] > 0.0) {
      rows.push_back(i);
      a.push_back(supply[i]);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (demand[j] > 0.0) {
      cols.push_back(j);
      b.push_back(demand[j]);
    }
  }
  Simplex s(cost, n, rows, cols, a, b);
  TransportPlan plan;
  plan.rows = m;
  plan.cols = n;
  plan.pivots = s.run();
  plan.mass.assign(m * n, 0.0);
  for (const auto& c : s.cells()) plan.mass[rows[c.i] * n + cols[c.j]] += c.x;

  // potentials on the support, extended to empty rows and columns
  const double big = std::numeric_limits<double>::infinity();
  plan.phi.assign(m, big);
  plan.psi.assign(n, big);
  for (std::size_t k = 0; k < rows.size(); ++k) plan.phi[rows[k]] = s.u()[k];
  for (std::size_t k = 0; k < cols.size(); ++k) plan.psi[cols[k]] = s.v()[k];
  for (std::size_t i = 0; i < m; ++i) {
    if (supply[i] > 0.0) continue;
    double best = big;
    for (auto j : cols) best = std::min(best, cost[i * n + j] - plan.psi[j]);
    plan.phi[i] = best;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (demand[j] > 0.0) continue;
    double best = big;
    for (std::size_t i = 0; i < m; ++i) best = std::min(best, cost[i * n + j] - plan.phi[i]);
    plan.psi[j] = best;
  }

  double primal = 0.0;
  std::vector<double> rs(m, 0.0), cs(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double x = plan.mass[i * n + j];
      primal += x * cost[i * n + j];
      rs[i] += x;
      cs[j] += x;
      plan.dual_infeasibility =
          std::max(plan.dual_infeasibility, plan.phi[i] + plan.psi[j] - cost[i * n + j]);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    plan.row_residual = std::max(plan.row_residual, std::abs(rs[i] - supply[i]));
    if (supply[i] > 0.0) plan.dual_value += supply[i] * plan.phi[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    plan.col_residual = std::max(plan.col_residual, std::abs(cs[j] - demand[j]));
    if (demand[j] > 0.0) plan.dual_value += demand[j] * plan.psi[j];
  }
  plan.cost = primal;
  plan.dual_gap = std::abs(primal - plan.dual_value);
  return plan;
}

namespace {

struct TreeSearch {
  const std::vector<double>& cost;
  std::size_t m, n;
  const std::vector<double>& a;
  const std::vector<double>& b;
  std::vector<std::size_t> parent;
  std::vector<std::size_t> size;
  std::vector<std::pair<std::size_t, std::size_t>> undo;
  std::vector<std::size_t> chosen;
  double best = std::numeric_limits<double>::infinity();

  std::size_t find(std::size_t x) const {
    while (parent[x] != x) x = parent[x];
    return x;
  }

  void evaluate() {
    std::size_t nodes = m + n;
    std::vector<double> rest(nodes);
    for (std::size_t i = 0; i < m; ++i) rest[i] = a[i];
    for (std::size_t j = 0; j < n; ++j) rest[m + j] = b[j];
    std::vector<int> degree(nodes, 0);
    for (auto e : chosen) {
      ++degree[e / n];
      ++degree[m + e % n];
    }
    std::vector<char> used(chosen.size(), 0);
    double total = 0.0;
    for (std::size_t done = 0; done < chosen.size(); ++done) {
      std::size_t pick = chosen.size();
      for (std::size_t k = 0; k < chosen.size() && pick == chosen.size(); ++k) {
        if (used[k]) continue;
        std::size_t r = chosen[k] / n, c = m + chosen[k] % n;
        if (degree[r] == 1 || degree[c] == 1) pick = k;
      }
      std::size_t r = chosen[pick] / n, c = m + chosen[pick] % n;
      std::size_t leaf = (degree[r] == 1) ? r : c;
      std::size_t other = (leaf == r) ? c : r;
      double flow = rest[leaf];
      if (flow < -1e-12) return;
      rest[other] -= flow;
      rest[leaf] = 0.0;
      --degree[r];
      --degree[c];
      used[pick] = 1;
      total += flow * cost[chosen[pick]];
    }
    best = std::min(best, total);
  }

  void recurse(std::size_t cell) {
    if (chosen.size() == m + n - 1) {
      evaluate();
      return;
    }
    if (cell == m * n) return;
    if (m * n - cell < m + n - 1 - chosen.size()) return;
    std::size_t ra = find(cell / n);
    std::size_t rb = find(m + cell % n);
    if (ra != rb) {
      if (size[ra] < size[rb]) std::swap(ra, rb);
      parent[rb] = ra;
      size[ra] += size[rb];
      chosen.push_back(cell);
      recurse(cell + 1);
      chosen.pop_back();
      size[ra] -= size[rb];
      parent[rb] = rb;
    }
    recurse(cell + 1);
  }
};

}  // namespace

double brute_force_transport(const std::vector<double>& cost, std::size_t m,
                             std::size_t n, const std::vector<double>& supply,
                             const std::vector<double>& demand) {
  if (m > 5 || n > 5) throw Error(ErrorCode::size_overflow, "brute force needs at most 5 points");
  check_marginal(supply, "row marginal");
  check_marginal(demand, "column marginal");
  TreeSearch t{cost, m, n, supply, demand, {}, {}, {}, {}};
  t.parent.resize(m + n);
  t.size.assign(m + n, 1);
  for (std::size_t k = 0; k < m + n; ++k) t.parent[k] = k;
  t.recurse(0);
  return t.best;
}

TransportProblem::TransportProblem(const YoungFunction& alpha,
                                   const FiniteMetricSpace& space)
    : n_(space.size()), c_(n_ * n_) {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) c_[i * n_ + j] = alpha(space.dist(i, j));
  }
}

TransportPlan TransportProblem::solve(const ProbMeasure& nu, const ProbMeasure& mu) const {
  if (nu.size() != n_ || mu.size() != n_) throw Error(ErrorCode::domain, "measure size mismatch");
  return solve_transport(c_, n_, n_, nu.weights(), mu.weights());
}

TransportPlan optimal_transport(const YoungFunction& alpha,
                                const FiniteMetricSpace& space,
                                const ProbMeasure& nu, const ProbMeasure& mu) {
  return TransportProblem(alpha, space).solve(nu, mu);
}

double optimal_cost(const YoungFunction& alpha, const FiniteMetricSpace& space,
                    const ProbMeasure& nu, const ProbMeasure& mu) {
  return optimal_transport(alpha, space, nu, mu).cost;
}

double brute_force_cost(const YoungFunction& alpha, const FiniteMetricSpace& space,
                        const ProbMeasure& nu, const ProbMeasure& mu) {
  TransportProblem p(alpha, space);
  return brute_force_transport(p.costs(), space.size(), space.size(), nu.weights(),
                               mu.weights());
}

void write_plan_csv(const TransportPlan& plan, const std::vector<double>& cost,
                    std::ostream& out) {
  out << "i,j,mass,cost_contrib\n";
  out.precision(17);
  for (std::size_t i = 0; i < plan.rows; ++i) {
    for (std::size_t j = 0; j < plan.cols; ++j) {
      double x = plan.at(i, j);
      if (x == 0.0) continue;
      out << i << "," << j << "," << x << "," << x * cost[i * plan.cols + j] << "\n";
    }
  }
}

}  // namespace ineqlab
