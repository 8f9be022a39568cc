#include "ineqlab/infconv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ineqlab/error.hpp"
#include "ineqlab/numerics.hpp"

namespace ineqlab {

InfConvolution::InfConvolution(const YoungFunction& alpha, const ProductSpace& space,
                               double lambda)
    : space_(space), lambda_(lambda), size_(space.size()), m_(space.base().size()) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::domain, "inf-convolution needs lambda >= 0");
  }
  base_.resize(m_ * m_);
  for (std::size_t a = 0; a < m_; ++a) {
    for (std::size_t b = 0; b < m_; ++b) {
      base_[a * m_ + b] = lambda * alpha(space.base().dist(a, b));
    }
  }
  table_.resize(size_ * size_);
  for (std::size_t x = 0; x < size_; ++x) {
    for (std::size_t y = 0; y < size_; ++y) {
      double s = 0.0;
      for (int i = 0; i < space_.order(); ++i) {
        s += base_[space_.coord(x, i) * m_ + space_.coord(y, i)];
      }
      table_[x * size_ + y] = s;
    }
  }
}

ConvResult InfConvolution::q(const Potential& f) const {
  if (f.size() != size_) throw Error(ErrorCode::domain, "potential size mismatch");
  ConvResult r;
  r.values.resize(size_);
  r.argmin.resize(size_);
  r.achieved.resize(size_);
  for (std::size_t x = 0; x < size_; ++x) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    const double* row = &table_[x * size_];
    for (std::size_t y = 0; y < size_; ++y) {
      double v = f[y] + row[y];
      if (v < best) {
        best = v;
        arg = y;
      }
    }
    r.values[x] = best;
    r.argmin[x] = arg;
    r.achieved[x] = f[arg] + cost(x, arg);
  }
  return r;
}

ConvResult InfConvolution::p(const Potential& f) const {
  if (f.size() != size_) throw Error(ErrorCode::domain, "potential size mismatch");
  ConvResult r;
  r.values.resize(size_);
  r.argmin.resize(size_);
  r.achieved.resize(size_);
  for (std::size_t x = 0; x < size_; ++x) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    const double* row = &table_[x * size_];
    for (std::size_t y = 0; y < size_; ++y) {
      double v = f[y] - row[y];
      if (v > best) {
        best = v;
        arg = y;
      }
    }
    r.values[x] = best;
    r.argmin[x] = arg;
    r.achieved[x] = f[arg] - cost(x, arg);
  }
  return r;
}

Potential InfConvolution::partial_q(const Potential& h, int i) const {
  if (h.size() != size_) throw Error(ErrorCode::domain, "potential size mismatch");
  if (i < 0 || i >= space_.order()) throw Error(ErrorCode::domain, "coordinate out of range");
  Potential out(size_);
  for (std::size_t x = 0; x < size_; ++x) {
    std::size_t xi = space_.coord(x, i);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < m_; ++y) {
      best = std::min(best, h[space_.replace(x, i, y)] + base_[xi * m_ + y]);
    }
    out[x] = best;
  }
  return out;
}

ConvResult q_conv(const YoungFunction& alpha, double lambda, const Potential& f,
                  const ProductSpace& space) {
  return InfConvolution(alpha, space, lambda).q(f);
}

ConvResult p_conv(const YoungFunction& alpha, const Potential& f,
                  const ProductSpace& space, double lambda) {
  return InfConvolution(alpha, space, lambda).p(f);
}

Potential partial_q(const YoungFunction& alpha, double lambda, const Potential& h,
                    const ProductSpace& space, int i) {
  return InfConvolution(alpha, space, lambda).partial_q(h, i);
}

double lipschitz_constant(const Potential& f, const ProductSpace& space, double p) {
  const auto& base = space.base();
  double L = 0.0;
  for (std::size_t x = 0; x < space.size(); ++x) {
    for (std::size_t y = x + 1; y < space.size(); ++y) {
      double s = 0.0;
      for (int i = 0; i < space.order(); ++i) {
        s += std::pow(base.dist(space.coord(x, i), space.coord(y, i)), p);
      }
      L = std::max(L, std::abs(f[x] - f[y]) / std::pow(s, 1.0 / p));
    }
  }
  return L;
}

LemmaBoundsReport lemma_bounds(const YoungFunction& alpha, const Potential& f,
                               const ProductSpace& space, const LemmaBoundsOptions& opt) {
  if (!(opt.t > 0.0 && opt.t < 1.0)) throw Error(ErrorCode::domain, "lemma bounds need t in (0,1)");
  if (!(opt.omega >= 1.0)) throw Error(ErrorCode::domain, "omega must be >= 1");
  for (double v : f) {
    if (!std::isfinite(v)) throw Error(ErrorCode::domain, "potential must be finite");
  }
  LemmaBoundsReport rep;
  rep.points = space.size();
  const auto exps = exponents(alpha);
  const double t = opt.t;
  const int n = space.order();
  const auto& base = space.base();
  InfConvolution conv(alpha, space, 1.0);

  // sup-convolution tensorization bound
  ConvResult pf = conv.p(f);
  Potential h(pf.values);
  for (double& v : h) v *= t;
  std::vector<Potential> partial(n);
  for (int i = 0; i < n; ++i) partial[i] = conv.partial_q(h, i);
  double eps = epsilon(exps.p_alpha, t);
  for (std::size_t x = 0; x < space.size(); ++x) {
    double lhs = 0.0;
    double rhs = 0.0;
    std::size_t y = pf.argmin[x];
    for (int i = 0; i < n; ++i) {
      lhs += h[x] - partial[i][x];
      rhs += conv.coordinate_cost(space.coord(x, i), space.coord(y, i));
    }
    rhs *= t * eps;
    double excess = lhs - rhs;
    rep.eps_max_excess = std::max(rep.eps_max_excess, excess);
    if (excess > opt.tol) ++rep.eps_violations;
  }

  // ball containing the maximizer for the d^p cost
  double p = opt.ball_p > 0.0 ? opt.ball_p : exps.p_alpha;
  double q = p / (p - 1.0);
  rep.lipschitz_L = lipschitz_constant(f, space, p);
  if (!std::isfinite(rep.lipschitz_L)) {
    throw Error(ErrorCode::not_lipschitz, "potential has no finite Lipschitz seminorm");
  }
  rep.ball_radius = std::pow(rep.lipschitz_L / opt.omega, q);
  for (std::size_t x = 0; x < space.size(); ++x) {
    double best = -std::numeric_limits<double>::infinity();
    double best_disp = 0.0;
    for (std::size_t y = 0; y < space.size(); ++y) {
      double c = 0.0;
      for (int i = 0; i < n; ++i) c += std::pow(base.dist(space.coord(x, i), space.coord(y, i)), p);
      double v = f[y] - c;
      if (v > best) {
        best = v;
        best_disp = c;
      }
    }
    rep.ball_max_displacement = std::max(rep.ball_max_displacement, best_disp);
    if (best_disp > rep.ball_radius * (1.0 + opt.ball_rel_slack) + opt.tol) ++rep.ball_violations;
  }

  // gradient bound under the slope surrogate (reported only)
  ConvResult qf = conv.q(f);
  double xt = xi(alpha, t);
  for (std::size_t x = 0; x < space.size(); ++x) {
    double lhs = 0.0;
    for (int i = 0; i < n; ++i) {
      // slope of u -> Qf(x with x_i = u) at u = x_i
      Potential line(base.size());
      for (std::size_t u = 0; u < base.size(); ++u) line[u] = qf.values[space.replace(x, i, u)];
      double s = slope(base, line, space.coord(x, i), Sign::plus, opt.slope_mode).value;
      lhs += alpha.conjugate(t * s);
    }
    double rhs = t * xt * (qf.values[x] - f[qf.argmin[x]]);
    double excess = lhs - rhs;
    if (std::isnan(excess)) excess = 0.0;
    rep.gradient_max_excess = std::max(rep.gradient_max_excess, excess);
    if (excess > opt.tol) ++rep.gradient_exceedances;
  }
  return rep;
}

}  // namespace ineqlab
