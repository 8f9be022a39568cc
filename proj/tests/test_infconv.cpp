#include <cmath>

#include "doctest.h"
#include "ineqlab/infconv.hpp"
#include "ineqlab/numerics.hpp"

using namespace ineqlab;

namespace {

FiniteMetricSpace random_space(num::Rng& rng, std::size_t n) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform(0, 3);
  std::sort(x.begin(), x.end());
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) d[i][j] = std::abs(x[i] - x[j]) + 0.1;
    }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return FiniteMetricSpace(labels, d);
}

Potential random_potential(num::Rng& rng, std::size_t n, double scale) {
  Potential f(n);
  for (auto& v : f) v = rng.uniform(-scale, scale);
  return f;
}

const FiniteMetricSpace& unit_pair() {
  static const FiniteMetricSpace s({"a", "b"}, {{0, 1}, {1, 0}});
  return s;
}

}  // namespace

TEST_CASE("inf-convolution examples") {
  auto sq = YoungFunction::power(2, 2);
  ProductSpace two(unit_pair(), 1);
  auto q = q_conv(sq, 1.0, {0, 5}, two);
  CHECK(q.values == Potential{0, 1});
  CHECK(q.argmin == std::vector<std::size_t>{0, 0});
  auto p = p_conv(sq, {0, 5}, two);
  CHECK(p.values == Potential{4, 5});
  CHECK(q_conv(sq, 0.0, {3, 1}, two).values == Potential{1, 1});
  CHECK(q_conv(sq, 2.0, {0, 0}, two).values == Potential{0, 0});
  CHECK(p_conv(sq, {0, 0}, two).values == Potential{0, 0});
}

TEST_CASE("duality and witnesses") {
  num::Rng rng(4);
  std::vector<YoungFunction> alphas = {YoungFunction::power(2, 2), YoungFunction::power(2, 1),
                                       YoungFunction::power(3, 2)};
  for (int k = 0; k < 200; ++k) {
    std::size_t m = 2 + rng.index(3);
    int n = 1 + static_cast<int>(rng.index(2));
    ProductSpace ps(random_space(rng, m), n);
    const auto& a = alphas[rng.index(3)];
    InfConvolution conv(a, ps, 1.0);
    Potential f = random_potential(rng, ps.size(), 4.0);
    Potential nf = f;
    for (auto& v : nf) v = -v;
    auto q = conv.q(f);
    auto pn = conv.p(nf);
    for (std::size_t x = 0; x < ps.size(); ++x) {
      CHECK(pn.values[x] == -q.values[x]);
      CHECK(std::abs(q.achieved[x] - q.values[x]) <= 1e-12);
      CHECK(q.values[x] <= f[x]);
      CHECK(pn.values[x] >= nf[x]);
    }
  }
}

TEST_CASE("galois bounds, monotonicity and shifts") {
  num::Rng rng(5);
  auto a = YoungFunction::power(3, 2);
  for (int k = 0; k < 300; ++k) {
    std::size_t m = 2 + rng.index(4);
    int n = 1 + static_cast<int>(rng.index(2));
    ProductSpace ps(random_space(rng, m), n);
    InfConvolution conv(a, ps, 1.0);
    InfConvolution bigger(a, ps, 1.7);
    Potential g = random_potential(rng, ps.size(), 5.0);
    Potential h = g;
    for (auto& v : h) v += rng.uniform(0, 1);
    double c = rng.uniform(-3, 3);
    Potential gc = g;
    for (auto& v : gc) v += c;
    auto pq = conv.p(conv.q(g).values).values;
    auto qp = conv.q(conv.p(g).values).values;
    auto qg = conv.q(g).values;
    auto qh = conv.q(h).values;
    auto pg = conv.p(g).values;
    auto ph = conv.p(h).values;
    auto qgc = conv.q(gc).values;
    auto qbig = bigger.q(g).values;
    for (std::size_t x = 0; x < ps.size(); ++x) {
      CHECK(pq[x] <= g[x] + 1e-12);
      CHECK(qp[x] >= g[x] - 1e-12);
      CHECK(qg[x] <= qh[x]);
      CHECK(pg[x] <= ph[x]);
      CHECK(qgc[x] == doctest::Approx(qg[x] + c).epsilon(1e-12));
      CHECK(qg[x] <= qbig[x]);
    }
  }
}

TEST_CASE("partial inf-convolution") {
  num::Rng rng(6);
  auto a = YoungFunction::power(2, 2);
  auto space = random_space(rng, 3);
  ProductSpace one(space, 1);
  Potential f = random_potential(rng, 3, 2.0);
  CHECK(partial_q(a, 0.8, f, one, 0) == q_conv(a, 0.8, f, one).values);

  ProductSpace two(space, 2);
  for (int k = 0; k < 50; ++k) {
    Potential h = random_potential(rng, 9, 3.0);
    for (int i = 0; i < 2; ++i) {
      auto got = partial_q(a, 1.3, h, two, i);
      for (std::size_t x1 = 0; x1 < 3; ++x1) {
        for (std::size_t x2 = 0; x2 < 3; ++x2) {
          double best = 1e300;
          for (std::size_t y = 0; y < 3; ++y) {
            std::size_t idx = (i == 0) ? y * 3 + x2 : x1 * 3 + y;
            double xi = (i == 0) ? x1 : x2;
            best = std::min(best, h[idx] + 1.3 * a(space.dist(static_cast<std::size_t>(xi), y)));
          }
          CHECK(got[x1 * 3 + x2] == best);
        }
      }
    }
  }
  // h depending only on the second coordinate is fixed by the first partial
  Potential h(9);
  for (std::size_t k = 0; k < 9; ++k) h[k] = static_cast<double>(k % 3);
  CHECK(partial_q(a, 1.0, h, two, 0) == h);
}

TEST_CASE("composed partial inf-convolutions equal the full one") {
  num::Rng rng(7);
  auto a = YoungFunction::power(2, 1);
  for (int k = 0; k < 100; ++k) {
    std::size_t m = 2 + rng.index(3);
    int n = 2 + static_cast<int>(rng.index(2));
    ProductSpace ps(random_space(rng, m), n);
    InfConvolution conv(a, ps, 0.9);
    Potential f = random_potential(rng, ps.size(), 3.0);
    Potential g = f;
    for (int i = n - 1; i >= 0; --i) g = conv.partial_q(g, i);
    auto q = conv.q(f).values;
    for (std::size_t x = 0; x < ps.size(); ++x) CHECK(std::abs(g[x] - q[x]) <= 1e-12);
  }
}

TEST_CASE("pointwise lemma bounds") {
  auto sq = YoungFunction::power(2, 2);
  num::Rng rng(8);
  auto space = random_space(rng, 3);
  ProductSpace two(space, 2);
  LemmaBoundsOptions opt;
  auto flat = lemma_bounds(sq, Potential(9, 1.5), two, opt);
  CHECK(flat.exact_bounds_hold());
  CHECK(flat.eps_max_excess == 0.0);
  CHECK(flat.ball_max_displacement == 0.0);
  CHECK(flat.gradient_exceedances == 0);
  for (double t : {0.25, 0.5, 0.75}) {
    for (int k = 0; k < 30; ++k) {
      opt.t = t;
      auto r = lemma_bounds(sq, random_potential(rng, 9, 3.0), two, opt);
      CHECK(r.eps_violations == 0);
      CHECK(r.ball_violations == 0);
    }
  }
  // f(x) = x on a 101-point grid of [0,1]
  auto grid = FiniteMetricSpace::grid1d(101, 0.01);
  Potential lin(101);
  for (int i = 0; i < 101; ++i) lin[i] = grid.coordinates()[i];
  opt.t = 0.5;
  opt.ball_p = 2.0;
  auto r = lemma_bounds(sq, lin, ProductSpace(grid, 1), opt);
  CHECK(r.lipschitz_L == doctest::Approx(1.0));
  CHECK(r.ball_max_displacement <= r.ball_radius + 1e-9);
  CHECK(r.eps_violations == 0);
}
