#include <gtest/gtest.h>

#include "clustergeo/convex_pl.hpp"
#include "clustergeo/errors.hpp"
#include "clustergeo/generator.hpp"
#include "support.hpp"

using namespace clustergeo;
using testing_support::q;

TEST(ConvexPL, EvaluateAndMinimum) {
  const ConvexPL f({q(0), q(2), q(5)}, {q(4), q(0), q(3)});
  EXPECT_EQ(f(q(1)), 2);
  EXPECT_EQ(f(q(4)), 2);
  EXPECT_EQ(f.min(), 0);
  EXPECT_EQ(f.argmin(), 2);
  EXPECT_THROW(ConvexPL({q(0), q(1), q(2)}, {q(0), q(1), q(0)}), NonConvexError);
}

TEST(ConvexPL, EnvelopeIsOneLipschitz) {
  // Slopes -3, 0, 2: the envelope caps them at -1 and +1.
  const ConvexPL f({q(0), q(1), q(3), q(4)}, {q(5), q(2), q(2), q(4)});
  const auto [a, b] = f.envelope_core();
  EXPECT_EQ(a, 1);
  EXPECT_EQ(b, 3);
  for (int k = -8; k <= 24; ++k) {
    const Rational z = q(k, 4);
    // Brute force over a fine grid of the domain (breakpoints are integers).
    std::optional<Rational> best;
    for (int j = 0; j <= 16; ++j) {
      const Rational x = q(j, 4);
      const Rational v = f(x) + abs_diff(x, z);
      if (!best || v < *best) best = v;
    }
    EXPECT_EQ(f.envelope(z), *best) << to_string(z);
  }
}

TEST(ChainMinimization, Examples) {
  // Linear objective on a box: the minimizing corner.
  ChainProblem linear;
  linear.variables = {{q(-2), q(3), q(1), q(0), {}}, {q(0), q(4), q(-2), q(0), {}}};
  linear.links = {{false, 1, q(0), q(0)}};
  const auto m = minimize_convex_pl(linear);
  EXPECT_EQ(m.argmin, (std::vector<Rational>{q(-2), q(4)}));
  EXPECT_EQ(m.value, -10);

  // |s - 3| + |h - 5| on [0, 10]^2.
  ChainProblem two;
  two.variables = {{q(0), q(10), q(0), q(0), {{q(3), q(1)}}}, {q(0), q(10), q(0), q(0), {{q(5), q(1)}}}};
  two.links = {{false, 1, q(0), q(0)}};
  const auto t = minimize_convex_pl(two);
  EXPECT_EQ(t.argmin, (std::vector<Rational>{q(3), q(5)}));
  EXPECT_EQ(t.value, 0);
}

TEST(ChainMinimization, RejectsBadInput) {
  ChainProblem p;
  p.variables = {{q(1), q(0), q(0), q(0), {}}};
  EXPECT_THROW(minimize_convex_pl(p), ValidationError);
  p.variables = {{q(0), q(1), q(0), q(0), {{q(0), q(-1)}}}};
  EXPECT_THROW(minimize_convex_pl(p), NonConvexError);
  p.variables = {{q(0), q(1), q(0), q(0), {}}, {q(0), q(1), q(0), q(0), {}}};
  EXPECT_THROW(minimize_convex_pl(p), ValidationError);  // missing link
}

namespace {

ChainProblem random_chain(Rng& rng, int n) {
  ChainProblem p;
  for (int k = 0; k < n; ++k) {
    ChainVariable v;
    v.lo = q(rng.uniform(-4, 0));
    v.hi = v.lo + q(rng.uniform(0, 5));
    v.slope = rng.chance(30) ? q(rng.uniform(-1, 1)) : q(0);
    v.constant = q(rng.uniform(0, 3));
    const int terms = static_cast<int>(rng.uniform(0, 2));
    for (int j = 0; j < terms; ++j) v.abs_terms.push_back({q(rng.uniform(-5, 5)), q(rng.uniform(0, 2))});
    p.variables.push_back(v);
  }
  for (int k = 0; k + 1 < n; ++k) {
    ChainLink l;
    l.coupled = rng.chance(75);
    l.sigma = rng.chance(50) ? 1 : -1;
    l.shift = q(rng.uniform(-3, 3));
    l.constant = q(rng.uniform(0, 2));
    p.links.push_back(l);
  }
  return p;
}

// Exhaustive search over the half-integer grid of the box. All data are
// integers and the links are difference constraints, so an integral optimum
// exists and the grid contains it.
Rational grid_minimum(const ChainProblem& p) {
  const std::size_t n = p.variables.size();
  std::vector<Rational> x(n);
  std::optional<Rational> best;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == n) {
      const Rational v = evaluate(p, x);
      if (!best || v < *best) best = v;
      return;
    }
    for (Rational t = p.variables[k].lo; t <= p.variables[k].hi; t += q(1, 2)) {
      x[k] = t;
      rec(k + 1);
    }
  };
  rec(0);
  return *best;
}

}  // namespace

// Property: the chain DP matches exhaustive grid search, and its argmin
// attains the value inside the box.
TEST(ChainMinimizationProperty, MatchesGridSearch) {
  Rng rng(23);
  for (int round = 0; round < 300; ++round) {
    const int n = static_cast<int>(rng.uniform(1, 4));
    const ChainProblem p = random_chain(rng, n);
    const auto m = minimize_convex_pl(p);
    ASSERT_EQ(m.argmin.size(), p.variables.size());
    for (std::size_t k = 0; k < p.variables.size(); ++k) {
      ASSERT_GE(m.argmin[k], p.variables[k].lo);
      ASSERT_LE(m.argmin[k], p.variables[k].hi);
    }
    ASSERT_EQ(evaluate(p, m.argmin), m.value);
    ASSERT_EQ(m.value, grid_minimum(p)) << "round " << round;
  }
}
