#pragma once

#include <utility>
#include <vector>

#include "clustergeo/rational.hpp"

namespace clustergeo {

// Convex piecewise-linear function on a closed interval, stored as its
// breakpoints (strictly increasing) and values there.
class ConvexPL {
 public:
  ConvexPL(Rational lo, Rational hi, const Rational& value);
  // Throws NonConvexError when slopes decrease somewhere.
  ConvexPL(std::vector<Rational> xs, std::vector<Rational> ys);

  const Rational& lo() const { return xs_.front(); }
  const Rational& hi() const { return xs_.back(); }
  const std::vector<Rational>& breakpoints() const { return xs_; }
  const std::vector<Rational>& values() const { return ys_; }
  Rational operator()(const Rational& x) const;

  Rational min() const;
  // Smallest minimizer.
  Rational argmin() const;

  // The flat stretch [a, b] of the 1-Lipschitz envelope
  // z -> min_x f(x) + |x - z|: outside it the envelope has slope -1 / +1,
  // inside it equals f.
  std::pair<Rational, Rational> envelope_core() const;
  Rational envelope(const Rational& z) const;

 private:
  void check_convex() const;

  std::vector<Rational> xs_;
  std::vector<Rational> ys_;
};

// A sum of unary convex terms per variable plus couplings between
// consecutive variables, over a box:
//
//   sum_k [ slope_k * x_k + sum_j w_kj |x_k - c_kj| + constant_k ]
//     + sum_k link_k(x_k, x_{k+1}),   lo_k <= x_k <= hi_k,
//
// where a link is either absent (a constant) or |x_k - (sigma x_{k+1} + shift)|
// plus a constant. Independent chains are joined with absent links.
struct ChainVariable {
  Rational lo;
  Rational hi;
  Rational slope;
  Rational constant;
  std::vector<std::pair<Rational, Rational>> abs_terms;  // (center, weight >= 0)
};

struct ChainLink {
  bool coupled = false;
  int sigma = 1;
  Rational shift;
  Rational constant;
};

struct ChainProblem {
  std::vector<ChainVariable> variables;
  std::vector<ChainLink> links;  // links[k] joins variables k and k+1
};

struct ChainMinimum {
  std::vector<Rational> argmin;
  Rational value;
};

Rational evaluate(const ChainProblem& problem, const std::vector<Rational>& x);

// Exact global minimum by dynamic programming over the chain: each value
// function is convex piecewise linear in one variable, and passing through a
// coupling is the 1-Lipschitz envelope. Throws NonConvexError on negative
// weights and ValidationError on empty boxes or malformed chains.
ChainMinimum minimize_convex_pl(const ChainProblem& problem);

}  // namespace clustergeo
