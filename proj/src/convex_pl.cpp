#include "clustergeo/convex_pl.hpp"

#include <algorithm>

#include "clustergeo/errors.hpp"

namespace clustergeo {

ConvexPL::ConvexPL(Rational lo, Rational hi, const Rational& value) {
  if (hi < lo) throw ValidationError("empty interval for piecewise-linear function");
  xs_.push_back(std::move(lo));
  ys_.push_back(value);
  if (xs_.front() != hi) {
    xs_.push_back(std::move(hi));
    ys_.push_back(value);
  }
}

ConvexPL::ConvexPL(std::vector<Rational> xs, std::vector<Rational> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.empty() || xs_.size() != ys_.size()) throw ValidationError("malformed piecewise-linear function");
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    if (!(xs_[i - 1] < xs_[i])) throw ValidationError("breakpoints must increase");
  }
  check_convex();
}

void ConvexPL::check_convex() const {
  for (std::size_t i = 2; i < xs_.size(); ++i) {
    const Rational left = (ys_[i - 1] - ys_[i - 2]) / (xs_[i - 1] - xs_[i - 2]);
    const Rational right = (ys_[i] - ys_[i - 1]) / (xs_[i] - xs_[i - 1]);
    if (right < left) throw NonConvexError("slope decreases at " + to_string(xs_[i - 1]));
  }
}

Rational ConvexPL::operator()(const Rational& x) const {
  if (x < lo() || x > hi()) throw ValidationError("evaluation outside domain");
  const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  const auto i = static_cast<std::size_t>(it - xs_.begin());
  if (*it == x) return ys_[i];
  // xs_[i-1] < x < xs_[i]
  return ys_[i - 1] + (ys_[i] - ys_[i - 1]) * (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
}

Rational ConvexPL::min() const { return *std::min_element(ys_.begin(), ys_.end()); }

Rational ConvexPL::argmin() const {
  const auto it = std::min_element(ys_.begin(), ys_.end());
  return xs_[static_cast<std::size_t>(it - ys_.begin())];
}

std::pair<Rational, Rational> ConvexPL::envelope_core() const {
  const std::size_t n = xs_.size();
  std::size_t a = n - 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (ys_[i + 1] - ys_[i] >= -(xs_[i + 1] - xs_[i])) {
      a = i;
      break;
    }
  }
  std::size_t b = 0;
  for (std::size_t i = n - 1; i > 0; --i) {
    if (ys_[i] - ys_[i - 1] <= xs_[i] - xs_[i - 1]) {
      b = i;
      break;
    }
  }
  return {xs_[a], xs_[b]};
}

Rational ConvexPL::envelope(const Rational& z) const {
  const auto [a, b] = envelope_core();
  if (z < a) return (*this)(a) + (a - z);
  if (z > b) return (*this)(b) + (z - b);
  return (*this)(z);
}

// ---------------------------------------------------------------------------

namespace {

Rational unary_value(const ChainVariable& v, const Rational& x) {
  Rational out = v.slope * x + v.constant;
  for (const auto& [center, weight] : v.abs_terms) out += weight * abs_diff(x, center);
  return out;
}

void check_problem(const ChainProblem& problem) {
  if (problem.variables.empty()) throw ValidationError("chain problem has no variables");
  if (problem.links.size() + 1 != problem.variables.size()) {
    throw ValidationError("chain problem needs one link between consecutive variables");
  }
  for (const auto& v : problem.variables) {
    if (v.hi < v.lo) throw ValidationError("empty box in chain problem");
    for (const auto& term : v.abs_terms) {
      if (term.second < 0) throw NonConvexError("negative weight on an absolute-value term");
    }
  }
  for (const auto& l : problem.links) {
    if (l.coupled && l.sigma != 1 && l.sigma != -1) throw ValidationError("link sigma must be +1 or -1");
  }
}

}  // namespace

Rational evaluate(const ChainProblem& problem, const std::vector<Rational>& x) {
  check_problem(problem);
  if (x.size() != problem.variables.size()) throw ValidationError("point dimension mismatch");
  Rational total;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const auto& v = problem.variables[k];
    if (x[k] < v.lo || x[k] > v.hi) throw ValidationError("point outside box");
    total += unary_value(v, x[k]);
  }
  for (std::size_t k = 0; k < problem.links.size(); ++k) {
    const auto& l = problem.links[k];
    total += l.constant;
    if (l.coupled) total += abs_diff(x[k], l.sigma * x[k + 1] + l.shift);
  }
  return total;
}

ChainMinimum minimize_convex_pl(const ChainProblem& problem) {
  check_problem(problem);
  const auto& vars = problem.variables;
  std::vector<ConvexPL> value;
  value.reserve(vars.size());

  std::vector<Rational> xs;
  std::vector<Rational> ys;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const auto& v = vars[k];
    xs.clear();
    xs.push_back(v.lo);
    xs.push_back(v.hi);
    for (const auto& term : v.abs_terms) {
      if (v.lo < term.first && term.first < v.hi) xs.push_back(term.first);
    }
    const ChainLink* link = k > 0 ? &problem.links[k - 1] : nullptr;
    std::pair<Rational, Rational> core;
    Rational carried;
    if (link && link->coupled) {
      // Envelope breakpoints live at z = sigma * y + shift.
      const auto& prev = value.back();
      core = prev.envelope_core();
      for (const auto& z : prev.breakpoints()) {
        if (z < core.first || z > core.second) continue;
        const Rational y = link->sigma * (z - link->shift);
        if (v.lo < y && y < v.hi) xs.push_back(y);
      }
    } else if (link) {
      carried = value.back().min();
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    ys.clear();
    for (const auto& y : xs) {
      Rational f = unary_value(v, y);
      if (link) {
        f += link->constant;
        f += link->coupled ? value.back().envelope(link->sigma * y + link->shift) : carried;
      }
      ys.push_back(std::move(f));
    }
    value.emplace_back(xs, ys);
  }

  ChainMinimum out;
  out.argmin.resize(vars.size());
  out.value = value.back().min();
  out.argmin.back() = value.back().argmin();
  for (std::size_t k = vars.size() - 1; k > 0; --k) {
    const auto& link = problem.links[k - 1];
    if (link.coupled) {
      const auto [a, b] = value[k - 1].envelope_core();
      out.argmin[k - 1] = clamp(link.sigma * out.argmin[k] + link.shift, a, b);
    } else {
      out.argmin[k - 1] = value[k - 1].argmin();
    }
  }
  return out;
}

}  // namespace clustergeo
