#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixmax/error.hpp"
#include "mixmax/rational.hpp"

namespace mixmax {

struct Atom {
  Rational value;
  Rational mass;

  friend bool operator==(const Atom& a, const Atom& b) { return a.value == b.value && a.mass == b.mass; }
};

// Resource caps. Exceeding one raises CapacityError instead of thrashing.
struct Limits {
  std::size_t max_atoms = 1'000'000;
  std::uint64_t max_outcomes = 10'000'000;
};

enum class Side { left, right };

// A probability law on finitely many non-negative rational points.
//
// Canonical form: values strictly increasing, every mass positive, masses
// summing to exactly 1. Construction sorts the input and merges entries that
// share a value, so two distributions are equal iff their atom lists are.
class FiniteDistribution {
 public:
  explicit FiniteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw PreconditionError("distribution has no atoms");
    for (const auto& a : atoms_) {
      if (a.value < 0) throw PreconditionError("negative atom value " + to_string(a.value));
      if (a.mass <= 0) throw PreconditionError("non-positive atom mass " + to_string(a.mass));
    }
    std::stable_sort(atoms_.begin(), atoms_.end(),
                     [](const Atom& x, const Atom& y) { return x.value < y.value; });
    std::vector<Atom> merged;
    merged.reserve(atoms_.size());
    for (auto& a : atoms_) {
      if (!merged.empty() && merged.back().value == a.value) {
        merged.back().mass += a.mass;
      } else {
        merged.push_back(std::move(a));
      }
    }
    atoms_ = std::move(merged);

    cumulative_.reserve(atoms_.size());
    Rational running = 0;
    for (const auto& a : atoms_) {
      running += a.mass;
      cumulative_.push_back(running);
    }
    if (running != 1) throw PreconditionError("masses sum to " + to_string(running) + ", not 1");
  }

  // Drops zero-mass entries before canonicalizing. For internal constructions
  // whose formulas may legitimately produce empty cells.
  static FiniteDistribution compact(std::vector<Atom> atoms) {
    std::erase_if(atoms, [](const Atom& a) { return a.mass == 0; });
    return FiniteDistribution(std::move(atoms));
  }

  static FiniteDistribution point_mass(const Rational& value) { return FiniteDistribution({{value, 1}}); }

  [[nodiscard]] std::span<const Atom> atoms() const { return atoms_; }
  [[nodiscard]] std::size_t size() const { return atoms_.size(); }
  [[nodiscard]] const Rational& min_value() const { return atoms_.front().value; }
  [[nodiscard]] const Rational& max_value() const { return atoms_.back().value; }

  // F(x) for Side::right, F(x-) for Side::left.
  [[nodiscard]] Rational cdf(const Rational& x, Side side = Side::right) const {
    auto it = side == Side::right
                  ? std::upper_bound(atoms_.begin(), atoms_.end(), x,
                                     [](const Rational& v, const Atom& a) { return v < a.value; })
                  : std::lower_bound(atoms_.begin(), atoms_.end(), x,
                                     [](const Atom& a, const Rational& v) { return a.value < v; });
    auto count = static_cast<std::size_t>(it - atoms_.begin());
    return count == 0 ? Rational(0) : cumulative_[count - 1];
  }

  // Cumulative mass through atom index i.
  [[nodiscard]] const Rational& cumulative(std::size_t i) const { return cumulative_[i]; }

  friend bool operator==(const FiniteDistribution& a, const FiniteDistribution& b) { return a.atoms_ == b.atoms_; }

 private:
  std::vector<Atom> atoms_;
  std::vector<Rational> cumulative_;
};

// n independent members; n is also the exponent in every M_i of this assembly.
class Assembly {
 public:
  explicit Assembly(std::vector<FiniteDistribution> members) : members_(std::move(members)) {
    if (members_.empty()) throw PreconditionError("assembly needs at least one member");
  }

  static Assembly similar(const FiniteDistribution& d, std::size_t n) {
    return Assembly(std::vector<FiniteDistribution>(n, d));
  }

  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] std::span<const FiniteDistribution> members() const { return members_; }
  [[nodiscard]] const FiniteDistribution& operator[](std::size_t i) const { return members_[i]; }

  [[nodiscard]] Assembly with_member(std::size_t i, FiniteDistribution d) const {
    auto copy = members_;
    copy.at(i) = std::move(d);
    return Assembly(std::move(copy));
  }

  friend bool operator==(const Assembly& a, const Assembly& b) { return a.members_ == b.members_; }

 private:
  std::vector<FiniteDistribution> members_;
};

// Right-continuous step CDF: plateaus[j] holds on [breakpoints[j], breakpoints[j+1]),
// the last plateau extends to infinity and equals 1. breakpoints[0] is 0.
struct SurvivalStep {
  std::vector<Rational> breakpoints;
  std::vector<Rational> plateaus;
};

inline Rational cdf(const FiniteDistribution& d, const Rational& x, Side side) { return d.cdf(x, side); }

inline Rational expected_value(const FiniteDistribution& d) {
  Rational sum = 0;
  for (const auto& a : d.atoms()) sum += a.value * a.mass;
  return sum;
}

// Sorted union of all support points, with 0 prepended when absent.
inline std::vector<Rational> merged_support(std::span<const FiniteDistribution> members, const Limits& limits = {}) {
  std::vector<Rational> grid{Rational(0)};
  std::size_t total = 1;
  for (const auto& d : members) total += d.size();
  grid.reserve(total);
  for (const auto& d : members) {
    for (const auto& a : d.atoms()) grid.push_back(a.value);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() > limits.max_atoms) {
    throw CapacityError("merged support of " + std::to_string(grid.size()) + " points exceeds the atom cap");
  }
  return grid;
}

namespace detail {

// Values of F at each grid point, walking the atoms once.
inline std::vector<Rational> cdf_on_grid(const FiniteDistribution& d, std::span<const Rational> grid) {
  std::vector<Rational> out;
  out.reserve(grid.size());
  auto atoms = d.atoms();
  std::size_t next = 0;
  Rational running = 0;
  for (const auto& x : grid) {
    while (next < atoms.size() && atoms[next].value <= x) running = d.cumulative(next++);
    out.push_back(running);
  }
  return out;
}

}  // namespace detail

// CDF of the maximum of independent members: the pointwise product of their CDFs.
inline SurvivalStep product_cdf(std::span<const FiniteDistribution> members, const Limits& limits = {}) {
  SurvivalStep step;
  step.breakpoints = merged_support(members, limits);
  step.plateaus.assign(step.breakpoints.size(), Rational(1));
  for (const auto& d : members) {
    auto f = detail::cdf_on_grid(d, step.breakpoints);
    for (std::size_t j = 0; j < f.size(); ++j) step.plateaus[j] *= f[j];
  }
  return step;
}

inline SurvivalStep power_cdf(const FiniteDistribution& d, unsigned long n) {
  SurvivalStep step;
  FiniteDistribution single[] = {d};
  step.breakpoints = merged_support(single);
  for (const auto& f : detail::cdf_on_grid(d, step.breakpoints)) step.plateaus.push_back(ipow(f, n));
  return step;
}

// Integral over [0, inf) of 1 - G for a step CDF G.
inline Rational integrate_survival(const SurvivalStep& step) {
  if (step.plateaus.empty() || step.plateaus.back() != 1) {
    throw InvariantError("step CDF does not reach 1 at its last breakpoint");
  }
  Rational sum = 0;
  for (std::size_t j = 0; j + 1 < step.breakpoints.size(); ++j) {
    sum += (step.breakpoints[j + 1] - step.breakpoints[j]) * (1 - step.plateaus[j]);
  }
  return sum;
}

// The distribution whose CDF is the given step function.
inline FiniteDistribution to_distribution(const SurvivalStep& step) {
  std::vector<Atom> atoms;
  Rational previous = 0;
  for (std::size_t j = 0; j < step.breakpoints.size(); ++j) {
    atoms.push_back({step.breakpoints[j], step.plateaus[j] - previous});
    previous = step.plateaus[j];
  }
  return FiniteDistribution::compact(std::move(atoms));
}

// E[max of the members], as the survival integral of the product CDF.
inline Rational expected_max(const Assembly& a, const Limits& limits = {}) {
  return integrate_survival(product_cdf(a.members(), limits));
}

// E of the maximum of n independent copies of d.
inline Rational similar_max_mean(const FiniteDistribution& d, unsigned long n) {
  if (n == 0) throw PreconditionError("similar_max_mean: n must be positive");
  return integrate_survival(power_cdf(d, n));
}

// Law of the maximum of the given independent members.
inline FiniteDistribution max_distribution(std::span<const FiniteDistribution> members, const Limits& limits = {}) {
  return to_distribution(product_cdf(members, limits));
}

// Law of the maximum of n independent copies of d.
inline FiniteDistribution similar_max_distribution(const FiniteDistribution& d, unsigned long n) {
  return to_distribution(power_cdf(d, n));
}

// Equally-weighted probability mixture of the members.
inline FiniteDistribution mixture(std::span<const FiniteDistribution> members, const Limits& limits = {}) {
  if (members.empty()) throw PreconditionError("mixture of no members");
  auto grid = merged_support(members, limits);
  std::vector<Rational> mass(grid.size(), Rational(0));
  for (const auto& d : members) {
    for (const auto& a : d.atoms()) {
      auto it = std::lower_bound(grid.begin(), grid.end(), a.value);
      mass[static_cast<std::size_t>(it - grid.begin())] += a.mass;
    }
  }
  const Rational weight(1, members.size());
  std::vector<Atom> atoms;
  for (std::size_t j = 0; j < grid.size(); ++j) atoms.push_back({grid[j], mass[j] * weight});
  return FiniteDistribution::compact(std::move(atoms));
}

inline FiniteDistribution mixture(const Assembly& a, const Limits& limits = {}) { return mixture(a.members(), limits); }

// A CDF on [0, inf) given by evaluators for F(x) and its left limit F(x-).
struct CdfEvaluator {
  std::function<Rational(const Rational&)> at;
  std::function<Rational(const Rational&)> left_limit;
};

inline CdfEvaluator cdf_evaluator(FiniteDistribution d) {
  auto shared = std::make_shared<const FiniteDistribution>(std::move(d));
  return {[shared](const Rational& x) { return shared->cdf(x, Side::right); },
          [shared](const Rational& x) { return shared->cdf(x, Side::left); }};
}

// Continuous uniform law on [lo, hi].
inline CdfEvaluator uniform_cdf(const Rational& lo, const Rational& hi) {
  if (!(0 <= lo && lo < hi)) throw PreconditionError("uniform_cdf needs 0 <= lo < hi");
  auto f = [lo, hi](const Rational& x) -> Rational {
    if (x <= lo) return 0;
    if (x >= hi) return 1;
    return (x - lo) / (hi - lo);
  };
  return {f, f};
}

// Dyadic lower approximation of level m: cell [(l-1)/2^m, l/2^m) for
// l = 1..m*2^m sends its mass to its left end, and everything at or above m
// lands on the atom m.
inline FiniteDistribution discretize(const CdfEvaluator& F, unsigned m, const Limits& limits = {}) {
  if (m == 0) throw PreconditionError("discretize: m must be at least 1");
  if (m >= 40 || (static_cast<std::uint64_t>(m) << m) + 1 > limits.max_atoms) {
    throw CapacityError("discretize: m*2^m cells exceed the atom cap");
  }
  const std::uint64_t cells = static_cast<std::uint64_t>(m) << m;
  mpz_class denominator = mpz_class(1) << m;
  auto grid_point = [&](std::uint64_t l) {
    Rational r(mpz_class(std::to_string(l)), denominator);
    r.canonicalize();
    return r;
  };

  std::vector<Atom> atoms;
  Rational previous = F.left_limit(Rational(0));
  if (previous != 0) throw PreconditionError("discretize: evaluator puts mass below 0");
  for (std::uint64_t l = 1; l <= cells; ++l) {
    Rational current = F.left_limit(grid_point(l));
    Rational mass = current - previous;
    if (mass < 0) throw PreconditionError("discretize: evaluator is not monotone");
    if (mass > 0) atoms.push_back({grid_point(l - 1), mass});
    previous = std::move(current);
  }
  Rational tail = 1 - previous;
  if (tail < 0) throw PreconditionError("discretize: evaluator exceeds 1");
  if (tail > 0) atoms.push_back({Rational(m), tail});
  return FiniteDistribution(std::move(atoms));
}

}  // namespace mixmax
