#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "mixmax/dist.hpp"
#include "support/generators.hpp"

// Random valid inputs for the three support transforms.

namespace mixmax::testing {

struct CoalesceInstance {
  FiniteDistribution d;
  FiniteDistribution companion;
  Rational a;
  Rational b;
  unsigned long n;
};

// The interval runs between consecutive companion atoms (or to 0, or to 30),
// so the companion has no mass strictly inside it. Returns nothing when d
// happens to miss the interval.
inline std::optional<CoalesceInstance> coalesce_instance(Generator& gen) {
  auto d = gen.distribution(2, 6);
  auto y = gen.distribution(1, 4);
  std::vector<Rational> cuts{0, 30};
  for (const auto& atom : y.atoms()) cuts.push_back(atom.value);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const auto k = gen.uniform(0, cuts.size() - 2);
  const Rational a = cuts[k];
  const Rational b = cuts[k + 1];
  if (d.cdf(b, Side::right) == d.cdf(a, Side::left)) return std::nullopt;
  return CoalesceInstance{d, y, a, b, gen.uniform(1, 5)};
}

struct ReduceInstance {
  FiniteDistribution d;
  FiniteDistribution companion;
  Rational l;
  Rational r;
  unsigned long n;
};

// d has exactly two atoms strictly inside (l, r), plus optional atoms at or
// outside the endpoints.
inline ReduceInstance reduce_instance(Generator& gen) {
  const Rational l = make_rational(static_cast<long>(gen.uniform(0, 8)), 2);
  const Rational r = l + make_rational(static_cast<long>(gen.uniform(2, 12)), 2);
  std::set<Rational> inner;
  while (inner.size() < 2) {
    inner.insert(l + make_rational(static_cast<long>(gen.uniform(1, 999)), 1000) * (r - l));
  }
  std::vector<Rational> values(inner.begin(), inner.end());
  if (l > 0 && gen.uniform(0, 1) == 1) values.push_back(l - make_rational(static_cast<long>(gen.uniform(0, 2)), 4));
  if (gen.uniform(0, 1) == 1) values.push_back(r + make_rational(static_cast<long>(gen.uniform(0, 8)), 2));
  auto masses = gen.masses(values.size());
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < values.size(); ++i) atoms.push_back({values[i], masses[i]});
  return {FiniteDistribution(std::move(atoms)), gen.distribution(1, 5), l, r, gen.uniform(1, 5)};
}

struct DownInstance {
  Assembly a;
  Rational lo;
  Rational hi;
};

// hi is at or above every member's smallest atom, so each P[X_i <= hi] > 0.
inline DownInstance down_instance(Generator& gen) {
  auto a = gen.assembly(2, 5);
  Rational floor = 0;
  for (const auto& d : a.members()) floor = std::max(floor, d.min_value());
  const Rational hi = floor + make_rational(static_cast<long>(gen.uniform(1, 20)), 2);
  const Rational lo = hi * make_rational(static_cast<long>(gen.uniform(0, 9)), 10);
  return {std::move(a), lo, hi};
}

inline std::size_t atoms_strictly_inside(const FiniteDistribution& d, const Rational& lo, const Rational& hi) {
  return static_cast<std::size_t>(std::count_if(d.atoms().begin(), d.atoms().end(), [&](const Atom& atom) {
    return lo < atom.value && atom.value < hi;
  }));
}

}  // namespace mixmax::testing
