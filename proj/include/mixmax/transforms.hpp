#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "mixmax/bounds.hpp"
#include "mixmax/dist.hpp"
#include "mixmax/enclosure.hpp"
#include "mixmax/error.hpp"
#include "mixmax/rational.hpp"

// Distribution surgeries that keep every M_i fixed while moving E[max] in a
// known direction. Each returns the new law together with a certificate.

namespace mixmax {

enum class Direction { increased, decreased, unchanged };

inline Direction direction_of(const Rational& delta) {
  if (delta > 0) return Direction::increased;
  if (delta < 0) return Direction::decreased;
  return Direction::unchanged;
}

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::increased: return "increased";
    case Direction::decreased: return "decreased";
    case Direction::unchanged: return "unchanged";
  }
  return "?";
}

template <class Result, class Details>
struct TransformOutcome {
  Result result;
  // New minus old M, per transformed member. Zero for the exact transforms.
  std::vector<Rational> m_residual;
  // Change in E[X v Y] (single-member transforms) or E[X_(n)] (assembly).
  Rational e_delta;
  Direction direction;
  Details details;
};

namespace detail {

// Contribution of the atoms with values in [lo, hi] to E of the max of n copies.
inline Rational max_contribution(const FiniteDistribution& d, const Rational& lo, const Rational& hi,
                                 unsigned long n) {
  Rational sum = 0;
  for (const auto& a : d.atoms()) {
    if (a.value < lo || a.value > hi) continue;
    sum += a.value * (ipow(d.cdf(a.value, Side::right), n) - ipow(d.cdf(a.value, Side::left), n));
  }
  return sum;
}

inline Rational expected_max_pair(const FiniteDistribution& x, const FiniteDistribution& y) {
  return expected_max(Assembly({x, y}));
}

}  // namespace detail

struct CoalesceDetails {
  Rational merged_at;         // x
  Rational interval_mass;     // p
  Rational conditional_mean;  // E[d | a <= d <= b]
  // p * P[Y <= a] * (x - conditional_mean); always equals e_delta.
  Rational certificate;
};

using CoalesceOutcome = TransformOutcome<FiniteDistribution, CoalesceDetails>;

// Replace every atom of d in [a, b] by a single atom x carrying the same mass,
// where x matches the interval's contribution to E[d^(n)]. Requires the
// companion to put no mass strictly inside (a, b).
inline CoalesceOutcome coalesce(const FiniteDistribution& d, const Rational& a, const Rational& b,
                                const FiniteDistribution& companion, unsigned long n) {
  if (n == 0) throw PreconditionError("coalesce: n must be positive");
  if (!(0 <= a && a <= b)) throw PreconditionError("coalesce: need 0 <= a <= b");
  if (companion.cdf(b, Side::left) != companion.cdf(a, Side::right)) {
    throw PreconditionError("companion has mass in (a,b)");
  }
  const Rational p = d.cdf(b, Side::right) - d.cdf(a, Side::left);
  if (p == 0) throw PreconditionError("d has zero mass in [a,b]");

  Rational weighted = 0;
  std::vector<Atom> atoms;
  for (const auto& atom : d.atoms()) {
    if (atom.value < a || atom.value > b) {
      atoms.push_back(atom);
    } else {
      weighted += atom.value * atom.mass;
    }
  }
  const Rational denominator = ipow(d.cdf(b, Side::right), n) - ipow(d.cdf(a, Side::left), n);
  const Rational x = detail::max_contribution(d, a, b, n) / denominator;
  atoms.push_back({x, p});
  FiniteDistribution result(std::move(atoms));

  CoalesceDetails details{x, p, weighted / p, 0};
  details.certificate = p * companion.cdf(a, Side::right) * (x - details.conditional_mean);
  Rational e_delta = detail::expected_max_pair(result, companion) - detail::expected_max_pair(d, companion);
  if (e_delta != details.certificate) {
    throw InvariantError("coalesce: E[X v Y] change " + to_string(e_delta) + " disagrees with certificate " +
                         to_string(details.certificate));
  }
  std::vector<Rational> residual{similar_max_mean(result, n) - similar_max_mean(d, n)};
  Direction dir = direction_of(e_delta);
  return {std::move(result), std::move(residual), std::move(e_delta), dir, std::move(details)};
}

enum class ReduceScenario {
  move_apart,  // slope < 0: the low atom moves down, the high one up
  merge,       // slope > 0: both atoms meet at omega
  merge_tie,   // slope = 0: both atoms meet at omega
};

inline const char* to_string(ReduceScenario s) {
  switch (s) {
    case ReduceScenario::move_apart: return "move_apart";
    case ReduceScenario::merge: return "merge";
    case ReduceScenario::merge_tie: return "merge_tie";
  }
  return "?";
}

struct ReduceDetails {
  ReduceScenario scenario;
  Rational lambda;
  Rational slope;          // right derivative at u = a
  Rational omega;          // E[d^(n) | l < d^(n) < r]
  Rational low_atom;       // u
  Rational high_atom;      // V(u)
  std::optional<Rational> slope_at_omega;  // reported for merge_tie only
  Rational phi_delta;      // phi(u) - phi(a), always equals e_delta
};

using ReduceOutcome = TransformOutcome<FiniteDistribution, ReduceDetails>;

// d puts all of its mass inside (l, r) on two atoms a < b. Move them along the
// M-preserving line u -> (u, b - lambda (u - a)) in whichever direction raises
// E[d v Y], ending with at most one atom strictly inside (l, r).
inline ReduceOutcome reduce_pair(const FiniteDistribution& d, const Rational& l, const Rational& r,
                                 const FiniteDistribution& companion, unsigned long n) {
  if (n == 0) throw PreconditionError("reduce_pair: n must be positive");
  if (!(0 <= l && l < r)) throw PreconditionError("reduce_pair: need 0 <= l < r");
  std::vector<Atom> outside;
  std::vector<Atom> inside;
  for (const auto& atom : d.atoms()) {
    (l < atom.value && atom.value < r ? inside : outside).push_back(atom);
  }
  if (inside.size() != 2) throw PreconditionError("mass in (l,r) is not on exactly two atoms");
  const Rational& a = inside[0].value;
  const Rational& b = inside[1].value;
  const Rational& p = inside[0].mass;
  const Rational& q = inside[1].mass;

  const Rational fl = ipow(d.cdf(l, Side::right), n);
  const Rational fa = ipow(d.cdf(a, Side::right), n);
  const Rational fb = ipow(d.cdf(b, Side::right), n);
  if (fb == fa) throw InvariantError("reduce_pair: F(b)^n = F(a)^n with positive mass at b");

  ReduceDetails det;
  det.lambda = (fa - fl) / (fb - fa);
  det.omega = (a * (fa - fl) + b * (fb - fa)) / (fb - fl);
  det.slope = p * companion.cdf(a, Side::right) - q * det.lambda * companion.cdf(b, Side::left);
  auto partner = [&](const Rational& u) { return Rational(b - det.lambda * (u - a)); };

  if (det.slope < 0) {
    det.scenario = ReduceScenario::move_apart;
    // Stop where the high atom reaches r, or at l, whichever comes first.
    det.low_atom = std::max(l, Rational(a - (r - b) / det.lambda));
    det.high_atom = partner(det.low_atom);
  } else {
    det.scenario = det.slope > 0 ? ReduceScenario::merge : ReduceScenario::merge_tie;
    det.low_atom = det.omega;
    det.high_atom = det.omega;
    if (det.scenario == ReduceScenario::merge_tie) {
      det.slope_at_omega = p * companion.cdf(det.omega, Side::right) -
                           q * det.lambda * companion.cdf(det.omega, Side::left);
    }
  }

  auto phi = [&](const Rational& low, const Rational& high) {
    return Rational(p * detail::expected_max_pair(FiniteDistribution::point_mass(low), companion) +
                    q * detail::expected_max_pair(FiniteDistribution::point_mass(high), companion));
  };
  det.phi_delta = phi(det.low_atom, det.high_atom) - phi(a, b);

  auto atoms = outside;
  atoms.push_back({det.low_atom, p});
  atoms.push_back({det.high_atom, q});
  FiniteDistribution result(std::move(atoms));

  Rational e_delta = detail::expected_max_pair(result, companion) - detail::expected_max_pair(d, companion);
  if (e_delta != det.phi_delta) {
    throw InvariantError("reduce_pair: E[X v Y] change disagrees with phi(u) - phi(a)");
  }
  std::vector<Rational> residual{similar_max_mean(result, n) - similar_max_mean(d, n)};
  Direction dir = direction_of(e_delta);
  return {std::move(result), std::move(residual), std::move(e_delta), dir, std::move(det)};
}

// u p + v (1 - p) / (1 - p^n), continuously extended by u + v/n at p = 1.
// Increases from v to u + v/n when v < u.
inline Rational phi(const Rational& u, const Rational& v, const Rational& p, unsigned long n) {
  if (n == 0) throw PreconditionError("phi: n must be positive");
  if (p < 0 || p > 1) throw PreconditionError("phi: p must lie in [0,1]");
  if (p == 1) return u + v / Rational(n);
  return u * p + v * (1 - p) / (1 - ipow(p, n));
}

struct DownProjectDetails {
  // Share of each member's interval mass sent to lo, before rounding.
  // Absent for members with no mass in the interval.
  std::vector<std::optional<Enclosure>> alpha;
  std::vector<Rational> alpha_used;
};

using DownProjectOutcome = TransformOutcome<Assembly, DownProjectDetails>;

// Push each member's mass in [lo, hi] onto the two endpoints, keeping M_i
// fixed up to root rounding. E[X_(n)] does not increase.
inline DownProjectOutcome down_project(const Assembly& a, const Rational& lo, const Rational& hi,
                                       double tol = default_tolerance) {
  if (!(0 <= lo && lo < hi)) throw PreconditionError("down_project: need 0 <= lo < hi");
  const auto n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].cdf(hi, Side::right) == 0) {
      throw PreconditionError("member " + std::to_string(i + 1) + " has P[X <= hi] = 0");
    }
  }
  const Rational span_width = hi - lo;
  const Rational root_tol =
      detail::tolerance(tol) / (4 * Rational(n) * (span_width > 1 ? span_width : Rational(1)));

  DownProjectDetails det;
  std::vector<FiniteDistribution> members;
  std::vector<Rational> residual;
  for (const auto& d : a.members()) {
    const Rational below = d.cdf(lo, Side::left);
    const Rational top = d.cdf(hi, Side::right);
    const Rational p = top - below;
    if (p == 0) {
      members.push_back(d);
      residual.emplace_back(0);
      det.alpha.emplace_back();
      det.alpha_used.emplace_back(0);
      continue;
    }
    // E[(d^(n) - lo)^+ ; d^(n) <= hi]
    Rational excess = 0;
    for (const auto& atom : d.atoms()) {
      if (atom.value < lo || atom.value > hi) continue;
      excess += (atom.value - lo) * (ipow(d.cdf(atom.value, Side::right), n) -
                                     ipow(d.cdf(atom.value, Side::left), n));
    }
    const Rational target = ipow(top, n) - excess / span_width;
    if (target < 0) throw InvariantError("down_project: negative root argument");
    Enclosure root = nth_root(target, static_cast<unsigned>(n), root_tol);
    Enclosure alpha = scale(root + Rational(-below), 1 / p);
    Rational used = alpha.midpoint();
    if (alpha.hi < 0 || alpha.lo > 1) throw InvariantError("down_project: solved alpha outside [0,1]");
    used = std::clamp(used, Rational(0), Rational(1));

    std::vector<Atom> atoms;
    for (const auto& atom : d.atoms()) {
      if (atom.value < lo || atom.value > hi) atoms.push_back(atom);
    }
    atoms.push_back({lo, p * used});
    atoms.push_back({hi, p * (1 - used)});
    auto projected = FiniteDistribution::compact(std::move(atoms));
    residual.push_back(similar_max_mean(projected, n) - similar_max_mean(d, n));
    members.push_back(std::move(projected));
    det.alpha.emplace_back(alpha);
    det.alpha_used.push_back(used);
  }
  Assembly result(std::move(members));
  Rational e_delta = expected_max(result) - expected_max(a);
  Direction dir = direction_of(e_delta);
  return {std::move(result), std::move(residual), std::move(e_delta), dir, std::move(det)};
}

}  // namespace mixmax
