#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mixmax/bounds.hpp"
#include "mixmax/dist.hpp"
#include "mixmax/error.hpp"
#include "mixmax/rational.hpp"

namespace mixmax {

struct ExtremalSpec {
  std::vector<Rational> m_list;  // non-decreasing and positive; the last entry is the maximum
  Rational closeness;            // target gap to the upper bound
  std::optional<std::vector<Rational>> p_schedule;  // P[X_k = 0] for k = 1..n-1
};

struct ExtremalResult {
  Assembly assembly;
  Rational gap;
  Rational theta;
  std::size_t rounds = 0;           // tightening rounds used; 0 for explicit schedules
  std::optional<Rational> delta;    // final base delta of the automatic schedule
  std::vector<Rational> gap_trace;  // gap after each valid round
};

// Supremum of the mixing factor over assemblies with equal M_i.
inline Rational theta_sup(std::size_t n) {
  if (n == 0) throw PreconditionError("theta_sup: n must be positive");
  return 2 - Rational(1, n);
}

// Slack left under the upper bound M_bar + (n-1)/n M_max.
inline Rational gap(const Assembly& a) {
  auto m = similar_max_means(a);
  return theorem1_bounds(m).upper - expected_max(a);
}

inline Rational mixing_factor(const Assembly& a) {
  auto m = similar_max_means(a);
  Rational m_max = detail::max_of(m);
  return m_max == 0 ? Rational(1) : Rational(expected_max(a) / m_max);
}

namespace detail {

inline void validate(const std::vector<Rational>& m_list) {
  if (m_list.empty()) throw PreconditionError("extremal: empty M list");
  for (std::size_t k = 0; k < m_list.size(); ++k) {
    if (m_list[k] <= 0) throw PreconditionError("extremal: M values must be positive");
    if (k > 0 && m_list[k] < m_list[k - 1]) throw PreconditionError("extremal: M values must be non-decreasing");
  }
}

}  // namespace detail

// X_n is the constant M_n; X_k = {0: p_k, x_k: 1 - p_k} with x_k = M_k / (1 - p_k^n).
// Fails unless M_n < x_1 < ... < x_{n-1}.
inline Assembly extremal_assembly(const std::vector<Rational>& m_list, const std::vector<Rational>& p_schedule) {
  detail::validate(m_list);
  const auto n = m_list.size();
  if (p_schedule.size() + 1 != n) throw PreconditionError("extremal: p schedule needs n-1 entries");
  std::vector<FiniteDistribution> members;
  Rational previous = m_list.back();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Rational& p = p_schedule[k];
    if (p <= 0 || p >= 1) throw PreconditionError("extremal: p_k must lie in (0,1)");
    Rational x = m_list[k] / (1 - ipow(p, n));
    if (x <= previous) {
      throw PreconditionError("extremal: ordering M_n < x_1 < ... < x_{n-1} fails at k = " + std::to_string(k + 1));
    }
    previous = x;
    members.push_back(FiniteDistribution({{0, p}, {x, 1 - p}}));
  }
  members.push_back(FiniteDistribution::point_mass(m_list.back()));
  return Assembly(std::move(members));
}

// p_k = 1 - delta (1 + (n-k)/1000): slightly larger deltas for smaller k keep
// x_1 < ... < x_{n-1} strict even when the M_k coincide.
inline std::vector<Rational> staggered_schedule(std::size_t n, const Rational& delta) {
  std::vector<Rational> p;
  for (std::size_t k = 1; k < n; ++k) p.push_back(1 - delta * (1 + make_rational(static_cast<long>(n - k), 1000)));
  return p;
}

inline constexpr std::size_t max_tightening_rounds = 60;

inline ExtremalResult build(const ExtremalSpec& spec) {
  detail::validate(spec.m_list);
  if (spec.closeness <= 0) throw PreconditionError("extremal: closeness must be positive");
  const auto n = spec.m_list.size();

  if (spec.p_schedule) {
    Assembly a = extremal_assembly(spec.m_list, *spec.p_schedule);
    Rational g = gap(a);
    Rational t = mixing_factor(a);
    return {std::move(a), g, t, 0, std::nullopt, {g}};
  }

  std::vector<Rational> trace;
  Rational delta(1, 2);
  for (std::size_t round = 1; round <= max_tightening_rounds; ++round, delta /= 10) {
    if (n == 1) {
      Assembly a({FiniteDistribution::point_mass(spec.m_list[0])});
      return {std::move(a), 0, 1, round, delta, {Rational(0)}};
    }
    std::optional<Assembly> candidate;
    try {
      candidate.emplace(extremal_assembly(spec.m_list, staggered_schedule(n, delta)));
    } catch (const PreconditionError&) {
      continue;  // ordering not reached yet
    }
    Rational g = gap(*candidate);
    trace.push_back(g);
    if (g <= spec.closeness) {
      Rational t = mixing_factor(*candidate);
      return {std::move(*candidate), g, t, round, delta, std::move(trace)};
    }
  }
  throw CapacityError("extremal: closeness not reached within " + std::to_string(max_tightening_rounds) +
                      " tightening rounds");
}

}  // namespace mixmax
