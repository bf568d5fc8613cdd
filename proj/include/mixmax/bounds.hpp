#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mixmax/dist.hpp"
#include "mixmax/enclosure.hpp"
#include "mixmax/error.hpp"
#include "mixmax/rational.hpp"

namespace mixmax {

inline constexpr double default_tolerance = 1e-12;

struct BoundPair {
  Rational lower;
  Rational upper;
};

namespace detail {

inline Rational mean_of(std::span<const Rational> values) {
  Rational sum = 0;
  for (const auto& v : values) sum += v;
  return sum / Rational(values.size());
}

inline Rational max_of(std::span<const Rational> values) { return *std::max_element(values.begin(), values.end()); }

inline Rational tolerance(double tol) {
  if (!(tol > 0)) throw PreconditionError("tolerance must be positive");
  return from_double(tol);
}

}  // namespace detail

// M_i for every member, with n = assembly size.
inline std::vector<Rational> similar_max_means(const Assembly& a) {
  std::vector<Rational> m;
  m.reserve(a.size());
  for (const auto& d : a.members()) m.push_back(similar_max_mean(d, a.size()));
  return m;
}

// (M_bar, M_bar + (n-1)/n * M_max).
inline BoundPair theorem1_bounds(std::span<const Rational> m_list) {
  if (m_list.empty()) throw PreconditionError("theorem1_bounds: empty M list");
  for (const auto& m : m_list) {
    if (m < 0) throw PreconditionError("theorem1_bounds: negative M");
  }
  const Rational n(m_list.size());
  Rational mean = detail::mean_of(m_list);
  return {mean, mean + (n - 1) / n * detail::max_of(m_list)};
}

// Assembly made of k similar m-assemblies: the upper slack shrinks to (k-1)/k.
inline BoundPair grouped_bounds(std::span<const Rational> m_list, std::size_t k, std::size_t m) {
  if (k == 0 || m == 0 || k * m != m_list.size()) {
    throw PreconditionError("grouped_bounds: k*m must equal the number of M values");
  }
  const Rational groups(k);
  Rational mean = detail::mean_of(m_list);
  return {mean, mean + (groups - 1) / groups * detail::max_of(m_list)};
}

// E of the max of n copies of the equal-weight mixture. Depends on the
// distributions themselves, not only on M_1..M_n.
inline Rational sen_lower(const Assembly& a) { return similar_max_mean(mixture(a), a.size()); }

// prod F_i(x) <= (mean F_i(x))^n at every point of the merged support.
inline bool sen_dominance_check(const Assembly& a) {
  auto grid = merged_support(a.members());
  const auto n = a.size();
  std::vector<Rational> product(grid.size(), Rational(1));
  std::vector<Rational> sum(grid.size(), Rational(0));
  for (const auto& d : a.members()) {
    auto f = detail::cdf_on_grid(d, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      product[j] *= f[j];
      sum[j] += f[j];
    }
  }
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (product[j] > ipow(sum[j] / Rational(n), n)) return false;
  }
  return true;
}

// b - prod (b - M_i)^(1/n), enclosed to width tol. b must bound every member.
inline Enclosure holder_lower(std::span<const Rational> m_list, const Rational& b, std::size_t n,
                              double tol = default_tolerance) {
  if (m_list.empty() || m_list.size() != n) throw PreconditionError("holder_lower: need exactly n M values");
  Rational product = 1;
  for (const auto& m : m_list) {
    if (m < 0) throw PreconditionError("holder_lower: negative M");
    if (m > b) throw PreconditionError("holder_lower: M " + to_string(m) + " exceeds the bound " + to_string(b));
    product *= b - m;
  }
  return b - nth_root(product, static_cast<unsigned>(n), detail::tolerance(tol));
}

// Largest support point over all members; the tightest common bound.
inline Rational default_bound(const Assembly& a) {
  Rational b = 0;
  for (const auto& d : a.members()) b = std::max(b, d.max_value());
  return b;
}

// Gap between arithmetic and geometric means of step CDFs G_1..G_n, computed
// two ways: directly as an integral, and as E[V] - E[U] where U is the
// equal-weight mixture of the Y_i ~ G_i and V has CDF (prod G_i)^(1/n).
struct GamGap {
  Enclosure integral_form;
  Enclosure probabilistic_form;
  Enclosure expected_v;
  Rational expected_u;
  Rational bound;  // (1 - 1/n) * max_i E[Y_i]

  [[nodiscard]] bool within(double tol) const {
    Rational t = from_double(tol);
    for (const auto* g : {&integral_form, &probabilistic_form}) {
      if (g->hi < -t || g->lo > bound + t) return false;
    }
    // Two independent routes must overlap up to the tolerance.
    return integral_form.lo <= probabilistic_form.hi + t && probabilistic_form.lo <= integral_form.hi + t;
  }
};

inline GamGap gam_gap_of(std::span<const FiniteDistribution> ys, double tol = default_tolerance) {
  if (ys.empty()) throw PreconditionError("gam_gap: no distributions");
  const auto n = static_cast<unsigned>(ys.size());
  auto grid = merged_support(ys);
  std::vector<std::vector<Rational>> g;
  g.reserve(n);
  for (const auto& y : ys) g.push_back(detail::cdf_on_grid(y, grid));

  const Rational length = grid.back() > 1 ? grid.back() : Rational(1);
  // Each root is tight enough that all rounding summed over the grid stays below tol/4.
  const Rational root_tol = detail::tolerance(tol) / (4 * length * Rational(n));

  Enclosure integral = Enclosure::exact(0);
  Enclosure ev = Enclosure::exact(0);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const Rational width = grid[j + 1] - grid[j];
    Rational mean = 0;
    Rational product = 1;
    Enclosure product_of_roots = Enclosure::exact(1);
    for (unsigned i = 0; i < n; ++i) {
      mean += g[i][j];
      product *= g[i][j];
      product_of_roots = multiply_nonneg(product_of_roots, nth_root(g[i][j], n, root_tol));
    }
    mean /= Rational(n);
    integral = integral + scale(mean - nth_root(product, n, root_tol), width);
    ev = ev + scale(1 - product_of_roots, width);
  }

  GamGap out;
  out.integral_form = integral;
  out.expected_v = ev;
  out.expected_u = expected_value(mixture(ys));
  out.probabilistic_form = ev + Rational(-out.expected_u);
  Rational max_mean = 0;
  for (const auto& y : ys) max_mean = std::max(max_mean, expected_value(y));
  out.bound = (1 - Rational(1, n)) * max_mean;
  return out;
}

// The assembly form: G_i = F_i^n, so each E[Y_i] is M_i.
inline GamGap gam_gap(const Assembly& a, double tol = default_tolerance) {
  std::vector<FiniteDistribution> ys;
  ys.reserve(a.size());
  for (const auto& d : a.members()) ys.push_back(similar_max_distribution(d, a.size()));
  return gam_gap_of(ys, tol);
}

struct ChainChecks {
  bool mbar_le_sen = false;
  bool sen_le_exact = false;
  bool exact_le_upper = false;
  std::optional<bool> holder_le_exact;
  std::optional<bool> mbar_le_holder;

  [[nodiscard]] bool all() const {
    return mbar_le_sen && sen_le_exact && exact_le_upper && holder_le_exact.value_or(true) &&
           mbar_le_holder.value_or(true);
  }
};

struct BoundReport {
  std::size_t n = 0;
  std::vector<Rational> m_list;
  Rational m_bar;
  Rational m_max;
  Rational exact_e;
  Rational sen_e;  // distribution-dependent, not a function of M_1..M_n
  Rational upper;
  std::optional<Rational> bound;
  std::optional<Enclosure> holder_lower;
  // exact_e / m_max; taken as 1 when every M_i is 0 (then exact_e is 0 too).
  Rational theta;
  ChainChecks chain;
};

inline BoundReport full_report(const Assembly& a, std::optional<Rational> b = std::nullopt,
                               double tol = default_tolerance) {
  BoundReport r;
  r.n = a.size();
  r.m_list = similar_max_means(a);
  auto [lower, upper] = theorem1_bounds(r.m_list);
  r.m_bar = lower;
  r.upper = upper;
  r.m_max = detail::max_of(r.m_list);
  r.exact_e = expected_max(a);
  r.sen_e = sen_lower(a);
  r.theta = r.m_max == 0 ? Rational(1) : Rational(r.exact_e / r.m_max);

  r.chain.mbar_le_sen = r.m_bar <= r.sen_e;
  r.chain.sen_le_exact = r.sen_e <= r.exact_e;
  r.chain.exact_le_upper = r.exact_e <= r.upper;

  if (b) {
    if (*b < default_bound(a)) {
      throw PreconditionError("bound " + to_string(*b) + " is below the largest support point " +
                              to_string(default_bound(a)));
    }
    r.bound = b;
    r.holder_lower = holder_lower(r.m_list, *b, r.n, tol);
    const Rational t = from_double(tol);
    const Rational value = r.holder_lower->midpoint();
    r.chain.holder_le_exact = value <= r.exact_e + t;
    r.chain.mbar_le_holder = r.m_bar <= value + t;
  }
  return r;
}

// True iff E[X_(n)] = M_bar. Equality forces identical members; anything else
// is reported as an invariant breach.
inline bool equality_diagnosis(const Assembly& a) {
  auto m = similar_max_means(a);
  if (expected_max(a) != detail::mean_of(m)) return false;
  for (const auto& d : a.members()) {
    if (!(d == a[0])) throw InvariantError("E[max] equals M_bar but the members are not identical");
  }
  return true;
}

}  // namespace mixmax
