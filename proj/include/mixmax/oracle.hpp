#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mixmax/dist.hpp"
#include "mixmax/error.hpp"
#include "mixmax/rational.hpp"

// Ground truth that shares no code path with the survival-integral routines:
// brute-force enumeration of the product space, and seeded Monte Carlo.

namespace mixmax {

// Sum over every outcome tuple of (product of masses) * (max of values).
// The product space is walked as an odometer; only O(n) state is kept.
inline Rational enumerate_expected_max(const Assembly& a, const Limits& limits = {}) {
  const auto n = a.size();
  std::uint64_t outcomes = 1;
  for (const auto& d : a.members()) {
    outcomes *= d.size();
    if (outcomes > limits.max_outcomes) throw CapacityError("enumeration exceeds the outcome cap");
  }

  std::vector<std::size_t> index(n, 0);
  // prefix_mass[i], prefix_max[i] describe members 0..i-1 at the current indices.
  std::vector<Rational> prefix_mass(n + 1);
  std::vector<Rational> prefix_max(n + 1);
  prefix_mass[0] = 1;
  prefix_max[0] = 0;
  auto refresh = [&](std::size_t from) {
    for (std::size_t i = from; i < n; ++i) {
      const Atom& atom = a[i].atoms()[index[i]];
      prefix_mass[i + 1] = prefix_mass[i] * atom.mass;
      prefix_max[i + 1] = prefix_max[i] < atom.value ? atom.value : prefix_max[i];
    }
  };
  refresh(0);

  Rational total = 0;
  while (true) {
    total += prefix_mass[n] * prefix_max[n];
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++index[i] < a[i].size()) break;
      index[i] = 0;
      if (i == 0) return total;
    }
    refresh(i);
  }
}

struct McEstimate {
  double mean = 0;
  double standard_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

// Counter-based generator: draw number c (0-based) under a seed is the
// (c+1)-th output of SplitMix64 started from state `seed`, i.e.
//   z = seed + (c + 1) * 0x9E3779B97F4A7C15
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
// All arithmetic is modulo 2^64, so the stream is identical on every platform.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Top 53 bits mapped to [0, 1).
inline double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// Sample s draws member i with counter s * n + i and inverts its CDF: the
// result is the first atom whose cumulative mass exceeds the uniform.
inline McEstimate mc_expected_max(const Assembly& a, std::uint64_t samples, std::uint64_t seed) {
  if (samples < 2) throw PreconditionError("mc_expected_max: need at least 2 samples");
  const auto n = a.size();
  std::vector<std::vector<double>> cumulative(n);
  std::vector<std::vector<double>> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      cumulative[i].push_back(a[i].cumulative(j).get_d());
      values[i].push_back(a[i].atoms()[j].value.get_d());
    }
    cumulative[i].back() = 2.0;  // the last atom absorbs any rounding
  }

  // Welford's running mean and squared deviation.
  double mean = 0;
  double m2 = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    double best = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double u = unit_uniform(splitmix64_at(seed, s * n + i));
      std::size_t j = 0;
      while (cumulative[i][j] <= u) ++j;
      if (values[i][j] > best) best = values[i][j];
    }
    double delta = best - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (best - mean);
  }
  double variance = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(samples)), samples, seed};
}

}  // namespace mixmax
