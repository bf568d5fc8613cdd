#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "mixmax/error.hpp"
#include "mixmax/rational.hpp"

namespace mixmax {

// A closed interval [lo, hi] with exact rational endpoints that is guaranteed
// to contain some real quantity that has no rational representation.
struct Enclosure {
  Rational lo;
  Rational hi;

  static Enclosure exact(const Rational& value) { return {value, value}; }

  [[nodiscard]] Rational midpoint() const { return (lo + hi) / 2; }
  [[nodiscard]] Rational width() const { return hi - lo; }
  [[nodiscard]] double value() const { return midpoint().get_d(); }
  [[nodiscard]] double radius() const { return Rational((hi - lo) / 2).get_d(); }
  [[nodiscard]] bool is_exact() const { return lo == hi; }
  [[nodiscard]] bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

inline Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Enclosure operator+(const Enclosure& a, const Rational& b) { return {a.lo + b, a.hi + b}; }
inline Enclosure operator-(const Rational& a, const Enclosure& b) { return {a - b.hi, a - b.lo}; }

// Product of enclosures of non-negative quantities.
inline Enclosure multiply_nonneg(const Enclosure& a, const Enclosure& b) {
  if (a.lo < 0 || b.lo < 0) throw PreconditionError("multiply_nonneg: negative enclosure");
  return {a.lo * b.lo, a.hi * b.hi};
}

inline Enclosure scale(const Enclosure& a, const Rational& factor) {
  if (factor >= 0) return {a.lo * factor, a.hi * factor};
  return {a.hi * factor, a.lo * factor};
}

// Exact n-th root of x when both numerator and denominator are perfect powers.
inline std::optional<Rational> exact_nth_root(const Rational& x, unsigned n) {
  if (x < 0 || n == 0) return std::nullopt;
  mpz_class num_root, den_root;
  int num_exact = mpz_root(num_root.get_mpz_t(), x.get_num_mpz_t(), n);
  int den_exact = mpz_root(den_root.get_mpz_t(), x.get_den_mpz_t(), n);
  if (!num_exact || !den_exact) return std::nullopt;
  Rational r(num_root, den_root);
  r.canonicalize();
  return r;
}

// Bracket x^(1/n) for x >= 0 with an enclosure of width at most tol.
// Bisection over dyadic rationals; lo^n <= x <= hi^n holds at every step.
inline Enclosure nth_root(const Rational& x, unsigned n, const Rational& tol) {
  if (x < 0) throw PreconditionError("nth_root: negative argument");
  if (n == 0) throw PreconditionError("nth_root: zero degree");
  if (tol <= 0) throw PreconditionError("nth_root: tolerance must be positive");
  if (auto r = exact_nth_root(x, n)) return Enclosure::exact(*r);

  Rational lo = 0;
  Rational hi = x > 1 ? x : Rational(1);
  // Seed with a narrow floating-point bracket when it verifies exactly.
  const double guess = std::pow(x.get_d(), 1.0 / n);
  if (std::isfinite(guess) && guess > 0) {
    Rational g_lo = from_double(guess * (1 - 1e-9));
    Rational g_hi = from_double(guess * (1 + 1e-9));
    if (ipow(g_lo, n) <= x && x <= ipow(g_hi, n)) {
      lo = g_lo;
      hi = g_hi;
    }
  }
  while (hi - lo > tol) {
    Rational mid = (lo + hi) / 2;
    if (ipow(mid, n) <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

}  // namespace mixmax
