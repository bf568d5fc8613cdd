#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace mixmax {

using Rational = mpq_class;

inline Rational ipow(const Rational& base, unsigned long exponent) {
  Rational result;
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  // gcd(a^e, b^e) = 1 whenever gcd(a, b) = 1, so the result is canonical.
  return result;
}

inline Rational make_rational(long num, unsigned long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Exact conversion; every finite double is a dyadic rational.
inline Rational from_double(double value) { return Rational(value); }

// Canonical "num/den" text, or "num" when the denominator is 1.
inline std::string to_string(const Rational& value) { return value.get_str(); }

// 15 significant digits for human reading and plotting.
inline std::string to_decimal(const Rational& value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.15g", value.get_d());
  return buffer;
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace detail

// Accepts "p/q" with q > 0, integers, and decimals with an optional exponent
// ("0.125", "1e-3", "-2.5E+2"). Decimal input is converted exactly.
inline std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::string_view body = text;
  if (body.front() == '+' || body.front() == '-') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) return std::nullopt;
    mpz_class d(std::string(den), 10);
    if (d == 0) return std::nullopt;
    mpz_class n(std::string(num), 10);
    Rational r(negative ? mpz_class(-n) : n, d);
    r.canonicalize();
    return r;
  }

  std::string_view mantissa = body;
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = body.substr(0, e);
    auto exp_text = body.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!detail::all_digits(exp_text) || exp_text.size() > 4) return std::nullopt;
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }

  std::string_view int_part = mantissa;
  std::string_view frac_part;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    int_part = mantissa.substr(0, dot);
    frac_part = mantissa.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) return std::nullopt;
  if (!int_part.empty() && !detail::all_digits(int_part)) return std::nullopt;
  if (!frac_part.empty() && !detail::all_digits(frac_part)) return std::nullopt;

  std::string digits = std::string(int_part) + std::string(frac_part);
  mpz_class numerator(digits, 10);
  exponent -= static_cast<long>(frac_part.size());
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(numerator, scale) : Rational(numerator * scale, 1);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

}  // namespace mixmax
