#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mixmax/dist.hpp"
#include "mixmax/error.hpp"
#include "mixmax/rational.hpp"

// Assembly files: UTF-8 text, one "key = value" entry per line, '#' starts a
// comment. Keys:
//
//   name   = free text                          (optional)
//   n      = member count                       (required, must match)
//   bound  = common support bound b             (optional)
//   member = value:mass, value:mass, ...        (one line per member)
//
// Values and masses are fractions ("3/7") or decimals ("0.125", "1e-3"),
// converted exactly. A sweep template may additionally write a value or mass
// as "$", "c-$" or "c*$", where $ is the swept parameter.

namespace mixmax {

struct AssemblyFile {
  Assembly assembly;
  std::optional<std::string> name;
  std::optional<Rational> bound;
};

namespace detail {

struct Located {
  std::string_view text;
  std::size_t column;  // 1-based column of text[0]
};

inline Located trim(std::string_view s, std::size_t column) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
    ++column;
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return {s, column};
}

inline std::vector<Located> split(Located field, char separator) {
  std::vector<Located> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = field.text.find(separator, start);
    auto piece = field.text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    parts.push_back(trim(piece, field.column + start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

// Evaluates a number token, substituting the sweep parameter when given.
inline Rational number(Located token, std::size_t line, const std::optional<Rational>& parameter,
                       bool& used_parameter) {
  std::string_view t = token.text;
  if (auto dollar = t.find('$'); dollar != std::string_view::npos) {
    if (!parameter) throw ParseError(line, token.column + dollar, "template parameter '$' outside a sweep");
    used_parameter = true;
    if (t == "$") return *parameter;
    if (dollar + 1 == t.size() && dollar >= 2 && (t[dollar - 1] == '-' || t[dollar - 1] == '*')) {
      auto constant = parse_rational(t.substr(0, dollar - 1));
      if (!constant) throw ParseError(line, token.column, "bad constant in '" + std::string(t) + "'");
      return t[dollar - 1] == '-' ? Rational(*constant - *parameter) : Rational(*constant * *parameter);
    }
    throw ParseError(line, token.column, "unsupported template expression '" + std::string(t) + "'");
  }
  auto value = parse_rational(t);
  if (!value) throw ParseError(line, token.column, "expected a fraction or decimal, got '" + std::string(t) + "'");
  return *value;
}

}  // namespace detail

struct ParsedTemplate {
  AssemblyFile file;
  bool used_parameter = false;
};

// Parses an assembly file, or a sweep template instantiated at `parameter`.
// Instantiated templates drop atoms whose mass evaluates to 0.
inline ParsedTemplate parse_assembly_template(std::string_view text, const std::optional<Rational>& parameter) {
  std::optional<std::string> name;
  std::optional<Rational> bound;
  std::optional<std::size_t> declared_n;
  std::size_t n_line = 0;
  std::vector<FiniteDistribution> members;
  bool used_parameter = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    std::string_view raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto line = detail::trim(raw, 1);
    if (line.text.empty()) continue;
    auto eq = line.text.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, line.column, "expected 'key = value'");
    auto key = detail::trim(line.text.substr(0, eq), line.column);
    auto value = detail::trim(line.text.substr(eq + 1), line.column + eq + 1);

    if (key.text == "name") {
      name = std::string(value.text);
    } else if (key.text == "n") {
      auto n = parse_rational(value.text);
      if (!n || n->get_den() != 1 || *n < 1) throw ParseError(line_no, value.column, "n must be a positive integer");
      declared_n = n->get_num().get_ui();
      n_line = line_no;
    } else if (key.text == "bound") {
      bound = detail::number(value, line_no, parameter, used_parameter);
    } else if (key.text == "member") {
      const std::string label = "member " + std::to_string(members.size() + 1);
      std::vector<Atom> atoms;
      for (const auto& item : detail::split(value, ',')) {
        auto pair = detail::split(item, ':');
        if (pair.size() != 2 || pair[0].text.empty() || pair[1].text.empty()) {
          throw ParseError(line_no, item.column, label + ": expected 'value:mass', got '" + std::string(item.text) + "'");
        }
        Rational v = detail::number(pair[0], line_no, parameter, used_parameter);
        Rational m = detail::number(pair[1], line_no, parameter, used_parameter);
        if (v < 0) throw ParseError(line_no, pair[0].column, label + ": negative value " + to_string(v));
        if (m < 0 || (m == 0 && !parameter)) {
          throw ParseError(line_no, pair[1].column, label + ": mass must be positive, got " + to_string(m));
        }
        atoms.push_back({v, m});
      }
      Rational total = 0;
      for (const auto& a : atoms) total += a.mass;
      if (total != 1) {
        throw ParseError(line_no, value.column, label + ": masses sum to " + to_string(total) + ", not 1");
      }
      try {
        members.push_back(FiniteDistribution::compact(std::move(atoms)));
      } catch (const PreconditionError& e) {
        throw ParseError(line_no, value.column, label + ": " + e.what());
      }
    } else {
      throw ParseError(line_no, key.column, "unknown key '" + std::string(key.text) + "'");
    }
  }

  if (!declared_n) throw ParseError(0, 0, "missing 'n = <count>' entry");
  if (members.size() != *declared_n) {
    throw ParseError(n_line, 1, "n = " + std::to_string(*declared_n) + " but " + std::to_string(members.size()) +
                                    " members are listed");
  }
  return {AssemblyFile{Assembly(std::move(members)), std::move(name), std::move(bound)}, used_parameter};
}

inline AssemblyFile parse_assembly(std::string_view text) { return parse_assembly_template(text, std::nullopt).file; }

inline std::string render_assembly(const AssemblyFile& file) {
  std::ostringstream out;
  if (file.name) out << "name = " << *file.name << '\n';
  out << "n = " << file.assembly.size() << '\n';
  if (file.bound) out << "bound = " << to_string(*file.bound) << '\n';
  for (const auto& d : file.assembly.members()) {
    out << "member = ";
    bool first = true;
    for (const auto& a : d.atoms()) {
      if (!first) out << ", ";
      out << to_string(a.value) << ':' << to_string(a.mass);
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

inline std::string render_assembly(const Assembly& a) { return render_assembly(AssemblyFile{a, std::nullopt, std::nullopt}); }

// One sweep point. Every row satisfies m_bar <= sen_e <= exact_e <= upper.
struct SweepRow {
  Rational parameter;
  Rational m_bar;
  Rational sen_e;
  Rational exact_e;
  Rational upper;
  Rational theta;
  Rational gap;
};

inline void write_sweep_header(std::ostream& out) {
  out << "parameter,parameter_decimal,m_bar,m_bar_decimal,sen_e,sen_e_decimal,exact_e,exact_e_decimal,"
         "upper,upper_decimal,theta,theta_decimal,gap,gap_decimal\n";
}

inline void write_sweep_row(std::ostream& out, const SweepRow& row) {
  bool first = true;
  for (const Rational* v : {&row.parameter, &row.m_bar, &row.sen_e, &row.exact_e, &row.upper, &row.theta, &row.gap}) {
    if (!first) out << ',';
    out << to_string(*v) << ',' << to_decimal(*v);
    first = false;
  }
  out << '\n';
}

}  // namespace mixmax
