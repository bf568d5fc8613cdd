#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mixmax/bounds.hpp"
#include "mixmax/dist.hpp"
#include "mixmax/error.hpp"
#include "mixmax/extremal.hpp"
#include "mixmax/io.hpp"
#include "mixmax/oracle.hpp"
#include "mixmax/transforms.hpp"

// Command implementations behind the `mixmax` executable. Each takes parsed
// options, writes to the given streams and returns the process exit status:
// 0 all checks pass, 1 usage or parse error, 2 precondition violation,
// 3 internal invariant breach.

namespace mixmax::cli {

enum ExitStatus : int { exit_ok = 0, exit_usage = 1, exit_precondition = 2, exit_invariant = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text(const std::optional<std::string>& path, const std::string& text, std::ostream& fallback) {
  if (!path) {
    fallback << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + *path + "'");
  out << text;
}

inline Rational rational_arg(const std::string& flag, const std::string& text) {
  auto r = parse_rational(text);
  if (!r) throw UsageError(flag + ": expected a fraction or decimal, got '" + text + "'");
  return *r;
}

inline std::vector<Rational> rational_list(const std::string& flag, const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(rational_arg(flag, item));
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

inline std::string exact(const Rational& r) { return to_string(r) + "  (" + to_decimal(r) + ")"; }

// Maps library exceptions onto the exit-status contract.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_usage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return exit_precondition;
  } catch (const InvariantError& e) {
    err << "internal invariant breach: " << e.what() << '\n';
    return exit_invariant;
  }
}

struct VerifyOptions {
  std::string input;
  std::optional<std::string> bound;
  double tol = default_tolerance;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 0;
};

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    AssemblyFile file = parse_assembly(read_text(opt.input));
    const Assembly& a = file.assembly;
    std::optional<Rational> b = file.bound;
    std::string b_source = "file";
    if (opt.bound) {
      b = rational_arg("--bound", *opt.bound);
      b_source = "--bound";
    }
    if (!b) {
      b = default_bound(a);
      b_source = "support max";
    }
    BoundReport r = full_report(a, b, opt.tol);
    const bool dominance = sen_dominance_check(a);

    if (file.name) out << "assembly  " << *file.name << '\n';
    out << "n         " << r.n << '\n';
    for (std::size_t i = 0; i < r.m_list.size(); ++i) {
      std::string label = "M_" + std::to_string(i + 1);
      label.resize(std::max<std::size_t>(label.size() + 1, 10), ' ');
      out << label << exact(r.m_list[i]) << '\n';
    }
    out << "M_bar     " << exact(r.m_bar) << '\n';
    out << "M_max     " << exact(r.m_max) << '\n';
    out << "sen_E     " << exact(r.sen_e) << "  [distribution-dependent]\n";
    out << "exact_E   " << exact(r.exact_e) << '\n';
    out << "upper     " << exact(r.upper) << '\n';
    out << "theta     " << exact(r.theta) << '\n';
    out << "theta_sup " << exact(theta_sup(r.n)) << '\n';
    if (r.holder_lower) {
      std::ostringstream h;
      h << std::setprecision(15) << r.holder_lower->value() << " +/- " << std::setprecision(3)
        << r.holder_lower->radius();
      out << "holder    " << h.str() << "  (b = " << to_string(*r.bound) << ", " << b_source << ")\n";
    }
    auto line = [&](const char* label, bool ok) { out << "check  " << label << (ok ? "  pass" : "  FAIL") << '\n'; };
    line("M_bar <= sen_E         ", r.chain.mbar_le_sen);
    line("sen_E <= exact_E       ", r.chain.sen_le_exact);
    line("exact_E <= upper       ", r.chain.exact_le_upper);
    if (r.chain.holder_le_exact) line("holder <= exact_E + tol", *r.chain.holder_le_exact);
    if (r.chain.mbar_le_holder) line("M_bar <= holder + tol  ", *r.chain.mbar_le_holder);
    line("sen dominance          ", dominance);

    if (opt.samples) {
      McEstimate mc = mc_expected_max(a, *opt.samples, opt.seed);
      std::ostringstream m;
      m << std::setprecision(15) << mc.mean << " +/- " << std::setprecision(6) << mc.standard_error;
      out << "mc        " << m.str() << "  (" << mc.samples << " samples, seed " << mc.seed << ")\n";
    }
    return r.chain.all() && dominance ? exit_ok : exit_invariant;
  });
}

struct ExtremalOptions {
  std::optional<std::size_t> n;
  std::optional<std::string> equal;
  std::optional<std::string> m_list;
  std::string epsilon;
  std::optional<std::string> p_schedule;
  std::optional<std::string> out_path;
};

inline std::vector<Rational> target_means(const std::optional<std::size_t>& n, const std::optional<std::string>& equal,
                                          const std::optional<std::string>& m_list) {
  if (equal && m_list) throw UsageError("give either --equal or --m, not both");
  if (equal) {
    if (!n || *n == 0) throw UsageError("--equal needs a positive --n");
    return std::vector<Rational>(*n, rational_arg("--equal", *equal));
  }
  if (!m_list) throw UsageError("give --equal M with --n, or --m M1,...,Mn");
  auto m = rational_list("--m", *m_list);
  if (n && *n != m.size()) throw UsageError("--n disagrees with the length of --m");
  return m;
}

inline int cmd_extremal(const ExtremalOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExtremalSpec spec;
    spec.m_list = target_means(opt.n, opt.equal, opt.m_list);
    spec.closeness = rational_arg("--epsilon", opt.epsilon);
    if (spec.closeness <= 0) throw UsageError("--epsilon must be positive");
    if (opt.p_schedule) spec.p_schedule = rational_list("--p-schedule", *opt.p_schedule);

    ExtremalResult built = build(spec);
    const auto n = built.assembly.size();
    AssemblyFile file{built.assembly, "extremal n=" + std::to_string(n), std::nullopt};
    std::ostream& report = opt.out_path ? out : err;
    write_text(opt.out_path, render_assembly(file), out);

    report << "theta     " << exact(built.theta) << '\n';
    report << "theta_sup " << exact(theta_sup(n)) << '\n';
    report << "gap       " << exact(built.gap) << '\n';
    report << "epsilon   " << exact(spec.closeness) << '\n';
    if (built.delta) report << "delta     " << exact(*built.delta) << "  (" << built.rounds << " rounds)\n";
    if (built.gap < 0) throw InvariantError("extremal assembly exceeds the upper bound");
    if (built.gap > spec.closeness) {
      // Only reachable with an explicit schedule.
      report << "gap exceeds epsilon for the given p schedule\n";
      return static_cast<int>(exit_precondition);
    }
    return static_cast<int>(exit_ok);
  });
}

struct TransformOptions {
  std::string which;  // coalesce | reduce | down
  std::string input;
  std::size_t member = 1;  // 1-based; ignored by down
  std::string lo;
  std::string hi;
  double tol = default_tolerance;
  std::optional<std::string> out_path;
};

inline int cmd_transform(const TransformOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    AssemblyFile file = parse_assembly(read_text(opt.input));
    const Assembly& a = file.assembly;
    const Rational lo = rational_arg("--lo", opt.lo);
    const Rational hi = rational_arg("--hi", opt.hi);
    const auto n = a.size();
    std::ostream& report = opt.out_path ? out : err;
    bool certified = true;

    auto companion_of = [&](std::size_t index) {
      std::vector<FiniteDistribution> others;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != index) others.push_back(a[i]);
      }
      return others.empty() ? FiniteDistribution::point_mass(0) : max_distribution(others);
    };
    auto member_index = [&] {
      if (opt.member < 1 || opt.member > n) throw UsageError("--member must be in 1.." + std::to_string(n));
      return opt.member - 1;
    };

    AssemblyFile result = file;
    if (opt.which == "coalesce") {
      auto i = member_index();
      auto o = coalesce(a[i], lo, hi, companion_of(i), n);
      result.assembly = a.with_member(i, o.result);
      report << "merged_at " << exact(o.details.merged_at) << '\n';
      report << "cond_mean " << exact(o.details.conditional_mean) << '\n';
      report << "m_residual " << to_string(o.m_residual[0]) << '\n';
      report << "e_delta   " << exact(o.e_delta) << "  " << to_string(o.direction) << '\n';
      certified = o.m_residual[0] == 0 && o.e_delta >= 0;
    } else if (opt.which == "reduce") {
      auto i = member_index();
      auto o = reduce_pair(a[i], lo, hi, companion_of(i), n);
      result.assembly = a.with_member(i, o.result);
      report << "scenario  " << to_string(o.details.scenario) << '\n';
      report << "lambda    " << exact(o.details.lambda) << '\n';
      report << "slope     " << exact(o.details.slope) << '\n';
      report << "atoms     " << to_string(o.details.low_atom) << ", " << to_string(o.details.high_atom) << '\n';
      if (o.details.slope_at_omega) report << "slope@w   " << exact(*o.details.slope_at_omega) << '\n';
      report << "m_residual " << to_string(o.m_residual[0]) << '\n';
      report << "e_delta   " << exact(o.e_delta) << "  " << to_string(o.direction) << '\n';
      certified = o.m_residual[0] == 0 && o.e_delta >= 0;
    } else if (opt.which == "down") {
      auto o = down_project(a, lo, hi, opt.tol);
      result.assembly = o.result;
      const Rational t = from_double(opt.tol);
      for (std::size_t i = 0; i < n; ++i) {
        report << "member " << i + 1 << "  alpha ";
        if (o.details.alpha[i]) {
          report << std::setprecision(15) << o.details.alpha[i]->value();
        } else {
          report << "absent";
        }
        report << "  m_residual " << to_decimal(o.m_residual[i]) << '\n';
        certified = certified && abs(o.m_residual[i]) <= t;
      }
      report << "e_delta   " << exact(o.e_delta) << "  " << to_string(o.direction) << '\n';
      certified = certified && o.e_delta <= t;
    } else {
      throw UsageError("unknown transform '" + opt.which + "' (coalesce, reduce, down)");
    }
    write_text(opt.out_path, render_assembly(result), out);
    return certified ? static_cast<int>(exit_ok) : static_cast<int>(exit_invariant);
  });
}

struct SweepOptions {
  std::optional<std::string> template_path;
  bool extremal = false;
  std::optional<std::size_t> n;
  std::optional<std::string> equal;
  std::optional<std::string> m_list;
  std::optional<std::string> values;
  std::optional<std::string> from;
  std::optional<std::string> to;
  std::optional<std::size_t> steps;
  std::optional<std::string> out_path;
};

inline std::vector<Rational> sweep_points(const SweepOptions& opt) {
  if (opt.values) {
    if (opt.from || opt.to || opt.steps) throw UsageError("give either --values or --from/--to/--steps");
    return rational_list("--values", *opt.values);
  }
  if (!opt.from || !opt.to || !opt.steps) throw UsageError("give --values, or all of --from, --to, --steps");
  if (*opt.steps == 0) throw UsageError("--steps must be at least 1");
  Rational from = rational_arg("--from", *opt.from);
  Rational to = rational_arg("--to", *opt.to);
  std::vector<Rational> points;
  if (*opt.steps == 1) return {from};
  for (std::size_t k = 0; k < *opt.steps; ++k) {
    points.push_back(from + (to - from) * make_rational(static_cast<long>(k), *opt.steps - 1));
  }
  return points;
}

inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.extremal == static_cast<bool>(opt.template_path)) throw UsageError("give exactly one of --template or --extremal");
    auto points = sweep_points(opt);
    std::string template_text;
    std::vector<Rational> targets;
    if (opt.template_path) {
      template_text = read_text(*opt.template_path);
      if (template_text.find('$') == std::string::npos) throw UsageError("template declares no '$' parameter");
    } else {
      targets = target_means(opt.n, opt.equal, opt.m_list);
    }

    std::ostringstream csv;
    write_sweep_header(csv);
    std::size_t skipped = 0;
    for (const auto& point : points) {
      try {
        Assembly a = opt.template_path ? parse_assembly_template(template_text, point).file.assembly
                                       : extremal_assembly(targets, staggered_schedule(targets.size(), point));
        BoundReport r = full_report(a);
        SweepRow row{point, r.m_bar, r.sen_e, r.exact_e, r.upper, r.theta, r.upper - r.exact_e};
        if (!(row.m_bar <= row.sen_e && row.sen_e <= row.exact_e && row.exact_e <= row.upper)) {
          throw InvariantError("sweep row at " + to_string(point) + " violates the bound chain");
        }
        write_sweep_row(csv, row);
      } catch (const InvariantError&) {
        throw;
      } catch (const Error& e) {
        err << "warning: skipping parameter " << to_string(point) << ": " << e.what() << '\n';
        ++skipped;
      }
    }
    write_text(opt.out_path, csv.str(), out);
    return skipped == 0 ? static_cast<int>(exit_ok) : static_cast<int>(exit_precondition);
  });
}

struct McOptions {
  std::string input;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
};

inline int cmd_mc(const McOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Assembly a = parse_assembly(read_text(opt.input)).assembly;
    McEstimate mc = mc_expected_max(a, opt.samples, opt.seed);
    Rational exact_e = expected_max(a);
    out << std::setprecision(15);
    out << "mean      " << mc.mean << '\n';
    out << "stderr    " << mc.standard_error << '\n';
    out << "samples   " << mc.samples << '\n';
    out << "seed      " << mc.seed << '\n';
    out << "exact_E   " << exact(exact_e) << '\n';
    return static_cast<int>(exit_ok);
  });
}

}  // namespace mixmax::cli
