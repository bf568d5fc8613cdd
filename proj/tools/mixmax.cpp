#include <CLI11.hpp>

#include <iostream>

#include "mixmax/commands.hpp"

namespace cli = mixmax::cli;

int main(int argc, char** argv) {
  CLI::App app{"Expected maximum of independent non-negative assemblies: bounds, transforms, extremal builds"};
  app.require_subcommand(1);

  cli::VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Print every bound for an assembly file and check the chain");
  verify_cmd->add_option("input", verify.input, "Assembly file")->required();
  verify_cmd->add_option("--bound", verify.bound, "Common support bound b (default: file bound, else support max)");
  verify_cmd->add_option("--tol", verify.tol, "Enclosure tolerance for root-based quantities");
  verify_cmd->add_option("--samples", verify.samples, "Also run a Monte Carlo estimate with this many samples");
  verify_cmd->add_option("--seed", verify.seed, "Monte Carlo seed");

  cli::ExtremalOptions extremal;
  auto* extremal_cmd = app.add_subcommand("extremal", "Build a two-point assembly close to the upper bound");
  extremal_cmd->add_option("--n", extremal.n, "Assembly size");
  extremal_cmd->add_option("--equal", extremal.equal, "Common target M for all members");
  extremal_cmd->add_option("--m", extremal.m_list, "Comma-separated non-decreasing targets M1,...,Mn");
  extremal_cmd->add_option("--epsilon", extremal.epsilon, "Target gap to the upper bound")->required();
  extremal_cmd->add_option("--p-schedule", extremal.p_schedule, "Explicit p1,...,p(n-1) instead of tightening");
  extremal_cmd->add_option("--out", extremal.out_path, "Output assembly file (default: stdout)");

  cli::TransformOptions transform;
  auto* transform_cmd = app.add_subcommand("transform", "Apply an M-preserving transform and print its certificate");
  transform_cmd->add_option("which", transform.which, "coalesce | reduce | down")->required();
  transform_cmd->add_option("input", transform.input, "Assembly file")->required();
  transform_cmd->add_option("--member", transform.member, "1-based member index (coalesce, reduce)");
  transform_cmd->add_option("--lo", transform.lo, "Interval left end")->required();
  transform_cmd->add_option("--hi", transform.hi, "Interval right end")->required();
  transform_cmd->add_option("--tol", transform.tol, "Enclosure tolerance (down)");
  transform_cmd->add_option("--out", transform.out_path, "Output assembly file (default: stdout)");

  cli::SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate the bound chain over one parameter as CSV");
  sweep_cmd->add_option("--template", sweep.template_path, "Assembly template using '$' for the parameter");
  sweep_cmd->add_flag("--extremal", sweep.extremal, "Sweep delta over the extremal family instead");
  sweep_cmd->add_option("--n", sweep.n, "Extremal family size");
  sweep_cmd->add_option("--equal", sweep.equal, "Extremal family common M");
  sweep_cmd->add_option("--m", sweep.m_list, "Extremal family targets M1,...,Mn");
  sweep_cmd->add_option("--values", sweep.values, "Comma-separated parameter values");
  sweep_cmd->add_option("--from", sweep.from, "First parameter value");
  sweep_cmd->add_option("--to", sweep.to, "Last parameter value");
  sweep_cmd->add_option("--steps", sweep.steps, "Number of evenly spaced points");
  sweep_cmd->add_option("--out", sweep.out_path, "Output CSV (default: stdout)");

  cli::McOptions mc;
  auto* mc_cmd = app.add_subcommand("mc", "Seeded Monte Carlo estimate of E[max]");
  mc_cmd->add_option("input", mc.input, "Assembly file")->required();
  mc_cmd->add_option("--samples", mc.samples, "Sample count");
  mc_cmd->add_option("--seed", mc.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::exit_usage;
  }

  if (*verify_cmd) return cli::cmd_verify(verify, std::cout, std::cerr);
  if (*extremal_cmd) return cli::cmd_extremal(extremal, std::cout, std::cerr);
  if (*transform_cmd) return cli::cmd_transform(transform, std::cout, std::cerr);
  if (*sweep_cmd) return cli::cmd_sweep(sweep, std::cout, std::cerr);
  if (*mc_cmd) return cli::cmd_mc(mc, std::cout, std::cerr);
  return cli::exit_usage;
}
