#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "mixmax/commands.hpp"
#include "support/brute_force.hpp"

using namespace mixmax;
using namespace mixmax::cli;
using mixmax::testing::q;

namespace {

std::string sample(const char* name) { return std::string(MIXMAX_SAMPLES_DIR) + "/" + name; }

std::string scratch(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "mixmax_cli_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

VerifyOptions verify_options(const std::string& input, std::optional<std::string> bound = std::nullopt) {
  VerifyOptions opt;
  opt.input = input;
  opt.bound = std::move(bound);
  return opt;
}

TransformOptions transform_options(const char* which, std::size_t member, const char* lo, const char* hi) {
  TransformOptions opt;
  opt.which = which;
  opt.input = sample("mixed.asm");
  opt.member = member;
  opt.lo = lo;
  opt.hi = hi;
  return opt;
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST(Verify, TwoPointPair) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify(verify_options(sample("two_point_pair.asm")), out, err), exit_ok);
  EXPECT_NE(out.str().find("sen_E     55/64"), std::string::npos);
  EXPECT_NE(out.str().find("exact_E   7/8"), std::string::npos);
  EXPECT_NE(out.str().find("b = 1, file"), std::string::npos);
  EXPECT_EQ(out.str().find("FAIL"), std::string::npos);
}

TEST(Verify, MonteCarloLine) {
  auto opt = verify_options(sample("mixed.asm"));
  opt.samples = 20000;
  opt.seed = 3;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify(opt, out, err), exit_ok);
  EXPECT_NE(out.str().find("mc        "), std::string::npos);
  EXPECT_NE(out.str().find("support max"), std::string::npos);
}

TEST(Verify, ExitCodes) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify(verify_options(sample("bad_mass.asm")), out, err), exit_usage);
  EXPECT_NE(err.str().find("line 3"), std::string::npos);
  EXPECT_EQ(cmd_verify(verify_options(sample("no_such_file.asm")), out, err), exit_usage);
  EXPECT_EQ(cmd_verify(verify_options(sample("two_point_pair.asm"), std::string("1/2")), out, err), exit_precondition);
  EXPECT_EQ(cmd_verify(verify_options(sample("two_point_pair.asm"), std::string("one")), out, err), exit_usage);
}

TEST(Extremal, WritesAssemblyNearSupremum) {
  const auto path = scratch("extremal2.asm");
  ExtremalOptions opt;
  opt.n = 2;
  opt.equal = "1";
  opt.epsilon = "1e-3";
  opt.out_path = path;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_extremal(opt, out, err), exit_ok) << err.str();
  EXPECT_NE(out.str().find("theta_sup 3/2"), std::string::npos);
  auto a = parse_assembly(read_text(path)).assembly;
  EXPECT_GE(expected_max(a), q("3/2") - q("1/1000"));
  EXPECT_EQ(similar_max_means(a), (std::vector<Rational>{1, 1}));
}

TEST(Extremal, ExitCodes) {
  std::ostringstream out, err;
  ExtremalOptions opt;
  opt.n = 2;
  opt.equal = "1";
  opt.epsilon = "0";
  EXPECT_EQ(cmd_extremal(opt, out, err), exit_usage);
  opt.epsilon = "1/1000";
  opt.m_list = "1,1";
  EXPECT_EQ(cmd_extremal(opt, out, err), exit_usage);
  opt.equal.reset();
  opt.p_schedule = "1/2";
  EXPECT_EQ(cmd_extremal(opt, out, err), exit_precondition);
  opt.m_list = "1,1,1";
  opt.n.reset();
  opt.p_schedule = "1/2,1/2";
  EXPECT_EQ(cmd_extremal(opt, out, err), exit_precondition);
  opt.p_schedule.reset();
  std::ostringstream assembly;
  EXPECT_EQ(cmd_extremal(opt, assembly, err), exit_ok);
  EXPECT_NE(assembly.str().find("n = 3"), std::string::npos);
}

TEST(Transform, AllThreeKinds) {
  std::ostringstream out, err;
  auto opt = transform_options("coalesce", 1, "3", "5");
  EXPECT_EQ(cmd_transform(opt, out, err), exit_ok) << err.str();
  EXPECT_NE(out.str().find("n = 3"), std::string::npos);
  EXPECT_NE(err.str().find("merged_at"), std::string::npos);

  opt = transform_options("reduce", 2, "0", "4");
  EXPECT_EQ(cmd_transform(opt, out, err), exit_ok) << err.str();
  EXPECT_NE(err.str().find("scenario"), std::string::npos);

  opt = transform_options("down", 1, "0", "6");
  EXPECT_EQ(cmd_transform(opt, out, err), exit_ok) << err.str();

  opt = transform_options("stretch", 1, "0", "6");
  EXPECT_EQ(cmd_transform(opt, out, err), exit_usage);
  opt = transform_options("coalesce", 4, "0", "6");
  EXPECT_EQ(cmd_transform(opt, out, err), exit_usage);
  opt = transform_options("reduce", 3, "0", "6");
  EXPECT_EQ(cmd_transform(opt, out, err), exit_precondition);
}

TEST(Sweep, TemplateValues) {
  SweepOptions opt;
  opt.template_path = sample("pair_template.asm");
  opt.values = "1/4,1/2,3/4";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_sweep(opt, out, err), exit_ok) << err.str();
  EXPECT_EQ(count_lines(out.str()), 4u);
  EXPECT_NE(out.str().find("\n1/2,0.5,3/4,0.75,3/4,0.75,3/4,0.75,9/8,1.125,1,1,3/8,0.375\n"), std::string::npos);

  opt.values = "1/2,2";
  std::ostringstream partial;
  EXPECT_EQ(cmd_sweep(opt, partial, err), exit_precondition);
  EXPECT_EQ(count_lines(partial.str()), 2u);
}

TEST(Sweep, ExtremalRange) {
  SweepOptions opt;
  opt.extremal = true;
  opt.n = 2;
  opt.equal = "1";
  opt.from = "1/10";
  opt.to = "1/1000";
  opt.steps = 4;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_sweep(opt, out, err), exit_ok) << err.str();
  EXPECT_EQ(count_lines(out.str()), 5u);

  opt.steps = 0;
  EXPECT_EQ(cmd_sweep(opt, out, err), exit_usage);
  opt.steps = 2;
  opt.template_path = sample("pair_template.asm");
  EXPECT_EQ(cmd_sweep(opt, out, err), exit_usage);
}

TEST(Mc, ReportsEstimate) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_mc({sample("identical.asm"), 1000, 5}, out, err), exit_ok);
  EXPECT_NE(out.str().find("exact_E   3/4"), std::string::npos);
  EXPECT_NE(out.str().find("seed      5"), std::string::npos);
  EXPECT_EQ(cmd_mc({sample("identical.asm"), 1, 5}, out, err), exit_precondition);
}
