#include <gtest/gtest.h>

#include <sstream>

#include "mixmax/io.hpp"
#include "support/brute_force.hpp"
#include "support/generators.hpp"

using namespace mixmax;
using mixmax::testing::dist;
using mixmax::testing::Generator;
using mixmax::testing::q;

namespace {

ParseError parse_error(const std::string& text) {
  try {
    parse_assembly(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return ParseError(0, 0, "");
}

}  // namespace

TEST(AssemblyFormat, ParsesCommentsAndDecimals) {
  auto file = parse_assembly(
      "# two members\n"
      "name = demo pair\n"
      "n = 2   # count\n"
      "bound = 6\n"
      "\n"
      "member = 0:0.5, 5:0.25, 6:1/4\n"
      "  member=3:1\r\n");
  EXPECT_EQ(file.name, "demo pair");
  EXPECT_EQ(file.bound, Rational(6));
  ASSERT_EQ(file.assembly.size(), 2u);
  EXPECT_EQ(file.assembly[0], dist({{"0", "1/2"}, {"5", "1/4"}, {"6", "1/4"}}));
  EXPECT_EQ(file.assembly[1], FiniteDistribution::point_mass(3));
}

TEST(AssemblyFormat, RoundTrip) {
  Generator gen(71);
  for (int trial = 0; trial < 200; ++trial) {
    AssemblyFile file{gen.assembly(1, 6), std::nullopt, std::nullopt};
    if (gen.uniform(0, 1) == 1) file.name = "trial " + std::to_string(trial);
    if (gen.uniform(0, 1) == 1) file.bound = gen.value();
    auto text = render_assembly(file);
    auto back = parse_assembly(text);
    EXPECT_EQ(back.assembly, file.assembly);
    EXPECT_EQ(back.name, file.name);
    EXPECT_EQ(back.bound, file.bound);
    EXPECT_EQ(render_assembly(back), text);
  }
}

TEST(AssemblyFormat, ErrorsCarryLineAndColumn) {
  auto e = parse_error("n = 2\nmember = 0:1/2, 1:1/2\nmember = 0:1/2, 1:2/5\n");
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 10u);
  EXPECT_NE(std::string(e.what()).find("member 2: masses sum to 9/10, not 1"), std::string::npos);

  e = parse_error("n = 1\nmember = 0:1/2, x:1/2\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 17u);

  e = parse_error("n = 1\nmember = 0:1/2 1:1/2\n");
  EXPECT_EQ(e.line(), 2u);

  e = parse_error("n = 1\ncolour = red\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 1u);

  e = parse_error("n = 3\nmember = 1:1\n");
  EXPECT_EQ(e.line(), 1u);

  e = parse_error("member = 1:1\n");
  EXPECT_EQ(e.line(), 0u);

  EXPECT_EQ(parse_error("n = 1\nmember = -1:1\n").column(), 10u);
  EXPECT_EQ(parse_error("n = 1\nmember = 0:0, 1:1\n").column(), 12u);
  EXPECT_EQ(parse_error("n = 0\n").line(), 1u);
  EXPECT_EQ(parse_error("n = 1\njust text\n").line(), 2u);
  EXPECT_EQ(parse_error("n = 1\nmember = $:1\n").line(), 2u);
}

TEST(AssemblyTemplate, Substitution) {
  const std::string text = "n = 2\nbound = 2*$\nmember = 0:$, 1:1-$\nmember = 0:1/2, 1:1/2\n";
  auto parsed = parse_assembly_template(text, q("1/4"));
  EXPECT_TRUE(parsed.used_parameter);
  EXPECT_EQ(parsed.file.bound, q("1/2"));
  EXPECT_EQ(parsed.file.assembly[0], dist({{"0", "1/4"}, {"1", "3/4"}}));

  // Zero masses produced by substitution are dropped.
  auto edge = parse_assembly_template(text, 0);
  EXPECT_EQ(edge.file.assembly[0], FiniteDistribution::point_mass(1));

  EXPECT_THROW(parse_assembly_template(text, 2), ParseError);
  EXPECT_THROW(parse_assembly_template("n = 1\nmember = 0:$+1\n", q("1/2")), ParseError);
  EXPECT_FALSE(parse_assembly_template("n = 1\nmember = 0:1\n", q("1/2")).used_parameter);
}

TEST(SweepCsv, HeaderAndRow) {
  std::ostringstream out;
  write_sweep_header(out);
  write_sweep_row(out, {q("1/2"), 1, q("9/8"), q("5/4"), q("3/2"), q("5/4"), q("1/4")});
  EXPECT_EQ(out.str(),
            "parameter,parameter_decimal,m_bar,m_bar_decimal,sen_e,sen_e_decimal,exact_e,exact_e_decimal,"
            "upper,upper_decimal,theta,theta_decimal,gap,gap_decimal\n"
            "1/2,0.5,1,1,9/8,1.125,5/4,1.25,3/2,1.5,5/4,1.25,1/4,0.25\n");
}
