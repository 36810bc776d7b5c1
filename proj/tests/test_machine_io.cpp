#include <gtest/gtest.h>

#include <sstream>

#include "anatomy/csv.hpp"
#include "anatomy/machine_io.hpp"
#include "anatomy/processes.hpp"

using namespace anatomy;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_machine(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

void expect_same_words(const EpsilonMachine& a, const EpsilonMachine& b, std::size_t max_length) {
  for (std::size_t l = 1; l <= max_length; ++l) {
    const auto wa = word_distribution(a, l);
    const auto wb = word_distribution(b, l);
    for (std::uint64_t c = 0; c < wa.outcome_space_size(); ++c) {
      const Outcome o = wa.decode(c);
      EXPECT_NEAR(wa.probability(o), wb.probability(o), 1e-12);
    }
  }
}

}  // namespace

TEST(MachineFile, ParsesFractionsAndComments) {
  const auto m = parse_machine(
      "# the even process\n"
      "alphabet 2\n"
      "\n"
      "states A B   # two states\n"
      "edge A 0 1/2 A\n"
      "edge A 1 0.5 B\n"
      "edge B 1 1 A\n");
  EXPECT_EQ(m.state_count(), 2u);
  EXPECT_EQ(m.state_name(1), "B");
  expect_same_words(m, even_process(), 6);
}

TEST(MachineFile, BundledFilesMatchBuiltins) {
  const std::string dir = ANATOMY_DATA_DIR;
  expect_same_words(load_machine(dir + "/even.machine"), even_process(), 6);
  expect_same_words(load_machine(dir + "/golden_mean.machine"), golden_mean(), 6);
  expect_same_words(load_machine(dir + "/nrps.machine"), nrps(), 6);
  expect_same_words(load_machine(dir + "/coin.machine"), fair_coin(), 6);
  EXPECT_THROW(load_machine(dir + "/missing.machine"), std::invalid_argument);
}

TEST(MachineFile, RoundTrip) {
  for (const auto& m : {even_process(), golden_mean(), nrps(), fair_coin(), golden_mean_family(0.1)}) {
    const auto again = parse_machine(serialize_machine(m));
    EXPECT_EQ(again.state_names(), m.state_names());
    expect_same_words(m, again, 6);
  }
}

TEST(MachineFile, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("alphabet 2\nstates A\nedge A 0 1/2 A\nedge A 0 1/2 A\n"), 4u);
  EXPECT_EQ(error_line("alphabet 2\nstates A\nedge A 2 1 A\n"), 3u);
  EXPECT_EQ(error_line("alphabet 2\nstates A\nedge A 0 1/0 A\n"), 3u);
  EXPECT_EQ(error_line("alphabet 2\nstates A\nedge A 0 x A\n"), 3u);
  EXPECT_EQ(error_line("alphabet 2\nstates A\nedge A 0 1.5 A\n"), 3u);
  EXPECT_EQ(error_line("alphabet 2\nstates A\nedge A 0 1 B\n"), 3u);
  EXPECT_EQ(error_line("alphabet 2\nstates A A\n"), 2u);
  EXPECT_EQ(error_line("alphabet two\n"), 1u);
  EXPECT_EQ(error_line("edge A 0 1 A\n"), 1u);
  EXPECT_EQ(error_line("alphabet 2\nstates A\nnode A\n"), 3u);
  EXPECT_EQ(error_line("alphabet 2\n"), 1u);
  // Model-level failures are reported at end of input.
  EXPECT_EQ(error_line("alphabet 2\nstates A\nedge A 0 1/2 A\n"), 3u);
  EXPECT_EQ(error_line("alphabet 2\nstates A B\nedge A 0 1 A\nedge B 0 1 A\n"), 4u);
}

TEST(CurveCsv, FormatAndRoundTrip) {
  const BlockMeasure ms[] = {BlockMeasure::H, BlockMeasure::T, BlockMeasure::I};
  const auto curves = block_curves(golden_mean(), ms, 6);
  const std::string csv = curves_to_csv(curves);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "l,H,T,I");
  EXPECT_NE(csv.find("\n2,1.584963,"), std::string::npos);
  std::istringstream in(csv);
  const auto back = curves_from_csv(in);
  ASSERT_EQ(back.size(), curves.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].measure, curves[i].measure);
    ASSERT_EQ(back[i].values.size(), curves[i].values.size());
    for (std::size_t l = 0; l < back[i].values.size(); ++l) EXPECT_NEAR(back[i].values[l], curves[i].values[l], 5e-7);
  }
}

TEST(CurveCsv, NumbersAreLocaleFree) {
  EXPECT_EQ(format_number(1234567.5, 1), "1234567.5");
  EXPECT_EQ(format_number(-1e-9), "0.000000");
  EXPECT_EQ(format_number(-0.41504, 5), "-0.41504");
}

TEST(CurveCsv, RejectsMalformedInput) {
  std::istringstream bad_header("x,H\n0,0\n");
  EXPECT_THROW(curves_from_csv(bad_header), std::invalid_argument);
  std::istringstream bad_row("l,H\n0,0\n2,1\n");
  EXPECT_THROW(curves_from_csv(bad_row), std::invalid_argument);
}
