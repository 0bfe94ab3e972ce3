#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <variant>

#include <json.hpp>

#include "ctopo/cli.hpp"
#include "ctopo/io.hpp"
#include "oracles.hpp"

using namespace ctopo;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::vector<json> lines;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  Result r{code, {}, err.str()};
  std::istringstream in(out.str());
  for (std::string line; std::getline(in, line);) r.lines.push_back(json::parse(line));
  return r;
}

std::string data(const std::string& name) { return std::string(CTOPO_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("ctopo_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

Rational rat(const json& j) { return reals::parse_rational(j.get<std::string>()); }

}  // namespace

// -- io parsing -------------------------------------------------------------------

TEST(Io, MachineList) {
  std::istringstream in("# header\n2 #halts 1\n67 #loops\n\n99\n");
  auto v = io::parse_machine_list(in);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].status, io::MachineEntry::Halts);
  EXPECT_EQ(v[0].halting_time, 1u);
  EXPECT_EQ(v[1].status, io::MachineEntry::Loops);
  EXPECT_EQ(v[2].status, io::MachineEntry::Unknown);
  std::istringstream bad("12x #halts 3\n");
  EXPECT_THROW(io::parse_machine_list(bad), PreconditionError);
  std::istringstream bad_tag("12 #sometimes\n");
  EXPECT_THROW(io::parse_machine_list(bad_tag), PreconditionError);
}

TEST(Io, SyntacticLoop) {
  EXPECT_TRUE(io::syntactic_loop(assemble("JMP 0")));
  EXPECT_TRUE(io::syntactic_loop(assemble("INC 1\nJMP -1")));
  EXPECT_FALSE(io::syntactic_loop(assemble("INC 1")));
  EXPECT_FALSE(io::syntactic_loop(assemble("JZ 0 +2\nJMP 0")));  // JZ: not decided here
}

TEST(Io, PointSetsAndSpecs) {
  EXPECT_EQ(io::parse_point_set("0,2", 3), 0b101u);
  EXPECT_EQ(io::parse_point_set("", 3), 0u);
  EXPECT_THROW(io::parse_point_set("3", 3), PreconditionError);
  EXPECT_EQ(io::parse_nplus_open("p3,t5"), nplus::open_from_codes({6, 11}));
  EXPECT_EQ(io::parse_nplus_open("empty"), kDivergeCode);
  EXPECT_EQ(io::parse_nplus_point("inf"), nplus::infinity_name());
  EXPECT_EQ(io::parse_nplus_point("4"), nplus::canonical_name(4));
  EXPECT_EQ(io::parse_real_spec("rat:1/3"), reals::real_from_rational(Rational(1, 3)));
  EXPECT_THROW(io::parse_real_spec("pi"), PreconditionError);
  EXPECT_THROW(io::parse_sequence_spec("harmonic"), PreconditionError);
}

TEST(Io, FiniteSpaceFile) {
  auto fs = io::load_finite_space(data("sierpinski.json"));
  EXPECT_EQ(fs.space.size, 2u);
  EXPECT_EQ(fs.labels, (std::vector<std::string>{"closed", "open"}));
  EXPECT_THROW(io::parse_finite_space(json::parse(R"({"points":["a","b"],"opens":[[0]]})")),
               PreconditionError);
  EXPECT_THROW(io::parse_finite_space(json::parse(R"({"opens":[[]]})")), PreconditionError);
}

TEST(Io, LimitFastFromFile) {
  // [DERIVED] the list ends at 1/3 + 2^-24, which is the limit.
  Nat x = io::parse_real_spec("limit-fast:" + data("third_sequence.txt"));
  Rational limit = Rational(1, 3) + oracle::pow2_inv(24);
  for (unsigned n : {0u, 5u, 12u, 20u}) {
    auto a = reals::approx_value(x, n, 1000000);
    ASSERT_TRUE(a);
    EXPECT_LT(oracle::abs(*a - limit), oracle::pow2_inv(n));
  }
  EXPECT_THROW(io::parse_real_spec("limit-fast:" + data("missing.txt")), PreconditionError);
  EXPECT_THROW(io::sequence_from_list({}), PreconditionError);
}

TEST(Io, SequenceFromList) {
  Nat seq = io::sequence_from_list({7, 8, 9});
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(run(seq, n, 1000).value, n < 3 ? 7 + n : 9);
}

TEST(Io, WitnessBundles) {
  auto w = io::parse_witness(json::parse(io::read_file(data("witness_third.json"))));
  ASSERT_TRUE(std::holds_alternative<NormedWitness>(w));
  EXPECT_EQ(io::witness_json(w), json::parse(io::read_file(data("witness_third.json"))));
  const auto& nw = std::get<NormedWitness>(w);
  EXPECT_EQ(run(nw.norm_code, reals::parse_open("(0,1/2)"), 1000000).value, 3);
  for (AnyWitness x : {AnyWitness{ClosureWitness{5}}, AnyWitness{SeqClosureWitness{6}}}) {
    EXPECT_EQ(io::witness_json(io::parse_witness(io::witness_json(x))), io::witness_json(x));
  }
  EXPECT_THROW(io::parse_witness(json::parse(R"({"kind":"normed","seq":"1"})")), PreconditionError);
  EXPECT_THROW(io::parse_witness(json::parse(R"({"kind":"other"})")), PreconditionError);
}

TEST(Io, NumberingFixture) {
  auto f = io::load_numbering_fixture(data("ershov_parity.json"));
  EXPECT_EQ(f.numbering, "N");
  ASSERT_EQ(f.semideciders.size(), 4u);
  for (const auto& sd : f.semideciders) EXPECT_TRUE(io::fixture_disagreements(f, sd).empty());
  // A wrong intended set is reported name by name.
  io::SemiDeciderFixture wrong = f.semideciders[0];
  wrong.accepts = {"0", "1"};
  EXPECT_EQ(io::fixture_disagreements(f, wrong), (std::vector<Nat>{1, 2, 4, 6}));
  EXPECT_THROW(io::parse_numbering_fixture(json::parse(R"({"names":[]})")), PreconditionError);
}

// -- commands ---------------------------------------------------------------------

TEST(Cli, RealApprox) {
  auto r = call({"real", "approx", "--x", "rat:1/3", "--bits", "10", "--fuel", "100000"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.lines.at(0)["q"], "1/3");
  r = call({"real", "approx", "--x", "sqrt2", "--bits", "8", "--fuel", "1000000"});
  ASSERT_EQ(r.code, 0);
  Rational q = rat(r.lines.at(0)["q"]);
  EXPECT_LT(oracle::abs(q * q - 2), Rational(3, 64));  // |q - sqrt2| < 2^-8 bounds |q^2 - 2|
}

TEST(Cli, FuelExhaustionExitsThree) {
  auto r = call({"real", "approx", "--x", "rat:1/3", "--bits", "10", "--fuel", "0"});
  EXPECT_EQ(r.code, cli::kOutOfFuel);
  EXPECT_EQ(r.lines.at(0)["halted"], false);
  r = call({"member", "--x", "rat:2/1", "--open", "(0/1,1/1)", "--fuel", "1000000"});
  EXPECT_EQ(r.code, cli::kOutOfFuel);
  EXPECT_EQ(r.lines.at(0)["steps"], 1000000);
}

TEST(Cli, PreconditionsExitTwo) {
  EXPECT_EQ(call({"real", "approx", "--x", "rat:1/0", "--bits", "1", "--fuel", "10"}).code, 2);
  EXPECT_EQ(call({"real", "approx", "--bits", "1", "--fuel", "10"}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({"finite", "markov", "--space", data("missing.json")}).code, 2);
}

TEST(Cli, Member) {
  auto r = call({"member", "--x", "rat:1/2", "--open", "(0,1)", "--fuel", "1000000"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.lines.at(0)["halted"], true);
  r = call({"member", "--space", "nplus", "--x", "inf", "--open", "p1,t2", "--fuel", "1000000"});
  EXPECT_EQ(r.code, 0);
  r = call({"member", "--space", data("sierpinski.json"), "--x", "1", "--open", "1", "--fuel", "1000"});
  EXPECT_EQ(r.code, 0);
  r = call({"member", "--space", data("sierpinski.json"), "--x", "0", "--open", "1", "--fuel", "1000"});
  EXPECT_EQ(r.code, cli::kOutOfFuel);
  r = call({"member", "--space", data("sierpinski.json"), "--x", "0", "--open", "0", "--fuel", "1000"});
  EXPECT_EQ(r.code, 2);  // {closed} is not open
}

TEST(Cli, FiniteCommands) {
  auto r = call({"finite", "markov", "--space", data("sierpinski.json")});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.lines.at(0), json::parse("[[0,[1]]]"));
  r = call({"finite", "tau-from-sd", "--space", data("sierpinski.json"), "--set", "0", "--rounds", "8"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.lines.at(0)["open"], json::array());  // interior of {closed}
  r = call({"finite", "tau-from-sd", "--space", data("sierpinski.json"), "--set", "1", "--rounds", "8"});
  EXPECT_EQ(r.lines.at(0)["open"], json::parse("[1]"));
  EXPECT_EQ(r.lines.at(0)["settled"], true);
}

TEST(Cli, Wso) {
  auto r = call({"wso", "--set", "full", "--fuel", "1000"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.lines.at(0)["n"], "0");
  r = call({"wso", "--set", "t3", "--fuel", "100000"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.lines.at(0)["n"], "3");
  EXPECT_EQ(call({"wso", "--set", "empty", "--fuel", "1000"}).code, cli::kOutOfFuel);
}

TEST(Cli, Diag) {
  auto empty = temp_file("empty.txt", "");
  auto r = call({"diag", "--machines", empty, "--bits", "20", "--fuel", "100000"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.lines.empty());
  auto bad = temp_file("bad.txt", "2 #halts 1\nnot-a-number\n");
  EXPECT_EQ(call({"diag", "--machines", bad, "--bits", "20", "--fuel", "100000"}).code, 2);

  r = call({"diag", "--machines", data("probes.txt"), "--bits", "20", "--fuel", "10000000"});
  ASSERT_EQ(r.code, 0);
  ASSERT_EQ(r.lines.size(), 20u);
  for (const auto& row : r.lines) {
    EXPECT_LT(oracle::abs(rat(row["w_approx"]) - rat(row["expected"])), oracle::pow2_inv(20)) << row;
  }
}

TEST(Cli, SoberLimitNorm) {
  auto r = call({"sober-recover", "--x", "rat:1/3", "--bits", "6", "--fuel", "10000000"});
  ASSERT_EQ(r.code, 0);
  EXPECT_LT(oracle::abs(rat(r.lines.at(0)["q"]) - Rational(1, 3)), oracle::pow2_inv(6));
  r = call({"limit", "--seq", "below:1/3", "--bits", "12", "--fuel", "1000000"});
  ASSERT_EQ(r.code, 0);
  EXPECT_LT(oracle::abs(rat(r.lines.at(0)["q"]) - Rational(1, 3)), oracle::pow2_inv(12));
  r = call({"nplus-norm", "--witness", "shifted:1/3", "--open", "(0,1/2)", "--fuel", "1000000"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.lines.at(0)["n"], "3");
  EXPECT_EQ(call({"nplus-norm", "--witness", "pow2", "--open", "(0,1)", "--fuel", "10"}).code, 2);
}

TEST(Cli, NonSdSweep) {
  auto r = call({"nonsd-sweep", "--space", data("sierpinski.json"), "--a", "1", "--b", "0",
                 "--max-code", "20000", "--fuel", "200"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.lines.at(0)["refuted"], true);
  r = call({"nonsd-sweep", "--machines", data("probes.txt"), "--max-code", "300", "--fuel", "2000"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.lines.at(0)["refuted"], false);
  EXPECT_EQ(r.lines.at(0)["checked"], "301");
}

TEST(Cli, AsmDisasm) {
  auto src = temp_file("prog.txt", "JZ 0 +2\nJMP 0\n");
  auto r = call({"asm", "--file", src});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.lines.at(0)["code"], "17305");
  r = call({"disasm", "--code", "17305"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.lines.at(0)["program"].size(), 2u);
  EXPECT_EQ(code_of_text(r.lines.at(0)["program"][0].get<std::string>() + "\n" +
                         r.lines.at(0)["program"][1].get<std::string>()),
            17305);
}
