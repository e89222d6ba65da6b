#include <gtest/gtest.h>

#include <sstream>

#include "evicomb/cli.hpp"
#include "evicomb/io.hpp"
#include "support/errors.hpp"
#include "support/generators.hpp"

using namespace evicomb;
using testkit::code_of;

namespace {

const std::string fixtures = EVICOMB_FIXTURES;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  for (auto& a : args)
    if (a.size() > 5 && (a.ends_with(".json") || a.ends_with(".csv")) && a.find('/') == std::string::npos)
      a = fixtures + "/" + a;
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

io::json parse(const std::string& s) { return io::json::parse(s); }

}  // namespace

TEST(MassJson, ExactFormat) {
  Frame f = build_frame({"a", "b"});
  auto m = from_focal_list(f, {{parse_set_expr(f, "{b}"), Ratio(1, 4)}, {FocalSet::full(f), Ratio(3, 4)}}, {"Dept=Acct"});
  EXPECT_EQ(io::mass_to_json(m).dump(),
            R"({"frame":["a","b"],"conditions":["Dept=Acct"],"focal":[{"set":"*","num":3,"den":4},{"set":"{b}","num":1,"den":4}]})");
}

TEST(MassJson, RoundTrip) {
  testkit::rng g(59);
  for (int trial = 0; trial < 100; ++trial) {
    Frame f = testkit::letter_frame(testkit::uniform(g, 1, 10));
    auto m = testkit::random_mass(g, f, 5, 12, trial % 2 ? Conditions{"E=1"} : Conditions{});
    EXPECT_EQ(io::mass_from_json(io::json::parse(io::mass_to_json(m).dump())), m);
  }
}

TEST(MassJson, Rejections) {
  auto load = [](const char* text) { io::mass_from_json(io::parse_json(text, "test")); };
  EXPECT_EQ(code_of([&] { load(R"({"frame":["a"],"focal":[{"set":"{a}","num":2,"den":2}]})"); }), errc::malformed_input);
  EXPECT_EQ(code_of([&] { load(R"({"frame":["a"],"focal":[{"set":"{a}","num":1,"den":0}]})"); }), errc::malformed_input);
  EXPECT_EQ(code_of([&] { load(R"({"frame":["a"],"focal":[{"set":"{a}","num":-1,"den":1}]})"); }), errc::malformed_input);
  EXPECT_EQ(code_of([&] { load(R"({"frame":["a"]})"); }), errc::malformed_input);
  EXPECT_EQ(code_of([&] { load(R"({"frame":["a"],"focal":[)"); }), errc::malformed_input);
  EXPECT_EQ(code_of([&] { load(R"({"frame":["a","a"],"focal":[]})"); }), errc::duplicate_label);
  EXPECT_EQ(code_of([&] { load(R"({"frame":["a"],"focal":[{"set":"{a}","num":1,"den":3}]})"); }),
            errc::weights_do_not_sum_to_one);
}

TEST(MassJson, LargeIntegersUseStrings) {
  bigint big("123456789012345678901234567890");
  EXPECT_EQ(io::integer_to_json(big), io::json("123456789012345678901234567890"));
  EXPECT_EQ(io::integer_from_json(io::json("123456789012345678901234567890"), "num"), big);
}

TEST(FrameSpec, RangesAndLists) {
  EXPECT_EQ(io::parse_frame_spec("20..35").size(), 16u);
  EXPECT_EQ(io::parse_frame_spec("M|F").labels(), (std::vector<std::string>{"M", "F"}));
  EXPECT_EQ(code_of([] { io::parse_frame_spec("M||F"); }), errc::malformed_expr);
  EXPECT_EQ(code_of([] { io::parse_frame_spec("35..20"); }), errc::malformed_expr);
  EXPECT_EQ(code_of([] { io::parse_frame_spec("0..100"); }), errc::frame_too_large);
}

TEST(RelationCsv, ReadsUnfilledCellsAndRoundTrips) {
  io::FrameTable frames{{"Age", Frame::integer_range(20, 35)}, {"Sex", build_frame({"M", "F"})}};
  std::istringstream in("Name,Age,Sex\r\n1,[22..26],{F}\n\n2,,{M}\n");
  Relation r = io::read_relation_csv(in, frames, "t");
  ASSERT_EQ(r.row_count(), 2u);
  EXPECT_FALSE(r.rows()[1].cells[0].has_value());
  EXPECT_EQ(io::relation_to_csv(r), "Name,Age,Sex\n1,{22|23|24|25|26},{F}\n2,,{M}\n");
  std::istringstream again(io::relation_to_csv(r));
  EXPECT_EQ(io::relation_to_csv(io::read_relation_csv(again, frames, "t")), io::relation_to_csv(r));
}

TEST(RelationCsv, Rejections) {
  io::FrameTable frames{{"Age", Frame::integer_range(20, 35)}};
  auto read = [&](const char* text) {
    std::istringstream in(text);
    io::read_relation_csv(in, frames, "t");
  };
  EXPECT_EQ(code_of([&] { read("Id,Age\n1,{20}\n"); }), errc::malformed_input);
  EXPECT_EQ(code_of([&] { read("Name,Age\n1,{20},{21}\n"); }), errc::malformed_input);
  EXPECT_EQ(code_of([&] { read("Name,Age\n-1,{20}\n"); }), errc::malformed_input);
  EXPECT_EQ(code_of([&] { read("Name,Age\n1,{20}\n1,{21}\n"); }), errc::malformed_input);
  EXPECT_EQ(code_of([&] { read("Name,Age\n1,{}\n"); }), errc::empty_cell);
  EXPECT_EQ(code_of([&] { read("Name,Age\n1,{19}\n"); }), errc::unknown_label);
  EXPECT_EQ(code_of([&] { read("Name,Height\n1,{19}\n"); }), errc::usage);
  EXPECT_EQ(code_of([&] { read(""); }), errc::malformed_input);
}

TEST(ConditionalParentCsv, Format) {
  Frame f = build_frame({"a", "b"});
  auto m = from_focal_list(f, {{parse_set_expr(f, "{a}"), Ratio(1, 2)}, {FocalSet::full(f), Ratio(1, 2)}});
  auto n = from_focal_list(f, {{parse_set_expr(f, "{b}"), Ratio(1)}});
  ConditionalParent p = build_conflict_free_parent(m, n);
  EXPECT_EQ(io::conditional_parent_to_csv(p), "Name,Age1,Age2,E1,E2\n1,*,{b},1,1\n2,{a},,1,\n3,,{b},,1\n");
}

TEST(MappingJson, RequiresEveryImage) {
  auto load = [](const char* text) { io::mapping_from_json(io::parse_json(text, "gamma")); };
  EXPECT_EQ(code_of([&] { load(R"({"source_frame":["M","F"],"target_frame":"20..22","map":{"M":"{20}"}})"); }),
            errc::malformed_input);
  EXPECT_EQ(code_of([&] { load(R"({"source_frame":["M"],"target_frame":"20..22","map":{"X":"{20}"}})"); }),
            errc::unknown_label);
}

TEST(Cli, SummarizeEmp) {
  Outcome r = run_cli({"summarize", "emp.csv", "--attr", "Age", "--frame", "Age=20..35"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = parse(r.out);
  EXPECT_EQ(j["verb"], "summarize");
  EXPECT_EQ(j["result"]["row_count"], 5);
  auto focal = j["result"]["distribution"]["focal"];
  ASSERT_EQ(focal.size(), 4u);
  EXPECT_EQ(focal[0]["set"], "{20|21|22}");
  EXPECT_EQ(focal[0]["num"], 2);
  EXPECT_EQ(focal[0]["den"], 5);
}

TEST(Cli, PropagateSexToAge) {
  Outcome r = run_cli({"propagate", "sex_acct.json", "--map", "gamma.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = parse(r.out)["result"];
  EXPECT_EQ(j["conditions"], io::json::array({"Dept=Acct"}));
  EXPECT_EQ(j["focal"][0]["set"], "{20|21|22}");
  EXPECT_EQ(j["focal"][1]["set"], "{21|22|23}");
  EXPECT_EQ(j["focal"][1]["num"], 3);
}

TEST(Cli, TotalConflictExitsTwo) {
  Outcome r = run_cli({"combine", "only_a.json", "only_b.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  auto j = parse(r.err);
  EXPECT_EQ(j["error"], "total_conflict");
  EXPECT_EQ(j["message"], "total conflict: normalization factor is zero");
}

TEST(Cli, DiagnosticsNameOffendingRows) {
  Outcome r = run_cli({"relcombine", "rel1.csv", "rel_disjoint.csv", "--attr", "Age", "--frame", "Age=20..35"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(parse(r.err)["rows"], io::json::array({1}));
}

TEST(Cli, NegativeAnswersExitZero) {
  Outcome z = run_cli({"combinable", "half.json", "skew.json", "--model", "zadeh"});
  ASSERT_EQ(z.code, 0) << z.err;
  EXPECT_EQ(parse(z.out)["result"]["combinable"], false);
  Outcome c = run_cli({"combinable", "half.json", "skew.json"});
  EXPECT_EQ(parse(c.out)["result"]["model"], "conditional");
  EXPECT_EQ(parse(c.out)["result"]["combinable"], true);
  Outcome s = run_cli({"satisfiable", "half.json", "skew.json"});
  EXPECT_EQ(parse(s.out)["result"]["satisfiable"], false);
  Outcome p = run_cli({"satisfies", "p_skew.json", "half.json"});
  EXPECT_EQ(parse(p.out)["result"]["violation"]["set"], "{a}");
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"combine", "half.json"}).code, 1);
  EXPECT_EQ(run_cli({"combinable", "half.json", "half.json", "--model", "other"}).code, 1);
  EXPECT_EQ(run_cli({"--format", "xml", "bel", "half.json", "--set", "{a}"}).code, 1);
  EXPECT_EQ(run_cli({"bel", "half.json", "--set", "{zz}"}).code, 1);
  EXPECT_EQ(run_cli({"summarize-where", "emp_dept.csv", "--attr", "Sex", "--where", "Dept", "--frames", "frames.json"}).code, 1);
  Outcome r = run_cli({"combine", "bad_syntax.json", "half.json"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, TableAndJsonCarryTheSamePayload) {
  Outcome j = run_cli({"bel", "a_ab.json", "--set", "{a}"});
  Outcome t = run_cli({"bel", "a_ab.json", "--set", "{a}", "--format", "table"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(parse(j.out)["result"]["value"]["num"], 1);
  EXPECT_EQ(t.out, "verb          bel\nresult.set    {a}\nresult.value  1/2\ndiagnostics   []\n");
}
