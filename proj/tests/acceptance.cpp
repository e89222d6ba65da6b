// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "evicomb/cli.hpp"
#include "evicomb/evicomb.hpp"
#include "evicomb/io.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace evicomb;
namespace tk = evicomb::testkit;

namespace {

const std::string fixtures = EVICOMB_FIXTURES;

struct Verdict {
  bool pass;
  std::string detail;
};

Verdict fail(const std::string& why) { return {false, why}; }

std::string read(const std::string& name) {
  std::ifstream in(fixtures + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MassDistribution load_mass(const std::string& name) { return io::mass_from_json(io::json::parse(read(name))); }

bool raises(errc code, const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code() == code;
  }
  return false;
}

// 1. Summarizing the five-row employee table reproduces the granular distribution.
Verdict summarize_emp() {
  std::istringstream csv(read("emp.csv"));
  Relation emp = io::read_relation_csv(csv, {{"Age", Frame::integer_range(20, 35)}}, "EMP");
  MassDistribution got = summarize(emp, "Age").distribution;
  const Frame& f = got.frame();
  auto s = [&](const char* e) { return parse_set_expr(f, e); };
  MassDistribution want = from_focal_list(f, {{s("[22..26]"), Ratio(1, 5)},
                                              {s("[20..22]"), Ratio(2, 5)},
                                              {s("[30..35]"), Ratio(1, 5)},
                                              {s("[28..30]"), Ratio(1, 5)}});
  if (!(got == want)) return fail("summary differs: " + io::mass_to_json(got).dump());
  return {true, "4 focal elements, exact"};
}

// 2. Sex distribution pushed through the sex-to-age mapping.
Verdict propagate_sex() {
  MassDistribution sex = load_mass("sex_acct.json");
  MultivaluedMapping gamma = io::mapping_from_json(io::json::parse(read("gamma.json")));
  MassDistribution got = propagate(sex, gamma);
  const Frame& f = got.frame();
  MassDistribution want = from_focal_list(
      f, {{parse_set_expr(f, "[20..22]"), Ratio(1, 4)}, {parse_set_expr(f, "[21..23]"), Ratio(3, 4)}}, {"Dept=Acct"});
  if (!(got == want)) return fail("propagated distribution differs: " + io::mass_to_json(got).dump());
  return {true, "conditions {Dept=Acct} preserved"};
}

// 3. Constructive conflict-free parent on intersecting pairs; both failure
//    signals on totally disjoint pairs.
Verdict conflict_free_parent() {
  tk::rng g(1003);
  int built = 0, disjoint = 0;
  while (built < 500) {
    Frame f = tk::letter_frame(tk::uniform(g, 1, 10));
    auto m1 = tk::random_mass(g, f, 5, 12, {"E1"});
    auto m2 = tk::random_mass(g, f, 5, 12, {"E2"});
    if (!conditional_combinable(m1, m2)) continue;
    ConditionalParent p = build_conflict_free_parent(m1, m2);
    if (!p.violations().empty()) return fail("invariant broken: " + p.violations().front());
    if (!(p.marginal(1) == m1.with_conditions({})) || !(p.marginal(2) == m2.with_conditions({})))
      return fail("marginal recovery failed");
    ++built;
  }
  while (disjoint < 100) {
    Frame f = tk::letter_frame(tk::uniform(g, 2, 10));
    FocalSet region = tk::random_nonempty_subset(g, f);
    if (region.is_full()) continue;
    auto m1 = tk::random_mass_within(g, region, 5, 12);
    auto m2 = tk::random_mass_within(g, complement(region), 5, 12);
    if (!raises(errc::not_combinable, [&] { build_conflict_free_parent(m1, m2); }))
      return fail("disjoint pair did not raise not_combinable");
    if (!raises(errc::total_conflict, [&] { dempster_combine(m1, m2); }))
      return fail("disjoint pair did not raise total_conflict");
    ++disjoint;
  }
  return {true, std::to_string(built) + " constructions, " + std::to_string(disjoint) + " disjoint pairs"};
}

// 4. Envelope chain on refined relations.
Verdict envelope() {
  tk::rng g(1004);
  for (int trial = 0; trial < 500; ++trial) {
    Frame f = tk::letter_frame(tk::uniform(g, 1, 12));
    const std::size_t n = tk::uniform(g, 1, 8);
    Relation ra("A", {"a"}, {f}), rb("B", {"a"}, {f});
    for (std::size_t i = 1; i <= n; ++i) {
      FocalSet a = tk::random_nonempty_subset(g, f);
      std::uint64_t sub = 0;
      while (sub == 0) sub = std::uniform_int_distribution<std::uint64_t>(1, f.full_mask())(g) & a.bits();
      ra.add_row(i, {a});
      rb.add_row(i, {FocalSet(f, sub)});
    }
    if (!check_envelope(ra, rb, "a")) return fail("counterexample at trial " + std::to_string(trial));
  }
  return {true, "500 relation pairs, 0 counterexamples"};
}

// A second distribution coupled to m1 through a random transport plan, so
// that the pair is combinable under the unconditioned reading.
MassDistribution coupled(tk::rng& g, const MassDistribution& m1) {
  std::vector<std::pair<FocalSet, Ratio>> pairs;
  for (const auto& [a, w] : m1.focal()) {
    const std::size_t pieces = tk::uniform(g, 1, 2);
    for (std::size_t k = 0; k < pieces; ++k) {
      std::uint64_t extra = std::uniform_int_distribution<std::uint64_t>(0, m1.frame().full_mask())(g);
      std::uint64_t anchor = std::uint64_t{1} << a.members()[tk::uniform(g, 0, a.size() - 1)];
      pairs.emplace_back(FocalSet(m1.frame(), anchor | extra), w / Ratio(pieces));
    }
  }
  return from_focal_list(m1.frame(), pairs);
}

// 5. Unconditioned combinability implies a jointly satisfying probability.
Verdict implication() {
  tk::rng g(1005);
  int feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Frame f = tk::letter_frame(tk::uniform(g, 1, 8));
    auto m1 = tk::random_mass(g, f, 5, 12);
    auto m2 = trial % 2 ? coupled(g, m1) : tk::random_mass(g, f, 5, 12);
    if (!zadeh_combinable(m1, m2).feasible) continue;
    ++feasible;
    auto w = joint_satisfiable(m1, m2);
    if (!w) return fail("no witness at trial " + std::to_string(trial));
    if (!satisfies(*w, m1) || !satisfies(*w, m2)) return fail("witness rejected at trial " + std::to_string(trial));
  }
  if (feasible == 0) return fail("corpus contained no combinable pair");
  return {true, std::to_string(feasible) + " combinable pairs of 300, 0 violations"};
}

// 6. A focal element disjoint from everything opposite blocks combination.
Verdict blocking_focal() {
  tk::rng g(1006);
  for (int trial = 0; trial < 50; ++trial) {
    Frame f = tk::letter_frame(tk::uniform(g, 2, 10));
    FocalSet region = tk::random_nonempty_subset(g, f);
    if (region.is_full()) {
      --trial;
      continue;
    }
    std::uint64_t cbits = 0;
    while (cbits == 0) cbits = std::uniform_int_distribution<std::uint64_t>(1, f.full_mask())(g) & region.bits();
    FocalSet c(f, cbits);
    const std::size_t den = tk::uniform(g, 2, 12);
    const std::size_t cw = tk::uniform(g, 1, den - 1);
    auto with_c = from_focal_list(
        f, {{c, Ratio(bigint(cw), bigint(den))}, {FocalSet::full(f), Ratio(bigint(den - cw), bigint(den))}});
    auto other = tk::random_mass_within(g, complement(region), 4, 12);
    const bool swap = trial % 2 == 1;
    auto w = swap ? zadeh_combinable(other, with_c) : zadeh_combinable(with_c, other);
    if (w.feasible) return fail("constructed case reported feasible");
    if (!w.blocking_focal || !(*w.blocking_focal == c)) return fail("blocking focal not reported");
  }
  return {true, "50 constructed cases, 0 failures"};
}

// 7. Dempster's rule is commutative, associative and has the vacuous identity.
Verdict dempster_algebra() {
  tk::rng g(1007);
  int triples = 0;
  while (triples < 500) {
    Frame f = tk::letter_frame(tk::uniform(g, 1, 8));
    auto m1 = tk::random_mass(g, f, 4, 12, {"E1"});
    auto m2 = tk::random_mass(g, f, 4, 12, {"E2"});
    auto m3 = tk::random_mass(g, f, 4, 12, {"E3"});
    auto ok = [](const MassDistribution& a, const MassDistribution& b) {
      return conflict_weight(a, b).conflict_weight < Ratio(1);
    };
    if (!ok(m1, m2) || !ok(m2, m3)) continue;
    auto m12 = dempster_combine(m1, m2), m23 = dempster_combine(m2, m3);
    if (!ok(m12, m3) || !ok(m1, m23)) continue;
    if (!(m12 == dempster_combine(m2, m1))) return fail("not commutative");
    if (!(dempster_combine(m12, m3) == dempster_combine(m1, m23))) return fail("not associative");
    ++triples;
  }
  for (int trial = 0; trial < 100; ++trial) {
    Frame f = tk::letter_frame(tk::uniform(g, 1, 10));
    auto m = tk::random_mass(g, f, 5, 12);
    if (!(dempster_combine(vacuous(f), m) == m) || !(dempster_combine(m, vacuous(f)) == m))
      return fail("vacuous is not an identity");
  }
  return {true, "500 triples, 100 identity checks"};
}

// 8. Both decision procedures agree with exhaustive oracles.
Verdict oracle_equivalence() {
  tk::rng g(1008);
  int zadeh_cases = 0, feasible = 0;
  for (; zadeh_cases < 1200; ++zadeh_cases) {
    Frame f = tk::letter_frame(tk::uniform(g, 1, 6));
    const std::size_t den = tk::uniform(g, 1, 12);
    auto m1 = tk::random_mass_over(g, f, 4, den);
    auto m2 = zadeh_cases % 3 == 0 ? tk::random_mass_over(g, f, 4, den) : [&] {
      // bias toward near-misses: reuse m1's focal sets with fresh weights
      std::vector<std::pair<FocalSet, Ratio>> pairs;
      auto parts = tk::composition(g, den, std::min<std::size_t>(den, m1.focal().size()));
      auto it = m1.focal().begin();
      for (std::size_t part : parts) pairs.emplace_back((it++)->first, Ratio(bigint(part), bigint(den)));
      return from_focal_list(f, pairs);
    }();
    const bool got = zadeh_combinable(m1, m2).feasible;
    feasible += got;
    if (got != oracle::zadeh_feasible(m1, m2)) return fail("zadeh_combinable disagrees with oracle");
  }
  int lp_cases = 0;
  for (; lp_cases < 400; ++lp_cases) {
    Frame f = tk::letter_frame(tk::uniform(g, 1, 3));
    auto m1 = tk::random_mass(g, f, 4, 6);
    auto m2 = tk::random_mass(g, f, 4, 6);
    if (joint_satisfiable(m1, m2).has_value() != oracle::grid_joint_satisfiable(m1, m2))
      return fail("joint_satisfiable disagrees with grid oracle");
  }
  return {true, std::to_string(zadeh_cases) + " transport instances (" + std::to_string(feasible) +
                    " feasible), " + std::to_string(lp_cases) + " credal instances"};
}

// 9. A pair that Dempster's rule combines but that has no conflict-free
//    unconditioned parent relation.
Verdict divergence() {
  MassDistribution half = load_mass("half.json"), skew = load_mass("skew.json");
  if (!conditional_combinable(half, skew)) return fail("not conditional-combinable");
  if (!(conflict_weight(half, skew).conflict_weight < Ratio(1))) return fail("K is not below 1");
  MassDistribution combined = dempster_combine(half, skew);
  if (zadeh_combinable(half, skew).feasible) return fail("unexpectedly zadeh-feasible");
  build_conflict_free_parent(half.with_conditions({"E1"}), skew.with_conditions({"E2"}));
  return {true, "Dempster result " + io::mass_to_json(combined)["focal"].dump() + ", zadeh-infeasible"};
}

// 10. Byte-identical CLI output; malformed input exits 1 with empty stdout.
Verdict cli_determinism() {
  const std::string scratch = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/evicomb_parent.csv";
  auto fx = [](const std::string& name) { return fixtures + "/" + name; };
  const std::vector<std::vector<std::string>> verbs = {
      {"summarize", fx("emp.csv"), "--attr", "Age", "--frame", "Age=20..35"},
      {"summarize-where", fx("emp_dept.csv"), "--attr", "Sex", "--where", "Dept=Acct", "--frames", fx("frames.json")},
      {"bel", fx("a_ab.json"), "--set", "{a}"},
      {"pls", fx("a_ab.json"), "--set", "{b}"},
      {"combine", fx("age_e1.json"), fx("age_e2.json")},
      {"combinable", fx("half.json"), fx("skew.json"), "--model", "zadeh", "--witness"},
      {"combinable", fx("age_e1.json"), fx("age_e2.json"), "--model", "conditional", "--witness"},
      {"parent", fx("age_e1.json"), fx("age_e2.json"), "--out", scratch},
      {"propagate", fx("sex_acct.json"), "--map", fx("gamma.json")},
      {"relcombine", fx("rel1.csv"), fx("rel2.csv"), "--attr", "Age", "--frame", "Age=20..35"},
      {"satisfies", fx("p_half.json"), fx("half.json")},
      {"satisfiable", fx("a_ab.json"), fx("b_ab.json")},
      {"check-envelope", fx("env_a.csv"), fx("env_b.csv"), "--attr", "Age", "--frame", "Age=20..35"},
      {"--format", "table", "combine", fx("a_ab.json"), fx("b_ab.json")},
  };
  for (const auto& args : verbs) {
    std::ostringstream out1, out2, err1, err2;
    int c1 = cli::run(args, out1, err1), c2 = cli::run(args, out2, err2);
    if (c1 != 0 || c2 != 0) return fail(args.front() + " exited " + std::to_string(c1) + ": " + err1.str());
    if (out1.str() != out2.str() || out1.str().empty()) return fail(args.front() + " output not reproducible");
  }
  const std::vector<std::vector<std::string>> malformed = {
      {"combine", fx("bad_syntax.json"), fx("half.json")},
      {"bel", fx("bad_label.json"), "--set", "{a}"},
      {"summarize", fx("bad.csv"), "--attr", "Age", "--frame", "Age=20..35"},
      {"bel", fx("half.json"), "--set", "[1..2]"},
      {"combine", fx("half.json")},
      {"nonsense"},
  };
  for (const auto& args : malformed) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    if (code != 1) return fail("malformed input exited " + std::to_string(code));
    if (!out.str().empty()) return fail("malformed input wrote to stdout");
  }
  std::remove(scratch.c_str());
  return {true, std::to_string(verbs.size()) + " invocations reproducible, " + std::to_string(malformed.size()) +
                    " malformed inputs rejected"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0: no time bound
  Verdict (*check)();
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "granular distribution of the employee table", 1.0, summarize_emp},
      {2, "propagation through a multivalued mapping", 1.0, propagate_sex},
      {3, "conflict-free conditional parent construction", 30.0, conflict_free_parent},
      {4, "belief/plausibility envelope of refined relations", 60.0, envelope},
      {5, "combinable implies jointly satisfiable", 60.0, implication},
      {6, "disjoint focal element blocks combination", 0.0, blocking_focal},
      {7, "Dempster rule algebra", 30.0, dempster_algebra},
      {8, "oracle equivalence", 0.0, oracle_equivalence},
      {9, "conditional vs unconditioned divergence", 0.0, divergence},
      {10, "CLI determinism", 0.0, cli_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (v.pass && c.limit_seconds > 0 && seconds >= c.limit_seconds)
      v = fail("took " + std::to_string(seconds) + " s, limit " + std::to_string(c.limit_seconds) + " s");
    failures += !v.pass;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", seconds);
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << "AC" << c.id << " " << c.name << " (" << timing << "): "
              << v.detail << "\n";
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures == 0 ? 0 : 1;
}
