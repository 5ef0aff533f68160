// Acceptance suite: one case per criterion, each printing a summary line.

#include <chrono>
#include <functional>
#include <iostream>

#include "doctest.h"
#include "testutil.hpp"
#include "vmc/bench.hpp"
#include "vmc/checker.hpp"
#include "vmc/dsl.hpp"
#include "vmc/fuzz.hpp"
#include "vmc/galois.hpp"

using namespace vmc;
using vmctest::load_vending;
using vmctest::make_vending;
using vmctest::vm_config;

namespace {

double run_ms(const std::function<void()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report_line(int criterion, bool pass, const std::string& detail) {
  std::cout << "[criterion " << criterion << "] " << (pass ? "PASS" : "FAIL") << " - "
            << detail << std::endl;
}

const uint64_t kSeed = 20260810;

}  // namespace

TEST_CASE("criterion 1: partitioned response property") {
  Fts vm = load_vending();
  CtlFormula phi = parse_ctl("AG (AF start)");
  std::vector<PlanCell> plan = {PlanCell{parse_feat_expr("c"), Abstraction::join()},
                                PlanCell{parse_feat_expr("!c"), Abstraction::join()}};
  FamilyReport report;
  double ms = run_ms([&] { report = check_family_abstract(vm, phi, plan); });

  bool verdicts_ok = report.count(Verdict::Kind::Fails) == 4 &&
                     report.count(Verdict::Kind::Holds) == 4 &&
                     report.count(Verdict::Kind::Inconclusive) == 0;
  std::set<std::string> failing;
  for (const auto& v : report.variants)
    if (v.verdict.fails()) failing.insert(vm.space.config_to_string(v.config));
  std::set<std::string> expected = {"{c, s, v}", "{c, s, t, v}", "{c, f, s, v}",
                                    "{c, f, s, t, v}"};
  bool set_ok = failing == expected;
  bool time_ok = ms < 1000.0;
  bool pass = verdicts_ok && set_ok && time_ok;
  report_line(1, pass,
              "fails on exactly the 4 cancel variants, holds elsewhere, no inconclusive (" +
                  std::to_string(ms) + " ms)");
  CHECK(verdicts_ok);
  CHECK(set_ok);
  CHECK(time_ok);
}

TEST_CASE("criterion 2: mixed property through both components") {
  Fts vm = load_vending();
  CtlFormula phi = parse_ctl("AG (EF start)");
  FamilyReport fam, brute;
  double ms = run_ms([&] {
    fam = check_family_abstract(vm, phi, {PlanCell{FeatExpr::t(), Abstraction::join()}});
  });
  brute = check_fts_brute_force(vm, phi);

  // Both component checks hold on the joined system.
  Mfts m = abstract_fts(stutter_complete(vm), Abstraction::join());
  Mts top = project_mfts_variant(m, m.space.valid_configs()[0]);
  Thm2Outcome components;
  check_mts_thm2(top, phi, &components);

  bool pass = fam.all_hold() && brute.all_hold() && components.may_verdict.holds() &&
              components.must_verdict.holds() && ms < 1000.0;
  report_line(2, pass, "join strategy holds for all 8 variants via may and must checks, "
                       "brute force agrees (" + std::to_string(ms) + " ms)");
  CHECK(fam.all_hold());
  CHECK(brute.all_hold());
  CHECK(components.may_verdict.holds());
  CHECK(components.must_verdict.holds());
  CHECK(ms < 1000.0);
}

TEST_CASE("criterion 3: existential property with a replayable witness") {
  Fts vm = load_vending();
  CtlFormula phi = parse_ctl("EG (EF start)");
  FamilyReport fam;
  double ms = run_ms([&] {
    fam = check_family_abstract(vm, phi, {PlanCell{FeatExpr::t(), Abstraction::join()}});
  });
  bool holds_ok = fam.all_hold();

  // The witness must replay on the must graph and start at state 1.
  Fts completed = stutter_complete(vm);
  Mfts m = abstract_fts(completed, Abstraction::join());
  Fts mustF = must_component(m);
  Mts top = project_mfts_variant(m, m.space.valid_configs()[0]);
  bool witness_ok = false;
  if (!fam.evidence.empty()) {
    const Path& w = fam.evidence[0].path;
    witness_ok = w.is_lasso() && w.states[0] == vm.core.state_id("1") &&
                 path_executable(top.core, top.must, w);
    // Semantic replay: every lasso state reaches state 1 inside the must graph.
    if (witness_ok) {
      for (int s : w.states) {
        std::set<int> seen{s};
        std::vector<int> work{s};
        bool reaches = false;
        while (!work.empty()) {
          int cur = work.back();
          work.pop_back();
          if (cur == vm.core.state_id("1")) {
            reaches = true;
            break;
          }
          for (const Transition& t : top.must)
            if (t.src == cur && seen.insert(t.dst).second) work.push_back(t.dst);
        }
        witness_ok = witness_ok && reaches;
      }
    }
  }
  bool time_ok = ms < 1000.0;
  bool pass = holds_ok && witness_ok && time_ok;
  report_line(3, pass, "must-component witness replays from state 1 (" +
                           std::to_string(ms) + " ms)");
  CHECK(holds_ok);
  CHECK(witness_ok);
  CHECK(time_ok);
}

TEST_CASE("criterion 4: adjunction laws and duality") {
  SelftestResult r = selftest_galois(kSeed, 1000);
  for (const auto& msg : r.messages) MESSAGE(msg);
  bool pass = r.failures == 0;
  report_line(4, pass, "adjunctions exhaustive to |F|=3 plus 1000 duality samples, " +
                           std::to_string(r.cases) + " checks, " +
                           std::to_string(r.failures) + " failures");
  CHECK(r.failures == 0);
}

TEST_CASE("criterion 5: preservation against brute force") {
  SelftestResult r;
  double ms = run_ms([&] { r = selftest_preservation(kSeed, 500); });
  for (const auto& msg : r.messages) MESSAGE(msg);
  bool pass = r.failures == 0 && r.cases >= 500 && ms < 60000.0;
  report_line(5, pass, std::to_string(r.cases) + " random families, " +
                           std::to_string(r.failures) + " soundness violations (" +
                           std::to_string(ms) + " ms)");
  CHECK(r.failures == 0);
  CHECK(r.cases >= 500);
  CHECK(ms < 60000.0);
}

TEST_CASE("criterion 6: structural invariants of produced abstractions") {
  long violations = 0;
  long checked = 0;
  auto inspect = [&](const Mfts& m) {
    ++checked;
    if (!validate(m).empty()) ++violations;
    for (size_t i = 0; i < m.trans.size(); ++i)
      if (m.presence_must[i] &&
          !entails(*m.presence_must[i], m.presence_may[i], m.space))
        ++violations;
  };
  // The abstractions behind criteria 1-3.
  Fts vm = stutter_complete(load_vending());
  inspect(abstract_fts(project_subset(vm, parse_feat_expr("c")), Abstraction::join()));
  inspect(abstract_fts(project_subset(vm, parse_feat_expr("!c")), Abstraction::join()));
  inspect(abstract_fts(vm, Abstraction::join()));
  // And a fresh randomized batch mirroring criterion 5's generator.
  Rng rng(kSeed);
  for (int i = 0; i < 200; ++i) {
    Fts f = stutter_complete(random_fts(rng));
    std::vector<Abstraction> as = {Abstraction::join(),
                                   Abstraction::ignore(rng.pick(f.space.features()))};
    for (const Abstraction& a : as) inspect(abstract_fts(f, a));
  }
  bool pass = violations == 0;
  report_line(6, pass, std::to_string(checked) + " abstractions checked for must-in-may "
                       "and presence entailment, " + std::to_string(violations) +
                       " violations");
  CHECK(violations == 0);
}

TEST_CASE("criterion 7: lemma suite") {
  long failures = 0;
  long checks = 0;
  // Lemma 1, exhaustively: every non-empty K over |F| <= 3, every Boolean
  // function as psi, join and every single-feature ignore.
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("l" + std::to_string(i));
    ConfigSpace full = ConfigSpace::unconstrained(names);
    uint32_t total = 1u << n;
    for (uint32_t kset = 1; kset < (1u << total); ++kset) {
      std::vector<FeatExpr> members;
      for (uint32_t mask = 0; mask < total; ++mask)
        if ((kset >> mask) & 1u) members.push_back(config_formula(full, Config{mask}));
      ConfigSpace space(names, members.size() == total ? FeatExpr::t()
                                                       : FeatExpr::disj_all(members));
      std::vector<Abstraction> as = {Abstraction::join()};
      for (const auto& nm : names) as.push_back(Abstraction::ignore(nm));
      for (const Abstraction& a : as) {
        AbstractSpace abs = a.abstract_space(space);
        for (const FeatExpr& psi : boolean_function_representatives(space.features())) {
          FeatExpr may = a.alpha_may(psi, space);
          FeatExpr must = a.alpha_must(psi, space);
          for (size_t ki = 0; ki < space.valid_configs().size(); ++ki) {
            const Config& k = space.valid_configs()[ki];
            const Config& mapped = abs.space.valid_configs()[abs.config_map[ki]];
            ++checks;
            if (eval(space, k, psi) && !eval(abs.space, mapped, may)) ++failures;
            if (eval(abs.space, mapped, must) && !eval(space, k, psi)) ++failures;
          }
        }
      }
    }
  }
  // Lemma 2 on bounded lassos of 100 random families.
  Rng rng(kSeed + 7);
  for (int round = 0; round < 100; ++round) {
    RandomFtsOptions opts;
    opts.max_states = 4;
    opts.max_features = 3;
    opts.max_transitions = 7;
    Fts f = random_fts(rng, opts);
    Abstraction a = rng.chance(0.5)
                        ? Abstraction::join()
                        : Abstraction::ignore(rng.pick(f.space.features()));
    Mfts m = abstract_fts(f, a);
    for (size_t ki = 0; ki < f.space.valid_configs().size(); ++ki) {
      const Config& k = f.space.valid_configs()[ki];
      const Config& mapped = m.space.valid_configs()[m.config_map[ki]];
      Ts proj = project_variant(f, k);
      Mts abs = project_mfts_variant(m, mapped);
      Ts must_ts{abs.core, abs.must};
      for (int init : f.core.initial) {
        for (const Path& p : vmctest::enumerate_lassos(proj, init, 8)) {
          ++checks;
          if (!path_executable(abs.core, abs.may, p)) ++failures;
        }
        for (const Path& p : vmctest::enumerate_lassos(must_ts, init, 8)) {
          ++checks;
          if (!path_executable(proj.core, proj.trans, p)) ++failures;
        }
      }
    }
  }
  bool pass = failures == 0;
  report_line(7, pass, std::to_string(checks) + " lemma instances, " +
                           std::to_string(failures) + " failures");
  CHECK(failures == 0);
}

TEST_CASE("criterion 8: synthetic scaling family") {
  CtlFormula phi = parse_ctl(kBenchDefaultProperty);
  // n = 10: brute force and the join strategy agree on every variant.
  Fts small = make_scaling_family(10);
  BruteOptions brute_opts;
  brute_opts.max_variants = 2048;
  FamilyReport brute = check_fts_brute_force(small, phi, brute_opts);
  FamilyReport joined =
      check_family_abstract(small, phi, {PlanCell{FeatExpr::t(), Abstraction::join()}});
  bool agree = brute.variants.size() == 1024 && joined.variants.size() == 1024;
  for (size_t i = 0; agree && i < brute.variants.size(); ++i)
    agree = brute.variants[i].verdict.kind == joined.variants[i].verdict.kind &&
            brute.variants[i].verdict.kind == Verdict::Kind::Holds;

  // n = 18: join completes quickly; brute force is refused by budget.
  FamilyReport big;
  double ms = run_ms([&] {
    Fts large = make_scaling_family(18);
    big = check_family_abstract(large, phi, {PlanCell{FeatExpr::t(), Abstraction::join()}});
  });
  bool big_ok = big.variants.size() == (1u << 18) && big.all_hold();
  bool time_ok = ms < 5000.0;
  bool refused = false;
  try {
    Fts large = make_scaling_family(18);
    check_fts_brute_force(large, phi);
  } catch (const Error& e) {
    refused = e.code == "VARIANT_BUDGET";
  }
  bool pass = agree && big_ok && time_ok && refused;
  report_line(8, pass, "n=10 verdicts identical (1024 variants); n=18 join in " +
                           std::to_string(ms) + " ms; n=18 brute force refused");
  CHECK(agree);
  CHECK(big_ok);
  CHECK(time_ok);
  CHECK(refused);
}

TEST_CASE("criterion 9: syntactic transformations commute") {
  long violations = 0;
  long cases = 0;
  // Bundled model.
  ModelDocument doc = parse_model(vmctest::read_file(vmctest::models_dir() + "/vending.fts"));
  Fts vm = build_fts(doc);
  for (const char* expr : {"!c", "v & s", "t | f", "true"}) {
    ++cases;
    if (!fts_equivalent(build_fts(apply_invar(doc, parse_feat_expr(expr))),
                        project_subset(vm, parse_feat_expr(expr))))
      ++violations;
  }
  std::vector<Abstraction> vm_abs = {Abstraction::join(), Abstraction::ignore_set({"t", "f"}),
                                     Abstraction::ignore(std::string("c"))};
  for (const Abstraction& a : vm_abs) {
    Mfts m = abstract_fts(vm, a);
    ++cases;
    if (!fts_equivalent(build_fts(apply_abstraction_syntactic(doc, a, ComponentMode::May)),
                        may_component(m)))
      ++violations;
    ++cases;
    if (!fts_equivalent(build_fts(apply_abstraction_syntactic(doc, a, ComponentMode::Must)),
                        must_component(m)))
      ++violations;
  }
  // 200 fuzzed documents.
  Rng rng(kSeed + 9);
  for (int i = 0; i < 200; ++i) {
    RandomFtsOptions opts;
    opts.max_states = 5;
    opts.max_transitions = 8;
    Fts f = random_fts(rng, opts);
    ModelDocument d;
    d.features = f.space.feature_names();
    d.configs = f.space.constraint();
    for (size_t s = 0; s < f.core.states.size(); ++s) {
      ModelDocument::StateDecl st;
      st.name = f.core.states[s];
      st.init = f.core.is_initial(static_cast<int>(s));
      for (size_t p = 0; p < f.core.props.size(); ++p)
        if (f.core.has_label(static_cast<int>(s), static_cast<int>(p)))
          st.labels.push_back(f.core.props[p]);
      d.states.push_back(std::move(st));
    }
    for (size_t t = 0; t < f.trans.size(); ++t) {
      ModelDocument::TransDecl tr;
      tr.src = f.core.states[static_cast<size_t>(f.trans[t].src)];
      tr.dst = f.core.states[static_cast<size_t>(f.trans[t].dst)];
      tr.action = f.core.actions[static_cast<size_t>(f.trans[t].action)];
      tr.when = f.presence[t];
      d.trans.push_back(std::move(tr));
    }
    Fts built = build_fts(d);
    FeatExpr e = random_feat_expr(rng, built.space.features(), 2);
    if (satisfiable_in(e, built.space)) {
      ++cases;
      if (!fts_equivalent(build_fts(apply_invar(d, e)), project_subset(built, e)))
        ++violations;
    }
    Abstraction a = rng.chance(0.5)
                        ? Abstraction::join()
                        : Abstraction::ignore(rng.pick(built.space.features()));
    Mfts m = abstract_fts(built, a);
    ++cases;
    if (!fts_equivalent(build_fts(apply_abstraction_syntactic(d, a, ComponentMode::May)),
                        may_component(m)))
      ++violations;
    ++cases;
    if (!fts_equivalent(build_fts(apply_abstraction_syntactic(d, a, ComponentMode::Must)),
                        must_component(m)))
      ++violations;
  }
  bool pass = violations == 0;
  report_line(9, pass, std::to_string(cases) + " commutation cases, " +
                           std::to_string(violations) + " violations");
  CHECK(violations == 0);
}

TEST_CASE("criterion 10: differential modal checking") {
  SelftestResult r = selftest_differential(kSeed, 500);
  for (const auto& msg : r.messages) MESSAGE(msg);
  bool pass = r.failures == 0 && r.cases == 500;
  report_line(10, pass, std::to_string(r.cases) + " random modal systems, " +
                            std::to_string(r.findings) +
                            " thm2/direct disagreements recorded as findings");
  CHECK(r.failures == 0);
  CHECK(r.cases == 500);
}
