#include "vmc/fuzz.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace vmc {

FeatExpr random_feat_expr(Rng& rng, const std::vector<int>& features, int depth) {
  if (depth <= 0 || rng.chance(0.35)) {
    int c = rng.range(0, 9);
    if (c == 0) return FeatExpr::t();
    if (c == 1) return FeatExpr::f();
    FeatExpr v = FeatExpr::var(rng.pick(features));
    return rng.chance(0.4) ? FeatExpr::neg(v) : v;
  }
  FeatExpr a = random_feat_expr(rng, features, depth - 1);
  FeatExpr b = random_feat_expr(rng, features, depth - 1);
  switch (rng.range(0, 2)) {
    case 0:
      return FeatExpr::conj(a, b);
    case 1:
      return FeatExpr::disj(a, b);
    default:
      return FeatExpr::neg(a);
  }
}

ConfigSpace random_config_space(Rng& rng, int max_features) {
  int n = rng.range(1, max_features);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("fz" + std::to_string(i));
  ConfigSpace full = ConfigSpace::unconstrained(names);
  // Choose a random non-empty subset of 2^F as K, as an exact constraint.
  uint32_t total = 1u << n;
  std::vector<FeatExpr> members;
  std::vector<char> in(total, 0);
  for (uint32_t m = 0; m < total; ++m)
    if (rng.chance(0.6)) in[m] = 1;
  if (std::count(in.begin(), in.end(), 1) == 0) in[static_cast<size_t>(rng.range(0, static_cast<int>(total) - 1))] = 1;
  size_t count = 0;
  for (uint32_t m = 0; m < total; ++m)
    if (in[m]) {
      members.push_back(config_formula(full, Config{m}));
      ++count;
    }
  FeatExpr constraint = count == total ? FeatExpr::t() : FeatExpr::disj_all(members);
  return ConfigSpace(names, constraint);
}

Fts random_fts(Rng& rng, const RandomFtsOptions& opts) {
  ConfigSpace space = random_config_space(rng, opts.max_features);
  SystemCore core;
  int ns = rng.range(2, opts.max_states);
  for (int i = 0; i < ns; ++i) core.states.push_back("s" + std::to_string(i));
  int np = rng.range(1, opts.max_props);
  for (int i = 0; i < np; ++i) core.props.push_back(std::string(1, static_cast<char>('p' + i)));
  for (int i = 0; i < ns; ++i) {
    uint64_t bits = 0;
    for (int p = 0; p < np; ++p)
      if (rng.chance(0.4)) bits |= 1ull << p;
    core.labels.push_back(bits);
  }
  int na = rng.range(1, opts.max_actions);
  for (int i = 0; i < na; ++i) core.actions.push_back(std::string(1, static_cast<char>('a' + i)));
  core.initial.push_back(0);
  if (!opts.single_initial && ns > 1 && rng.chance(0.3)) core.initial.push_back(1);

  Fts fts{std::move(core), {}, {}, std::move(space)};
  int nt = rng.range(1, opts.max_transitions);
  std::set<std::tuple<int, int, int>> seen;
  for (int i = 0; i < nt; ++i) {
    Transition t{rng.range(0, ns - 1), rng.range(0, na - 1), rng.range(0, ns - 1)};
    if (!seen.insert(std::tuple<int, int, int>(t.src, t.action, t.dst)).second) continue;
    fts.trans.push_back(t);
    fts.presence.push_back(random_feat_expr(rng, fts.space.features(), 2));
  }
  return fts;
}

CtlFormula random_ctl(Rng& rng, const std::vector<std::string>& props, int depth) {
  using PathOp = CtlFormula::PathOp;
  if (depth <= 0 || rng.chance(0.3)) {
    int c = rng.range(0, 7);
    if (c == 0) return CtlFormula::t();
    if (c == 1) return CtlFormula::f();
    const std::string& p = rng.pick(props);
    return rng.chance(0.5) ? CtlFormula::atom(p) : CtlFormula::neg_atom(p);
  }
  switch (rng.range(0, 7)) {
    case 0:
      return CtlFormula::conj(random_ctl(rng, props, depth - 1),
                              random_ctl(rng, props, depth - 1));
    case 1:
      return CtlFormula::disj(random_ctl(rng, props, depth - 1),
                              random_ctl(rng, props, depth - 1));
    default: {
      bool forall = rng.chance(0.5);
      int op = rng.range(0, 4);
      CtlFormula f = random_ctl(rng, props, depth - 1);
      if (op <= 2) {
        PathOp p = op == 0 ? PathOp::Next : (op == 1 ? PathOp::Eventually : PathOp::Globally);
        return forall ? CtlFormula::forall(p, f) : CtlFormula::exists(p, f);
      }
      CtlFormula g = random_ctl(rng, props, depth - 1);
      PathOp p = op == 3 ? PathOp::Until : PathOp::Release;
      return forall ? CtlFormula::forall(p, f, g) : CtlFormula::exists(p, f, g);
    }
  }
}

Mts random_mts(Rng& rng, int max_states) {
  SystemCore core;
  int ns = rng.range(2, max_states);
  for (int i = 0; i < ns; ++i) core.states.push_back("s" + std::to_string(i));
  core.props = {"p", "q"};
  for (int i = 0; i < ns; ++i) {
    uint64_t bits = 0;
    if (rng.chance(0.4)) bits |= 1;
    if (rng.chance(0.4)) bits |= 2;
    core.labels.push_back(bits);
  }
  core.actions = {"a", "b"};
  core.initial = {0};

  Mts m{std::move(core), {}, {}};
  int nmay = rng.range(ns, 3 * ns);
  std::set<std::tuple<int, int, int>> seen;
  for (int i = 0; i < nmay; ++i) {
    Transition t{rng.range(0, ns - 1), rng.range(0, 1), rng.range(0, ns - 1)};
    if (!seen.insert(std::tuple<int, int, int>(t.src, t.action, t.dst)).second) continue;
    m.may.push_back(t);
    if (rng.chance(0.55)) m.must.push_back(t);
  }
  return m;
}

std::vector<PlanCell> random_plan(Rng& rng, const ConfigSpace& space) {
  int choice = rng.range(0, 2);
  if (choice == 0) return {PlanCell{FeatExpr::t(), Abstraction::join()}};
  if (choice == 1) {
    int feat = rng.pick(space.features());
    return {PlanCell{FeatExpr::t(), Abstraction::ignore(feat)}};
  }
  // Two-cell split on a feature; fall back to a single cell when one side
  // would be empty.
  int feat = rng.pick(space.features());
  FeatExpr pos = FeatExpr::var(feat);
  FeatExpr neg = FeatExpr::neg(pos);
  if (satisfying_configs(pos, space).empty() || satisfying_configs(neg, space).empty())
    return {PlanCell{FeatExpr::t(), Abstraction::join()}};
  return {PlanCell{pos, Abstraction::join()}, PlanCell{neg, Abstraction::join()}};
}

// --- Self tests -----------------------------------------------------------------

SelftestResult selftest_galois(uint64_t seed, int random_cases) {
  SelftestResult res;
  // Exhaustive adjunctions: every non-empty K over |F| in 1..3, join and
  // every single-feature ignore.
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
    ConfigSpace full = ConfigSpace::unconstrained(names);
    uint32_t total = 1u << n;
    for (uint32_t kset = 1; kset < (1u << total); ++kset) {
      std::vector<FeatExpr> members;
      for (uint32_t m = 0; m < total; ++m)
        if ((kset >> m) & 1u) members.push_back(config_formula(full, Config{m}));
      FeatExpr constraint =
          members.size() == total ? FeatExpr::t() : FeatExpr::disj_all(members);
      ConfigSpace space(names, constraint);
      std::vector<Abstraction> abstractions = {Abstraction::join()};
      for (const std::string& f : names) abstractions.push_back(Abstraction::ignore(f));
      for (const Abstraction& a : abstractions) {
        GaloisLawReport r = check_galois_law(a, space);
        res.cases += r.pairs_checked;
        if (!r.passed) {
          ++res.failures;
          res.messages.push_back("adjunction failed for " + a.to_string() + " over |F|=" +
                                 std::to_string(n) + ": " + r.witness->detail);
          if (res.failures > 5) return res;
        }
      }
    }
  }
  // Duality identity alpha~(e) == !alpha(!e) on random formulas, |F| <= 6.
  Rng rng(seed);
  for (int i = 0; i < random_cases; ++i) {
    int n = rng.range(1, 6);
    std::vector<std::string> names;
    for (int j = 0; j < n; ++j) names.push_back("d" + std::to_string(j));
    ConfigSpace space = ConfigSpace::unconstrained(names);
    FeatExpr e = random_feat_expr(rng, space.features(), 3);
    std::vector<Abstraction> abstractions = {Abstraction::join(),
                                             Abstraction::ignore(rng.pick(space.features()))};
    for (const Abstraction& a : abstractions) {
      ++res.cases;
      FeatExpr lhs = a.alpha_must(e, space);
      FeatExpr rhs = FeatExpr::neg(a.alpha_may(nnf(FeatExpr::neg(e)), space));
      if (!equiv(lhs, rhs)) {
        ++res.failures;
        res.messages.push_back("duality violated for " + a.to_string() + " on " +
                               print_feat_expr(e));
        if (res.failures > 5) return res;
      }
    }
  }
  return res;
}

SelftestResult selftest_preservation(uint64_t seed, int cases) {
  SelftestResult res;
  Rng rng(seed);
  for (int i = 0; i < cases; ++i) {
    Fts fts = random_fts(rng);
    CtlFormula phi = random_ctl(rng, fts.core.props, rng.range(1, 3));
    std::vector<PlanCell> plan = random_plan(rng, fts.space);
    ++res.cases;
    try {
      FamilyReport brute = check_fts_brute_force(fts, phi);
      FamilyReport fam = check_family_abstract(fts, phi, plan);
      for (size_t v = 0; v < fam.variants.size(); ++v) {
        const Verdict& fv = fam.variants[v].verdict;
        if (fv.kind == Verdict::Kind::Inconclusive) continue;
        const Verdict& bv = brute.verdict_for(fam.variants[v].config);
        if (bv.kind != fv.kind) {
          ++res.failures;
          std::ostringstream os;
          os << "soundness violation (case " << i << ", seed " << seed << "): variant "
             << fts.space.config_to_string(fam.variants[v].config) << " family="
             << to_string(fv.kind) << " brute=" << to_string(bv.kind) << " formula="
             << print_ctl(phi) << " plan=" << plan[0].abstraction.to_string();
          res.messages.push_back(os.str());
          if (res.failures > 10) return res;
        }
      }
    } catch (const Error& e) {
      // Plans over spaces where a cell ends up empty are regenerated rather
      // than counted; anything else is a failure.
      if (e.code == "EMPTY_CELL" || e.code == "NON_PARTITION") {
        --res.cases;
        continue;
      }
      ++res.failures;
      res.messages.push_back(std::string("error in case ") + std::to_string(i) + ": " +
                             e.what());
    }
  }
  return res;
}

SelftestResult selftest_differential(uint64_t seed, int cases) {
  SelftestResult res;
  Rng rng(seed);
  for (int i = 0; i < cases; ++i) {
    Mts m = random_mts(rng);
    CtlFormula phi = random_ctl(rng, m.core.props, rng.range(1, 3));
    ++res.cases;
    Verdict direct = check_mts_direct(m, phi);
    Verdict thm2 = check_mts_thm2(m, phi);
    if (direct.holds() != thm2.holds()) {
      ++res.findings;
      if (res.messages.size() < 16) {
        std::ostringstream os;
        os << "finding (case " << i << "): thm2=" << to_string(thm2.kind)
           << " direct=" << to_string(direct.kind) << " on " << print_ctl(phi);
        res.messages.push_back(os.str());
      }
    }
  }
  return res;
}

}  // namespace vmc
