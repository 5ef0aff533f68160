#include "vmc/bench.hpp"

namespace vmc {

const char* kBenchDefaultProperty = "AF xge0";

Fts make_scaling_family(int n, size_t max_states) {
  if (n < 1) throw Error("BAD_ARGUMENT", "the family needs at least one feature");
  if (n > 24 || (1ull << n) > max_states)
    throw Error("STATE_BUDGET",
                "scaling family with " + std::to_string(n) + " features needs " +
                    std::to_string(1ull << n) + " states, which exceeds the budget of " +
                    std::to_string(max_states));

  std::vector<std::string> features;
  std::vector<FeatExpr> feature_vars;
  for (int i = 1; i <= n; ++i) {
    features.push_back("f" + std::to_string(i));
    feature_vars.push_back(FeatExpr::var(features.back()));
  }

  SystemCore core;
  const uint32_t total = 1u << n;
  core.props = {"xge0", "xgt0"};
  core.states.reserve(total);
  core.labels.reserve(total);
  auto value_of = [&](uint32_t mask) {
    long x = 0;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) x += i + 1;
    return x;
  };
  for (uint32_t mask = 0; mask < total; ++mask) {
    long x = value_of(mask);
    core.states.push_back("x" + std::to_string(x) + "_m" + std::to_string(mask));
    core.labels.push_back(x > 0 ? 0b11u : 0b01u);
  }
  core.initial = {0};
  core.actions.reserve(static_cast<size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) core.actions.push_back("add" + std::to_string(i));
  core.actions.push_back("stay");
  const int stay_action = n;

  Fts fts{std::move(core), {}, {}, ConfigSpace::unconstrained(features)};
  fts.trans.reserve(static_cast<size_t>(total) * (static_cast<size_t>(n) / 2 + 1));
  for (uint32_t mask = 0; mask < total; ++mask) {
    std::vector<FeatExpr> unfired;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) continue;
      fts.trans.push_back(Transition{static_cast<int>(mask), i,
                                     static_cast<int>(mask | (1u << i))});
      fts.presence.push_back(feature_vars[static_cast<size_t>(i)]);
      unfired.push_back(FeatExpr::neg(feature_vars[static_cast<size_t>(i)]));
    }
    // Once every enabled feature has fired the counter stays put.
    fts.trans.push_back(Transition{static_cast<int>(mask), stay_action,
                                   static_cast<int>(mask)});
    fts.presence.push_back(FeatExpr::conj_all(unfired));
  }
  return fts;
}

}  // namespace vmc
