#pragma once

// Randomized generators and the self-test drivers behind `vmc selftest`.
// The same drivers back the acceptance suite, so that failures are
// reproducible from the command line with a seed.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vmc/checker.hpp"
#include "vmc/ctl.hpp"
#include "vmc/featexpr.hpp"
#include "vmc/models.hpp"

namespace vmc {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}
  int range(int lo, int hi) {  // inclusive
    return static_cast<int>(std::uniform_int_distribution<int>(lo, hi)(eng));
  }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(eng) < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<size_t>(range(0, static_cast<int>(v.size()) - 1))];
  }
};

FeatExpr random_feat_expr(Rng& rng, const std::vector<int>& features, int depth);

// Random non-empty K over 1..max_features features named fz0, fz1, ...
ConfigSpace random_config_space(Rng& rng, int max_features);

struct RandomFtsOptions {
  int max_states = 6;
  int max_features = 4;
  int max_transitions = 12;
  int max_props = 2;
  int max_actions = 3;
  bool single_initial = false;
};

Fts random_fts(Rng& rng, const RandomFtsOptions& opts = {});

CtlFormula random_ctl(Rng& rng, const std::vector<std::string>& props, int depth);

Mts random_mts(Rng& rng, int max_states = 6);

// A random partition plan: single-cell join, single-cell ignore, or a
// two-cell feature split with join.
std::vector<PlanCell> random_plan(Rng& rng, const ConfigSpace& space);

struct SelftestResult {
  long cases = 0;
  long failures = 0;
  long findings = 0;  // expected disagreements, recorded but not failures
  std::vector<std::string> messages;

  bool ok() const { return failures == 0; }
};

// Galois adjunctions exhaustively on small spaces plus the duality identity
// on random formulas.
SelftestResult selftest_galois(uint64_t seed, int random_cases = 1000);

// End-to-end soundness: every Holds/Fails verdict of the abstract family
// strategy must match brute force.
SelftestResult selftest_preservation(uint64_t seed, int cases = 500);

// check_mts_thm2 vs check_mts_direct; disagreements are findings.
SelftestResult selftest_differential(uint64_t seed, int cases = 500);

}  // namespace vmc
