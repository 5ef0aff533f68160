#pragma once

// CTL model checking over explicit-state systems.
//
// check_ts labels states bottom-up: E-until by least fixpoint, E-globally by
// greatest fixpoint, A-quantified formulas as complements of the dual
// E-formulas. Path quantifiers range over infinite executions; states without
// any infinite continuation satisfy every A-formula and no E-formula, which
// matters for must-components where transitions have been dropped.
//
// Family-level verification marks a variant Holds/Fails only when one of the
// preservation arguments applies; everything else stays Inconclusive. See
// check_family_abstract below for the exact rules.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vmc/ctl.hpp"
#include "vmc/galois.hpp"
#include "vmc/models.hpp"

namespace vmc {

struct Verdict {
  enum class Kind { Holds, Fails, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::optional<Path> evidence;  // witness for Holds, counterexample for Fails
  std::string reason;

  bool holds() const { return kind == Kind::Holds; }
  bool fails() const { return kind == Kind::Fails; }
  static Verdict holds_with(std::optional<Path> w = std::nullopt, std::string why = "");
  static Verdict fails_with(std::optional<Path> c = std::nullopt, std::string why = "");
  static Verdict inconclusive(std::string why);
};

std::string to_string(Verdict::Kind k);

// Definition-5 satisfaction at the initial states; evidence is produced for
// an outermost E (witness) or an outermost A (counterexample via the dual).
// Throws UNKNOWN_ATOM if the formula mentions a proposition the system lacks.
Verdict check_ts(const Ts& t, const CtlFormula& phi);

// Clause-(3') semantics: A quantifies over may-executions, E over
// must-executions, selected per quantifier in one labeling pass.
Verdict check_mts_direct(const Mts& m, const CtlFormula& phi);

// The two-component reduction: check phi on the may-graph and the must-graph
// as plain transition systems; Holds iff both hold, Fails iff either fails.
struct Thm2Outcome {
  Verdict may_verdict;
  Verdict must_verdict;
};
Verdict check_mts_thm2(const Mts& m, const CtlFormula& phi, Thm2Outcome* outcome = nullptr);

// Conjunction of the presence conditions of the transitions along the path,
// each transition counted once. A '#stutter' self-loop that is not a
// transition of f is attributed its deadlock condition. The satisfying
// configs of the result are exactly the variants able to execute the path.
FeatExpr attribute_counterexample(const Fts& f, const Path& p);

// Structural replay: every step (including a lasso's closing edge) is a
// transition of the system and, when require_initial, the path starts in an
// initial state.
bool path_executable(const SystemCore& core, const std::vector<Transition>& trans,
                     const Path& p, bool require_initial = true);
bool path_executable(const Fts& f, const Config& k, const Path& p,
                     bool require_initial = true);

// True when the lasso by itself refutes the universally rooted formula:
// the dual path formula evaluates to true on the lasso's label word with
// every nested quantified state subformula resolved pessimistically. Such a
// counterexample is genuine for every variant that can execute the lasso.
bool lasso_refutes(const SystemCore& core, const Path& lasso, const CtlFormula& phi);

// --- Family checking --------------------------------------------------------

struct VariantVerdict {
  Config config;
  Verdict verdict;
};

struct EvidenceEntry {
  Path path;
  FeatExpr condition;  // attributed feature expression
  std::string note;
};

struct FamilyReport {
  std::string strategy;
  std::vector<VariantVerdict> variants;  // ordered by config mask
  std::vector<EvidenceEntry> evidence;
  double abstract_ms = 0;  // projection + abstraction work
  double check_ms = 0;

  size_t count(Verdict::Kind k) const;
  bool all_hold() const { return count(Verdict::Kind::Holds) == variants.size(); }
  const Verdict& verdict_for(const Config& k) const;
};

struct BruteOptions {
  size_t max_variants = 4096;
  int jobs = 1;
};

// The baseline: check_ts on every variant projection (after stutter
// completion). Throws VARIANT_BUDGET when |K| exceeds max_variants.
FamilyReport check_fts_brute_force(const Fts& f, const CtlFormula& phi,
                                   const BruteOptions& opts = {});

struct PlanCell {
  FeatExpr subset;
  Abstraction abstraction;
};

struct FamilyOptions {
  bool refine_brute = false;
  int jobs = 1;
  // Fiber size up to which the mixed-quantifier witness certificate is
  // attempted; beyond it mixed verdicts stay Inconclusive.
  size_t certificate_budget = 256;
};

// Partition-based abstract checking. For each cell the projected Fts is
// abstracted and every abstract configuration is decided through the
// component checks. Verdicts are assigned per variant:
//   Holds: universal formulas when the may-component holds; existential
//     formulas when the must-component holds; mixed formulas when both
//     components hold and the per-variant witness certificate validates
//     every existential subformula at the states the variant can reach.
//   Fails: a counterexample lasso that refutes the formula on its own label
//     word, for the variants able to execute it; universal formulas when the
//     must-component fails (every variant of the fiber has those runs);
//     existential formulas when the may-component fails (variants have no
//     more runs than the may-component).
// Everything else is Inconclusive; refine_brute resolves leftovers per
// variant. Throws NON_PARTITION / EMPTY_CELL on bad plans.
FamilyReport check_family_abstract(const Fts& f, const CtlFormula& phi,
                                   const std::vector<PlanCell>& plan,
                                   const FamilyOptions& opts = {});

}  // namespace vmc
