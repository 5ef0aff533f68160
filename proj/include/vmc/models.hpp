#pragma once

// Transition-system representations. An Fts superimposes all variants of a
// family: transitions carry presence conditions over the configuration
// space. Projection to a config yields a plain Ts, abstraction yields an
// Mfts with may/must transition relations.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vmc/featexpr.hpp"
#include "vmc/galois.hpp"

namespace vmc {

// Reserved self-loop action used to complete deadlocking variants.
extern const std::string kStutterAction;

struct Transition {
  int src = 0;
  int action = 0;
  int dst = 0;

  bool operator==(const Transition& o) const {
    return src == o.src && action == o.action && dst == o.dst;
  }
};

// States, actions, atomic propositions and labeling shared by every system
// kind. Atomic propositions are capped at 64 per system.
struct SystemCore {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  std::vector<std::string> props;
  std::vector<uint64_t> labels;  // per state, bit i = props[i] holds
  std::vector<int> initial;      // sorted, non-empty for checkable systems

  int state_id(const std::string& name) const;
  int action_id(const std::string& name) const;
  std::optional<int> find_prop(const std::string& name) const;
  bool has_label(int state, int prop) const {
    return (labels[static_cast<size_t>(state)] >> prop) & 1u;
  }
  bool is_initial(int state) const;
};

struct Ts {
  SystemCore core;
  std::vector<Transition> trans;
};

struct Fts {
  SystemCore core;
  std::vector<Transition> trans;
  std::vector<FeatExpr> presence;  // parallel to trans, total
  ConfigSpace space;
};

struct Mts {
  SystemCore core;
  std::vector<Transition> may;
  std::vector<Transition> must;
};

struct Mfts {
  SystemCore core;
  std::vector<Transition> trans;  // the may transitions
  std::vector<FeatExpr> presence_may;
  std::vector<std::optional<FeatExpr>> presence_must;  // engaged iff also a must transition
  ConfigSpace space;                                   // abstract space
  std::vector<size_t> config_map;  // concrete valid idx -> abstract valid idx

  std::vector<Transition> must_transitions() const;
};

// A lasso (finite stem + repeated cycle) or a finite diagnostic fragment.
// actions[i] labels the step states[i] -> states[i+1]; for a lasso there is
// one more action than inner steps, labeling the closing edge
// states.back() -> states[*cycle_start].
struct Path {
  std::vector<int> states;
  std::vector<int> actions;
  std::optional<size_t> cycle_start;

  bool is_lasso() const { return cycle_start.has_value(); }
};

std::string path_to_string(const SystemCore& core, const Path& p);

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity;
  std::string code;
  std::string message;
};

bool has_errors(const std::vector<Diagnostic>& diags);

// --- Operations ------------------------------------------------------------

// pi_k: keeps exactly the transitions whose presence condition k satisfies.
// Throws INVALID_CONFIG when k is not a valid configuration of F.space.
Ts project_variant(const Fts& f, const Config& k);

// pi_K': restricts the space to the configs satisfying e and drops
// transitions admitted by none of them. Throws EMPTY_CONFIG_SPACE.
Fts project_subset(const Fts& f, const FeatExpr& e);

// Definition of the abstract Mfts: presence_may = alpha(delta), presence_must
// = alpha~(delta); transitions whose rewritten condition is unsatisfiable are
// dropped from the respective relation.
Mfts abstract_fts(const Fts& f, const Abstraction& a);

Fts may_component(const Mfts& m);
Fts must_component(const Mfts& m);

// Projection of an Mfts to one abstract configuration.
Mts project_mfts_variant(const Mfts& m, const Config& k);

std::vector<Diagnostic> validate(const Ts& t);
std::vector<Diagnostic> validate(const Fts& f, size_t variant_budget = 4096);
std::vector<Diagnostic> validate(const Mts& m);
std::vector<Diagnostic> validate(const Mfts& m, size_t config_budget = 4096);

// Adds a presence-guarded '#stutter' self-loop to every state that some
// variant can reach and then deadlock in, so that all variant projections
// become serial. Models that are deadlock-free in every variant come back
// unchanged. Emits a DEADLOCK warning per completed state.
Fts stutter_complete(const Fts& f, std::vector<Diagnostic>* diags = nullptr,
                     size_t variant_budget = 1u << 21);

// For each valid config index, the set of states reachable in that variant.
std::vector<std::vector<char>> variant_reachability(const Fts& f);

}  // namespace vmc
