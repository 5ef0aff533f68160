#include "vmc/models.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace vmc {

const std::string kStutterAction = "#stutter";

int SystemCore::state_id(const std::string& name) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return static_cast<int>(i);
  throw Error("UNKNOWN_STATE", "unknown state '" + name + "'");
}

int SystemCore::action_id(const std::string& name) const {
  for (size_t i = 0; i < actions.size(); ++i)
    if (actions[i] == name) return static_cast<int>(i);
  throw Error("UNKNOWN_ACTION", "unknown action '" + name + "'");
}

std::optional<int> SystemCore::find_prop(const std::string& name) const {
  for (size_t i = 0; i < props.size(); ++i)
    if (props[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

bool SystemCore::is_initial(int state) const {
  return std::binary_search(initial.begin(), initial.end(), state);
}

std::vector<Transition> Mfts::must_transitions() const {
  std::vector<Transition> out;
  for (size_t i = 0; i < trans.size(); ++i)
    if (presence_must[i]) out.push_back(trans[i]);
  return out;
}

std::string path_to_string(const SystemCore& core, const Path& p) {
  std::ostringstream os;
  for (size_t i = 0; i < p.states.size(); ++i) {
    if (i) os << " -" << core.actions[static_cast<size_t>(p.actions[i - 1])] << "-> ";
    if (p.cycle_start && *p.cycle_start == i) os << "( ";
    os << core.states[static_cast<size_t>(p.states[i])];
  }
  if (p.cycle_start) {
    os << " -" << core.actions[static_cast<size_t>(p.actions.back())] << "-> "
       << core.states[static_cast<size_t>(p.states[*p.cycle_start])] << " )^w";
  }
  return os.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

// --- Projection ----------------------------------------------------------------

Ts project_variant(const Fts& f, const Config& k) {
  if (!f.space.valid_index(k))
    throw Error("INVALID_CONFIG",
                "configuration " + f.space.config_to_string(k) + " is not valid");
  Ts out{f.core, {}};
  for (size_t i = 0; i < f.trans.size(); ++i)
    if (eval(f.space, k, f.presence[i])) out.trans.push_back(f.trans[i]);
  return out;
}

Fts project_subset(const Fts& f, const FeatExpr& e) {
  FeatExpr constraint = FeatExpr::conj(f.space.constraint(), e);
  ConfigSpace sub(f.space.feature_names(), constraint);
  if (sub.valid_configs().empty())
    throw Error("EMPTY_CONFIG_SPACE", "projection constraint admits no configuration");
  Fts out{f.core, {}, {}, sub};
  for (size_t i = 0; i < f.trans.size(); ++i) {
    if (satisfiable_in(f.presence[i], sub)) {
      out.trans.push_back(f.trans[i]);
      out.presence.push_back(f.presence[i]);
    }
  }
  return out;
}

// --- Abstraction ------------------------------------------------------------------

Mfts abstract_fts(const Fts& f, const Abstraction& a) {
  AbstractSpace abs = a.abstract_space(f.space);
  Mfts out{f.core, {}, {}, {}, abs.space, abs.config_map};
  for (size_t i = 0; i < f.trans.size(); ++i) {
    FeatExpr may = a.alpha_may(f.presence[i], f.space);
    if (!satisfiable(may)) continue;  // dropped from both relations
    FeatExpr must = a.alpha_must(f.presence[i], f.space);
    out.trans.push_back(f.trans[i]);
    out.presence_may.push_back(may);
    if (satisfiable(must))
      out.presence_must.push_back(must);
    else
      out.presence_must.push_back(std::nullopt);
  }
  return out;
}

Fts may_component(const Mfts& m) {
  return Fts{m.core, m.trans, m.presence_may, m.space};
}

Fts must_component(const Mfts& m) {
  Fts out{m.core, {}, {}, m.space};
  for (size_t i = 0; i < m.trans.size(); ++i) {
    if (m.presence_must[i]) {
      out.trans.push_back(m.trans[i]);
      out.presence.push_back(*m.presence_must[i]);
    }
  }
  return out;
}

Mts project_mfts_variant(const Mfts& m, const Config& k) {
  if (!m.space.valid_index(k))
    throw Error("INVALID_CONFIG",
                "configuration " + m.space.config_to_string(k) + " is not valid");
  Mts out{m.core, {}, {}};
  for (size_t i = 0; i < m.trans.size(); ++i) {
    if (eval(m.space, k, m.presence_may[i])) out.may.push_back(m.trans[i]);
    if (m.presence_must[i] && eval(m.space, k, *m.presence_must[i]))
      out.must.push_back(m.trans[i]);
  }
  return out;
}

// --- Validation -----------------------------------------------------------------

namespace {

void validate_core(const SystemCore& core, const std::vector<Transition>& trans,
                   std::vector<Diagnostic>& out) {
  if (core.initial.empty())
    out.push_back({Diagnostic::Severity::Error, "NO_INITIAL_STATE", "no initial state"});
  if (core.labels.size() != core.states.size())
    out.push_back({Diagnostic::Severity::Error, "BAD_LABELING",
                   "labeling is not total on states"});
  for (const Transition& t : trans) {
    bool ok = t.src >= 0 && static_cast<size_t>(t.src) < core.states.size() &&
              t.dst >= 0 && static_cast<size_t>(t.dst) < core.states.size() &&
              t.action >= 0 && static_cast<size_t>(t.action) < core.actions.size();
    if (!ok) {
      out.push_back({Diagnostic::Severity::Error, "BAD_TRANSITION",
                     "transition references undeclared state or action"});
      return;
    }
  }
}

std::vector<char> reachable_states(const SystemCore& core,
                                   const std::vector<Transition>& trans) {
  std::vector<std::vector<int>> succ(core.states.size());
  for (const Transition& t : trans) succ[static_cast<size_t>(t.src)].push_back(t.dst);
  std::vector<char> seen(core.states.size(), 0);
  std::deque<int> work(core.initial.begin(), core.initial.end());
  for (int s : core.initial) seen[static_cast<size_t>(s)] = 1;
  while (!work.empty()) {
    int s = work.front();
    work.pop_front();
    for (int t : succ[static_cast<size_t>(s)]) {
      if (!seen[static_cast<size_t>(t)]) {
        seen[static_cast<size_t>(t)] = 1;
        work.push_back(t);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<std::vector<char>> variant_reachability(const Fts& f) {
  std::vector<std::vector<char>> out;
  out.reserve(f.space.valid_configs().size());
  for (const Config& k : f.space.valid_configs()) {
    Ts proj = project_variant(f, k);
    out.push_back(reachable_states(proj.core, proj.trans));
  }
  return out;
}

std::vector<Diagnostic> validate(const Ts& t) {
  std::vector<Diagnostic> out;
  validate_core(t.core, t.trans, out);
  if (has_errors(out)) return out;
  auto reach = reachable_states(t.core, t.trans);
  std::vector<char> has_out(t.core.states.size(), 0);
  for (const Transition& tr : t.trans) has_out[static_cast<size_t>(tr.src)] = 1;
  for (size_t s = 0; s < t.core.states.size(); ++s)
    if (reach[s] && !has_out[s])
      out.push_back({Diagnostic::Severity::Warning, "DEADLOCK",
                     "state '" + t.core.states[s] + "' is reachable and has no outgoing transition"});
  return out;
}

std::vector<Diagnostic> validate(const Fts& f, size_t variant_budget) {
  std::vector<Diagnostic> out;
  validate_core(f.core, f.trans, out);
  if (f.presence.size() != f.trans.size())
    out.push_back({Diagnostic::Severity::Error, "BAD_PRESENCE",
                   "presence map is not total on transitions"});
  if (f.space.valid_configs().empty())
    out.push_back({Diagnostic::Severity::Error, "EMPTY_CONFIG_SPACE",
                   "no valid configuration"});
  if (has_errors(out)) return out;
  for (size_t i = 0; i < f.trans.size(); ++i) {
    if (!satisfiable_in(f.presence[i], f.space)) {
      const Transition& t = f.trans[i];
      out.push_back({Diagnostic::Severity::Warning, "DEAD_TRANSITION",
                     "transition " + f.core.states[static_cast<size_t>(t.src)] + " -" +
                         f.core.actions[static_cast<size_t>(t.action)] + "-> " +
                         f.core.states[static_cast<size_t>(t.dst)] +
                         " is enabled in no valid configuration"});
    }
  }
  if (f.space.valid_configs().size() <= variant_budget) {
    std::set<std::string> reported;
    for (const Config& k : f.space.valid_configs()) {
      Ts proj = project_variant(f, k);
      auto reach = reachable_states(proj.core, proj.trans);
      std::vector<char> has_out(proj.core.states.size(), 0);
      for (const Transition& tr : proj.trans) has_out[static_cast<size_t>(tr.src)] = 1;
      for (size_t s = 0; s < proj.core.states.size(); ++s) {
        if (reach[s] && !has_out[s] && reported.insert(proj.core.states[s]).second)
          out.push_back({Diagnostic::Severity::Warning, "DEADLOCK",
                         "state '" + proj.core.states[s] + "' deadlocks in variant " +
                             f.space.config_to_string(k)});
      }
    }
  }
  return out;
}

std::vector<Diagnostic> validate(const Mts& m) {
  std::vector<Diagnostic> out;
  validate_core(m.core, m.may, out);
  validate_core(m.core, m.must, out);
  auto key = [](const Transition& t) {
    return std::tuple<int, int, int>(t.src, t.action, t.dst);
  };
  std::set<std::tuple<int, int, int>> may_set;
  for (const Transition& t : m.may) may_set.insert(key(t));
  for (const Transition& t : m.must) {
    if (!may_set.count(key(t))) {
      out.push_back({Diagnostic::Severity::Error, "MUST_NOT_SUBSET_MAY",
                     "must transition " + m.core.states[static_cast<size_t>(t.src)] + " -" +
                         m.core.actions[static_cast<size_t>(t.action)] + "-> " +
                         m.core.states[static_cast<size_t>(t.dst)] +
                         " is not a may transition"});
    }
  }
  return out;
}

std::vector<Diagnostic> validate(const Mfts& m, size_t config_budget) {
  std::vector<Diagnostic> out;
  validate_core(m.core, m.trans, out);
  if (m.presence_may.size() != m.trans.size() || m.presence_must.size() != m.trans.size())
    out.push_back({Diagnostic::Severity::Error, "BAD_PRESENCE",
                   "presence maps are not total on transitions"});
  if (has_errors(out)) return out;
  if (m.space.valid_configs().size() > config_budget) return out;
  for (size_t i = 0; i < m.trans.size(); ++i) {
    if (!m.presence_must[i]) continue;
    if (!entails(*m.presence_must[i], m.presence_may[i], m.space)) {
      const Transition& t = m.trans[i];
      out.push_back({Diagnostic::Severity::Error, "MUST_NOT_SUBSET_MAY",
                     "must presence condition does not entail may presence condition on " +
                         m.core.states[static_cast<size_t>(t.src)] + " -" +
                         m.core.actions[static_cast<size_t>(t.action)] + "-> " +
                         m.core.states[static_cast<size_t>(t.dst)]});
    }
  }
  return out;
}

// --- Stutter completion ------------------------------------------------------------

Fts stutter_complete(const Fts& f, std::vector<Diagnostic>* diags, size_t variant_budget) {
  // Per state, the condition under which it has no outgoing transition.
  size_t n = f.core.states.size();
  std::vector<std::vector<FeatExpr>> outgoing(n);
  for (size_t i = 0; i < f.trans.size(); ++i)
    outgoing[static_cast<size_t>(f.trans[i].src)].push_back(f.presence[i]);

  std::vector<size_t> candidates;
  for (size_t s = 0; s < n; ++s) {
    FeatExpr dead = nnf(FeatExpr::neg(FeatExpr::disj_all(outgoing[s])));
    if (satisfiable_in(dead, f.space)) candidates.push_back(s);
  }
  if (candidates.empty()) return f;

  if (f.space.valid_configs().size() > variant_budget)
    throw Error("VARIANT_BUDGET",
                "stutter completion needs per-variant reachability over " +
                    std::to_string(f.space.valid_configs().size()) +
                    " configurations, which exceeds the budget");

  // Guard each stutter loop by "reachable and deadlocked here", expressed as
  // the exact disjunction of the configurations in question. Unreachable
  // deadlocks need no loop: no execution of the variant gets stuck there.
  auto reach = variant_reachability(f);
  Fts out = f;
  int stutter_action = -1;
  for (size_t a = 0; a < out.core.actions.size(); ++a)
    if (out.core.actions[a] == kStutterAction) stutter_action = static_cast<int>(a);

  for (size_t s : candidates) {
    std::vector<FeatExpr> configs;
    size_t count = 0;
    for (size_t ki = 0; ki < f.space.valid_configs().size(); ++ki) {
      const Config& k = f.space.valid_configs()[ki];
      if (!reach[ki][s]) continue;
      bool dead = true;
      for (const FeatExpr& g : outgoing[s])
        if (eval(f.space, k, g)) {
          dead = false;
          break;
        }
      if (dead) {
        configs.push_back(config_formula(f.space, k));
        ++count;
      }
    }
    if (configs.empty()) continue;
    if (stutter_action < 0) {
      stutter_action = static_cast<int>(out.core.actions.size());
      out.core.actions.push_back(kStutterAction);
    }
    out.trans.push_back(Transition{static_cast<int>(s), stutter_action, static_cast<int>(s)});
    out.presence.push_back(FeatExpr::disj_all(configs));
    if (diags)
      diags->push_back({Diagnostic::Severity::Warning, "DEADLOCK",
                        "state '" + f.core.states[s] + "' deadlocks in " +
                            std::to_string(count) +
                            " variant(s); a #stutter self-loop was added for checking"});
  }
  return out;
}

}  // namespace vmc
