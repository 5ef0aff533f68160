#include "vmc/checker.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <deque>
#include <functional>
#include <limits>
#include <chrono>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace vmc {

Verdict Verdict::holds_with(std::optional<Path> w, std::string why) {
  return Verdict{Kind::Holds, std::move(w), std::move(why)};
}
Verdict Verdict::fails_with(std::optional<Path> c, std::string why) {
  return Verdict{Kind::Fails, std::move(c), std::move(why)};
}
Verdict Verdict::inconclusive(std::string why) {
  return Verdict{Kind::Inconclusive, std::nullopt, std::move(why)};
}

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Holds:
      return "holds";
    case Verdict::Kind::Fails:
      return "fails";
    case Verdict::Kind::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

// --- Bitset ---------------------------------------------------------------------

class Bits {
 public:
  Bits() = default;
  explicit Bits(size_t n, bool value = false)
      : n_(n), w_((n + 63) / 64, value ? ~0ull : 0ull) {
    trim();
  }
  size_t size() const { return n_; }
  bool test(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1ull; }
  void set(size_t i) { w_[i >> 6] |= 1ull << (i & 63); }
  void reset(size_t i) { w_[i >> 6] &= ~(1ull << (i & 63)); }
  Bits& operator&=(const Bits& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  Bits& operator|=(const Bits& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bits operator~() const {
    Bits out = *this;
    for (auto& w : out.w_) w = ~w;
    out.trim();
    return out;
  }
  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
  friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
  bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }
  size_t count() const {
    size_t c = 0;
    for (uint64_t w : w_) c += static_cast<size_t>(__builtin_popcountll(w));
    return c;
  }

 private:
  void trim() {
    if (n_ & 63) w_.back() &= (1ull << (n_ & 63)) - 1ull;
  }
  size_t n_ = 0;
  std::vector<uint64_t> w_;
};

// --- Graph ----------------------------------------------------------------------

struct GEdge {
  int src, dst, action;
  long orig;  // provenance: transition index in the originating Fts, or -1
};

struct Graph {
  const SystemCore* core = nullptr;
  int n = 0;
  std::vector<GEdge> edges;   // sorted by (src, dst, action)
  std::vector<int> head;      // CSR over edges, size n+1
  std::vector<GEdge> redges;  // sorted by dst
  std::vector<int> rhead;
};

Graph build_graph(const SystemCore& core, const std::vector<GEdge>& raw) {
  Graph g;
  g.core = &core;
  g.n = static_cast<int>(core.states.size());
  g.edges = raw;
  std::sort(g.edges.begin(), g.edges.end(), [](const GEdge& a, const GEdge& b) {
    return std::tie(a.src, a.dst, a.action) < std::tie(b.src, b.dst, b.action);
  });
  g.head.assign(static_cast<size_t>(g.n) + 1, 0);
  for (const GEdge& e : g.edges) ++g.head[static_cast<size_t>(e.src) + 1];
  for (size_t i = 1; i < g.head.size(); ++i) g.head[i] += g.head[i - 1];
  g.redges = g.edges;
  std::sort(g.redges.begin(), g.redges.end(), [](const GEdge& a, const GEdge& b) {
    return std::tie(a.dst, a.src, a.action) < std::tie(b.dst, b.src, b.action);
  });
  g.rhead.assign(static_cast<size_t>(g.n) + 1, 0);
  for (const GEdge& e : g.redges) ++g.rhead[static_cast<size_t>(e.dst) + 1];
  for (size_t i = 1; i < g.rhead.size(); ++i) g.rhead[i] += g.rhead[i - 1];
  return g;
}

std::vector<GEdge> edges_of(const Ts& t) {
  std::vector<GEdge> out;
  out.reserve(t.trans.size());
  for (size_t i = 0; i < t.trans.size(); ++i)
    out.push_back(GEdge{t.trans[i].src, t.trans[i].dst, t.trans[i].action,
                        static_cast<long>(i)});
  return out;
}

// Projection of an Fts to a config, keeping original transition indices.
std::vector<GEdge> edges_of_variant(const Fts& f, const Config& k) {
  std::vector<GEdge> out;
  for (size_t i = 0; i < f.trans.size(); ++i)
    if (eval(f.space, k, f.presence[i]))
      out.push_back(GEdge{f.trans[i].src, f.trans[i].dst, f.trans[i].action,
                          static_cast<long>(i)});
  return out;
}

// --- Sat engine -----------------------------------------------------------------

class SatEngine {
 public:
  explicit SatEngine(const Graph& g) : g_(g) {
    Bits all(static_cast<size_t>(g_.n), true);
    live_ = sat_eg(all);
  }

  const Graph& graph() const { return g_; }
  const Bits& live() const { return live_; }

  Bits labels(const std::string& prop) const {
    auto idx = g_.core->find_prop(prop);
    if (!idx)
      throw Error("UNKNOWN_ATOM",
                  "formula mentions atomic proposition '" + prop +
                      "' which the system does not declare");
    Bits out(static_cast<size_t>(g_.n));
    for (int s = 0; s < g_.n; ++s)
      if (g_.core->has_label(s, *idx)) out.set(static_cast<size_t>(s));
    return out;
  }

  Bits pre_exists(const Bits& x) const {
    Bits out(static_cast<size_t>(g_.n));
    for (const GEdge& e : g_.edges)
      if (x.test(static_cast<size_t>(e.dst))) out.set(static_cast<size_t>(e.src));
    return out;
  }

  Bits sat_ex(const Bits& f) const { return pre_exists(f & live_); }

  // Least fixpoint from g /\ live, expanding through f-states.
  Bits sat_eu(const Bits& f, const Bits& g) const {
    std::vector<int> rank;
    return eu_with_rank(f, g, rank);
  }

  Bits eu_with_rank(const Bits& f, const Bits& g, std::vector<int>& rank) const {
    Bits in = g & live_;
    rank.assign(static_cast<size_t>(g_.n), std::numeric_limits<int>::max());
    std::deque<int> work;
    for (int s = 0; s < g_.n; ++s)
      if (in.test(static_cast<size_t>(s))) {
        rank[static_cast<size_t>(s)] = 0;
        work.push_back(s);
      }
    while (!work.empty()) {
      int t = work.front();
      work.pop_front();
      for (int i = g_.rhead[static_cast<size_t>(t)]; i < g_.rhead[static_cast<size_t>(t) + 1]; ++i) {
        int p = g_.redges[static_cast<size_t>(i)].src;
        if (in.test(static_cast<size_t>(p)) || !f.test(static_cast<size_t>(p))) continue;
        in.set(static_cast<size_t>(p));
        rank[static_cast<size_t>(p)] = rank[static_cast<size_t>(t)] + 1;
        work.push_back(p);
      }
    }
    return in;
  }

  // Greatest fixpoint: states with an infinite run staying inside f.
  Bits sat_eg(const Bits& f) const {
    Bits in = f;
    std::vector<int> succ_in(static_cast<size_t>(g_.n), 0);
    for (const GEdge& e : g_.edges)
      if (in.test(static_cast<size_t>(e.src)) && in.test(static_cast<size_t>(e.dst)))
        ++succ_in[static_cast<size_t>(e.src)];
    std::deque<int> dead;
    for (int s = 0; s < g_.n; ++s)
      if (in.test(static_cast<size_t>(s)) && succ_in[static_cast<size_t>(s)] == 0) dead.push_back(s);
    while (!dead.empty()) {
      int s = dead.front();
      dead.pop_front();
      in.reset(static_cast<size_t>(s));
      for (int i = g_.rhead[static_cast<size_t>(s)]; i < g_.rhead[static_cast<size_t>(s) + 1]; ++i) {
        int p = g_.redges[static_cast<size_t>(i)].src;
        if (!in.test(static_cast<size_t>(p))) continue;
        if (--succ_in[static_cast<size_t>(p)] == 0) dead.push_back(p);
      }
    }
    return in;
  }

  Bits all() const { return Bits(static_cast<size_t>(g_.n), true); }

  Bits sat(const CtlFormula& f) const {
    using Kind = CtlFormula::Kind;
    using PathOp = CtlFormula::PathOp;
    switch (f.kind()) {
      case Kind::True:
        return all();
      case Kind::False:
        return Bits(static_cast<size_t>(g_.n));
      case Kind::Atom:
        return labels(f.atom_name());
      case Kind::NegAtom:
        return ~labels(f.atom_name());
      case Kind::And:
        return sat(f.lhs()) & sat(f.rhs());
      case Kind::Or:
        return sat(f.lhs()) | sat(f.rhs());
      case Kind::Exists:
        switch (f.path_op()) {
          case PathOp::Next:
            return sat_ex(sat(f.lhs()));
          case PathOp::Until:
            return sat_eu(sat(f.lhs()), sat(f.rhs()));
          case PathOp::Eventually:
            return sat_eu(all(), sat(f.lhs()));
          case PathOp::Globally:
            return sat_eg(sat(f.lhs()));
          case PathOp::Release: {
            Bits sf = sat(f.lhs());
            Bits sg = sat(f.rhs());
            return sat_eu(sg, sf & sg) | sat_eg(sg);
          }
        }
        throw std::logic_error("unreachable");
      case Kind::Forall:
        return ~sat(negate_nnf(f));
    }
    throw std::logic_error("unreachable");
  }

  // Deterministic witness for s |= E<op>(f, g): lowest-successor walks, lasso
  // closed at the first repeated state once the path obligation is met.
  Path witness(int s, CtlFormula::PathOp op, const Bits& fset, const Bits& gset) const {
    using PathOp = CtlFormula::PathOp;
    Path p;
    p.states.push_back(s);
    switch (op) {
      case PathOp::Next: {
        Bits target = fset & live_;
        step_into(p, target);
        extend_free(p);
        break;
      }
      case PathOp::Eventually:
      case PathOp::Until: {
        Bits f = op == PathOp::Eventually ? all() : fset;
        const Bits& goal = op == PathOp::Eventually ? fset : gset;
        descend_until(p, f, goal);
        extend_free(p);
        break;
      }
      case PathOp::Globally: {
        Bits zone = sat_eg(fset);
        walk_until_repeat(p, zone);
        break;
      }
      case PathOp::Release: {
        Bits both = fset & gset;
        std::vector<int> rank;
        Bits eu = eu_with_rank(gset, both, rank);
        if (eu.test(static_cast<size_t>(s))) {
          descend_until(p, gset, both);
          extend_free(p);
        } else {
          Bits zone = sat_eg(gset);
          walk_until_repeat(p, zone);
        }
        break;
      }
    }
    return p;
  }

 private:
  // Choose the first (lowest dst, then lowest action) successor inside the set.
  const GEdge* first_succ_in(int s, const Bits& set) const {
    for (int i = g_.head[static_cast<size_t>(s)]; i < g_.head[static_cast<size_t>(s) + 1]; ++i) {
      const GEdge& e = g_.edges[static_cast<size_t>(i)];
      if (set.test(static_cast<size_t>(e.dst))) return &e;
    }
    return nullptr;
  }

  void step_into(Path& p, const Bits& target) const {
    const GEdge* e = first_succ_in(p.states.back(), target);
    if (!e) throw std::logic_error("witness extraction lost the fixpoint certificate");
    p.actions.push_back(e->action);
    p.states.push_back(e->dst);
  }

  // Strictly rank-decreasing walk to a goal state.
  void descend_until(Path& p, const Bits& f, const Bits& goal) const {
    std::vector<int> rank;
    Bits in = eu_with_rank(f, goal, rank);
    int cur = p.states.back();
    if (!in.test(static_cast<size_t>(cur)))
      throw std::logic_error("witness extraction lost the fixpoint certificate");
    while (rank[static_cast<size_t>(cur)] > 0) {
      int r = rank[static_cast<size_t>(cur)];
      const GEdge* chosen = nullptr;
      for (int i = g_.head[static_cast<size_t>(cur)]; i < g_.head[static_cast<size_t>(cur) + 1]; ++i) {
        const GEdge& e = g_.edges[static_cast<size_t>(i)];
        if (in.test(static_cast<size_t>(e.dst)) && rank[static_cast<size_t>(e.dst)] < r) {
          chosen = &e;
          break;
        }
      }
      if (!chosen) throw std::logic_error("witness extraction lost the fixpoint certificate");
      p.actions.push_back(chosen->action);
      p.states.push_back(chosen->dst);
      cur = chosen->dst;
    }
  }

  // Walk inside `zone`, closing the lasso at the first repeated state.
  void walk_until_repeat(Path& p, const Bits& zone) const {
    while (true) {
      const GEdge* e = first_succ_in(p.states.back(), zone);
      if (!e) throw std::logic_error("witness extraction lost the fixpoint certificate");
      auto it = std::find(p.states.begin(), p.states.end(), e->dst);
      p.actions.push_back(e->action);
      if (it != p.states.end()) {
        p.cycle_start = static_cast<size_t>(it - p.states.begin());
        return;
      }
      p.states.push_back(e->dst);
    }
  }

  void extend_free(Path& p) const { walk_until_repeat(p, live_); }

  const Graph& g_;
  Bits live_;
};

bool all_initial_in(const SystemCore& core, const Bits& set) {
  for (int s : core.initial)
    if (!set.test(static_cast<size_t>(s))) return false;
  return true;
}

int lowest_initial_in(const SystemCore& core, const Bits& set) {
  for (int s : core.initial)
    if (set.test(static_cast<size_t>(s))) return s;
  return -1;
}

int lowest_initial_not_in(const SystemCore& core, const Bits& set) {
  for (int s : core.initial)
    if (!set.test(static_cast<size_t>(s))) return s;
  return -1;
}

// Witness for an Exists-rooted formula at state s.
Path witness_exists_root(const SatEngine& eng, int s, const CtlFormula& phi) {
  Bits f = eng.sat(phi.lhs());
  Bits g = phi.binary_path() ? eng.sat(phi.rhs()) : Bits(static_cast<size_t>(eng.graph().n));
  return eng.witness(s, phi.path_op(), f, g);
}

void check_atoms(const SystemCore& core, const CtlFormula& phi) {
  for (const std::string& a : ctl_atoms(phi))
    if (!core.find_prop(a))
      throw Error("UNKNOWN_ATOM", "formula mentions atomic proposition '" + a +
                                      "' which the system does not declare");
}

Verdict verdict_from_engine(const SatEngine& eng, const SystemCore& core,
                            const CtlFormula& phi) {
  Bits sat = eng.sat(phi);
  if (all_initial_in(core, sat)) {
    std::optional<Path> w;
    if (phi.kind() == CtlFormula::Kind::Exists) {
      int s = lowest_initial_in(core, sat);
      w = witness_exists_root(eng, s, phi);
    }
    return Verdict::holds_with(std::move(w));
  }
  std::optional<Path> cex;
  if (phi.kind() == CtlFormula::Kind::Forall) {
    int s = lowest_initial_not_in(core, sat);
    CtlFormula dual = negate_nnf(phi);
    cex = witness_exists_root(eng, s, dual);
  }
  return Verdict::fails_with(std::move(cex));
}

}  // namespace

Verdict check_ts(const Ts& t, const CtlFormula& phi) {
  check_atoms(t.core, phi);
  Graph g = build_graph(t.core, edges_of(t));
  SatEngine eng(g);
  return verdict_from_engine(eng, t.core, phi);
}

// --- MTS checking ------------------------------------------------------------------

namespace {

// Clause (3'): one labeling pass selecting the relation per quantifier.
class DualEngine {
 public:
  DualEngine(const Graph& may, const Graph& must) : may_(may), must_(must) {}

  Bits sat(const CtlFormula& f) const {
    using Kind = CtlFormula::Kind;
    switch (f.kind()) {
      case Kind::True:
        return may_.all();
      case Kind::False:
        return Bits(static_cast<size_t>(may_.graph().n));
      case Kind::Atom:
        return may_.labels(f.atom_name());
      case Kind::NegAtom:
        return ~may_.labels(f.atom_name());
      case Kind::And:
        return sat(f.lhs()) & sat(f.rhs());
      case Kind::Or:
        return sat(f.lhs()) | sat(f.rhs());
      case Kind::Exists:
        return sat_path(must_, f);
      case Kind::Forall: {
        CtlFormula dual = negate_nnf(f);
        return ~sat_path(may_, dual);
      }
    }
    throw std::logic_error("unreachable");
  }

  const SatEngine& may_engine() const { return may_; }
  const SatEngine& must_engine() const { return must_; }

 private:
  Bits sat_path(const SatEngine& eng, const CtlFormula& f) const {
    using PathOp = CtlFormula::PathOp;
    switch (f.path_op()) {
      case PathOp::Next:
        return eng.sat_ex(sat(f.lhs()));
      case PathOp::Until:
        return eng.sat_eu(sat(f.lhs()), sat(f.rhs()));
      case PathOp::Eventually:
        return eng.sat_eu(eng.all(), sat(f.lhs()));
      case PathOp::Globally:
        return eng.sat_eg(sat(f.lhs()));
      case PathOp::Release: {
        Bits sf = sat(f.lhs());
        Bits sg = sat(f.rhs());
        return eng.sat_eu(sg, sf & sg) | eng.sat_eg(sg);
      }
    }
    throw std::logic_error("unreachable");
  }

  SatEngine may_;
  SatEngine must_;
};

}  // namespace

Verdict check_mts_direct(const Mts& m, const CtlFormula& phi) {
  check_atoms(m.core, phi);
  Graph may = build_graph(m.core, [&] {
    std::vector<GEdge> es;
    for (size_t i = 0; i < m.may.size(); ++i)
      es.push_back(GEdge{m.may[i].src, m.may[i].dst, m.may[i].action, static_cast<long>(i)});
    return es;
  }());
  Graph must = build_graph(m.core, [&] {
    std::vector<GEdge> es;
    for (size_t i = 0; i < m.must.size(); ++i)
      es.push_back(GEdge{m.must[i].src, m.must[i].dst, m.must[i].action, static_cast<long>(i)});
    return es;
  }());
  DualEngine eng(may, must);
  Bits sat = eng.sat(phi);
  if (all_initial_in(m.core, sat)) {
    std::optional<Path> w;
    if (phi.kind() == CtlFormula::Kind::Exists) {
      int s = lowest_initial_in(m.core, sat);
      Bits f = eng.sat(phi.lhs());
      Bits g = phi.binary_path() ? eng.sat(phi.rhs()) : Bits(static_cast<size_t>(must.n));
      w = eng.must_engine().witness(s, phi.path_op(), f, g);
    }
    return Verdict::holds_with(std::move(w));
  }
  std::optional<Path> cex;
  if (phi.kind() == CtlFormula::Kind::Forall) {
    int s = lowest_initial_not_in(m.core, sat);
    CtlFormula dual = negate_nnf(phi);
    Bits f = eng.sat(dual.lhs());
    Bits g = dual.binary_path() ? eng.sat(dual.rhs()) : Bits(static_cast<size_t>(may.n));
    cex = eng.may_engine().witness(s, dual.path_op(), f, g);
  }
  return Verdict::fails_with(std::move(cex));
}

Verdict check_mts_thm2(const Mts& m, const CtlFormula& phi, Thm2Outcome* outcome) {
  Verdict may = check_ts(Ts{m.core, m.may}, phi);
  Verdict must = check_ts(Ts{m.core, m.must}, phi);
  if (outcome) *outcome = Thm2Outcome{may, must};
  if (may.holds() && must.holds())
    return Verdict::holds_with(must.evidence ? must.evidence : may.evidence,
                               "both components hold");
  std::string which = !may.holds() ? "may" : "must";
  const Verdict& failing = !may.holds() ? may : must;
  return Verdict::fails_with(failing.evidence, which + " component fails");
}

// --- Attribution and replay ----------------------------------------------------------

namespace {

// Every step of the path, including the closing edge of a lasso.
std::vector<Transition> path_steps(const Path& p) {
  std::vector<Transition> steps;
  for (size_t i = 0; i + 1 < p.states.size(); ++i)
    steps.push_back(Transition{p.states[i], p.actions[i], p.states[i + 1]});
  if (p.is_lasso()) {
    if (p.actions.size() != p.states.size())
      throw Error("BAD_PATH", "lasso is missing the closing action");
    steps.push_back(
        Transition{p.states.back(), p.actions.back(), p.states[*p.cycle_start]});
  }
  return steps;
}

}  // namespace

FeatExpr attribute_counterexample(const Fts& f, const Path& p) {
  std::vector<FeatExpr> conds;
  std::set<size_t> seen;
  std::set<int> stutter_seen;
  for (const Transition& step : path_steps(p)) {
    bool found = false;
    for (size_t i = 0; i < f.trans.size(); ++i) {
      if (f.trans[i] == step) {
        if (seen.insert(i).second) conds.push_back(f.presence[i]);
        found = true;
        break;
      }
    }
    if (found) continue;
    // A stutter loop that is not part of the model is executable exactly by
    // the variants in which the state deadlocks.
    bool is_stutter = step.src == step.dst &&
                      static_cast<size_t>(step.action) < f.core.actions.size() &&
                      f.core.actions[static_cast<size_t>(step.action)] == kStutterAction;
    if (!is_stutter)
      throw Error("PATH_NOT_IN_MODEL",
                  "path uses a transition absent from the model: " +
                      f.core.states[static_cast<size_t>(step.src)] + " -> " +
                      f.core.states[static_cast<size_t>(step.dst)]);
    if (stutter_seen.insert(step.src).second) {
      std::vector<FeatExpr> out;
      for (size_t i = 0; i < f.trans.size(); ++i)
        if (f.trans[i].src == step.src) out.push_back(f.presence[i]);
      conds.push_back(nnf(FeatExpr::neg(FeatExpr::disj_all(out))));
    }
  }
  return FeatExpr::conj_all(conds);
}

bool path_executable(const SystemCore& core, const std::vector<Transition>& trans,
                     const Path& p, bool require_initial) {
  if (p.states.empty()) return false;
  if (require_initial && !core.is_initial(p.states[0])) return false;
  for (const Transition& step : path_steps(p)) {
    if (std::find(trans.begin(), trans.end(), step) == trans.end()) return false;
  }
  return true;
}

bool path_executable(const Fts& f, const Config& k, const Path& p, bool require_initial) {
  Ts proj = project_variant(f, k);
  return path_executable(proj.core, proj.trans, p, require_initial);
}

// --- Lasso word evaluation -----------------------------------------------------------

namespace {

bool eval_state_on(const SystemCore& core, int state, const CtlFormula& f, bool optimistic) {
  switch (f.kind()) {
    case CtlFormula::Kind::True:
      return true;
    case CtlFormula::Kind::False:
      return false;
    case CtlFormula::Kind::Atom: {
      auto idx = core.find_prop(f.atom_name());
      return idx && core.has_label(state, *idx);
    }
    case CtlFormula::Kind::NegAtom: {
      auto idx = core.find_prop(f.atom_name());
      return !(idx && core.has_label(state, *idx));
    }
    case CtlFormula::Kind::And:
      return eval_state_on(core, state, f.lhs(), optimistic) &&
             eval_state_on(core, state, f.rhs(), optimistic);
    case CtlFormula::Kind::Or:
      return eval_state_on(core, state, f.lhs(), optimistic) ||
             eval_state_on(core, state, f.rhs(), optimistic);
    case CtlFormula::Kind::Exists:
    case CtlFormula::Kind::Forall:
      return optimistic;  // unresolved on the word alone
  }
  throw std::logic_error("unreachable");
}

// Satisfaction of a single-operator path formula on the lasso's label word.
bool eval_path_on_lasso(const SystemCore& core, const Path& p, CtlFormula::PathOp op,
                        const CtlFormula& f, const CtlFormula& g, bool optimistic) {
  using PathOp = CtlFormula::PathOp;
  size_t m = p.states.size();
  size_t cs = *p.cycle_start;
  auto fst = [&](size_t i) { return eval_state_on(core, p.states[i], f, optimistic); };
  auto gst = [&](size_t i) { return eval_state_on(core, p.states[i], g, optimistic); };
  switch (op) {
    case PathOp::Next: {
      size_t next = m == 1 ? cs : 1;
      return fst(next);
    }
    case PathOp::Eventually: {
      for (size_t i = 0; i < m; ++i)
        if (fst(i)) return true;
      return false;
    }
    case PathOp::Globally: {
      for (size_t i = 0; i < m; ++i)
        if (!fst(i)) return false;
      return true;
    }
    case PathOp::Until: {
      for (size_t i = 0; i < m; ++i) {
        if (gst(i)) return true;
        if (!fst(i)) return false;
      }
      return false;  // g never holds along the lasso
    }
    case PathOp::Release: {
      for (size_t i = 0; i < m; ++i) {
        if (!gst(i)) return false;
        if (fst(i)) return true;
      }
      return true;  // g holds forever
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

bool lasso_refutes(const SystemCore& core, const Path& lasso, const CtlFormula& phi) {
  if (!lasso.is_lasso()) return false;
  if (phi.kind() != CtlFormula::Kind::Forall) return false;
  CtlFormula dual = negate_nnf(phi);
  CtlFormula g = dual.binary_path() ? dual.rhs() : CtlFormula::t();
  return eval_path_on_lasso(core, lasso, dual.path_op(), dual.lhs(), g,
                            /*optimistic=*/false);
}

// --- Brute force --------------------------------------------------------------------

namespace {

void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= count) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace

size_t FamilyReport::count(Verdict::Kind k) const {
  size_t c = 0;
  for (const auto& v : variants)
    if (v.verdict.kind == k) ++c;
  return c;
}

const Verdict& FamilyReport::verdict_for(const Config& k) const {
  for (const auto& v : variants)
    if (v.config == k) return v.verdict;
  throw Error("INVALID_CONFIG", "no verdict for that configuration");
}

FamilyReport check_fts_brute_force(const Fts& f, const CtlFormula& phi,
                                   const BruteOptions& opts) {
  const size_t n = f.space.valid_configs().size();
  if (n > opts.max_variants)
    throw Error("VARIANT_BUDGET",
                "brute-force checking refused: " + std::to_string(n) +
                    " variants exceed the budget of " + std::to_string(opts.max_variants));
  check_atoms(f.core, phi);
  Fts completed = stutter_complete(f);
  FamilyReport report;
  report.strategy = "brute";
  report.variants.resize(n);
  auto started = std::chrono::steady_clock::now();
  parallel_for(n, opts.jobs, [&](size_t i) {
    const Config& k = completed.space.valid_configs()[i];
    Graph g = build_graph(completed.core, edges_of_variant(completed, k));
    SatEngine eng(g);
    report.variants[i] = VariantVerdict{k, verdict_from_engine(eng, completed.core, phi)};
  });
  report.check_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

// --- Abstract family checking ---------------------------------------------------------

namespace {

// Per-variant reachability in the cell, computed lazily per fiber member.
struct VariantGraphs {
  std::vector<std::optional<Graph>> graphs;
  std::vector<std::optional<SatEngine>> engines;
  std::vector<std::optional<Bits>> reach;

  const SatEngine& engine(const Fts& cell, size_t ki) {
    if (!engines[ki]) {
      graphs[ki] = build_graph(cell.core, edges_of_variant(cell, cell.space.valid_configs()[ki]));
      engines[ki].emplace(*graphs[ki]);
    }
    return *engines[ki];
  }

  const Bits& reachable(const Fts& cell, size_t ki) {
    if (!reach[ki]) {
      const Graph& g = *graphs[ki];
      Bits seen(static_cast<size_t>(g.n));
      std::deque<int> work;
      for (int s : cell.core.initial) {
        seen.set(static_cast<size_t>(s));
        work.push_back(s);
      }
      while (!work.empty()) {
        int s = work.front();
        work.pop_front();
        for (int i = g.head[static_cast<size_t>(s)]; i < g.head[static_cast<size_t>(s) + 1]; ++i) {
          int t = g.edges[static_cast<size_t>(i)].dst;
          if (!seen.test(static_cast<size_t>(t))) {
            seen.set(static_cast<size_t>(t));
            work.push_back(t);
          }
        }
      }
      reach[ki] = std::move(seen);
    }
    return *reach[ki];
  }
};

// The mixed-quantifier certificate: every existential subformula must be
// quantifier-free inside, and every state the variant can reach that the
// may-component labels with the subformula must satisfy it in the variant
// itself. Together with the may-component check of the full formula this
// transfers Holds to the variant.
bool mixed_certificate(const Fts& cell, const std::vector<size_t>& fiber,
                       const SatEngine& may_engine, const CtlFormula& phi,
                       VariantGraphs& vg) {
  std::vector<CtlFormula> esubs;
  for (const CtlFormula& q : quantified_subformulas(phi)) {
    if (q.kind() != CtlFormula::Kind::Exists) continue;
    if (!quantifier_free(q.lhs())) return false;
    if (q.binary_path() && !quantifier_free(q.rhs())) return false;
    esubs.push_back(q);
  }
  for (const CtlFormula& q : esubs) {
    Bits may_sat = may_engine.sat(q);
    for (size_t ki : fiber) {
      const SatEngine& eng = vg.engine(cell, ki);
      const Bits& reach = vg.reachable(cell, ki);
      Bits variant_sat = eng.sat(q);
      for (int s = 0; s < may_engine.graph().n; ++s) {
        size_t us = static_cast<size_t>(s);
        if (may_sat.test(us) && reach.test(us) && !variant_sat.test(us)) return false;
      }
    }
  }
  return true;
}

std::string cell_note(size_t cell_idx, const PlanCell& cell, const std::string& what) {
  return "cell " + std::to_string(cell_idx) + " (" + print_feat_expr(cell.subset) + ", " +
         cell.abstraction.to_string() + "): " + what;
}

}  // namespace

FamilyReport check_family_abstract(const Fts& f, const CtlFormula& phi,
                                   const std::vector<PlanCell>& plan,
                                   const FamilyOptions& opts) {
  check_atoms(f.core, phi);
  const auto& all_configs = f.space.valid_configs();
  if (plan.empty()) throw Error("NON_PARTITION", "empty verification plan");

  // The plan must partition the valid configurations.
  std::vector<int> owner(all_configs.size(), -1);
  for (size_t ci = 0; ci < plan.size(); ++ci) {
    auto cfgs = satisfying_configs(plan[ci].subset, f.space);
    if (cfgs.empty())
      throw Error("EMPTY_CELL", "plan cell '" + print_feat_expr(plan[ci].subset) +
                                    "' contains no valid configuration");
    for (const Config& k : cfgs) {
      size_t idx = *f.space.valid_index(k);
      if (owner[idx] != -1)
        throw Error("NON_PARTITION",
                    "plan cells overlap on configuration " + f.space.config_to_string(k));
      owner[idx] = static_cast<int>(ci);
    }
  }
  for (size_t i = 0; i < owner.size(); ++i)
    if (owner[i] == -1)
      throw Error("NON_PARTITION", "plan does not cover configuration " +
                                       f.space.config_to_string(all_configs[i]));

  Fts completed = stutter_complete(f);

  FamilyReport report;
  report.strategy = "partition";
  report.variants.resize(all_configs.size());
  for (size_t i = 0; i < all_configs.size(); ++i)
    report.variants[i] =
        VariantVerdict{all_configs[i], Verdict::inconclusive("not analyzed")};

  QuantClass qc = quantifier_class(phi);

  auto mark = [&](const Config& k, Verdict v, const char* rule) {
    size_t idx = *f.space.valid_index(k);
    Verdict& slot = report.variants[idx].verdict;
    if (slot.kind == Verdict::Kind::Inconclusive) {
      slot = std::move(v);
      return;
    }
    if (slot.kind != v.kind)
      throw std::logic_error(std::string("family checking derived contradictory verdicts "
                                         "for one variant (rule: ") +
                             rule + "); this indicates a soundness bug");
  };

  for (size_t ci = 0; ci < plan.size(); ++ci) {
    auto abs_started = std::chrono::steady_clock::now();
    Fts cell = project_subset(completed, plan[ci].subset);
    Mfts m = abstract_fts(cell, plan[ci].abstraction);
    report.abstract_ms +=
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - abs_started)
            .count();
    auto check_started = std::chrono::steady_clock::now();
    if (m.space.valid_configs().size() <= 4096) {
      auto diags = validate(m);
      if (has_errors(diags))
        throw std::logic_error("abstract_fts produced an invalid Mfts: " + diags[0].message);
    }

    // Fibers: abstract config index -> indices of the cell's concrete configs.
    std::vector<std::vector<size_t>> fibers(m.space.valid_configs().size());
    for (size_t ki = 0; ki < m.config_map.size(); ++ki)
      fibers[m.config_map[ki]].push_back(ki);

    Fts mayF = may_component(m);
    Fts mustF = must_component(m);

    VariantGraphs vg;
    vg.graphs.resize(cell.space.valid_configs().size());
    vg.engines.resize(cell.space.valid_configs().size());
    vg.reach.resize(cell.space.valid_configs().size());

    for (size_t ai = 0; ai < m.space.valid_configs().size(); ++ai) {
      const Config& abstract_k = m.space.valid_configs()[ai];
      Graph may_g = build_graph(cell.core, edges_of_variant(mayF, abstract_k));
      Graph must_g = build_graph(cell.core, edges_of_variant(mustF, abstract_k));
      SatEngine may_eng(may_g);
      SatEngine must_eng(must_g);
      Verdict v_may = verdict_from_engine(may_eng, cell.core, phi);
      Verdict v_must = verdict_from_engine(must_eng, cell.core, phi);

      auto fiber_configs = [&]() {
        std::vector<Config> out;
        for (size_t ki : fibers[ai]) out.push_back(cell.space.valid_configs()[ki]);
        return out;
      }();

      // Holds rules.
      bool marked_holds = false;
      if (qc == QuantClass::Propositional) {
        for (const Config& k : fiber_configs)
          mark(k, v_may.holds() ? Verdict::holds_with(std::nullopt, "propositional")
                                : Verdict::fails_with(std::nullopt, "propositional"),
               "propositional");
        continue;
      }
      if (qc == QuantClass::UniversalOnly && v_may.holds()) {
        for (const Config& k : fiber_configs)
          mark(k, Verdict::holds_with(std::nullopt, "may component satisfies universal property"),
               "forall-may");
        marked_holds = true;
      } else if (qc == QuantClass::ExistentialOnly && v_must.holds()) {
        for (const Config& k : fiber_configs)
          mark(k, Verdict::holds_with(v_must.evidence,
                                      "must component satisfies existential property"),
               "exists-must");
        if (v_must.evidence)
          report.evidence.push_back(EvidenceEntry{
              *v_must.evidence, attribute_counterexample(cell, *v_must.evidence),
              cell_note(ci, plan[ci], "witness on the must component")});
        marked_holds = true;
      } else if (qc == QuantClass::Mixed && v_may.holds() && v_must.holds()) {
        bool certified = fibers[ai].size() <= opts.certificate_budget &&
                         mixed_certificate(cell, fibers[ai], may_eng, phi, vg);
        if (certified) {
          for (const Config& k : fiber_configs)
            mark(k, Verdict::holds_with(std::nullopt,
                                        "both components hold and the existential "
                                        "subformulas were certified per variant"),
                 "mixed-certified");
          marked_holds = true;
        } else {
          for (const Config& k : fiber_configs)
            mark(k,
                 Verdict::inconclusive("both components hold but the mixed-quantifier "
                                       "verdict could not be certified"),
                 "mixed-uncertified");
          marked_holds = true;  // occupied with an explicit inconclusive
        }
      }
      if (marked_holds) continue;

      // Fails rules.
      // 1. A counterexample lasso that refutes the formula on its own label
      //    word is genuine for every variant able to execute it.
      bool attributed = false;
      for (const Verdict* v : {&v_may, &v_must}) {
        if (!v->fails() || !v->evidence || attributed) continue;
        if (!lasso_refutes(cell.core, *v->evidence, phi)) continue;
        FeatExpr cond = attribute_counterexample(cell, *v->evidence);
        auto guilty = satisfying_configs(cond, cell.space);
        if (guilty.empty()) continue;
        for (const Config& k : guilty)
          mark(k, Verdict::fails_with(*v->evidence, "executes the abstract counterexample"),
               "certified-counterexample");
        report.evidence.push_back(EvidenceEntry{
            *v->evidence, cond,
            cell_note(ci, plan[ci],
                      v == &v_may ? "counterexample on the may component"
                                  : "counterexample on the must component")});
        attributed = true;
      }
      // 2. Monotone component rules that need no path evidence.
      if (qc == QuantClass::UniversalOnly && v_must.fails()) {
        for (const Config& k : fiber_configs)
          mark(k,
               Verdict::fails_with(v_must.evidence,
                                   "must component violates the universal property"),
               "forall-must-fails");
        continue;
      }
      if (qc == QuantClass::ExistentialOnly && v_may.fails()) {
        for (const Config& k : fiber_configs)
          mark(k, Verdict::fails_with(std::nullopt,
                                      "may component refutes the existential property"),
               "exists-may-fails");
        continue;
      }
      // Leftovers in this fiber stay inconclusive.
      for (const Config& k : fiber_configs) {
        size_t idx = *f.space.valid_index(k);
        if (report.variants[idx].verdict.kind == Verdict::Kind::Inconclusive &&
            report.variants[idx].verdict.reason == "not analyzed")
          report.variants[idx].verdict = Verdict::inconclusive(
              attributed ? "possibly spurious counterexample" : "abstraction inconclusive");
      }
    }
    report.check_ms +=
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  check_started)
            .count();
  }

  if (opts.refine_brute) {
    parallel_for(report.variants.size(), opts.jobs, [&](size_t i) {
      if (report.variants[i].verdict.kind != Verdict::Kind::Inconclusive) return;
      const Config& k = report.variants[i].config;
      Graph g = build_graph(completed.core, edges_of_variant(completed, k));
      SatEngine eng(g);
      Verdict v = verdict_from_engine(eng, completed.core, phi);
      v.reason = "resolved by per-variant refinement";
      report.variants[i].verdict = std::move(v);
    });
  }

  return report;
}

}  // namespace vmc
