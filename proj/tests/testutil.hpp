#pragma once

// Shared fixtures: the vending machine family built in code, file loading,
// and an enumerative CTL oracle implementing the satisfaction clauses
// directly over bounded lassos (independent of the fixpoint engine).

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "vmc/checker.hpp"
#include "vmc/ctl.hpp"
#include "vmc/dsl.hpp"
#include "vmc/models.hpp"

namespace vmctest {

using namespace vmc;

inline std::string models_dir() { return VMC_MODELS_DIR; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Fts load_vending() {
  ModelDocument doc = parse_model(read_file(models_dir() + "/vending.fts"));
  return build_fts(doc);
}

// The same family assembled without the parser.
inline Fts make_vending() {
  SystemCore core;
  for (int i = 1; i <= 8; ++i) core.states.push_back(std::to_string(i));
  core.props = {"start"};
  core.labels = {1, 0, 0, 0, 0, 0, 0, 0};
  core.initial = {0};
  core.actions = {"pay", "change", "free", "soda",      "tea",  "cancel",
                  "return", "serveSoda", "serveTea", "open", "take"};
  auto A = [&](const std::string& name) { return core.action_id(name); };

  FeatExpr v = FeatExpr::var("v"), s = FeatExpr::var("s"), t = FeatExpr::var("t"),
           c = FeatExpr::var("c"), f = FeatExpr::var("f");
  ConfigSpace space({"v", "s", "t", "c", "f"}, FeatExpr::conj(v, s));
  Fts fts{core, {}, {}, space};
  auto add = [&](int src, const std::string& act, int dst, const FeatExpr& cond) {
    fts.trans.push_back(Transition{src - 1, A(act), dst - 1});
    fts.presence.push_back(cond);
  };
  add(1, "pay", 2, v);
  add(2, "change", 3, v);
  add(1, "free", 3, f);
  add(3, "soda", 5, s);
  add(3, "tea", 6, t);
  add(3, "cancel", 4, c);
  add(4, "return", 1, c);
  add(5, "serveSoda", 7, s);
  add(6, "serveTea", 7, t);
  add(7, "open", 8, v);
  add(7, "take", 1, f);
  add(7, "take", 3, c);
  add(8, "take", 1, v);
  return fts;
}

inline Config vm_config(const ConfigSpace& space, const std::string& features) {
  std::vector<std::string> names;
  for (char ch : features) names.push_back(std::string(1, ch));
  return space.config_of(names);
}

// --- Enumerative oracle -------------------------------------------------------

// All lassos (stem + cycle) starting at `from`, where the total number of
// steps (stem plus cycle, including the closing edge) is at most `bound`.
inline void enumerate_lassos_rec(const Ts& ts, Path& cur, size_t bound,
                                 std::vector<Path>& out) {
  int last = cur.states.back();
  for (const Transition& t : ts.trans) {
    if (t.src != last) continue;
    // Closing the lasso at any earlier occurrence of t.dst.
    for (size_t i = 0; i < cur.states.size(); ++i) {
      if (cur.states[i] == t.dst) {
        Path lasso = cur;
        lasso.actions.push_back(t.action);
        lasso.cycle_start = i;
        out.push_back(std::move(lasso));
        break;
      }
    }
    if (cur.actions.size() + 1 < bound) {
      cur.states.push_back(t.dst);
      cur.actions.push_back(t.action);
      enumerate_lassos_rec(ts, cur, bound, out);
      cur.states.pop_back();
      cur.actions.pop_back();
    }
  }
}

inline std::vector<Path> enumerate_lassos(const Ts& ts, int from, size_t bound) {
  std::vector<Path> out;
  Path cur;
  cur.states.push_back(from);
  enumerate_lassos_rec(ts, cur, bound, out);
  return out;
}

// Definition-5 evaluation with path quantifiers ranging over the enumerated
// lassos. Sound and complete on systems small enough that every distinct
// behaviour shows up within the bound.
class OracleChecker {
 public:
  OracleChecker(const Ts& ts, size_t bound) : ts_(ts), bound_(bound) {}

  bool state_sat(int s, const CtlFormula& f) {
    switch (f.kind()) {
      case CtlFormula::Kind::True:
        return true;
      case CtlFormula::Kind::False:
        return false;
      case CtlFormula::Kind::Atom: {
        auto idx = ts_.core.find_prop(f.atom_name());
        return idx && ts_.core.has_label(s, *idx);
      }
      case CtlFormula::Kind::NegAtom: {
        auto idx = ts_.core.find_prop(f.atom_name());
        return !(idx && ts_.core.has_label(s, *idx));
      }
      case CtlFormula::Kind::And:
        return state_sat(s, f.lhs()) && state_sat(s, f.rhs());
      case CtlFormula::Kind::Or:
        return state_sat(s, f.lhs()) || state_sat(s, f.rhs());
      case CtlFormula::Kind::Exists: {
        for (const Path& p : lassos(s))
          if (path_sat(p, 0, f)) return true;
        return false;
      }
      case CtlFormula::Kind::Forall: {
        for (const Path& p : lassos(s))
          if (!path_sat(p, 0, f)) return false;
        return true;
      }
    }
    throw std::logic_error("unreachable");
  }

  Verdict::Kind check(const CtlFormula& f) {
    for (int s : ts_.core.initial)
      if (!state_sat(s, f)) return Verdict::Kind::Fails;
    return Verdict::Kind::Holds;
  }

 private:
  // Satisfaction of the quantified formula's path obligation on the lasso
  // suffix starting at position i.
  bool path_sat(const Path& p, size_t i, const CtlFormula& q) {
    using PathOp = CtlFormula::PathOp;
    auto at = [&](size_t j) { return p.states[j]; };
    size_t m = p.states.size();
    size_t cs = *p.cycle_start;
    auto next = [&](size_t j) { return j + 1 < m ? j + 1 : cs; };
    // Positions reachable from i (stem suffix + the whole cycle).
    std::vector<size_t> future;
    for (size_t j = i; j < m; ++j) future.push_back(j);
    for (size_t j = cs; j < i; ++j) future.push_back(j);
    switch (q.path_op()) {
      case PathOp::Next:
        return state_sat(at(next(i)), q.lhs());
      case PathOp::Eventually:
        for (size_t j : future)
          if (state_sat(at(j), q.lhs())) return true;
        return false;
      case PathOp::Globally:
        for (size_t j : future)
          if (!state_sat(at(j), q.lhs())) return false;
        return true;
      case PathOp::Until: {
        size_t j = i;
        for (size_t step = 0; step <= future.size(); ++step) {
          if (state_sat(at(j), q.rhs())) return true;
          if (!state_sat(at(j), q.lhs())) return false;
          j = next(j);
        }
        return false;
      }
      case PathOp::Release: {
        size_t j = i;
        for (size_t step = 0; step <= future.size(); ++step) {
          if (!state_sat(at(j), q.rhs())) return false;
          if (state_sat(at(j), q.lhs())) return true;
          j = next(j);
        }
        return true;
      }
    }
    throw std::logic_error("unreachable");
  }

  const std::vector<Path>& lassos(int s) {
    auto it = cache_.find(s);
    if (it == cache_.end())
      it = cache_.emplace(s, enumerate_lassos(ts_, s, bound_)).first;
    return it->second;
  }

  const Ts& ts_;
  size_t bound_;
  std::map<int, std::vector<Path>> cache_;
};

}  // namespace vmctest
