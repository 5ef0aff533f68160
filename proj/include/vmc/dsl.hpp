#pragma once

// The .fts interchange format. A document declares features, a validity
// constraint, states with init/label markers, guarded transitions, and named
// CTL properties:
//
//   format-version 1;
//   feature v, s, t;
//   configs v & s;
//   state 1 init label start;
//   state 2;
//   trans 1 -> 2 on pay when v;
//   prop P1 := AG (AF start);
//
// '#' starts a line comment. An omitted 'when' clause means true.

#include <string>
#include <vector>

#include "vmc/ctl.hpp"
#include "vmc/featexpr.hpp"
#include "vmc/galois.hpp"
#include "vmc/models.hpp"

namespace vmc {

struct DslError : Error {
  int line, col;
  DslError(const std::string& msg, int line_, int col_)
      : Error("SYNTAX_ERROR",
              msg + " (line " + std::to_string(line_) + ", column " + std::to_string(col_) + ")"),
        line(line_), col(col_) {}
};

struct ModelDocument {
  struct StateDecl {
    std::string name;
    bool init = false;
    std::vector<std::string> labels;
  };
  struct TransDecl {
    std::string src, dst, action;
    FeatExpr when = FeatExpr::t();
  };
  struct PropDecl {
    std::string name;
    CtlFormula formula;
  };

  std::vector<std::string> features;
  FeatExpr configs = FeatExpr::t();
  std::vector<StateDecl> states;
  std::vector<TransDecl> trans;
  std::vector<PropDecl> props;

  const PropDecl* find_prop(const std::string& name) const;
};

// Parse, resolve and type-check a document. Throws DslError with position
// info on syntax errors and Error on resolution problems.
ModelDocument parse_model(const std::string& text);

std::string print_model(const ModelDocument& doc);

// The document's Fts. Checks reference resolution, duplicate transitions,
// non-empty configuration space and at least one initial state.
Fts build_fts(const ModelDocument& doc);

// Projection as a syntactic transformation: conjoin e into the configs
// clause and drop transitions no remaining configuration admits. The result
// builds to the same Fts as project_subset(build_fts(doc), e).
ModelDocument apply_invar(const ModelDocument& doc, const FeatExpr& e);

enum class ComponentMode { May, Must };

// Presence-condition rewriting: each 'when' clause goes through alpha
// (ComponentMode::May) or its dual (ComponentMode::Must); transitions whose
// condition becomes unsatisfiable are deleted and the feature/configs
// declarations are replaced by the abstract space. The result builds to the
// chosen component of abstract_fts(build_fts(doc), a).
ModelDocument apply_abstraction_syntactic(const ModelDocument& doc, const Abstraction& a,
                                          ComponentMode mode);

// Property text; same grammar as parse_ctl.
CtlFormula parse_property(const std::string& text);

// Isomorphism respecting state names: same states/init/labels, same
// transition triples, equivalent presence conditions, same feature names and
// the same set of valid configurations.
bool fts_equivalent(const Fts& a, const Fts& b);

}  // namespace vmc
