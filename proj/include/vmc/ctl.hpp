#pragma once

// CTL state formulas in negation normal form. Every temporal operator sits
// directly under a path quantifier; negation appears only on atoms. Release
// is carried in the AST so that negation is closed and involutive:
// not E[f U g] = A[~f R ~g].

#include <memory>
#include <string>
#include <vector>

#include "vmc/featexpr.hpp"  // for ParseError / Error

namespace vmc {

class CtlFormula {
 public:
  enum class Kind { True, False, Atom, NegAtom, And, Or, Exists, Forall };
  enum class PathOp { Next, Until, Release, Eventually, Globally };

  CtlFormula() : CtlFormula(t()) {}

  static CtlFormula t();
  static CtlFormula f();
  static CtlFormula atom(const std::string& name);
  static CtlFormula neg_atom(const std::string& name);
  static CtlFormula conj(const CtlFormula& a, const CtlFormula& b);
  static CtlFormula disj(const CtlFormula& a, const CtlFormula& b);
  // Unary path operators (Next, Eventually, Globally).
  static CtlFormula exists(PathOp op, const CtlFormula& f);
  static CtlFormula forall(PathOp op, const CtlFormula& f);
  // Binary path operators (Until, Release).
  static CtlFormula exists(PathOp op, const CtlFormula& f, const CtlFormula& g);
  static CtlFormula forall(PathOp op, const CtlFormula& f, const CtlFormula& g);

  Kind kind() const { return node_->kind; }
  PathOp path_op() const { return node_->op; }
  const std::string& atom_name() const { return node_->name; }
  CtlFormula lhs() const { return CtlFormula(node_->l); }
  CtlFormula rhs() const { return CtlFormula(node_->r); }
  bool binary_path() const {
    return node_->op == PathOp::Until || node_->op == PathOp::Release;
  }

 private:
  struct Node;
  using Ptr = std::shared_ptr<const Node>;
  struct Node {
    Kind kind;
    PathOp op = PathOp::Next;
    std::string name;
    Ptr l, r;
  };
  explicit CtlFormula(Ptr n) : node_(std::move(n)) {}
  Ptr node_;
};

// NNF dual: swaps And/Or, A/E, Until/Release, Atom/NegAtom, Next stays, and
// Eventually/Globally swap. Involutive: negate(negate(f)) == f structurally.
CtlFormula negate_nnf(const CtlFormula& f);

bool structurally_equal(const CtlFormula& a, const CtlFormula& b);

enum class QuantClass { Propositional, UniversalOnly, ExistentialOnly, Mixed };
QuantClass quantifier_class(const CtlFormula& f);

bool quantifier_free(const CtlFormula& f);

std::vector<std::string> ctl_atoms(const CtlFormula& f);

// All quantified subformulas (Exists/Forall nodes), outermost first.
std::vector<CtlFormula> quantified_subformulas(const CtlFormula& f);

// Concrete syntax:
//   f ::= g ('->' f)?                       (antecedent must be quantifier-free)
//   g ::= h ('|' h)* ; h ::= u ('&' u)*
//   u ::= 'true' | 'false' | ident | '!' u  (operand quantifier-free)
//       | 'AX'|'EX'|'AF'|'EF'|'AG'|'EG' u
//       | ('A'|'E') '[' f ('U'|'R') f ']' | '(' f ')'
std::string print_ctl(const CtlFormula& f);
CtlFormula parse_ctl(const std::string& text);

}  // namespace vmc
