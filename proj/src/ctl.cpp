#include "vmc/ctl.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace vmc {

CtlFormula CtlFormula::t() {
  static const Ptr n = std::make_shared<Node>(Node{Kind::True, PathOp::Next, "", nullptr, nullptr});
  return CtlFormula(n);
}

CtlFormula CtlFormula::f() {
  static const Ptr n = std::make_shared<Node>(Node{Kind::False, PathOp::Next, "", nullptr, nullptr});
  return CtlFormula(n);
}

CtlFormula CtlFormula::atom(const std::string& name) {
  return CtlFormula(std::make_shared<Node>(Node{Kind::Atom, PathOp::Next, name, nullptr, nullptr}));
}

CtlFormula CtlFormula::neg_atom(const std::string& name) {
  return CtlFormula(std::make_shared<Node>(Node{Kind::NegAtom, PathOp::Next, name, nullptr, nullptr}));
}

CtlFormula CtlFormula::conj(const CtlFormula& a, const CtlFormula& b) {
  return CtlFormula(std::make_shared<Node>(Node{Kind::And, PathOp::Next, "", a.node_, b.node_}));
}

CtlFormula CtlFormula::disj(const CtlFormula& a, const CtlFormula& b) {
  return CtlFormula(std::make_shared<Node>(Node{Kind::Or, PathOp::Next, "", a.node_, b.node_}));
}

namespace {

bool unary_op(CtlFormula::PathOp op) {
  return op == CtlFormula::PathOp::Next || op == CtlFormula::PathOp::Eventually ||
         op == CtlFormula::PathOp::Globally;
}

}  // namespace

CtlFormula CtlFormula::exists(PathOp op, const CtlFormula& f) {
  if (!unary_op(op)) throw std::logic_error("binary path operator needs two operands");
  return CtlFormula(std::make_shared<Node>(Node{Kind::Exists, op, "", f.node_, nullptr}));
}

CtlFormula CtlFormula::forall(PathOp op, const CtlFormula& f) {
  if (!unary_op(op)) throw std::logic_error("binary path operator needs two operands");
  return CtlFormula(std::make_shared<Node>(Node{Kind::Forall, op, "", f.node_, nullptr}));
}

CtlFormula CtlFormula::exists(PathOp op, const CtlFormula& f, const CtlFormula& g) {
  if (unary_op(op)) throw std::logic_error("unary path operator takes one operand");
  return CtlFormula(std::make_shared<Node>(Node{Kind::Exists, op, "", f.node_, g.node_}));
}

CtlFormula CtlFormula::forall(PathOp op, const CtlFormula& f, const CtlFormula& g) {
  if (unary_op(op)) throw std::logic_error("unary path operator takes one operand");
  return CtlFormula(std::make_shared<Node>(Node{Kind::Forall, op, "", f.node_, g.node_}));
}

CtlFormula negate_nnf(const CtlFormula& f) {
  using Kind = CtlFormula::Kind;
  using PathOp = CtlFormula::PathOp;
  switch (f.kind()) {
    case Kind::True:
      return CtlFormula::f();
    case Kind::False:
      return CtlFormula::t();
    case Kind::Atom:
      return CtlFormula::neg_atom(f.atom_name());
    case Kind::NegAtom:
      return CtlFormula::atom(f.atom_name());
    case Kind::And:
      return CtlFormula::disj(negate_nnf(f.lhs()), negate_nnf(f.rhs()));
    case Kind::Or:
      return CtlFormula::conj(negate_nnf(f.lhs()), negate_nnf(f.rhs()));
    case Kind::Exists:
    case Kind::Forall: {
      bool to_forall = f.kind() == Kind::Exists;
      switch (f.path_op()) {
        case PathOp::Next:
          return to_forall ? CtlFormula::forall(PathOp::Next, negate_nnf(f.lhs()))
                           : CtlFormula::exists(PathOp::Next, negate_nnf(f.lhs()));
        case PathOp::Eventually:
          return to_forall ? CtlFormula::forall(PathOp::Globally, negate_nnf(f.lhs()))
                           : CtlFormula::exists(PathOp::Globally, negate_nnf(f.lhs()));
        case PathOp::Globally:
          return to_forall ? CtlFormula::forall(PathOp::Eventually, negate_nnf(f.lhs()))
                           : CtlFormula::exists(PathOp::Eventually, negate_nnf(f.lhs()));
        case PathOp::Until:
          return to_forall
                     ? CtlFormula::forall(PathOp::Release, negate_nnf(f.lhs()), negate_nnf(f.rhs()))
                     : CtlFormula::exists(PathOp::Release, negate_nnf(f.lhs()), negate_nnf(f.rhs()));
        case PathOp::Release:
          return to_forall
                     ? CtlFormula::forall(PathOp::Until, negate_nnf(f.lhs()), negate_nnf(f.rhs()))
                     : CtlFormula::exists(PathOp::Until, negate_nnf(f.lhs()), negate_nnf(f.rhs()));
      }
      throw std::logic_error("unreachable");
    }
  }
  throw std::logic_error("unreachable");
}

bool structurally_equal(const CtlFormula& a, const CtlFormula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case CtlFormula::Kind::True:
    case CtlFormula::Kind::False:
      return true;
    case CtlFormula::Kind::Atom:
    case CtlFormula::Kind::NegAtom:
      return a.atom_name() == b.atom_name();
    case CtlFormula::Kind::And:
    case CtlFormula::Kind::Or:
      return structurally_equal(a.lhs(), b.lhs()) && structurally_equal(a.rhs(), b.rhs());
    case CtlFormula::Kind::Exists:
    case CtlFormula::Kind::Forall:
      if (a.path_op() != b.path_op()) return false;
      if (!structurally_equal(a.lhs(), b.lhs())) return false;
      return !a.binary_path() || structurally_equal(a.rhs(), b.rhs());
  }
  return false;
}

namespace {

void classify_rec(const CtlFormula& f, bool& has_a, bool& has_e) {
  switch (f.kind()) {
    case CtlFormula::Kind::And:
    case CtlFormula::Kind::Or:
      classify_rec(f.lhs(), has_a, has_e);
      classify_rec(f.rhs(), has_a, has_e);
      return;
    case CtlFormula::Kind::Exists:
    case CtlFormula::Kind::Forall:
      (f.kind() == CtlFormula::Kind::Forall ? has_a : has_e) = true;
      classify_rec(f.lhs(), has_a, has_e);
      if (f.binary_path()) classify_rec(f.rhs(), has_a, has_e);
      return;
    default:
      return;
  }
}

}  // namespace

QuantClass quantifier_class(const CtlFormula& f) {
  bool has_a = false, has_e = false;
  classify_rec(f, has_a, has_e);
  if (has_a && has_e) return QuantClass::Mixed;
  if (has_a) return QuantClass::UniversalOnly;
  if (has_e) return QuantClass::ExistentialOnly;
  return QuantClass::Propositional;
}

bool quantifier_free(const CtlFormula& f) {
  return quantifier_class(f) == QuantClass::Propositional;
}

namespace {

void atoms_rec(const CtlFormula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case CtlFormula::Kind::Atom:
    case CtlFormula::Kind::NegAtom:
      out.insert(f.atom_name());
      return;
    case CtlFormula::Kind::And:
    case CtlFormula::Kind::Or:
      atoms_rec(f.lhs(), out);
      atoms_rec(f.rhs(), out);
      return;
    case CtlFormula::Kind::Exists:
    case CtlFormula::Kind::Forall:
      atoms_rec(f.lhs(), out);
      if (f.binary_path()) atoms_rec(f.rhs(), out);
      return;
    default:
      return;
  }
}

void quantified_rec(const CtlFormula& f, std::vector<CtlFormula>& out) {
  switch (f.kind()) {
    case CtlFormula::Kind::And:
    case CtlFormula::Kind::Or:
      quantified_rec(f.lhs(), out);
      quantified_rec(f.rhs(), out);
      return;
    case CtlFormula::Kind::Exists:
    case CtlFormula::Kind::Forall:
      out.push_back(f);
      quantified_rec(f.lhs(), out);
      if (f.binary_path()) quantified_rec(f.rhs(), out);
      return;
    default:
      return;
  }
}

}  // namespace

std::vector<std::string> ctl_atoms(const CtlFormula& f) {
  std::set<std::string> s;
  atoms_rec(f, s);
  return std::vector<std::string>(s.begin(), s.end());
}

std::vector<CtlFormula> quantified_subformulas(const CtlFormula& f) {
  std::vector<CtlFormula> out;
  quantified_rec(f, out);
  return out;
}

// --- Printing -------------------------------------------------------------------

namespace {

int ctl_precedence(const CtlFormula& f) {
  switch (f.kind()) {
    case CtlFormula::Kind::Or:
      return 1;
    case CtlFormula::Kind::And:
      return 2;
    default:
      return 3;
  }
}

void print_rec(const CtlFormula& f, int parent, std::string& out) {
  int prec = ctl_precedence(f);
  bool parens = prec < parent;
  if (parens) out += '(';
  switch (f.kind()) {
    case CtlFormula::Kind::True:
      out += "true";
      break;
    case CtlFormula::Kind::False:
      out += "false";
      break;
    case CtlFormula::Kind::Atom:
      out += f.atom_name();
      break;
    case CtlFormula::Kind::NegAtom:
      out += '!';
      out += f.atom_name();
      break;
    case CtlFormula::Kind::And:
      print_rec(f.lhs(), 2, out);
      out += " & ";
      print_rec(f.rhs(), 2, out);
      break;
    case CtlFormula::Kind::Or:
      print_rec(f.lhs(), 1, out);
      out += " | ";
      print_rec(f.rhs(), 1, out);
      break;
    case CtlFormula::Kind::Exists:
    case CtlFormula::Kind::Forall: {
      char q = f.kind() == CtlFormula::Kind::Forall ? 'A' : 'E';
      if (f.binary_path()) {
        out += q;
        out += '[';
        print_rec(f.lhs(), 0, out);
        out += f.path_op() == CtlFormula::PathOp::Until ? " U " : " R ";
        print_rec(f.rhs(), 0, out);
        out += ']';
      } else {
        out += q;
        switch (f.path_op()) {
          case CtlFormula::PathOp::Next:
            out += 'X';
            break;
          case CtlFormula::PathOp::Eventually:
            out += 'F';
            break;
          case CtlFormula::PathOp::Globally:
            out += 'G';
            break;
          default:
            throw std::logic_error("unreachable");
        }
        out += ' ';
        print_rec(f.lhs(), 3, out);
      }
      break;
    }
  }
  if (parens) out += ')';
}

// --- Parsing --------------------------------------------------------------------

struct CtlLexer {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool lookahead(const char* s) {
    skip_ws();
    size_t len = std::string(s).size();
    return text.compare(pos, len, s) == 0;
  }
};

bool ctl_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string read_ident(CtlLexer& lx) {
  lx.skip_ws();
  size_t start = lx.pos;
  while (lx.pos < lx.text.size() && ctl_ident_char(lx.text[lx.pos])) ++lx.pos;
  if (start == lx.pos) throw ParseError("expected identifier", lx.pos);
  return lx.text.substr(start, lx.pos - start);
}

CtlFormula parse_impl(CtlLexer& lx);

CtlFormula negate_propositional(const CtlFormula& f, size_t at) {
  if (!quantifier_free(f))
    throw ParseError("'!' and '->' apply to quantifier-free subformulas only", at);
  return negate_nnf(f);
}

CtlFormula parse_unary(CtlLexer& lx) {
  lx.skip_ws();
  if (lx.pos >= lx.text.size()) throw ParseError("unexpected end of formula", lx.pos);
  size_t at = lx.pos;
  char c = lx.text[lx.pos];
  if (c == '(') {
    ++lx.pos;
    CtlFormula f = parse_impl(lx);
    if (!lx.consume(')')) throw ParseError("expected ')'", lx.pos);
    return f;
  }
  if (c == '!') {
    ++lx.pos;
    CtlFormula f = parse_unary(lx);
    return negate_propositional(f, at);
  }
  if (!ctl_ident_char(c)) throw ParseError(std::string("unexpected character '") + c + "'", at);
  std::string word = read_ident(lx);
  using PathOp = CtlFormula::PathOp;
  if (word == "true") return CtlFormula::t();
  if (word == "false") return CtlFormula::f();
  if (word == "AX") return CtlFormula::forall(PathOp::Next, parse_unary(lx));
  if (word == "EX") return CtlFormula::exists(PathOp::Next, parse_unary(lx));
  if (word == "AF") return CtlFormula::forall(PathOp::Eventually, parse_unary(lx));
  if (word == "EF") return CtlFormula::exists(PathOp::Eventually, parse_unary(lx));
  if (word == "AG") return CtlFormula::forall(PathOp::Globally, parse_unary(lx));
  if (word == "EG") return CtlFormula::exists(PathOp::Globally, parse_unary(lx));
  if ((word == "A" || word == "E") && lx.peek() == '[') {
    ++lx.pos;
    CtlFormula f = parse_impl(lx);
    std::string op = read_ident(lx);
    if (op != "U" && op != "R") throw ParseError("expected 'U' or 'R'", lx.pos);
    CtlFormula g = parse_impl(lx);
    if (!lx.consume(']')) throw ParseError("expected ']'", lx.pos);
    PathOp p = op == "U" ? PathOp::Until : PathOp::Release;
    return word == "A" ? CtlFormula::forall(p, f, g) : CtlFormula::exists(p, f, g);
  }
  if (word == "A" || word == "E" || word == "U" || word == "R")
    throw ParseError("'" + word + "' is reserved in property syntax", at);
  return CtlFormula::atom(word);
}

CtlFormula parse_and(CtlLexer& lx) {
  CtlFormula f = parse_unary(lx);
  while (lx.peek() == '&') {
    ++lx.pos;
    f = CtlFormula::conj(f, parse_unary(lx));
  }
  return f;
}

CtlFormula parse_or(CtlLexer& lx) {
  CtlFormula f = parse_and(lx);
  while (lx.peek() == '|' ) {
    ++lx.pos;
    f = CtlFormula::disj(f, parse_and(lx));
  }
  return f;
}

CtlFormula parse_impl(CtlLexer& lx) {
  size_t at = lx.pos;
  CtlFormula f = parse_or(lx);
  if (lx.lookahead("->")) {
    lx.pos += 2;
    CtlFormula g = parse_impl(lx);
    return CtlFormula::disj(negate_propositional(f, at), g);
  }
  return f;
}

}  // namespace

std::string print_ctl(const CtlFormula& f) {
  std::string out;
  print_rec(f, 0, out);
  return out;
}

CtlFormula parse_ctl(const std::string& text) {
  CtlLexer lx{text};
  CtlFormula f = parse_impl(lx);
  if (!lx.eof()) throw ParseError("trailing input in property", lx.pos);
  return f;
}

}  // namespace vmc
