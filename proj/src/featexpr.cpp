#include "vmc/featexpr.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace vmc {

namespace {

struct Interner {
  std::mutex mu;
  std::vector<std::string> names;
  std::unordered_map<std::string, int> ids;
};

Interner& interner() {
  static Interner table;
  return table;
}

}  // namespace

int feature_id(const std::string& name) {
  auto& t = interner();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.ids.find(name);
  if (it != t.ids.end()) return it->second;
  int id = static_cast<int>(t.names.size());
  t.names.push_back(name);
  t.ids.emplace(name, id);
  return id;
}

const std::string& feature_name(int id) {
  auto& t = interner();
  std::lock_guard<std::mutex> lock(t.mu);
  return t.names.at(static_cast<size_t>(id));
}

// --- FeatExpr construction ---------------------------------------------------

FeatExpr FeatExpr::t() {
  static const Ptr n = std::make_shared<Node>(Node{Kind::True, -1, nullptr, nullptr});
  return FeatExpr(n);
}

FeatExpr FeatExpr::f() {
  static const Ptr n = std::make_shared<Node>(Node{Kind::False, -1, nullptr, nullptr});
  return FeatExpr(n);
}

FeatExpr FeatExpr::var(int feature) {
  return FeatExpr(std::make_shared<Node>(Node{Kind::Var, feature, nullptr, nullptr}));
}

FeatExpr FeatExpr::var(const std::string& name) { return var(feature_id(name)); }

FeatExpr FeatExpr::neg(const FeatExpr& e) {
  return FeatExpr(std::make_shared<Node>(Node{Kind::Not, -1, e.node_, nullptr}));
}

FeatExpr FeatExpr::conj(const FeatExpr& a, const FeatExpr& b) {
  return FeatExpr(std::make_shared<Node>(Node{Kind::And, -1, a.node_, b.node_}));
}

FeatExpr FeatExpr::disj(const FeatExpr& a, const FeatExpr& b) {
  return FeatExpr(std::make_shared<Node>(Node{Kind::Or, -1, a.node_, b.node_}));
}

FeatExpr FeatExpr::conj_all(const std::vector<FeatExpr>& es) {
  if (es.empty()) return t();
  FeatExpr acc = es[0];
  for (size_t i = 1; i < es.size(); ++i) acc = conj(acc, es[i]);
  return acc;
}

FeatExpr FeatExpr::disj_all(const std::vector<FeatExpr>& es) {
  if (es.empty()) return f();
  FeatExpr acc = es[0];
  for (size_t i = 1; i < es.size(); ++i) acc = disj(acc, es[i]);
  return acc;
}

// --- ConfigSpace -------------------------------------------------------------

ConfigSpace::ConfigSpace(std::vector<std::string> features, FeatExpr constraint)
    : constraint_(std::move(constraint)) {
  if (features.size() > 30)
    throw Error("FEATURE_BUDGET",
                "configuration space over " + std::to_string(features.size()) +
                    " features exceeds the enumeration budget of 30");
  std::set<std::string> seen;
  for (const auto& name : features) {
    if (name.empty()) throw Error("BAD_FEATURE", "empty feature name");
    if (!seen.insert(name).second)
      throw Error("BAD_FEATURE", "duplicate feature '" + name + "'");
    features_.push_back(feature_id(name));
  }
  const uint32_t total = features_.empty() ? 1u : (1u << features_.size());
  valid_.reserve(total);
  for (uint32_t m = 0; m < total; ++m) {
    Config k{m};
    if (eval(*this, k, constraint_)) valid_.push_back(k);
  }
}

ConfigSpace ConfigSpace::unconstrained(std::vector<std::string> features) {
  return ConfigSpace(std::move(features), FeatExpr::t());
}

std::vector<std::string> ConfigSpace::feature_names() const {
  std::vector<std::string> out;
  out.reserve(features_.size());
  for (int id : features_) out.push_back(feature_name(id));
  return out;
}

bool ConfigSpace::has_feature(int id) const {
  return std::find(features_.begin(), features_.end(), id) != features_.end();
}

int ConfigSpace::feature_index(int id) const {
  for (size_t i = 0; i < features_.size(); ++i)
    if (features_[i] == id) return static_cast<int>(i);
  throw Error("UNKNOWN_FEATURE",
              "feature '" + feature_name(id) + "' is not part of the configuration space");
}

std::optional<size_t> ConfigSpace::valid_index(const Config& k) const {
  auto it = std::lower_bound(valid_.begin(), valid_.end(), k);
  if (it != valid_.end() && it->bits == k.bits)
    return static_cast<size_t>(it - valid_.begin());
  return std::nullopt;
}

std::string ConfigSpace::config_to_string(const Config& k) const {
  std::vector<std::string> names;
  for (size_t i = 0; i < features_.size(); ++i)
    if (k.bits & (1u << i)) names.push_back(feature_name(features_[i]));
  std::sort(names.begin(), names.end());
  std::string out = "{";
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out + "}";
}

Config ConfigSpace::config_of(const std::vector<std::string>& enabled) const {
  Config k;
  for (const auto& name : enabled)
    k.bits |= 1u << feature_index(feature_id(name));
  return k;
}

// --- Evaluation and queries --------------------------------------------------

bool eval(const ConfigSpace& space, const Config& k, const FeatExpr& e) {
  switch (e.kind()) {
    case FeatExpr::Kind::True:
      return true;
    case FeatExpr::Kind::False:
      return false;
    case FeatExpr::Kind::Var:
      return (k.bits >> space.feature_index(e.var_id())) & 1u;
    case FeatExpr::Kind::Not:
      return !eval(space, k, e.lhs());
    case FeatExpr::Kind::And:
      return eval(space, k, e.lhs()) && eval(space, k, e.rhs());
    case FeatExpr::Kind::Or:
      return eval(space, k, e.lhs()) || eval(space, k, e.rhs());
  }
  throw std::logic_error("unreachable");
}

std::vector<Config> satisfying_configs(const FeatExpr& e, const ConfigSpace& space) {
  std::vector<Config> out;
  for (const Config& k : space.valid_configs())
    if (eval(space, k, e)) out.push_back(k);
  return out;
}

bool entails(const FeatExpr& a, const FeatExpr& b, const ConfigSpace& space) {
  for (const Config& k : space.valid_configs())
    if (eval(space, k, a) && !eval(space, k, b)) return false;
  return true;
}

namespace {

void collect_features(const FeatExpr& e, std::vector<int>& out) {
  switch (e.kind()) {
    case FeatExpr::Kind::Var:
      out.push_back(e.var_id());
      return;
    case FeatExpr::Kind::Not:
      collect_features(e.lhs(), out);
      return;
    case FeatExpr::Kind::And:
    case FeatExpr::Kind::Or:
      collect_features(e.lhs(), out);
      collect_features(e.rhs(), out);
      return;
    default:
      return;
  }
}

enum class Tri { F, T, U };

// Three-valued evaluation under a partial assignment (values index by
// feature id through `pos`; -1 means unassigned).
Tri eval_partial(const FeatExpr& e, const std::unordered_map<int, int>& pos,
                 const std::vector<int8_t>& vals) {
  switch (e.kind()) {
    case FeatExpr::Kind::True:
      return Tri::T;
    case FeatExpr::Kind::False:
      return Tri::F;
    case FeatExpr::Kind::Var: {
      auto it = pos.find(e.var_id());
      int8_t v = vals[static_cast<size_t>(it->second)];
      return v < 0 ? Tri::U : (v ? Tri::T : Tri::F);
    }
    case FeatExpr::Kind::Not: {
      Tri v = eval_partial(e.lhs(), pos, vals);
      return v == Tri::U ? Tri::U : (v == Tri::T ? Tri::F : Tri::T);
    }
    case FeatExpr::Kind::And: {
      Tri a = eval_partial(e.lhs(), pos, vals);
      if (a == Tri::F) return Tri::F;
      Tri b = eval_partial(e.rhs(), pos, vals);
      if (b == Tri::F) return Tri::F;
      return (a == Tri::T && b == Tri::T) ? Tri::T : Tri::U;
    }
    case FeatExpr::Kind::Or: {
      Tri a = eval_partial(e.lhs(), pos, vals);
      if (a == Tri::T) return Tri::T;
      Tri b = eval_partial(e.rhs(), pos, vals);
      if (b == Tri::T) return Tri::T;
      return (a == Tri::F && b == Tri::F) ? Tri::F : Tri::U;
    }
  }
  throw std::logic_error("unreachable");
}

bool sat_search(const FeatExpr& e, const std::vector<int>& vars,
                const std::unordered_map<int, int>& pos, std::vector<int8_t>& vals,
                size_t next) {
  Tri v = eval_partial(e, pos, vals);
  if (v == Tri::T) return true;
  if (v == Tri::F) return false;
  // v == U implies an unassigned variable remains.
  for (size_t i = next; i < vars.size(); ++i) {
    size_t slot = i;
    if (vals[slot] >= 0) continue;
    for (int8_t b : {int8_t(1), int8_t(0)}) {
      vals[slot] = b;
      if (sat_search(e, vars, pos, vals, i + 1)) {
        vals[slot] = -1;
        return true;
      }
    }
    vals[slot] = -1;
    return false;
  }
  return false;
}

bool sat(const FeatExpr& e) {
  std::vector<int> vars;
  collect_features(e, vars);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::unordered_map<int, int> pos;
  for (size_t i = 0; i < vars.size(); ++i) pos.emplace(vars[i], static_cast<int>(i));
  std::vector<int8_t> vals(vars.size(), -1);
  return sat_search(e, vars, pos, vals, 0);
}

}  // namespace

bool entails(const FeatExpr& a, const FeatExpr& b) {
  return !sat(FeatExpr::conj(a, FeatExpr::neg(b)));
}

bool equiv(const FeatExpr& a, const FeatExpr& b) {
  return entails(a, b) && entails(b, a);
}

bool satisfiable(const FeatExpr& e) { return sat(e); }

bool satisfiable_in(const FeatExpr& e, const ConfigSpace& space) {
  // Validate mentions against the space up front, then search e /\ constraint.
  for (int id : mentioned_features(e)) space.feature_index(id);
  return sat(FeatExpr::conj(e, space.constraint()));
}

std::vector<int> mentioned_features(const FeatExpr& e) {
  std::vector<int> vars;
  collect_features(e, vars);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

namespace {

FeatExpr nnf_rec(const FeatExpr& e, bool negated) {
  switch (e.kind()) {
    case FeatExpr::Kind::True:
      return negated ? FeatExpr::f() : FeatExpr::t();
    case FeatExpr::Kind::False:
      return negated ? FeatExpr::t() : FeatExpr::f();
    case FeatExpr::Kind::Var:
      return negated ? FeatExpr::neg(e) : e;
    case FeatExpr::Kind::Not:
      return nnf_rec(e.lhs(), !negated);
    case FeatExpr::Kind::And: {
      FeatExpr l = nnf_rec(e.lhs(), negated);
      FeatExpr r = nnf_rec(e.rhs(), negated);
      return negated ? FeatExpr::disj(l, r) : FeatExpr::conj(l, r);
    }
    case FeatExpr::Kind::Or: {
      FeatExpr l = nnf_rec(e.lhs(), negated);
      FeatExpr r = nnf_rec(e.rhs(), negated);
      return negated ? FeatExpr::conj(l, r) : FeatExpr::disj(l, r);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

FeatExpr nnf(const FeatExpr& e) { return nnf_rec(e, false); }

FeatExpr substitute_literal(const FeatExpr& e, int feature, bool value) {
  switch (e.kind()) {
    case FeatExpr::Kind::True:
    case FeatExpr::Kind::False:
      return e;
    case FeatExpr::Kind::Var:
      if (e.var_id() == feature) return value ? FeatExpr::t() : FeatExpr::f();
      return e;
    case FeatExpr::Kind::Not:
      if (e.lhs().kind() != FeatExpr::Kind::Var)
        throw std::logic_error("substitute_literal requires NNF input");
      if (e.lhs().var_id() == feature) return value ? FeatExpr::t() : FeatExpr::f();
      return e;
    case FeatExpr::Kind::And:
      return FeatExpr::conj(substitute_literal(e.lhs(), feature, value),
                            substitute_literal(e.rhs(), feature, value));
    case FeatExpr::Kind::Or:
      return FeatExpr::disj(substitute_literal(e.lhs(), feature, value),
                            substitute_literal(e.rhs(), feature, value));
  }
  throw std::logic_error("unreachable");
}

FeatExpr config_formula(const ConfigSpace& space, const Config& k) {
  std::vector<FeatExpr> lits;
  for (size_t i = 0; i < space.feature_count(); ++i) {
    FeatExpr v = FeatExpr::var(space.features()[i]);
    lits.push_back((k.bits >> i) & 1u ? v : FeatExpr::neg(v));
  }
  return FeatExpr::conj_all(lits);
}

// --- Text format ---------------------------------------------------------------

namespace {

struct FeLexer {
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
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

FeatExpr parse_or(FeLexer& lx);

FeatExpr parse_atom(FeLexer& lx) {
  lx.skip_ws();
  if (lx.pos >= lx.text.size())
    throw ParseError("unexpected end of feature expression", lx.pos);
  char c = lx.text[lx.pos];
  if (c == '(') {
    ++lx.pos;
    FeatExpr e = parse_or(lx);
    if (lx.peek() != ')') throw ParseError("expected ')'", lx.pos);
    ++lx.pos;
    return e;
  }
  if (c == '!') {
    ++lx.pos;
    return FeatExpr::neg(parse_atom(lx));
  }
  if (!ident_char(c))
    throw ParseError(std::string("unexpected character '") + c + "'", lx.pos);
  size_t start = lx.pos;
  while (lx.pos < lx.text.size() && ident_char(lx.text[lx.pos])) ++lx.pos;
  std::string name = lx.text.substr(start, lx.pos - start);
  if (name == "true") return FeatExpr::t();
  if (name == "false") return FeatExpr::f();
  return FeatExpr::var(name);
}

FeatExpr parse_and(FeLexer& lx) {
  FeatExpr e = parse_atom(lx);
  while (lx.peek() == '&') {
    ++lx.pos;
    e = FeatExpr::conj(e, parse_atom(lx));
  }
  return e;
}

FeatExpr parse_or(FeLexer& lx) {
  FeatExpr e = parse_and(lx);
  while (lx.peek() == '|') {
    ++lx.pos;
    e = FeatExpr::disj(e, parse_and(lx));
  }
  return e;
}

int precedence(FeatExpr::Kind k) {
  switch (k) {
    case FeatExpr::Kind::Or:
      return 1;
    case FeatExpr::Kind::And:
      return 2;
    default:
      return 3;
  }
}

void print_rec(const FeatExpr& e, int parent_prec, std::string& out) {
  int prec = precedence(e.kind());
  bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e.kind()) {
    case FeatExpr::Kind::True:
      out += "true";
      break;
    case FeatExpr::Kind::False:
      out += "false";
      break;
    case FeatExpr::Kind::Var:
      out += feature_name(e.var_id());
      break;
    case FeatExpr::Kind::Not:
      out += '!';
      print_rec(e.lhs(), 3, out);
      break;
    case FeatExpr::Kind::And:
      print_rec(e.lhs(), 2, out);
      out += " & ";
      print_rec(e.rhs(), 2, out);
      break;
    case FeatExpr::Kind::Or:
      print_rec(e.lhs(), 1, out);
      out += " | ";
      print_rec(e.rhs(), 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

FeatExpr parse_feat_expr(const std::string& text) {
  FeLexer lx{text};
  FeatExpr e = parse_or(lx);
  if (!lx.eof())
    throw ParseError("trailing input in feature expression", lx.pos);
  return e;
}

std::string print_feat_expr(const FeatExpr& e) {
  std::string out;
  print_rec(e, 0, out);
  return out;
}

}  // namespace vmc
