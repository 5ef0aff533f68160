#pragma once

// Feature expressions: the Boolean domain that presence conditions,
// validity constraints and configurations-as-formulas live in.
//
// FeatExpr values are immutable shared ASTs; all operations return new
// values. Feature names are interned process-wide so that variable nodes
// carry a small integer id.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vmc {

struct Error : std::runtime_error {
  std::string code;
  Error(std::string code_, const std::string& msg)
      : std::runtime_error(msg), code(std::move(code_)) {}
};

struct ParseError : Error {
  size_t offset;
  ParseError(const std::string& msg, size_t off)
      : Error("PARSE_ERROR", msg), offset(off) {}
};

// Process-wide feature name interning.
int feature_id(const std::string& name);
const std::string& feature_name(int id);

class FeatExpr {
 public:
  enum class Kind { True, False, Var, Not, And, Or };

  FeatExpr() : FeatExpr(t()) {}

  static FeatExpr t();
  static FeatExpr f();
  static FeatExpr var(int feature);
  static FeatExpr var(const std::string& name);
  static FeatExpr neg(const FeatExpr& e);
  static FeatExpr conj(const FeatExpr& a, const FeatExpr& b);
  static FeatExpr disj(const FeatExpr& a, const FeatExpr& b);
  // n-ary folds; empty conjunction is true, empty disjunction is false.
  static FeatExpr conj_all(const std::vector<FeatExpr>& es);
  static FeatExpr disj_all(const std::vector<FeatExpr>& es);

  Kind kind() const { return node_->kind; }
  int var_id() const { return node_->var; }
  FeatExpr lhs() const { return FeatExpr(node_->l); }
  FeatExpr rhs() const { return FeatExpr(node_->r); }

  bool is_const_true() const { return kind() == Kind::True; }
  bool is_const_false() const { return kind() == Kind::False; }

 private:
  struct Node;
  using Ptr = std::shared_ptr<const Node>;
  struct Node {
    Kind kind;
    int var = -1;
    FeatExpr::Ptr l, r;
  };
  explicit FeatExpr(Ptr n) : node_(std::move(n)) {}
  Ptr node_;

  friend class FeatExprBuilder;
};

// A total truth assignment over the features of one ConfigSpace, stored as
// a bit mask indexed by feature position within the space.
struct Config {
  uint32_t bits = 0;

  bool operator==(const Config& o) const { return bits == o.bits; }
  bool operator<(const Config& o) const { return bits < o.bits; }
};

class ConfigSpace {
 public:
  // Enumerates the valid configurations (every k in 2^F with k |= constraint)
  // eagerly. Throws on duplicate/empty feature names or > 30 features.
  ConfigSpace(std::vector<std::string> features, FeatExpr constraint);

  // All of 2^F.
  static ConfigSpace unconstrained(std::vector<std::string> features);

  size_t feature_count() const { return features_.size(); }
  const std::vector<int>& features() const { return features_; }
  std::vector<std::string> feature_names() const;
  const FeatExpr& constraint() const { return constraint_; }
  const std::vector<Config>& valid_configs() const { return valid_; }

  bool has_feature(int id) const;
  // Position of a feature within this space; throws UNKNOWN_FEATURE.
  int feature_index(int id) const;

  // Membership test by mask; returns index into valid_configs or nullopt.
  std::optional<size_t> valid_index(const Config& k) const;

  // Render "{a, c}" with names sorted alphabetically.
  std::string config_to_string(const Config& k) const;
  // Build a config from enabled feature names; throws on unknown names.
  Config config_of(const std::vector<std::string>& enabled) const;

 private:
  std::vector<int> features_;  // interned ids, declaration order
  FeatExpr constraint_;
  std::vector<Config> valid_;  // sorted by mask

  ConfigSpace() = default;
};

// --- Operations ------------------------------------------------------------

// Standard propositional evaluation of e under the total assignment k.
// Throws UNKNOWN_FEATURE if e mentions a feature outside the space.
bool eval(const ConfigSpace& space, const Config& k, const FeatExpr& e);

// { k in space.valid_configs | eval(k, e) }
std::vector<Config> satisfying_configs(const FeatExpr& e, const ConfigSpace& space);

// Entailment relative to the space's valid configurations.
bool entails(const FeatExpr& a, const FeatExpr& b, const ConfigSpace& space);
// Absolute entailment / equivalence over all assignments of the mentioned
// features (decided by search, not enumeration of a space).
bool entails(const FeatExpr& a, const FeatExpr& b);
bool equiv(const FeatExpr& a, const FeatExpr& b);

// Negation normal form: Not only directly above Var.
FeatExpr nnf(const FeatExpr& e);

// Replaces both literals of the feature (positive and negated) by the given
// constant. Requires e in NNF; a feature that does not occur is a no-op.
FeatExpr substitute_literal(const FeatExpr& e, int feature, bool value);

// Satisfiability over all assignments of the mentioned features.
bool satisfiable(const FeatExpr& e);
// Satisfiability of e /\ space.constraint() (i.e. "some valid config
// satisfies e") decided by search; equivalent to, but much cheaper than,
// scanning valid_configs on large spaces.
bool satisfiable_in(const FeatExpr& e, const ConfigSpace& space);

std::vector<int> mentioned_features(const FeatExpr& e);

// k(A_1) /\ ... /\ k(A_n) in the space's feature order.
FeatExpr config_formula(const ConfigSpace& space, const Config& k);

// Grammar: e ::= true | false | ident | !e | e & e | e "|" e | (e)
// with precedence ! > & > |.
FeatExpr parse_feat_expr(const std::string& text);
std::string print_feat_expr(const FeatExpr& e);

}  // namespace vmc
