#pragma once

// Variability abstractions over feature expressions: the join abstraction
// (collapse all variants), single-feature ignore, and sequential composition.
// Each abstraction comes as a pair: the over-approximating alpha (used for
// may transitions) and its under-approximating dual (used for must
// transitions), related by alpha_must = not . alpha_may . not.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vmc/featexpr.hpp"

namespace vmc {

struct AbstractSpace {
  ConfigSpace space;             // the abstract configuration space
  std::vector<size_t> config_map;  // valid-config index (concrete) -> valid-config index (abstract)
};

class Abstraction {
 public:
  enum class Kind { Join, Ignore, Compose };

  static Abstraction join();
  static Abstraction ignore(const std::string& feature);
  static Abstraction ignore(int feature);
  static Abstraction compose(const Abstraction& first, const Abstraction& then);
  // ignore_set({a,b}) == compose(ignore(a), ignore(b))
  static Abstraction ignore_set(const std::vector<std::string>& features);

  // CLI syntax: "join", "ignore=t", "ignore=t,f", "ignore=t,f+join".
  static Abstraction parse_spec(const std::string& spec);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  int feature() const { return feature_; }
  const Abstraction& first() const { return *first_; }
  const Abstraction& then() const { return *then_; }

  // Over-approximation: join maps to true iff some valid config satisfies e;
  // ignore substitutes true for both literals of the feature (after nnf).
  FeatExpr alpha_may(const FeatExpr& e, const ConfigSpace& space) const;
  // Under-approximation (the dual): join maps to true iff all valid configs
  // satisfy e; ignore substitutes false.
  FeatExpr alpha_must(const FeatExpr& e, const ConfigSpace& space) const;
  // Concretizations; e is over the abstract feature set. These exist for
  // law checking and documentation, the checker never calls them.
  FeatExpr gamma_may(const FeatExpr& e, const ConfigSpace& space) const;
  FeatExpr gamma_must(const FeatExpr& e, const ConfigSpace& space) const;

  // Abstract feature set, abstract valid configs, and the induced map on
  // concrete valid configs. Join requires a non-empty space.
  AbstractSpace abstract_space(const ConfigSpace& space) const;

  // k |-> alpha(k) on masks of the given concrete space.
  Config map_config(const ConfigSpace& space, const Config& k) const;

 private:
  Kind kind_ = Kind::Join;
  int feature_ = -1;
  std::shared_ptr<const Abstraction> first_, then_;
};

// Hooks for law checking; the default pack is built from an Abstraction but
// tests may corrupt individual functions.
struct GaloisFunctions {
  std::function<FeatExpr(const FeatExpr&)> alpha_may, gamma_may, alpha_must, gamma_must;
};

GaloisFunctions galois_functions(const Abstraction& a, const ConfigSpace& space);

struct GaloisWitness {
  FeatExpr concrete;   // psi
  FeatExpr abstracted; // psi'
  bool may_pair;       // which adjunction failed
  std::string detail;
};

struct GaloisLawReport {
  bool passed = true;
  long pairs_checked = 0;
  std::optional<GaloisWitness> witness;
};

// Exhaustively verifies both adjunctions,
//   may:   alpha(psi) |= psi'  <=>  psi |= gamma(psi')
//   must:  gamma~(psi') |= psi <=>  psi' |= alpha~(psi)
// over canonical representatives (minterm disjunctions) of every Boolean
// function on the concrete and abstract feature sets. Refuses feature sets
// larger than max_features.
GaloisLawReport check_galois_law(const Abstraction& a, const ConfigSpace& space,
                                 int max_features = 3);
GaloisLawReport check_galois_law(const GaloisFunctions& fns, const ConfigSpace& concrete,
                                 const std::vector<std::string>& abstract_features,
                                 int max_features = 3);

// All 2^(2^n) Boolean functions over the given features, one canonical
// minterm-disjunction representative each.
std::vector<FeatExpr> boolean_function_representatives(const std::vector<int>& features);

}  // namespace vmc
