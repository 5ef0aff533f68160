#include "vmc/galois.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace vmc {

Abstraction Abstraction::join() { return Abstraction(); }

Abstraction Abstraction::ignore(int feature) {
  Abstraction a;
  a.kind_ = Kind::Ignore;
  a.feature_ = feature;
  return a;
}

Abstraction Abstraction::ignore(const std::string& feature) {
  return ignore(feature_id(feature));
}

Abstraction Abstraction::compose(const Abstraction& first, const Abstraction& then) {
  Abstraction a;
  a.kind_ = Kind::Compose;
  a.first_ = std::make_shared<Abstraction>(first);
  a.then_ = std::make_shared<Abstraction>(then);
  return a;
}

Abstraction Abstraction::ignore_set(const std::vector<std::string>& features) {
  if (features.empty()) throw Error("BAD_ABSTRACTION", "empty ignore set");
  Abstraction a = ignore(features[0]);
  for (size_t i = 1; i < features.size(); ++i) a = compose(a, ignore(features[i]));
  return a;
}

Abstraction Abstraction::parse_spec(const std::string& spec) {
  std::vector<Abstraction> parts;
  size_t pos = 0;
  while (pos <= spec.size()) {
    size_t plus = spec.find('+', pos);
    std::string part = spec.substr(pos, plus == std::string::npos ? plus : plus - pos);
    if (part == "join") {
      parts.push_back(join());
    } else if (part.rfind("ignore=", 0) == 0) {
      std::vector<std::string> names;
      std::string rest = part.substr(7);
      size_t p = 0;
      while (p <= rest.size()) {
        size_t comma = rest.find(',', p);
        std::string name = rest.substr(p, comma == std::string::npos ? comma : comma - p);
        if (name.empty()) throw Error("BAD_ABSTRACTION", "empty feature in '" + part + "'");
        names.push_back(name);
        if (comma == std::string::npos) break;
        p = comma + 1;
      }
      parts.push_back(ignore_set(names));
    } else {
      throw Error("BAD_ABSTRACTION", "unknown abstraction '" + part + "'");
    }
    if (plus == std::string::npos) break;
    pos = plus + 1;
  }
  if (parts.empty()) throw Error("BAD_ABSTRACTION", "empty abstraction spec");
  Abstraction a = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) a = compose(a, parts[i]);
  return a;
}

std::string Abstraction::to_string() const {
  switch (kind_) {
    case Kind::Join:
      return "join";
    case Kind::Ignore:
      return "ignore=" + feature_name(feature_);
    case Kind::Compose:
      return first_->to_string() + "+" + then_->to_string();
  }
  throw std::logic_error("unreachable");
}

namespace {

void require_nonempty(const ConfigSpace& space) {
  if (space.valid_configs().empty())
    throw Error("EMPTY_CONFIG_SPACE", "join undefined on empty configuration space");
}

}  // namespace

FeatExpr Abstraction::alpha_may(const FeatExpr& e, const ConfigSpace& space) const {
  switch (kind_) {
    case Kind::Join:
      require_nonempty(space);
      return satisfiable_in(e, space) ? FeatExpr::t() : FeatExpr::f();
    case Kind::Ignore:
      space.feature_index(feature_);
      return substitute_literal(nnf(e), feature_, true);
    case Kind::Compose: {
      AbstractSpace mid = first_->abstract_space(space);
      return then_->alpha_may(first_->alpha_may(e, space), mid.space);
    }
  }
  throw std::logic_error("unreachable");
}

FeatExpr Abstraction::alpha_must(const FeatExpr& e, const ConfigSpace& space) const {
  switch (kind_) {
    case Kind::Join: {
      require_nonempty(space);
      // true iff all valid configs satisfy e.
      bool all = !satisfiable_in(nnf(FeatExpr::neg(e)), space);
      return all ? FeatExpr::t() : FeatExpr::f();
    }
    case Kind::Ignore:
      space.feature_index(feature_);
      return substitute_literal(nnf(e), feature_, false);
    case Kind::Compose: {
      AbstractSpace mid = first_->abstract_space(space);
      return then_->alpha_must(first_->alpha_must(e, space), mid.space);
    }
  }
  throw std::logic_error("unreachable");
}

FeatExpr Abstraction::gamma_may(const FeatExpr& e, const ConfigSpace& space) const {
  switch (kind_) {
    case Kind::Join: {
      require_nonempty(space);
      if (satisfiable(e)) return FeatExpr::t();
      // false maps to the disjunction of the invalid configurations.
      std::vector<FeatExpr> invalid;
      uint32_t total = space.feature_count() == 0 ? 1u : (1u << space.feature_count());
      for (uint32_t m = 0; m < total; ++m) {
        Config k{m};
        if (!space.valid_index(k)) invalid.push_back(config_formula(space, k));
      }
      return FeatExpr::disj_all(invalid);
    }
    case Kind::Ignore: {
      FeatExpr a = FeatExpr::var(feature_);
      return FeatExpr::disj(FeatExpr::conj(e, a), FeatExpr::conj(e, FeatExpr::neg(a)));
    }
    case Kind::Compose: {
      AbstractSpace mid = first_->abstract_space(space);
      return first_->gamma_may(then_->gamma_may(e, mid.space), space);
    }
  }
  throw std::logic_error("unreachable");
}

FeatExpr Abstraction::gamma_must(const FeatExpr& e, const ConfigSpace& space) const {
  switch (kind_) {
    case Kind::Join: {
      require_nonempty(space);
      if (!satisfiable(FeatExpr::neg(e))) {
        // true maps to the conjunction of the negated invalid configurations.
        std::vector<FeatExpr> parts;
        uint32_t total = space.feature_count() == 0 ? 1u : (1u << space.feature_count());
        for (uint32_t m = 0; m < total; ++m) {
          Config k{m};
          if (!space.valid_index(k)) parts.push_back(FeatExpr::neg(config_formula(space, k)));
        }
        return FeatExpr::conj_all(parts);
      }
      return FeatExpr::f();
    }
    case Kind::Ignore: {
      FeatExpr a = FeatExpr::var(feature_);
      return FeatExpr::conj(FeatExpr::disj(e, FeatExpr::neg(a)), FeatExpr::disj(e, a));
    }
    case Kind::Compose: {
      AbstractSpace mid = first_->abstract_space(space);
      return first_->gamma_must(then_->gamma_must(e, mid.space), space);
    }
  }
  throw std::logic_error("unreachable");
}

AbstractSpace Abstraction::abstract_space(const ConfigSpace& space) const {
  require_nonempty(space);
  switch (kind_) {
    case Kind::Join: {
      ConfigSpace abs = ConfigSpace::unconstrained({});
      AbstractSpace out{abs, {}};
      out.config_map.assign(space.valid_configs().size(), 0);
      return out;
    }
    case Kind::Ignore: {
      int drop = space.feature_index(feature_);
      std::vector<std::string> names;
      for (size_t i = 0; i < space.feature_count(); ++i)
        if (static_cast<int>(i) != drop) names.push_back(feature_name(space.features()[i]));
      // Abstract valid configs: k[l_A -> true] for every concrete valid k.
      std::vector<uint32_t> masks;
      std::vector<uint32_t> per_concrete;
      for (const Config& k : space.valid_configs()) {
        uint32_t low = k.bits & ((1u << drop) - 1u);
        uint32_t high = (k.bits >> (drop + 1)) << drop;
        masks.push_back(low | high);
        per_concrete.push_back(low | high);
      }
      std::vector<uint32_t> sorted = masks;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      // Exact-denotation constraint so that valid_configs matches the image.
      ConfigSpace shell = ConfigSpace::unconstrained(names);
      std::vector<FeatExpr> cases;
      for (uint32_t m : sorted) cases.push_back(config_formula(shell, Config{m}));
      FeatExpr constraint = sorted.size() == (shell.valid_configs().size())
                                ? FeatExpr::t()
                                : FeatExpr::disj_all(cases);
      ConfigSpace abs(names, constraint);
      AbstractSpace out{abs, {}};
      for (uint32_t m : per_concrete) out.config_map.push_back(*abs.valid_index(Config{m}));
      return out;
    }
    case Kind::Compose: {
      AbstractSpace a = first_->abstract_space(space);
      AbstractSpace b = then_->abstract_space(a.space);
      AbstractSpace out{b.space, {}};
      for (size_t idx : a.config_map) out.config_map.push_back(b.config_map[idx]);
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

Config Abstraction::map_config(const ConfigSpace& space, const Config& k) const {
  AbstractSpace abs = abstract_space(space);
  auto idx = space.valid_index(k);
  if (!idx) throw Error("INVALID_CONFIG", "configuration is not valid in this space");
  return abs.space.valid_configs()[abs.config_map[*idx]];
}

// --- Law checking -------------------------------------------------------------

std::vector<FeatExpr> boolean_function_representatives(const std::vector<int>& features) {
  size_t n = features.size();
  if (n > 4)
    throw Error("FEATURE_BUDGET", "representative enumeration over more than 4 features");
  uint32_t rows = 1u << n;
  uint64_t functions = 1ull << rows;
  std::vector<FeatExpr> out;
  out.reserve(functions);
  for (uint64_t table = 0; table < functions; ++table) {
    std::vector<FeatExpr> minterms;
    for (uint32_t row = 0; row < rows; ++row) {
      if (!((table >> row) & 1ull)) continue;
      std::vector<FeatExpr> lits;
      for (size_t i = 0; i < n; ++i) {
        FeatExpr v = FeatExpr::var(features[i]);
        lits.push_back((row >> i) & 1u ? v : FeatExpr::neg(v));
      }
      minterms.push_back(FeatExpr::conj_all(lits));
    }
    if (minterms.empty())
      out.push_back(FeatExpr::f());
    else if (minterms.size() == rows)
      out.push_back(FeatExpr::t());
    else
      out.push_back(FeatExpr::disj_all(minterms));
  }
  return out;
}

GaloisFunctions galois_functions(const Abstraction& a, const ConfigSpace& space) {
  return GaloisFunctions{
      [a, space](const FeatExpr& e) { return a.alpha_may(e, space); },
      [a, space](const FeatExpr& e) { return a.gamma_may(e, space); },
      [a, space](const FeatExpr& e) { return a.alpha_must(e, space); },
      [a, space](const FeatExpr& e) { return a.gamma_must(e, space); },
  };
}

GaloisLawReport check_galois_law(const GaloisFunctions& fns, const ConfigSpace& concrete,
                                 const std::vector<std::string>& abstract_features,
                                 int max_features) {
  GaloisLawReport report;
  if (concrete.feature_count() > static_cast<size_t>(max_features))
    throw Error("FEATURE_BUDGET", "law check limited to " + std::to_string(max_features) +
                                      " features");
  std::vector<int> abs_ids;
  for (const auto& name : abstract_features) abs_ids.push_back(feature_id(name));
  std::vector<FeatExpr> concrete_reps = boolean_function_representatives(concrete.features());
  std::vector<FeatExpr> abstract_reps = boolean_function_representatives(abs_ids);

  for (const FeatExpr& psi : concrete_reps) {
    for (const FeatExpr& psi_abs : abstract_reps) {
      ++report.pairs_checked;
      bool may_lhs = entails(fns.alpha_may(psi), psi_abs);
      bool may_rhs = entails(psi, fns.gamma_may(psi_abs));
      if (may_lhs != may_rhs) {
        report.passed = false;
        report.witness = GaloisWitness{psi, psi_abs, true,
                                       "alpha(psi) |= psi' is " + std::to_string(may_lhs) +
                                           " but psi |= gamma(psi') is " + std::to_string(may_rhs)};
        return report;
      }
      bool must_lhs = entails(fns.gamma_must(psi_abs), psi);
      bool must_rhs = entails(psi_abs, fns.alpha_must(psi));
      if (must_lhs != must_rhs) {
        report.passed = false;
        report.witness = GaloisWitness{psi, psi_abs, false,
                                       "gamma~(psi') |= psi is " + std::to_string(must_lhs) +
                                           " but psi' |= alpha~(psi) is " + std::to_string(must_rhs)};
        return report;
      }
    }
  }
  return report;
}

GaloisLawReport check_galois_law(const Abstraction& a, const ConfigSpace& space,
                                 int max_features) {
  AbstractSpace abs = a.abstract_space(space);
  return check_galois_law(galois_functions(a, space), space, abs.space.feature_names(),
                          max_features);
}

}  // namespace vmc
