#include "doctest.h"
#include "testutil.hpp"
#include "vmc/fuzz.hpp"
#include "vmc/galois.hpp"

using namespace vmc;
using vmctest::vm_config;

namespace {

ConfigSpace vm_space() {
  return ConfigSpace({"v", "s", "t", "c", "f"},
                     FeatExpr::conj(FeatExpr::var("v"), FeatExpr::var("s")));
}

}  // namespace

TEST_CASE("join alpha collapses by satisfiability over K") {
  ConfigSpace K = vm_space();
  Abstraction join = Abstraction::join();
  CHECK(join.alpha_may(FeatExpr::var("c"), K).is_const_true());
  CHECK(join.alpha_may(FeatExpr::f(), K).is_const_false());
  // Not all configs have c, but all have v and s.
  CHECK(join.alpha_must(FeatExpr::var("c"), K).is_const_false());
  CHECK(join.alpha_must(FeatExpr::conj(FeatExpr::var("v"), FeatExpr::var("s")), K)
            .is_const_true());
}

TEST_CASE("join on an empty space is an error") {
  ConfigSpace empty({"a"}, FeatExpr::f());
  CHECK_THROWS_AS(Abstraction::join().alpha_may(FeatExpr::t(), empty), Error);
  CHECK_THROWS_AS(Abstraction::join().abstract_space(empty), Error);
}

TEST_CASE("ignore alpha substitutes literals") {
  ConfigSpace K = vm_space();
  Abstraction ig = Abstraction::ignore(std::string("t"));
  CHECK(ig.alpha_may(FeatExpr::var("t"), K).is_const_true());
  CHECK(ig.alpha_must(FeatExpr::var("t"), K).is_const_false());
  // Non-NNF input is normalized first.
  FeatExpr e = FeatExpr::neg(FeatExpr::conj(FeatExpr::var("t"), FeatExpr::var("c")));
  CHECK(equiv(ig.alpha_may(e, K), FeatExpr::t()));
}

TEST_CASE("gamma formulas follow the definitions") {
  ConfigSpace K = vm_space();
  Abstraction ig = Abstraction::ignore(std::string("t"));
  FeatExpr c = FeatExpr::var("c"), t = FeatExpr::var("t");
  CHECK(equiv(ig.gamma_may(c, K),
              FeatExpr::disj(FeatExpr::conj(c, t), FeatExpr::conj(c, FeatExpr::neg(t)))));
  CHECK(equiv(ig.gamma_must(c, K),
              FeatExpr::conj(FeatExpr::disj(c, FeatExpr::neg(t)), FeatExpr::disj(c, t))));

  Abstraction join = Abstraction::join();
  CHECK(join.gamma_may(FeatExpr::t(), K).is_const_true());
  CHECK(join.gamma_must(FeatExpr::f(), K).is_const_false());

  // Over F={a} with K={{a}}: gamma(false) is the one invalid config, ~a;
  // gamma~(true) is its negation, equivalent to a.
  ConfigSpace single({"a"}, FeatExpr::var("a"));
  CHECK(equiv(join.gamma_may(FeatExpr::f(), single), FeatExpr::neg(FeatExpr::var("a"))));
  CHECK(equiv(join.gamma_must(FeatExpr::t(), single), FeatExpr::var("a")));
}

TEST_CASE("abstract spaces") {
  ConfigSpace K = vm_space();
  SUBCASE("join yields the singleton space over no features") {
    AbstractSpace abs = Abstraction::join().abstract_space(K);
    CHECK(abs.space.feature_count() == 0);
    CHECK(abs.space.valid_configs().size() == 1);
    CHECK(abs.config_map == std::vector<size_t>(8, 0));
  }
  SUBCASE("ignoring t and f keeps the c split") {
    AbstractSpace abs = Abstraction::ignore_set({"t", "f"}).abstract_space(K);
    CHECK(abs.space.feature_names() == std::vector<std::string>{"v", "s", "c"});
    CHECK(abs.space.valid_configs().size() == 2);
    // Every concrete config maps onto the image, and the image is exactly
    // { {v,s}, {v,s,c} }.
    for (size_t idx : abs.config_map) CHECK(idx < 2);
    auto names0 = abs.space.config_to_string(abs.space.valid_configs()[0]);
    auto names1 = abs.space.config_to_string(abs.space.valid_configs()[1]);
    CHECK(names0 == "{s, v}");
    CHECK(names1 == "{c, s, v}");
  }
  SUBCASE("ignore collapses configs that differ only in the feature") {
    ConfigSpace two({"A"}, FeatExpr::t());
    AbstractSpace abs = Abstraction::ignore(std::string("A")).abstract_space(two);
    CHECK(abs.space.feature_count() == 0);
    CHECK(abs.space.valid_configs().size() == 1);
    CHECK(abs.config_map == std::vector<size_t>(2, 0));
  }
}

TEST_CASE("ignore of an absent feature is ill-formed") {
  ConfigSpace K = vm_space();
  Abstraction bad = Abstraction::ignore(std::string("zz"));
  CHECK_THROWS_AS(bad.abstract_space(K), Error);
  CHECK_THROWS_AS(bad.alpha_may(FeatExpr::t(), K), Error);
}

TEST_CASE("composition applies left to right") {
  ConfigSpace K = vm_space();
  Abstraction chain = Abstraction::compose(Abstraction::ignore_set({"t", "f"}),
                                           Abstraction::join());
  AbstractSpace abs = chain.abstract_space(K);
  CHECK(abs.space.feature_count() == 0);
  CHECK(abs.space.valid_configs().size() == 1);
  // alpha through the chain: t becomes true, then join keeps true.
  CHECK(chain.alpha_may(FeatExpr::var("t"), K).is_const_true());
  CHECK(chain.alpha_must(FeatExpr::var("t"), K).is_const_false());
}

TEST_CASE("abstraction spec syntax") {
  CHECK(Abstraction::parse_spec("join").to_string() == "join");
  CHECK(Abstraction::parse_spec("ignore=t").to_string() == "ignore=t");
  CHECK(Abstraction::parse_spec("ignore=t,f").to_string() == "ignore=t+ignore=f");
  CHECK(Abstraction::parse_spec("ignore=t,f+join").to_string() ==
        "ignore=t+ignore=f+join");
  CHECK_THROWS_AS(Abstraction::parse_spec("shrink"), Error);
}

TEST_CASE("adjunction law checks") {
  SUBCASE("join over two features, full K") {
    ConfigSpace space = ConfigSpace::unconstrained({"a", "b"});
    GaloisLawReport r = check_galois_law(Abstraction::join(), space);
    CHECK(r.passed);
    CHECK(r.pairs_checked == 16 * 2);
  }
  SUBCASE("ignore over three features") {
    ConfigSpace space = ConfigSpace::unconstrained({"a", "b", "c"});
    GaloisLawReport r = check_galois_law(Abstraction::ignore(std::string("b")), space);
    CHECK(r.passed);
  }
  SUBCASE("a corrupted alpha is caught with a witness") {
    ConfigSpace space = ConfigSpace::unconstrained({"a", "b"});
    Abstraction join = Abstraction::join();
    GaloisFunctions fns = galois_functions(join, space);
    fns.alpha_may = [](const FeatExpr&) { return FeatExpr::t(); };  // always true
    GaloisLawReport r = check_galois_law(fns, space, {});
    CHECK_FALSE(r.passed);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->may_pair);
  }
}

TEST_CASE("duality and approximation ordering") {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    ConfigSpace space = random_config_space(rng, 4);
    FeatExpr e = random_feat_expr(rng, space.features(), 3);
    std::vector<Abstraction> as = {Abstraction::join(),
                                   Abstraction::ignore(rng.pick(space.features()))};
    for (const Abstraction& a : as) {
      FeatExpr may = a.alpha_may(e, space);
      FeatExpr must = a.alpha_must(e, space);
      // alpha~ = not . alpha . not
      CHECK(equiv(must, FeatExpr::neg(a.alpha_may(nnf(FeatExpr::neg(e)), space))));
      // must entails may absolutely (K is non-empty by construction).
      CHECK(entails(must, may));
    }
  }
}

TEST_CASE("lemma 1: configs transfer along the abstraction") {
  Rng rng(555);
  for (int i = 0; i < 150; ++i) {
    ConfigSpace space = random_config_space(rng, 3);
    FeatExpr e = random_feat_expr(rng, space.features(), 3);
    std::vector<Abstraction> as = {Abstraction::join(),
                                   Abstraction::ignore(rng.pick(space.features()))};
    for (const Abstraction& a : as) {
      AbstractSpace abs = a.abstract_space(space);
      FeatExpr may = a.alpha_may(e, space);
      FeatExpr must = a.alpha_must(e, space);
      for (size_t ki = 0; ki < space.valid_configs().size(); ++ki) {
        const Config& k = space.valid_configs()[ki];
        const Config& mapped = abs.space.valid_configs()[abs.config_map[ki]];
        // (i) constructively: k |= e implies alpha(k) |= alpha(e).
        if (eval(space, k, e)) CHECK(eval(abs.space, mapped, may));
        // (ii) alpha(k) |= alpha~(e) implies k |= e.
        if (eval(abs.space, mapped, must)) CHECK(eval(space, k, e));
      }
      // Extensive/reductive laws of the adjunctions.
      CHECK(entails(e, a.gamma_may(may, space)));
      CHECK(entails(a.gamma_must(must, space), e));
    }
  }
}
