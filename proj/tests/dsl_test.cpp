#include "doctest.h"
#include "testutil.hpp"
#include "vmc/dsl.hpp"
#include "vmc/fuzz.hpp"

using namespace vmc;
using vmctest::load_vending;
using vmctest::make_vending;
using vmctest::read_file;

TEST_CASE("the bundled vending machine parses to the expected family") {
  Fts fts = load_vending();
  CHECK(fts.core.states.size() == 8);
  CHECK(fts.trans.size() == 13);
  CHECK(fts.space.feature_count() == 5);
  CHECK(fts.space.valid_configs().size() == 8);
  CHECK(fts_equivalent(fts, make_vending()));
  ModelDocument doc = parse_model(read_file(vmctest::models_dir() + "/vending.fts"));
  CHECK(doc.props.size() == 3);
  CHECK(doc.find_prop("P2") != nullptr);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_model("state 1;"), DslError);  // missing header
  CHECK_THROWS_AS(parse_model("format-version 2;"), DslError);
  SUBCASE("empty configuration space") {
    std::string text = "format-version 1; feature a; configs false; state 1 init;";
    CHECK_THROWS_WITH_AS(build_fts(parse_model(text)), doctest::Contains("config"), Error);
  }
  SUBCASE("undeclared state in a transition") {
    std::string text =
        "format-version 1; configs true; state 1 init; trans 1 -> 9 on go;";
    CHECK_THROWS_AS(build_fts(parse_model(text)), Error);
  }
  SUBCASE("no initial state") {
    std::string text = "format-version 1; configs true; state 1;";
    CHECK_THROWS_AS(build_fts(parse_model(text)), Error);
  }
  SUBCASE("positions point into the text") {
    try {
      parse_model("format-version 1;\nconfigs a &;\nstate 1 init;");
      FAIL("expected a syntax error");
    } catch (const DslError& e) {
      CHECK(e.line == 2);
    }
  }
  SUBCASE("duplicate transitions are rejected") {
    std::string text =
        "format-version 1; configs true; state 1 init;"
        "trans 1 -> 1 on go; trans 1 -> 1 on go when false;";
    CHECK_THROWS_AS(build_fts(parse_model(text)), Error);
  }
}

TEST_CASE("print and reparse is stable") {
  ModelDocument doc = parse_model(read_file(vmctest::models_dir() + "/vending.fts"));
  std::string once = print_model(doc);
  ModelDocument again = parse_model(once);
  CHECK(print_model(again) == once);
  CHECK(fts_equivalent(build_fts(doc), build_fts(again)));
}

TEST_CASE("apply_invar matches subset projection") {
  ModelDocument doc = parse_model(read_file(vmctest::models_dir() + "/vending.fts"));
  Fts vm = build_fts(doc);
  SUBCASE("restricting to the cancel-free variants") {
    FeatExpr not_c = parse_feat_expr("!c");
    ModelDocument restricted = apply_invar(doc, not_c);
    CHECK(fts_equivalent(build_fts(restricted), project_subset(vm, not_c)));
    CHECK(build_fts(restricted).space.valid_configs().size() == 4);
  }
  SUBCASE("a true invariant is the identity up to dead-transition pruning") {
    ModelDocument same = apply_invar(doc, FeatExpr::t());
    CHECK(fts_equivalent(build_fts(same), vm));
  }
  SUBCASE("contradictions empty the space") {
    CHECK_THROWS_AS(apply_invar(doc, parse_feat_expr("c & !c")), Error);
  }
}

TEST_CASE("apply_abstraction_syntactic matches the semantic components") {
  ModelDocument doc = parse_model(read_file(vmctest::models_dir() + "/vending.fts"));
  Fts vm = build_fts(doc);
  SUBCASE("join / may") {
    ModelDocument abs = apply_abstraction_syntactic(doc, Abstraction::join(),
                                                    ComponentMode::May);
    CHECK(abs.features.empty());
    CHECK(abs.trans.size() == 13);
    for (const auto& tr : abs.trans) CHECK(tr.when.is_const_true());
    CHECK(fts_equivalent(build_fts(abs), may_component(abstract_fts(vm, Abstraction::join()))));
  }
  SUBCASE("join / must keeps the six mandatory transitions") {
    ModelDocument abs = apply_abstraction_syntactic(doc, Abstraction::join(),
                                                    ComponentMode::Must);
    CHECK(abs.trans.size() == 6);
    CHECK(fts_equivalent(build_fts(abs), must_component(abstract_fts(vm, Abstraction::join()))));
  }
  SUBCASE("figure 6 as a document pair") {
    ModelDocument sub = apply_invar(doc, parse_feat_expr("v & s"));
    Abstraction ig = Abstraction::ignore_set({"t", "f"});
    ModelDocument may_doc = apply_abstraction_syntactic(sub, ig, ComponentMode::May);
    ModelDocument must_doc = apply_abstraction_syntactic(sub, ig, ComponentMode::Must);
    CHECK(may_doc.features == std::vector<std::string>{"v", "s", "c"});
    CHECK(may_doc.trans.size() == 13);
    CHECK(must_doc.trans.size() == 9);
    Fts sub_fts = build_fts(sub);
    CHECK(fts_equivalent(build_fts(may_doc), may_component(abstract_fts(sub_fts, ig))));
    CHECK(fts_equivalent(build_fts(must_doc), must_component(abstract_fts(sub_fts, ig))));
  }
  SUBCASE("ignoring an unmentioned feature keeps the transitions") {
    ModelDocument wide = doc;
    wide.features.push_back("d");
    Abstraction ig = Abstraction::ignore(std::string("d"));
    for (ComponentMode mode : {ComponentMode::May, ComponentMode::Must}) {
      ModelDocument abs = apply_abstraction_syntactic(wide, ig, mode);
      CHECK(abs.trans.size() == 13);
      for (size_t i = 0; i < abs.trans.size(); ++i)
        CHECK(equiv(abs.trans[i].when, wide.trans[i].when));
    }
  }
}

namespace {

ModelDocument random_document(Rng& rng) {
  RandomFtsOptions opts;
  opts.max_states = 5;
  opts.max_transitions = 8;
  Fts f = random_fts(rng, opts);
  ModelDocument doc;
  doc.features = f.space.feature_names();
  doc.configs = f.space.constraint();
  for (size_t s = 0; s < f.core.states.size(); ++s) {
    ModelDocument::StateDecl st;
    st.name = f.core.states[s];
    st.init = f.core.is_initial(static_cast<int>(s));
    for (size_t p = 0; p < f.core.props.size(); ++p)
      if (f.core.has_label(static_cast<int>(s), static_cast<int>(p)))
        st.labels.push_back(f.core.props[p]);
    doc.states.push_back(std::move(st));
  }
  for (size_t i = 0; i < f.trans.size(); ++i) {
    ModelDocument::TransDecl tr;
    tr.src = f.core.states[static_cast<size_t>(f.trans[i].src)];
    tr.dst = f.core.states[static_cast<size_t>(f.trans[i].dst)];
    tr.action = f.core.actions[static_cast<size_t>(f.trans[i].action)];
    tr.when = f.presence[i];
    doc.trans.push_back(std::move(tr));
  }
  return doc;
}

}  // namespace

TEST_CASE("fuzzed documents: round trips and commutation") {
  Rng rng(2025);
  int rounds = 0;
  for (int i = 0; i < 60; ++i) {
    ModelDocument doc = random_document(rng);
    // Parser totality: printable documents reparse identically.
    ModelDocument back = parse_model(print_model(doc));
    CHECK(print_model(back) == print_model(doc));
    Fts fts = build_fts(doc);

    // apply_invar commutes with project_subset.
    FeatExpr e = random_feat_expr(rng, fts.space.features(), 2);
    if (satisfiable_in(e, fts.space)) {
      ModelDocument restricted = apply_invar(doc, e);
      CHECK(fts_equivalent(build_fts(restricted), project_subset(fts, e)));
    }

    // apply_abstraction_syntactic commutes with the components.
    Abstraction a = rng.chance(0.5)
                        ? Abstraction::join()
                        : Abstraction::ignore(rng.pick(fts.space.features()));
    Mfts m = abstract_fts(fts, a);
    CHECK(fts_equivalent(build_fts(apply_abstraction_syntactic(doc, a, ComponentMode::May)),
                         may_component(m)));
    CHECK(fts_equivalent(build_fts(apply_abstraction_syntactic(doc, a, ComponentMode::Must)),
                         must_component(m)));
    ++rounds;
  }
  CHECK(rounds == 60);
}
