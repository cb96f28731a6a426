#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fomodel.hpp"
#include "fotestutil.hpp"
#include "testutil.hpp"

using namespace posskit;
namespace tu = posskit::testutil;

namespace {

// Two guises of one star: the top possibility leaves their identity open,
// one refinement settles it true, the other settles it false.
FOModel frege() {
  FOModel m;
  m.poset = Poset::from_pairs({"s", "s0", "s1"}, {{1, 0}, {2, 0}});
  m.guises = {"m", "e"};
  m.sig.add_func("c_m", 0);
  m.sig.add_func("c_e", 0);
  int n = 3;
  m.eq.assign(n, {1u, 2u});         // identity everywhere...
  m.eq[1] = {3u, 3u};               // ...except s0 merges them
  auto cls = [&](int s, int g) { return m.eq[s][g]; };
  m.funcs["c_m"].resize(n);
  m.funcs["c_e"].resize(n);
  for (int s = 0; s < n; ++s) {
    for (int b = 0; b < 2; ++b) {
      if ((cls(s, 0) >> b) & 1) m.funcs["c_m"][s].insert({b});
      if ((cls(s, 1) >> b) & 1) m.funcs["c_e"][s].insert({b});
    }
  }
  return m;
}

// a one-point model with total functions and plain equality
FOModel tarskian(int dsize) {
  FOModel m;
  m.poset = Poset::discrete(1);
  for (int i = 0; i < dsize; ++i) m.guises.push_back("g" + std::to_string(i));
  m.eq.assign(1, std::vector<MaskD>(dsize));
  for (int a = 0; a < dsize; ++a) m.eq[0][a] = MaskD{1} << a;
  return m;
}

}  // namespace

TEST_CASE("parsing against a signature") {
  Signature sig;
  sig.add_func("c_m", 0);
  sig.add_func("c_e", 0);
  sig.add_pred("P", 1);
  sig.add_pred("R", 2);
  sig.add_func("f", 1);

  auto f = parse_fo_formula("c_m = c_e", sig);
  CHECK(f == FOFormula::eq(Term::app("c_m", {}), Term::app("c_e", {})));
  auto g = parse_fo_formula("A x (P(x) -> E y R(x, f(y)))", sig);
  CHECK(g.kind() == FOFormula::Kind::forall);
  CHECK(g.free_vars().empty());
  auto h = parse_fo_formula("~(c_m = c_e)", sig);
  CHECK(h == FOFormula::neg(f));
  CHECK(parse_fo_formula("x = y", sig).free_vars() == std::set<std::string>{"x", "y"});
  CHECK_THROWS_AS(parse_fo_formula("P(x", sig), Error);
  CHECK_THROWS_AS(parse_fo_formula("R(x)", sig), Error);
  CHECK_THROWS_AS(parse_fo_formula("g(x) = x", sig), Error);
}

TEST_CASE("the two-guise model validates and realizes the identity goldens") {
  auto m = frege();
  CHECK(validate_fomodel(m).ok);
  Signature& sig = m.sig;
  auto eq = parse_fo_formula("c_m = c_e", sig);
  auto neq = parse_fo_formula("~(c_m = c_e)", sig);
  int s = m.poset.index_of("s");
  int s0 = m.poset.index_of("s0");
  CHECK_FALSE(fo_eval(m, s, {}, eq));
  CHECK_FALSE(fo_eval(m, s, {}, neq));
  CHECK(fo_eval(m, s0, {}, eq));

  // denotations: the merged class at s0, singletons elsewhere
  CHECK(denote(m, s0, {}, Term::app("c_m", {})) == 3u);
  CHECK(denote(m, s, {}, Term::app("c_m", {})) == 1u);
}

TEST_CASE("validation catches broken models") {
  auto m = frege();
  // break quasi-functionality: c_m maps to both guises at s where they differ
  m.funcs["c_m"][0].insert({1});
  auto res = validate_fomodel(m);
  CHECK_FALSE(res.ok);
  CHECK(res.violation.find("unequal") != std::string::npos);

  auto m2 = frege();
  // break persistence of equality: merge at the top only
  m2.eq[0] = {3u, 3u};
  m2.eq[1] = {1u, 2u};
  m2.funcs["c_m"][0] = {{0}, {1}};
  m2.funcs["c_e"][0] = {{0}, {1}};
  CHECK_FALSE(validate_fomodel(m2).ok);

  auto m3 = tarskian(2);
  m3.sig.add_func("c", 0);
  m3.funcs["c"].resize(1);  // never defined anywhere
  auto res3 = validate_fomodel(m3);
  CHECK_FALSE(res3.ok);
  CHECK(res3.violation.find("defined") != std::string::npos);
}

TEST_CASE("one-point models validate and everything is reflexively equal") {
  auto m = tarskian(2);
  m.sig.add_pred("P", 1);
  m.preds["P"].resize(1);
  m.preds["P"][0].insert({0});
  CHECK(validate_fomodel(m).ok);
  auto f = parse_fo_formula("A x (x = x)", m.sig);
  CHECK(fo_eval(m, 0, {}, f));
}

TEST_CASE("random valid models pass validation and their truth sets are regular open") {
  tu::Rng rng(81);
  int count = 0;
  while (count < 200) {
    auto m = tu::random_model(rng, 4, 3, count % 2, false);
    REQUIRE(validate_fomodel(m).ok);
    ++count;
    Assignment g = {{"x0", 0}, {"x1", count % m.dsize()}};
    for (int t = 0; t < 3; ++t) {
      auto f = tu::random_fo(rng, 3, 2);
      Mask truth = fo_truth_set(m, g, f);
      CHECK(m.poset.is_regular_open(truth));
      // negation clause produces the regular-open complement
      CHECK(fo_truth_set(m, g, FOFormula::neg(f)) == m.poset.ro_neg(truth));
    }
  }
}

TEST_CASE("universal truth sets are intersections over the domain") {
  tu::Rng rng(82);
  for (int t = 0; t < 40; ++t) {
    auto m = tu::random_model(rng, 3, 3, false, false);
    auto body = tu::random_fo(rng, 2, 1);
    Assignment g;
    Mask big = fo_truth_set(m, g, FOFormula::forall("x0", body));
    Mask meet = m.poset.all();
    for (int a = 0; a < m.dsize(); ++a) {
      Assignment ga = {{"x0", a}};
      meet &= fo_truth_set(m, ga, body);
    }
    CHECK(big == meet);
  }
}

TEST_CASE("derived connective clauses hold verbatim") {
  tu::Rng rng(83);
  for (int t = 0; t < 60; ++t) {
    auto m = tu::random_model(rng, 3, 2, false, false);
    Assignment g = {{"x0", 0}, {"x1", m.dsize() - 1}};
    auto a = tu::random_fo(rng, 2, 2);
    auto b = tu::random_fo(rng, 2, 2);
    for (int s = 0; s < m.poset.size(); ++s) {
      // or: densely a refinement satisfying one disjunct
      bool lhs = fo_eval(m, s, g, FOFormula::disj(a, b));
      bool rhs = true;
      for_each_bit(m.poset.down(s), [&](int sp) {
        bool found = false;
        for_each_bit(m.poset.down(sp), [&](int spp) {
          if (fo_eval(m, spp, g, a) || fo_eval(m, spp, g, b)) found = true;
        });
        if (!found) rhs = false;
      });
      CHECK(lhs == rhs);
      // implication: every refinement passing a passes b
      bool il = fo_eval(m, s, g, FOFormula::impl(a, b));
      bool ir = true;
      for_each_bit(m.poset.down(s), [&](int sp) {
        if (fo_eval(m, sp, g, a) && !fo_eval(m, sp, g, b)) ir = false;
      });
      CHECK(il == ir);
      // existential: densely a witness
      bool el = fo_eval(m, s, g, FOFormula::exists("x0", a));
      bool er = true;
      for_each_bit(m.poset.down(s), [&](int sp) {
        bool found = false;
        for_each_bit(m.poset.down(sp), [&](int spp) {
          for (int w = 0; w < m.dsize() && !found; ++w) {
            Assignment gw = g;
            gw["x0"] = w;
            if (fo_eval(m, spp, gw, a)) found = true;
          }
        });
        if (!found) er = false;
      });
      CHECK(el == er);
    }
  }
}

TEST_CASE("one-point total models agree with the classical evaluator") {
  tu::Rng rng(84);
  for (int t = 0; t < 100; ++t) {
    auto m = tu::random_model(rng, 1, 3, false, false);
    REQUIRE(m.poset.size() == 1);
    tu::Tarski oracle{&m};
    Assignment g = {{"x0", 0}, {"x1", m.dsize() - 1}};
    auto f = tu::random_fo(rng, 3, 2);
    Assignment g2 = g;
    CHECK(fo_eval(m, 0, g, f) == oracle.eval(g2, f));
  }
}

TEST_CASE("denotations are equality classes or empty, and persist") {
  tu::Rng rng(90);
  for (int t = 0; t < 60; ++t) {
    auto m = tu::random_model(rng, 4, 3, false, false);
    Assignment g = {{"x0", 0}};
    for (const Term& term : {Term::var("x0"), Term::app("c", {}), Term::app("f", {Term::var("x0")}),
                             Term::app("f", {Term::app("c", {})})}) {
      for (int s = 0; s < m.poset.size(); ++s) {
        MaskD den = denote(m, s, g, term);
        if (den) {
          // a single equality class
          int rep = -1;
          for (int a = 0; a < m.dsize() && rep < 0; ++a)
            if ((den >> a) & 1) rep = a;
          CHECK(den == m.eq[s][rep]);
        }
        // settled denotations persist to refinements
        for_each_bit(m.poset.down(s), [&](int sp) {
          CHECK((den & ~denote(m, sp, g, term)) == 0);
        });
        // and some refinement settles one
        bool eventually = false;
        for_each_bit(m.poset.down(s), [&](int sp) {
          if (denote(m, sp, g, term)) eventually = true;
        });
        CHECK(eventually);
      }
    }
  }
}

TEST_CASE("term substitution matches reassignment") {
  tu::Rng rng(85);
  Signature sig;
  for (int t = 0; t < 60; ++t) {
    auto m = tu::random_model(rng, 3, 3, false, false);
    Assignment g = {{"x0", 0}, {"x1", 1 % m.dsize()}};
    Term u = Term::app("f", {Term::var("x0")});
    Term tt = t % 2 ? Term::app("c", {}) : Term::var("x1");
    for (int s = 0; s < m.poset.size(); ++s) {
      MaskD tden = denote(m, s, g, tt);
      for (int a = 0; a < m.dsize(); ++a) {
        if (!((tden >> a) & 1)) continue;
        Assignment ga = g;
        ga["x0"] = a;
        CHECK(denote(m, s, g, subst_term(u, "x0", tt)) == denote(m, s, ga, u));
      }
    }
  }
}

TEST_CASE("substitution equivalence for formulas") {
  tu::Rng rng(86);
  int done = 0;
  while (done < 80) {
    auto m = tu::random_model(rng, 3, 3, false, false);
    auto f = tu::random_fo(rng, 2, 2);
    Term tt = done % 2 ? Term::app("f", {Term::var("x1")}) : Term::app("c", {});
    if (!substitutable(f, "x0", tt)) continue;
    ++done;
    Assignment g = {{"x0", 0}, {"x1", done % m.dsize()}};
    FOFormula sub = subst_formula(f, "x0", tt);
    for (int s = 0; s < m.poset.size(); ++s) {
      bool lhs = fo_eval(m, s, g, sub);
      bool rhs = true;
      for_each_bit(m.poset.down(s), [&](int sp) {
        MaskD den = denote(m, sp, g, tt);
        for (int a = 0; a < m.dsize(); ++a) {
          if (!((den >> a) & 1)) continue;
          Assignment ga = g;
          ga["x0"] = a;
          if (!fo_eval(m, sp, ga, f)) rhs = false;
        }
      });
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("axiom spot checks force everywhere") {
  tu::Rng rng(87);
  for (int t = 0; t < 40; ++t) {
    auto m = tu::random_model(rng, 3, 3, false, false);
    Signature& sig = m.sig;
    std::vector<FOFormula> axioms = {
        parse_fo_formula("P(x) -> (R(x, y) -> P(x))", sig),
        parse_fo_formula("(P(x) -> (R(x, y) -> P(c))) -> ((P(x) -> R(x, y)) -> (P(x) -> P(c)))",
                         sig),
        parse_fo_formula("(~P(x) -> ~P(y)) -> (P(y) -> P(x))", sig),
        parse_fo_formula("A x (P(x) -> R(x, x)) -> (A x P(x) -> A x R(x, x))", sig),
        parse_fo_formula("A x P(x) -> P(c)", sig),
        parse_fo_formula("P(c) -> A x P(c)", sig),
        parse_fo_formula("A x (x = x)", sig),
    };
    Assignment g = {{"x", 0}, {"y", m.dsize() - 1}};
    for (const auto& ax : axioms)
      CHECK(fo_truth_set(m, g, ax) == m.poset.all());
  }
}

TEST_CASE("generated submodels preserve the theory at the generator") {
  auto m = frege();
  int s0 = m.poset.index_of("s0");
  auto sub = generated_submodel(m, s0);
  CHECK(sub.poset.size() == 1);
  CHECK(validate_fomodel(sub).ok);
  auto eq = parse_fo_formula("c_m = c_e", m.sig);
  CHECK(fo_eval(sub, 0, {}, eq) == fo_eval(m, s0, {}, eq));

  CHECK(generated_submodel(m, m.poset.index_of("s")).poset.size() == 3);

  tu::Rng rng(88);
  for (int t = 0; t < 40; ++t) {
    auto rm = tu::random_model(rng, 4, 3, t % 2, false);
    std::uniform_int_distribution<int> sd(0, rm.poset.size() - 1);
    int s = sd(rng);
    auto gen = generated_submodel(rm, s);
    CHECK(validate_fomodel(gen).ok);
    int s_new = gen.poset.index_of(rm.poset.name(s));
    Assignment g = {{"x0", 0}, {"x1", rm.dsize() - 1}};
    for (int k = 0; k < 4; ++k) {
      auto f = tu::random_fo(rng, 3, 2);
      CHECK(fo_eval(rm, s, g, f) == fo_eval(gen, s_new, g, f));
    }
  }
}

TEST_CASE("modal clause quantifies over accessible possibilities") {
  tu::Rng rng(91);
  int done = 0;
  while (done < 30) {
    auto m = tu::random_model(rng, 4, 2, false, true);
    if (m.rel_indices.empty()) continue;
    REQUIRE(validate_fomodel(m).ok);
    ++done;
    auto body = tu::random_fo(rng, 2, 1);
    Assignment g = {{"x0", 0}};
    FOFormula boxed = FOFormula::box(m.rel_indices[0], body);
    for (int s = 0; s < m.poset.size(); ++s) {
      bool all = true;
      for_each_bit(m.rels[0][s], [&](int sp) {
        if (!fo_eval(m, sp, g, body)) all = false;
      });
      CHECK(fo_eval(m, s, g, boxed) == all);
    }
    // boxed truth sets stay regular open
    CHECK(m.poset.is_regular_open(fo_truth_set(m, g, boxed)));
  }
}

TEST_CASE("fact/world implication on world frames") {
  // two worlds, universal relation, constant existence domain
  tu::Rng rng(89);
  for (int worlds = 2; worlds <= 3; ++worlds) {
    FOModel m;
    m.poset = Poset::discrete(worlds);
    m.guises = {"a", "b"};
    m.eq.assign(worlds, {1u, 2u});
    m.rel_indices = {"0"};
    m.rels = {std::vector<Mask>(worlds, full_mask(worlds))};
    std::vector<MaskD> dom(worlds, 3u);
    m.exists_at = dom;
    REQUIRE(validate_fomodel(m).ok);
    CHECK(fact_world_check(m));

    // varying domains
    FOModel v = m;
    std::vector<MaskD> vd(worlds, 3u);
    vd[0] = 1u;
    v.exists_at = vd;
    CHECK(validate_fomodel(v).ok);
    CHECK(fact_world_check(v));
  }
}
