#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "balg.hpp"
#include "heyting.hpp"
#include "modal.hpp"
#include "testutil.hpp"

using namespace posskit;
namespace tu = posskit::testutil;

namespace {

Lattice chain_lattice(int n) {
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) le[i][j] = true;
  return Lattice::from_order(default_names(n), le);
}

// 0 below three incomparable middles below 1
Lattice m3() {
  int n = 5;
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) le[i][i] = true;
  for (int m = 1; m <= 3; ++m) {
    le[0][m] = true;
    le[m][4] = true;
  }
  le[0][4] = true;
  return Lattice::from_order({"bot", "x", "y", "z", "top"}, le);
}

// all lattices up to isomorphism on n elements, via topologically labeled
// order scans deduplicated by canonical form
std::vector<Lattice> all_lattices_upto_iso(int n) {
  std::vector<Lattice> out;
  for (const auto& p : tu::all_posets_upto_iso(n)) {
    bool lattice_ok = true;
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
    for (int i = 0; i < n && lattice_ok; ++i)
      for (int j = 0; j < n; ++j) le[i][j] = p.leq(i, j);
    try {
      out.push_back(Lattice::from_order(default_names(n), le));
    } catch (const Error&) {
      // not a lattice
    }
  }
  return out;
}

std::map<std::string, Mask> val1(const char* v, Mask m) { return {{v, m}}; }

}  // namespace

TEST_CASE("downset algebra basics") {
  DownsetAlgebra d1(tu::d1());
  CHECK(d1.size() == 5);
  DownsetAlgebra one(Poset::discrete(1));
  CHECK(one.size() == 2);
  DownsetAlgebra two(Poset::chain(2));
  CHECK(two.size() == 3);

  // residuation on random posets
  tu::Rng rng(71);
  for (int t = 0; t < 40; ++t) {
    auto p = tu::random_poset(rng, 5);
    DownsetAlgebra h(p);
    for (Mask a : h.downsets())
      for (Mask b : h.downsets()) {
        Mask ab = h.impl(a, b);
        CHECK(h.index_of(ab) >= 0);  // implication is a downset
        for (Mask x : h.downsets()) CHECK(subset(a & x, b) == subset(x, ab));
      }
  }
}

TEST_CASE("double negation is a nucleus; closure is not") {
  DownsetAlgebra h(tu::d1());
  auto nn = make_nucleus(NucleusKind::notnot, h);
  CHECK(check_nucleus(h, nn).ok);
  CHECK(nn.dense(h));
  CHECK(check_nucleus(h, identity_nucleus(h)).ok);

  // downward-closed closure: increasing and idempotent here, not multiplicative
  Nucleus cl;
  cl.label = "closure";
  cl.table.resize(h.size());
  for (int a = 0; a < h.size(); ++a) {
    Mask up = 0;
    for (int x = 0; x < h.poset().size(); ++x)
      if (h.poset().down(x) & h.set(a)) up |= bit(x);
    Mask down = 0;
    for_each_bit(up, [&](int x) { down |= h.poset().down(x); });
    cl.table[a] = h.index_of(down);
  }
  auto res = check_nucleus(h, cl);
  CHECK_FALSE(res.ok);
  CHECK(res.violation.find("multiplicative") != std::string::npos);
}

TEST_CASE("nucleus construction on the two-refinement fork") {
  DownsetAlgebra h(tu::d1());
  const Poset& p = h.poset();
  Mask ab = bit(p.index_of("a")) | bit(p.index_of("b"));
  auto nn = make_nucleus(NucleusKind::notnot, h);
  CHECK(h.set(nn.table[h.index_of(ab)]) == p.all());

  auto chains = maximal_chains(p);
  CHECK(chains.size() == 2);
  auto beth = make_nucleus(NucleusKind::beth, h);
  CHECK(check_nucleus(h, beth).ok);
  CHECK(h.set(beth.table[h.index_of(bit(p.index_of("a")))]) == bit(p.index_of("a")));
  CHECK(h.set(beth.table[h.index_of(ab)]) == p.all());

  std::vector<Mask> ident(p.size());
  for (int x = 0; x < p.size(); ++x) ident[x] = bit(x);
  auto fm = make_nucleus(NucleusKind::fm, h, &ident);
  CHECK(check_nucleus(h, fm).ok);
  for (int a = 0; a < h.size(); ++a) CHECK(fm.table[a] == a);
}

TEST_CASE("secondary orders must be preorders under refinement") {
  DownsetAlgebra h(Poset::chain(2));
  std::vector<Mask> not_reflexive = {0, bit(1)};
  CHECK_THROWS_AS(make_nucleus(NucleusKind::fm, h, &not_reflexive), Error);
  std::vector<Mask> not_sub = {bit(0), bit(0) | bit(1)};  // reaches outside the downset of e1
  CHECK_THROWS_AS(make_nucleus(NucleusKind::fm, h, &not_sub), Error);
}

TEST_CASE("nucleus laws hold for the three constructors over all small posets") {
  tu::Rng rng(72);
  for (const auto& p : tu::all_posets_upto_iso_upto(5)) {
    DownsetAlgebra h(p);
    CHECK(check_nucleus(h, make_nucleus(NucleusKind::notnot, h)).ok);
    CHECK(check_nucleus(h, make_nucleus(NucleusKind::beth, h)).ok);
    // a few random secondary preorders contained in the refinement order
    for (int t = 0; t < 3; ++t) {
      std::vector<Mask> sec(p.size());
      for (int x = 0; x < p.size(); ++x) sec[x] = bit(x) | (tu::random_subset(rng, p.size()) & p.down(x));
      // transitive closure within the refinement order
      for (bool grew = true; grew;) {
        grew = false;
        for (int x = 0; x < p.size(); ++x) {
          Mask acc = sec[x];
          for_each_bit(sec[x], [&](int y) { acc |= sec[y]; });
          if (acc != sec[x]) {
            sec[x] = acc;
            grew = true;
          }
        }
      }
      CHECK(check_nucleus(h, make_nucleus(NucleusKind::fm, h, &sec)).ok);
    }
  }
}

TEST_CASE("fixpoint algebras") {
  DownsetAlgebra h(tu::d1());
  auto nn = make_nucleus(NucleusKind::notnot, h);
  auto fix = fixpoint_algebra(h, nn);
  CHECK(fix.carrier.size() == 4);
  CHECK(validate_heyting(fix).ok);
  CHECK(heyting_is_boolean(fix));
  // identical to the regular opens with matching operations
  auto ro = ro_algebra(h.poset());
  CHECK(fix.carrier == ro.sets());
  for (int i = 0; i < ro.size(); ++i)
    for (int j = 0; j < ro.size(); ++j) {
      CHECK(fix.join(ro.sets()[i], ro.sets()[j]) == ro.sets()[ro.join(i, j)]);
      CHECK(fix.meet(ro.sets()[i], ro.sets()[j]) == ro.sets()[ro.meet(i, j)]);
    }

  auto fix_id = fixpoint_algebra(h, identity_nucleus(h));
  CHECK(fix_id.carrier.size() == static_cast<std::size_t>(h.size()));

  auto beth = make_nucleus(NucleusKind::beth, h);
  CHECK(fixpoint_algebra(h, beth).carrier == fix.carrier);

  Nucleus cl;
  cl.table.resize(h.size());
  for (int a = 0; a < h.size(); ++a) {
    Mask up = 0;
    for (int x = 0; x < h.poset().size(); ++x)
      if (h.poset().down(x) & h.set(a)) up |= bit(x);
    Mask down = 0;
    for_each_bit(up, [&](int x) { down |= h.poset().down(x); });
    cl.table[a] = h.index_of(down);
  }
  CHECK_THROWS_AS(fixpoint_algebra(h, cl), Error);
}

TEST_CASE("double-negation fixpoints recover the regular opens on all small posets") {
  for (const auto& p : tu::all_posets_upto_iso_upto(5)) {
    DownsetAlgebra h(p);
    auto fix = fixpoint_algebra(h, make_nucleus(NucleusKind::notnot, h));
    CHECK(validate_heyting(fix).ok);
    CHECK(heyting_is_boolean(fix));
    auto ro = ro_algebra(p);
    CHECK(fix.carrier == ro.sets());
  }
}

TEST_CASE("fixpoints of a nucleus keep the arbitrary-join law") {
  tu::Rng rng(73);
  for (int t = 0; t < 20; ++t) {
    auto p = tu::random_poset(rng, 4);
    DownsetAlgebra h(p);
    for (auto kind : {NucleusKind::notnot, NucleusKind::beth}) {
      auto j = make_nucleus(kind, h);
      auto fix = fixpoint_algebra(h, j);
      auto lat = heyting_as_lattice(fix);
      CHECK(is_locale(lat));
    }
  }
}

TEST_CASE("finite distributive lattices satisfy the arbitrary-join law, the diamond does not") {
  for (int n = 1; n <= 5; ++n)
    for (const auto& l : all_lattices_upto_iso(n))
      if (l.is_distributive()) CHECK(is_locale(l));
  CHECK_FALSE(is_locale(m3()));
  CHECK_FALSE(m3().is_distributive());
}

TEST_CASE("join primes of the downset lattice of the fork") {
  DownsetAlgebra h(tu::d1());
  auto lat = Lattice::from_sets(default_names(h.size()), h.downsets());
  auto primes = completely_join_primes(lat);
  // the principal downsets: {a}, {b}, and the whole space under the top
  CHECK(primes.size() == 3);
  CHECK(join_prime_generated(lat));
}

TEST_CASE("downset lattices are exactly the join-prime-generated locales") {
  for (int n = 2; n <= 5; ++n)
    for (const auto& l : all_lattices_upto_iso(n)) {
      bool qualifies = false;
      try {
        qualifies = is_locale(l) && join_prime_generated(l);
      } catch (const Error&) {
        continue;
      }
      bool representable = false;
      for (const auto& p : tu::all_posets_upto_iso_upto(4)) {
        DownsetAlgebra h(p);
        if (h.size() != l.size()) continue;
        auto dl = Lattice::from_sets(default_names(h.size()), h.downsets());
        if (lattice_isomorphism(dl, l).has_value()) representable = true;
        if (representable) break;
      }
      CHECK(qualifies == representable);
    }
}

TEST_CASE("lattice representation round-trips") {
  // three-element chain: carrier minus bottom is a two-chain
  auto c3 = chain_lattice(3);
  auto rep = lattice_represent(c3);
  CHECK(rep.poset.size() == 2);
  auto fix = fixpoint_algebra(rep.downsets, rep.nucleus);
  CHECK(fix.carrier.size() == 3);
  CHECK(rep.nucleus.dense(rep.downsets));
  CHECK(lattice_isomorphism(heyting_as_lattice(fix), c3).has_value());

  // four-element diamond: join of the two middles is the top
  auto b4 = BoolAlg::powerset(2);
  std::vector<std::vector<bool>> le(4, std::vector<bool>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) le[i][j] = b4.le(i, j);
  auto lb4 = Lattice::from_order(default_names(4), le);
  auto rep4 = lattice_represent(lb4);
  auto fix4 = fixpoint_algebra(rep4.downsets, rep4.nucleus);
  CHECK(lattice_isomorphism(heyting_as_lattice(fix4), lb4).has_value());

  auto c2 = chain_lattice(2);
  auto rep2 = lattice_represent(c2);
  CHECK(rep2.poset.size() == 1);
  CHECK(fixpoint_algebra(rep2.downsets, rep2.nucleus).carrier.size() == 2);

  CHECK_THROWS_AS(lattice_represent(m3()), Error);
}

TEST_CASE("representation round-trips for every small distributive lattice") {
  for (int n = 2; n <= 6; ++n)
    for (const auto& l : all_lattices_upto_iso(n)) {
      if (!l.is_distributive()) continue;
      auto rep = lattice_represent(l);
      CHECK(rep.nucleus.dense(rep.downsets));
      CHECK(check_nucleus(rep.downsets, rep.nucleus).ok);
      auto fix = fixpoint_algebra(rep.downsets, rep.nucleus);
      CHECK(lattice_isomorphism(heyting_as_lattice(fix), l).has_value());
    }
}

TEST_CASE("forcing over downsets with a nucleus") {
  // the seven-point question model with double negation reproduces forcing
  auto p = Poset::from_pairs({"x", "y", "m2", "m3", "lp", "lq", "lr"},
                             {{1, 0}, {2, 0}, {3, 0}, {4, 1}, {5, 1}, {4, 2}, {6, 2}, {5, 3}, {6, 3}});
  DownsetAlgebra h(p);
  auto nn = make_nucleus(NucleusKind::notnot, h);
  std::map<std::string, Mask> val = {{"p", bit(p.index_of("lp"))},
                                     {"q", bit(p.index_of("lq"))},
                                     {"r", bit(p.index_of("lr"))}};
  int x = p.index_of("x");
  int y = p.index_of("y");
  CHECK(nuclear_eval(h, nn, val, x, parse_formula("(p|q)|r")));
  CHECK_FALSE(nuclear_eval(h, nn, val, x, parse_formula("(p|q) ?? r")));
  CHECK(nuclear_eval(h, nn, val, y, parse_formula("(p|q) ?? r")));
}

TEST_CASE("identity nucleus gives standard intuitionistic forcing") {
  auto p = Poset::chain(2);  // e1 refines e0
  DownsetAlgebra h(p);
  auto id = identity_nucleus(h);
  // a proper nonempty downset refutes excluded middle at the top
  std::map<std::string, Mask> val = {{"p", bit(1)}};
  CHECK_FALSE(nuclear_eval(h, id, val, 0, parse_formula("p | ~p")));
  CHECK(nuclear_eval(h, id, val, 1, parse_formula("p | ~p")));
  // but with double negation the law holds everywhere, e.g. over the fork
  DownsetAlgebra hf(tu::d1());
  auto nn = make_nucleus(NucleusKind::notnot, hf);
  std::map<std::string, Mask> vf = {{"p", bit(hf.poset().index_of("a"))}};
  CHECK(nuclear_eval(hf, nn, vf, hf.poset().index_of("1"), parse_formula("p | ~p")));
}

TEST_CASE("falsum is nowhere forced under dense nuclei") {
  tu::Rng rng(74);
  for (int t = 0; t < 20; ++t) {
    auto p = tu::random_poset(rng, 4);
    DownsetAlgebra h(p);
    for (auto kind : {NucleusKind::notnot, NucleusKind::beth}) {
      auto j = make_nucleus(kind, h);
      if (!j.dense(h)) continue;
      CHECK(nuclear_eval_set(h, j, {}, parse_formula("_|_")) == 0);
    }
  }
}

TEST_CASE("nuclear forcing rejects non-fixpoint valuations") {
  DownsetAlgebra h(tu::d1());
  auto nn = make_nucleus(NucleusKind::notnot, h);
  Mask ab = bit(0) | bit(1);  // not a double-negation fixpoint
  CHECK_THROWS_AS(nuclear_eval(h, nn, val1("p", ab), 0, parse_formula("p")), Error);
}

TEST_CASE("question-free values are fixpoints; all values are downsets") {
  tu::Rng rng(75);
  std::vector<std::string> shapes = {"p & q", "p | q", "p -> q", "~p", "(p -> q) | q",
                                     "p ?? q", "(p | q) ?? p"};
  for (int t = 0; t < 60; ++t) {
    auto p = tu::random_poset(rng, 4);
    DownsetAlgebra h(p);
    auto kind = t % 2 ? NucleusKind::notnot : NucleusKind::beth;
    auto j = make_nucleus(kind, h);
    auto fix = fixpoint_algebra(h, j);
    std::uniform_int_distribution<std::size_t> pick(0, fix.carrier.size() - 1);
    std::map<std::string, Mask> val = {{"p", fix.carrier[pick(rng)]},
                                       {"q", fix.carrier[pick(rng)]}};
    for (const auto& s : shapes) {
      Formula f = parse_formula(s);
      Mask v = nuclear_eval_set(h, j, val, f);
      CHECK(h.index_of(v) >= 0);  // always a downset
      bool has_question = s.find("??") != std::string::npos;
      if (!has_question) CHECK(h.set(j.table[h.index_of(v)]) == v);
    }
  }
}

TEST_CASE("question-free forcing under double negation matches the classical evaluator") {
  tu::Rng rng(76);
  std::vector<std::string> shapes = {"p & q", "p | q", "p -> q", "~(p & ~q)", "(p -> q) -> q"};
  for (int t = 0; t < 60; ++t) {
    auto p = tu::random_poset(rng, 4);
    DownsetAlgebra h(p);
    auto nn = make_nucleus(NucleusKind::notnot, h);
    auto ro = p.regular_opens();
    std::uniform_int_distribution<std::size_t> pick(0, ro.size() - 1);
    std::map<std::string, Mask> val = {{"p", ro[pick(rng)]}, {"q", ro[pick(rng)]}};
    ModalFrame mf = ModalFrame::universal(Frame::full(p));
    Model m{&mf, val};
    for (const auto& s : shapes) {
      Formula f = parse_formula(s);
      CHECK(nuclear_eval_set(h, nn, val, f) == eval_set(m, f));
    }
  }
}
