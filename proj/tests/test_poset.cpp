#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "poset.hpp"
#include "testutil.hpp"

using namespace posskit;
namespace tu = posskit::testutil;

namespace {
Mask mask_of(const Poset& p, std::initializer_list<const char*> names) {
  Mask m = 0;
  for (const char* s : names) {
    int i = p.index_of(s);
    REQUIRE(i >= 0);
    m |= bit(i);
  }
  return m;
}
}  // namespace

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(Poset::from_pairs({}, {}), Error);
  CHECK_THROWS_AS(Poset::from_pairs({"a", "a"}, {}), Error);
  // a refines b and b refines a collapses antisymmetry
  CHECK_THROWS_AS(Poset::from_pairs({"a", "b"}, {{0, 1}, {1, 0}}), Error);
  CHECK_THROWS_AS(Poset::from_pairs({"a", "b", "c"}, {{0, 1}, {1, 2}, {2, 0}}), Error);
}

TEST_CASE("closure of the input pairs is reflexive and transitive") {
  auto p = Poset::from_pairs({"a", "b", "c"}, {{0, 1}, {1, 2}});
  CHECK(p.leq(0, 2));  // transitivity
  for (int x = 0; x < 3; ++x) CHECK(p.leq(x, x));
  CHECK_FALSE(p.leq(2, 0));
}

TEST_CASE("principal downsets on the depth-2 tree") {
  auto t = tu::t2();
  CHECK(t.down(t.index_of("0")) == mask_of(t, {"0", "00", "01"}));
  CHECK(t.down(t.index_of("eps")) == t.all());
  auto one = Poset::discrete(1);
  CHECK(one.down(0) == bit(0));
}

TEST_CASE("downset recognition") {
  auto t = tu::t2();
  CHECK(t.is_downset(mask_of(t, {"0", "00", "01"})));
  CHECK_FALSE(t.is_downset(mask_of(t, {"eps"})));
  CHECK(t.is_downset(0));
  for (const auto& p : tu::all_posets_upto_iso_upto(4)) CHECK(p.is_downset(0));
}

TEST_CASE("interior and closure") {
  auto t = tu::t2();
  Mask u = mask_of(t, {"eps", "0"});
  CHECK(t.interior(u) == 0);
  CHECK(t.closure(u) == mask_of(t, {"eps", "0"}));
  CHECK(t.interior(t.all()) == t.all());
  CHECK(t.closure(t.all()) == t.all());
  CHECK(t.closure(mask_of(t, {"00"})) == mask_of(t, {"eps", "0", "00"}));
}

TEST_CASE("regularize collapses sibling unions") {
  auto t = tu::t2();
  Mask u = t.down(t.index_of("00")) | t.down(t.index_of("01"));
  CHECK(t.regularize(u) == t.down(t.index_of("0")));
  CHECK(t.regularize(0) == 0);
  CHECK(t.regularize(t.all()) == t.all());
}

TEST_CASE("regular-open recognition") {
  auto t = tu::t2();
  CHECK_FALSE(t.is_regular_open(t.down(t.index_of("00")) | t.down(t.index_of("01"))));
  CHECK(t.is_regular_open(t.down(t.index_of("00")) | t.down(t.index_of("10"))));
  CHECK(t.is_regular_open(0));
  CHECK(t.is_regular_open(t.all()));
}

TEST_CASE("regular-open enumeration matches the definition-level oracle") {
  auto d = tu::d1();
  auto ro = d.regular_opens();
  std::vector<Mask> expect = {0, mask_of(d, {"a"}), mask_of(d, {"b"}), d.all()};
  std::sort(expect.begin(), expect.end());
  CHECK(ro == expect);

  auto one = Poset::discrete(1);
  CHECK(one.regular_opens() == std::vector<Mask>{0, 1});

  // frozen from the oracle: the depth-2 tree has worlds below everything,
  // so its regular opens biject with sets of leaves
  auto t = tu::t2();
  auto oracle = tu::oracle_regular_opens(t);
  CHECK(oracle.size() == 16);
  CHECK(t.regular_opens() == oracle);

  for (const auto& p : tu::all_posets_upto_iso_upto(4))
    CHECK(p.regular_opens() == tu::oracle_regular_opens(p));
  tu::Rng rng(31); // arbitrary fixed seed
  for (int i = 0; i < 50; ++i) {
    auto p = tu::random_poset(rng, 6);
    CHECK(p.regular_opens() == tu::oracle_regular_opens(p));
  }
}

TEST_CASE("enumeration cap fails loudly") {
  Caps caps;
  caps.poset_enum = 3;
  auto t = tu::t2();
  CHECK_THROWS_AS(t.regular_opens(caps), Error);
}

TEST_CASE("separativity") {
  CHECK(tu::t2().is_separative());
  CHECK_FALSE(Poset::chain(2).is_separative());
  CHECK(Poset::discrete(1).is_separative());
}

TEST_CASE("separative quotient") {
  auto q2 = Poset::chain(2).separative_quotient();
  CHECK(q2.poset.size() == 1);
  CHECK(q2.cls[0] == q2.cls[1]);

  auto q3 = Poset::chain(3).separative_quotient();
  CHECK(q3.poset.size() == 1);

  auto t = tu::t2();
  auto qt = t.separative_quotient();
  CHECK(qt.poset.size() == t.size());
  CHECK(qt.poset.is_separative());

  tu::Rng rng(32);
  for (int i = 0; i < 60; ++i) {
    auto p = tu::random_poset(rng, 6);
    auto q = p.separative_quotient();
    CHECK(q.poset.is_separative());
    // same number of propositions before and after
    CHECK(q.poset.regular_opens().size() == p.regular_opens().size());
  }
}

TEST_CASE("worlds") {
  auto t = tu::t2();
  CHECK(t.worlds() == mask_of(t, {"00", "01", "10", "11"}));
  CHECK(Poset::discrete(1).worlds() == bit(0));
  auto d = tu::d1();
  CHECK(d.worlds() == mask_of(d, {"a", "b"}));
}

TEST_CASE("regularize is a closure operator landing in regular opens") {
  tu::Rng rng(33);
  for (int i = 0; i < 200; ++i) {
    auto p = tu::random_poset(rng, 6);
    Mask u = tu::random_subset(rng, p.size());
    Mask d = 0;  // downset part of u
    for_each_bit(u, [&](int x) { d |= p.down(x); });
    Mask r = p.regularize(d);
    CHECK(subset(d, r));                       // inflationary on downsets
    CHECK(p.regularize(r) == r);               // idempotent
    CHECK(p.is_regular_open(r));
    Mask d2 = d & tu::random_subset(rng, p.size());
    Mask dd = 0;
    for_each_bit(d2, [&](int x) { dd |= p.down(x); });
    CHECK(subset(p.regularize(dd), r));        // monotone
  }
}

TEST_CASE("regular opens form a family closed under neg and meet with double-negation fixpoints") {
  tu::Rng rng(34);
  for (int i = 0; i < 60; ++i) {
    auto p = tu::random_poset(rng, 5);
    auto ro = p.regular_opens();
    for (Mask u : ro) {
      CHECK(p.ro_neg(p.ro_neg(u)) == u);
      CHECK(std::find(ro.begin(), ro.end(), p.ro_neg(u)) != ro.end());
      for (Mask v : ro) {
        CHECK(std::find(ro.begin(), ro.end(), u & v) != ro.end());
        CHECK(std::find(ro.begin(), ro.end(), p.ro_join(u, v)) != ro.end());
      }
    }
  }
}

TEST_CASE("posets whose elements sit over worlds have powerset-sized algebras") {
  for (const auto& p : tu::all_posets_upto_iso_upto(4)) {
    Mask w = p.worlds();
    bool covered = true;
    for (int x = 0; x < p.size(); ++x)
      if (!(p.down(x) & w)) covered = false;
    if (covered)  // finite posets always qualify; keep the guard for clarity
      CHECK(p.regular_opens().size() == (std::size_t{1} << popcount(w)));
  }
}

TEST_CASE("separative posets embed densely into their regular opens") {
  for (const auto& p : tu::all_posets_upto_iso_upto(4)) {
    if (!p.is_separative()) continue;
    auto ro = p.regular_opens();
    for (int x = 0; x < p.size(); ++x)
      for (int y = 0; y < p.size(); ++y)
        CHECK(p.leq(x, y) == subset(p.down(x), p.down(y)));
    for (Mask u : ro) {
      if (!u) continue;
      bool dense_witness = false;
      for (int x = 0; x < p.size() && !dense_witness; ++x)
        if (subset(p.down(x), u)) dense_witness = true;
      CHECK(dense_witness);
    }
  }
}

TEST_CASE("atomic/atomless split of finite posets has no atomless part") {
  auto [a1, c1] = Poset::discrete(1).atomic_atomless_parts();
  CHECK(a1.size() == 1);
  CHECK_FALSE(c1.has_value());
  for (const auto& p : tu::all_posets_upto_iso_upto(4)) {
    auto [a, c] = p.atomic_atomless_parts();
    CHECK_FALSE(c.has_value());
    CHECK(a.size() == popcount(p.worlds()));
    // product algebra reduces to the atomic factor
    CHECK(a.regular_opens().size() == p.regular_opens().size());
  }
}
