#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frames.hpp"
#include "testutil.hpp"

using namespace posskit;
namespace tu = posskit::testutil;

namespace {

// All admissible families over a poset: subsets of the regular opens that are
// nonempty and closed under negation and intersection.
std::vector<Frame> all_frames(const Poset& p) {
  auto ro = p.regular_opens();
  std::vector<Frame> out;
  for (Mask pick = 1; pick < (Mask{1} << ro.size()); ++pick) {
    std::vector<Mask> fam;
    for_each_bit(pick, [&](int i) { fam.push_back(ro[i]); });
    Frame f = Frame::with_admissible(p, fam);
    if (validate_frame(f).ok) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

TEST_CASE("frame validation") {
  auto t = tu::t2();
  CHECK(validate_frame(Frame::full(t)).ok);

  Mask bad = t.down(t.index_of("00")) | t.down(t.index_of("01"));
  auto not_ro = validate_frame(Frame::with_admissible(t, {bad}));
  CHECK_FALSE(not_ro.ok);
  CHECK(not_ro.violation.find("not regular open") != std::string::npos);

  auto not_neg = validate_frame(Frame::with_admissible(t, {0, bit(t.index_of("00"))}));
  CHECK_FALSE(not_neg.ok);
  CHECK(not_neg.violation.find("negation") != std::string::npos);

  CHECK_FALSE(validate_frame(Frame{t, {}}).ok);
}

TEST_CASE("frame algebra") {
  auto d = tu::d1();
  CHECK(is_isomorphic(frame_algebra(Frame::full(d)), BoolAlg::powerset(2)));
  Frame trivial = Frame::with_admissible(d, {0, d.all()});
  CHECK(frame_algebra(trivial).size() == 2);
  auto g = general_filter_frame(BoolAlg::powerset(2));
  CHECK(is_isomorphic(frame_algebra(g), BoolAlg::powerset(2)));
}

TEST_CASE("separation, filter realization, filter descriptiveness") {
  auto g = general_filter_frame(BoolAlg::powerset(2));
  CHECK(satisfies_separation(g));
  CHECK(satisfies_filter_realization(g));
  CHECK(is_filter_descriptive(g));

  Frame chain = Frame::full(Poset::chain(2));
  CHECK_FALSE(satisfies_separation(chain));

  Frame pt = Frame::full(Poset::discrete(1));
  CHECK(satisfies_separation(pt));
  CHECK(satisfies_filter_realization(pt));
  CHECK(is_filter_descriptive(pt));
}

TEST_CASE("filter frame and general filter frame of the four-element algebra") {
  auto b4 = BoolAlg::powerset(2);
  Frame ff = filter_frame(b4);
  CHECK(ff.poset.size() == 3);
  CHECK(frame_isomorphism(Frame::full(tu::d1()), ff).has_value());
  Frame gf = general_filter_frame(b4);
  CHECK(gf.admissible.size() == 4);
  CHECK(dual_roundtrip(gf));
}

TEST_CASE("p-morphisms") {
  auto t = tu::t2();
  Frame ft = Frame::full(t);
  std::vector<int> id(t.size());
  for (int i = 0; i < t.size(); ++i) id[i] = i;
  CHECK(is_p_morphism({&ft, &ft, id}).ok);

  Frame pt = Frame::full(Poset::discrete(1));
  std::vector<int> constant(t.size(), 0);
  CHECK(is_p_morphism({&ft, &pt, constant}).ok);

  Frame chain = Frame::full(Poset::chain(2));
  Frame anti = Frame::full(Poset::discrete(2));
  std::vector<int> collapse = {0, 1};
  auto r = is_p_morphism({&chain, &anti, collapse});
  CHECK_FALSE(r.ok);
  CHECK(r.violation.find("order-forth") != std::string::npos);
}

TEST_CASE("duality equivalence over all frames on posets of size at most 3") {
  for (const auto& p : tu::all_posets_upto_iso_upto(3)) {
    for (const auto& f : all_frames(p)) {
      bool lhs = dual_roundtrip(f);
      bool rhs = satisfies_separation(f) && satisfies_filter_realization(f);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("duality equivalence sampled at sizes 4 and 5") {
  tu::Rng rng(41);
  int tried = 0;
  while (tried < 60) {
    auto p = tu::random_poset(rng, 5);
    if (p.size() < 4) continue;
    ++tried;
    auto ro = p.regular_opens();
    // sample a family: closure of a few random regular opens under neg/meet
    std::vector<Mask> fam = {0, p.all()};
    std::uniform_int_distribution<std::size_t> pick(0, ro.size() - 1);
    fam.push_back(ro[pick(rng)]);
    fam.push_back(ro[pick(rng)]);
    for (bool grew = true; grew;) {
      grew = false;
      std::vector<Mask> next = fam;
      for (Mask u : fam) {
        next.push_back(p.ro_neg(u));
        for (Mask v : fam) next.push_back(u & v);
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      if (next.size() != fam.size()) grew = true;
      fam = std::move(next);
    }
    Frame f = Frame::with_admissible(p, fam);
    REQUIRE(validate_frame(f).ok);
    CHECK(dual_roundtrip(f) == (satisfies_separation(f) && satisfies_filter_realization(f)));
  }
}

TEST_CASE("separation forces a separative underlying poset") {
  for (const auto& p : tu::all_posets_upto_iso_upto(3))
    for (const auto& f : all_frames(p))
      if (satisfies_separation(f)) CHECK(f.poset.is_separative());
}

TEST_CASE("admissible covers of the space have finite subcovers") {
  for (const auto& p : tu::all_posets_upto_iso_upto(3))
    for (const auto& f : all_frames(p))
      if (satisfies_filter_realization(f)) CHECK(admissible_covers_have_finite_subcover(f));
}

TEST_CASE("dual roundtrip fails on the non-separative chain") {
  CHECK_FALSE(dual_roundtrip(Frame::full(Poset::chain(2))));
  CHECK(dual_roundtrip(Frame::full(Poset::discrete(1))));
}

TEST_CASE("isomorphism search cap") {
  Caps caps;
  caps.iso_search = 2;
  Frame f = Frame::full(tu::d1());
  CHECK_THROWS_AS(frame_isomorphism(f, f, caps), Error);
}
