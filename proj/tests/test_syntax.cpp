#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "syntax.hpp"

using namespace posskit;
using K = Formula::Kind;

namespace {

// Random formula trees for round-trip properties.
Formula random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> kd(0, depth <= 0 ? 1 : 11);
  std::uniform_int_distribution<int> vd(0, 2);
  std::string v = std::string(1, static_cast<char>('p' + vd(rng)));
  switch (kd(rng)) {
    case 0:
      return Formula::var(v);
    case 1:
      return Formula::falsum();
    case 2:
      return Formula::neg(random_formula(rng, depth - 1));
    case 3:
      return Formula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 4:
      return Formula::disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 5:
      return Formula::impl(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 6:
      return Formula::iff(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 7:
      return Formula::box(vd(rng) ? "f" : "0", random_formula(rng, depth - 1));
    case 8:
      return Formula::diamond(vd(rng) ? "g" : "0", random_formula(rng, depth - 1));
    case 9:
      return Formula::forall_p(v, random_formula(rng, depth - 1));
    case 10:
      return Formula::exists_p(v, random_formula(rng, depth - 1));
    default:
      return Formula::inq_or(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("parsing the basic shapes") {
  Formula f = parse_formula("[]f s -> s");
  CHECK(f == Formula::impl(Formula::box("f", Formula::var("s")), Formula::var("s")));

  Formula w = parse_formula("E q (q & A p (p -> [] (q -> p)))");
  Formula expect = Formula::exists_p(
      "q", Formula::conj(Formula::var("q"),
                         Formula::forall_p(
                             "p", Formula::impl(Formula::var("p"),
                                                Formula::box("0", Formula::impl(Formula::var("q"),
                                                                                Formula::var("p")))))));
  CHECK(w == expect);

  Formula q = parse_formula("(p | q) ?? r");
  CHECK(q == Formula::inq_or(Formula::disj(Formula::var("p"), Formula::var("q")),
                             Formula::var("r")));
}

TEST_CASE("modal index disambiguation") {
  CHECK(parse_formula("[]f s") == Formula::box("f", Formula::var("s")));
  CHECK(parse_formula("[]p -> p") ==
        Formula::impl(Formula::box("0", Formula::var("p")), Formula::var("p")));
  CHECK(parse_formula("[] (q -> p)") ==
        Formula::box("0", Formula::impl(Formula::var("q"), Formula::var("p"))));
  CHECK(parse_formula("<>f ~s") == Formula::diamond("f", Formula::neg(Formula::var("s"))));
  CHECK(parse_formula("<>_|_") == Formula::diamond("0", Formula::falsum()));
}

TEST_CASE("precedence and associativity") {
  CHECK(parse_formula("p & q | r") ==
        Formula::disj(Formula::conj(Formula::var("p"), Formula::var("q")), Formula::var("r")));
  CHECK(parse_formula("p -> q -> r") ==
        Formula::impl(Formula::var("p"), Formula::impl(Formula::var("q"), Formula::var("r"))));
  CHECK(parse_formula("p | q ?? r -> s <-> t") ==
        Formula::iff(Formula::impl(Formula::inq_or(Formula::disj(Formula::var("p"),
                                                                 Formula::var("q")),
                                                   Formula::var("r")),
                                   Formula::var("s")),
                     Formula::var("t")));
  CHECK(parse_formula("~p & q") ==
        Formula::conj(Formula::neg(Formula::var("p")), Formula::var("q")));
}

TEST_CASE("syntax errors carry positions") {
  CHECK_THROWS_WITH_AS(parse_formula("p &"), doctest::Contains("offset"), Error);
  CHECK_THROWS_AS(parse_formula("(p"), Error);
  CHECK_THROWS_AS(parse_formula("p $ q"), Error);
  CHECK_THROWS_AS(parse_formula(""), Error);
}

TEST_CASE("printing round-trips") {
  CHECK(print_formula(Formula::box("f", Formula::var("s"))) == "[]f s");
  CHECK(print_formula(parse_formula("[] p")) == "[]p");
  Formula w = parse_formula("E q (q & A p (p -> [] (q -> p)))");
  CHECK(parse_formula(print_formula(w)) == w);

  std::mt19937 rng(51);
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, 4);
    std::string s = print_formula(f);
    CAPTURE(s);
    Formula g = parse_formula(s);
    CHECK(g == f);
    CHECK(print_formula(g) == s);  // printing a parse is idempotent
  }
}

TEST_CASE("free variables and subformulas") {
  Formula w = parse_formula("E q (q & A p (p -> [] (q -> p)))");
  CHECK(w.free_vars().empty());
  Formula f = parse_formula("p & A p (p -> r)");
  CHECK(f.free_vars() == std::set<std::string>{"p", "r"});
  CHECK(parse_formula("[]f p").modal_indices() == std::set<std::string>{"f"});
  auto subs = parse_formula("p & (p & q)").subformulas();
  CHECK(subs.size() == 4);  // p, q, p&q, p&(p&q)
}

TEST_CASE("two-modality companion") {
  Formula p = Formula::var("p");
  CHECK(bimodal_translate(p) == Formula::box("sq", Formula::diamond("sq", p)));
  CHECK(bimodal_translate(Formula::box("f", p)) ==
        Formula::box("R", Formula::box("sq", Formula::diamond("sq", p))));
  CHECK(bimodal_translate(Formula::neg(p)) ==
        Formula::box("sq", Formula::neg(Formula::box("sq", Formula::diamond("sq", p)))));
  CHECK_THROWS_AS(bimodal_translate(parse_formula("p | q")), Error);
}
