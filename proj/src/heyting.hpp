#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poset.hpp"
#include "syntax.hpp"

namespace posskit {

/// The lattice of all downsets of a poset with intersection, union, and the
/// residual implication; bottom is the empty set, top the whole carrier.
class DownsetAlgebra {
 public:
  explicit DownsetAlgebra(Poset poset, const Caps& caps = default_caps());

  const Poset& poset() const { return poset_; }
  int size() const { return static_cast<int>(downsets_.size()); }
  const std::vector<Mask>& downsets() const { return downsets_; }
  Mask set(int i) const { return downsets_[i]; }
  int index_of(Mask u) const;  // -1 when not a downset of the poset

  Mask impl(Mask u, Mask v) const;  // {x : refinements of x in u are in v}
  int bot() const { return 0; }
  int top() const { return size() - 1; }

 private:
  Poset poset_;
  std::vector<Mask> downsets_;  // ascending bit-pattern order
};

/// A unary operator on the downsets, materialized as a table. Law checking is
/// extensional: increasing, idempotent, multiplicative.
struct Nucleus {
  std::vector<int> table;  // downset index -> downset index
  std::string label;

  // dense: the empty downset (index 0 in the ascending order) is a fixpoint
  bool dense(const DownsetAlgebra&) const { return table[0] == 0; }
};

Check check_nucleus(const DownsetAlgebra& h, const Nucleus& j);

enum class NucleusKind { notnot, beth, fm };
/// The double-negation operator, the maximal-chain operator, or the
/// two-relation operator for a secondary preorder contained in the
/// refinement order (rejected otherwise).
Nucleus make_nucleus(NucleusKind kind, const DownsetAlgebra& h,
                     const std::vector<Mask>* secondary_below = nullptr);

Nucleus identity_nucleus(const DownsetAlgebra& h);

/// Maximal chains of the poset: paths along covers from a maximal to a
/// minimal element.
std::vector<Mask> maximal_chains(const Poset& p);

/// A finite lattice given by its order; meet and join tables are derived and
/// validated on construction.
class Lattice {
 public:
  static Lattice from_order(std::vector<std::string> names,
                            const std::vector<std::vector<bool>>& le,
                            const Caps& caps = default_caps());
  /// Downset lattice of a poset, or any family of sets closed under the
  /// operations, ordered by inclusion.
  static Lattice from_sets(std::vector<std::string> names, std::vector<Mask> sets);

  int size() const { return n_; }
  const std::vector<std::string>& names() const { return names_; }
  bool le(int a, int b) const { return le_[a * n_ + b]; }
  int meet(int a, int b) const { return meet_[a * n_ + b]; }
  int join(int a, int b) const { return join_[a * n_ + b]; }
  int bot() const { return bot_; }
  int top() const { return top_; }
  int join_all(const std::vector<int>& xs) const;

  bool is_distributive() const;

 private:
  Lattice() = default;
  void derive(const Caps& caps);
  int n_ = 0;
  std::vector<std::string> names_;
  std::vector<char> le_;
  std::vector<int> meet_, join_;
  int bot_ = -1, top_ = -1;
};

/// The meet-over-arbitrary-join distributive law, checked over all subsets.
bool is_locale(const Lattice& l, const Caps& caps = default_caps());

/// Elements p with p <= join(A) only when p <= a for some a in A, over all
/// subsets A.
std::vector<int> completely_join_primes(const Lattice& l, const Caps& caps = default_caps());

/// True iff every element is a join of completely join-prime elements.
bool join_prime_generated(const Lattice& l, const Caps& caps = default_caps());

/// A Heyting algebra presented on downset fixpoints: carrier sets, order by
/// inclusion, meet = intersection, join = nucleus of union, residual
/// implication inherited. Owns its base lattice and operator.
struct HeytingAlgebra {
  std::vector<Mask> carrier;
  DownsetAlgebra base;
  Nucleus nucleus;

  int index_of(Mask u) const;
  Mask meet(Mask a, Mask b) const { return a & b; }
  Mask join(Mask a, Mask b) const;
  Mask impl(Mask a, Mask b) const { return base.impl(a, b); }
  Mask bot() const;
  Mask top() const;
};

/// Fixpoints of a nucleus with the adjusted join; fails on non-nuclei.
HeytingAlgebra fixpoint_algebra(const DownsetAlgebra& h, const Nucleus& j);

Check validate_heyting(const HeytingAlgebra& h);

/// Whether every element has a complement; double-negation fixpoints do.
bool heyting_is_boolean(const HeytingAlgebra& h);

Lattice heyting_as_lattice(const HeytingAlgebra& h);

/// Brute-force lattice isomorphism for small carriers.
std::optional<std::vector<int>> lattice_isomorphism(const Lattice& a, const Lattice& b,
                                                    const Caps& caps = default_caps());

/// A poset and dense nucleus whose fixpoint algebra reproduces the lattice;
/// defined for lattices satisfying the distributive law over arbitrary joins.
struct Represented {
  Poset poset;
  DownsetAlgebra downsets;
  Nucleus nucleus;
};
Represented lattice_represent(const Lattice& l, const Caps& caps = default_caps());

/// Forcing over downsets with a nucleus: falsum denotes the nucleus of the
/// empty set, disjunction the nucleus of the union, the question-forming
/// disjunction the plain union; negation abbreviates implication to falsum.
/// Valuation targets must be fixpoints.
bool nuclear_eval(const DownsetAlgebra& h, const Nucleus& j,
                  const std::map<std::string, Mask>& valuation, int x, const Formula& f);
Mask nuclear_eval_set(const DownsetAlgebra& h, const Nucleus& j,
                      const std::map<std::string, Mask>& valuation, const Formula& f);

}  // namespace posskit
