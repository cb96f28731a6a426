#pragma once

#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "poset.hpp"

namespace posskit {

/// A finite Boolean algebra stored extensionally: the carrier is 0..n-1 with
/// an order matrix, meet/join/neg tables derived from the order. Carriers that
/// arrive as families of sets keep those sets alongside in `sets`.
class BoolAlg {
 public:
  /// Derives tables from an order given as refinement pairs (a below b) and
  /// validates the Boolean laws.
  static BoolAlg from_order(std::vector<std::string> names,
                            const std::vector<std::vector<bool>>& le,
                            const Caps& caps = default_caps());
  /// Free algebra on k atoms: the powerset of {0..k-1} ordered by inclusion.
  static BoolAlg powerset(int k);

  int size() const { return n_; }
  const std::vector<std::string>& names() const { return names_; }
  bool le(int a, int b) const { return le_[a * n_ + b]; }
  int meet(int a, int b) const { return meet_[a * n_ + b]; }
  int join(int a, int b) const { return join_[a * n_ + b]; }
  int neg(int a) const { return neg_[a]; }
  int bot() const { return bot_; }
  int top() const { return top_; }

  std::vector<int> atoms() const;  // minimal nonzero elements

  int meet_all(const std::vector<int>& xs) const;
  int join_all(const std::vector<int>& xs) const;

  /// Carrier sets when the algebra was built from a set family (else empty).
  const std::vector<Mask>& sets() const { return sets_; }

  friend BoolAlg ro_algebra(const Poset& poset, const Caps& caps);

 private:
  BoolAlg() = default;
  void derive_and_validate(const Caps& caps);

  int n_ = 0;
  std::vector<std::string> names_;
  std::vector<char> le_;
  std::vector<int> meet_, join_, neg_;
  int bot_ = -1, top_ = -1;
  std::vector<Mask> sets_;
};

/// Regular-open algebra of a poset: carrier = regular opens in ascending
/// bit-pattern order, negation by interior complement, meet by intersection,
/// join by regularization of union.
BoolAlg ro_algebra(const Poset& poset, const Caps& caps = default_caps());

/// Poset of nonzero elements under the restricted order. `elem[i]` recovers
/// the algebra element for poset index i.
struct NonzeroPoset {
  Poset poset;
  std::vector<int> elem;
};
NonzeroPoset bplus_poset(const BoolAlg& b);

/// A completion together with the embedding b -> index of its image.
struct Completion {
  BoolAlg algebra;
  std::vector<int> embed;
};

/// Regular opens of the nonzero-element poset with the principal-downset
/// embedding; for finite algebras the embedding is an isomorphism.
Completion macneille(const BoolAlg& b, const Caps& caps = default_caps());

/// Filters and the two filter-based frame constructions.
struct Filter {
  std::vector<int> members;  // ascending element indices
};

/// All proper filters, deterministic order (ascending membership bit pattern).
/// Every filter of a finite algebra is a principal upset.
std::vector<Filter> proper_filters(const BoolAlg& b, const Caps& caps = default_caps());

/// Poset of proper filters under reverse inclusion (F refines G iff F ⊇ G),
/// plus the sets â = {F : a ∈ F} indexed by algebra element.
struct FilterPoset {
  Poset poset;
  std::vector<Filter> filters;
  std::vector<Mask> hat;  // hat[a] over filter indices
};
FilterPoset filter_poset(const BoolAlg& b, const Caps& caps = default_caps());

/// Regular-open algebra of the proper-filter poset; isomorphic to the input
/// for finite algebras.
BoolAlg canonical_extension(const BoolAlg& b, const Caps& caps = default_caps());

/// Boolean isomorphism test with an optional witness map (lexicographically
/// least atom matching). Finite Boolean algebras are isomorphic exactly when
/// their atom counts agree.
std::optional<std::vector<int>> boolean_isomorphism(const BoolAlg& a, const BoolAlg& b);
inline bool is_isomorphic(const BoolAlg& a, const BoolAlg& b) {
  return boolean_isomorphism(a, b).has_value();
}

}  // namespace posskit
