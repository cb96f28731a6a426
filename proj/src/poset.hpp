#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "error.hpp"

namespace posskit {

/// A finite poset of possibilities. `leq(x, y)` reads "x refines y": x settles
/// everything y settles. Subsets of the carrier are Mask values; propositions
/// are the regular open subsets.
class Poset {
 public:
  // Builds from refinement pairs (a refines b). The reflexive-transitive
  // closure is computed; a cycle through distinct elements is rejected.
  static Poset from_pairs(std::vector<std::string> names,
                          const std::vector<std::pair<int, int>>& pairs);
  static Poset discrete(int n);
  static Poset chain(int n);

  int size() const { return n_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int x) const { return names_[x]; }
  int index_of(const std::string& name) const;  // -1 when absent

  bool leq(int x, int y) const { return has(up_[x], y); }
  Mask down(int x) const { return down_[x]; }  // principal downset of x
  Mask up(int x) const { return up_[x]; }
  Mask all() const { return full_mask(n_); }

  bool is_downset(Mask u) const;
  Mask interior(Mask u) const;   // {x : every refinement of x is in u}
  Mask closure(Mask u) const;    // {x : some refinement of x is in u}
  Mask regularize(Mask u) const { return interior(closure(u)); }
  bool is_regular_open(Mask u) const { return regularize(u) == u; }

  Mask ro_neg(Mask u) const { return interior(all() & ~u); }
  Mask ro_join(Mask u, Mask v) const { return regularize(u | v); }

  /// All regular open subsets in ascending bit-pattern order.
  std::vector<Mask> regular_opens(const Caps& caps = default_caps()) const;

  Mask worlds() const;           // refinement-minimal elements
  bool is_separative() const;    // every principal downset regular open

  struct Quotient;
  /// Quotient by mutual density; the result is separative and has the same
  /// regular open algebra up to isomorphism.
  Quotient separative_quotient() const;

  /// Splits the sub-poset of elements with no world strictly below them into
  /// its minimal part and its world-free remainder (empty on finite posets).
  std::pair<Poset, std::optional<Poset>> atomic_atomless_parts() const;

  /// Restriction to the elements of `keep`, preserving order and names.
  Poset restrict(Mask keep) const;

  bool operator==(const Poset& o) const { return up_ == o.up_; }

  Poset() = default;  // empty placeholder; every factory yields size >= 1

 private:
  int n_ = 0;
  std::vector<std::string> names_;
  std::vector<Mask> down_;  // down_[x] = {y : y leq x}
  std::vector<Mask> up_;    // up_[x]   = {y : x leq y}
};

struct Poset::Quotient {
  Poset poset;
  std::vector<int> cls;  // original element -> quotient element
};

std::vector<std::string> default_names(int n);

}  // namespace posskit
