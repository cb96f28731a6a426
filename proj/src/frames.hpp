#pragma once

#include <optional>
#include <string>
#include <vector>

#include "balg.hpp"
#include "poset.hpp"

namespace posskit {

/// A possibility frame: a poset plus a nonempty family of admissible
/// propositions, each regular open, closed under negation and intersection.
/// The family is canonicalized (sorted, deduplicated) on construction;
/// validity is checked separately so invalid frames can be reported on.
struct Frame {
  Poset poset;
  std::vector<Mask> admissible;

  static Frame full(Poset poset, const Caps& caps = default_caps());
  static Frame with_admissible(Poset poset, std::vector<Mask> admissible);

  bool is_full(const Caps& caps = default_caps()) const;
  int prop_index(Mask u) const;  // index into admissible, -1 when absent
};

Check validate_frame(const Frame& f);

/// The admissible family as a Boolean algebra under the regular-open
/// operations (a subalgebra of the full regular-open algebra).
BoolAlg frame_algebra(const Frame& f, const Caps& caps = default_caps());

/// Any two order-distinguishable possibilities are separated by an
/// admissible set.
bool satisfies_separation(const Frame& f);

/// Every proper filter of the frame's algebra is the trace of a possibility.
bool satisfies_filter_realization(const Frame& f, const Caps& caps = default_caps());

inline bool is_filter_descriptive(const Frame& f, const Caps& caps = default_caps()) {
  return satisfies_separation(f) && satisfies_filter_realization(f, caps);
}

/// Filter frame (all regular opens admissible) and general filter frame
/// (only the sets â admissible) over the proper-filter poset of an algebra.
Frame filter_frame(const BoolAlg& b, const Caps& caps = default_caps());
Frame general_filter_frame(const BoolAlg& b, const Caps& caps = default_caps());

/// A map between frames, total on the source carrier.
struct FrameMap {
  const Frame* source;
  const Frame* target;
  std::vector<int> h;
};

/// Preimage-admissibility plus the order forth and back conditions.
Check is_p_morphism(const FrameMap& m);

/// Searches for a bijection preserving order and the admissible family.
std::optional<std::vector<int>> frame_isomorphism(const Frame& a, const Frame& b,
                                                  const Caps& caps = default_caps());

/// True iff the frame is isomorphic to the general filter frame of its own
/// algebra.
bool dual_roundtrip(const Frame& f, const Caps& caps = default_caps());

/// Finite-subcover form of what filter realization yields: any admissible
/// subfamily whose join is the whole space has a finite subfamily whose join
/// is already the whole space.
bool admissible_covers_have_finite_subcover(const Frame& f);

}  // namespace posskit
