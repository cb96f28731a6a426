#include "poset.hpp"

#include <algorithm>

namespace posskit {

std::string mask_to_string(Mask m, const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for_each_bit(m, [&](int i) {
    if (!first) out += ",";
    out += i < static_cast<int>(names.size()) ? names[i] : std::to_string(i);
    first = false;
  });
  out += "}";
  return out;
}

std::vector<std::string> default_names(int n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  return names;
}

Poset Poset::from_pairs(std::vector<std::string> names,
                        const std::vector<std::pair<int, int>>& pairs) {
  int n = static_cast<int>(names.size());
  if (n < 1) throw Error::input("poset must have at least one element");
  if (n > kMaxCarrier) throw Error::input("poset carrier exceeds 64 elements");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (names[i] == names[j])
        throw Error::input("duplicate element name: " + names[i]);

  Poset p;
  p.n_ = n;
  p.names_ = std::move(names);
  p.up_.assign(n, 0);
  for (int x = 0; x < n; ++x) p.up_[x] = bit(x);
  for (auto [a, b] : pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw Error::input("order pair out of range");
    p.up_[a] |= bit(b);
  }
  // Transitive closure over the "is refined by" rows.
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < n; ++x) {
      Mask acc = p.up_[x];
      for_each_bit(p.up_[x], [&](int y) { acc |= p.up_[y]; });
      if (acc != p.up_[x]) {
        p.up_[x] = acc;
        changed = true;
      }
    }
  }
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (has(p.up_[x], y) && has(p.up_[y], x))
        throw Error::input("order is not antisymmetric: " + p.names_[x] + " and " +
                           p.names_[y] + " refine each other");
  p.down_.assign(n, 0);
  for (int x = 0; x < n; ++x)
    for_each_bit(p.up_[x], [&](int y) { p.down_[y] |= bit(x); });
  return p;
}

Poset Poset::discrete(int n) { return from_pairs(default_names(n), {}); }

Poset Poset::chain(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i + 1 < n; ++i) pairs.push_back({i + 1, i});  // e(i+1) refines e(i)
  return from_pairs(default_names(n), pairs);
}

int Poset::index_of(const std::string& name) const {
  for (int i = 0; i < n_; ++i)
    if (names_[i] == name) return i;
  return -1;
}

bool Poset::is_downset(Mask u) const {
  Mask closed = 0;
  for_each_bit(u, [&](int x) { closed |= down_[x]; });
  return subset(closed, u);
}

Mask Poset::interior(Mask u) const {
  Mask out = 0;
  for (int x = 0; x < n_; ++x)
    if (subset(down_[x], u)) out |= bit(x);
  return out;
}

Mask Poset::closure(Mask u) const {
  Mask out = 0;
  for (int x = 0; x < n_; ++x)
    if (down_[x] & u) out |= bit(x);
  return out;
}

std::vector<Mask> Poset::regular_opens(const Caps& caps) const {
  if (n_ > caps.poset_enum)
    throw Error::cap("regular-open enumeration over " + std::to_string(n_) +
                     " elements exceeds cap " + std::to_string(caps.poset_enum));
  std::vector<Mask> out;
  Mask limit = all();
  for (Mask u = 0;; ++u) {
    if (is_downset(u) && regularize(u) == u) out.push_back(u);
    if (u == limit) break;
  }
  return out;
}

Mask Poset::worlds() const {
  Mask out = 0;
  for (int x = 0; x < n_; ++x)
    if (down_[x] == bit(x)) out |= bit(x);
  return out;
}

bool Poset::is_separative() const {
  for (int x = 0; x < n_; ++x)
    if (!is_regular_open(down_[x])) return false;
  return true;
}

Poset::Quotient Poset::separative_quotient() const {
  // x is densely below y when every refinement of x has a common refinement
  // with y; mutual density is the collapsing equivalence.
  auto densely_below = [&](int x, int y) {
    bool ok = true;
    for_each_bit(down_[x], [&](int xp) {
      if (!(down_[xp] & down_[y])) ok = false;
    });
    return ok;
  };
  std::vector<int> cls(n_, -1);
  std::vector<int> reps;
  for (int x = 0; x < n_; ++x) {
    for (std::size_t c = 0; c < reps.size(); ++c) {
      if (densely_below(x, reps[c]) && densely_below(reps[c], x)) {
        cls[x] = static_cast<int>(c);
        break;
      }
    }
    if (cls[x] < 0) {
      cls[x] = static_cast<int>(reps.size());
      reps.push_back(x);
    }
  }
  std::vector<std::string> names;
  for (int r : reps) names.push_back(names_[r]);
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b)
      if (a != b && densely_below(reps[a], reps[b]))
        pairs.push_back({static_cast<int>(a), static_cast<int>(b)});
  Quotient q{from_pairs(std::move(names), pairs), std::move(cls)};
  return q;
}

Poset Poset::restrict(Mask keep) const {
  std::vector<int> sel = mask_to_indices(keep);
  if (sel.empty()) throw Error::input("restriction to empty carrier");
  std::vector<std::string> names;
  for (int x : sel) names.push_back(names_[x]);
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < sel.size(); ++a)
    for (std::size_t b = 0; b < sel.size(); ++b)
      if (a != b && leq(sel[a], sel[b])) pairs.push_back({static_cast<int>(a), static_cast<int>(b)});
  return from_pairs(std::move(names), pairs);
}

std::pair<Poset, std::optional<Poset>> Poset::atomic_atomless_parts() const {
  Mask w = worlds();
  // Elements properly refined by a world drop out; whatever remains splits
  // into its minimal part and the elements all of whose refinements can be
  // properly refined again.
  Mask star = 0;
  for (int x = 0; x < n_; ++x) {
    Mask strictly_below = down_[x] & ~bit(x);
    if (!(strictly_below & w)) star |= bit(x);
  }
  Poset starp = restrict(star);
  Mask atomic = starp.worlds();
  Mask atomless = 0;
  for (int x = 0; x < starp.size(); ++x) {
    bool every_refinement_refines = true;
    for_each_bit(starp.down(x), [&](int xp) {
      if (starp.down(xp) == bit(xp)) every_refinement_refines = false;
    });
    if (every_refinement_refines) atomless |= bit(x);
  }
  std::optional<Poset> c;
  if (atomless) c = starp.restrict(atomless);
  return {starp.restrict(atomic), std::move(c)};
}

}  // namespace posskit
