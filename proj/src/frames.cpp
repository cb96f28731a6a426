#include "frames.hpp"

#include <algorithm>

namespace posskit {

Frame Frame::full(Poset poset, const Caps& caps) {
  Frame f;
  f.admissible = poset.regular_opens(caps);
  f.poset = std::move(poset);
  return f;
}

Frame Frame::with_admissible(Poset poset, std::vector<Mask> admissible) {
  std::sort(admissible.begin(), admissible.end());
  admissible.erase(std::unique(admissible.begin(), admissible.end()), admissible.end());
  return Frame{std::move(poset), std::move(admissible)};
}

bool Frame::is_full(const Caps& caps) const {
  return admissible == poset.regular_opens(caps);
}

int Frame::prop_index(Mask u) const {
  auto it = std::lower_bound(admissible.begin(), admissible.end(), u);
  if (it == admissible.end() || *it != u) return -1;
  return static_cast<int>(it - admissible.begin());
}

Check validate_frame(const Frame& f) {
  if (f.admissible.empty()) return Check::fail("admissible family is empty");
  const auto& names = f.poset.names();
  for (Mask u : f.admissible)
    if (!f.poset.is_regular_open(u))
      return Check::fail("admissible set " + mask_to_string(u, names) + " is not regular open");
  for (Mask u : f.admissible) {
    Mask nu = f.poset.ro_neg(u);
    if (f.prop_index(nu) < 0)
      return Check::fail("family not closed under negation: missing " +
                         mask_to_string(nu, names) + " = neg " + mask_to_string(u, names));
    for (Mask v : f.admissible)
      if (f.prop_index(u & v) < 0)
        return Check::fail("family not closed under intersection: missing " +
                           mask_to_string(u & v, names));
  }
  return Check::pass();
}

BoolAlg frame_algebra(const Frame& f, const Caps& caps) {
  Check c = validate_frame(f);
  if (!c.ok) throw Error::input("invalid frame: " + c.violation);
  int n = static_cast<int>(f.admissible.size());
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) le[i][j] = subset(f.admissible[i], f.admissible[j]);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  return BoolAlg::from_order(std::move(names), le, caps);
}

bool satisfies_separation(const Frame& f) {
  int n = f.poset.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (f.poset.leq(y, x)) continue;
      bool separated = false;
      for (Mask u : f.admissible)
        if (has(u, x) && !has(u, y)) {
          separated = true;
          break;
        }
      if (!separated) return false;
    }
  return true;
}

bool satisfies_filter_realization(const Frame& f, const Caps& caps) {
  BoolAlg alg = frame_algebra(f, caps);
  auto filters = proper_filters(alg, caps);
  for (const auto& filt : filters) {
    bool realized = false;
    for (int x = 0; x < f.poset.size() && !realized; ++x) {
      bool match = true;
      std::size_t k = 0;
      for (int a = 0; a < alg.size() && match; ++a) {
        bool in_filter = k < filt.members.size() && filt.members[k] == a;
        if (in_filter) ++k;
        if (in_filter != has(f.admissible[a], x)) match = false;
      }
      if (match) realized = true;
    }
    if (!realized) return false;
  }
  return true;
}

Frame filter_frame(const BoolAlg& b, const Caps& caps) {
  return Frame::full(filter_poset(b, caps).poset, caps);
}

Frame general_filter_frame(const BoolAlg& b, const Caps& caps) {
  auto fp = filter_poset(b, caps);
  return Frame::with_admissible(std::move(fp.poset), fp.hat);
}

Check is_p_morphism(const FrameMap& m) {
  const Frame& src = *m.source;
  const Frame& dst = *m.target;
  int n = src.poset.size();
  if (static_cast<int>(m.h.size()) != n) return Check::fail("map is not total on the source");
  for (int x = 0; x < n; ++x)
    if (m.h[x] < 0 || m.h[x] >= dst.poset.size()) return Check::fail("map leaves the target");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (src.poset.leq(y, x) && !dst.poset.leq(m.h[y], m.h[x]))
        return Check::fail("order-forth fails at " + src.poset.name(y) + " below " +
                           src.poset.name(x));
  for (int x = 0; x < n; ++x)
    for (int yp = 0; yp < dst.poset.size(); ++yp) {
      if (!dst.poset.leq(yp, m.h[x])) continue;
      bool found = false;
      for (int y = 0; y < n && !found; ++y)
        if (src.poset.leq(y, x) && m.h[y] == yp) found = true;
      if (!found)
        return Check::fail("order-back fails: " + dst.poset.name(yp) + " below image of " +
                           src.poset.name(x) + " has no preimage refinement");
    }
  for (Mask u : dst.admissible) {
    Mask pre = 0;
    for (int x = 0; x < n; ++x)
      if (has(u, m.h[x])) pre |= bit(x);
    if (src.prop_index(pre) < 0)
      return Check::fail("preimage of " + mask_to_string(u, dst.poset.names()) +
                         " is not admissible");
  }
  return Check::pass();
}

namespace {

bool extend_iso(const Frame& a, const Frame& b, std::vector<int>& map, std::vector<char>& used,
                int x) {
  int n = a.poset.size();
  if (x == n) {
    std::vector<Mask> image;
    for (Mask u : a.admissible) {
      Mask v = 0;
      for_each_bit(u, [&](int i) { v |= bit(map[i]); });
      image.push_back(v);
    }
    std::sort(image.begin(), image.end());
    return image == b.admissible;
  }
  for (int y = 0; y < n; ++y) {
    if (used[y]) continue;
    bool ok = popcount(a.poset.down(x)) == popcount(b.poset.down(y)) &&
              popcount(a.poset.up(x)) == popcount(b.poset.up(y));
    for (int x2 = 0; x2 < x && ok; ++x2) {
      if (a.poset.leq(x, x2) != b.poset.leq(y, map[x2])) ok = false;
      else if (a.poset.leq(x2, x) != b.poset.leq(map[x2], y)) ok = false;
    }
    if (!ok) continue;
    map[x] = y;
    used[y] = 1;
    if (extend_iso(a, b, map, used, x + 1)) return true;
    used[y] = 0;
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> frame_isomorphism(const Frame& a, const Frame& b,
                                                  const Caps& caps) {
  if (a.poset.size() != b.poset.size()) return std::nullopt;
  if (a.admissible.size() != b.admissible.size()) return std::nullopt;
  if (a.poset.size() > caps.iso_search)
    throw Error::cap("isomorphism search over " + std::to_string(a.poset.size()) +
                     " elements exceeds cap " + std::to_string(caps.iso_search));
  std::vector<int> map(a.poset.size(), -1);
  std::vector<char> used(a.poset.size(), 0);
  if (extend_iso(a, b, map, used, 0)) return map;
  return std::nullopt;
}

bool dual_roundtrip(const Frame& f, const Caps& caps) {
  Frame g = general_filter_frame(frame_algebra(f, caps), caps);
  return frame_isomorphism(f, g, caps).has_value();
}

bool admissible_covers_have_finite_subcover(const Frame& f) {
  // At finite scale the subcover is witnessed by the covering family itself;
  // stated this way to mirror the unbounded reading.
  if (f.admissible.size() > 20) throw Error::cap("subfamily scan too large");
  Mask all = f.poset.all();
  for (Mask pick = 0; pick < (Mask{1} << f.admissible.size()); ++pick) {
    Mask un = 0;
    for_each_bit(pick, [&](int i) { un |= f.admissible[i]; });
    if (f.poset.regularize(un) != all) continue;
    std::vector<int> chosen = mask_to_indices(pick);
    bool witnessed = false;
    for (Mask sub = 0; sub <= pick && !witnessed; ++sub) {
      if ((sub & pick) != sub) continue;
      Mask u2 = 0;
      for_each_bit(sub, [&](int i) { u2 |= f.admissible[i]; });
      if (f.poset.regularize(u2) == all) witnessed = true;
    }
    if (!witnessed) return false;
  }
  return true;
}

}  // namespace posskit
