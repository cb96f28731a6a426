#include "balg.hpp"

#include <algorithm>

namespace posskit {

void BoolAlg::derive_and_validate(const Caps& caps) {
  if (n_ < 1) throw Error::input("algebra must be nonempty");
  if (n_ > caps.algebra_elems)
    throw Error::cap("algebra carrier of " + std::to_string(n_) + " elements exceeds cap " +
                     std::to_string(caps.algebra_elems));
  auto le_at = [&](int a, int b) -> char& { return le_[a * n_ + b]; };
  for (int a = 0; a < n_; ++a) {
    if (!le_at(a, a)) throw Error::input("order not reflexive");
    for (int b = 0; b < n_; ++b) {
      if (a != b && le_at(a, b) && le_at(b, a)) throw Error::input("order not antisymmetric");
      for (int c = 0; c < n_; ++c)
        if (le_at(a, b) && le_at(b, c) && !le_at(a, c)) throw Error::input("order not transitive");
    }
  }

  meet_.assign(n_ * n_, -1);
  join_.assign(n_ * n_, -1);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) {
      int glb = -1, lub = -1;
      for (int c = 0; c < n_; ++c) {
        if (le_at(c, a) && le_at(c, b) && (glb < 0 || le_at(glb, c))) glb = c;
        if (le_at(a, c) && le_at(b, c) && (lub < 0 || le_at(c, lub))) lub = c;
      }
      if (glb < 0 || lub < 0) throw Error::input("order is not a lattice");
      for (int c = 0; c < n_; ++c) {
        if (le_at(c, a) && le_at(c, b) && !le_at(c, glb)) throw Error::input("meet not unique");
        if (le_at(a, c) && le_at(b, c) && !le_at(lub, c)) throw Error::input("join not unique");
      }
      meet_[a * n_ + b] = glb;
      join_[a * n_ + b] = lub;
    }

  bot_ = 0;
  top_ = 0;
  for (int a = 0; a < n_; ++a) {
    if (le_at(a, bot_)) bot_ = a;
    if (le_at(top_, a)) top_ = a;
  }
  for (int a = 0; a < n_; ++a)
    if (!le_at(bot_, a) || !le_at(a, top_)) throw Error::input("order is not bounded");

  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c)
        if (meet(a, join(b, c)) != join(meet(a, b), meet(a, c)))
          throw Error::input("lattice is not distributive");

  neg_.assign(n_, -1);
  for (int a = 0; a < n_; ++a) {
    for (int c = 0; c < n_; ++c)
      if (meet(a, c) == bot_ && join(a, c) == top_) {
        if (neg_[a] >= 0) throw Error::input("complement not unique");
        neg_[a] = c;
      }
    if (neg_[a] < 0) throw Error::input("element without complement: " + names_[a]);
  }
  for (int a = 0; a < n_; ++a) {
    if (neg_[neg_[a]] != a) throw Error::input("negation is not an involution");
    if (meet(a, neg_[a]) != bot_ || join(a, neg_[a]) != top_)
      throw Error::input("complement laws fail");
  }
  if ((n_ & (n_ - 1)) != 0) throw Error::input("Boolean carrier size must be a power of two");
}

BoolAlg BoolAlg::from_order(std::vector<std::string> names,
                            const std::vector<std::vector<bool>>& le, const Caps& caps) {
  BoolAlg b;
  b.n_ = static_cast<int>(names.size());
  b.names_ = std::move(names);
  b.le_.assign(b.n_ * b.n_, 0);
  for (int i = 0; i < b.n_; ++i)
    for (int j = 0; j < b.n_; ++j) b.le_[i * b.n_ + j] = le[i][j];
  b.derive_and_validate(caps);
  return b;
}

BoolAlg BoolAlg::powerset(int k) {
  if (k < 0 || k > 10) throw Error::input("powerset algebra arity out of range");
  int n = 1 << k;
  BoolAlg b;
  b.n_ = n;
  for (int i = 0; i < n; ++i) b.names_.push_back("b" + std::to_string(i));
  b.le_.assign(n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b.le_[i * n + j] = (i & ~j) == 0;
  b.derive_and_validate(default_caps());
  for (int i = 0; i < n; ++i) b.sets_.push_back(static_cast<Mask>(i));
  return b;
}

std::vector<int> BoolAlg::atoms() const {
  std::vector<int> out;
  for (int a = 0; a < n_; ++a) {
    if (a == bot_) continue;
    bool minimal = true;
    for (int c = 0; c < n_ && minimal; ++c)
      if (c != bot_ && c != a && le(c, a)) minimal = false;
    if (minimal) out.push_back(a);
  }
  return out;
}

int BoolAlg::meet_all(const std::vector<int>& xs) const {
  int acc = top_;
  for (int x : xs) acc = meet(acc, x);
  return acc;
}

int BoolAlg::join_all(const std::vector<int>& xs) const {
  int acc = bot_;
  for (int x : xs) acc = join(acc, x);
  return acc;
}

BoolAlg ro_algebra(const Poset& poset, const Caps& caps) {
  auto ro = poset.regular_opens(caps);
  int n = static_cast<int>(ro.size());
  if (n > caps.algebra_elems)
    throw Error::cap("regular-open algebra of " + std::to_string(n) + " elements exceeds cap");
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    names.push_back("e" + std::to_string(i));
    for (int j = 0; j < n; ++j) le[i][j] = subset(ro[i], ro[j]);
  }
  BoolAlg b = BoolAlg::from_order(std::move(names), le, caps);
  b.sets_ = std::move(ro);
  return b;
}

NonzeroPoset bplus_poset(const BoolAlg& b) {
  if (b.size() < 2) throw Error::input("degenerate algebra has no nonzero poset");
  std::vector<int> elem;
  for (int a = 0; a < b.size(); ++a)
    if (a != b.bot()) elem.push_back(a);
  std::vector<std::string> names;
  for (int a : elem) names.push_back(b.names()[a]);
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < elem.size(); ++i)
    for (std::size_t j = 0; j < elem.size(); ++j)
      if (i != j && b.le(elem[i], elem[j]))
        pairs.push_back({static_cast<int>(i), static_cast<int>(j)});
  return {Poset::from_pairs(std::move(names), pairs), std::move(elem)};
}

Completion macneille(const BoolAlg& b, const Caps& caps) {
  auto bp = bplus_poset(b);
  BoolAlg ro = ro_algebra(bp.poset, caps);
  std::vector<int> embed(b.size(), -1);
  for (int a = 0; a < b.size(); ++a) {
    Mask image = 0;
    for (int i = 0; i < bp.poset.size(); ++i)
      if (b.le(bp.elem[i], a)) image |= bit(i);
    auto it = std::find(ro.sets().begin(), ro.sets().end(), image);
    if (it == ro.sets().end())
      throw Error::input("principal downset is not regular open");  // unreachable
    embed[a] = static_cast<int>(it - ro.sets().begin());
  }
  return {std::move(ro), std::move(embed)};
}

std::vector<Filter> proper_filters(const BoolAlg& b, const Caps& caps) {
  (void)caps;
  // In a finite algebra every filter is the upset of the meet of its members.
  if (b.size() > kMaxCarrier) {
    std::vector<Filter> out;
    for (int a = 0; a < b.size(); ++a) {
      if (a == b.bot()) continue;
      Filter f;
      for (int c = 0; c < b.size(); ++c)
        if (b.le(a, c)) f.members.push_back(c);
      out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(),
              [](const Filter& x, const Filter& y) { return x.members < y.members; });
    return out;
  }
  std::vector<std::pair<Mask, Filter>> keyed;
  for (int a = 0; a < b.size(); ++a) {
    if (a == b.bot()) continue;
    Filter f;
    Mask key = 0;
    for (int c = 0; c < b.size(); ++c)
      if (b.le(a, c)) {
        f.members.push_back(c);
        key |= Mask{1} << c;
      }
    keyed.push_back({key, std::move(f)});
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Filter> out;
  out.reserve(keyed.size());
  for (auto& [k, f] : keyed) out.push_back(std::move(f));
  return out;
}

FilterPoset filter_poset(const BoolAlg& b, const Caps& caps) {
  auto filters = proper_filters(b, caps);
  int n = static_cast<int>(filters.size());
  if (n > kMaxCarrier) throw Error::cap("filter poset exceeds 64 elements");
  std::vector<std::vector<char>> membership(n, std::vector<char>(b.size(), 0));
  for (int i = 0; i < n; ++i)
    for (int a : filters[i].members) membership[i][a] = 1;
  auto contains = [&](int i, int j) {  // filter i ⊇ filter j
    for (int a = 0; a < b.size(); ++a)
      if (membership[j][a] && !membership[i][a]) return false;
    return true;
  };
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("F" + std::to_string(i));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && contains(i, j))  // larger filter refines smaller
        pairs.push_back({i, j});
  FilterPoset fp{Poset::from_pairs(std::move(names), pairs), std::move(filters), {}};
  fp.hat.assign(b.size(), 0);
  for (int a = 0; a < b.size(); ++a)
    for (int i = 0; i < n; ++i)
      if (membership[i][a]) fp.hat[a] |= bit(i);
  return fp;
}

BoolAlg canonical_extension(const BoolAlg& b, const Caps& caps) {
  return ro_algebra(filter_poset(b, caps).poset, caps);
}

std::optional<std::vector<int>> boolean_isomorphism(const BoolAlg& a, const BoolAlg& b) {
  if (a.size() != b.size()) return std::nullopt;
  auto atoms_a = a.atoms();
  auto atoms_b = b.atoms();
  if (atoms_a.size() != atoms_b.size()) return std::nullopt;
  // match atoms in carrier order; every element is the join of the atoms
  // below it, so the atom matching determines the whole map
  std::vector<int> map(a.size(), -1);
  for (int x = 0; x < a.size(); ++x) {
    std::vector<int> img;
    for (std::size_t i = 0; i < atoms_a.size(); ++i)
      if (a.le(atoms_a[i], x)) img.push_back(atoms_b[i]);
    map[x] = b.join_all(img);
  }
  std::vector<char> hit(b.size(), 0);
  for (int x = 0; x < a.size(); ++x) {
    if (hit[map[x]]) return std::nullopt;
    hit[map[x]] = 1;
  }
  for (int x = 0; x < a.size(); ++x) {
    if (map[a.neg(x)] != b.neg(map[x])) return std::nullopt;
    for (int y = 0; y < a.size(); ++y) {
      if (a.le(x, y) != b.le(map[x], map[y])) return std::nullopt;
      if (map[a.meet(x, y)] != b.meet(map[x], map[y])) return std::nullopt;
    }
  }
  return map;
}

}  // namespace posskit
