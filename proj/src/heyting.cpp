#include "heyting.hpp"

#include <algorithm>
#include <map>

namespace posskit {

DownsetAlgebra::DownsetAlgebra(Poset poset, const Caps& caps) : poset_(std::move(poset)) {
  if (poset_.size() > caps.poset_enum)
    throw Error::cap("downset enumeration over " + std::to_string(poset_.size()) +
                     " elements exceeds cap");
  for (Mask u = 0;; ++u) {
    if (poset_.is_downset(u)) downsets_.push_back(u);
    if (u == poset_.all()) break;
  }
  if (static_cast<int>(downsets_.size()) > caps.downsets)
    throw Error::cap("downset lattice of " + std::to_string(downsets_.size()) +
                     " elements exceeds cap");
}

int DownsetAlgebra::index_of(Mask u) const {
  auto it = std::lower_bound(downsets_.begin(), downsets_.end(), u);
  if (it == downsets_.end() || *it != u) return -1;
  return static_cast<int>(it - downsets_.begin());
}

Mask DownsetAlgebra::impl(Mask u, Mask v) const {
  Mask out = 0;
  for (int x = 0; x < poset_.size(); ++x)
    if (subset(poset_.down(x) & u, v)) out |= bit(x);
  return out;
}

Check check_nucleus(const DownsetAlgebra& h, const Nucleus& j) {
  const auto& names = h.poset().names();
  if (static_cast<int>(j.table.size()) != h.size())
    return Check::fail("operator table does not cover the downset lattice");
  for (int a = 0; a < h.size(); ++a) {
    if (j.table[a] < 0 || j.table[a] >= h.size())
      return Check::fail("operator table leaves the lattice");
    if (!subset(h.set(a), h.set(j.table[a])))
      return Check::fail("not increasing at " + mask_to_string(h.set(a), names));
    if (j.table[j.table[a]] != j.table[a])
      return Check::fail("not idempotent at " + mask_to_string(h.set(a), names));
  }
  for (int a = 0; a < h.size(); ++a)
    for (int b = 0; b < h.size(); ++b) {
      int ab = h.index_of(h.set(a) & h.set(b));
      if (h.set(j.table[ab]) != (h.set(j.table[a]) & h.set(j.table[b])))
        return Check::fail("not multiplicative at " + mask_to_string(h.set(a), names) + ", " +
                           mask_to_string(h.set(b), names));
    }
  return Check::pass();
}

std::vector<Mask> maximal_chains(const Poset& p) {
  int n = p.size();
  // cover relation: y immediately below x
  std::vector<Mask> covers(n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y || !p.leq(y, x)) continue;
      bool immediate = true;
      for (int z = 0; z < n && immediate; ++z)
        if (z != x && z != y && p.leq(y, z) && p.leq(z, x)) immediate = false;
      if (immediate) covers[x] |= bit(y);
    }
  std::vector<Mask> chains;
  std::vector<int> stack;
  auto dfs = [&](auto&& self, int x) -> void {
    stack.push_back(x);
    if (covers[x] == 0) {
      Mask c = 0;
      for (int e : stack) c |= bit(e);
      chains.push_back(c);
    } else {
      for_each_bit(covers[x], [&](int y) { self(self, y); });
    }
    stack.pop_back();
  };
  for (int x = 0; x < n; ++x)
    if (p.up(x) == bit(x)) dfs(dfs, x);  // maximal elements
  return chains;
}

Nucleus make_nucleus(NucleusKind kind, const DownsetAlgebra& h,
                     const std::vector<Mask>* secondary_below) {
  const Poset& p = h.poset();
  Nucleus j;
  j.table.resize(h.size());
  switch (kind) {
    case NucleusKind::notnot: {
      j.label = "notnot";
      for (int a = 0; a < h.size(); ++a) {
        int r = h.index_of(p.regularize(h.set(a)));
        j.table[a] = r;
      }
      break;
    }
    case NucleusKind::beth: {
      j.label = "beth";
      auto chains = maximal_chains(p);
      for (int a = 0; a < h.size(); ++a) {
        Mask out = 0;
        for (int x = 0; x < p.size(); ++x) {
          bool all_hit = true;
          for (Mask c : chains)
            if (has(c, x) && !(c & h.set(a))) all_hit = false;
          if (all_hit) out |= bit(x);
        }
        j.table[a] = h.index_of(out);
      }
      break;
    }
    case NucleusKind::fm: {
      j.label = "fm";
      if (!secondary_below) throw Error::input("secondary order required");
      const auto& sec = *secondary_below;  // sec[x] = {y : y secondary-below x}
      for (int x = 0; x < p.size(); ++x) {
        if (!has(sec[x], x)) throw Error::input("secondary order must be reflexive");
        Mask reach = 0;
        for_each_bit(sec[x], [&](int y) { reach |= sec[y]; });
        if (!subset(reach, sec[x])) throw Error::input("secondary order must be transitive");
        if (!subset(sec[x], p.down(x)))
          throw Error::input("secondary order must refine the refinement order");
      }
      for (int a = 0; a < h.size(); ++a) {
        Mask out = 0;
        for (int x = 0; x < p.size(); ++x) {
          bool ok = true;
          for_each_bit(p.down(x), [&](int xp) {
            if (!(sec[xp] & h.set(a))) ok = false;
          });
          if (ok) out |= bit(x);
        }
        j.table[a] = h.index_of(out);
      }
      break;
    }
  }
  return j;
}

Nucleus identity_nucleus(const DownsetAlgebra& h) {
  Nucleus j;
  j.label = "identity";
  j.table.resize(h.size());
  for (int a = 0; a < h.size(); ++a) j.table[a] = a;
  return j;
}

// ---------------------------------------------------------------------------
// finite lattices

void Lattice::derive(const Caps& caps) {
  if (n_ < 1) throw Error::input("lattice must be nonempty");
  if (n_ > caps.algebra_elems) throw Error::cap("lattice carrier exceeds cap");
  auto le_at = [&](int a, int b) -> char { return le_[a * n_ + b]; };
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
        if (le_at(c, a) && le_at(c, b) && !le_at(c, glb))
          throw Error::input("meets are not unique");
        if (le_at(a, c) && le_at(b, c) && !le_at(lub, c))
          throw Error::input("joins are not unique");
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
}

Lattice Lattice::from_order(std::vector<std::string> names,
                            const std::vector<std::vector<bool>>& le, const Caps& caps) {
  Lattice l;
  l.n_ = static_cast<int>(names.size());
  l.names_ = std::move(names);
  l.le_.assign(l.n_ * l.n_, 0);
  for (int i = 0; i < l.n_; ++i)
    for (int j = 0; j < l.n_; ++j) l.le_[i * l.n_ + j] = le[i][j];
  l.derive(caps);
  return l;
}

Lattice Lattice::from_sets(std::vector<std::string> names, std::vector<Mask> sets) {
  int n = static_cast<int>(sets.size());
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) le[i][j] = subset(sets[i], sets[j]);
  return from_order(std::move(names), le, default_caps());
}

int Lattice::join_all(const std::vector<int>& xs) const {
  int acc = bot_;
  for (int x : xs) acc = join(acc, x);
  return acc;
}

bool Lattice::is_distributive() const {
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c)
        if (meet(a, join(b, c)) != join(meet(a, b), meet(a, c))) return false;
  return true;
}

bool is_locale(const Lattice& l, const Caps& caps) {
  if ((1LL << l.size()) > caps.subset_scan) throw Error::cap("subset scan exceeds cap");
  for (Mask sub = 0; sub < (Mask{1} << l.size()); ++sub) {
    std::vector<int> xs = mask_to_indices(sub);
    int big = l.join_all(xs);
    for (int a = 0; a < l.size(); ++a) {
      std::vector<int> met;
      met.reserve(xs.size());
      for (int x : xs) met.push_back(l.meet(a, x));
      if (l.meet(a, big) != l.join_all(met)) return false;
    }
  }
  return true;
}

std::vector<int> completely_join_primes(const Lattice& l, const Caps& caps) {
  if ((1LL << l.size()) > caps.subset_scan) throw Error::cap("subset scan exceeds cap");
  std::vector<int> out;
  for (int p = 0; p < l.size(); ++p) {
    if (p == l.bot()) continue;
    bool prime = true;
    for (Mask sub = 0; sub < (Mask{1} << l.size()) && prime; ++sub) {
      std::vector<int> xs = mask_to_indices(sub);
      if (!l.le(p, l.join_all(xs))) continue;
      bool below_some = false;
      for (int x : xs)
        if (l.le(p, x)) below_some = true;
      if (!below_some) prime = false;
    }
    if (prime) out.push_back(p);
  }
  return out;
}

bool join_prime_generated(const Lattice& l, const Caps& caps) {
  auto primes = completely_join_primes(l, caps);
  for (int a = 0; a < l.size(); ++a) {
    std::vector<int> under;
    for (int p : primes)
      if (l.le(p, a)) under.push_back(p);
    if (l.join_all(under) != a) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// fixpoint algebras

int HeytingAlgebra::index_of(Mask u) const {
  auto it = std::find(carrier.begin(), carrier.end(), u);
  return it == carrier.end() ? -1 : static_cast<int>(it - carrier.begin());
}

Mask HeytingAlgebra::join(Mask a, Mask b) const {
  return base.set(nucleus.table[base.index_of(a | b)]);
}

Mask HeytingAlgebra::bot() const { return base.set(nucleus.table[0]); }
Mask HeytingAlgebra::top() const { return base.set(base.top()); }

HeytingAlgebra fixpoint_algebra(const DownsetAlgebra& h, const Nucleus& j) {
  Check c = check_nucleus(h, j);
  if (!c.ok) throw Error::input("not a nucleus: " + c.violation);
  HeytingAlgebra out{{}, h, j};
  for (int a = 0; a < h.size(); ++a)
    if (j.table[a] == a) out.carrier.push_back(h.set(a));
  return out;
}

Check validate_heyting(const HeytingAlgebra& h) {
  // closure of the carrier under the operations, then residuation
  for (Mask a : h.carrier) {
    for (Mask b : h.carrier) {
      if (h.index_of(h.meet(a, b)) < 0) return Check::fail("carrier not closed under meet");
      if (h.index_of(h.join(a, b)) < 0) return Check::fail("carrier not closed under join");
      if (h.index_of(h.impl(a, b)) < 0)
        return Check::fail("carrier not closed under implication");
    }
  }
  if (h.index_of(h.bot()) < 0 || h.index_of(h.top()) < 0)
    return Check::fail("bounds missing from carrier");
  for (Mask a : h.carrier)
    for (Mask b : h.carrier)
      for (Mask x : h.carrier) {
        bool left = subset(h.meet(a, x), b);
        bool right = subset(x, h.impl(a, b));
        if (left != right) return Check::fail("residuation fails");
      }
  return Check::pass();
}

bool heyting_is_boolean(const HeytingAlgebra& h) {
  for (Mask a : h.carrier) {
    Mask na = h.impl(a, h.bot());
    if (h.index_of(na) < 0) return false;
    if (h.meet(a, na) != h.bot()) return false;
    if (h.join(a, na) != h.top()) return false;
  }
  return true;
}

Lattice heyting_as_lattice(const HeytingAlgebra& h) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < h.carrier.size(); ++i) names.push_back("h" + std::to_string(i));
  return Lattice::from_sets(std::move(names), h.carrier);
}

namespace {

bool extend_lattice_iso(const Lattice& a, const Lattice& b, std::vector<int>& map,
                        std::vector<char>& used, int x) {
  if (x == a.size()) return true;
  for (int y = 0; y < b.size(); ++y) {
    if (used[y]) continue;
    bool ok = true;
    for (int x2 = 0; x2 < x && ok; ++x2) {
      if (a.le(x, x2) != b.le(y, map[x2])) ok = false;
      else if (a.le(x2, x) != b.le(map[x2], y)) ok = false;
    }
    if (!ok) continue;
    map[x] = y;
    used[y] = 1;
    if (extend_lattice_iso(a, b, map, used, x + 1)) return true;
    used[y] = 0;
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> lattice_isomorphism(const Lattice& a, const Lattice& b,
                                                    const Caps& caps) {
  if (a.size() != b.size()) return std::nullopt;
  if (a.size() > caps.iso_search + 4)
    throw Error::cap("lattice isomorphism search exceeds cap");
  std::vector<int> map(a.size(), -1);
  std::vector<char> used(a.size(), 0);
  if (extend_lattice_iso(a, b, map, used, 0)) return map;
  return std::nullopt;
}

Represented lattice_represent(const Lattice& l, const Caps& caps) {
  if (!is_locale(l, caps))
    throw Error::input("representation needs the arbitrary-join distributive law");
  if (l.size() < 2) throw Error::input("degenerate lattice");
  std::vector<int> elem;
  for (int a = 0; a < l.size(); ++a)
    if (a != l.bot()) elem.push_back(a);
  std::vector<std::string> names;
  for (int a : elem) names.push_back(l.names()[a]);
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < elem.size(); ++i)
    for (std::size_t j = 0; j < elem.size(); ++j)
      if (i != j && l.le(elem[i], elem[j]))
        pairs.push_back({static_cast<int>(i), static_cast<int>(j)});
  Poset p = Poset::from_pairs(std::move(names), pairs);
  DownsetAlgebra h(p, caps);
  Nucleus j;
  j.label = "principal-join";
  j.table.resize(h.size());
  for (int a = 0; a < h.size(); ++a) {
    std::vector<int> members;
    for_each_bit(h.set(a), [&](int i) { members.push_back(elem[i]); });
    int big = l.join_all(members);
    Mask down = 0;
    if (big != l.bot())
      for (std::size_t i = 0; i < elem.size(); ++i)
        if (l.le(elem[i], big)) down |= bit(static_cast<int>(i));
    j.table[a] = h.index_of(down);
  }
  return {std::move(p), std::move(h), std::move(j)};
}

// ---------------------------------------------------------------------------
// forcing over downsets with a nucleus

namespace {

Mask nuclear_rec(const DownsetAlgebra& h, const Nucleus& j,
                 const std::map<std::string, Mask>& val, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::falsum:
      return h.set(j.table[0]);
    case Formula::Kind::var: {
      auto it = val.find(f.name());
      if (it == val.end()) throw Error::input("unbound variable: " + f.name());
      return it->second;
    }
    case Formula::Kind::neg:
      return h.impl(nuclear_rec(h, j, val, f.lhs()), h.set(j.table[0]));
    case Formula::Kind::conj:
      return nuclear_rec(h, j, val, f.lhs()) & nuclear_rec(h, j, val, f.rhs());
    case Formula::Kind::disj: {
      Mask u = nuclear_rec(h, j, val, f.lhs()) | nuclear_rec(h, j, val, f.rhs());
      return h.set(j.table[h.index_of(u)]);
    }
    case Formula::Kind::impl:
      return h.impl(nuclear_rec(h, j, val, f.lhs()), nuclear_rec(h, j, val, f.rhs()));
    case Formula::Kind::iff: {
      Mask l = nuclear_rec(h, j, val, f.lhs());
      Mask r = nuclear_rec(h, j, val, f.rhs());
      return h.impl(l, r) & h.impl(r, l);
    }
    case Formula::Kind::inq_or:
      return nuclear_rec(h, j, val, f.lhs()) | nuclear_rec(h, j, val, f.rhs());
    default:
      throw Error::input("formula outside the falsum/and/or/implies/question fragment");
  }
}

}  // namespace

Mask nuclear_eval_set(const DownsetAlgebra& h, const Nucleus& j,
                      const std::map<std::string, Mask>& valuation, const Formula& f) {
  for (const auto& [var, set] : valuation) {
    int i = h.index_of(set);
    if (i < 0 || j.table[i] != i)
      throw Error::input("valuation of " + var + " is not a fixpoint");
  }
  return nuclear_rec(h, j, valuation, f);
}

bool nuclear_eval(const DownsetAlgebra& h, const Nucleus& j,
                  const std::map<std::string, Mask>& valuation, int x, const Formula& f) {
  if (x < 0 || x >= h.poset().size()) throw Error::input("point out of range");
  return has(nuclear_eval_set(h, j, valuation, f), x);
}

}  // namespace posskit
