#include "fomodel.hpp"

#include <algorithm>
#include <cctype>

namespace posskit {

void Signature::add_pred(const std::string& name, int arity) {
  if (arity < 0) throw Error::input("negative arity");
  if (preds.count(name) || funcs.count(name)) throw Error::input("duplicate symbol: " + name);
  preds[name] = arity;
}

void Signature::add_func(const std::string& name, int arity) {
  if (arity < 0) throw Error::input("negative arity");
  if (preds.count(name) || funcs.count(name)) throw Error::input("duplicate symbol: " + name);
  funcs[name] = arity;
}

int Signature::pred_arity(const std::string& name) const {
  auto it = preds.find(name);
  return it == preds.end() ? -1 : it->second;
}

int Signature::func_arity(const std::string& name) const {
  auto it = funcs.find(name);
  return it == funcs.end() ? -1 : it->second;
}

bool Term::operator==(const Term& o) const {
  return kind == o.kind && name == o.name && args == o.args;
}

std::set<std::string> Term::vars() const {
  std::set<std::string> out;
  if (kind == Kind::var) {
    out.insert(name);
  } else {
    for (const Term& a : args) {
      auto sub = a.vars();
      out.insert(sub.begin(), sub.end());
    }
  }
  return out;
}

struct FOFormula::Node {
  Kind kind;
  std::string name;
  std::vector<Term> terms;
  std::vector<FOFormula> kids;
};

FOFormula FOFormula::make(Kind k, std::string name, std::vector<Term> terms,
                          std::vector<FOFormula> kids) {
  auto node = std::make_shared<Node>();
  node->kind = k;
  node->name = std::move(name);
  node->terms = std::move(terms);
  node->kids = std::move(kids);
  return FOFormula(std::move(node));
}

FOFormula FOFormula::eq(Term l, Term r) {
  return make(Kind::eq, "", {std::move(l), std::move(r)}, {});
}
FOFormula FOFormula::pred(std::string name, std::vector<Term> args) {
  return make(Kind::pred, std::move(name), std::move(args), {});
}
FOFormula FOFormula::neg(FOFormula f) { return make(Kind::neg, "", {}, {std::move(f)}); }
FOFormula FOFormula::conj(FOFormula l, FOFormula r) {
  return make(Kind::conj, "", {}, {std::move(l), std::move(r)});
}
FOFormula FOFormula::disj(FOFormula l, FOFormula r) {
  return make(Kind::disj, "", {}, {std::move(l), std::move(r)});
}
FOFormula FOFormula::impl(FOFormula l, FOFormula r) {
  return make(Kind::impl, "", {}, {std::move(l), std::move(r)});
}
FOFormula FOFormula::iff(FOFormula l, FOFormula r) {
  return make(Kind::iff, "", {}, {std::move(l), std::move(r)});
}
FOFormula FOFormula::box(std::string index, FOFormula f) {
  return make(Kind::box, std::move(index), {}, {std::move(f)});
}
FOFormula FOFormula::forall(std::string var, FOFormula f) {
  return make(Kind::forall, std::move(var), {}, {std::move(f)});
}
FOFormula FOFormula::exists(std::string var, FOFormula f) {
  return make(Kind::exists, std::move(var), {}, {std::move(f)});
}

FOFormula::Kind FOFormula::kind() const { return node_->kind; }
const std::string& FOFormula::name() const { return node_->name; }
const std::vector<Term>& FOFormula::terms() const { return node_->terms; }
const FOFormula& FOFormula::lhs() const { return node_->kids[0]; }
const FOFormula& FOFormula::rhs() const { return node_->kids[1]; }

bool FOFormula::operator==(const FOFormula& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind || node_->name != o.node_->name) return false;
  if (!(node_->terms == o.node_->terms)) return false;
  if (node_->kids.size() != o.node_->kids.size()) return false;
  for (std::size_t i = 0; i < node_->kids.size(); ++i)
    if (!(node_->kids[i] == o.node_->kids[i])) return false;
  return true;
}

namespace {

void fo_free_vars(const FOFormula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case FOFormula::Kind::eq:
    case FOFormula::Kind::pred:
      for (const Term& t : f.terms())
        for (const auto& v : t.vars())
          if (!bound.count(v)) out.insert(v);
      return;
    case FOFormula::Kind::neg:
    case FOFormula::Kind::box:
      fo_free_vars(f.lhs(), bound, out);
      return;
    case FOFormula::Kind::forall:
    case FOFormula::Kind::exists: {
      bool was = bound.count(f.name()) > 0;
      bound.insert(f.name());
      fo_free_vars(f.lhs(), bound, out);
      if (!was) bound.erase(f.name());
      return;
    }
    default:
      fo_free_vars(f.lhs(), bound, out);
      fo_free_vars(f.rhs(), bound, out);
  }
}

}  // namespace

std::set<std::string> FOFormula::free_vars() const {
  std::set<std::string> bound, out;
  fo_free_vars(*this, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct FTok {
  enum class Type { ident, eq, comma, lnot, land, lor, arrow, darrow, box, diamond, lpar, rpar, end };
  Type type;
  std::string text;
  std::size_t pos;
};

std::vector<FTok> fo_lex(const std::string& s) {
  std::vector<FTok> out;
  std::size_t i = 0;
  auto push = [&](FTok::Type t, std::size_t pos, std::string text = "") {
    out.push_back({t, std::move(text), pos});
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (s.compare(i, 3, "<->") == 0) {
      push(FTok::Type::darrow, i);
      i += 3;
    } else if (s.compare(i, 2, "->") == 0) {
      push(FTok::Type::arrow, i);
      i += 2;
    } else if (s.compare(i, 2, "[]") == 0) {
      push(FTok::Type::box, i);
      i += 2;
    } else if (s.compare(i, 2, "<>") == 0) {
      push(FTok::Type::diamond, i);
      i += 2;
    } else if (c == '=') {
      push(FTok::Type::eq, i);
      ++i;
    } else if (c == ',') {
      push(FTok::Type::comma, i);
      ++i;
    } else if (c == '~') {
      push(FTok::Type::lnot, i);
      ++i;
    } else if (c == '&') {
      push(FTok::Type::land, i);
      ++i;
    } else if (c == '|') {
      push(FTok::Type::lor, i);
      ++i;
    } else if (c == '(') {
      push(FTok::Type::lpar, i);
      ++i;
    } else if (c == ')') {
      push(FTok::Type::rpar, i);
      ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      push(FTok::Type::ident, i, s.substr(i, j - i));
      i = j;
    } else {
      throw Error::input("formula syntax error at offset " + std::to_string(i));
    }
  }
  push(FTok::Type::end, s.size());
  return out;
}

class FOParser {
 public:
  FOParser(std::vector<FTok> toks, const Signature& sig) : toks_(std::move(toks)), sig_(sig) {}

  FOFormula parse() {
    FOFormula f = parse_iff();
    expect(FTok::Type::end, "end of input");
    return f;
  }

 private:
  const FTok& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  FTok take() { return toks_[pos_++]; }
  void expect(FTok::Type t, const std::string& what) {
    if (peek().type != t)
      throw Error::input("formula syntax error at offset " + std::to_string(peek().pos) +
                         ": expected " + what);
    take();
  }

  Term parse_term() {
    if (peek().type != FTok::Type::ident)
      throw Error::input("formula syntax error at offset " + std::to_string(peek().pos) +
                         ": expected a term");
    std::string name = take().text;
    int fa = sig_.func_arity(name);
    if (fa < 0) {
      if (peek().type == FTok::Type::lpar)
        throw Error::input("unknown function symbol: " + name);
      return Term::var(name);
    }
    std::vector<Term> args;
    if (fa > 0 || peek().type == FTok::Type::lpar) {
      expect(FTok::Type::lpar, "'('");
      if (peek().type != FTok::Type::rpar) {
        args.push_back(parse_term());
        while (peek().type == FTok::Type::comma) {
          take();
          args.push_back(parse_term());
        }
      }
      expect(FTok::Type::rpar, "')'");
    }
    if (static_cast<int>(args.size()) != fa)
      throw Error::input("arity mismatch for " + name);
    return Term::app(name, std::move(args));
  }

  FOFormula parse_iff() {
    FOFormula l = parse_impl();
    if (peek().type == FTok::Type::darrow) {
      take();
      return FOFormula::iff(std::move(l), parse_iff());
    }
    return l;
  }

  FOFormula parse_impl() {
    FOFormula l = parse_or();
    if (peek().type == FTok::Type::arrow) {
      take();
      return FOFormula::impl(std::move(l), parse_impl());
    }
    return l;
  }

  FOFormula parse_or() {
    FOFormula l = parse_and();
    while (peek().type == FTok::Type::lor) {
      take();
      l = FOFormula::disj(std::move(l), parse_and());
    }
    return l;
  }

  FOFormula parse_and() {
    FOFormula l = parse_unary();
    while (peek().type == FTok::Type::land) {
      take();
      l = FOFormula::conj(std::move(l), parse_unary());
    }
    return l;
  }

  bool quantifier_ahead() const {
    const FTok& t = peek();
    return t.type == FTok::Type::ident && (t.text == "A" || t.text == "E") &&
           peek(1).type == FTok::Type::ident;
  }

  FOFormula parse_unary() {
    const FTok& t = peek();
    switch (t.type) {
      case FTok::Type::lnot:
        take();
        return FOFormula::neg(parse_unary());
      case FTok::Type::box:
      case FTok::Type::diamond: {
        bool is_box = t.type == FTok::Type::box;
        take();
        std::string index = "0";
        // an undeclared identifier that is not itself an equality operand and
        // is followed by formula material names the modality
        if (peek().type == FTok::Type::ident && sig_.pred_arity(peek().text) < 0 &&
            sig_.func_arity(peek().text) < 0 && peek(1).type != FTok::Type::eq &&
            (peek(1).type == FTok::Type::ident || peek(1).type == FTok::Type::lnot ||
             peek(1).type == FTok::Type::lpar || peek(1).type == FTok::Type::box ||
             peek(1).type == FTok::Type::diamond))
          index = take().text;
        FOFormula body = parse_unary();
        if (!is_box) return FOFormula::neg(FOFormula::box(index, FOFormula::neg(std::move(body))));
        return FOFormula::box(index, std::move(body));
      }
      case FTok::Type::lpar: {
        take();
        FOFormula f = parse_iff();
        expect(FTok::Type::rpar, "')'");
        return f;
      }
      case FTok::Type::ident: {
        if (quantifier_ahead()) {
          bool universal = t.text == "A";
          take();
          std::string v = take().text;
          FOFormula body = parse_unary();
          return universal ? FOFormula::forall(v, std::move(body))
                           : FOFormula::exists(v, std::move(body));
        }
        if (sig_.pred_arity(t.text) >= 0) {
          std::string name = take().text;
          std::vector<Term> args;
          if (sig_.pred_arity(name) > 0) {
            expect(FTok::Type::lpar, "'('");
            args.push_back(parse_term());
            while (peek().type == FTok::Type::comma) {
              take();
              args.push_back(parse_term());
            }
            expect(FTok::Type::rpar, "')'");
          }
          if (static_cast<int>(args.size()) != sig_.pred_arity(name))
            throw Error::input("arity mismatch for " + name);
          return FOFormula::pred(name, std::move(args));
        }
        // an atomic equality
        Term l = parse_term();
        expect(FTok::Type::eq, "'='");
        Term r = parse_term();
        return FOFormula::eq(std::move(l), std::move(r));
      }
      default:
        throw Error::input("formula syntax error at offset " + std::to_string(t.pos) +
                           ": expected a formula");
    }
  }

  std::vector<FTok> toks_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

std::string term_to_string(const Term& t) {
  if (t.kind == Term::Kind::var) return t.name;
  std::string out = t.name;
  if (!t.args.empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ", ";
      out += term_to_string(t.args[i]);
    }
    out += ")";
  } else {
    out += "()";
  }
  return out;
}

}  // namespace

FOFormula parse_fo_formula(const std::string& text, const Signature& sig) {
  return FOParser(fo_lex(text), sig).parse();
}

std::string print_fo_formula(const FOFormula& f) {
  switch (f.kind()) {
    case FOFormula::Kind::eq:
      return term_to_string(f.terms()[0]) + " = " + term_to_string(f.terms()[1]);
    case FOFormula::Kind::pred: {
      std::string out = f.name();
      if (!f.terms().empty()) {
        out += "(";
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          if (i) out += ", ";
          out += term_to_string(f.terms()[i]);
        }
        out += ")";
      }
      return out;
    }
    case FOFormula::Kind::neg:
      return "~(" + print_fo_formula(f.lhs()) + ")";
    case FOFormula::Kind::conj:
      return "(" + print_fo_formula(f.lhs()) + " & " + print_fo_formula(f.rhs()) + ")";
    case FOFormula::Kind::disj:
      return "(" + print_fo_formula(f.lhs()) + " | " + print_fo_formula(f.rhs()) + ")";
    case FOFormula::Kind::impl:
      return "(" + print_fo_formula(f.lhs()) + " -> " + print_fo_formula(f.rhs()) + ")";
    case FOFormula::Kind::iff:
      return "(" + print_fo_formula(f.lhs()) + " <-> " + print_fo_formula(f.rhs()) + ")";
    case FOFormula::Kind::box:
      return "[]" + (f.name() == "0" ? "" : f.name() + " ") + "(" + print_fo_formula(f.lhs()) + ")";
    case FOFormula::Kind::forall:
      return "A " + f.name() + " (" + print_fo_formula(f.lhs()) + ")";
    case FOFormula::Kind::exists:
      return "E " + f.name() + " (" + print_fo_formula(f.lhs()) + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// models

int FOModel::guise_index(const std::string& name) const {
  for (std::size_t i = 0; i < guises.size(); ++i)
    if (guises[i] == name) return static_cast<int>(i);
  return -1;
}

bool FOModel::is_world_model() const {
  for (int x = 0; x < poset.size(); ++x)
    if (poset.down(x) != bit(x)) return false;
  return true;
}

namespace {

bool tuple_eq_at(const FOModel& m, int s, const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(m.eq[s][a[i]] >> b[i] & 1)) return false;
  return true;
}

// every congruent copy of a tuple under the equalities settled at s
std::vector<std::vector<int>> congruent_tuples(const FOModel& m, int s,
                                               const std::vector<int>& a) {
  std::vector<std::vector<int>> out = {{}};
  for (int g : a) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out) {
      MaskD cls = m.eq[s][g];
      for (int b = 0; b < m.dsize(); ++b)
        if ((cls >> b) & 1) {
          auto row = prefix;
          row.push_back(b);
          next.push_back(std::move(row));
        }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Check validate_fomodel(const FOModel& m, const Caps& caps) {
  int n = m.poset.size();
  int d = m.dsize();
  if (d < 1) return Check::fail("domain of guises is empty");
  if (d > kMaxDomain) return Check::fail("domain exceeds 32 guises");
  if (static_cast<int>(m.eq.size()) != n) return Check::fail("equality table does not cover the poset");

  auto gname = [&](int a) { return m.guises[a]; };
  auto sname = [&](int s) { return m.poset.name(s); };

  // equivalence at every possibility
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < d; ++a) {
      if (!((m.eq[s][a] >> a) & 1)) return Check::fail("equality not reflexive at " + sname(s));
      for (int b = 0; b < d; ++b) {
        bool ab = (m.eq[s][a] >> b) & 1;
        bool ba = (m.eq[s][b] >> a) & 1;
        if (ab != ba) return Check::fail("equality not symmetric at " + sname(s));
        if (ab)
          for (int c = 0; c < d; ++c)
            if ((m.eq[s][b] >> c & 1) && !(m.eq[s][a] >> c & 1))
              return Check::fail("equality not transitive at " + sname(s));
      }
    }
  }
  // persistence and refinability for equality
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        bool ab = (m.eq[s][a] >> b) & 1;
        if (ab) {
          Check bad = Check::pass();
          for_each_bit(m.poset.down(s), [&](int sp) {
            if (bad.ok && !(m.eq[sp][a] >> b & 1))
              bad = Check::fail("settled equality of " + gname(a) + ", " + gname(b) + " at " +
                                sname(s) + " lost at " + sname(sp));
          });
          if (!bad.ok) return bad;
        } else {
          bool witness = false;
          for_each_bit(m.poset.down(s), [&](int sp) {
            bool none = true;
            for_each_bit(m.poset.down(sp), [&](int spp) {
              if (m.eq[spp][a] >> b & 1) none = false;
            });
            if (none) witness = true;
          });
          if (!witness)
            return Check::fail("open equality of " + gname(a) + ", " + gname(b) + " at " +
                               sname(s) + " cannot be settled apart");
        }
      }

  // predicates
  for (const auto& [name, per_s] : m.preds) {
    int arity = m.sig.pred_arity(name);
    if (arity < 0) return Check::fail("undeclared predicate: " + name);
    if (static_cast<int>(per_s.size()) != n)
      return Check::fail("interpretation of " + name + " does not cover the poset");
    for (int s = 0; s < n; ++s)
      for (const auto& row : per_s[s]) {
        if (static_cast<int>(row.size()) != arity) return Check::fail("arity mismatch in " + name);
        Check bad = Check::pass();
        for_each_bit(m.poset.down(s), [&](int sp) {
          if (!bad.ok) return;
          for (const auto& row2 : congruent_tuples(m, sp, row))
            if (!per_s[sp].count(row2))
              bad = Check::fail(name + " loses a settled tuple from " + sname(s) + " at " +
                                sname(sp));
        });
        if (!bad.ok) return bad;
      }
    // refinability
    for (int s = 0; s < n; ++s) {
      std::vector<int> row(arity, 0);
      for (;;) {
        if (!per_s[s].count(row)) {
          bool witness = false;
          for_each_bit(m.poset.down(s), [&](int sp) {
            bool none = true;
            for_each_bit(m.poset.down(sp), [&](int spp) {
              if (per_s[spp].count(row)) none = false;
            });
            if (none) witness = true;
          });
          if (!witness)
            return Check::fail("unsettled tuple of " + name + " at " + sname(s) +
                               " cannot be settled absent");
        }
        int k = arity - 1;
        while (k >= 0 && row[k] + 1 == d) row[k--] = 0;
        if (k < 0) break;
        ++row[k];
      }
    }
  }

  // functions
  for (const auto& [name, per_s] : m.funcs) {
    int arity = m.sig.func_arity(name);
    if (arity < 0) return Check::fail("undeclared function: " + name);
    if (static_cast<int>(per_s.size()) != n)
      return Check::fail("interpretation of " + name + " does not cover the poset");
    for (int s = 0; s < n; ++s)
      for (const auto& row : per_s[s]) {
        if (static_cast<int>(row.size()) != arity + 1)
          return Check::fail("arity mismatch in " + name);
        Check bad = Check::pass();
        for_each_bit(m.poset.down(s), [&](int sp) {
          if (!bad.ok) return;
          for (const auto& row2 : congruent_tuples(m, sp, row))
            if (!per_s[sp].count(row2))
              bad = Check::fail(name + " loses a settled mapping from " + sname(s) + " at " +
                                sname(sp));
        });
        if (!bad.ok) return bad;
        for (const auto& other : per_s[s]) {
          if (!std::equal(row.begin(), row.end() - 1, other.begin())) continue;
          if (!(m.eq[s][row.back()] >> other.back() & 1))
            return Check::fail(name + " maps the same arguments to unequal guises at " + sname(s));
        }
      }
    // eventual definedness
    for (int s = 0; s < n; ++s) {
      std::vector<int> args(arity, 0);
      for (;;) {
        bool eventually = false;
        for_each_bit(m.poset.down(s), [&](int sp) {
          for (const auto& row : per_s[sp])
            if (std::equal(args.begin(), args.end(), row.begin())) eventually = true;
        });
        if (!eventually)
          return Check::fail(name + " never becomes defined below " + sname(s));
        int k = arity - 1;
        while (k >= 0 && args[k] + 1 == d) args[k--] = 0;
        if (k < 0) break;
        ++args[k];
      }
    }
  }
  for (const auto& [name, arity] : m.sig.funcs)
    if (!m.funcs.count(name)) return Check::fail("missing interpretation of function " + name);
  for (const auto& [name, arity] : m.sig.preds)
    if (!m.preds.count(name)) return Check::fail("missing interpretation of predicate " + name);

  // existence domain
  if (m.exists_at) {
    const auto& dom = *m.exists_at;
    if (static_cast<int>(dom.size()) != n)
      return Check::fail("existence domain does not cover the poset");
    for (int s = 0; s < n; ++s)
      for (int a = 0; a < d; ++a) {
        if ((dom[s] >> a) & 1) {
          Check bad = Check::pass();
          for_each_bit(m.poset.down(s), [&](int sp) {
            if (!bad.ok) return;
            for (int b = 0; b < d; ++b)
              if ((m.eq[sp][a] >> b & 1) && !(dom[sp] >> b & 1))
                bad = Check::fail("existence of " + gname(a) + " at " + sname(s) +
                                  " lost at " + sname(sp));
          });
          if (!bad.ok) return bad;
        } else {
          bool witness = false;
          for_each_bit(m.poset.down(s), [&](int sp) {
            bool none = true;
            for_each_bit(m.poset.down(sp), [&](int spp) {
              if (dom[spp] >> a & 1) none = false;
            });
            if (none) witness = true;
          });
          if (!witness)
            return Check::fail("possible existence of " + gname(a) + " at " + sname(s) +
                               " cannot be settled absent");
        }
      }
  }

  // accessibility relations must keep regular opens regular
  for (std::size_t i = 0; i < m.rel_indices.size(); ++i) {
    for (Mask z : m.poset.regular_opens(caps)) {
      Mask bz = 0;
      for (int x = 0; x < n; ++x)
        if (subset(m.rels[i][x], z)) bz |= bit(x);
      if (!m.poset.is_regular_open(bz))
        return Check::fail("box " + m.rel_indices[i] + " leaves the regular opens");
    }
  }
  return Check::pass();
}

// ---------------------------------------------------------------------------
// denotation and satisfaction

MaskD denote(const FOModel& m, int s, const Assignment& g, const Term& t) {
  if (t.kind == Term::Kind::var) {
    auto it = g.find(t.name);
    if (it == g.end()) throw Error::input("unassigned variable: " + t.name);
    return m.eq[s][it->second];
  }
  auto itf = m.funcs.find(t.name);
  if (itf == m.funcs.end()) throw Error::input("unknown function symbol: " + t.name);
  std::vector<MaskD> argsets;
  for (const Term& a : t.args) argsets.push_back(denote(m, s, g, a));
  MaskD out = 0;
  for (const auto& row : itf->second[s]) {
    bool applies = true;
    for (std::size_t i = 0; i < argsets.size(); ++i)
      if (!((argsets[i] >> row[i]) & 1)) applies = false;
    if (applies) out |= MaskD{1} << row.back();
  }
  return out;
}

namespace {

bool fo_eval_rec(const FOModel& m, int s, Assignment& g, const FOFormula& f);

bool atom_holds_now(const FOModel& m, int s, Assignment& g, const FOFormula& f) {
  // at s itself: all term denotations nonempty implies the required agreement
  std::vector<MaskD> dens;
  for (const Term& t : f.terms()) dens.push_back(denote(m, s, g, t));
  for (MaskD d : dens)
    if (!d) return true;  // nothing settled yet
  if (f.kind() == FOFormula::Kind::eq) return dens[0] == dens[1];
  const auto& rows = m.preds.at(f.name())[s];
  for (const auto& row : rows) {
    bool match = true;
    for (std::size_t i = 0; i < dens.size(); ++i)
      if (!((dens[i] >> row[i]) & 1)) match = false;
    if (match) return true;
  }
  return false;
}

bool fo_eval_rec(const FOModel& m, int s, Assignment& g, const FOFormula& f) {
  switch (f.kind()) {
    case FOFormula::Kind::eq:
    case FOFormula::Kind::pred: {
      if (f.kind() == FOFormula::Kind::pred && m.sig.pred_arity(f.name()) < 0)
        throw Error::input("unknown predicate: " + f.name());
      bool ok = true;
      for_each_bit(m.poset.down(s), [&](int sp) {
        if (!atom_holds_now(m, sp, g, f)) ok = false;
      });
      return ok;
    }
    case FOFormula::Kind::neg: {
      bool none = true;
      for_each_bit(m.poset.down(s), [&](int sp) {
        if (fo_eval_rec(m, sp, g, f.lhs())) none = false;
      });
      return none;
    }
    case FOFormula::Kind::conj:
      return fo_eval_rec(m, s, g, f.lhs()) && fo_eval_rec(m, s, g, f.rhs());
    case FOFormula::Kind::disj:
      // classical definition from negation and conjunction
      return fo_eval_rec(
          m, s, g, FOFormula::neg(FOFormula::conj(FOFormula::neg(f.lhs()), FOFormula::neg(f.rhs()))));
    case FOFormula::Kind::impl:
      return fo_eval_rec(m, s, g, FOFormula::neg(FOFormula::conj(f.lhs(), FOFormula::neg(f.rhs()))));
    case FOFormula::Kind::iff:
      return fo_eval_rec(m, s, g,
                         FOFormula::conj(FOFormula::impl(f.lhs(), f.rhs()),
                                         FOFormula::impl(f.rhs(), f.lhs())));
    case FOFormula::Kind::box: {
      int i = -1;
      for (std::size_t k = 0; k < m.rel_indices.size(); ++k)
        if (m.rel_indices[k] == f.name()) i = static_cast<int>(k);
      if (i < 0) throw Error::input("unknown modal index: " + f.name());
      bool all = true;
      for_each_bit(m.rels[i][s], [&](int sp) {
        if (!fo_eval_rec(m, sp, g, f.lhs())) all = false;
      });
      return all;
    }
    case FOFormula::Kind::forall: {
      MaskD range = m.exists_at ? (*m.exists_at)[s] : full_mask(m.dsize()) & 0xffffffffu;
      std::optional<int> saved;
      if (auto it = g.find(f.name()); it != g.end()) saved = it->second;
      bool all = true;
      for (int a = 0; a < m.dsize() && all; ++a) {
        if (!((range >> a) & 1)) continue;
        g[f.name()] = a;
        if (!fo_eval_rec(m, s, g, f.lhs())) all = false;
      }
      if (saved)
        g[f.name()] = *saved;
      else
        g.erase(f.name());
      return all;
    }
    case FOFormula::Kind::exists:
      return fo_eval_rec(m, s, g,
                         FOFormula::neg(FOFormula::forall(f.name(), FOFormula::neg(f.lhs()))));
  }
  return false;
}

}  // namespace

bool fo_eval(const FOModel& m, int s, const Assignment& g, const FOFormula& f) {
  if (s < 0 || s >= m.poset.size()) throw Error::input("possibility out of range");
  Assignment env = g;
  return fo_eval_rec(m, s, env, f);
}

Mask fo_truth_set(const FOModel& m, const Assignment& g, const FOFormula& f) {
  Mask out = 0;
  for (int s = 0; s < m.poset.size(); ++s)
    if (fo_eval(m, s, g, f)) out |= bit(s);
  return out;
}

FOModel generated_submodel(const FOModel& m, int s) {
  Mask keep = m.poset.down(s);
  std::vector<int> sel = mask_to_indices(keep);
  FOModel out;
  out.poset = m.poset.restrict(keep);
  out.guises = m.guises;
  out.sig = m.sig;
  for (int sp : sel) out.eq.push_back(m.eq[sp]);
  for (const auto& [name, per_s] : m.preds) {
    auto& dst = out.preds[name];
    for (int sp : sel) dst.push_back(per_s[sp]);
  }
  for (const auto& [name, per_s] : m.funcs) {
    auto& dst = out.funcs[name];
    for (int sp : sel) dst.push_back(per_s[sp]);
  }
  if (m.exists_at) {
    std::vector<MaskD> dom;
    for (int sp : sel) dom.push_back((*m.exists_at)[sp]);
    out.exists_at = std::move(dom);
  }
  out.rel_indices = m.rel_indices;
  for (const auto& rel : m.rels) {
    std::vector<Mask> restricted;
    for (int sp : sel) {
      Mask row = 0;
      for (std::size_t j = 0; j < sel.size(); ++j)
        if (has(rel[sp], sel[j])) row |= bit(static_cast<int>(j));
      restricted.push_back(row);
    }
    out.rels.push_back(std::move(restricted));
  }
  return out;
}

// ---------------------------------------------------------------------------
// substitution

Term subst_term(const Term& u, const std::string& x, const Term& t) {
  if (u.kind == Term::Kind::var) return u.name == x ? t : u;
  std::vector<Term> args;
  for (const Term& a : u.args) args.push_back(subst_term(a, x, t));
  return Term::app(u.name, std::move(args));
}

FOFormula subst_formula(const FOFormula& f, const std::string& x, const Term& t) {
  switch (f.kind()) {
    case FOFormula::Kind::eq:
      return FOFormula::eq(subst_term(f.terms()[0], x, t), subst_term(f.terms()[1], x, t));
    case FOFormula::Kind::pred: {
      std::vector<Term> args;
      for (const Term& a : f.terms()) args.push_back(subst_term(a, x, t));
      return FOFormula::pred(f.name(), std::move(args));
    }
    case FOFormula::Kind::neg:
      return FOFormula::neg(subst_formula(f.lhs(), x, t));
    case FOFormula::Kind::conj:
      return FOFormula::conj(subst_formula(f.lhs(), x, t), subst_formula(f.rhs(), x, t));
    case FOFormula::Kind::disj:
      return FOFormula::disj(subst_formula(f.lhs(), x, t), subst_formula(f.rhs(), x, t));
    case FOFormula::Kind::impl:
      return FOFormula::impl(subst_formula(f.lhs(), x, t), subst_formula(f.rhs(), x, t));
    case FOFormula::Kind::iff:
      return FOFormula::iff(subst_formula(f.lhs(), x, t), subst_formula(f.rhs(), x, t));
    case FOFormula::Kind::box:
      return FOFormula::box(f.name(), subst_formula(f.lhs(), x, t));
    case FOFormula::Kind::forall:
    case FOFormula::Kind::exists: {
      if (f.name() == x) return f;
      FOFormula body = subst_formula(f.lhs(), x, t);
      return f.kind() == FOFormula::Kind::forall ? FOFormula::forall(f.name(), std::move(body))
                                                 : FOFormula::exists(f.name(), std::move(body));
    }
  }
  return f;
}

bool substitutable(const FOFormula& f, const std::string& x, const Term& t) {
  switch (f.kind()) {
    case FOFormula::Kind::eq:
    case FOFormula::Kind::pred:
      return true;
    case FOFormula::Kind::neg:
    case FOFormula::Kind::box:
      return substitutable(f.lhs(), x, t);
    case FOFormula::Kind::forall:
    case FOFormula::Kind::exists: {
      if (f.name() == x) return true;  // x not free underneath
      if (!f.lhs().free_vars().count(x)) return true;
      if (t.vars().count(f.name())) return false;
      return substitutable(f.lhs(), x, t);
    }
    default:
      return substitutable(f.lhs(), x, t) && substitutable(f.rhs(), x, t);
  }
}

// ---------------------------------------------------------------------------
// fact/world frame check

bool fact_world_check(const FOModel& m, const Caps& caps) {
  if (!m.is_world_model()) throw Error::input("check applies to world models only");
  if (!m.exists_at) throw Error::input("check needs an existence domain");
  if (m.rel_indices.empty()) throw Error::input("check needs an accessibility relation");
  int n = m.poset.size();
  int d = m.dsize();
  if (n > 4 || d > 4) throw Error::cap("interpretation scan too large");
  (void)caps;

  const std::string qi = m.rel_indices[0];

  // E(x): some existent equals x
  auto exists_x = [&](const std::string& v) {
    return FOFormula::exists(v + "'", FOFormula::eq(Term::var(v + "'"), Term::var(v)));
  };
  Signature sig = m.sig;
  sig.add_pred("Qf", 1);
  sig.add_func("cf", 0);
  FOFormula qc = FOFormula::pred("Qf", {Term::app("cf", {})});
  FOFormula fact = FOFormula::impl(
      qc, FOFormula::exists("x", FOFormula::box(qi, FOFormula::iff(exists_x("x"), qc))));
  FOFormula world = FOFormula::exists(
      "x", FOFormula::forall("y", FOFormula::box(qi, FOFormula::impl(exists_x("x"),
                                                                     exists_x("y")))));

  // the world sentence mentions neither fresh symbol
  FOModel base = m;
  base.sig = sig;
  base.preds["Qf"] = std::vector<std::set<std::vector<int>>>(n);
  base.funcs["cf"] = std::vector<std::set<std::vector<int>>>(n);
  bool world_valid = true;
  for (int s = 0; s < n; ++s)
    if (!fo_eval(base, s, {}, world)) world_valid = false;
  if (world_valid) return true;

  // enumerate admissible interpretations: per world, the predicate is a union
  // of equality classes and the constant denotes one class
  std::vector<std::vector<MaskD>> class_reps(n);  // one guise per class
  for (int s = 0; s < n; ++s) {
    MaskD seen = 0;
    for (int a = 0; a < d; ++a)
      if (!((seen >> a) & 1)) {
        class_reps[s].push_back(m.eq[s][a]);
        seen |= m.eq[s][a];
      }
  }
  // odometers over per-world choices
  std::vector<std::size_t> cpick(n, 0);
  bool fact_valid = true;
  for (;;) {
    // constant interpretation for this choice
    for (int s = 0; s < n; ++s) {
      base.funcs["cf"][s].clear();
      for (int a = 0; a < d; ++a)
        if ((class_reps[s][cpick[s]] >> a) & 1) base.funcs["cf"][s].insert({a});
    }
    // all predicate interpretations: per world a union of classes
    std::vector<MaskD> qpick(n, 0);
    for (;;) {
      for (int s = 0; s < n; ++s) {
        base.preds["Qf"][s].clear();
        for (std::size_t c = 0; c < class_reps[s].size(); ++c)
          if ((qpick[s] >> c) & 1)
            for (int a = 0; a < d; ++a)
              if ((class_reps[s][c] >> a) & 1) base.preds["Qf"][s].insert({a});
      }
      for (int s = 0; s < n && fact_valid; ++s)
        if (!fo_eval(base, s, {}, fact)) fact_valid = false;
      if (!fact_valid) break;
      int k = n - 1;
      while (k >= 0 && qpick[k] + 1 == (MaskD{1} << class_reps[k].size())) qpick[k--] = 0;
      if (k < 0) break;
      ++qpick[k];
    }
    if (!fact_valid) break;
    int k = n - 1;
    while (k >= 0 && cpick[k] + 1 == class_reps[k].size()) cpick[k--] = 0;
    if (k < 0) break;
    ++cpick[k];
  }
  // implication: fact validity forces world validity
  return !fact_valid || world_valid;
}

}  // namespace posskit
