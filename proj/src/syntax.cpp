#include "syntax.hpp"

#include <cctype>

namespace posskit {

struct Formula::Node {
  Kind kind;
  std::string name;
  std::vector<Formula> kids;
};

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
const Formula& Formula::lhs() const { return node_->kids[0]; }
const Formula& Formula::rhs() const { return node_->kids[1]; }

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind || node_->name != o.node_->name) return false;
  if (node_->kids.size() != o.node_->kids.size()) return false;
  for (std::size_t i = 0; i < node_->kids.size(); ++i)
    if (!(node_->kids[i] == o.node_->kids[i])) return false;
  return true;
}

Formula Formula::make(Kind k, std::string name, std::vector<Formula> kids) {
  auto node = std::make_shared<Node>();
  node->kind = k;
  node->name = std::move(name);
  node->kids = std::move(kids);
  return Formula(std::move(node));
}

Formula Formula::falsum() { return make(Kind::falsum, "", {}); }
Formula Formula::var(std::string n) { return make(Kind::var, std::move(n), {}); }
Formula Formula::neg(Formula f) { return make(Kind::neg, "", {std::move(f)}); }
Formula Formula::conj(Formula l, Formula r) {
  return make(Kind::conj, "", {std::move(l), std::move(r)});
}
Formula Formula::disj(Formula l, Formula r) {
  return make(Kind::disj, "", {std::move(l), std::move(r)});
}
Formula Formula::impl(Formula l, Formula r) {
  return make(Kind::impl, "", {std::move(l), std::move(r)});
}
Formula Formula::iff(Formula l, Formula r) {
  return make(Kind::iff, "", {std::move(l), std::move(r)});
}
Formula Formula::box(std::string i, Formula f) {
  return make(Kind::box, std::move(i), {std::move(f)});
}
Formula Formula::diamond(std::string i, Formula f) {
  return make(Kind::diamond, std::move(i), {std::move(f)});
}
Formula Formula::forall_p(std::string v, Formula f) {
  return make(Kind::forall_p, std::move(v), {std::move(f)});
}
Formula Formula::exists_p(std::string v, Formula f) {
  return make(Kind::exists_p, std::move(v), {std::move(f)});
}
Formula Formula::inq_or(Formula l, Formula r) {
  return make(Kind::inq_or, "", {std::move(l), std::move(r)});
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::falsum:
      return;
    case Formula::Kind::var:
      if (!bound.count(f.name())) out.insert(f.name());
      return;
    case Formula::Kind::neg:
    case Formula::Kind::box:
    case Formula::Kind::diamond:
      collect_free(f.lhs(), bound, out);
      return;
    case Formula::Kind::forall_p:
    case Formula::Kind::exists_p: {
      bool was = bound.count(f.name()) > 0;
      bound.insert(f.name());
      collect_free(f.lhs(), bound, out);
      if (!was) bound.erase(f.name());
      return;
    }
    default:
      collect_free(f.lhs(), bound, out);
      collect_free(f.rhs(), bound, out);
  }
}

void collect_subformulas(const Formula& f, std::vector<Formula>& out) {
  switch (f.kind()) {
    case Formula::Kind::falsum:
    case Formula::Kind::var:
      break;
    case Formula::Kind::neg:
    case Formula::Kind::box:
    case Formula::Kind::diamond:
    case Formula::Kind::forall_p:
    case Formula::Kind::exists_p:
      collect_subformulas(f.lhs(), out);
      break;
    default:
      collect_subformulas(f.lhs(), out);
      collect_subformulas(f.rhs(), out);
  }
  for (const auto& g : out)
    if (g == f) return;
  out.push_back(f);
}

}  // namespace

std::set<std::string> Formula::free_vars() const {
  std::set<std::string> bound, out;
  collect_free(*this, bound, out);
  return out;
}

std::set<std::string> Formula::modal_indices() const {
  std::set<std::string> out;
  for (const auto& g : subformulas())
    if (g.kind() == Kind::box || g.kind() == Kind::diamond) out.insert(g.name());
  return out;
}

std::vector<Formula> Formula::subformulas() const {
  std::vector<Formula> out;
  collect_subformulas(*this, out);
  return out;
}

// ---------------------------------------------------------------------------
// lexer / parser

namespace {

struct Token {
  enum class Type { falsum, ident, lnot, land, lor, inq, arrow, darrow, box, diamond, lpar, rpar, end };
  Type type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Token::Type t, std::size_t pos, std::string text = "") {
    out.push_back({t, std::move(text), pos});
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (s.compare(i, 3, "_|_") == 0) {
      push(Token::Type::falsum, i);
      i += 3;
    } else if (s.compare(i, 3, "<->") == 0) {
      push(Token::Type::darrow, i);
      i += 3;
    } else if (s.compare(i, 2, "->") == 0) {
      push(Token::Type::arrow, i);
      i += 2;
    } else if (s.compare(i, 2, "??") == 0) {
      push(Token::Type::inq, i);
      i += 2;
    } else if (s.compare(i, 2, "[]") == 0) {
      push(Token::Type::box, i);
      i += 2;
    } else if (s.compare(i, 2, "<>") == 0) {
      push(Token::Type::diamond, i);
      i += 2;
    } else if (c == '~') {
      push(Token::Type::lnot, i);
      ++i;
    } else if (c == '&') {
      push(Token::Type::land, i);
      ++i;
    } else if (c == '|') {
      push(Token::Type::lor, i);
      ++i;
    } else if (c == '(') {
      push(Token::Type::lpar, i);
      ++i;
    } else if (c == ')') {
      push(Token::Type::rpar, i);
      ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
                              s[j] == '\''))
        ++j;
      push(Token::Type::ident, i, s.substr(i, j - i));
      i = j;
    } else {
      throw Error::input("formula syntax error at offset " + std::to_string(i) +
                         ": unexpected character '" + std::string(1, c) + "'");
    }
  }
  push(Token::Type::end, s.size());
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse() {
    Formula f = parse_iff();
    expect(Token::Type::end, "end of input");
    return f;
  }

 private:
  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  Token take() { return toks_[pos_++]; }
  void expect(Token::Type t, const std::string& what) {
    if (peek().type != t)
      throw Error::input("formula syntax error at offset " + std::to_string(peek().pos) +
                         ": expected " + what);
    take();
  }

  // a token that can begin a formula
  bool starts_formula(const Token& t) const {
    switch (t.type) {
      case Token::Type::falsum:
      case Token::Type::ident:
      case Token::Type::lnot:
      case Token::Type::box:
      case Token::Type::diamond:
      case Token::Type::lpar:
        return true;
      default:
        return false;
    }
  }

  // A/E binding a variable with a body; these never act as modal indices
  bool quantifier_ahead(int ahead) const {
    const Token& t = peek(ahead);
    return t.type == Token::Type::ident && (t.text == "A" || t.text == "E") &&
           peek(ahead + 1).type == Token::Type::ident && starts_formula(peek(ahead + 2));
  }

  Formula parse_iff() {
    Formula l = parse_impl();
    if (peek().type == Token::Type::darrow) {
      take();
      return Formula::iff(std::move(l), parse_iff());
    }
    return l;
  }

  Formula parse_impl() {
    Formula l = parse_inq();
    if (peek().type == Token::Type::arrow) {
      take();
      return Formula::impl(std::move(l), parse_impl());  // right associative
    }
    return l;
  }

  Formula parse_inq() {
    Formula l = parse_or();
    while (peek().type == Token::Type::inq) {
      take();
      l = Formula::inq_or(std::move(l), parse_or());
    }
    return l;
  }

  Formula parse_or() {
    Formula l = parse_and();
    while (peek().type == Token::Type::lor) {
      take();
      l = Formula::disj(std::move(l), parse_and());
    }
    return l;
  }

  Formula parse_and() {
    Formula l = parse_unary();
    while (peek().type == Token::Type::land) {
      take();
      l = Formula::conj(std::move(l), parse_unary());
    }
    return l;
  }

  Formula parse_unary() {
    const Token& t = peek();
    switch (t.type) {
      case Token::Type::lnot:
        take();
        return Formula::neg(parse_unary());
      case Token::Type::box:
      case Token::Type::diamond: {
        bool is_box = t.type == Token::Type::box;
        take();
        // an identifier right after the bracket is the modal index when a
        // formula still follows it; otherwise it is the operand
        std::string index = "0";
        if (peek().type == Token::Type::ident && starts_formula(peek(1)) && !quantifier_ahead(0))
          index = take().text;
        Formula body = parse_unary();
        return is_box ? Formula::box(index, std::move(body))
                      : Formula::diamond(index, std::move(body));
      }
      case Token::Type::falsum:
        take();
        return Formula::falsum();
      case Token::Type::lpar: {
        take();
        Formula f = parse_iff();
        expect(Token::Type::rpar, "')'");
        return f;
      }
      case Token::Type::ident: {
        // quantifier keywords bind an identifier and a unary-level body
        if (quantifier_ahead(0)) {
          bool universal = t.text == "A";
          take();
          std::string v = take().text;
          Formula body = parse_unary();
          return universal ? Formula::forall_p(v, std::move(body))
                           : Formula::exists_p(v, std::move(body));
        }
        take();
        return Formula::var(t.text);
      }
      default:
        throw Error::input("formula syntax error at offset " + std::to_string(t.pos) +
                           ": expected a formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::iff:
      return 0;
    case Formula::Kind::impl:
      return 1;
    case Formula::Kind::inq_or:
      return 2;
    case Formula::Kind::disj:
      return 3;
    case Formula::Kind::conj:
      return 4;
    default:
      return 5;
  }
}

void print_into(const Formula& f, int parent_prec, std::string& out) {
  int prec = precedence(f.kind());
  bool parens = prec < parent_prec;
  if (parens) out += "(";
  switch (f.kind()) {
    case Formula::Kind::falsum:
      out += "_|_";
      break;
    case Formula::Kind::var:
      out += f.name();
      break;
    case Formula::Kind::neg:
      out += "~";
      print_into(f.lhs(), 5, out);
      break;
    case Formula::Kind::box:
    case Formula::Kind::diamond:
      out += f.kind() == Formula::Kind::box ? "[]" : "<>";
      if (f.name() != "0") out += f.name() + " ";
      print_into(f.lhs(), 5, out);
      break;
    case Formula::Kind::forall_p:
    case Formula::Kind::exists_p:
      out += f.kind() == Formula::Kind::forall_p ? "A " : "E ";
      out += f.name() + " ";
      print_into(f.lhs(), 5, out);
      break;
    case Formula::Kind::conj:
      print_into(f.lhs(), 4, out);
      out += " & ";
      print_into(f.rhs(), 5, out);
      break;
    case Formula::Kind::disj:
      print_into(f.lhs(), 3, out);
      out += " | ";
      print_into(f.rhs(), 4, out);
      break;
    case Formula::Kind::inq_or:
      print_into(f.lhs(), 2, out);
      out += " ?? ";
      print_into(f.rhs(), 3, out);
      break;
    case Formula::Kind::impl:
      print_into(f.lhs(), 2, out);
      out += " -> ";
      print_into(f.rhs(), 1, out);
      break;
    case Formula::Kind::iff:
      print_into(f.lhs(), 1, out);
      out += " <-> ";
      print_into(f.rhs(), 0, out);
      break;
  }
  if (parens) out += ")";
}

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(lex(text)).parse(); }

std::string print_formula(const Formula& f) {
  std::string out;
  print_into(f, 0, out);
  return out;
}

Formula bimodal_translate(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::var:
      return Formula::box("sq", Formula::diamond("sq", f));
    case Formula::Kind::neg:
      return Formula::box("sq", Formula::neg(bimodal_translate(f.lhs())));
    case Formula::Kind::conj:
      return Formula::conj(bimodal_translate(f.lhs()), bimodal_translate(f.rhs()));
    case Formula::Kind::box:
      return Formula::box("R", bimodal_translate(f.lhs()));
    default:
      throw Error::input(
          "translation is defined on the negation/conjunction/box fragment only");
  }
}

}  // namespace posskit
