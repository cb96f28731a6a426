#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"

namespace posskit {

/// Immutable formula tree for the propositional-level languages: classical
/// connectives, indexed box/diamond, propositional quantifiers, and the
/// question-forming disjunction. Disjunction, implication, biconditional,
/// diamond, and the existential quantifier live in the tree but evaluators
/// treat them by their classical definitions from negation and conjunction.
///
/// Concrete syntax (ASCII): `_|_` falsum, `~`, `&`, `|`, `??`, `->`, `<->`,
/// `[]i` / `<>i` with an optional index defaulting to "0", `A p ...` /
/// `E p ...` for propositional quantifiers. Precedence, tightest first:
/// prefix (~, modals, quantifiers), `&`, `|`, `??`, `->` (right), `<->`.
class Formula {
 public:
  enum class Kind {
    falsum, var, neg, conj, disj, impl, iff, box, diamond, forall_p, exists_p, inq_or
  };

  static Formula falsum();
  static Formula var(std::string name);
  static Formula neg(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula impl(Formula l, Formula r);
  static Formula iff(Formula l, Formula r);
  static Formula box(std::string index, Formula f);
  static Formula diamond(std::string index, Formula f);
  static Formula forall_p(std::string var, Formula f);
  static Formula exists_p(std::string var, Formula f);
  static Formula inq_or(Formula l, Formula r);

  Kind kind() const;
  /// Variable name, modal index, or quantified variable, by kind.
  const std::string& name() const;
  const Formula& lhs() const;  // also the sole child of unary nodes
  const Formula& rhs() const;

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

  std::set<std::string> free_vars() const;
  std::set<std::string> modal_indices() const;
  /// Distinct subformulas, children before parents.
  std::vector<Formula> subformulas() const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Kind k, std::string name, std::vector<Formula> kids);
  std::shared_ptr<const Node> node_;
};

/// Parses the concrete grammar; reports the offset of the first bad token.
Formula parse_formula(const std::string& text);

/// Canonical printing with minimal parentheses; parse(print(f)) == f.
std::string print_formula(const Formula& f);

/// Two-modality companion of a formula in the negation/conjunction/box
/// fragment: variables become box-diamond pairs over the refinement index
/// "sq", boxes move to the index "R", negation is guarded by "sq".
Formula bimodal_translate(const Formula& f);

}  // namespace posskit
