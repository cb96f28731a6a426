#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "poset.hpp"

namespace posskit {

// Subsets of the guise domain.
using MaskD = std::uint32_t;
inline constexpr int kMaxDomain = 32;

struct Signature {
  std::map<std::string, int> preds;
  std::map<std::string, int> funcs;  // constants are 0-ary functions

  void add_pred(const std::string& name, int arity);
  void add_func(const std::string& name, int arity);
  int pred_arity(const std::string& name) const;  // -1 when absent
  int func_arity(const std::string& name) const;
};

/// Terms and formulas of the first-order language with identity, function
/// symbols, and indexed boxes. Disjunction, implication, biconditional, and
/// the existential quantifier are evaluated through their classical
/// definitions from negation, conjunction, and the universal quantifier.
struct Term {
  enum class Kind { var, app };
  Kind kind;
  std::string name;
  std::vector<Term> args;

  static Term var(std::string n) { return {Kind::var, std::move(n), {}}; }
  static Term app(std::string n, std::vector<Term> a) { return {Kind::app, std::move(n), std::move(a)}; }
  bool operator==(const Term& o) const;
  std::set<std::string> vars() const;
};

class FOFormula {
 public:
  enum class Kind { eq, pred, neg, conj, disj, impl, iff, box, forall, exists };

  static FOFormula eq(Term l, Term r);
  static FOFormula pred(std::string name, std::vector<Term> args);
  static FOFormula neg(FOFormula f);
  static FOFormula conj(FOFormula l, FOFormula r);
  static FOFormula disj(FOFormula l, FOFormula r);
  static FOFormula impl(FOFormula l, FOFormula r);
  static FOFormula iff(FOFormula l, FOFormula r);
  static FOFormula box(std::string index, FOFormula f);
  static FOFormula forall(std::string var, FOFormula f);
  static FOFormula exists(std::string var, FOFormula f);

  Kind kind() const;
  const std::string& name() const;       // predicate, variable, or index
  const std::vector<Term>& terms() const;
  const FOFormula& lhs() const;
  const FOFormula& rhs() const;
  bool operator==(const FOFormula& o) const;

  std::set<std::string> free_vars() const;

 private:
  struct Node;
  explicit FOFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static FOFormula make(Kind k, std::string name, std::vector<Term> terms,
                        std::vector<FOFormula> kids);
  std::shared_ptr<const Node> node_;
};

/// Parses terms and formulas against a signature: declared function symbols
/// apply to argument lists, everything else is a variable. Syntax: `t1 = t2`,
/// `P(t, ...)`, `~`, `&`, `|`, `->`, `<->`, `[]i`, `<>i`, `A x ...`, `E x ...`.
FOFormula parse_fo_formula(const std::string& text, const Signature& sig);
std::string print_fo_formula(const FOFormula& f);

/// A first-order possibility model: a poset of possibilities, a domain of
/// guises, per-possibility equality of guises, persistent interpretations of
/// predicates and (possibly partial) quasi-functions, an optional existence
/// domain, and optional accessibility relations.
struct FOModel {
  Poset poset;
  std::vector<std::string> guises;
  Signature sig;
  // eq[s][a] = guises settled equal to a at s (an equivalence class)
  std::vector<std::vector<MaskD>> eq;
  // tuples per possibility: interp.at(name)[s] is a set of arity-sized rows
  // (arity+1 for functions, output last)
  std::map<std::string, std::vector<std::set<std::vector<int>>>> preds;
  std::map<std::string, std::vector<std::set<std::vector<int>>>> funcs;
  std::optional<std::vector<MaskD>> exists_at;  // d(s)
  std::vector<std::string> rel_indices;
  std::vector<std::vector<Mask>> rels;

  int guise_index(const std::string& name) const;
  int dsize() const { return static_cast<int>(guises.size()); }
  bool is_world_model() const;  // refinement is the identity
};

/// All structural requirements, first violation reported: equivalence,
/// persistence/refinability of equality, predicate persistence (through
/// settled equality) and refinability, function persistence,
/// quasi-functionality and eventual definedness, existence-domain conditions,
/// and closure of the regular opens under every box.
Check validate_fomodel(const FOModel& m, const Caps& caps = default_caps());

using Assignment = std::map<std::string, int>;

/// Denotation of a term: an equality class of guises or the empty set.
MaskD denote(const FOModel& m, int s, const Assignment& g, const Term& t);

bool fo_eval(const FOModel& m, int s, const Assignment& g, const FOFormula& f);
Mask fo_truth_set(const FOModel& m, const Assignment& g, const FOFormula& f);

/// Restriction of the model to the refinements of s.
FOModel generated_submodel(const FOModel& m, int s);

/// Substitution of a term for a variable, and the capture test guarding it.
Term subst_term(const Term& u, const std::string& x, const Term& t);
FOFormula subst_formula(const FOFormula& f, const std::string& x, const Term& t);
bool substitutable(const FOFormula& f, const std::string& x, const Term& t);

/// On a world model with an existence domain and one relation: if every
/// admissible interpretation of a fresh unary predicate and constant
/// validates the fact-existence scheme, the world-existence sentence must be
/// valid too; returns that implication's truth.
bool fact_world_check(const FOModel& m, const Caps& caps = default_caps());

}  // namespace posskit
