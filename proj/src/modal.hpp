#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frames.hpp"
#include "syntax.hpp"

namespace posskit {

/// A possibility frame equipped with one of three modal readings: the box as
/// the universal modality, accessibility relations per index, or neighborhood
/// families per index. An optional downward-directed designated set switches
/// validity to "forced somewhere among the designated possibilities".
struct ModalFrame {
  enum class Sem { universal, relational, neighborhood };

  Sem sem = Sem::universal;
  Frame frame;
  std::vector<std::string> indices;
  // relational: rel[i][x] = successors of x under index i
  std::vector<std::vector<Mask>> rel;
  // neighborhood: nbhd[i][x] = admissible sets at x, each kept sorted
  std::vector<std::vector<std::vector<Mask>>> nbhd;
  std::optional<Mask> designated;

  static ModalFrame universal(Frame f);
  static ModalFrame relational(Frame f, std::vector<std::string> indices,
                               std::vector<std::vector<Mask>> rel);
  static ModalFrame neighborhood(Frame f, std::vector<std::string> indices,
                                 std::vector<std::vector<std::vector<Mask>>> nbhd);

  int index_of(const std::string& name) const;  // -1 when absent
};

/// Frame invariants per semantics: base frame valid, admissible family closed
/// under every box, neighborhoods drawn from the admissible family, and the
/// designated set downward directed.
Check validate_modal_frame(const ModalFrame& f, const Caps& caps = default_caps());

/// Box and diamond on sets. The diamond is always computed as the negated box
/// of the negation; the simplified successor scan is only a cross-check where
/// the relation is closed downward in its second argument.
Mask box_set(const ModalFrame& f, int i, Mask z);
Mask diamond_set(const ModalFrame& f, int i, Mask z);
Mask diamond_set_simplified(const ModalFrame& f, int i, Mask z);

Mask neighborhood_box(const ModalFrame& f, int i, Mask z);

enum class RelCond { up_r, r_down, r_refinability, r_dense, r_rule, r_to_win, r_iff_win };
RelCond rel_cond_from_name(const std::string& name);
std::string rel_cond_name(RelCond c);

struct CondResult {
  bool ok = true;
  std::string witness;
};

CondResult check_relation_condition(const ModalFrame& f, int i, RelCond cond);

enum class NbCond { persistence, refinability };
CondResult check_n_condition(const ModalFrame& f, int i, NbCond cond);

/// Whether the full regular-open family is closed under the relation's box.
bool ro_closed_under_box(const Poset& poset, const std::vector<Mask>& rel,
                         const Caps& caps = default_caps());

/// Relation maximality for the box tables the frame induces, and the
/// box-preserving tightening that enforces it.
bool is_r_tight(const ModalFrame& f);
ModalFrame tighten(const ModalFrame& f);

/// A frame with a valuation of propositional variables by admissible sets.
struct Model {
  const ModalFrame* frame;
  std::map<std::string, Mask> valuation;
};

/// Semantic value of a formula as a subset of the carrier. Values of
/// question-free formulas are regular open; the question-forming disjunction
/// produces plain unions, which are still downsets.
Mask eval_set(const Model& m, const Formula& f, const Caps& caps = default_caps());
bool eval(const Model& m, int x, const Formula& f, const Caps& caps = default_caps());

/// Validity search outcome: valid, or the first countermodel in deterministic
/// order (valuations lexicographic over the admissible family in ascending
/// bit-pattern order, leftmost variable most significant; points ascending).
/// Quasi-normal verdicts carry no point (the whole designated set fails).
struct ValidityResult {
  bool valid = true;
  std::map<std::string, Mask> valuation;
  int point = -1;
};

ValidityResult is_valid(const ModalFrame& f, const Formula& formula,
                        const Caps& caps = default_caps());

/// Validity over a designated set: every valuation must force the formula at
/// some designated possibility.
ValidityResult quasi_valid(const ModalFrame& f, const Formula& formula,
                           const Caps& caps = default_caps());

/// A classical pointed-relation model on a subset of the original carrier.
struct KripkeModel {
  std::vector<int> carrier;  // original element indices, ascending
  std::vector<std::string> names;
  std::vector<std::string> indices;
  std::vector<std::vector<Mask>> rel;  // masks over carrier positions
  std::map<std::string, Mask> valuation;

  int pos_of(int orig) const;  // position in carrier, -1 when absent
};

bool kripke_eval(const KripkeModel& km, int pos, const Formula& f);

/// Restriction of a model to the possibilities that decide every subformula,
/// with the derived accessibility x R y iff y refines some successor of x.
struct Extraction {
  KripkeModel model;
  Mask decisive;  // over the original carrier
};
Extraction kripke_extract(const Model& m, const Formula& f, const Caps& caps = default_caps());

/// Evaluates a diamond-box implication axiom against its first-order frame
/// condition; on full frames satisfying the three interaction conditions the
/// two verdicts agree. Sequences of indices compose relations; the empty
/// sequence is the identity.
struct CorrespondencePair {
  bool axiom_valid;
  bool condition_holds;
};
CorrespondencePair lemmon_scott_check(const ModalFrame& f,
                                      const std::vector<std::string>& alpha,
                                      const std::vector<std::string>& beta,
                                      const std::vector<std::string>& delta,
                                      const std::vector<std::string>& gamma,
                                      const Caps& caps = default_caps());

/// Relational frame built from an algebra with finite-meet-preserving boxes:
/// carrier = nonzero elements, x R y iff every nonzero part of y is
/// compatible with x under the diamond. Realizes the input algebra on a full
/// frame.
ModalFrame algebra_full_frame(const BoolAlg& b,
                              const std::vector<std::string>& indices,
                              const std::vector<std::vector<int>>& boxes,
                              const Caps& caps = default_caps());

/// Relational frame on the proper filters, F R F' iff boxed members of F have
/// their bodies in F'; admissible sets are the element traces.
ModalFrame algebra_filter_frame(const BoolAlg& b,
                                const std::vector<std::string>& indices,
                                const std::vector<std::vector<int>>& boxes,
                                const Caps& caps = default_caps());

/// Accessibility by functions: one successor cone per possibility.
struct FunFrame {
  Frame frame;
  std::vector<std::string> indices;
  std::vector<std::vector<int>> fn;  // fn[i][x] = the determined possibility
};

enum class FnCond { persistence, refinability };
CondResult check_f_condition(const FunFrame& f, int i, FnCond cond);
ModalFrame functional_to_relational(const FunFrame& f);

/// Pointwise agreement of forcing with classical evaluation of the
/// two-modality companion over the carrier viewed as a plain relation model.
bool bimodal_agreement(const Model& m, const Formula& f, const Caps& caps = default_caps());

}  // namespace posskit
