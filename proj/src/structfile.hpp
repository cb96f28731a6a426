#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fomodel.hpp"
#include "heyting.hpp"
#include "modal.hpp"

namespace posskit {

/// A parsed structure file. Line-oriented, `#` comments:
///   kind poset|frame|relframe|nbframe|ba|lattice|fomodel
///   elements <name>...            carrier, one or more lines
///   le <a> <b>                    a refines b; closure computed
///   admissible full               all regular opens admissible
///   prop <name> = {<el>,...}      a named admissible set
///   rel <index> <a> <b>           accessibility edge
///   nb <index> <el> {<prop>,...}  neighborhoods by prop name
///   designated {<el>,...}
///   val <var> = <prop>|{<el>,...}
///   dom {<guise>,...}             first-order domain
///   eq <el> <g1> <g2>             settled equality (closure computed)
///   pred <P>/<n>   holds <P> <el> <g>...
///   fun <f>/<n>    maps <f> <el> <g>... -> <g>
///   exists <el> {<guise>,...}     existence domain
struct Structure {
  enum class Kind { poset, frame, relframe, nbframe, ba, lattice, fomodel };
  Kind kind;

  Poset poset;
  bool admissible_full = false;
  std::vector<std::pair<std::string, Mask>> props;  // declaration order
  std::map<std::string, Mask> valuation;
  std::optional<Mask> designated;
  std::vector<std::string> rel_indices;
  std::vector<std::vector<Mask>> rels;
  std::vector<std::string> nb_indices;
  std::vector<std::vector<std::vector<Mask>>> nbhd;
  std::optional<FOModel> fom;

  int prop_named(const std::string& name) const;  // index into props, -1 absent
};

std::string kind_name(Structure::Kind k);

Structure parse_structure(const std::string& text);
Structure load_structure(const std::string& path);

/// The modal view of a poset-backed structure; rejects algebra kinds.
ModalFrame to_modal_frame(const Structure& s, const Caps& caps = default_caps());

/// Algebra views; reject other kinds.
BoolAlg to_bool_alg(const Structure& s, const Caps& caps = default_caps());
Lattice to_lattice(const Structure& s, const Caps& caps = default_caps());

}  // namespace posskit
