#include "commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <iomanip>
#include <sstream>

namespace posskit {

namespace {

using nlohmann::json;

struct Row {
  std::string condition;
  std::string verdict;  // "ok", "no", "FAIL", or free-form info
  std::string witness;
};

std::string tabulate(const std::vector<Row>& rows) {
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.condition.size());
  std::ostringstream out;
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(w) + 2) << r.condition << r.verdict;
    if (!r.witness.empty()) out << "  " << r.witness;
    out << "\n";
  }
  return out.str();
}

json rows_to_json(const std::vector<Row>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json o = {{"condition", r.condition}, {"verdict", r.verdict}};
    if (!r.witness.empty()) o["witness"] = r.witness;
    arr.push_back(o);
  }
  return arr;
}

std::string set_text(Mask m, const Poset& p) { return mask_to_string(m, p.names()); }

void check_relframe(const Structure& s, const Caps& caps, std::vector<Row>& rows, bool& failed) {
  ModalFrame mf = to_modal_frame(s, caps);
  Check base = validate_modal_frame(mf, caps);
  rows.push_back({"frame-invariants", base.ok ? "ok" : "FAIL", base.violation});
  failed = failed || !base.ok;
  for (std::size_t i = 0; i < mf.indices.size(); ++i) {
    for (RelCond c : {RelCond::up_r, RelCond::r_down, RelCond::r_refinability, RelCond::r_dense,
                      RelCond::r_rule, RelCond::r_to_win, RelCond::r_iff_win}) {
      auto res = check_relation_condition(mf, static_cast<int>(i), c);
      rows.push_back({rel_cond_name(c) + "[" + mf.indices[i] + "]", res.ok ? "ok" : "no",
                      res.witness});
    }
  }
  if (!mf.indices.empty() && base.ok)
    rows.push_back({"R-tight", is_r_tight(mf) ? "ok" : "no", ""});
}

void check_nbframe(const Structure& s, const Caps& caps, std::vector<Row>& rows, bool& failed) {
  ModalFrame mf = to_modal_frame(s, caps);
  Check base = validate_modal_frame(mf, caps);
  rows.push_back({"frame-invariants", base.ok ? "ok" : "FAIL", base.violation});
  failed = failed || !base.ok;
  for (std::size_t i = 0; i < mf.indices.size(); ++i) {
    auto pr = check_n_condition(mf, static_cast<int>(i), NbCond::persistence);
    rows.push_back({"N-persistence[" + mf.indices[i] + "]", pr.ok ? "ok" : "no", pr.witness});
    auto rf = check_n_condition(mf, static_cast<int>(i), NbCond::refinability);
    rows.push_back({"N-refinability[" + mf.indices[i] + "]", rf.ok ? "ok" : "no", rf.witness});
  }
}

std::string hasse_dump(const std::vector<std::string>& names,
                       const std::function<bool(int, int)>& le, int n) {
  // covering pairs only; the loader recomputes the closure
  std::ostringstream out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || !le(a, b)) continue;
      bool cover = true;
      for (int c = 0; c < n && cover; ++c)
        if (c != a && c != b && le(a, c) && le(c, b)) cover = false;
      if (cover) out << "le " << names[a] << " " << names[b] << "\n";
    }
  return out.str();
}

std::string algebra_dump(const BoolAlg& b, const Poset* carrier_poset) {
  std::ostringstream out;
  out << "kind ba\n";
  out << "elements";
  for (const auto& n : b.names()) out << " " << n;
  out << "\n";
  if (!b.sets().empty() && carrier_poset) {
    for (int i = 0; i < b.size(); ++i)
      out << "# " << b.names()[i] << " = " << set_text(b.sets()[i], *carrier_poset) << "\n";
  }
  out << hasse_dump(b.names(), [&](int x, int y) { return b.le(x, y); }, b.size());
  return out.str();
}

std::string frame_dump(const Frame& f, const std::vector<std::string>& prop_names) {
  std::ostringstream out;
  out << "kind frame\n";
  out << "elements";
  for (const auto& n : f.poset.names()) out << " " << n;
  out << "\n";
  out << hasse_dump(f.poset.names(), [&](int x, int y) { return f.poset.leq(x, y); },
                    f.poset.size());
  for (std::size_t i = 0; i < f.admissible.size(); ++i) {
    std::string name = i < prop_names.size() ? prop_names[i] : "p" + std::to_string(i);
    out << "prop " << name << " = " << set_text(f.admissible[i], f.poset) << "\n";
  }
  return out.str();
}

std::string poset_dump(const Poset& p) {
  std::ostringstream out;
  out << "kind poset\n";
  out << "elements";
  for (const auto& n : p.names()) out << " " << n;
  out << "\n";
  out << hasse_dump(p.names(), [&](int x, int y) { return p.leq(x, y); }, p.size());
  return out.str();
}

int status_of_error(const Error& e) {
  return e.kind() == Error::Kind::cap ? kStatusCap : kStatusInput;
}

}  // namespace

CmdResult cmd_check(const Structure& s, const Caps& caps) {
  std::vector<Row> rows;
  bool failed = false;
  try {
    switch (s.kind) {
      case Structure::Kind::poset: {
        rows.push_back({"order", "ok", ""});  // construction enforces the laws
        rows.push_back({"separative", s.poset.is_separative() ? "ok" : "no", ""});
        rows.push_back({"worlds", std::to_string(popcount(s.poset.worlds())), ""});
        break;
      }
      case Structure::Kind::frame: {
        ModalFrame mf = to_modal_frame(s, caps);
        Check base = validate_modal_frame(mf, caps);
        rows.push_back({"frame-invariants", base.ok ? "ok" : "FAIL", base.violation});
        failed = !base.ok;
        if (base.ok) {
          rows.push_back({"full", mf.frame.is_full(caps) ? "ok" : "no", ""});
          rows.push_back({"separation", satisfies_separation(mf.frame) ? "ok" : "no", ""});
          rows.push_back(
              {"filter-realization", satisfies_filter_realization(mf.frame, caps) ? "ok" : "no", ""});
          rows.push_back(
              {"filter-descriptive", is_filter_descriptive(mf.frame, caps) ? "ok" : "no", ""});
        }
        break;
      }
      case Structure::Kind::relframe:
        check_relframe(s, caps, rows, failed);
        break;
      case Structure::Kind::nbframe:
        check_nbframe(s, caps, rows, failed);
        break;
      case Structure::Kind::ba: {
        try {
          to_bool_alg(s, caps);
          rows.push_back({"boolean-laws", "ok", ""});
        } catch (const Error& e) {
          if (e.kind() == Error::Kind::cap) throw;
          rows.push_back({"boolean-laws", "FAIL", e.what()});
          failed = true;
        }
        break;
      }
      case Structure::Kind::lattice: {
        try {
          Lattice l = to_lattice(s, caps);
          rows.push_back({"lattice-laws", "ok", ""});
          rows.push_back({"distributive", l.is_distributive() ? "ok" : "no", ""});
          rows.push_back({"locale", is_locale(l, caps) ? "ok" : "no", ""});
        } catch (const Error& e) {
          if (e.kind() == Error::Kind::cap) throw;
          rows.push_back({"lattice-laws", "FAIL", e.what()});
          failed = true;
        }
        break;
      }
      case Structure::Kind::fomodel: {
        Check res = validate_fomodel(*s.fom, caps);
        rows.push_back({"model-invariants", res.ok ? "ok" : "FAIL", res.violation});
        failed = !res.ok;
        if (res.ok && s.fom->is_world_model() && s.fom->exists_at &&
            !s.fom->rel_indices.empty()) {
          rows.push_back(
              {"fact-world-implication", fact_world_check(*s.fom, caps) ? "ok" : "no", ""});
        }
        break;
      }
    }
    // valuation targets must be admissible where a family is declared
    if (s.kind == Structure::Kind::frame || s.kind == Structure::Kind::relframe ||
        s.kind == Structure::Kind::nbframe) {
      ModalFrame mf = to_modal_frame(s, caps);
      for (const auto& [var, set] : s.valuation)
        if (mf.frame.prop_index(set) < 0) {
          rows.push_back({"valuation[" + var + "]", "FAIL",
                          set_text(set, s.poset) + " is not admissible"});
          failed = true;
        }
    }
    if (s.designated && s.kind != Structure::Kind::relframe &&
        s.kind != Structure::Kind::nbframe && s.kind != Structure::Kind::frame &&
        s.kind != Structure::Kind::poset)
      throw Error::input("designated set needs a frame kind");
  } catch (const Error& e) {
    return {status_of_error(e), std::string("error: ") + e.what(),
            json{{"command", "check"}, {"error", e.what()}}.dump(2)};
  }
  CmdResult out;
  out.status = failed ? kStatusFail : kStatusOk;
  out.text = "check " + kind_name(s.kind) + "\n" + tabulate(rows);
  out.json = json{{"command", "check"},
                  {"kind", kind_name(s.kind)},
                  {"rows", rows_to_json(rows)},
                  {"status", out.status}}
                 .dump(2);
  return out;
}

CmdResult cmd_eval(const Structure& s, const std::string& point, const std::string& formula,
                   bool verbose, const Caps& caps) {
  try {
    int x = s.poset.index_of(point);
    if (x < 0) throw Error::input("unknown point: " + point);
    json j = {{"command", "eval"}, {"point", point}, {"formula", formula}};
    std::ostringstream text;
    bool verdict;
    if (s.kind == Structure::Kind::fomodel) {
      FOFormula f = parse_fo_formula(formula, s.fom->sig);
      if (!f.free_vars().empty())
        throw Error::input("formula has free individual variables");
      verdict = fo_eval(*s.fom, x, {}, f);
      text << (verdict ? "true" : "false") << "\n";
      if (verbose)
        text << "forced " << set_text(fo_truth_set(*s.fom, {}, f), s.poset) << "\n";
      j["result"] = verdict;
    } else {
      ModalFrame mf = to_modal_frame(s, caps);
      Formula f = parse_formula(formula);
      Model m{&mf, s.valuation};
      for (const auto& var : f.free_vars())
        if (!m.valuation.count(var)) m.valuation[var] = 0;  // default: empty proposition
      verdict = eval(m, x, f, caps);
      text << (verdict ? "true" : "false") << "\n";
      if (verbose) {
        json forced = json::array();
        for (const auto& sub : f.subformulas()) {
          Mask v = eval_set(m, sub, caps);
          text << "forced " << print_formula(sub) << " = " << set_text(v, s.poset) << "\n";
          forced.push_back({{"formula", print_formula(sub)}, {"set", set_text(v, s.poset)}});
        }
        j["forced"] = forced;
      }
      j["result"] = verdict;
    }
    return {verdict ? kStatusOk : kStatusFail, text.str(), j.dump(2)};
  } catch (const Error& e) {
    return {status_of_error(e), std::string("error: ") + e.what(),
            json{{"command", "eval"}, {"error", e.what()}}.dump(2)};
  }
}

CmdResult cmd_valid(const Structure& s, const std::string& formula, const Caps& caps) {
  try {
    if (s.kind == Structure::Kind::ba || s.kind == Structure::Kind::lattice ||
        s.kind == Structure::Kind::fomodel)
      throw Error::input("validity search needs a frame kind");
    ModalFrame mf = to_modal_frame(s, caps);
    Formula f = parse_formula(formula);
    ValidityResult r = mf.designated ? quasi_valid(mf, f, caps) : is_valid(mf, f, caps);
    json j = {{"command", "valid"}, {"formula", formula}};
    if (r.valid) {
      j["result"] = "valid";
      return {kStatusOk, "valid\n", j.dump(2)};
    }
    std::ostringstream text;
    text << "countermodel\n";
    json vj;
    for (const auto& [var, set] : r.valuation) {
      text << "val " << var << " = " << set_text(set, s.poset) << "\n";
      vj[var] = set_text(set, s.poset);
    }
    if (r.point >= 0) text << "point " << s.poset.name(r.point) << "\n";
    j["result"] = "countermodel";
    j["valuation"] = vj;
    if (r.point >= 0) j["point"] = s.poset.name(r.point);
    return {kStatusFail, text.str(), j.dump(2)};
  } catch (const Error& e) {
    return {status_of_error(e), std::string("error: ") + e.what(),
            json{{"command", "valid"}, {"error", e.what()}}.dump(2)};
  }
}

CmdResult cmd_complete(const Structure& s, const std::string& what, const Caps& caps) {
  try {
    std::string text;
    if (what == "macneille" || what == "canonical") {
      BoolAlg b = to_bool_alg(s, caps);
      if (what == "macneille") {
        auto mc = macneille(b, caps);
        auto bp = bplus_poset(b);
        text = algebra_dump(mc.algebra, &bp.poset);
        for (int a = 0; a < b.size(); ++a)
          text += "# embed " + b.names()[a] + " -> " + mc.algebra.names()[mc.embed[a]] + "\n";
      } else {
        BoolAlg ce = canonical_extension(b, caps);
        auto fp = filter_poset(b, caps);
        text = algebra_dump(ce, &fp.poset);
      }
    } else if (what == "ro") {
      if (s.kind != Structure::Kind::poset && s.kind != Structure::Kind::frame)
        throw Error::input("ro completion needs a poset or frame");
      BoolAlg b = ro_algebra(s.poset, caps);
      text = algebra_dump(b, &s.poset);
    } else if (what == "dragalin") {
      Lattice l = to_lattice(s, caps);
      auto rep = lattice_represent(l, caps);
      text = poset_dump(rep.poset);
      for (int a = 0; a < rep.downsets.size(); ++a)
        text += "# j " + set_text(rep.downsets.set(a), rep.poset) + " = " +
                set_text(rep.downsets.set(rep.nucleus.table[a]), rep.poset) + "\n";
    } else {
      throw Error::input("unknown completion: " + what);
    }
    json j = {{"command", "complete"}, {"what", what}, {"output", text}};
    return {kStatusOk, text, j.dump(2)};
  } catch (const Error& e) {
    return {status_of_error(e), std::string("error: ") + e.what(),
            json{{"command", "complete"}, {"error", e.what()}}.dump(2)};
  }
}

CmdResult cmd_dualize(const Structure& s, const Caps& caps) {
  try {
    std::string text;
    if (s.kind == Structure::Kind::ba) {
      BoolAlg b = to_bool_alg(s, caps);
      Frame g = general_filter_frame(b, caps);
      // admissible sets are the element traces; label them by element
      auto fp = filter_poset(b, caps);
      std::vector<std::string> names(g.admissible.size());
      for (int a = 0; a < b.size(); ++a) {
        auto it = std::find(g.admissible.begin(), g.admissible.end(), fp.hat[a]);
        if (it != g.admissible.end())
          names[it - g.admissible.begin()] = b.names()[a] + "_hat";
      }
      text = frame_dump(g, names);
    } else if (s.kind == Structure::Kind::poset || s.kind == Structure::Kind::frame) {
      ModalFrame mf = to_modal_frame(s, caps);
      BoolAlg b = frame_algebra(mf.frame, caps);
      std::vector<Mask> sets = mf.frame.admissible;
      std::ostringstream out;
      out << "kind ba\nelements";
      for (const auto& n : b.names()) out << " " << n;
      out << "\n";
      for (int i = 0; i < b.size(); ++i)
        out << "# " << b.names()[i] << " = " << set_text(sets[i], s.poset) << "\n";
      out << hasse_dump(b.names(), [&](int x, int y) { return b.le(x, y); }, b.size());
      text = out.str();
    } else {
      throw Error::input("dualize needs a ba, poset, or frame");
    }
    json j = {{"command", "dualize"}, {"output", text}};
    return {kStatusOk, text, j.dump(2)};
  } catch (const Error& e) {
    return {status_of_error(e), std::string("error: ") + e.what(),
            json{{"command", "dualize"}, {"error", e.what()}}.dump(2)};
  }
}

}  // namespace posskit
