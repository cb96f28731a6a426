#include "structfile.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace posskit {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error::input("line " + std::to_string(line) + ": " + msg);
}

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    // break out braces and commas so sets read as token runs
    std::string spaced;
    for (char c : raw) {
      if (c == '{' || c == '}' || c == ',') {
        spaced += ' ';
        spaced += c;
        spaced += ' ';
      } else {
        spaced += c;
      }
    }
    std::istringstream ls(spaced);
    Line line{number, {}};
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

// parses "{ a , b }" starting at position i; returns names
std::vector<std::string> parse_set(const Line& line, std::size_t& i) {
  if (i >= line.tokens.size() || line.tokens[i] != "{") fail(line.number, "expected '{'");
  ++i;
  std::vector<std::string> names;
  bool expect_name = true;
  while (i < line.tokens.size() && line.tokens[i] != "}") {
    if (line.tokens[i] == ",") {
      if (expect_name) fail(line.number, "stray comma in set");
      expect_name = true;
    } else {
      if (!expect_name) fail(line.number, "missing comma in set");
      names.push_back(line.tokens[i]);
      expect_name = false;
    }
    ++i;
  }
  if (i >= line.tokens.size()) fail(line.number, "unterminated set");
  ++i;  // consume '}'
  return names;
}

}  // namespace

std::string kind_name(Structure::Kind k) {
  switch (k) {
    case Structure::Kind::poset: return "poset";
    case Structure::Kind::frame: return "frame";
    case Structure::Kind::relframe: return "relframe";
    case Structure::Kind::nbframe: return "nbframe";
    case Structure::Kind::ba: return "ba";
    case Structure::Kind::lattice: return "lattice";
    case Structure::Kind::fomodel: return "fomodel";
  }
  return "?";
}

int Structure::prop_named(const std::string& name) const {
  for (std::size_t i = 0; i < props.size(); ++i)
    if (props[i].first == name) return static_cast<int>(i);
  return -1;
}

Structure parse_structure(const std::string& text) {
  auto lines = tokenize(text);
  if (lines.empty()) throw Error::input("empty structure file");

  Structure s;
  bool kind_seen = false;
  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::string>> le_pairs;
  struct RelLine { int number; std::string index, a, b; };
  std::vector<RelLine> rel_lines;
  struct NbLine { int number; std::string index, elem; std::vector<std::string> propnames; };
  std::vector<NbLine> nb_lines;
  struct PropLine { int number; std::string name; std::vector<std::string> members; };
  std::vector<PropLine> prop_lines;
  struct ValLine { int number; std::string var; std::vector<std::string> members; std::string propname; };
  std::vector<ValLine> val_lines;
  std::optional<std::pair<int, std::vector<std::string>>> designated_line;
  // first-order sections
  std::vector<std::string> dom_names;
  struct EqLine { int number; std::string elem, g1, g2; };
  std::vector<EqLine> eq_lines;
  std::vector<std::pair<std::string, int>> pred_decls, fun_decls;
  struct HoldsLine { int number; std::string name, elem; std::vector<std::string> guises; };
  std::vector<HoldsLine> holds_lines;
  struct MapsLine { int number; std::string name, elem; std::vector<std::string> args; std::string out; };
  std::vector<MapsLine> maps_lines;
  struct ExistsLine { int number; std::string elem; std::vector<std::string> guises; };
  std::vector<ExistsLine> exists_lines;

  for (const Line& line : lines) {
    const auto& t = line.tokens;
    const std::string& head = t[0];
    if (head == "kind") {
      if (t.size() != 2) fail(line.number, "kind takes one word");
      kind_seen = true;
      if (t[1] == "poset") s.kind = Structure::Kind::poset;
      else if (t[1] == "frame") s.kind = Structure::Kind::frame;
      else if (t[1] == "relframe") s.kind = Structure::Kind::relframe;
      else if (t[1] == "nbframe") s.kind = Structure::Kind::nbframe;
      else if (t[1] == "ba") s.kind = Structure::Kind::ba;
      else if (t[1] == "lattice") s.kind = Structure::Kind::lattice;
      else if (t[1] == "fomodel") s.kind = Structure::Kind::fomodel;
      else fail(line.number, "unknown kind: " + t[1]);
    } else if (head == "elements") {
      elements.insert(elements.end(), t.begin() + 1, t.end());
    } else if (head == "le") {
      if (t.size() != 3) fail(line.number, "le takes two elements");
      le_pairs.push_back({t[1], t[2]});
    } else if (head == "admissible") {
      if (t.size() != 2 || t[1] != "full") fail(line.number, "expected 'admissible full'");
      s.admissible_full = true;
    } else if (head == "prop") {
      if (t.size() < 4 || t[2] != "=") fail(line.number, "expected 'prop <name> = {...}'");
      std::size_t i = 3;
      prop_lines.push_back({line.number, t[1], parse_set(line, i)});
    } else if (head == "rel") {
      if (t.size() != 4) fail(line.number, "rel takes an index and two elements");
      rel_lines.push_back({line.number, t[1], t[2], t[3]});
    } else if (head == "nb") {
      if (t.size() < 4) fail(line.number, "nb takes an index, an element, and a set");
      std::size_t i = 3;
      nb_lines.push_back({line.number, t[1], t[2], parse_set(line, i)});
    } else if (head == "designated") {
      std::size_t i = 1;
      designated_line = {line.number, parse_set(line, i)};
    } else if (head == "val") {
      if (t.size() < 4 || t[2] != "=") fail(line.number, "expected 'val <var> = ...'");
      if (t[3] == "{") {
        std::size_t i = 3;
        val_lines.push_back({line.number, t[1], parse_set(line, i), ""});
      } else {
        val_lines.push_back({line.number, t[1], {}, t[3]});
      }
    } else if (head == "dom") {
      std::size_t i = 1;
      auto names = parse_set(line, i);
      dom_names.insert(dom_names.end(), names.begin(), names.end());
    } else if (head == "eq") {
      if (t.size() != 4) fail(line.number, "eq takes an element and two guises");
      eq_lines.push_back({line.number, t[1], t[2], t[3]});
    } else if (head == "pred" || head == "fun") {
      if (t.size() != 2) fail(line.number, head + " takes name/arity");
      auto slash = t[1].find('/');
      if (slash == std::string::npos) fail(line.number, "expected name/arity");
      int arity = 0;
      try {
        arity = std::stoi(t[1].substr(slash + 1));
      } catch (...) {
        fail(line.number, "bad arity");
      }
      (head == "pred" ? pred_decls : fun_decls).push_back({t[1].substr(0, slash), arity});
    } else if (head == "holds") {
      if (t.size() < 3) fail(line.number, "holds takes a predicate, an element, and guises");
      holds_lines.push_back({line.number, t[1], t[2], {t.begin() + 3, t.end()}});
    } else if (head == "maps") {
      if (t.size() < 5) fail(line.number, "maps takes a function, an element, guises, ->, output");
      auto arrow = std::find(t.begin(), t.end(), "->");
      if (arrow == t.end() || arrow + 2 != t.end()) fail(line.number, "expected '-> <guise>'");
      maps_lines.push_back({line.number, t[1], t[2], {t.begin() + 3, arrow}, *(arrow + 1)});
    } else if (head == "exists") {
      if (t.size() < 3) fail(line.number, "exists takes an element and a set");
      std::size_t i = 2;
      exists_lines.push_back({line.number, t[1], parse_set(line, i)});
    } else {
      fail(line.number, "unknown directive: " + head);
    }
  }
  if (!kind_seen) throw Error::input("missing 'kind' line");
  if (elements.empty()) throw Error::input("missing 'elements' line");

  // carrier and order
  std::vector<std::pair<int, int>> pairs;
  auto elem_index = [&](const std::string& name, int line) {
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (elements[i] == name) return static_cast<int>(i);
    fail(line, "undeclared element: " + name);
  };
  for (auto& [a, b] : le_pairs) pairs.push_back({elem_index(a, 0), elem_index(b, 0)});
  s.poset = Poset::from_pairs(elements, pairs);

  auto parse_elem_set = [&](const std::vector<std::string>& names, int line) {
    Mask m = 0;
    for (const auto& n : names) m |= bit(elem_index(n, line));
    return m;
  };

  for (auto& pl : prop_lines) {
    if (s.prop_named(pl.name) >= 0) fail(pl.number, "duplicate prop name: " + pl.name);
    s.props.push_back({pl.name, parse_elem_set(pl.members, pl.number)});
  }
  for (auto& rl : rel_lines) {
    int i = -1;
    for (std::size_t k = 0; k < s.rel_indices.size(); ++k)
      if (s.rel_indices[k] == rl.index) i = static_cast<int>(k);
    if (i < 0) {
      i = static_cast<int>(s.rel_indices.size());
      s.rel_indices.push_back(rl.index);
      s.rels.emplace_back(s.poset.size(), 0);
    }
    s.rels[i][elem_index(rl.a, rl.number)] |= bit(elem_index(rl.b, rl.number));
  }
  for (auto& nl : nb_lines) {
    int i = -1;
    for (std::size_t k = 0; k < s.nb_indices.size(); ++k)
      if (s.nb_indices[k] == nl.index) i = static_cast<int>(k);
    if (i < 0) {
      i = static_cast<int>(s.nb_indices.size());
      s.nb_indices.push_back(nl.index);
      s.nbhd.emplace_back(s.poset.size());
    }
    int x = elem_index(nl.elem, nl.number);
    for (const auto& pname : nl.propnames) {
      int pi = s.prop_named(pname);
      if (pi < 0) fail(nl.number, "undeclared prop: " + pname);
      s.nbhd[i][x].push_back(s.props[pi].second);
    }
  }
  if (designated_line)
    s.designated = parse_elem_set(designated_line->second, designated_line->first);
  for (auto& vl : val_lines) {
    if (vl.propname.empty()) {
      s.valuation[vl.var] = parse_elem_set(vl.members, vl.number);
    } else {
      int pi = s.prop_named(vl.propname);
      if (pi < 0) fail(vl.number, "undeclared prop: " + vl.propname);
      s.valuation[vl.var] = s.props[pi].second;
    }
  }

  if (s.kind == Structure::Kind::fomodel) {
    FOModel m;
    m.poset = s.poset;
    if (dom_names.empty()) throw Error::input("fomodel needs a 'dom' line");
    m.guises = dom_names;
    if (m.dsize() > kMaxDomain) throw Error::input("domain exceeds 32 guises");
    auto guise_index = [&](const std::string& name, int line) {
      int g = m.guise_index(name);
      if (g < 0) fail(line, "undeclared guise: " + name);
      return g;
    };
    int n = m.poset.size();
    int d = m.dsize();
    m.eq.assign(n, std::vector<MaskD>(d));
    for (int x = 0; x < n; ++x)
      for (int a = 0; a < d; ++a) m.eq[x][a] = MaskD{1} << a;
    for (auto& el : eq_lines) {
      int x = elem_index(el.elem, el.number);
      int a = guise_index(el.g1, el.number);
      int b = guise_index(el.g2, el.number);
      m.eq[x][a] |= MaskD{1} << b;
      m.eq[x][b] |= MaskD{1} << a;
    }
    // symmetric-transitive closure per possibility
    for (int x = 0; x < n; ++x) {
      for (bool grew = true; grew;) {
        grew = false;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            if ((m.eq[x][a] >> b) & 1) {
              MaskD merged = m.eq[x][a] | m.eq[x][b];
              if (merged != m.eq[x][a] || merged != m.eq[x][b]) {
                m.eq[x][a] = m.eq[x][b] = merged;
                grew = true;
              }
            }
      }
    }
    for (auto& [name, arity] : pred_decls) {
      m.sig.add_pred(name, arity);
      m.preds[name].assign(n, {});
    }
    for (auto& [name, arity] : fun_decls) {
      m.sig.add_func(name, arity);
      m.funcs[name].assign(n, {});
    }
    for (auto& hl : holds_lines) {
      int arity = m.sig.pred_arity(hl.name);
      if (arity < 0) fail(hl.number, "undeclared predicate: " + hl.name);
      if (static_cast<int>(hl.guises.size()) != arity) fail(hl.number, "arity mismatch");
      std::vector<int> row;
      for (const auto& g : hl.guises) row.push_back(guise_index(g, hl.number));
      m.preds[hl.name][elem_index(hl.elem, hl.number)].insert(row);
    }
    for (auto& ml : maps_lines) {
      int arity = m.sig.func_arity(ml.name);
      if (arity < 0) fail(ml.number, "undeclared function: " + ml.name);
      if (static_cast<int>(ml.args.size()) != arity) fail(ml.number, "arity mismatch");
      std::vector<int> row;
      for (const auto& g : ml.args) row.push_back(guise_index(g, ml.number));
      row.push_back(guise_index(ml.out, ml.number));
      m.funcs[ml.name][elem_index(ml.elem, ml.number)].insert(row);
    }
    if (!exists_lines.empty()) {
      std::vector<MaskD> dom(n, 0);
      for (auto& xl : exists_lines) {
        int x = elem_index(xl.elem, xl.number);
        for (const auto& g : xl.guises) dom[x] |= MaskD{1} << guise_index(g, xl.number);
      }
      m.exists_at = std::move(dom);
    }
    m.rel_indices = s.rel_indices;
    m.rels = s.rels;
    s.fom = std::move(m);
  }
  return s;
}

Structure load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error::input("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_structure(buf.str());
}

ModalFrame to_modal_frame(const Structure& s, const Caps& caps) {
  Frame frame;
  if (s.admissible_full || s.kind == Structure::Kind::poset) {
    frame = Frame::full(s.poset, caps);
  } else {
    std::vector<Mask> fam;
    for (const auto& [name, set] : s.props) fam.push_back(set);
    frame = Frame::with_admissible(s.poset, fam);
  }
  ModalFrame mf;
  switch (s.kind) {
    case Structure::Kind::poset:
    case Structure::Kind::frame:
      mf = ModalFrame::universal(std::move(frame));
      break;
    case Structure::Kind::relframe:
      mf = ModalFrame::relational(std::move(frame), s.rel_indices, s.rels);
      break;
    case Structure::Kind::nbframe:
      mf = ModalFrame::neighborhood(std::move(frame), s.nb_indices, s.nbhd);
      break;
    default:
      throw Error::input(kind_name(s.kind) + " has no modal reading");
  }
  mf.designated = s.designated;
  return mf;
}

BoolAlg to_bool_alg(const Structure& s, const Caps& caps) {
  if (s.kind != Structure::Kind::ba) throw Error::input("expected a ba structure");
  int n = s.poset.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) le[i][j] = s.poset.leq(i, j);
  return BoolAlg::from_order(s.poset.names(), le, caps);
}

Lattice to_lattice(const Structure& s, const Caps& caps) {
  if (s.kind != Structure::Kind::lattice && s.kind != Structure::Kind::ba)
    throw Error::input("expected a lattice structure");
  int n = s.poset.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) le[i][j] = s.poset.leq(i, j);
  return Lattice::from_order(s.poset.names(), le, caps);
}

}  // namespace posskit
