#pragma once
// Text formats: factorization files, tree literals, skeleton/core JSON and DOT
// pictures, plus the JSON report payloads used by the command-line tool.
//
// Factorization file:       one header line `group=gamma|sl2|b3`, then the
//                           entries as word literals separated by `;`.
// Tree literal:             a distance sequence `3,4,4,4,3,6`, or preorder
//                           bits `b:1101000100`; an optional `!L W B T` suffix
//                           attaches one label per leaf.
// Matrix word literal:      a gamma word evaluated letter by letter, with a
//                           leading `-` for the other sign, e.g. `-XYxY`.

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "compare.hpp"
#include "trees.hpp"

namespace modbraid {

using json = nlohmann::json;  // map-backed: keys always serialize sorted

namespace io_detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else
      cur += c;
  }
  out.push_back(cur);
  return out;
}

inline std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!isspace((unsigned char)c)) out += c;
  return out;
}

}  // namespace io_detail

// ------------------------------------------------------ matrix word literals

inline mat2 parse_mat(const std::string& s) {
  std::string w = io_detail::strip_spaces(s);
  bool negate = !w.empty() && w[0] == '-';
  if (negate) w = w.substr(1);
  mat2 m = to_matrix_raw(parse_gamma(w));
  return negate ? neg(m) : m;
}

inline std::string print_mat(const mat2& m) {
  if (m.det() != 1) throw mb_error("NotUnimodular", "matrix must have det 1");
  gamma_elt g = matrix_to_gamma(m);
  std::string w = print_gamma(g);
  return to_matrix_raw(g) == m ? w : "-" + w;
}

// --------------------------------------------------------- factorization files

struct fact_file {
  std::string group;  // "gamma", "sl2", or "b3"
  gamma_fact gamma;
  sl2_fact sl2;
  braid_fact b3;

  size_t length() const {
    if (group == "gamma") return gamma.length();
    if (group == "sl2") return sl2.length();
    return b3.length();
  }
};

inline fact_file parse_fact_file(const std::string& text) {
  fact_file out;
  std::string body;
  bool have_header = false;
  for (const std::string& raw : io_detail::split(text, '\n')) {
    std::string line = io_detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!have_header) {
      if (line.rfind("group=", 0) != 0)
        throw mb_error("TagMismatch", "expected a group=... header line");
      out.group = io_detail::trim(line.substr(6));
      if (out.group != "gamma" && out.group != "sl2" && out.group != "b3")
        throw mb_error("TagMismatch", "unknown group tag '" + out.group + "'");
      have_header = true;
    } else
      body += line + " ";
  }
  if (!have_header)
    throw mb_error("TagMismatch", "missing group=... header line");
  std::vector<std::string> parts = io_detail::split(body, ';');
  for (size_t i = 0; i < parts.size(); i++) {
    std::string w = io_detail::trim(parts[i]);
    if (w.empty()) {
      if (i + 1 == parts.size()) continue;  // trailing separator
      throw mb_error("BadWord", "empty factorization entry");
    }
    if (out.group == "gamma")
      out.gamma.m.push_back(parse_gamma(io_detail::strip_spaces(w)));
    else if (out.group == "sl2")
      out.sl2.m.push_back(parse_mat(w));
    else
      out.b3.m.push_back(parse_braid(w));
  }
  return out;
}

namespace io_detail {

inline std::string join_entries(const std::vector<std::string>& words) {
  std::string s;
  for (size_t i = 0; i < words.size(); i++) {
    if (i) s += "; ";
    s += words[i];
  }
  s += "\n";
  return s;
}

}  // namespace io_detail

inline std::string print_fact_file(const gamma_fact& f) {
  std::vector<std::string> w;
  for (const auto& g : f.m) w.push_back(print_gamma(g));
  return "group=gamma\n" + io_detail::join_entries(w);
}

inline std::string print_fact_file(const sl2_fact& f) {
  std::vector<std::string> w;
  for (const auto& m : f.m) w.push_back(print_mat(m));
  return "group=sl2\n" + io_detail::join_entries(w);
}

inline std::string print_fact_file(const braid_fact& f) {
  std::vector<std::string> w;
  for (const auto& b : f.m) w.push_back(print_braid(b));
  return "group=b3\n" + io_detail::join_entries(w);
}

// --------------------------------------------------------------- tree literals

struct tree_literal {
  marked_tree shape;
  std::vector<leaf_label> labels;  // empty when the literal carries none
  bool labeled = false;
};

inline tree_literal parse_tree_literal(const std::string& s) {
  tree_literal out;
  std::string head = s, tail;
  size_t bang = s.find('!');
  if (bang != std::string::npos) {
    head = s.substr(0, bang);
    tail = s.substr(bang + 1);
    out.labeled = true;
  }
  head = io_detail::trim(head);
  if (head.rfind("b:", 0) == 0)
    out.shape = tree_from_bits(io_detail::strip_spaces(head.substr(2)));
  else {
    std::vector<int> m;
    for (const std::string& tok : io_detail::split(head, ',')) {
      std::string t = io_detail::trim(tok);
      if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
        throw mb_error("BadTree", "distance sequences are comma-separated integers");
      m.push_back(std::stoi(t));
    }
    out.shape = tree_from_sequence(m);
  }
  if (out.labeled) {
    std::istringstream in(tail);
    std::string tok;
    while (in >> tok) {
      if (tok == "L")
        out.labels.push_back(leaf_label::loop);
      else if (tok == "W")
        out.labels.push_back(leaf_label::white);
      else if (tok == "B")
        out.labels.push_back(leaf_label::black);
      else if (tok == "T")
        out.labels.push_back(leaf_label::triangle);
      else
        throw mb_error("BadLabels", "labels are L, W, B, or T");
    }
    if ((int)out.labels.size() != out.shape.nodes() + 2)
      throw mb_error("BadLabels", "need one label per leaf");
  }
  return out;
}

inline std::string print_tree_literal(const marked_tree& t) {
  std::vector<int> m = distance_sequence(t);
  std::string s;
  for (size_t i = 0; i < m.size(); i++) {
    if (i) s += ',';
    s += std::to_string(m[i]);
  }
  return s;
}

// ------------------------------------------------------- skeleton / core JSON

namespace io_detail {

inline json graph_labels(const std::vector<int>& op, const std::vector<int>& nx) {
  json labels = json::object();
  for (size_t e = 0; e < op.size(); e++) {
    std::string l;
    if (op[e] == (int)e) l = "white";
    if (nx[e] == (int)e) l = l.empty() ? "black" : l + "+black";
    if (nx[e] < 0) l = l.empty() ? "triangle" : l + "+triangle";
    if (!l.empty()) labels[std::to_string(e)] = l;
  }
  return labels;
}

}  // namespace io_detail

inline json core_json(const core_graph& c) {
  json j;
  j["size"] = c.n;
  j["op"] = c.op;
  j["nx"] = c.nx;
  j["kind"] = c.complete() ? "3-regular" : "3-1";
  j["labels"] = io_detail::graph_labels(c.op, c.nx);
  j["base"] = c.base;
  return j;
}

inline json skeleton_json(const skeleton& s) {
  json j;
  j["size"] = s.n;
  j["op"] = s.op;
  j["nx"] = s.nx;
  j["kind"] = (s.kind == sk_kind::three_regular) ? "3-regular" : "3-1";
  j["labels"] = io_detail::graph_labels(s.op, s.nx);
  if (s.pointed()) j["base"] = s.base;
  return j;
}

inline skeleton skeleton_from_json(const json& j) {
  if (!j.is_object() || !j.contains("op") || !j.contains("nx"))
    throw mb_error("InvalidSkeleton", "need op and nx arrays");
  std::vector<int> op = j["op"].get<std::vector<int>>();
  std::vector<int> nx = j["nx"].get<std::vector<int>>();
  sk_kind kind = sk_kind::three_regular;
  if (j.contains("kind")) {
    std::string k = j["kind"].get<std::string>();
    if (k == "3-1")
      kind = sk_kind::three_one;
    else if (k != "3-regular")
      throw mb_error("InvalidSkeleton", "kind must be 3-regular or 3-1");
  }
  int base = j.contains("base") ? j["base"].get<int>() : -1;
  skeleton s = make_skeleton(std::move(op), std::move(nx), kind, base);
  if (j.contains("size") && j["size"].get<int>() != s.n)
    throw mb_error("InvalidSkeleton", "size does not match the arrays");
  return s;
}

inline core_graph core_from_json(const json& j) {
  if (!j.is_object() || !j.contains("op") || !j.contains("nx"))
    throw mb_error("InvalidSkeleton", "need op and nx arrays");
  core_graph c;
  c.op = j["op"].get<std::vector<int>>();
  c.nx = j["nx"].get<std::vector<int>>();
  c.n = (int)c.op.size();
  if ((int)c.nx.size() != c.n)
    throw mb_error("InvalidSkeleton", "op and nx lengths differ");
  c.base = j.contains("base") ? j["base"].get<int>() : 0;
  if (c.base < 0 || c.base >= c.n)
    throw mb_error("InvalidSkeleton", "base out of range");
  c.nxi.assign(c.n, -1);
  for (int e = 0; e < c.n; e++) {
    if (c.op[e] < 0 || c.op[e] >= c.n || c.op[c.op[e]] != e)
      throw mb_error("InvalidSkeleton", "op is not an involution");
    if (c.nx[e] >= c.n)
      throw mb_error("InvalidSkeleton", "nx entry out of range");
    if (c.nx[e] >= 0) {
      if (c.nxi[c.nx[e]] != -1)
        throw mb_error("InvalidSkeleton", "nx is not injective");
      c.nxi[c.nx[e]] = e;
    }
  }
  for (int e = 0; e < c.n; e++)
    if (c.nx[e] >= 0 && c.nxi[e] == -1)
      throw mb_error("InvalidSkeleton", "nx orbits must close or end in triangles");
  return c;
}

// ------------------------------------------------------------------ DOT output

// Ribbon-graph picture: one node per trivalent/monovalent black vertex (the
// nx-orbits), an open node per loose white end, a triangle node per marked
// slot.  Edge labels record each dart's position in its vertex's cyclic order.
inline std::string core_dot(const core_graph& c, const std::string& name = "core") {
  std::vector<int> vertex(c.n, -1), slot(c.n, 0);
  int nv = 0;
  for (int e = 0; e < c.n; e++) {
    if (vertex[e] >= 0 || c.nx[e] < 0) continue;
    int a = e, s = 0;
    bool cyc = true;
    // only closed nx-orbits name a vertex; walks hitting a triangle stay put
    std::vector<int> orbit;
    do {
      orbit.push_back(a);
      a = c.nx[a];
      if (a < 0) {
        cyc = false;
        break;
      }
    } while (a != e && (int)orbit.size() <= c.n);
    if (!cyc) continue;
    for (int d : orbit) {
      vertex[d] = nv;
      slot[d] = s++;
    }
    nv++;
  }
  std::ostringstream out;
  out << "graph " << name << " {\n";
  out << "  node [label=\"\"];\n";
  for (int v = 0; v < nv; v++)
    out << "  b" << v << " [shape=circle style=filled fillcolor=black];\n";
  for (int e = 0; e < c.n; e++) {
    if (c.nx[e] < 0)
      out << "  t" << e << " [shape=triangle];\n";
    if (c.op[e] == e)
      out << "  w" << e << " [shape=circle];\n";
  }
  auto end_name = [&](int e) {
    if (c.nx[e] < 0) return "t" + std::to_string(e);
    return "b" + std::to_string(vertex[e]);
  };
  for (int e = 0; e < c.n; e++) {
    bool is_base = (e == c.base || c.op[e] == c.base);
    std::string style = is_base ? " penwidth=2" : "";
    if (c.op[e] == e)
      out << "  " << end_name(e) << " -- w" << e << " [taillabel=\"" << slot[e]
          << "\"" << style << "];\n";
    else if (e < c.op[e])
      out << "  " << end_name(e) << " -- " << end_name(c.op[e]) << " [taillabel=\""
          << slot[e] << "\" headlabel=\"" << slot[c.op[e]] << "\"" << style
          << "];\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string skeleton_dot(const skeleton& s, const std::string& name = "skeleton") {
  core_graph c;
  c.n = s.n;
  c.op = s.op;
  c.nx = s.nx;
  c.nxi = s.nxi;
  c.base = s.pointed() ? s.base : 0;
  return core_dot(c, name);
}

// --------------------------------------------------------------- JSON reports

inline json lattice_json(const int_lattice& l) {
  json j;
  j["rank"] = l.rank();
  j["gram"] = l.gram;
  j["det"] = l.det;
  j["fingerprint"] = fingerprint(l);
  return j;
}

namespace io_detail {

inline std::string code_string(const std::vector<int>& code) {
  std::string s;
  for (size_t i = 0; i < code.size(); i++) {
    if (i) s += ',';
    s += std::to_string(code[i]);
  }
  return s;
}

inline void fill_group_fields(json& j, const core_graph& c) {
  auto idx = core_index(c);
  if (idx)
    j["group_index"] = *idx;
  else
    j["group_index"] = "infinite";
  j["core_code"] = code_string(core_canonical_code(c));
}

}  // namespace io_detail

inline json invariant_report(const braid_fact& f) {
  json j;
  braid_elt m = monodromy_at_infinity(f);
  j["m_infty"] = print_braid(m);
  j["m_infty_class"] =
      print_cyclic(conjugacy_class(m.img)) + ",deg=" + std::to_string(m.deg);
  io_detail::fill_group_fields(j, monodromy_group(f));
  j["abelianization"] = abelianization(f);
  return j;
}

inline json invariant_report(const gamma_fact& f) {
  json j;
  gamma_elt m = monodromy_at_infinity(f);
  j["m_infty"] = print_gamma(m);
  j["m_infty_class"] = print_cyclic(conjugacy_class(m));
  io_detail::fill_group_fields(j, monodromy_group(f));
  bool simple = std::all_of(f.m.begin(), f.m.end(),
                            [](const gamma_elt& g) { return is_simple(g); });
  if (simple) j["abelianization"] = abelianization(lift(f));
  return j;
}

inline json invariant_report(const sl2_fact& f) {
  json j;
  mat2 m = monodromy_at_infinity(f);
  j["m_infty"] = print_mat(m);
  gamma_elt g = matrix_to_gamma(m);
  std::string sign = (to_matrix_raw(g) == m) ? "" : "-";
  j["m_infty_class"] = sign + print_cyclic(conjugacy_class(g));
  gamma_fact down;
  for (const auto& e : f.m) down.m.push_back(matrix_to_gamma(e));
  io_detail::fill_group_fields(j, monodromy_group(down));
  bool simple = std::all_of(f.m.begin(), f.m.end(),
                            [](const mat2& e) { return is_simple(e); });
  if (simple) j["abelianization"] = abelianization(lift(down));
  return j;
}

inline std::string compare_verdict(const compare_report& r) {
  if (r.weakly_distinguished()) return "not equivalent";
  if (r.strongly_distinguished())
    return "not strongly equivalent; weak equivalence undecided";
  return "indistinguishable by these invariants";
}

inline json compare_json(const compare_report& r) {
  json j;
  j["sameInfinity"] = r.same_infinity;
  j["sameGroupPointed"] = r.same_group_pointed;
  j["conjugateGroups"] = r.conjugate_groups;
  j["simple"] = r.simple;
  if (r.have_lattice) {
    j["latticeFingerprints"] = json::array({r.lattice1, r.lattice2});
    j["colorLatticeFingerprints"] = json::array({r.colors1, r.colors2});
    j["latticesMatch"] = r.lattices_match;
  }
  j["verdict"] = compare_verdict(r);
  return j;
}

}  // namespace modbraid
