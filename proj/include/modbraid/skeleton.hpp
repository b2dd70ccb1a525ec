#pragma once
// Skeletons: finite transitive Gamma-sets encoded as ribbon graphs.
// E is {0..n-1}; op is the edge involution (the Z/2 action is Y -> op) and
// nx the counterclockwise dart rotation (the Z/3 action is X -> nx^{-1}).
// kind three_regular forbids fixed points; three_one allows op-fixed darts
// (monovalent o-vertices) and nx-fixed darts (monovalent *-vertices).

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "modbraid/gamma.hpp"

namespace modbraid {

enum class sk_kind { three_regular, three_one };

struct skeleton {
  int n = 0;
  std::vector<int> op, nx, nxi;
  sk_kind kind = sk_kind::three_regular;
  int base = -1;  // -1 = unpointed

  bool pointed() const { return base >= 0; }
};

inline void rebuild_nxi(skeleton& s) {
  s.nxi.assign(s.n, -1);
  for (int e = 0; e < s.n; e++) s.nxi[s.nx[e]] = e;
}

// empty string = valid
inline std::string validate(const skeleton& s) {
  if (s.n <= 0) return "empty skeleton";
  if ((int)s.op.size() != s.n || (int)s.nx.size() != s.n) return "op/nx size mismatch";
  for (int e = 0; e < s.n; e++) {
    if (s.op[e] < 0 || s.op[e] >= s.n || s.nx[e] < 0 || s.nx[e] >= s.n)
      return "op/nx out of range";
  }
  for (int e = 0; e < s.n; e++)
    if (s.op[s.op[e]] != e) return "op is not an involution";
  std::vector<int> cnt(s.n, 0);
  for (int e = 0; e < s.n; e++) cnt[s.nx[e]]++;
  for (int e = 0; e < s.n; e++)
    if (cnt[e] != 1) return "nx is not a permutation";
  for (int e = 0; e < s.n; e++)
    if (s.nx[s.nx[s.nx[e]]] != e) return "nx does not have order 3";
  if (s.kind == sk_kind::three_regular) {
    for (int e = 0; e < s.n; e++) {
      if (s.op[e] == e) return "op has a fixed point (kind 3-regular)";
      if (s.nx[e] == e) return "nx has a fixed point (kind 3-regular)";
    }
  }
  // connectivity under {op, nx}
  std::vector<char> seen(s.n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int e = q.front();
    q.pop();
    for (int f : {s.op[e], s.nx[e]})
      if (!seen[f]) { seen[f] = 1; reached++; q.push(f); }
  }
  if (reached != s.n) return "not connected";
  if (s.base >= s.n) return "base out of range";
  return "";
}

inline skeleton make_skeleton(std::vector<int> op, std::vector<int> nx,
                              sk_kind kind = sk_kind::three_regular, int base = -1) {
  skeleton s;
  s.n = (int)op.size();
  s.op = std::move(op);
  s.nx = std::move(nx);
  s.kind = kind;
  s.base = base;
  std::string err = validate(s);
  if (!err.empty()) throw mb_error("InvalidSkeleton", err);
  rebuild_nxi(s);
  return s;
}

// left Gamma-action: X -> nx^{-1}, Y -> op; letters applied right to left
inline int act(const skeleton& s, const gamma_elt& g, int e) {
  for (auto it = g.w.rbegin(); it != g.w.rend(); ++it) {
    letter l = *it;
    e = (l == LX) ? s.nxi[e] : (l == LXX) ? s.nx[e] : s.op[e];
  }
  return e;
}

// ---------------------------------------------------------------- paths

// step codes: op, nx, nx^{-1}
constexpr uint8_t SOP = 0, SNX = 1, SNXI = 2;

struct skeleton_path {
  int start = 0;
  std::vector<uint8_t> word;  // applied left to right
};

inline gamma_elt evaluate(const skeleton_path& p) {
  std::vector<letter> raw;
  raw.reserve(p.word.size());
  for (uint8_t s : p.word) raw.push_back(s == SOP ? LY : s == SNX ? LX : LXX);
  return normalize(raw);
}

inline int path_end(const skeleton& s, const skeleton_path& p) {
  int e = p.start;
  for (uint8_t w : p.word)
    e = (w == SOP) ? s.op[e] : (w == SNX) ? s.nx[e] : s.nxi[e];
  return e;
}

inline std::vector<uint8_t> reverse_path_word(const std::vector<uint8_t>& w) {
  std::vector<uint8_t> r;
  r.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    r.push_back(*it == SOP ? SOP : *it == SNX ? SNXI : SNX);
  return r;
}

// ------------------------------------------------------- orbifold counts

struct orbifold_counts {
  int n0 = 0, n2 = 0, n3 = 0;  // free rank, order-2 and order-3 generators
};

inline orbifold_counts orbifold_invariants(const skeleton& s) {
  orbifold_counts c;
  int vorb = 0, eorb = 0;
  std::vector<char> seen(s.n, 0);
  for (int e = 0; e < s.n; e++) {
    if (s.op[e] == e) c.n2++;
    if (s.nx[e] == e) c.n3++;
    if (!seen[e]) {  // nx-orbit
      vorb++;
      for (int f = e; !seen[f]; f = s.nx[f]) seen[f] = 1;
    }
  }
  std::fill(seen.begin(), seen.end(), 0);
  for (int e = 0; e < s.n; e++)
    if (!seen[e]) { eorb++; seen[e] = seen[s.op[e]] = 1; }
  int chi = (vorb + c.n2) - eorb;  // graph with o-tips counted as vertices
  c.n0 = 1 - chi;
  return c;
}

inline int index(const skeleton& s) { return s.n; }

// ------------------------------------------------------ stabilizer basis

struct stab_basis {
  std::vector<gamma_elt> gens;
  std::vector<int> orders;  // 0 = infinite, else 2 or 3
  int free_rank() const {
    int r = 0;
    for (int o : orders) r += (o == 0);
    return r;
  }
};

// Free-product decomposition of Stab(base): a spanning tree over the
// vertices (nx-orbits) gives access paths; each extra op-edge contributes a
// free generator, each o-tip an involution, each *-vertex an order-3
// generator.  Monogons (op(e) = nx(e)) take the short way around so that
// pseudo-tree loop generators come out simple.
inline stab_basis stabilizer_basis(const skeleton& s) {
  if (!s.pointed()) throw mb_error("NotPointed", "stabilizer_basis needs a base point");
  std::vector<std::vector<uint8_t>> path(s.n);
  std::vector<char> have_path(s.n, 0);
  std::vector<char> vertex_seen(s.n, 0);  // flag on every element of a seen nx-orbit
  std::queue<int> anchors;

  auto open_vertex = [&](int a) {
    // paths for the whole nx-orbit of its anchor a
    vertex_seen[a] = 1;
    for (int f = s.nx[a]; f != a; f = s.nx[f]) {
      vertex_seen[f] = 1;
      path[f] = path[a];
      path[f].push_back(f == s.nx[a] ? SNX : SNXI);
      have_path[f] = 1;
    }
    anchors.push(a);
  };

  have_path[s.base] = 1;
  open_vertex(s.base);

  std::vector<std::pair<int, int>> extra_edges;
  std::vector<int> whites, blacks;
  std::set<std::pair<int, int>> edge_seen;

  while (!anchors.empty()) {
    int a = anchors.front();
    anchors.pop();
    std::vector<int> orbit{a};
    for (int f = s.nx[a]; f != a; f = s.nx[f]) orbit.push_back(f);
    if (orbit.size() == 1) blacks.push_back(a);
    for (int e : orbit) {
      int f = s.op[e];
      if (f == e) {
        whites.push_back(e);
        continue;
      }
      auto key = std::minmax(e, f);
      if (!edge_seen.insert({key.first, key.second}).second) continue;
      if (!vertex_seen[f]) {
        path[f] = path[e];
        path[f].push_back(SOP);
        have_path[f] = 1;
        open_vertex(f);
      } else {
        extra_edges.push_back({e, f});
      }
    }
  }

  stab_basis out;
  auto add = [&](std::vector<uint8_t> w, int order) {
    out.gens.push_back(evaluate({s.base, std::move(w)}));
    out.orders.push_back(order);
  };
  for (auto [e, f] : extra_edges) {
    std::vector<uint8_t> w;
    if (s.nx[e] == f) {  // monogon corner at e
      w = path[e];
      w.push_back(SNX);
      w.push_back(SOP);
      auto r = reverse_path_word(path[e]);
      w.insert(w.end(), r.begin(), r.end());
    } else if (s.nx[f] == e) {
      w = path[f];
      w.push_back(SNX);
      w.push_back(SOP);
      auto r = reverse_path_word(path[f]);
      w.insert(w.end(), r.begin(), r.end());
    } else {
      w = path[e];
      w.push_back(SOP);
      auto r = reverse_path_word(path[f]);
      w.insert(w.end(), r.begin(), r.end());
    }
    add(std::move(w), 0);
  }
  for (int e : whites) {
    std::vector<uint8_t> w = path[e];
    w.push_back(SOP);
    auto r = reverse_path_word(path[e]);
    w.insert(w.end(), r.begin(), r.end());
    add(std::move(w), 2);
  }
  for (int e : blacks) {
    std::vector<uint8_t> w = path[e];
    w.push_back(SNX);
    auto r = reverse_path_word(path[e]);
    w.insert(w.end(), r.begin(), r.end());
    add(std::move(w), 3);
  }
  return out;
}

// --------------------------------------------------- canonical labelings

// BFS relabeling from a fixed start; neighbor order op, nx, nx^{-1}.
inline std::vector<int> bfs_labels(const skeleton& s, int start) {
  std::vector<int> label(s.n, -1);
  std::vector<int> order;
  order.reserve(s.n);
  label[start] = 0;
  order.push_back(start);
  for (size_t i = 0; i < order.size(); i++) {
    int e = order[i];
    for (int f : {s.op[e], s.nx[e], s.nxi[e]})
      if (label[f] < 0) {
        label[f] = (int)order.size();
        order.push_back(f);
      }
  }
  return label;
}

inline std::vector<int> code_from_labels(const skeleton& s, const std::vector<int>& label) {
  std::vector<int> inv(s.n);
  for (int e = 0; e < s.n; e++) inv[label[e]] = e;
  // the kind tag is a validation marker, not structure: fixed points are
  // already visible in the arrays, so codes ignore it
  std::vector<int> code;
  code.reserve(2 * s.n + 1);
  code.push_back(s.n);
  for (int i = 0; i < s.n; i++) {
    int e = inv[i];
    code.push_back(label[s.op[e]]);
    code.push_back(label[s.nx[e]]);
  }
  return code;
}

inline std::vector<int> pointed_code(const skeleton& s) {
  if (!s.pointed()) throw mb_error("NotPointed", "pointed_code needs a base point");
  return code_from_labels(s, bfs_labels(s, s.base));
}

inline std::vector<int> canonical_code(const skeleton& s) {
  std::vector<int> best;
  for (int e = 0; e < s.n; e++) {
    auto code = code_from_labels(s, bfs_labels(s, e));
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

inline bool is_isomorphic(const skeleton& a, const skeleton& b) {
  if (a.n != b.n) return false;
  return canonical_code(a) == canonical_code(b);
}

inline bool pointed_is_isomorphic(const skeleton& a, const skeleton& b) {
  if (a.n != b.n) return false;
  return pointed_code(a) == pointed_code(b);
}

// Automorphisms act freely (deck transformations), so they are exactly the
// relabel-equivalences between BFS codes from different starts.
inline std::vector<std::vector<int>> automorphisms(const skeleton& s) {
  std::vector<std::vector<int>> auts;
  auto ref_labels = bfs_labels(s, 0);
  auto ref_code = code_from_labels(s, ref_labels);
  for (int e = 0; e < s.n; e++) {
    auto lab = bfs_labels(s, e);
    if (code_from_labels(s, lab) != ref_code) continue;
    // map: x -> lab^{-1}(ref_labels(x))
    std::vector<int> inv(s.n);
    for (int x = 0; x < s.n; x++) inv[lab[x]] = x;
    std::vector<int> perm(s.n);
    for (int x = 0; x < s.n; x++) perm[x] = inv[ref_labels[x]];
    auts.push_back(std::move(perm));
  }
  return auts;
}

// Is there an equivariant map p1 -> p2 (i.e. Stab(base1) <= Stab(base2))?
inline bool pointed_morphism_exists(const skeleton& a, const skeleton& b) {
  if (!a.pointed() || !b.pointed()) throw mb_error("NotPointed", "need base points");
  std::vector<int> to(a.n, -1);
  to[a.base] = b.base;
  std::queue<int> q;
  q.push(a.base);
  while (!q.empty()) {
    int e = q.front();
    q.pop();
    struct { int src, dst; } steps[2] = {{a.op[e], b.op[to[e]]}, {a.nx[e], b.nx[to[e]]}};
    for (auto st : steps) {
      if (to[st.src] < 0) {
        to[st.src] = st.dst;
        q.push(st.src);
      } else if (to[st.src] != st.dst) {
        return false;
      }
    }
  }
  return true;
}

// component of (base1, base2) in the product Gamma-set
inline skeleton fiber_product(const skeleton& a, const skeleton& b) {
  if (!a.pointed() || !b.pointed()) throw mb_error("NotPointed", "need base points");
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> elems;
  auto intern = [&](int x, int y) {
    auto [it, fresh] = id.try_emplace({x, y}, (int)elems.size());
    if (fresh) elems.push_back({x, y});
    return it->second;
  };
  intern(a.base, b.base);
  skeleton p;
  for (size_t i = 0; i < elems.size(); i++) {
    auto [x, y] = elems[i];
    int o = intern(a.op[x], b.op[y]);
    int nn = intern(a.nx[x], b.nx[y]);
    p.op.push_back(o);
    p.nx.push_back(nn);
  }
  p.n = (int)elems.size();
  p.base = 0;
  p.kind = sk_kind::three_regular;
  for (int e = 0; e < p.n; e++)
    if (p.op[e] == e || p.nx[e] == e) p.kind = sk_kind::three_one;
  if (a.kind == sk_kind::three_one || b.kind == sk_kind::three_one)
    p.kind = sk_kind::three_one;
  rebuild_nxi(p);
  return p;
}

// opposite orientation
inline skeleton mirror(const skeleton& s) {
  skeleton m = s;
  m.nx = s.nxi;
  m.nxi = s.nx;
  return m;
}

}  // namespace modbraid
