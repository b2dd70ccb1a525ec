#pragma once
// Marked binary trees, pseudo-trees, distance sequences, counting formulas,
// generalized pseudo-trees with labeled leaves, and the derived surface /
// real-curve summaries.
//
// A marked tree with k nodes is stored as its preorder bitstring (1 = node,
// 0 = leaf, length 2k+1); the marked end is the plant edge above the root.
// Its pseudo-tree is the 3-regular ribbon graph obtained by replacing every
// leaf (marked end included) with a small loop; the k+2 loop corners cut the
// outer (5k+4)-gonal face into the distance sequence (m_1, ..., m_{k+2}).

#include <string>

#include "modbraid/fold.hpp"

namespace modbraid {

// ------------------------------------------------------------ marked trees

struct marked_tree {
  std::vector<char> bits;  // 0/1 values, preorder

  int nodes() const {
    int k = 0;
    for (char b : bits) k += b;
    return k;
  }
  int leaves() const { return nodes() + 2; }  // marked end included
  bool operator==(const marked_tree& o) const { return bits == o.bits; }
  bool operator!=(const marked_tree& o) const { return !(*this == o); }
  bool operator<(const marked_tree& o) const { return bits < o.bits; }
};

inline std::string bits_string(const marked_tree& t) {
  std::string s;
  for (char b : t.bits) s += char('0' + b);
  return s;
}

inline marked_tree tree_from_bits(const std::string& s) {
  marked_tree t;
  int slots = 1;
  for (size_t i = 0; i < s.size(); i++) {
    if (slots <= 0) throw mb_error("BadTree", "trailing symbols in bitstring");
    if (s[i] == '1') {
      t.bits.push_back(1);
      slots++;
    } else if (s[i] == '0') {
      t.bits.push_back(0);
      slots--;
    } else {
      throw mb_error("BadTree", "bitstring must consist of 0s and 1s");
    }
  }
  if (slots != 0) throw mb_error("BadTree", "unbalanced bitstring");
  return t;
}

// stream all C(k) marked trees with k nodes in lexicographic bit order
template <class F>
inline void enumerate_marked(int k, F&& fn) {
  if (k < 0) throw mb_error("Range", "negative node count");
  std::vector<char> buf;
  buf.reserve(2 * k + 1);
  marked_tree scratch;
  auto rec = [&](auto&& self, int nodes_left, int slots) -> void {
    if (slots == 0) {
      scratch.bits = buf;
      fn(scratch);
      return;
    }
    if (nodes_left > 0) {
      buf.push_back(1);
      self(self, nodes_left - 1, slots + 1);
      buf.pop_back();
    }
    if (slots >= 2 || nodes_left == 0) {
      buf.push_back(0);
      self(self, nodes_left, slots - 1);
      buf.pop_back();
    }
  };
  rec(rec, k, 1);
}

// --------------------------------------------------------- pseudo-trees

// Vertex conventions: a leaf becomes a monogon (t, l1, l2) with
// nx: t -> l1 -> l2 -> t and op(l1) = l2; a node gets darts (p, f, s) with
// nx: p -> s -> f -> p, f and s facing the two children.  The marked end is
// a monogon allocated last; its t dart is the base.
struct pseudo_tree_data {
  skeleton sk;
  std::vector<int> corners;  // t darts of leaves 1..k+2 in preorder
};

inline pseudo_tree_data pseudo_tree_full(const marked_tree& t) {
  int k = t.nodes();
  int n = 6 * k + 6;
  skeleton s;
  s.n = n;
  s.op.assign(n, -1);
  s.nx.assign(n, -1);
  s.kind = sk_kind::three_regular;
  std::vector<int> corners;
  int next = 0;
  auto monogon = [&]() {
    int d = next;
    next += 3;
    s.nx[d] = d + 1;
    s.nx[d + 1] = d + 2;
    s.nx[d + 2] = d;
    s.op[d + 1] = d + 2;
    s.op[d + 2] = d + 1;
    corners.push_back(d);
    return d;
  };
  size_t pos = 0;
  auto build = [&](auto&& self) -> int {
    if (t.bits[pos++] == 0) return monogon();
    int p = next;
    next += 3;
    s.nx[p] = p + 2;      // p -> s
    s.nx[p + 2] = p + 1;  // s -> f
    s.nx[p + 1] = p;      // f -> p
    int a = self(self);
    s.op[p + 1] = a;
    s.op[a] = p + 1;
    int b = self(self);
    s.op[p + 2] = b;
    s.op[b] = p + 2;
    return p;
  };
  int root = build(build);
  assert(pos == t.bits.size());
  int marked = monogon();
  s.op[marked] = root;
  s.op[root] = marked;
  s.base = marked;
  assert(next == n);
  std::string err = validate(s);
  if (!err.empty()) throw mb_error("Internal", "pseudo-tree: " + err);
  rebuild_nxi(s);
  pseudo_tree_data d;
  d.sk = std::move(s);
  // corners in leaf order 1..k+1, then the marked leaf k+2
  d.corners = std::move(corners);
  return d;
}

inline skeleton pseudo_tree(const marked_tree& t) { return pseudo_tree_full(t).sk; }

// next dart of the face through e: phi = nx^{-1} o op = action of XY
inline int face_next(const skeleton& s, int e) { return s.nxi[s.op[e]]; }

// the outer-face orbit starting at the base, in phi order
inline std::vector<int> base_points(const skeleton& s) {
  if (!s.pointed()) throw mb_error("NotPointed", "base_points needs a base");
  std::vector<int> orbit;
  int e = s.base;
  do {
    orbit.push_back(e);
    e = face_next(s, e);
  } while (e != s.base);
  return orbit;
}

// corner gaps between consecutive loop edges along the outer face
inline std::vector<int> distance_sequence(const marked_tree& t) {
  pseudo_tree_data d = pseudo_tree_full(t);
  std::vector<char> is_corner(d.sk.n, 0);
  for (int c : d.corners) is_corner[c] = 1;
  std::vector<int> m;
  int steps = 0;
  int e = d.sk.base;
  do {
    e = face_next(d.sk, e);
    steps++;
    if (is_corner[e]) {
      m.push_back(steps);
      steps = 0;
    }
  } while (e != d.sk.base);
  assert((int)m.size() == t.nodes() + 2);
  return m;
}

// rebuild the tree from an extended distance sequence
inline marked_tree tree_from_sequence(const std::vector<int>& m) {
  if (m.size() < 2) throw mb_error("BadSequence", "need at least two entries");
  int k = (int)m.size() - 2;
  long total = 0;
  for (int v : m) {
    if (v < 2) throw mb_error("BadSequence", "entries must be at least 2");
    total += v;
  }
  if (total != 5L * k + 4)
    throw mb_error("BadSequence", "entries must sum to 5k+4");
  // token stream between the marked leaf and itself: N^{m1-2} L ... N^{mk+2-2}
  std::string tok;
  for (size_t i = 0; i < m.size(); i++) {
    tok += std::string(m[i] - 2, 'N');
    if (i + 1 < m.size()) tok += 'L';
  }
  size_t pos = 0;
  marked_tree t;
  auto parse = [&](auto&& self) -> void {
    if (pos < tok.size() && tok[pos] == 'N') {
      pos++;
      t.bits.push_back(1);
      self(self);
      if (pos >= tok.size() || tok[pos] != 'N')
        throw mb_error("BadSequence", "not a tree contour");
      pos++;
      self(self);
      if (pos >= tok.size() || tok[pos] != 'N')
        throw mb_error("BadSequence", "not a tree contour");
      pos++;
    } else if (pos < tok.size() && tok[pos] == 'L') {
      pos++;
      t.bits.push_back(0);
    } else if (tok.empty()) {
      t.bits.push_back(0);  // k = 0
    } else {
      throw mb_error("BadSequence", "not a tree contour");
    }
  };
  parse(parse);
  if (pos != tok.size()) throw mb_error("BadSequence", "not a tree contour");
  if (t.nodes() != k) throw mb_error("BadSequence", "not a tree contour");
  return t;
}

// --------------------------------------------------- classes and counting

inline std::vector<int> min_rotation(const std::vector<int>& v) {
  std::vector<int> best = v, cur = v;
  for (size_t i = 1; i < v.size(); i++) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

inline int rotation_stabilizer(const std::vector<int>& v) {
  int count = 0;
  std::vector<int> cur = v;
  for (size_t i = 0; i < v.size(); i++) {
    if (cur == v) count++;
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
  }
  return count;
}

struct tree_class {
  std::vector<int> key;  // lexicographically minimal rotation
  int aut = 1;           // rotations fixing the extended sequence
  marked_tree rep;
};

inline std::vector<tree_class> enumerate_classes(int k) {
  std::map<std::vector<int>, tree_class> seen;
  enumerate_marked(k, [&](const marked_tree& t) {
    std::vector<int> m = distance_sequence(t);
    std::vector<int> key = min_rotation(m);
    auto it = seen.find(key);
    if (it == seen.end()) {
      tree_class c;
      c.key = key;
      c.aut = rotation_stabilizer(m);
      c.rep = t;
      seen.emplace(std::move(key), std::move(c));
    }
  });
  std::vector<tree_class> out;
  for (auto& [key, c] : seen) out.push_back(std::move(c));
  return out;
}

struct tree_counts {
  unsigned long long catalan = 0;
  unsigned long long t1 = 0, t2 = 0, t3 = 0, t = 0;
  unsigned long long t_marked = 0;  // pointed classes, (5k+4) C(k) / (k+2)
};

inline unsigned long long catalan_number(int k) {
  if (k < 0 || k > 30) throw mb_error("Range", "Catalan argument out of range");
  unsigned __int128 c = 1;
  for (int i = 0; i < k; i++) {
    c = c * 2 * (2 * i + 1);
    c /= (i + 2);
  }
  return (unsigned long long)c;
}

inline tree_counts counts(int k) {
  if (k < 0 || k > 30) throw mb_error("Range", "counting is exact for k <= 30");
  tree_counts r;
  r.catalan = catalan_number(k);
  r.t2 = (k % 2 == 0) ? catalan_number(k / 2) : 0;
  r.t3 = (k % 3 == 1) ? catalan_number((k - 1) / 3) : 0;
  unsigned __int128 six_c = (unsigned __int128)r.catalan * 6;
  assert(six_c % (unsigned)(k + 2) == 0);
  unsigned __int128 base = six_c / (unsigned)(k + 2);  // 6 C(k) / (k+2)
  unsigned __int128 t6 = base + 3 * (unsigned __int128)r.t2 + 4 * (unsigned __int128)r.t3;
  assert(t6 % 6 == 0);
  r.t = (unsigned long long)(t6 / 6);
  r.t1 = r.t - r.t2 - r.t3;
  unsigned __int128 tm = (unsigned __int128)(5 * k + 4) * r.catalan;
  assert(tm % (unsigned)(k + 2) == 0);
  r.t_marked = (unsigned long long)(tm / (unsigned)(k + 2));
  return r;
}

// dedup over explicitly enumerated trees; for cross-checking counts()
inline tree_counts counts_enumerated(int k) {
  tree_counts r;
  r.catalan = 0;
  std::set<std::vector<int>> keys;
  unsigned long long by_aut[4] = {0, 0, 0, 0};
  unsigned long long marked = 0;
  enumerate_marked(k, [&](const marked_tree& t) {
    r.catalan++;
    std::vector<int> m = distance_sequence(t);
    std::vector<int> key = min_rotation(m);
    if (keys.insert(std::move(key)).second) {
      int a = rotation_stabilizer(m);
      assert(a >= 1 && a <= 3 && (5 * k + 4) % a == 0);
      by_aut[a]++;
      marked += (unsigned long long)(5 * k + 4) / a;
    }
  });
  r.t1 = by_aut[1];
  r.t2 = by_aut[2];
  r.t3 = by_aut[3];
  r.t = r.t1 + r.t2 + r.t3;
  r.t_marked = marked;
  return r;
}

// ----------------------------------------------- generalized pseudo-trees

enum class leaf_label { loop, white, black, triangle };

struct gen_tree {
  marked_tree shape;
  std::vector<leaf_label> labels;  // leaves 1..k+1 in preorder, then marked
};

inline int label_count(const gen_tree& g, leaf_label l) {
  int c = 0;
  for (leaf_label x : g.labels) c += (x == l);
  return c;
}

// leaf -> owning node in preorder numbering; the marked end belongs to the
// root node (or to the lone leaf when k = 0)
inline std::vector<int> leaf_nodes(const marked_tree& t) {
  int k = t.nodes();
  std::vector<int> owner(k + 2, -1);
  int next_leaf = 0, next_node = 0;
  size_t pos = 0;
  auto rec = [&](auto&& self, int parent) -> void {
    if (t.bits[pos++] == 0) {
      owner[next_leaf++] = parent;
      return;
    }
    int id = next_node++;
    self(self, id);
    self(self, id);
  };
  rec(rec, -1);
  owner[k + 1] = 0;          // the plant edge attaches to the root node
  if (k == 0) owner[0] = 0;  // no nodes: both ends share the plant edge
  return owner;
}

inline bool admissible(const gen_tree& g) {
  if ((int)g.labels.size() != g.shape.nodes() + 2) return false;
  std::vector<int> owner = leaf_nodes(g.shape);
  std::map<int, int> tri_per_node;
  for (size_t i = 0; i < g.labels.size(); i++)
    if (g.labels[i] == leaf_label::triangle)
      if (++tri_per_node[owner[i]] > 1) return false;
  return true;
}

inline core_graph generalized_pseudo_tree(const gen_tree& g) {
  if ((int)g.labels.size() != g.shape.nodes() + 2)
    throw mb_error("BadLabels", "need one label per leaf");
  if (!admissible(g))
    throw mb_error("NotAdmissible", "two triangle leaves share a node");
  int k = g.shape.nodes();

  std::vector<int> op, nx;
  auto add = [&](int o, int x) {
    op.push_back(o);
    nx.push_back(x);
    return (int)op.size() - 1;
  };
  // returns the plug dart of a leaf construct, or -1 for a white slot
  auto plug = [&](leaf_label l) -> int {
    switch (l) {
      case leaf_label::loop: {
        int t = add(-1, -1);
        int l1 = add(-1, -1), l2 = add(-1, -1);
        nx[t] = l1;
        nx[l1] = l2;
        nx[l2] = t;
        op[l1] = l2;
        op[l2] = l1;
        return t;
      }
      case leaf_label::black:
        return add(-1, (int)op.size());  // nx fixed on itself
      case leaf_label::triangle:
        return add(-1, -1);
      case leaf_label::white:
        return -1;
    }
    return -1;
  };
  auto join = [&](int a, int b) {
    // one of a, b may be a white slot (-1 with the other op-fixed)
    if (a < 0 && b < 0)
      throw mb_error("NotAdmissible", "two white ends on one edge");
    if (a < 0)
      op[b] = b;
    else if (b < 0)
      op[a] = a;
    else {
      op[a] = b;
      op[b] = a;
    }
  };

  size_t pos = 0;
  int next_leaf = 0;
  auto build = [&](auto&& self) -> int {
    if (g.shape.bits[pos++] == 0) return plug(g.labels[next_leaf++]);
    int p = add(-1, -1);
    int f = add(-1, -1), s = add(-1, -1);
    nx[p] = s;
    nx[s] = f;
    nx[f] = p;
    join(f, self(self));
    join(s, self(self));
    return p;
  };
  int root = build(build);
  assert(pos == g.shape.bits.size());
  int marked = plug(g.labels[k + 1]);
  join(root, marked);

  if (op.empty()) throw mb_error("NotAdmissible", "empty construction");

  // base: the dart on the marked side of the plant edge (its partner if the
  // marked end is a white slot)
  int base = marked >= 0 ? marked : root;

  fold_detail::partial p;
  int n = (int)op.size();
  for (int e = 0; e < n; e++) p.add(nx[e] < 0);
  std::vector<int> nxi(n, -1);
  for (int e = 0; e < n; e++)
    if (nx[e] >= 0) nxi[nx[e]] = e;
  for (int e = 0; e < n; e++) {
    p.fy[e] = op[e];
    if (nx[e] >= 0) p.fx[e] = nxi[e];
  }
  p.base = base;
  return fold_detail::to_core(p);
}

// triangle-free generalized pseudo-trees are finite (3,1)-skeletons
inline skeleton generalized_skeleton(const gen_tree& g) {
  return core_to_skeleton(generalized_pseudo_tree(g));
}

// ------------------------------------------------- walks along the regions

// next dart along the region boundary; a triangle bounces the walk back
inline int region_next(const core_graph& c, int e) {
  int f = c.op[e];
  if (f < 0) throw mb_error("Internal", "region walk hit an undefined op");
  return c.triangle(f) ? f : c.nxi[f];
}

struct infinity_data {
  std::vector<int> m;  // distances between consecutive triangles
  gamma_elt product;   // right-to-left prod of (XY)^{m_i - 1} X over i
};

// distances along the outer region between consecutive triangles, counting
// the visited vertex corners (all non-triangle darts passed)
inline infinity_data infinity_distances(const core_graph& c) {
  int t0 = -1;
  for (int e = 0; e < c.n && t0 < 0; e++)
    if (c.triangle(e)) t0 = e;
  if (t0 < 0) throw mb_error("NoTriangles", "core is complete");

  infinity_data out;
  int e = t0, gap = 0, seen_tri = 0;
  std::vector<char> visited(c.n, 0);
  do {
    e = region_next(c, e);
    if (c.triangle(e)) {
      out.m.push_back(gap);
      gap = 0;
      seen_tri++;
    } else {
      visited[e] = 1;
      gap++;
    }
  } while (e != t0);
  if (seen_tri != c.triangles())
    throw mb_error("MultipleRegions", "triangles lie on different regions");

  gamma_elt xy = parse_gamma("XY");
  for (int mi : out.m)
    out.product = multiply(multiply(gamma_pow(xy, mi - 1), gamma_x()), out.product);
  return out;
}

// distances between consecutive monovalent black vertices along the outer
// region of a complete core, endpoints included (each entry is gap + 1)
inline std::vector<int> black_distances(const core_graph& c) {
  if (!c.complete()) throw mb_error("HasTriangles", "core must be finite");
  int b0 = -1;
  for (int e = 0; e < c.n && b0 < 0; e++)
    if (c.nx[e] == e) b0 = e;
  if (b0 < 0) throw mb_error("NoBlacks", "no monovalent black vertices");

  int total = 0;
  for (int e = 0; e < c.n; e++) total += (c.nx[e] == e);
  std::vector<int> m;
  int e = b0, gap = 0;
  do {
    e = region_next(c, e);
    gap++;
    if (c.nx[e] == e) {
      m.push_back(gap + 1);
      gap = 0;
    }
  } while (e != b0);
  if ((int)m.size() != total)
    throw mb_error("MultipleRegions", "black vertices lie on different regions");
  return m;
}

inline bool cyclically_equal(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  std::vector<int> cur = b;
  for (size_t i = 0; i < b.size(); i++) {
    if (cur == a) return true;
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
  }
  return false;
}

// ------------------------------------------------------- surface summaries

struct fiber_summary {
  int i1 = 0;       // plain I_1 fibers in monogonal regions
  int i1_star = 0;  // monogons promoted to I_1^*
  int iv_star = 0;  // monovalent black vertices
  int iii_star = 0; // monovalent white vertices
  long outer_s = 0;
  bool outer_starred = false;
  long chi = 0;
  long index = 0;  // |E| of the skeleton = index of the monodromy group

  std::string display() const {
    std::string s;
    auto term = [&](int count, const std::string& name) {
      if (count == 0) return;
      if (!s.empty()) s += " + ";
      if (count > 1) s += std::to_string(count);
      s += name;
    };
    term(i1, "I1");
    term(i1_star, "I1*");
    term(iv_star, "IV*");
    term(iii_star, "III*");
    term(1, "I" + std::to_string(outer_s) + (outer_starred ? "*" : ""));
    return s;
  }
};

// singular fibers of the extremal elliptic surface built on a finite
// generalized pseudo-tree; starred_monogons optionally promotes that many
// I_1 fibers to I_1^*, flipping the outer star to keep chi divisible by 12
inline fiber_summary fiber_type_summary(const gen_tree& g, int starred_monogons = 0) {
  if (!admissible(g)) throw mb_error("NotAdmissible", "inadmissible labels");
  if (label_count(g, leaf_label::triangle) > 0)
    throw mb_error("HasTriangles", "surface summaries need a finite skeleton");
  int k = g.shape.nodes();
  int nb = label_count(g, leaf_label::black);
  int nw = label_count(g, leaf_label::white);
  int loops = k + 2 - nb - nw;
  if (starred_monogons < 0 || starred_monogons > loops)
    throw mb_error("Range", "starred monogon count out of range");

  fiber_summary r;
  r.i1 = loops - starred_monogons;
  r.i1_star = starred_monogons;
  r.iv_star = nb;
  r.iii_star = nw;
  r.outer_s = 5L * k + 4 - nb - 2 * nw;
  r.outer_starred = ((k + nb + nw) % 2 == 0) != (starred_monogons % 2 == 1);
  r.index = 6L * k + 6 - 2 * nb - 3 * nw;
  r.chi = r.i1 + 7L * r.i1_star + 8L * nb + 9L * nw + r.outer_s +
          (r.outer_starred ? 6 : 0);
  assert(r.chi % 12 == 0);
  // cross-check against the fiber-count formula
  // chi = |E| + 6t + 2 n_II + 3 n_III + 4 n_IV
  long t = r.i1_star + nb + nw + (r.outer_starred ? 1 : 0);
  assert(r.chi == r.index + 6 * t + 2L * nb + 3L * nw);
  return r;
}

struct real_curve {
  int hirzebruch = 0;  // the curve lives in Sigma_{2k+2-z}
  int ovals = 0;       // 5k+4-z
  int zigzags = 0;     // z = number of black leaves
};

inline real_curve real_curve_summary(const gen_tree& g) {
  if (!admissible(g)) throw mb_error("NotAdmissible", "inadmissible labels");
  for (leaf_label l : g.labels)
    if (l != leaf_label::loop && l != leaf_label::black)
      throw mb_error("BadLabels", "real curves need loop or black leaves only");
  int k = g.shape.nodes();
  int z = label_count(g, leaf_label::black);
  real_curve r;
  r.hirzebruch = 2 * k + 2 - z;
  r.ovals = 5 * k + 4 - z;
  r.zigzags = z;
  return r;
}

// stone string of the necklace diagram: reading m_z down to m_1, a pair
// (m_{2i}, m_{2i-1}) yields '>', m_{2i}-3 copies of 'o', '<', and
// m_{2i-1}-3 copies of '#'
inline std::string necklace_diagram(const std::vector<int>& m) {
  if (m.size() % 2 != 0)
    throw mb_error("OddZigzagCount", "necklace needs an even sequence");
  for (int v : m)
    if (v < 3) throw mb_error("BadSequence", "necklace entries must be >= 3");
  std::string s;
  for (int i = (int)m.size() / 2; i >= 1; i--) {
    s += '>';
    s.append(m[2 * i - 1] - 3, 'o');
    s += '<';
    s.append(m[2 * i - 2] - 3, '#');
  }
  return s;
}

// necklace diagrams coincide exactly for even cyclic shifts of the sequence
inline bool necklace_equal(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size() || a.size() % 2 != 0) return false;
  std::vector<int> cur = b;
  for (size_t i = 0; i < b.size(); i += 2) {
    if (cur == a) return true;
    std::rotate(cur.begin(), cur.begin() + 2, cur.end());
  }
  return false;
}

}  // namespace modbraid
