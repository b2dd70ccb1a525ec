#pragma once
// Folding for finitely generated subgroups H of Gamma = Z/3 * Z/2.
//
// The coset Gamma-set Gamma/H is generally infinite, but it retracts onto a
// finite core: a partial skeleton in which an element with undefined nx
// ("triangle") marks a grafted half Farey tree.  fold_subgroup computes the
// pointed core (base kept) by a union-find folding of the generator words,
// followed by pruning of contractible branches, completion of the X-orbits,
// and absorption of sibling triangles.

#include <algorithm>
#include <queue>
#include <set>
#include <vector>

#include "modbraid/skeleton.hpp"

namespace modbraid {

struct core_graph {
  int n = 0;
  std::vector<int> op;   // op[e] == e: o-tip; -1 only in the trivial core
  std::vector<int> nx;   // nx[e] == e: black vertex; -1: triangle
  std::vector<int> nxi;  // inverse where defined, -1 on triangles
  int base = 0;

  bool triangle(int e) const { return nx[e] < 0; }
  bool complete() const {
    for (int e = 0; e < n; e++)
      if (nx[e] < 0 || op[e] < 0) return false;
    return true;
  }
  int triangles() const {
    int t = 0;
    for (int e = 0; e < n; e++) t += (nx[e] < 0);
    return t;
  }
  bool operator==(const core_graph& o) const {
    return n == o.n && op == o.op && nx == o.nx && base == o.base;
  }
  bool operator!=(const core_graph& o) const { return !(*this == o); }
};

inline core_graph trivial_core() {
  core_graph c;
  c.n = 1;
  c.op = {-1};
  c.nx = {-1};
  c.nxi = {-1};
  c.base = 0;
  return c;
}

// [Gamma : H], or nullopt when a triangle makes the index infinite
inline std::optional<long> core_index(const core_graph& c) {
  if (!c.complete()) return std::nullopt;
  return (long)c.n;
}

namespace fold_detail {

// Partial Gamma-structure under normalization.  fy is the Y-action
// (symmetric where defined), fx the X-action (injective, 3-closed).
// Triangle elements never carry fx.
struct partial {
  std::vector<int> fy, fx;
  std::vector<char> tri;
  std::vector<char> dead;
  int base = 0;

  int size() const { return (int)fy.size(); }
  int add(bool is_tri) {
    fy.push_back(-1);
    fx.push_back(-1);
    tri.push_back(is_tri);
    dead.push_back(0);
    return size() - 1;
  }
};

// union-find folding of traced words
struct folder {
  std::vector<int> par, fy, fx;
  std::vector<std::pair<int, int>> pending;

  int make() {
    par.push_back((int)par.size());
    fy.push_back(-1);
    fx.push_back(-1);
    return (int)par.size() - 1;
  }
  int find(int a) {
    while (par[a] != a) {
      par[a] = par[par[a]];
      a = par[a];
    }
    return a;
  }
  void merge(int a, int b) {
    pending.push_back({a, b});
    drain();
  }
  void drain() {
    while (!pending.empty()) {
      auto [x, y] = pending.back();
      pending.pop_back();
      x = find(x);
      y = find(y);
      if (x == y) continue;
      par[y] = x;
      for (auto* m : {&fy, &fx}) {
        int vx = (*m)[x], vy = (*m)[y];
        if (vx < 0)
          (*m)[x] = vy;
        else if (vy >= 0 && find(vx) != find(vy))
          pending.push_back({vx, vy});
      }
    }
  }

  int step_y(int a) {
    a = find(a);
    if (fy[a] < 0) {
      int f = make();
      fy[a] = f;
      fy[f] = a;
      return f;
    }
    return find(fy[a]);
  }
  int step_x(int a) {
    a = find(a);
    if (fx[a] < 0) {
      int f = make();
      fx[a] = f;
      return f;
    }
    return find(fx[a]);
  }

  // enforce: fy symmetric, fx injective and 3-closed
  void repair() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int a = 0; a < (int)par.size(); a++) {
        if (find(a) != a) continue;
        if (fy[a] >= 0) {
          int b = find(fy[a]);
          fy[a] = b;
          if (fy[b] < 0) {
            fy[b] = a;
            changed = true;
          } else if (find(fy[b]) != a) {
            merge(fy[b], a);
            changed = true;
          }
        }
        if (fx[a] >= 0) {
          int b = find(fx[a]);
          fx[a] = b;
          if (fx[b] >= 0) {
            int c = find(fx[b]);
            if (fx[c] < 0) {
              fx[c] = a;
              changed = true;
            } else if (find(fx[c]) != a) {
              merge(fx[c], a);
              changed = true;
            }
          }
        }
      }
      // injectivity of fx
      std::vector<int> pre(par.size(), -1);
      for (int a = 0; a < (int)par.size(); a++) {
        if (find(a) != a || fx[a] < 0) continue;
        int b = find(fx[a]);
        if (pre[b] >= 0 && pre[b] != a) {
          merge(pre[b], a);
          changed = true;
          break;  // indices shifted; restart the sweep
        }
        pre[b] = a;
      }
    }
  }
};

// X-orbit (vertex) decomposition of the live non-triangle elements
struct vertexes {
  std::vector<int> vid;                  // element -> vertex id, -1 for triangle/dead
  std::vector<std::vector<int>> elems;   // chain order: fx maps elems[i] -> elems[i+1]
  std::vector<char> black;
};

inline vertexes split_vertices(const partial& p) {
  vertexes v;
  v.vid.assign(p.size(), -1);
  std::vector<int> pre(p.size(), -1);
  for (int e = 0; e < p.size(); e++)
    if (!p.dead[e] && !p.tri[e] && p.fx[e] >= 0) pre[p.fx[e]] = e;
  for (int e = 0; e < p.size(); e++) {
    if (p.dead[e] || p.tri[e] || v.vid[e] >= 0) continue;
    // walk fx backwards to the chain head (cycles stop at the guard)
    int head = e, steps = 0;
    while (pre[head] >= 0 && pre[head] != e && steps < 3) {
      head = pre[head];
      steps++;
    }
    int id = (int)v.elems.size();
    std::vector<int> chain;
    int cur = head;
    while (cur >= 0 && v.vid[cur] < 0) {
      v.vid[cur] = id;
      chain.push_back(cur);
      cur = p.fx[cur];
    }
    v.black.push_back(chain.size() == 1 && p.fx[chain[0]] == chain[0]);
    v.elems.push_back(std::move(chain));
  }
  return v;
}

// remove branches whose completion is contractible
inline void prune(partial& p, bool protect_base) {
  bool changed = true;
  while (changed) {
    changed = false;
    vertexes v = split_vertices(p);
    int nv = (int)v.elems.size();
    std::vector<int> attach(nv, 0);
    std::vector<char> feature(nv, 0);
    for (int id = 0; id < nv; id++) {
      if (v.black[id]) feature[id] = 1;
      for (int e : v.elems[id]) {
        if (protect_base && e == p.base) feature[id] = 1;
        int f = p.fy[e];
        if (f < 0) continue;
        if (f == e || (v.vid[f] == id && !p.tri[f]))
          feature[id] = 1;  // o-tip or internal edge
        else if (p.tri[f]) {
          if (protect_base && f == p.base) feature[id] = 1;
        } else
          attach[id]++;
      }
    }
    for (int id = 0; id < nv; id++) {
      if (feature[id] || attach[id] > 1) continue;
      // drop the vertex, its triangle children, and detach its partner
      for (int e : v.elems[id]) {
        int f = p.fy[e];
        if (f >= 0 && f != e) {
          if (p.tri[f])
            p.dead[f] = 1;
          else
            p.fy[f] = -1;
        }
        p.dead[e] = 1;
      }
      changed = true;
      break;  // vertex snapshot invalidated
    }
  }
}

// complete partial X-orbits to 3-cycles and give every open Y-slot a
// triangle partner
inline void materialize(partial& p) {
  vertexes v = split_vertices(p);
  for (size_t id = 0; id < v.elems.size(); id++) {
    if (v.black[id]) continue;
    auto& chain = v.elems[id];
    while (chain.size() < 3) {
      int f = p.add(false);
      p.fx[chain.back()] = f;
      chain.push_back(f);
    }
    p.fx[chain[2]] = chain[0];
  }
  for (int e = 0; e < p.size(); e++) {
    if (p.dead[e] || p.fy[e] >= 0) continue;
    if (p.tri[e]) continue;  // open slot on a triangle never happens below
    int t = p.add(true);
    p.fy[e] = t;
    p.fy[t] = e;
  }
}

// a 3-cycle vertex with two triangle children contracts onto its third edge
inline void absorb(partial& p, bool protect_base) {
  bool changed = true;
  while (changed) {
    changed = false;
    vertexes v = split_vertices(p);
    for (size_t id = 0; id < v.elems.size(); id++) {
      if (v.black[id] || v.elems[id].size() != 3) continue;
      std::vector<int> with_tri, without;
      for (int e : v.elems[id]) {
        int f = p.fy[e];
        if (f >= 0 && f != e && p.tri[f])
          with_tri.push_back(e);
        else
          without.push_back(e);
      }
      if (with_tri.size() == 3) {
        // a lone vertex with three grafted branches is the full Farey tree:
        // only the trivial subgroup folds to it, and that never reaches here
        throw mb_error("FoldInternal", "free vertex with three triangle children");
      }
      if (with_tri.size() != 2) continue;
      int e1 = with_tri[0], e2 = with_tri[1], e3 = without[0];
      int t1 = p.fy[e1], t2 = p.fy[e2];
      if (protect_base &&
          (p.base == e1 || p.base == e2 || p.base == t1 || p.base == t2))
        continue;
      p.dead[e1] = p.dead[e2] = p.dead[t1] = p.dead[t2] = 1;
      p.fx[e3] = -1;
      p.tri[e3] = 1;
      changed = true;
      break;  // vertex table invalidated
    }
  }
}

inline core_graph to_core(const partial& p) {
  // BFS renumber from base over (op, nx, nx^{-1})
  int n = p.size();
  std::vector<int> nx(n, -1), nxi(n, -1);
  for (int e = 0; e < n; e++) {
    if (p.dead[e] || p.tri[e] || p.fx[e] < 0) continue;
    nx[p.fx[e]] = e;  // nx is the inverse of the X-action
    nxi[e] = p.fx[e];
  }
  int start = p.base;
  if (p.dead[start])  // base-stripped cores: any live start will do
    for (int e = 0; e < n; e++)
      if (!p.dead[e]) { start = e; break; }
  std::vector<int> label(n, -1), order;
  label[start] = 0;
  order.push_back(start);
  for (size_t i = 0; i < order.size(); i++) {
    int e = order[i];
    for (int f : {p.fy[e], nx[e], nxi[e]}) {
      if (f < 0 || label[f] >= 0) continue;
      label[f] = (int)order.size();
      order.push_back(f);
    }
  }
  core_graph c;
  c.n = (int)order.size();
  c.op.assign(c.n, -1);
  c.nx.assign(c.n, -1);
  c.nxi.assign(c.n, -1);
  c.base = 0;
  for (int i = 0; i < c.n; i++) {
    int e = order[i];
    assert(!p.dead[e]);
    if (p.fy[e] >= 0) c.op[i] = label[p.fy[e]];
    if (nx[e] >= 0) c.nx[i] = label[nx[e]];
    if (nxi[e] >= 0) c.nxi[i] = label[nxi[e]];
  }
  // all live elements must be reachable from base
  for (int e = 0; e < n; e++) assert(p.dead[e] || label[e] >= 0);
  return c;
}

inline core_graph finish(partial p, bool protect_base) {
  prune(p, protect_base);
  bool any = false;
  for (int e = 0; e < p.size(); e++)
    if (!p.dead[e] && (p.fy[e] >= 0 || p.fx[e] >= 0)) any = true;
  if (!any) return trivial_core();
  materialize(p);
  absorb(p, protect_base);
  return to_core(p);
}

}  // namespace fold_detail

inline core_graph fold_subgroup(const std::vector<gamma_elt>& words) {
  fold_detail::folder f;
  int base = f.make();
  for (const auto& g : words) {
    int cur = base;
    for (auto it = g.w.rbegin(); it != g.w.rend(); ++it) {
      letter l = *it;
      if (l == LY)
        cur = f.step_y(cur);
      else if (l == LX)
        cur = f.step_x(cur);
      else {
        cur = f.step_x(cur);
        cur = f.step_x(cur);
      }
    }
    f.merge(cur, base);
  }
  f.repair();
  // compact roots into a partial structure
  std::vector<int> idx(f.par.size(), -1);
  fold_detail::partial p;
  for (int a = 0; a < (int)f.par.size(); a++)
    if (f.find(a) == a) idx[a] = p.add(false);
  for (int a = 0; a < (int)f.par.size(); a++) {
    if (f.find(a) != a) continue;
    if (f.fy[a] >= 0) p.fy[idx[a]] = idx[f.find(f.fy[a])];
    if (f.fx[a] >= 0) p.fx[idx[a]] = idx[f.find(f.fx[a])];
  }
  p.base = idx[f.find(base)];
  return fold_detail::finish(std::move(p), true);
}

// forget the base: re-normalize so only the canonical compact part remains
inline core_graph strip_base(const core_graph& c) {
  fold_detail::partial p;
  for (int e = 0; e < c.n; e++) p.add(c.triangle(e));
  for (int e = 0; e < c.n; e++) {
    p.fy[e] = c.op[e];
    if (!c.triangle(e)) p.fx[e] = c.nxi[e];
  }
  p.base = c.base;
  return fold_detail::finish(std::move(p), false);
}

// ------------------------------------------------------------ membership

// Walk the letters right to left.  Off-core excursions through a triangle
// are tracked as a reduced word; the branch is a tree, so returning to the
// core means exactly cancelling the excursion.
inline bool core_membership(const core_graph& c, const gamma_elt& g) {
  int e = c.base;
  std::vector<letter> exc;  // leftmost letter at the back
  auto push_left = [&](letter l) {
    if (!exc.empty() && x_type(exc.back()) == x_type(l)) {
      if (l == LY) {
        exc.pop_back();
        return;
      }
      int s = (exc.back() + l) % 3;
      if (s == 0)
        exc.pop_back();
      else
        exc.back() = (letter)s;
      return;
    }
    exc.push_back(l);
  };
  for (auto it = g.w.rbegin(); it != g.w.rend(); ++it) {
    letter l = *it;
    if (!exc.empty()) {
      push_left(l);
      continue;
    }
    if (l == LY) {
      if (c.op[e] < 0)
        push_left(l);  // trivial core: everything is an excursion
      else
        e = c.op[e];
    } else if (c.triangle(e)) {
      push_left(l);
    } else {
      e = (l == LX) ? c.nxi[e] : c.nx[e];
    }
  }
  return exc.empty() && e == c.base;
}

// no o-tips and no black vertices: H is generated by its simple elements
inline bool is_xy_generated(const core_graph& c) {
  for (int e = 0; e < c.n; e++)
    if (c.op[e] == e || c.nx[e] == e) return false;
  return true;
}

// ----------------------------------------------------- codes, conversions

inline std::vector<int> core_code_from(const core_graph& c, int start) {
  std::vector<int> label(c.n, -1), order;
  label[start] = 0;
  order.push_back(start);
  for (size_t i = 0; i < order.size(); i++) {
    int e = order[i];
    for (int f : {c.op[e], c.nx[e], c.nxi[e]}) {
      if (f < 0 || label[f] >= 0) continue;
      label[f] = (int)order.size();
      order.push_back(f);
    }
  }
  std::vector<int> code;
  code.push_back(c.n);
  for (size_t i = 0; i < order.size(); i++) {
    int e = order[i];
    code.push_back(c.op[e] < 0 ? c.n : label[c.op[e]]);
    code.push_back(c.nx[e] < 0 ? c.n : label[c.nx[e]]);
  }
  return code;
}

inline std::vector<int> core_canonical_code(const core_graph& c) {
  std::vector<int> best;
  for (int e = 0; e < c.n; e++) {
    auto code = core_code_from(c, e);
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

// pointed cores are BFS-renumbered from base, so == is pointed isomorphism
inline bool cores_isomorphic(const core_graph& a, const core_graph& b) {
  return core_canonical_code(a) == core_canonical_code(b);
}

// conjugacy of the underlying subgroups: compare base-stripped cores
inline bool cores_conjugate(const core_graph& a, const core_graph& b) {
  return core_canonical_code(strip_base(a)) == core_canonical_code(strip_base(b));
}

inline core_graph mirror(const core_graph& c) {
  core_graph m = c;
  std::swap(m.nx, m.nxi);
  return m;
}

inline skeleton core_to_skeleton(const core_graph& c) {
  if (!c.complete()) throw mb_error("Incomplete", "core has triangles");
  skeleton s;
  s.n = c.n;
  s.op = c.op;
  s.nx = c.nx;
  s.base = c.base;
  s.kind = sk_kind::three_regular;
  for (int e = 0; e < c.n; e++)
    if (c.op[e] == e || c.nx[e] == e) s.kind = sk_kind::three_one;
  std::string err = validate(s);
  if (!err.empty()) throw mb_error("InvalidSkeleton", err);
  rebuild_nxi(s);
  return s;
}

inline core_graph skeleton_to_core(const skeleton& s) {
  if (!s.pointed()) throw mb_error("NotPointed", "need a base point");
  core_graph c;
  c.n = s.n;
  c.op = s.op;
  c.nx = s.nx;
  c.nxi = s.nxi;
  c.base = s.base;
  // renumber from base for the canonical pointed representation
  fold_detail::partial p;
  for (int e = 0; e < c.n; e++) p.add(false);
  for (int e = 0; e < c.n; e++) {
    p.fy[e] = c.op[e];
    p.fx[e] = c.nxi[e];
  }
  p.base = c.base;
  return fold_detail::to_core(p);
}

}  // namespace modbraid
