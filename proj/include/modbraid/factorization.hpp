#pragma once
// Factorizations m_infinity = m_r ... m_1 over B3, Gamma, and SL(2,Z):
// construction from marked trees, Hurwitz moves, monodromy invariants,
// fundamental-group presentations, and brute-force orbit search over
// SL(2,Z/n).

#include <array>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "modbraid/fold.hpp"
#include "modbraid/trees.hpp"
#include "modbraid/zmat.hpp"

namespace modbraid {

// ---------------------------------------------------------- factorizations

// m[0] = m_1 is the factor applied first; the monodromy at infinity is the
// product m_r ... m_1, rightmost factor first.
template <class G>
struct factorization {
  std::vector<G> m;

  int length() const { return (int)m.size(); }
  bool operator==(const factorization& o) const { return m == o.m; }
  bool operator!=(const factorization& o) const { return !(*this == o); }
};

using braid_fact = factorization<braid_elt>;
using gamma_fact = factorization<gamma_elt>;
using sl2_fact = factorization<mat2>;

inline gamma_elt group_one(const gamma_elt&) { return gamma_one(); }
inline braid_elt group_one(const braid_elt&) { return braid_one(); }
inline mat2 group_one(const mat2&) { return MAT_ID; }

inline mat2 inverse(const mat2& m) { return inv(m); }
inline mat2 conjugate(const mat2& m, const mat2& by) { return by * m * inv(by); }

template <class G>
G monodromy_at_infinity(const factorization<G>& f) {
  G p = group_one(G{});
  for (const G& mi : f.m) p = mi * p;
  return p;
}

// Hurwitz move at 1-based position i: (m_i, m_{i+1}) -> (m_i^-1 m_{i+1} m_i,
// m_i); the backward move is its inverse.  Both fix m_infinity.
template <class G>
factorization<G> hurwitz_move(factorization<G> f, int i, bool forward = true) {
  int r = f.length();
  if (i < 1 || i >= r)
    throw mb_error("IndexOutOfRange",
                   "move position " + std::to_string(i) + " not in [1, " +
                       std::to_string(r) + ")");
  G a = f.m[i - 1], b = f.m[i];
  if (forward) {
    f.m[i - 1] = inverse(a) * b * a;
    f.m[i] = a;
  } else {
    f.m[i - 1] = b;
    f.m[i] = b * a * inverse(b);
  }
  return f;
}

template <class G>
factorization<G> global_conjugate(factorization<G> f, const G& g) {
  for (G& mi : f.m) mi = conjugate(mi, g);
  return f;
}

// ------------------------------------------------------------- simplicity

// Simple SL(2,Z) elements are the conjugates of [1,1;0,1]: unipotent with a
// primitive M - id.  Writing M - id = [p,q;r,-p], the two primitive classes
// (of T and T^-1) are told apart by the sign of q, or of -r when q = 0.
inline bool is_simple(const mat2& M) {
  if (M.det() != 1 || M.trace() != 2 || M == MAT_ID) return false;
  int64_t p = M.a - 1, q = M.b, r = M.c;
  int64_t g = std::gcd(std::gcd(std::llabs(p), std::llabs(q)), std::llabs(r));
  if (g != 1) return false;
  return q > 0 || (q == 0 && r < 0);
}

inline bool is_simple(const braid_elt& b) {
  return b.deg == 1 && is_simple(b.img);
}

template <class G>
bool is_simple(const factorization<G>& f) {
  for (const G& mi : f.m)
    if (!is_simple(mi)) return false;
  return true;
}

// ---------------------------------------------------- trees to factorizations

// The tree factorization: with distances (m_1, ..., m_{k+2}) and partial sums
// n_i = m_i + ... + m_{k+1}, n_{k+2} = 0, the entries are the simple braids
// s1^{n_i - s} s2 s1^{-(n_i - s)}.  The shift s rotates the base point.
inline braid_fact from_tree_b3(const marked_tree& t, long s = 0) {
  std::vector<int> m = distance_sequence(t);
  int k = t.nodes();
  long total = 5L * k + 4;
  if (s < 0 || s >= total)
    throw mb_error("Range", "shift must lie in [0, 5k+4)");
  int r = (int)m.size();
  std::vector<long> n(r + 2, 0);  // 1-based; n[r] = 0
  for (int i = r - 1; i >= 1; i--) n[i] = n[i + 1] + m[i - 1];
  braid_fact f;
  braid_elt s1 = braid_s1(), s2 = braid_s2();
  for (int i = 1; i <= r; i++)
    f.m.push_back(conjugate(s2, braid_pow(s1, n[i] - s)));
  return f;
}

inline gamma_fact to_gamma(const braid_fact& f) {
  gamma_fact out;
  for (const braid_elt& b : f.m) out.m.push_back(b.img);
  return out;
}

inline sl2_fact to_sl2(const braid_fact& f) {
  sl2_fact out;
  for (const braid_elt& b : f.m) out.m.push_back(project(b));
  return out;
}

inline gamma_fact from_tree_gamma(const marked_tree& t, long s = 0) {
  return to_gamma(from_tree_b3(t, s));
}

inline sl2_fact from_tree_sl2(const marked_tree& t, long s = 0) {
  return to_sl2(from_tree_b3(t, s));
}

// Lift a simple Gamma factorization to the simple braids projecting onto it.
inline braid_fact lift(const gamma_fact& f) {
  braid_fact out;
  for (const gamma_elt& g : f.m) out.m.push_back(lift_simple(g).second);
  return out;
}

// ---------------------------------------------------------- monodromy group

inline core_graph monodromy_group(const gamma_fact& f) {
  return fold_subgroup(f.m);
}

inline core_graph monodromy_group(const braid_fact& f) {
  return monodromy_group(to_gamma(f));
}

// The pointed core a tree factorization must fold to: the tree's skeleton
// based n_1 - s steps along the outer face, n_1 = m_1 + ... + m_{k+1} being
// the depth of the unconjugated entry's monogon.
inline core_graph tree_monodromy_core(const marked_tree& t, long s = 0) {
  std::vector<int> m = distance_sequence(t);
  skeleton sk = pseudo_tree(t);
  std::vector<int> orbit = base_points(sk);
  long len = (long)orbit.size();
  long n1 = len - m.back();
  sk.base = orbit[(size_t)(((n1 - s) % len + len) % len)];
  return skeleton_to_core(sk);
}

// --------------------------------------------------- fundamental group data

using free_word = std::vector<int>;  // letters +-1..+-3, sign = inverse

struct fp_presentation {
  int generators = 3;
  std::vector<free_word> relators;  // freely reduced, trivial ones dropped
};

inline void push_reduced(free_word& w, int l) {
  if (!w.empty() && w.back() == -l)
    w.pop_back();
  else
    w.push_back(l);
}

namespace artin_detail {

// images of (alpha_1, alpha_2, alpha_3) under one braid generator:
// s_i maps alpha_i -> alpha_i alpha_{i+1} alpha_i^-1, alpha_{i+1} -> alpha_i
inline std::array<free_word, 3> letter_images(int l) {
  switch (l) {
    case 1: return {{{1, 2, -1}, {1}, {3}}};
    case -1: return {{{2}, {-2, 1, 2}, {3}}};
    case 2: return {{{1}, {2, 3, -2}, {2}}};
    case -2: return {{{1}, {3}, {-3, 2, 3}}};
  }
  throw mb_error("ParseError", "bad braid letter");
}

inline free_word substitute(const free_word& w,
                            const std::array<free_word, 3>& img) {
  free_word out;
  for (int l : w) {
    const free_word& rep = img[std::abs(l) - 1];
    if (l > 0)
      for (int x : rep) push_reduced(out, x);
    else
      for (auto it = rep.rbegin(); it != rep.rend(); ++it)
        push_reduced(out, -*it);
  }
  return out;
}

}  // namespace artin_detail

// The action of a braid on the free group <alpha_1, alpha_2, alpha_3>,
// composed letterwise so that (ab)* = a* after b*.  Every braid preserves
// the product alpha_1 alpha_2 alpha_3.
inline std::array<free_word, 3> artin_action(const braid_elt& b) {
  std::array<free_word, 3> img = {{{1}, {2}, {3}}};
  std::vector<int> word = braid_word(b);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    auto elem = artin_detail::letter_images(*it);
    for (int i = 0; i < 3; i++) img[i] = artin_detail::substitute(img[i], elem);
  }
  free_word prod;
  for (int i = 0; i < 3; i++)
    for (int l : img[i]) push_reduced(prod, l);
  assert((prod == free_word{1, 2, 3}));
  return img;
}

// <alpha_1, alpha_2, alpha_3 | m_i(alpha_j) = alpha_j for all i, j>
inline fp_presentation pi1_presentation(const braid_fact& f) {
  fp_presentation p;
  for (const braid_elt& b : f.m) {
    auto img = artin_action(b);
    for (int j = 0; j < 3; j++) {
      free_word rel = img[j];
      push_reduced(rel, -(j + 1));
      if (!rel.empty()) p.relators.push_back(rel);
    }
  }
  return p;
}

// Invariant factors of H_1: torsion d1 | d2 | ... first, then one 0 per Z.
inline std::vector<int64_t> abelianization(const fp_presentation& p) {
  zmat a(p.generators, std::vector<int64_t>(p.relators.size(), 0));
  for (size_t j = 0; j < p.relators.size(); j++)
    for (int l : p.relators[j]) a[std::abs(l) - 1][j] += l > 0 ? 1 : -1;
  return cokernel_invariants(a, p.generators);
}

inline std::vector<int64_t> abelianization(const braid_fact& f) {
  return abelianization(pi1_presentation(f));
}

// ------------------------------------------------------ reduction mod n

// a factorization over SL(2, Z/n), entries stored as (a, b, c, d) mod n
struct mod_fact {
  int n = 0;
  std::vector<std::array<uint8_t, 4>> m;

  bool operator==(const mod_fact& o) const { return n == o.n && m == o.m; }
  bool operator!=(const mod_fact& o) const { return !(*this == o); }
};

namespace orbit_detail {

using mmat = std::array<uint8_t, 4>;

inline mmat mmul(const mmat& x, const mmat& y, int n) {
  return {(uint8_t)((x[0] * y[0] + x[1] * y[2]) % n),
          (uint8_t)((x[0] * y[1] + x[1] * y[3]) % n),
          (uint8_t)((x[2] * y[0] + x[3] * y[2]) % n),
          (uint8_t)((x[2] * y[1] + x[3] * y[3]) % n)};
}

// entries have det = 1 mod n, so the adjugate is the inverse
inline mmat minv(const mmat& x, int n) {
  auto r = [&](int v) { return (uint8_t)(((v % n) + n) % n); };
  return {x[3], r(-x[1]), r(-x[2]), x[0]};
}

inline std::string encode(const std::vector<mmat>& st) {
  std::string s;
  s.reserve(st.size() * 4);
  for (const mmat& e : st)
    for (int i = 0; i < 4; i++) s.push_back((char)e[i]);
  return s;
}

inline std::vector<mmat> decode(const std::string& s) {
  std::vector<mmat> st(s.size() / 4);
  for (size_t i = 0; i < st.size(); i++)
    for (int j = 0; j < 4; j++) st[i][j] = (uint8_t)s[4 * i + j];
  return st;
}

inline std::vector<mmat> sl2_mod_group(int n) {
  std::vector<mmat> g;
  for (int a = 0; a < n; a++)
    for (int b = 0; b < n; b++)
      for (int c = 0; c < n; c++)
        for (int d = 0; d < n; d++)
          if (((a * d - b * c) % n + n) % n == 1)
            g.push_back({(uint8_t)a, (uint8_t)b, (uint8_t)c, (uint8_t)d});
  return g;
}

}  // namespace orbit_detail

inline std::array<uint8_t, 4> mat_mod(const mat2& M, int n) {
  auto r = [&](int64_t v) { return (uint8_t)(((v % n) + n) % n); };
  return {r(M.a), r(M.b), r(M.c), r(M.d)};
}

inline mod_fact reduce_mod(const sl2_fact& f, int n) {
  if (n < 2 || n > 255)
    throw mb_error("Range", "modulus must lie in [2, 255]");
  mod_fact out;
  out.n = n;
  for (const mat2& M : f.m) out.m.push_back(mat_mod(M, n));
  return out;
}

inline mod_fact reduce_mod(const braid_fact& f, int n) {
  return reduce_mod(to_sl2(f), n);
}

inline mod_fact hurwitz_move(mod_fact f, int i, bool forward = true) {
  int r = (int)f.m.size();
  if (i < 1 || i >= r)
    throw mb_error("IndexOutOfRange",
                   "move position " + std::to_string(i) + " not in [1, " +
                       std::to_string(r) + ")");
  using orbit_detail::minv;
  using orbit_detail::mmul;
  auto a = f.m[i - 1], b = f.m[i];
  if (forward) {
    f.m[i - 1] = mmul(mmul(minv(a, f.n), b, f.n), a, f.n);
    f.m[i] = a;
  } else {
    f.m[i - 1] = b;
    f.m[i] = mmul(mmul(b, a, f.n), minv(b, f.n), f.n);
  }
  return f;
}

// --------------------------------------------------------- orbit search

inline uint64_t default_orbit_cap() {
  if (const char* s = std::getenv("MM_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 10000000ull;
}

struct orbit_options {
  uint64_t cap = default_orbit_cap();
  int jobs = 1;
  bool weak = false;  // also minimize over global SL(2,Z/n) conjugation
};

struct orbit_result {
  uint64_t size = 0;
  bool capped = false;       // cap hit: size is a lower bound, not the orbit
  std::string fingerprint;   // least visited key: a canonical orbit name
};

// Breadth-first closure under Hurwitz moves and their inverses.  States are
// keyed by their entry bytes; in weak mode the key is minimized over global
// conjugation first (gated to n <= 7).  Level expansion may be sharded over
// threads; the visited set and the fingerprint are order-independent, so the
// result is deterministic for any job count.
inline orbit_result hurwitz_orbit(const mod_fact& f,
                                  const orbit_options& opt = {}) {
  using orbit_detail::mmat;
  if (opt.cap < 1) throw mb_error("Range", "orbit cap must be positive");
  std::vector<mmat> conjugators;
  if (opt.weak) {
    if (f.n > 7)
      throw mb_error("Range", "weak orbit mode is gated to moduli <= 7");
    conjugators = orbit_detail::sl2_mod_group(f.n);
  }

  auto canonical_key = [&](const std::vector<mmat>& st) {
    std::string key = orbit_detail::encode(st);
    if (!opt.weak) return key;
    std::vector<mmat> conj(st.size());
    for (const mmat& g : conjugators) {
      mmat gi = orbit_detail::minv(g, f.n);
      for (size_t i = 0; i < st.size(); i++)
        conj[i] = orbit_detail::mmul(orbit_detail::mmul(g, st[i], f.n), gi, f.n);
      std::string k = orbit_detail::encode(conj);
      if (k < key) key = std::move(k);
    }
    return key;
  };

  auto expand = [&](const std::string& key, std::vector<std::string>& out) {
    std::vector<mmat> st = orbit_detail::decode(key);
    mod_fact cur{f.n, st};
    for (int i = 1; i < (int)st.size(); i++) {
      out.push_back(canonical_key(hurwitz_move(cur, i, true).m));
      out.push_back(canonical_key(hurwitz_move(cur, i, false).m));
    }
  };

  orbit_result res;
  std::unordered_set<std::string> visited;
  std::string start = canonical_key(f.m);
  visited.insert(start);
  res.fingerprint = start;
  std::vector<std::string> frontier{start};

  while (!frontier.empty() && !res.capped) {
    std::vector<std::vector<std::string>> found;
    int jobs = std::max(1, opt.jobs);
    if (jobs <= 1 || frontier.size() < 2) {
      found.resize(1);
      for (const std::string& key : frontier) expand(key, found[0]);
    } else {
      int shards = std::min<int>(jobs, (int)frontier.size());
      found.resize(shards);
      std::vector<std::thread> pool;
      for (int w = 0; w < shards; w++)
        pool.emplace_back([&, w] {
          // visited is read-only during this phase
          for (size_t i = w; i < frontier.size(); i += shards) {
            std::vector<std::string> raw;
            expand(frontier[i], raw);
            for (std::string& key : raw)
              if (!visited.count(key)) found[w].push_back(std::move(key));
          }
        });
      for (auto& t : pool) t.join();
    }

    std::vector<std::string> next;
    for (const auto& shard : found) {
      for (const std::string& key : shard) {
        if (visited.find(key) != visited.end()) continue;
        if (visited.size() >= opt.cap) {
          res.capped = true;
          break;
        }
        visited.insert(key);
        if (key < res.fingerprint) res.fingerprint = key;
        next.push_back(key);
      }
      if (res.capped) break;
    }
    frontier = std::move(next);
  }
  res.size = visited.size();
  return res;
}

}  // namespace modbraid
