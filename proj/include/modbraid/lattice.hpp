#pragma once
// Transcendental lattices of SL(2,Z)-valued factorizations.
//
// Each factor m_i contributes a summand Z^2 carrying a symplectic pairing.
// On the ambient sum Z^2r live the linear map chi(+x_i) = sum_i (m_i - 1)x_i
// and the integer quadratic form
//
//   q(+x_i) = -sum_i x_i.(m_i x_i) + sum_{i<j} (m_i - 1)x_i.(m_j - 1)x_j.
//
// The pairing is oriented as x.y = det(y|x): with the other orientation every
// value of q changes sign, and this is the choice under which the reference
// tree factorizations produce positive definite lattices (the D series for an
// even node count).
//
// On ker chi the doubled bilinear form of q is even, so q extends to a
// symmetric bilinear form there; the transcendental lattice is ker chi
// modulo the radical of that form.  The triple (Z^2r, chi, q) transforms by
// an explicit change of basis under Hurwitz moves and global conjugation, so
// the lattice is a weak equivalence invariant.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "modbraid/factorization.hpp"
#include "modbraid/zmat.hpp"

namespace modbraid {

namespace lat_detail {

using i128 = __int128;
using mat128 = std::vector<std::vector<i128>>;

const i128 I64_GUARD = (i128)1 << 62;

inline i128 iabs(i128 v) { return v < 0 ? -v : v; }

inline int64_t narrow(i128 v, const char* what) {
  if (v <= -I64_GUARD || v >= I64_GUARD)
    throw mb_error("Overflow", std::string(what) + " exceeds 64-bit range");
  return (int64_t)v;
}

inline mat128 widen(const zmat& a) {
  mat128 r(a.size());
  for (size_t i = 0; i < a.size(); i++) r[i].assign(a[i].begin(), a[i].end());
  return r;
}

// fraction-free Gaussian elimination; divisions are exact
inline i128 det_bareiss(mat128 a) {
  int n = (int)a.size();
  if (n == 0) return 1;
  i128 sign = 1, prev = 1;
  for (int t = 0; t + 1 < n; t++) {
    int piv = -1;
    for (int i = t; i < n; i++)
      if (a[i][t] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != t) {
      std::swap(a[piv], a[t]);
      sign = -sign;
    }
    for (int i = t + 1; i < n; i++)
      for (int j = t + 1; j < n; j++)
        a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) / prev;
    prev = a[t][t];
  }
  return sign * a[n - 1][n - 1];
}

inline int64_t det_of(const zmat& g) { return narrow(det_bareiss(widen(g)), "determinant"); }

inline bool positive_definite(const zmat& g) {
  int n = zrows(g);
  for (int k = 1; k <= n; k++) {
    mat128 lead(k, std::vector<i128>(k));
    for (int i = 0; i < k; i++)
      for (int j = 0; j < k; j++) lead[i][j] = g[i][j];
    if (det_bareiss(lead) <= 0) return false;
  }
  return true;
}

// basis change b_i += f * b_j on a Gram matrix
template <class T>
void congruence_add(std::vector<std::vector<T>>& g, int i, int j, T f) {
  int n = (int)g.size();
  for (int t = 0; t < n; t++) g[i][t] += f * g[j][t];
  for (int t = 0; t < n; t++) g[t][i] += f * g[t][j];
}

// greedy pairwise norm reduction; each accepted step strictly shrinks a
// diagonal entry, so it terminates.  Works on any symmetric matrix and
// reduces a positive semidefinite one to small entries.
template <class T>
void reduce_gram(std::vector<std::vector<T>>& g) {
  int n = (int)g.size();
  bool changed = true;
  for (int guard = 0; changed && guard < 2000; guard++) {
    changed = false;
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++) {
        if (i == j || g[j][j] == 0) continue;
        long double ratio = (long double)g[i][j] / (long double)g[j][j];
        ratio = std::clamp(ratio, -1e18L, 1e18L);
        T c0 = (T)llroundl(ratio);
        for (T c : {c0 - 1, c0, c0 + 1}) {
          if (c == 0) continue;
          T cand = g[i][i] - 2 * c * g[i][j] + c * c * g[j][j];
          if ((cand < 0 ? -cand : cand) < (g[i][i] < 0 ? -g[i][i] : g[i][i])) {
            congruence_add(g, i, j, -c);
            changed = true;
            break;
          }
        }
      }
  }
}

}  // namespace lat_detail

// ------------------------------------------------------------ int lattices

// finitely generated lattice presented by a symmetric Gram matrix
struct int_lattice {
  zmat gram;        // symmetric
  int64_t det = 1;  // 1 for rank 0
  bool pos = true;  // positive definite?

  int rank() const { return zrows(gram); }
  bool operator==(const int_lattice& o) const { return gram == o.gram; }
  bool operator!=(const int_lattice& o) const { return !(*this == o); }
};

inline int_lattice make_lattice(zmat gram) {
  int n = zrows(gram);
  assert(zcols(gram) == n);
  for (int i = 0; i < n; i++)
    for (int j = i + 1; j < n; j++) assert(gram[i][j] == gram[j][i]);
  int_lattice l;
  l.det = lat_detail::det_of(gram);
  l.pos = lat_detail::positive_definite(gram);
  l.gram = std::move(gram);
  return l;
}

// (positive, negative) inertia indices, exact: the characteristic polynomial
// has integer coefficients and only real roots, so its sign changes count the
// positive roots with multiplicity; same for p(-x) and the negative ones.
inline std::pair<int, int> signature(const zmat& g) {
  using lat_detail::i128;
  using lat_detail::mat128;
  int n = zrows(g);
  long double mx = 1;
  for (const auto& row : g)
    for (int64_t v : row) mx = std::max(mx, (long double)std::llabs(v));
  // crude bound on the coefficient size: |c_k| <= C(n,k) (n mx)^k < 2^n (n mx)^n
  if (n > 0 && n + n * log2l(n * mx) > 120)
    throw mb_error("Overflow", "matrix too large for exact signature");
  mat128 a = lat_detail::widen(g), m = a;
  std::vector<i128> c(n + 1, 0);
  c[0] = 1;  // det(xI - g) = sum c[k] x^(n-k)
  for (int k = 1; k <= n; k++) {
    i128 tr = 0;
    for (int i = 0; i < n; i++) tr += m[i][i];
    assert(tr % k == 0);
    c[k] = -tr / k;
    if (k == n) break;
    mat128 b(n, std::vector<i128>(n, 0));
    for (int i = 0; i < n; i++) m[i][i] += c[k];
    for (int i = 0; i < n; i++)
      for (int t = 0; t < n; t++) {
        if (a[i][t] == 0) continue;
        for (int j = 0; j < n; j++) b[i][j] += a[i][t] * m[t][j];
      }
    m = b;
  }
  auto changes = [&](bool flip) {
    int cnt = 0, last = 0;
    for (int k = 0; k <= n; k++) {
      i128 v = c[k];
      if (flip && (n - k) % 2 != 0) v = -v;
      if (v == 0) continue;
      int s = v > 0 ? 1 : -1;
      if (last != 0 && s != last) cnt++;
      last = s;
    }
    return cnt;
  };
  return {changes(false), changes(true)};
}

// greedy norm reduction plus a deterministic ordering and sign convention;
// stable enough for fingerprints, makes no canonicity promise
inline int_lattice reduce(const int_lattice& l) {
  zmat g = l.gram;
  int n = zrows(g);
  lat_detail::reduce_gram(g);
  std::vector<int> ord(n);
  for (int i = 0; i < n; i++) ord[i] = i;
  std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
    auto key = [&](int t) { return std::make_pair(std::llabs(g[t][t]), g[t][t]); };
    return key(a) < key(b);
  });
  zmat h(n, std::vector<int64_t>(n));
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) h[i][j] = g[ord[i]][ord[j]];
  for (int j = 1; j < n; j++)
    for (int i = 0; i < j; i++)
      if (h[i][j] != 0) {
        if (h[i][j] < 0)
          for (int t = 0; t < n; t++) {
            h[j][t] = -h[j][t];
            h[t][j] = -h[t][j];
          }
        break;
      }
  return make_lattice(h);
}

// all nonzero integer vectors with norm x^T g x <= bound, both signs; g must
// be positive definite.  Floating bounds with slack, exact final filter.
inline std::vector<std::vector<int64_t>> short_vectors(const zmat& g, int64_t bound) {
  int n = zrows(g);
  std::vector<std::vector<int64_t>> out;
  if (n == 0 || bound <= 0) return out;
  // q(x) = sum_i d[i] * (x_i + sum_{j>i} u[i][j] x_j)^2
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n)), u = {};
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) a[i][j] = (long double)g[i][j];
  std::vector<long double> d(n);
  u.assign(n, std::vector<long double>(n, 0));
  for (int i = 0; i < n; i++) {
    d[i] = a[i][i];
    assert(d[i] > 0);
    for (int j = i + 1; j < n; j++) u[i][j] = a[i][j] / d[i];
    for (int k = i + 1; k < n; k++)
      for (int l = k; l < n; l++) a[k][l] -= d[i] * u[i][k] * u[i][l];
  }
  std::vector<int64_t> x(n, 0);
  auto norm_of = [&](const std::vector<int64_t>& v) {
    lat_detail::i128 s = 0;
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++) s += (lat_detail::i128)v[i] * g[i][j] * v[j];
    return (int64_t)s;
  };
  // enumerate from the last coordinate down, pruning by the remaining budget
  auto rec = [&](auto&& self, int i, long double budget) -> void {
    if (i < 0) {
      int64_t nm = norm_of(x);
      if (nm >= 1 && nm <= bound) out.push_back(x);
      return;
    }
    long double c = 0;
    for (int j = i + 1; j < n; j++) c += u[i][j] * x[j];
    long double radius = sqrtl(std::max(budget, (long double)0) / d[i]) + 1e-9L;
    int64_t lo = (int64_t)ceill(-c - radius), hi = (int64_t)floorl(-c + radius);
    for (int64_t t = lo; t <= hi; t++) {
      x[i] = t;
      long double used = d[i] * (t + c) * (t + c);
      self(self, i - 1, budget - used);
    }
    x[i] = 0;
  };
  rec(rec, n - 1, (long double)bound + 1e-6L);
  return out;
}

// counts of vectors of each norm 1..6 (positive definite only), with rank,
// determinant and signature; equal fingerprints are a cheap necessary
// condition for isometry, decisive in practice for the lattices met here
inline std::string fingerprint(const int_lattice& l) {
  int_lattice r = reduce(l);
  auto sig = signature(r.gram);
  std::string s = "r" + std::to_string(r.rank()) + " d" + std::to_string(r.det) +
                  " s" + std::to_string(sig.first) + "," + std::to_string(sig.second);
  if (!r.pos) return s + " n?";
  std::vector<int64_t> cnt(7, 0);
  for (const auto& v : short_vectors(r.gram, 6)) {
    lat_detail::i128 nm = 0;
    int n = r.rank();
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++) nm += (lat_detail::i128)v[i] * r.gram[i][j] * v[j];
    cnt[(size_t)nm]++;
  }
  s += " n";
  for (int k = 1; k <= 6; k++) s += (k > 1 ? "," : "") + std::to_string(cnt[k]);
  return s;
}

// exact isometry test for small positive definite lattices: map the basis of
// one lattice onto vectors of matching norms and inner products in the other
inline bool isometric(const int_lattice& l1, const int_lattice& l2) {
  if (l1.rank() != l2.rank()) return false;
  int n = l1.rank();
  if (n == 0) return true;
  if (n > 8) throw mb_error("RankTooLarge", "isometry search limited to rank <= 8");
  if (!l1.pos || !l2.pos)
    throw mb_error("Indefinite", "isometry search needs positive definite forms");
  if (l1.det != l2.det) return false;
  int_lattice a = reduce(l1), b = reduce(l2);
  int64_t maxn = 0;
  for (int i = 0; i < n; i++) maxn = std::max(maxn, a.gram[i][i]);
  std::vector<std::vector<int64_t>> cand = short_vectors(b.gram, maxn);
  // cache gram * candidate for O(n) inner products
  std::vector<std::vector<int64_t>> gc;
  std::vector<int64_t> cnorm;
  for (const auto& v : cand) {
    std::vector<int64_t> gv(n, 0);
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++) gv[i] += b.gram[i][j] * v[j];
    int64_t nm = 0;
    for (int i = 0; i < n; i++) nm += v[i] * gv[i];
    gc.push_back(gv);
    cnorm.push_back(nm);
  }
  std::vector<int> img;
  auto fits = [&](int w, int depth) {
    if (cnorm[w] != a.gram[depth][depth]) return false;
    for (int t = 0; t < depth; t++) {
      int64_t ip = 0;
      for (int i = 0; i < n; i++) ip += cand[img[t]][i] * gc[w][i];
      if (ip != a.gram[t][depth]) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, int depth) -> bool {
    if (depth == n) return true;  // dets match, so a full match is onto
    for (int w = 0; w < (int)cand.size(); w++)
      if (fits(w, depth)) {
        img.push_back(w);
        if (self(self, depth + 1)) return true;
        img.pop_back();
      }
    return false;
  };
  return rec(rec, 0);
}

// root lattices for comparisons: A_k inside Z^(k+1), D_k inside Z^k
inline int_lattice named_lattice(const std::string& kind, int k) {
  if (k < 0) throw mb_error("Range", "lattice rank must be >= 0");
  std::vector<std::vector<int64_t>> basis;
  if (kind == "A") {
    for (int i = 0; i < k; i++) {
      std::vector<int64_t> v(k + 1, 0);
      v[i] = 1;
      v[i + 1] = -1;
      basis.push_back(v);
    }
  } else if (kind == "D") {
    if (k == 1) return make_lattice({{4}});  // even integers in Z
    for (int i = 0; i + 1 < k; i++) {
      std::vector<int64_t> v(k, 0);
      v[i] = 1;
      v[i + 1] = -1;
      basis.push_back(v);
    }
    if (k >= 2) {
      std::vector<int64_t> v(k, 0);
      v[k - 2] = 1;
      v[k - 1] = 1;
      basis.push_back(v);
    }
  } else {
    throw mb_error("Range", "unknown lattice family " + kind);
  }
  int n = (int)basis.size();
  zmat g(n, std::vector<int64_t>(n, 0));
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++)
      for (size_t t = 0; t < basis[i].size(); t++) g[i][j] += basis[i][t] * basis[j][t];
  return make_lattice(g);
}

// ------------------------------------------------------- factorization form

// the ambient quadratic space of a factorization: chi column block i is
// (m_i - 1); q is stored as an upper triangular coefficient matrix
struct fact_form {
  int r = 0;
  zmat chi;   // 2 x 2r
  zmat qmat;  // 2r x 2r, q(x) = x^T qmat x
};

inline int64_t form_q(const fact_form& f, const std::vector<int64_t>& x) {
  assert((int)x.size() == 2 * f.r);
  lat_detail::i128 s = 0;
  for (int i = 0; i < 2 * f.r; i++) {
    if (x[i] == 0) continue;
    for (int j = i; j < 2 * f.r; j++) s += (lat_detail::i128)f.qmat[i][j] * x[i] * x[j];
  }
  return lat_detail::narrow(s, "quadratic form value");
}

// doubled bilinear form q(x+y) - q(x) - q(y)
inline int64_t form_b(const fact_form& f, const std::vector<int64_t>& x,
                      const std::vector<int64_t>& y) {
  std::vector<int64_t> s(x.size());
  for (size_t i = 0; i < x.size(); i++) s[i] = x[i] + y[i];
  return form_q(f, s) - form_q(f, x) - form_q(f, y);
}

inline std::vector<int64_t> chi_apply(const fact_form& f, const std::vector<int64_t>& x) {
  assert((int)x.size() == 2 * f.r);
  std::vector<int64_t> out(2, 0);
  for (int i = 0; i < 2; i++)
    for (int j = 0; j < 2 * f.r; j++) out[i] += f.chi[i][j] * x[j];
  return out;
}

// the symplectic pairing, oriented so the reference lattices come out
// positive definite
inline int64_t symp(const std::vector<int64_t>& u, const std::vector<int64_t>& v) {
  return u[1] * v[0] - u[0] * v[1];
}

inline fact_form build_form(const sl2_fact& f) {
  int r = f.length();
  fact_form out;
  out.r = r;
  out.chi = zmat(2, std::vector<int64_t>(2 * r, 0));
  out.qmat = zmat(2 * r, std::vector<int64_t>(2 * r, 0));
  for (int i = 0; i < r; i++) {
    const mat2& m = f.m[i];
    out.chi[0][2 * i] = m.a - 1;
    out.chi[0][2 * i + 1] = m.b;
    out.chi[1][2 * i] = m.c;
    out.chi[1][2 * i + 1] = m.d - 1;
    // -x.(m x) = c x1^2 + (d - a) x1 x2 - b x2^2 in the chosen orientation
    out.qmat[2 * i][2 * i] = m.c;
    out.qmat[2 * i][2 * i + 1] = m.d - m.a;
    out.qmat[2 * i + 1][2 * i + 1] = -m.b;
  }
  // cross terms (m_i - 1)x_i . (m_j - 1)x_j for i < j: with A = m_i - 1 and
  // B = m_j - 1 the block is A^T J B where J matches the pairing, so
  // block[s][t] = A[1][s]B[0][t] - A[0][s]B[1][t]
  for (int i = 0; i < r; i++)
    for (int j = i + 1; j < r; j++) {
      int64_t A[2][2] = {{f.m[i].a - 1, f.m[i].b}, {f.m[i].c, f.m[i].d - 1}};
      int64_t B[2][2] = {{f.m[j].a - 1, f.m[j].b}, {f.m[j].c, f.m[j].d - 1}};
      for (int s = 0; s < 2; s++)
        for (int t = 0; t < 2; t++)
          out.qmat[2 * i + s][2 * j + t] = A[1][s] * B[0][t] - A[0][s] * B[1][t];
    }
  return out;
}

// ------------------------------------------------- transcendental lattices

// ker chi with the symmetric bilinear extension of q, modulo its radical.
// The kernel Gram is assembled and pre-reduced in 128-bit arithmetic: deeply
// conjugated factorizations produce large matrix entries, while the reduced
// invariant lattice is always small.
inline int_lattice form_lattice(const fact_form& f) {
  using lat_detail::i128;
  std::vector<std::vector<int64_t>> ker = kernel_basis(f.chi);
  int d = (int)ker.size();
  auto q128 = [&](const std::vector<int64_t>& x) {
    i128 s = 0;
    for (int i = 0; i < 2 * f.r; i++) {
      if (x[i] == 0) continue;
      for (int j = i; j < 2 * f.r; j++) s += (i128)f.qmat[i][j] * x[i] * x[j];
    }
    return s;
  };
  lat_detail::mat128 g(d, std::vector<i128>(d, 0));
  for (int i = 0; i < d; i++) g[i][i] = q128(ker[i]);
  for (int i = 0; i < d; i++)
    for (int j = i + 1; j < d; j++) {
      std::vector<int64_t> s(ker[i].size());
      for (size_t t = 0; t < s.size(); t++) s[t] = ker[i][t] + ker[j][t];
      i128 b = q128(s) - g[i][i] - g[j][j];
      assert(b % 2 == 0);  // the doubled form is even on ker chi
      g[i][j] = g[j][i] = b / 2;
    }
  lat_detail::reduce_gram(g);
  zmat gs(d, std::vector<int64_t>(d));
  for (int i = 0; i < d; i++)
    for (int j = 0; j < d; j++) gs[i][j] = lat_detail::narrow(g[i][j], "kernel Gram entry");
  smith_result sr = smith_form(gs);
  // columns of v past the rank span the radical; the first rank columns
  // descend to a basis of the quotient
  zmat m = zmul(zmul(ztranspose(sr.v), gs), sr.v);
  zmat t(sr.rank, std::vector<int64_t>(sr.rank));
  for (int i = 0; i < sr.rank; i++)
    for (int j = 0; j < sr.rank; j++) t[i][j] = m[i][j];
  for (int i = 0; i < d; i++)
    for (int j = (i < sr.rank ? sr.rank : 0); j < d; j++) assert(m[i][j] == 0);
  return reduce(make_lattice(t));
}

inline int_lattice transcendental_lattice(const sl2_fact& f) {
  return form_lattice(build_form(f));
}

// ------------------------------------------------------------- colorings

using coloring = std::vector<int>;  // entries +-1, one per factor

// the SL(2,Z) lift of a simple factorization with eigenvalue signs given by
// the coloring; the all-(+1) coloring is the trace +2 lift
inline sl2_fact colored_lift(const gamma_fact& f, const coloring& l) {
  if ((int)l.size() != f.length())
    throw mb_error("Range", "coloring length must match the factorization");
  sl2_fact out;
  for (int i = 0; i < f.length(); i++) {
    if (l[i] != 1 && l[i] != -1) throw mb_error("Range", "coloring entries must be +-1");
    mat2 m = lift_simple(f.m[i]).first;  // throws NotSimple
    out.m.push_back(l[i] == 1 ? m : neg(m));
  }
  return out;
}

inline int_lattice colored_lattice(const gamma_fact& f, const coloring& l) {
  return transcendental_lattice(colored_lift(f, l));
}

}  // namespace modbraid
