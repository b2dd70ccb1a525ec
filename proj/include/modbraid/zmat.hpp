#pragma once
// Exact integer matrix utilities: products, Smith normal form, kernels.

#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <vector>

namespace modbraid {

using zmat = std::vector<std::vector<int64_t>>;

inline int zrows(const zmat& a) { return (int)a.size(); }
inline int zcols(const zmat& a) { return a.empty() ? 0 : (int)a[0].size(); }

inline zmat zidentity(int n) {
  zmat r(n, std::vector<int64_t>(n, 0));
  for (int i = 0; i < n; i++) r[i][i] = 1;
  return r;
}

inline zmat zmul(const zmat& a, const zmat& b) {
  assert(zcols(a) == zrows(b));
  zmat r(zrows(a), std::vector<int64_t>(zcols(b), 0));
  for (int i = 0; i < zrows(a); i++)
    for (int k = 0; k < zcols(a); k++) {
      if (a[i][k] == 0) continue;
      for (int j = 0; j < zcols(b); j++) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

inline zmat ztranspose(const zmat& a) {
  zmat r(zcols(a), std::vector<int64_t>(zrows(a), 0));
  for (int i = 0; i < zrows(a); i++)
    for (int j = 0; j < zcols(a); j++) r[j][i] = a[i][j];
  return r;
}

struct smith_result {
  zmat u, s, v;                // u * a * v = s, with u and v unimodular
  int rank = 0;
  std::vector<int64_t> diag;   // positive invariant factors d1 | d2 | ...
};

// Smith normal form by repeated pivoting on the least nonzero entry.
inline smith_result smith_form(zmat a) {
  int m = zrows(a), n = zcols(a);
  smith_result r;
  r.u = zidentity(m);
  r.v = zidentity(n);

  auto swap_rows = [&](int i, int j) {
    std::swap(a[i], a[j]);
    std::swap(r.u[i], r.u[j]);
  };
  auto swap_cols = [&](int i, int j) {
    for (int t = 0; t < m; t++) std::swap(a[t][i], a[t][j]);
    for (int t = 0; t < n; t++) std::swap(r.v[t][i], r.v[t][j]);
  };
  auto add_row = [&](int dst, int src, int64_t f) {  // row dst += f * row src
    for (int t = 0; t < n; t++) a[dst][t] += f * a[src][t];
    for (int t = 0; t < m; t++) r.u[dst][t] += f * r.u[src][t];
  };
  auto add_col = [&](int dst, int src, int64_t f) {
    for (int t = 0; t < m; t++) a[t][dst] += f * a[t][src];
    for (int t = 0; t < n; t++) r.v[t][dst] += f * r.v[t][src];
  };
  auto negate_row = [&](int i) {
    for (int t = 0; t < n; t++) a[i][t] = -a[i][t];
    for (int t = 0; t < m; t++) r.u[i][t] = -r.u[i][t];
  };

  int t = 0;
  while (t < m && t < n) {
    // find the least nonzero entry in the remaining block
    int pi = -1, pj = -1;
    for (int i = t; i < m; i++)
      for (int j = t; j < n; j++)
        if (a[i][j] != 0 &&
            (pi < 0 || std::llabs(a[i][j]) < std::llabs(a[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    if (pi != t) swap_rows(pi, t);
    if (pj != t) swap_cols(pj, t);

    bool dirty = false;
    for (int i = t + 1; i < m; i++)
      if (a[i][t] != 0) {
        add_row(i, t, -(a[i][t] / a[t][t]));
        if (a[i][t] != 0) dirty = true;
      }
    for (int j = t + 1; j < n; j++)
      if (a[t][j] != 0) {
        add_col(j, t, -(a[t][j] / a[t][t]));
        if (a[t][j] != 0) dirty = true;
      }
    if (dirty) continue;  // remainders left; pick a smaller pivot

    // divisibility: fold any non-multiple into column t and retry
    bool fixed = true;
    for (int i = t + 1; i < m && fixed; i++)
      for (int j = t + 1; j < n && fixed; j++)
        if (a[i][j] % a[t][t] != 0) {
          add_row(t, i, 1);
          fixed = false;
        }
    if (!fixed) continue;

    if (a[t][t] < 0) negate_row(t);
    t++;
  }
  r.rank = t;
  r.s = a;
  for (int i = 0; i < t; i++) r.diag.push_back(a[i][i]);
  return r;
}

// columns of v past the rank form a basis of the right kernel (saturated,
// since v is unimodular)
inline std::vector<std::vector<int64_t>> kernel_basis(const zmat& a) {
  if (zrows(a) == 0 || zcols(a) == 0) {
    std::vector<std::vector<int64_t>> id;
    for (int j = 0; j < zcols(a); j++) {
      std::vector<int64_t> e(zcols(a), 0);
      e[j] = 1;
      id.push_back(e);
    }
    return id;
  }
  smith_result r = smith_form(a);
  std::vector<std::vector<int64_t>> out;
  for (int j = r.rank; j < zcols(a); j++) {
    std::vector<int64_t> col(zrows(r.v));
    for (int i = 0; i < zrows(r.v); i++) col[i] = r.v[i][j];
    out.push_back(col);
  }
  return out;
}

// invariant factor list of coker(a) on Z^rows: torsion factors > 1 first,
// then one 0 per free summand
inline std::vector<int64_t> cokernel_invariants(const zmat& a, int ambient_rank) {
  std::vector<int64_t> out;
  int rank = 0;
  if (zrows(a) > 0 && zcols(a) > 0) {
    smith_result r = smith_form(a);
    rank = r.rank;
    for (int64_t d : r.diag)
      if (d > 1) out.push_back(d);
  }
  for (int i = rank; i < ambient_rank; i++) out.push_back(0);
  return out;
}

}  // namespace modbraid
