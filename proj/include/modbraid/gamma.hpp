#pragma once
// Exact arithmetic in the modular group Gamma = PSL(2,Z) = Z/3 * Z/2,
// in SL(2,Z), and in the braid group B3, plus conjugacy-class utilities.
//
// Gamma elements are kept in normal form: an alternating word in the
// letters X, X^2 (the Z/3 factor) and Y (the Z/2 factor).  B3 is stored
// as (image in Gamma, degree in Z); this pair determines the braid since
// B3 is the central extension of PSL(2,Z) by its degree-6 center.

#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace modbraid {

struct mb_error : std::runtime_error {
  std::string code;
  mb_error(std::string c, const std::string& what)
      : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

// ---------------------------------------------------------------- letters

// 1 = X, 2 = X^2 (= X^-1), 3 = Y
using letter = uint8_t;
constexpr letter LX = 1, LXX = 2, LY = 3;

inline bool x_type(letter l) { return l != LY; }

// Push one letter onto a normal-form word, reducing at the seam.
inline void push_letter(std::vector<letter>& w, letter l) {
  if (!w.empty() && x_type(w.back()) == x_type(l)) {
    if (l == LY) {  // Y * Y = 1
      w.pop_back();
      return;
    }
    int s = (w.back() + l) % 3;
    if (s == 0)
      w.pop_back();
    else
      w.back() = (letter)s;
    return;
  }
  w.push_back(l);
}

// ---------------------------------------------------------------- Gamma

struct gamma_elt {
  std::vector<letter> w;  // alternating, fully reduced

  bool is_identity() const { return w.empty(); }
  size_t length() const { return w.size(); }
  bool operator==(const gamma_elt& o) const { return w == o.w; }
  bool operator!=(const gamma_elt& o) const { return !(*this == o); }
  bool operator<(const gamma_elt& o) const { return w < o.w; }
};

inline gamma_elt normalize(const std::vector<letter>& raw) {
  gamma_elt g;
  g.w.reserve(raw.size());
  for (letter l : raw) push_letter(g.w, l);
  return g;
}

inline gamma_elt gamma_one() { return {}; }
inline gamma_elt gamma_x() { return normalize({LX}); }
inline gamma_elt gamma_xx() { return normalize({LXX}); }
inline gamma_elt gamma_y() { return normalize({LY}); }
inline gamma_elt gamma_xy() { return normalize({LX, LY}); }

inline gamma_elt multiply(const gamma_elt& g, const gamma_elt& h) {
  gamma_elt r = g;
  r.w.reserve(g.w.size() + h.w.size());
  for (letter l : h.w) push_letter(r.w, l);
  return r;
}

inline gamma_elt inverse(const gamma_elt& g) {
  gamma_elt r;
  r.w.reserve(g.w.size());
  for (auto it = g.w.rbegin(); it != g.w.rend(); ++it)
    r.w.push_back(*it == LY ? LY : (*it == LX ? LXX : LX));
  return r;
}

inline gamma_elt operator*(const gamma_elt& a, const gamma_elt& b) { return multiply(a, b); }

inline gamma_elt gamma_pow(const gamma_elt& g, long e) {
  gamma_elt base = e < 0 ? inverse(g) : g;
  long n = e < 0 ? -e : e;
  gamma_elt r;
  for (long i = 0; i < n; i++) r = r * base;
  return r;
}

// by * g * by^-1
inline gamma_elt conjugate(const gamma_elt& g, const gamma_elt& by) {
  return by * g * inverse(by);
}

// "XYxY": X = X, x = X^-1 = X^2, Y = Y.  "1" (or empty) is the identity.
inline gamma_elt parse_gamma(const std::string& s) {
  std::vector<letter> raw;
  for (char c : s) {
    switch (c) {
      case 'X': raw.push_back(LX); break;
      case 'x': raw.push_back(LXX); break;
      case 'Y': case 'y': raw.push_back(LY); break;
      case '1': case ' ': break;
      default:
        throw mb_error("ParseError", std::string("bad letter '") + c + "' in word");
    }
  }
  return normalize(raw);
}

inline std::string print_gamma(const gamma_elt& g) {
  if (g.w.empty()) return "1";
  std::string s;
  for (letter l : g.w) s += (l == LX ? 'X' : l == LXX ? 'x' : 'Y');
  return s;
}

// ---------------------------------------------------------------- SL(2,Z)

struct mat2 {
  int64_t a = 1, b = 0, c = 0, d = 1;

  bool operator==(const mat2& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
  bool operator!=(const mat2& o) const { return !(*this == o); }
  int64_t det() const { return a * d - b * c; }
  int64_t trace() const { return a + d; }
};

inline mat2 mul(const mat2& m, const mat2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
          m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}
inline mat2 operator*(const mat2& m, const mat2& n) { return mul(m, n); }
inline mat2 neg(const mat2& m) { return {-m.a, -m.b, -m.c, -m.d}; }
inline mat2 inv(const mat2& m) {
  assert(m.det() == 1);
  return {m.d, -m.b, -m.c, m.a};
}

constexpr mat2 MAT_ID{1, 0, 0, 1};
constexpr mat2 MAT_X{-1, 1, -1, 0};   // order 3
constexpr mat2 MAT_Y{0, -1, 1, 0};    // Y^2 = -id
constexpr mat2 MAT_T{1, 1, 0, 1};     // = X*Y

// Flip the sign so the first nonzero of (a,b,c,d) is positive.
inline mat2 canonical(const mat2& m) {
  int64_t lead = m.a ? m.a : m.b ? m.b : m.c ? m.c : m.d;
  return lead < 0 ? neg(m) : m;
}

inline mat2 letter_matrix(letter l) {
  switch (l) {
    case LX: return MAT_X;
    case LXX: return mul(MAT_X, MAT_X);
    default: return MAT_Y;
  }
}

// Exact product of the letter matrices, no sign normalization.
inline mat2 to_matrix_raw(const gamma_elt& g) {
  mat2 m = MAT_ID;
  for (letter l : g.w) m = mul(m, letter_matrix(l));
  return m;
}

inline mat2 to_matrix(const gamma_elt& g) { return canonical(to_matrix_raw(g)); }

inline mat2 mat_pow(mat2 m, long e) {
  if (e < 0) { m = inv(m); e = -e; }
  mat2 r = MAT_ID;
  for (long i = 0; i < e; i++) r = mul(r, m);
  return r;
}

// Euclidean reduction: returns the unique normal form g with
// to_matrix_raw(g) == +-M.
inline gamma_elt matrix_to_gamma(mat2 M) {
  if (M.det() != 1) throw mb_error("NotUnimodular", "matrix must have det 1");
  std::vector<letter> out;
  auto emit_T_pow = [&](int64_t q) {  // T = XY, T^-1 = Y X^2
    for (int64_t i = 0; i < q; i++) { out.push_back(LX); out.push_back(LY); }
    for (int64_t i = 0; i < -q; i++) { out.push_back(LY); out.push_back(LXX); }
  };
  int guard = 0;
  while (M.c != 0) {
    assert(++guard < 512);
    if (std::llabs(M.a) >= std::llabs(M.c)) {
      // M <- T^-q M with q minimizing |a - q c|; record T^q.
      int64_t q = M.a / M.c;
      if (std::llabs(M.a - (q + 1) * M.c) < std::llabs(M.a - q * M.c)) q += 1;
      if (std::llabs(M.a - (q - 1) * M.c) < std::llabs(M.a - q * M.c)) q -= 1;
      emit_T_pow(q);
      M = {M.a - q * M.c, M.b - q * M.d, M.c, M.d};
    } else {
      // row swap: M <- Y M; record Y (sign washes out in Gamma).
      out.push_back(LY);
      M = {-M.c, -M.d, M.a, M.b};
    }
  }
  assert(M.a == M.d && (M.a == 1 || M.a == -1));
  emit_T_pow(M.a == 1 ? M.b : -M.b);
  return normalize(out);
}

// ---------------------------------------------------------------- degrees

// Gamma -> Z/6 with X -> 4, Y -> 3.
inline int degree6(const gamma_elt& g) {
  int d = 0;
  for (letter l : g.w) d += (l == LX ? 4 : l == LXX ? 8 : 3);
  return d % 6;
}

// SL(2,Z) -> Z/12 with X -> 4, Y -> 9 (so T -> 1 and -id -> 6).
inline int degree12(const mat2& M) {
  gamma_elt g = matrix_to_gamma(M);
  int d = 0;
  for (letter l : g.w) d += (l == LX ? 4 : l == LXX ? 8 : 9);
  d %= 12;
  mat2 raw = to_matrix_raw(g);
  if (raw == M) return d;
  assert(raw == neg(M));
  return (d + 6) % 12;
}

// ---------------------------------------------------------------- B3

// sigma1 -> XY, sigma2 -> X^2 Y X^-1; degree = abelianization, deg sigma_i = 1.
struct braid_elt {
  gamma_elt img;
  int64_t deg = 0;

  bool operator==(const braid_elt& o) const { return deg == o.deg && img == o.img; }
  bool operator!=(const braid_elt& o) const { return !(*this == o); }
};

inline braid_elt braid_one() { return {gamma_one(), 0}; }
inline braid_elt braid_s1() { return {parse_gamma("XY"), 1}; }
inline braid_elt braid_s2() { return {parse_gamma("xYx"), 1}; }

inline braid_elt multiply(const braid_elt& a, const braid_elt& b) {
  return {a.img * b.img, a.deg + b.deg};
}
inline braid_elt operator*(const braid_elt& a, const braid_elt& b) { return multiply(a, b); }
inline braid_elt inverse(const braid_elt& a) { return {inverse(a.img), -a.deg}; }
inline braid_elt conjugate(const braid_elt& g, const braid_elt& by) {
  return by * g * inverse(by);
}
inline braid_elt braid_pow(const braid_elt& g, long e) {
  braid_elt base = e < 0 ? inverse(g) : g;
  long n = e < 0 ? -e : e;
  braid_elt r = braid_one();
  for (long i = 0; i < n; i++) r = r * base;
  return r;
}

inline int64_t degree(const braid_elt& b) { return b.deg; }

// central element (s1 s2)^3; generates the kernel of B3 -> PSL(2,Z)
inline braid_elt braid_center() {
  braid_elt c = braid_pow(braid_s1() * braid_s2(), 3);
  assert(c.img.is_identity() && c.deg == 6);
  return c;
}

// The canonical SL(2,Z) image: the sign is fixed by matching degree mod 12.
inline mat2 project(const braid_elt& b) {
  mat2 M = to_matrix(b.img);
  int d = degree12(M);
  int want = (int)(((b.deg % 12) + 12) % 12);
  if (d == want) return M;
  assert((d + 6) % 12 == want);
  return neg(M);
}

// "s1 S2 s1": lowercase = generator, uppercase = inverse, whitespace-separated.
inline braid_elt parse_braid(const std::string& s) {
  braid_elt r = braid_one();
  size_t i = 0;
  while (i < s.size()) {
    if (isspace((unsigned char)s[i])) { i++; continue; }
    if (s[i] == 'e') { i++; continue; }  // identity token
    if (i + 1 >= s.size()) throw mb_error("ParseError", "dangling braid token in '" + s + "'");
    char g = s[i], n = s[i + 1];
    i += 2;
    braid_elt t;
    if (n == '1') t = braid_s1();
    else if (n == '2') t = braid_s2();
    else throw mb_error("ParseError", "bad braid generator index in '" + s + "'");
    if (g == 's') r = r * t;
    else if (g == 'S') r = r * inverse(t);
    else throw mb_error("ParseError", "bad braid token in '" + s + "'");
  }
  return r;
}

// Recover a word in s1, s2 evaluating to b: lift the image letterwise
// (X -> (s2 s1)^-1, X^2 -> s2 s1, Y -> s2 s1^2) and patch the degree with
// the central (s1 s2)^3.
inline std::vector<int> braid_word(const braid_elt& b) {
  std::vector<int> word;
  int64_t deg0 = 0;
  for (letter l : b.img.w) {
    if (l == LX) { word.push_back(-1); word.push_back(-2); deg0 -= 2; }
    else if (l == LXX) { word.push_back(2); word.push_back(1); deg0 += 2; }
    else { word.push_back(2); word.push_back(1); word.push_back(1); deg0 += 3; }
  }
  int64_t t = b.deg - deg0;
  assert(t % 6 == 0);
  t /= 6;
  std::vector<int> pre;
  for (int64_t i = 0; i < t; i++) { pre.push_back(1); pre.push_back(2); pre.push_back(1); pre.push_back(2); pre.push_back(1); pre.push_back(2); }
  for (int64_t i = 0; i < -t; i++) { pre.push_back(-2); pre.push_back(-1); pre.push_back(-2); pre.push_back(-1); pre.push_back(-2); pre.push_back(-1); }
  pre.insert(pre.end(), word.begin(), word.end());
  std::vector<int> red;  // free reduction
  for (int g : pre) {
    if (!red.empty() && red.back() == -g) red.pop_back();
    else red.push_back(g);
  }
  return red;
}

inline braid_elt braid_from_word(const std::vector<int>& word) {
  braid_elt r = braid_one();
  for (int t : word) {
    braid_elt g = (std::abs(t) == 1) ? braid_s1() : braid_s2();
    r = r * (t > 0 ? g : inverse(g));
  }
  return r;
}

inline std::string print_braid(const braid_elt& b) {
  std::vector<int> word = braid_word(b);
  if (word.empty()) return "e";
  std::string s;
  for (size_t i = 0; i < word.size(); i++) {
    if (i) s += ' ';
    s += (word[i] > 0 ? 's' : 'S');
    s += char('0' + std::abs(word[i]));
  }
  return s;
}

// ---------------------------------------------------------------- conjugacy

// Cyclically reduced word, rotated to its lexicographic minimum: a complete
// conjugacy invariant in a free product of cyclic groups.
struct cyclic_word {
  std::vector<letter> w;

  bool operator==(const cyclic_word& o) const { return w == o.w; }
  bool operator!=(const cyclic_word& o) const { return !(*this == o); }
  bool operator<(const cyclic_word& o) const { return w < o.w; }
};

inline cyclic_word conjugacy_class(const gamma_elt& g) {
  std::vector<letter> v = g.w;
  size_t lo = 0, hi = v.size();
  while (hi - lo >= 2 && x_type(v[lo]) == x_type(v[hi - 1])) {
    if (v[lo] == LY) {  // Y ... Y wraps to Y*Y = 1
      lo++; hi--;
    } else {
      int s = (v[lo] + v[hi - 1]) % 3;
      hi--;
      if (s == 0) lo++;
      else v[lo] = (letter)s;
    }
  }
  std::vector<letter> cyc(v.begin() + lo, v.begin() + hi);
  if (cyc.size() <= 1) return {cyc};
  std::vector<letter> best = cyc;
  for (size_t r = 1; r < cyc.size(); r++) {
    std::vector<letter> rot;
    rot.reserve(cyc.size());
    rot.insert(rot.end(), cyc.begin() + r, cyc.end());
    rot.insert(rot.end(), cyc.begin(), cyc.begin() + r);
    if (rot < best) best = rot;
  }
  return {best};
}

inline bool is_conjugate(const gamma_elt& g, const gamma_elt& h) {
  return conjugacy_class(g) == conjugacy_class(h);
}

// simple = conjugate to XY
inline bool is_simple(const gamma_elt& g) {
  return conjugacy_class(g).w == std::vector<letter>{LX, LY};
}

inline std::string print_cyclic(const cyclic_word& c) {
  if (c.w.empty()) return "1";
  std::string s;
  for (letter l : c.w) s += (l == LX ? 'X' : l == LXX ? 'x' : 'Y');
  return s;
}

// Simple elements lift canonically: the SL2 lift with trace +2 and the
// degree-1 braid lift.
inline std::pair<mat2, braid_elt> lift_simple(const gamma_elt& g) {
  if (!is_simple(g)) throw mb_error("NotSimple", "element is not conjugate to XY");
  braid_elt b{g, 1};
  mat2 M = project(b);
  assert(M.trace() == 2);
  return {M, b};
}

}  // namespace modbraid
