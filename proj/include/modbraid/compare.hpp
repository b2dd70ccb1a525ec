#pragma once
// Necessary-condition comparison of two monodromy factorizations of the same
// length.  Nothing here can certify equivalence; each negative answer certifies
// a non-equivalence:
//   same_infinity = false      -> not strongly equivalent
//   same_group_pointed = false -> not strongly equivalent
//   conjugate_groups = false   -> not weakly equivalent
//   lattices_match = false     -> not weakly equivalent
// The lattice fingerprints cover the factorization's transcendental lattice and,
// for simple factorizations, the single-(-1) recolorings of its lift.

#include <algorithm>
#include <string>
#include <vector>

#include "factorization.hpp"
#include "lattice.hpp"

namespace modbraid {

struct compare_report {
  bool same_infinity = false;       // monodromy at infinity equal on the nose
  bool same_group_pointed = false;  // pointed monodromy cores equal
  bool conjugate_groups = false;    // cores isomorphic after forgetting the base
  bool simple = false;              // all entries simple on both sides
  bool have_lattice = false;        // lattice fingerprints were computed
  std::string lattice1, lattice2;   // transcendental-lattice fingerprints
  std::vector<std::string> colors1, colors2;  // sorted single-(-1) fingerprints
  bool lattices_match = true;       // every computed lattice print agrees

  bool weakly_distinguished() const {
    return !conjugate_groups || (have_lattice && !lattices_match);
  }
  bool strongly_distinguished() const {
    return weakly_distinguished() || !same_group_pointed || !same_infinity;
  }
};

namespace cmp_detail {

inline void check_lengths(size_t a, size_t b) {
  if (a != b)
    throw mb_error("TagMismatch", "factorizations have different lengths");
}

// multiset of single-(-1) recolorings; defined only for simple factorizations
inline std::vector<std::string> color_prints(const gamma_fact& f) {
  std::vector<std::string> out;
  coloring l(f.length(), 1);
  for (size_t i = 0; i < f.length(); i++) {
    l[i] = -1;
    out.push_back(fingerprint(colored_lattice(f, l)));
    l[i] = 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline void fill_lattices(compare_report& r, const sl2_fact& f1,
                          const sl2_fact& f2) {
  r.have_lattice = true;
  r.lattice1 = fingerprint(transcendental_lattice(f1));
  r.lattice2 = fingerprint(transcendental_lattice(f2));
  if (r.simple) {
    gamma_fact g1, g2;
    for (const auto& m : f1.m) g1.m.push_back(matrix_to_gamma(m));
    for (const auto& m : f2.m) g2.m.push_back(matrix_to_gamma(m));
    r.colors1 = color_prints(g1);
    r.colors2 = color_prints(g2);
  }
  r.lattices_match = (r.lattice1 == r.lattice2 && r.colors1 == r.colors2);
}

}  // namespace cmp_detail

inline compare_report compare(const gamma_fact& f1, const gamma_fact& f2) {
  cmp_detail::check_lengths(f1.length(), f2.length());
  compare_report r;
  r.same_infinity = (monodromy_at_infinity(f1) == monodromy_at_infinity(f2));
  core_graph c1 = monodromy_group(f1), c2 = monodromy_group(f2);
  r.same_group_pointed = (c1 == c2);
  r.conjugate_groups = cores_conjugate(c1, c2);
  r.simple = std::all_of(f1.m.begin(), f1.m.end(),
                         [](const gamma_elt& g) { return is_simple(g); }) &&
             std::all_of(f2.m.begin(), f2.m.end(),
                         [](const gamma_elt& g) { return is_simple(g); });
  if (r.simple) {
    // a simple gamma factorization has a canonical lift; compare its lattices
    coloring all1(f1.length(), 1);
    cmp_detail::fill_lattices(r, colored_lift(f1, all1), colored_lift(f2, all1));
  }
  return r;
}

inline compare_report compare(const braid_fact& f1, const braid_fact& f2) {
  cmp_detail::check_lengths(f1.length(), f2.length());
  compare_report r = compare(to_gamma(f1), to_gamma(f2));
  // the braid monodromy at infinity is finer than its image downstairs
  r.same_infinity = (monodromy_at_infinity(f1) == monodromy_at_infinity(f2));
  // the matrix lattice is defined whether or not the entries are simple
  cmp_detail::fill_lattices(r, to_sl2(f1), to_sl2(f2));
  return r;
}

inline compare_report compare(const sl2_fact& f1, const sl2_fact& f2) {
  cmp_detail::check_lengths(f1.length(), f2.length());
  compare_report r;
  r.same_infinity = (monodromy_at_infinity(f1) == monodromy_at_infinity(f2));
  gamma_fact g1, g2;
  for (const auto& m : f1.m) g1.m.push_back(matrix_to_gamma(m));
  for (const auto& m : f2.m) g2.m.push_back(matrix_to_gamma(m));
  core_graph c1 = monodromy_group(g1), c2 = monodromy_group(g2);
  r.same_group_pointed = (c1 == c2);
  r.conjugate_groups = cores_conjugate(c1, c2);
  r.simple = std::all_of(f1.m.begin(), f1.m.end(),
                         [](const mat2& m) { return is_simple(m); }) &&
             std::all_of(f2.m.begin(), f2.m.end(),
                         [](const mat2& m) { return is_simple(m); });
  cmp_detail::fill_lattices(r, f1, f2);
  return r;
}

}  // namespace modbraid
