#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <set>

#include "modbraid/factorization.hpp"
#include "test_util.hpp"

using namespace modbraid;

namespace {

marked_tree k0_tree() { return tree_from_bits("0"); }

// a random braid factorization, not necessarily simple
braid_fact random_fact(std::mt19937& rng, int r, int maxlen) {
  braid_fact f;
  for (int i = 0; i < r; i++) f.m.push_back(mbtest::random_braid(rng, maxlen));
  return f;
}

template <class G>
factorization<G> random_moves(std::mt19937& rng, factorization<G> f,
                              int count) {
  std::uniform_int_distribution<int> pos(1, f.length() - 1), dir(0, 1);
  for (int i = 0; i < count; i++)
    f = hurwitz_move(f, pos(rng), dir(rng) == 0);
  return f;
}

// the two length-two factorizations attached to the two-loop graphs
gamma_fact two_loop_left() {
  gamma_elt u = parse_gamma("xYx");
  return {{conjugate(u, parse_gamma("XY")), conjugate(u, parse_gamma("YXY"))}};
}

gamma_fact two_loop_right() {
  gamma_elt u = parse_gamma("xYx");
  return {{u, conjugate(u, parse_gamma("YXYxY"))}};
}

}  // namespace

TEST_CASE("tree factorizations reproduce the pinned examples") {
  marked_tree t = k0_tree();

  braid_fact f0 = from_tree_b3(t, 0);
  REQUIRE(f0.length() == 2);
  CHECK(f0.m[0] == parse_braid("s1 s1 s2 S1 S1"));
  CHECK(f0.m[1] == parse_braid("s2"));

  braid_fact f1 = from_tree_b3(t, 1);
  CHECK(f1.m[0] == parse_braid("s1 s2 S1"));
  CHECK(f1.m[1] == parse_braid("S1 s2 s1"));

  CHECK(is_simple(f0));
  CHECK(is_simple(f1));
  CHECK(is_simple(to_gamma(f0)));
  CHECK(is_simple(to_sl2(f0)));

  CHECK_THROWS_AS(from_tree_b3(t, 4), mb_error);   // shifts live in [0, 5k+4)
  CHECK_THROWS_AS(from_tree_b3(t, -1), mb_error);

  // lengths and simplicity across all small trees
  std::mt19937 rng(2026);
  for (int k = 0; k <= 4; k++) {
    for (const tree_class& c : enumerate_classes(k)) {
      long shift = (long)(rng() % (5 * k + 4));
      braid_fact f = from_tree_b3(c.rep, shift);
      REQUIRE(f.length() == k + 2);
      CHECK(is_simple(f));
      for (const braid_elt& b : f.m) CHECK(degree(b) == 1);
    }
  }
}

TEST_CASE("monodromy at infinity matches the closed forms") {
  std::mt19937 rng(71);
  for (int k = 0; k <= 4; k++) {
    gamma_elt xy = parse_gamma("XY");
    gamma_elt ginf = gamma_pow(xy, -(5 * k + 4));
    braid_elt binf =
        braid_pow(braid_s1() * braid_s2(), 3 * (k + 1)) *
        braid_pow(braid_s1(), -(5 * k + 4));
    mat2 minf = neg(mat_pow(neg(MAT_T), -(5 * k + 4)));
    for (const tree_class& c : enumerate_classes(k)) {
      long shift = (long)(rng() % (5 * k + 4));
      braid_fact f = from_tree_b3(c.rep, shift);
      braid_elt b = monodromy_at_infinity(f);
      CHECK(b == binf);
      CHECK(degree(b) == f.length());  // deg = r for simple factorizations
      CHECK(monodromy_at_infinity(to_gamma(f)) == ginf);
      CHECK(monodromy_at_infinity(to_sl2(f)) == minf);
      CHECK(project(b) == minf);
    }
  }
}

TEST_CASE("hurwitz moves fix the product and invert cleanly") {
  std::mt19937 rng(9001);

  for (int trial = 0; trial < 60; trial++) {
    braid_fact f = random_fact(rng, 2 + (int)(rng() % 4), 8);
    int r = f.length();
    braid_elt before = monodromy_at_infinity(f);
    int i = 1 + (int)(rng() % (r - 1));

    braid_fact g = hurwitz_move(f, i, true);
    CHECK(monodromy_at_infinity(g) == before);
    CHECK(hurwitz_move(g, i, false) == f);
    CHECK(hurwitz_move(hurwitz_move(f, i, false), i, true) == f);

    braid_fact h = random_moves(rng, f, 12);
    CHECK(monodromy_at_infinity(h) == before);

    // global conjugation conjugates the product
    braid_elt w = mbtest::random_braid(rng, 6);
    braid_fact fc = global_conjugate(f, w);
    CHECK(monodromy_at_infinity(fc) == conjugate(before, w));
  }

  braid_fact f = from_tree_b3(k0_tree(), 0);
  CHECK_THROWS_AS(hurwitz_move(f, 0), mb_error);
  CHECK_THROWS_AS(hurwitz_move(f, 2), mb_error);

  // moves and conjugation preserve simplicity
  for (int trial = 0; trial < 30; trial++) {
    int k = (int)(rng() % 4);
    auto classes = enumerate_classes(k);
    braid_fact f2 = from_tree_b3(classes[rng() % classes.size()].rep,
                                 (long)(rng() % (5 * k + 4)));
    braid_fact g2 = random_moves(rng, f2, 10);
    CHECK(is_simple(g2));
    CHECK(is_simple(global_conjugate(g2, mbtest::random_braid(rng, 6))));
  }
}

TEST_CASE("monodromy groups are the pointed tree skeletons") {
  std::mt19937 rng(424242);
  for (int k = 0; k <= 3; k++) {
    for (const tree_class& c : enumerate_classes(k)) {
      std::set<long> shifts = {0, 1, 5L * k + 3, (long)(rng() % (5 * k + 4))};
      for (long s : shifts) {
        gamma_fact f = from_tree_gamma(c.rep, s);
        core_graph core = monodromy_group(f);
        CHECK(core == tree_monodromy_core(c.rep, s));
        REQUIRE(core_index(core).has_value());
        CHECK(*core_index(core) == 6 * (k + 1));
        CHECK(is_xy_generated(core));

        // the pointed core is a move invariant
        gamma_fact g = random_moves(rng, f, 8);
        CHECK(monodromy_group(g) == core);
      }
    }
  }

  // the two shifts of the one-edge tree: distinct subgroups, conjugate
  core_graph h0 = monodromy_group(from_tree_gamma(k0_tree(), 0));
  core_graph h1 = monodromy_group(from_tree_gamma(k0_tree(), 1));
  CHECK(h0 != h1);
  CHECK(!(h0 == h1));
  CHECK(cores_conjugate(h0, h1));
  CHECK(*core_index(h0) == 6);
  CHECK(*core_index(h1) == 6);
}

TEST_CASE("the four five-node classes give normalizer indices 1 2 2 3") {
  std::multiset<size_t> orders;
  for (const tree_class& c : enumerate_classes(4)) {
    core_graph core = monodromy_group(from_tree_gamma(c.rep, 0));
    skeleton sk = core_to_skeleton(core);
    orders.insert(automorphisms(sk).size());
  }
  CHECK(orders == std::multiset<size_t>({1, 2, 2, 3}));
}

TEST_CASE("the length-two pair folds to the two-loop cores") {
  gamma_fact gl = two_loop_left(), gr = two_loop_right();
  CHECK(is_simple(gl));
  CHECK(is_simple(gr));

  // the displayed simple lifts project back onto the entries
  braid_fact bl{{parse_braid("s1 s2 S1"),
                 parse_braid("s2 s1 s1 s1 s2 S1 S1 S1 S2")}};
  braid_elt beta = parse_braid("s2 s1 s1 S2 s1");
  braid_fact br{{parse_braid("s2"), conjugate(parse_braid("s2"), beta)}};
  CHECK(to_gamma(bl) == gl);
  CHECK(to_gamma(br) == gr);
  CHECK(lift(gl) == bl);
  CHECK(lift(gr) == br);

  // equal monodromy at infinity: YX(XY)^-3 YX(XY)^-3, matrix [4,-15;-5,19]
  gamma_elt yx = parse_gamma("YX");
  gamma_elt block = yx * gamma_pow(parse_gamma("XY"), -3);
  gamma_elt ginf = block * block;
  CHECK(monodromy_at_infinity(gl) == ginf);
  CHECK(monodromy_at_infinity(gr) == ginf);
  CHECK(to_matrix(ginf) == mat2{4, -15, -5, 19});

  // in the braid group: the central factor is implicit in the display
  braid_elt binf = inverse(braid_center()) *
                   braid_pow(parse_braid("s2 s1 s1 s1 s2 S1"), 2);
  CHECK(monodromy_at_infinity(bl) == binf);
  CHECK(monodromy_at_infinity(br) == binf);
  CHECK(binf.img == ginf);
  CHECK(degree(binf) == 2);

  // non-conjugate infinite-index groups, mirror images of each other
  core_graph cl = monodromy_group(gl), cr = monodromy_group(gr);
  CHECK(cl.n == 14);
  CHECK(cr.n == 14);
  CHECK(cl.triangles() == 2);
  CHECK(cr.triangles() == 2);
  CHECK(!core_index(cl).has_value());
  CHECK(!cores_conjugate(cl, cr));
  CHECK(cores_isomorphic(strip_base(mirror(cl)), strip_base(cr)));
  CHECK(is_xy_generated(cl));
  CHECK(is_xy_generated(cr));

  // both graphs carry infinity distances (5,5)
  infinity_data il = infinity_distances(cl), ir = infinity_distances(cr);
  CHECK(cyclically_equal(il.m, {5, 5}));
  CHECK(cyclically_equal(ir.m, {5, 5}));
}

TEST_CASE("simple factorizations lift and project consistently") {
  std::mt19937 rng(607);

  // class criterion on matrices: conjugates of T are simple, of T^-1 not
  CHECK(is_simple(MAT_T));
  CHECK(!is_simple(inv(MAT_T)));
  CHECK(!is_simple(MAT_ID));
  CHECK(!is_simple(mat_pow(MAT_T, 2)));  // imprimitive unipotent
  for (int trial = 0; trial < 200; trial++) {
    mat2 g = project(mbtest::random_braid(rng, 10));
    CHECK(is_simple(conjugate(MAT_T, g)));
    CHECK(!is_simple(conjugate(inv(MAT_T), g)));
  }

  for (int trial = 0; trial < 40; trial++) {
    int k = (int)(rng() % 3);
    auto classes = enumerate_classes(k);
    braid_fact f = from_tree_b3(classes[rng() % classes.size()].rep,
                                (long)(rng() % (5 * k + 4)));
    gamma_fact g = to_gamma(f);

    // the simple lift is unique, so lifting inverts the projection
    CHECK(lift(g) == f);
    CHECK(to_gamma(lift(g)) == g);

    // move-then-lift = lift-then-move
    int i = 1 + (int)(rng() % (f.length() - 1));
    bool fwd = rng() % 2 == 0;
    CHECK(lift(hurwitz_move(g, i, fwd)) == hurwitz_move(lift(g), i, fwd));
  }
}

TEST_CASE("artin action and fundamental group presentations") {
  using words3 = std::array<free_word, 3>;
  CHECK(artin_action(braid_s1()) == words3{{{1, 2, -1}, {1}, {3}}});
  CHECK(artin_action(inverse(braid_s1())) == words3{{{2}, {-2, 1, 2}, {3}}});
  CHECK(artin_action(braid_s2()) == words3{{{1}, {2, 3, -2}, {2}}});
  CHECK(artin_action(inverse(braid_s2())) == words3{{{1}, {3}, {-3, 2, 3}}});

  // the action composes as a homomorphism
  std::mt19937 rng(13);
  for (int trial = 0; trial < 40; trial++) {
    braid_elt a = mbtest::random_braid(rng, 8);
    braid_elt b = mbtest::random_braid(rng, 8);
    words3 ia = artin_action(a), iab = artin_action(a * b);
    for (int j = 0; j < 3; j++)
      CHECK(iab[j] == artin_detail::substitute(artin_action(b)[j], ia));
  }

  // pinned homology groups
  CHECK(abelianization(braid_fact{}) == std::vector<int64_t>{0, 0, 0});
  CHECK(abelianization(braid_fact{{braid_s1()}}) ==
        std::vector<int64_t>{0, 0});
  CHECK(abelianization(braid_fact{{braid_center()}}) ==
        std::vector<int64_t>{0, 0, 0});
  CHECK(abelianization(from_tree_b3(k0_tree(), 0)) ==
        std::vector<int64_t>{0, 0});
  CHECK(abelianization(from_tree_b3(k0_tree(), 1)) ==
        std::vector<int64_t>{0, 0});
  for (int k = 2; k <= 4; k++)
    for (const tree_class& c : enumerate_classes(k))
      CHECK(abelianization(from_tree_b3(c.rep, 0)) ==
            std::vector<int64_t>{0});

  // abelianization is a move invariant (checked move by move: image words of
  // deeply moved entries grow exponentially, so this stays shallow)
  braid_fact base = from_tree_b3(enumerate_classes(2)[0].rep, 3);
  std::vector<int64_t> h1 = abelianization(base);
  for (int i = 1; i < base.length(); i++) {
    CHECK(abelianization(hurwitz_move(base, i, true)) == h1);
    CHECK(abelianization(hurwitz_move(base, i, false)) == h1);
  }
  CHECK(abelianization(hurwitz_move(hurwitz_move(base, 1, true), 2, false)) ==
        h1);

  // presentations list only nontrivial reduced relators
  fp_presentation p = pi1_presentation(braid_fact{{braid_s1()}});
  REQUIRE(p.relators.size() == 2);
  CHECK(p.relators[0] == free_word{1, 2, -1, -1});
  CHECK(p.relators[1] == free_word{1, -2});
}

TEST_CASE("mod-n reduction and hurwitz orbits") {
  std::mt19937 rng(31337);
  braid_fact f0 = from_tree_b3(k0_tree(), 0);
  braid_fact f1 = from_tree_b3(k0_tree(), 1);

  CHECK_THROWS_AS(reduce_mod(f0, 1), mb_error);
  CHECK_THROWS_AS(reduce_mod(f0, 256), mb_error);

  // reduction commutes with moves
  for (int trial = 0; trial < 40; trial++) {
    int n = 2 + (int)(rng() % 30);
    braid_fact f = random_fact(rng, 3, 8);
    int i = 1 + (int)(rng() % 2);
    bool fwd = rng() % 2 == 0;
    CHECK(reduce_mod(hurwitz_move(f, i, fwd), n) ==
          hurwitz_move(reduce_mod(f, n), i, fwd));
  }

  // For length two, the double move is global conjugation by the inverse
  // product.  Mod an odd n that conjugation reaches the s1-conjugation
  // relating the two shifts, so odd moduli never separate this pair; even
  // moduli do.
  braid_elt c = monodromy_at_infinity(f0);
  CHECK(hurwitz_move(hurwitz_move(f0, 1, true), 1, true) ==
        global_conjugate(f0, inverse(c)));

  mod_fact m0 = reduce_mod(f0, 5), m1 = reduce_mod(f1, 5);
  orbit_result r0 = hurwitz_orbit(m0), r1 = hurwitz_orbit(m1);
  CHECK(!r0.capped);
  CHECK(!r1.capped);
  CHECK(r0.size == 5);
  CHECK(r1.size == 5);
  CHECK(r0.fingerprint == r1.fingerprint);  // one orbit mod 5

  orbit_result e0 = hurwitz_orbit(reduce_mod(f0, 8));
  orbit_result e1 = hurwitz_orbit(reduce_mod(f1, 8));
  CHECK(e0.size == 4);
  CHECK(e1.size == 4);
  CHECK(e0.fingerprint != e1.fingerprint);  // disjoint orbits mod 8

  orbit_result t0 = hurwitz_orbit(reduce_mod(f0, 32));
  orbit_result t1 = hurwitz_orbit(reduce_mod(f1, 32));
  CHECK(t0.size == 16);
  CHECK(t1.size == 16);
  CHECK(t0.fingerprint != t1.fingerprint);  // disjoint orbits mod 32

  // the orbit is the same from any of its points
  orbit_result r0b = hurwitz_orbit(hurwitz_move(m0, 1, true));
  CHECK(r0b.size == r0.size);
  CHECK(r0b.fingerprint == r0.fingerprint);

  // sharded expansion is deterministic
  orbit_options par;
  par.jobs = 4;
  orbit_result r0p = hurwitz_orbit(m0, par);
  CHECK(r0p.size == r0.size);
  CHECK(r0p.fingerprint == r0.fingerprint);

  // cap handling
  orbit_options tiny;
  tiny.cap = 3;
  orbit_result rc = hurwitz_orbit(m0, tiny);
  CHECK(rc.capped);
  CHECK(rc.size == 3);

  // a cap equal to the orbit size is not exceeded
  orbit_options exact;
  exact.cap = 5;
  orbit_result rx = hurwitz_orbit(m0, exact);
  CHECK(!rx.capped);
  CHECK(rx.size == 5);

  // environment override for the default cap
  setenv("MM_CAP", "2", 1);
  CHECK(default_orbit_cap() == 2);
  orbit_result re = hurwitz_orbit(m0);
  CHECK(re.capped);
  CHECK(re.size == 2);
  unsetenv("MM_CAP");
  CHECK(default_orbit_cap() == 10000000ull);

  // weak mode: global conjugation does not change the weak orbit
  orbit_options weak;
  weak.weak = true;
  orbit_result w0 = hurwitz_orbit(m0, weak);
  CHECK(w0.size <= r0.size);
  mat2 g = project(mbtest::random_braid(rng, 8));
  sl2_fact conj = global_conjugate(to_sl2(f0), g);
  orbit_result wc = hurwitz_orbit(reduce_mod(conj, 5), weak);
  CHECK(wc.size == w0.size);
  CHECK(wc.fingerprint == w0.fingerprint);

  mod_fact m11 = reduce_mod(f0, 11);
  orbit_options weak11;
  weak11.weak = true;
  CHECK_THROWS_AS(hurwitz_orbit(m11, weak11), mb_error);
}
