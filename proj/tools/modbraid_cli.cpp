// Command-line front end: tree census, factorization builders, subgroup
// folding, necessary-condition comparison, finite-quotient orbits, skeleton
// utilities, and lattice reports.  All reports are JSON on stdout; timings go
// to stderr.  Exit codes: 0 success, 2 invalid input, 3 orbit cap exceeded.

#include <CLI11.hpp>
#include <modbraid/io.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>

using namespace modbraid;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mb_error("NoFile", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fact_file load_fact(const std::string& path) {
  return parse_fact_file(read_file(path));
}

json load_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw mb_error("BadJson", std::string("cannot parse '") + path + "': " + e.what());
  }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// stable 64-bit digest for long fingerprint strings (FNV-1a)
std::string digest(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

// ------------------------------------------------------------------- counts

int cmd_counts(int max_k, bool as_json) {
  if (as_json) {
    json rows = json::array();
    for (int k = 0; k <= max_k; k++) {
      tree_counts c = counts(k);
      json r;
      r["k"] = k;
      r["catalan"] = c.catalan;
      r["t1"] = c.t1;
      r["t2"] = c.t2;
      r["t3"] = c.t3;
      r["t"] = c.t;
      r["tMarked"] = c.t_marked;
      rows.push_back(r);
    }
    emit(rows);
    return 0;
  }
  printf("%3s %12s %12s %8s %8s %12s %12s\n", "k", "C(k)", "T1", "T2", "T3",
         "T(k)", "T~(k)");
  for (int k = 0; k <= max_k; k++) {
    tree_counts c = counts(k);
    printf("%3d %12llu %12llu %8llu %8llu %12llu %12llu\n", k, c.catalan, c.t1,
           c.t2, c.t3, c.t, c.t_marked);
  }
  return 0;
}

// -------------------------------------------------------------------- trees

// one canonical class per line, streamed as the census discovers it
int cmd_trees(int k, const std::string& out_path) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw mb_error("NoFile", "cannot write '" + out_path + "'");
    out = &file;
  }
  uint64_t classes = 0;
  std::set<std::vector<int>> seen;
  enumerate_marked(k, [&](const marked_tree& t) {
    std::vector<int> m = distance_sequence(t);
    std::vector<int> key = min_rotation(m);
    if (!seen.insert(key).second) return;
    classes++;
    for (size_t i = 0; i < key.size(); i++)
      *out << (i ? "," : "") << key[i];
    *out << " aut=" << rotation_stabilizer(m) << "\n";
  });
  std::cerr << "# classes=" << classes << "\n";
  return 0;
}

// --------------------------------------------------------------------- tree

int cmd_tree(const std::string& literal, long shift, const std::string& group,
             const std::string& what, bool dot) {
  tree_literal lit = parse_tree_literal(literal);
  if (lit.labeled) {
    if (what != "skeleton")
      throw mb_error("BadLabels", "labels only apply to the skeleton output");
    gen_tree g{lit.shape, lit.labels};
    core_graph c = generalized_pseudo_tree(g);
    if (dot)
      std::cout << core_dot(c, "gtree");
    else
      emit(core_json(c));
    return 0;
  }
  if (what == "factorization") {
    if (group == "gamma")
      std::cout << print_fact_file(from_tree_gamma(lit.shape, shift));
    else if (group == "sl2")
      std::cout << print_fact_file(from_tree_sl2(lit.shape, shift));
    else
      std::cout << print_fact_file(from_tree_b3(lit.shape, shift));
    return 0;
  }
  if (what == "skeleton") {
    skeleton s = pseudo_tree(lit.shape);
    if (dot)
      std::cout << skeleton_dot(s, "tree");
    else
      emit(skeleton_json(s));
    return 0;
  }
  if (what == "lattice") {
    emit(lattice_json(transcendental_lattice(from_tree_sl2(lit.shape, shift))));
    return 0;
  }
  // invariants
  json j;
  if (group == "gamma")
    j = invariant_report(from_tree_gamma(lit.shape, shift));
  else if (group == "sl2")
    j = invariant_report(from_tree_sl2(lit.shape, shift));
  else
    j = invariant_report(from_tree_b3(lit.shape, shift));
  skeleton s = pseudo_tree(lit.shape);
  j["tree"] = print_tree_literal(lit.shape);
  j["tree_aut"] = automorphisms(s).size();
  emit(j);
  return 0;
}

// ------------------------------------------------------------------ compare

int cmd_compare(const std::string& path1, const std::string& path2, int mod,
                uint64_t cap, int jobs) {
  fact_file a = load_fact(path1), b = load_fact(path2);
  if (a.group != b.group)
    throw mb_error("TagMismatch",
                   "'" + a.group + "' vs '" + b.group + "' entries");
  compare_report r;
  if (a.group == "gamma")
    r = compare(a.gamma, b.gamma);
  else if (a.group == "sl2")
    r = compare(a.sl2, b.sl2);
  else
    r = compare(a.b3, b.b3);
  json j = compare_json(r);

  bool capped = false;
  if (mod > 0) {
    mod_fact ma, mb;
    if (a.group == "sl2") {
      ma = reduce_mod(a.sl2, mod);
      mb = reduce_mod(b.sl2, mod);
    } else if (a.group == "b3") {
      ma = reduce_mod(a.b3, mod);
      mb = reduce_mod(b.b3, mod);
    } else
      throw mb_error("TagMismatch", "mod-n orbits need sl2 or b3 entries");
    orbit_options opt;
    opt.cap = cap;
    opt.jobs = jobs;
    orbit_result oa = hurwitz_orbit(ma, opt);
    orbit_result ob = hurwitz_orbit(mb, opt);
    capped = oa.capped || ob.capped;
    json m;
    m["mod"] = mod;
    m["orbitSizes"] = json::array({oa.size, ob.size});
    m["capped"] = capped;
    // equal least-visited states certify a shared orbit even under the cap;
    // disjointness needs both orbits fully enumerated
    if (oa.fingerprint == ob.fingerprint)
      m["sameOrbit"] = true;
    else if (!capped)
      m["sameOrbit"] = false;
    else
      m["sameOrbit"] = "undecided";
    j["modOrbits"] = m;
  }
  emit(j);
  return capped ? 3 : 0;
}

// --------------------------------------------------------------------- fold

int cmd_fold(const std::vector<std::string>& words, const std::string& path,
             bool dot) {
  std::vector<gamma_elt> gens;
  if (!path.empty()) {
    fact_file f = load_fact(path);
    if (f.group == "gamma")
      gens = f.gamma.m;
    else if (f.group == "b3")
      for (const auto& w : f.b3.m) gens.push_back(w.img);
    else
      for (const auto& m : f.sl2.m) gens.push_back(matrix_to_gamma(m));
  }
  for (const std::string& w : words) gens.push_back(parse_gamma(w));
  core_graph c = fold_subgroup(gens);
  if (dot) {
    std::cout << core_dot(c);
    return 0;
  }
  json j = core_json(c);
  auto idx = core_index(c);
  if (idx)
    j["index"] = *idx;
  else
    j["index"] = "infinite";
  j["xyGenerated"] = is_xy_generated(c);
  bool torsion = false;
  for (int e = 0; e < c.n; e++)
    torsion = torsion || c.op[e] == e || c.nx[e] == e;
  j["torsion"] = torsion;
  j["core_code"] = io_detail::code_string(core_canonical_code(c));
  try {
    infinity_data inf = infinity_distances(c);
    j["infinityDistances"] = inf.m;
  } catch (const mb_error&) {
    // no triangles, or several boundary regions: the distances are undefined
  }
  emit(j);
  return 0;
}

// -------------------------------------------------------------------- orbit

int cmd_orbit(const std::string& path, int mod, uint64_t cap, int jobs,
              bool weak) {
  fact_file f = load_fact(path);
  mod_fact m;
  if (f.group == "sl2")
    m = reduce_mod(f.sl2, mod);
  else if (f.group == "b3")
    m = reduce_mod(f.b3, mod);
  else
    throw mb_error("TagMismatch", "mod-n orbits need sl2 or b3 entries");
  orbit_options opt;
  opt.cap = cap;
  opt.jobs = jobs;
  opt.weak = weak;
  orbit_result r = hurwitz_orbit(m, opt);
  json j;
  j["mod"] = mod;
  j["weak"] = weak;
  j["size"] = r.size;
  j["capped"] = r.capped;
  j["fingerprint"] = digest(r.fingerprint);
  emit(j);
  return r.capped ? 3 : 0;
}

// ----------------------------------------------------------------- skeleton

int cmd_skeleton_iso(const std::string& p1, const std::string& p2) {
  skeleton a = skeleton_from_json(load_json(p1));
  skeleton b = skeleton_from_json(load_json(p2));
  json j;
  j["isomorphic"] = is_isomorphic(a, b);
  if (a.pointed() && b.pointed())
    j["pointedIsomorphic"] = pointed_is_isomorphic(a, b);
  emit(j);
  return 0;
}

int cmd_skeleton_aut(const std::string& p) {
  skeleton s = skeleton_from_json(load_json(p));
  json j;
  j["count"] = automorphisms(s).size();
  orbifold_counts oc = orbifold_invariants(s);
  j["orbifold"] = json::array({oc.n0, oc.n2, oc.n3});
  j["index"] = index(s);
  j["freeRank"] = stabilizer_basis(s).free_rank();
  emit(j);
  return 0;
}

int cmd_skeleton_product(const std::string& p1, const std::string& p2) {
  skeleton a = skeleton_from_json(load_json(p1));
  skeleton b = skeleton_from_json(load_json(p2));
  skeleton prod = fiber_product(a, b);
  json j;
  j["index"] = index(prod);
  j["skeleton"] = skeleton_json(prod);
  emit(j);
  return 0;
}

// ------------------------------------------------------------------ lattice

int cmd_lattice(const std::string& path, const std::string& colors) {
  fact_file f = load_fact(path);
  int_lattice l;
  if (f.group == "gamma") {
    coloring c(f.gamma.length(), 1);
    if (!colors.empty()) {
      if (colors.size() != f.gamma.length())
        throw mb_error("Range", "need one sign per entry");
      for (size_t i = 0; i < colors.size(); i++) {
        if (colors[i] != '+' && colors[i] != '-')
          throw mb_error("Range", "coloring signs are + or -");
        c[i] = (colors[i] == '+') ? 1 : -1;
      }
    }
    l = colored_lattice(f.gamma, c);
  } else {
    if (!colors.empty())
      throw mb_error("TagMismatch",
                     "colorings recolor gamma entries; matrix and braid "
                     "entries already carry their signs");
    l = transcendental_lattice(f.group == "sl2" ? f.sl2 : to_sl2(f.b3));
  }
  emit(lattice_json(l));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monodromy factorizations of elliptic fibrations: trees, "
               "subgroup folding, Hurwitz orbits, and lattice invariants"};
  app.require_subcommand(1);

  // counts
  auto* counts_cmd =
      app.add_subcommand("counts", "census totals for trees of each size");
  int max_k = 10;
  bool counts_json = false;
  counts_cmd->add_option("--max-k", max_k, "largest node count")
      ->check(CLI::Range(0, 30));
  counts_cmd->add_flag("--json", counts_json, "emit JSON rows");

  // trees
  auto* trees_cmd =
      app.add_subcommand("trees", "stream the canonical classes, one per line");
  int trees_k = 0;
  std::string trees_out;
  trees_cmd->add_option("--k", trees_k, "node count")->required()
      ->check(CLI::Range(0, 30));
  trees_cmd->add_option("--out", trees_out, "write to a file instead of stdout");

  // tree
  auto* tree_cmd =
      app.add_subcommand("tree", "reports derived from one marked tree");
  std::string tree_lit, tree_group = "b3", tree_what;
  long tree_shift = 0;
  bool tree_dot = false;
  tree_cmd->add_option("--tree", tree_lit,
                       "distance sequence '3,4,4,4,3,6', bits 'b:110100100', "
                       "optional '!L W B T' labels")
      ->required();
  tree_cmd->add_option("--shift", tree_shift, "base-point shift");
  tree_cmd->add_option("--group", tree_group, "b3, gamma, or sl2")
      ->check(CLI::IsMember({"b3", "gamma", "sl2"}));
  tree_cmd->add_option("what", tree_what, "factorization|skeleton|lattice|invariants")
      ->required()
      ->check(CLI::IsMember({"factorization", "skeleton", "lattice", "invariants"}));
  tree_cmd->add_flag("--dot", tree_dot, "DOT picture for the skeleton output");

  // compare
  auto* compare_cmd = app.add_subcommand(
      "compare", "necessary-condition comparison of two factorization files");
  std::string cmp1, cmp2;
  int cmp_mod = 0, cmp_jobs = 1;
  uint64_t cmp_cap = default_orbit_cap();
  compare_cmd->add_option("file1", cmp1)->required();
  compare_cmd->add_option("file2", cmp2)->required();
  compare_cmd->add_option("--mod", cmp_mod, "also compare Hurwitz orbits mod n")
      ->check(CLI::Range(2, 255));
  compare_cmd->add_option("--cap", cmp_cap, "orbit state cap");
  compare_cmd->add_option("--jobs", cmp_jobs, "worker threads")
      ->check(CLI::Range(1, 64));

  // fold
  auto* fold_cmd = app.add_subcommand(
      "fold", "fold the subgroup generated by words or a factorization file");
  std::vector<std::string> fold_words;
  std::string fold_file;
  bool fold_dot = false;
  fold_cmd->add_option("--words", fold_words, "generators as gamma words");
  fold_cmd->add_option("--file", fold_file, "factorization file of generators");
  fold_cmd->add_flag("--dot", fold_dot, "DOT picture of the core");

  // orbit
  auto* orbit_cmd =
      app.add_subcommand("orbit", "Hurwitz orbit of a factorization mod n");
  std::string orbit_file;
  int orbit_mod = 0, orbit_jobs = 1;
  uint64_t orbit_cap = default_orbit_cap();
  bool orbit_weak = false;
  orbit_cmd->add_option("file", orbit_file)->required();
  orbit_cmd->add_option("--mod", orbit_mod, "modulus")->required()
      ->check(CLI::Range(2, 255));
  orbit_cmd->add_option("--cap", orbit_cap, "orbit state cap");
  orbit_cmd->add_option("--jobs", orbit_jobs, "worker threads")
      ->check(CLI::Range(1, 64));
  orbit_cmd->add_flag("--weak", orbit_weak,
                      "minimize over global conjugation (moduli <= 7)");

  // skeleton
  auto* skel_cmd = app.add_subcommand("skeleton", "skeleton utilities");
  skel_cmd->require_subcommand(1);
  auto* skel_iso = skel_cmd->add_subcommand("iso", "isomorphism test");
  std::string si1, si2;
  skel_iso->add_option("file1", si1)->required();
  skel_iso->add_option("file2", si2)->required();
  auto* skel_aut = skel_cmd->add_subcommand("aut", "automorphisms and invariants");
  std::string sa;
  skel_aut->add_option("file", sa)->required();
  auto* skel_prod = skel_cmd->add_subcommand("product", "pointed fiber product");
  std::string sp1, sp2;
  skel_prod->add_option("file1", sp1)->required();
  skel_prod->add_option("file2", sp2)->required();

  // lattice
  auto* lattice_cmd = app.add_subcommand(
      "lattice", "transcendental lattice of a factorization file");
  std::string lat_file, lat_colors;
  lattice_cmd->add_option("file", lat_file)->required();
  lattice_cmd->add_option("--coloring", lat_colors,
                          "signs, one +/- per gamma entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    if (*counts_cmd)
      rc = cmd_counts(max_k, counts_json);
    else if (*trees_cmd)
      rc = cmd_trees(trees_k, trees_out);
    else if (*tree_cmd)
      rc = cmd_tree(tree_lit, tree_shift, tree_group, tree_what, tree_dot);
    else if (*compare_cmd)
      rc = cmd_compare(cmp1, cmp2, cmp_mod, cmp_cap, cmp_jobs);
    else if (*fold_cmd)
      rc = cmd_fold(fold_words, fold_file, fold_dot);
    else if (*orbit_cmd)
      rc = cmd_orbit(orbit_file, orbit_mod, orbit_cap, orbit_jobs, orbit_weak);
    else if (*skel_iso)
      rc = cmd_skeleton_iso(si1, si2);
    else if (*skel_aut)
      rc = cmd_skeleton_aut(sa);
    else if (*skel_prod)
      rc = cmd_skeleton_product(sp1, sp2);
    else if (*lattice_cmd)
      rc = cmd_lattice(lat_file, lat_colors);
  } catch (const mb_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::cerr << "# elapsed_ms=" << ms << "\n";
  return rc;
}
