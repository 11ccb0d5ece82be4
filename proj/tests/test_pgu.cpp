#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "pinned_data.hpp"
#include "ttc/group_checks.hpp"

using namespace ttc;

namespace {

const CurveData& curve3() {
  static CurveData cd = hermitian::build_curve(3);
  return cd;
}
const GroupData& group3() {
  static GroupData gd = pgu::build_group(curve3(), 2);
  return gd;
}

const CurveData& curve5() {
  static CurveData cd = hermitian::build_curve(5);
  return cd;
}
const Pipeline& pipe5() {
  static Pipeline p = pipeline::build(curve5(), 2);
  return p;
}
const GroupData& group5() {
  static GroupData gd = pgu::build_group(curve5(), 2);
  return gd;
}
const pgu::Stabilizers& stabs5() {
  static pgu::Stabilizers st = pgu::build_stabilizers(group5(), curve5(), pipe5(), 2);
  return st;
}

}  // namespace

TEST_CASE("group order for q = 3 and q = 5") {
  CHECK(group3().n == 6048);
  CHECK(group5().n == 378000);
}

TEST_CASE("identity, inverses, and closure on samples") {
  const GroupData& gd = group3();
  REQUIRE(gd.identity >= 0);
  std::mt19937 rng(8);
  for (int i = 0; i < 200; ++i) {
    int a = static_cast<int>(rng() % gd.n), b = static_cast<int>(rng() % gd.n);
    int ab = gd.compose_idx(a, b);
    CHECK(gd.compose_idx(ab, gd.inv_idx[ab]) == gd.identity);
    CHECK(gd.compose_idx(gd.inv_idx[a], a) == gd.identity);
  }
}

TEST_CASE("matrices stay unitary modulo scalar under products") {
  const GroupData& gd = group5();
  const FieldCtx& F = curve5().F;
  std::mt19937 rng(14);
  for (int i = 0; i < 10000; ++i) {
    Mat3 a = pgu::mat_from_key(F, gd.mat_keys[rng() % gd.n]);
    Mat3 b = pgu::mat_from_key(F, gd.mat_keys[rng() % gd.n]);
    if (i < 100) {
      CHECK(pgu::unitary_mod_scalar(F, pgu::mat_mul(F, a, b)));
    } else if (!pgu::unitary_mod_scalar(F, pgu::mat_mul(F, a, b))) {
      FAIL("product lost unitarity");
    }
  }
}

TEST_CASE("permutation action is consistent with matrix products") {
  const GroupData& gd = group3();
  const CurveData& cd = curve3();
  const FieldCtx& F = cd.F;
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    int a = static_cast<int>(rng() % gd.n), b = static_cast<int>(rng() % gd.n);
    Mat3 prod = pgu::mat_mul(F, pgu::mat_from_key(F, gd.mat_keys[a]),
                             pgu::mat_from_key(F, gd.mat_keys[b]));
    uint64_t key = pgu::mat_key(F, pgu::canonical_matrix(F, prod));
    CHECK(gd.by_mat_key.at(key) == gd.compose_idx(a, b));
  }
}

TEST_CASE("orbit of the canonical conic is the whole conic list (q=3)") {
  const GroupData& gd = group3();
  const CurveData& cd = curve3();
  auto st = pgu::build_conic_stabilizers(gd, cd, 2);
  // transversal covered every conic, which is exactly transitivity
  CHECK(st.conic_transversal.size() == 252);
  CHECK(st.stab_conic[st.q1].size() == 24);  // PGL_2(F_3)
  CHECK(st.stab_conic[100].size() == 24);
  CHECK(6048 / 252 == 24);
}

TEST_CASE("stabilizer orders for q=5: point 3000, conic 120, decomposition 2520") {
  const GroupData& gd = group5();
  CHECK(pgu::stabilizer_of_point(gd, 0).size() == 3000);
  const pgu::Stabilizers& st = stabs5();
  for (int c : {st.q1, 0, 1234}) CHECK(st.stab_conic[c].size() == 120);
  for (int d : {0, 1, 77}) CHECK(st.stab_decomp[d].size() == 2520);
  CHECK(pgu::small_group_name(gd, st.stab_conic[st.q1]) == "S5");
}

TEST_CASE("conjugated stabilizers agree with direct filters") {
  const GroupData& gd = group5();
  const CurveData& cd = curve5();
  const pgu::Stabilizers& st = stabs5();
  for (int c : {25, 3000}) CHECK(pgu::stabilizer_of_conic_direct(gd, cd, c) == st.stab_conic[c]);
}

TEST_CASE("the stabilizer-chain oracle matches closure sizes") {
  const GroupData& gd = group3();
  CHECK(pgu::generated_order(gd, {gd.identity}) == 1);
  std::mt19937 rng(77);
  for (int iter = 0; iter < 6; ++iter) {
    std::vector<int> gens;
    for (int k = 0; k < 2; ++k) gens.push_back(static_cast<int>(rng() % gd.n));
    CHECK(pgu::generated_order(gd, gens) == pgu::subgroup_closure(gd, gens).size());
  }
}

TEST_CASE("edge rule: A4 pairwise stabilizer characterizes adjacency (samples)") {
  const GroupData& gd = group5();
  const Pipeline& p = pipe5();
  const pgu::Stabilizers& st = stabs5();
  std::mt19937 rng(100);
  int agreements = 0;
  // all ten neighbours of the canonical conic plus random non-neighbours
  for (int c : p.G.row(st.q1).to_list()) {
    CHECK(pgu::edge_rule_S5(gd, st, st.q1, c));
    ++agreements;
  }
  while (agreements < 60) {
    int c = static_cast<int>(rng() % p.nc);
    if (c == st.q1) continue;
    CHECK(pgu::edge_rule_S5(gd, st, st.q1, c) == p.G.adjacent(st.q1, c));
    ++agreements;
  }
}

TEST_CASE("generated order separates components (sampled)") {
  const GroupData& gd = group5();
  const Pipeline& p = pipe5();
  const pgu::Stabilizers& st = stabs5();
  int q1 = st.q1;
  int same_comp = -1, other_comp = -1;
  for (int c : p.D_list[p.conic_to_D[q1]])
    if (c != q1) { same_comp = c; break; }
  for (int d = 0; d < 150 && other_comp < 0; ++d)
    if (d != p.conic_to_D[q1]) other_comp = p.D_list[d][0];
  auto joint = [&](int c2) {
    std::vector<int> gens(st.stab_conic[q1].begin(), st.stab_conic[q1].end());
    gens.insert(gens.end(), st.stab_conic[c2].begin(), st.stab_conic[c2].end());
    return pgu::subgroup_closure(gd, gens).size();
  };
  CHECK(joint(same_comp) == 2520);
  CHECK(joint(other_comp) > 2520);
}

TEST_CASE("the action on clique labels identifies the stabilizer with A7") {
  const GroupData& gd = group5();
  const Pipeline& p = pipe5();
  const pgu::Stabilizers& st = stabs5();
  int d = p.conic_to_D[st.q1];
  auto ident = pgu::a7_identification(gd, p, st, d);
  CHECK(ident.injective);
  CHECK(ident.all_even);
  CHECK(ident.image_size == 2520);
}

TEST_CASE("published generators produce an order-2520 subgroup with even involutions") {
  const GroupData& gd = group5();
  const CurveData& cd = curve5();
  const Pipeline& p = pipe5();
  const pgu::Stabilizers& st = stabs5();
  std::vector<int> gens;
  for (const Mat3& m : pgu::theorem_generators(cd.F)) {
    auto it = gd.by_mat_key.find(pgu::mat_key(cd.F, pgu::canonical_matrix(cd.F, m)));
    REQUIRE(it != gd.by_mat_key.end());
    gens.push_back(it->second);
  }
  CHECK(pgu::generated_order(gd, gens) == 2520);
  // they stabilize the decomposition of the canonical conic and act as even
  // involutions on its clique labels
  int d = p.conic_to_D[st.q1];
  auto ident = pgu::a7_identification(gd, p, st, d);
  const auto& stab = st.stab_decomp[d];
  for (int g : gens) {
    auto it = std::lower_bound(stab.begin(), stab.end(), g);
    REQUIRE((it != stab.end() && *it == g));
    pgu::Perm7 s = ident.sigma[it - stab.begin()];
    CHECK(pgu::even7(s));
    CHECK(gd.elem_order[g] == 2);
  }
}

TEST_CASE("type classification by stabilizer intersection order (samples)") {
  const GroupData& gd = group5();
  const Pipeline& p = pipe5();
  const pgu::Stabilizers& st = stabs5();
  std::mt19937 rng(200);
  for (int iter = 0; iter < 40; ++iter) {
    int d = static_cast<int>(rng() % 150), e = static_cast<int>(rng() % 150);
    if (d == e) continue;
    CHECK(pgu::classify_T_by_group(gd, st, d, e) == p.T(d, e));
  }
}

TEST_CASE("sigma-b conjugacy split matches the component split") {
  const GroupData& gd = group5();
  const Pipeline& p = pipe5();
  const pgu::Stabilizers& st = stabs5();
  int d = p.conic_to_D[st.q1];
  auto ident = pgu::a7_identification(gd, p, st, d);
  auto split = pgu::sigma_b_split(gd, p, st, ident, d);
  CHECK(split.class_a.size() == 15);
  CHECK(split.class_b.size() == 15);
  CHECK(split.matches_components);
  CHECK(split.classes_fuse_under_odd);
}

TEST_CASE("actions are functorial and faithful on samples") {
  const GroupData& gd = group5();
  const CurveData& cd = curve5();
  std::mt19937 rng(300);
  for (int iter = 0; iter < 50; ++iter) {
    int a = static_cast<int>(rng() % gd.n), b = static_cast<int>(rng() % gd.n);
    int c = static_cast<int>(rng() % cd.nc());
    CHECK(gd.map_conic(gd.compose_idx(a, b), c) == gd.map_conic(a, gd.map_conic(b, c)));
  }
  // identity action
  for (int c : {0, 500, 3149}) CHECK(gd.map_conic(gd.identity, c) == c);
  // a few non-identity elements move some conic
  for (int e : {1, 2, 100000}) {
    bool moves = false;
    for (int c = 0; c < cd.nc() && !moves; ++c) moves = gd.map_conic(e, c) != c;
    CHECK((e == gd.identity || moves));
  }
}
