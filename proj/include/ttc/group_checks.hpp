#pragma once

// Stabilizer machinery over the enumerated group, and the group-theoretic
// reconstructions of the graph structure: the A4 edge rule, the action of a
// decomposition stabilizer on the seven clique labels, the splitting of the
// 30 type-b21 neighbours by conjugacy, the conjugate-subgroup construction
// of the graphs, and the orbit classification of conics under one conic
// stabilizer.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ttc/pgu.hpp"

namespace ttc::pgu {

struct Stabilizers {
  int q1 = -1;  // index of the conic x^2+y^2+z^2 = 0
  std::vector<int32_t> conic_transversal;            // t with t(Q1) = Q, per conic
  std::vector<std::vector<int32_t>> stab_conic;      // sorted element indices
  std::vector<int32_t> decomp_transversal;           // per decomposition
  std::vector<std::vector<int32_t>> stab_decomp;     // sorted element indices
};

inline int canonical_conic_index(const CurveData& cd) {
  Conic q1 = pp::normalize_conic(
      cd.F, {cd.F.one(), cd.F.one(), cd.F.one(), cd.F.zero(), cd.F.zero(), cd.F.zero()});
  auto it = cd.conic_index.find(q1);
  check(it != cd.conic_index.end(), Errc::Falsified, "x^2+y^2+z^2 is not in the conic list");
  return it->second;
}

// All elements fixing the given point.
inline std::vector<int32_t> stabilizer_of_point(const GroupData& gd, int point) {
  std::vector<int32_t> out;
  for (size_t e = 0; e < gd.n; ++e)
    if (gd.perm(static_cast<int>(e))[point] == point) out.push_back(static_cast<int32_t>(e));
  return out;
}

// Direct filter: all elements whose point action fixes the conic's trace.
inline std::vector<int32_t> stabilizer_of_conic_direct(const GroupData& gd, const CurveData& cd,
                                                       int conic) {
  const Bitset& trace = cd.conics[conic].trace_bits;
  const auto& tr = cd.conics[conic].trace;
  std::vector<int32_t> out;
  for (size_t e = 0; e < gd.n; ++e) {
    const uint8_t* pm = gd.perm(static_cast<int>(e));
    bool fixes = true;
    for (uint16_t t : tr) fixes = fixes && trace.test(pm[t]);
    if (fixes) out.push_back(static_cast<int32_t>(e));
  }
  return out;
}

// Conic stabilizers: the anchor x^2+y^2+z^2 by direct filter, the rest by
// transversal conjugation.
inline Stabilizers build_conic_stabilizers(const GroupData& gd, const CurveData& cd,
                                           int threads) {
  Stabilizers st;
  st.q1 = canonical_conic_index(cd);
  std::vector<int32_t> stab_q1 = stabilizer_of_conic_direct(gd, cd, st.q1);

  st.conic_transversal.assign(cd.nc(), -1);
  int found = 0;
  for (size_t e = 0; e < gd.n && found < cd.nc(); ++e) {
    int img = gd.map_conic(static_cast<int>(e), st.q1);
    if (st.conic_transversal[img] < 0) {
      st.conic_transversal[img] = static_cast<int32_t>(e);
      ++found;
    }
  }
  check(found == cd.nc(), Errc::Falsified, "the group is not transitive on the conics");

  st.stab_conic.assign(cd.nc(), {});
  pipeline::parallel_rows(cd.nc(), threads, [&](int c) {
    int32_t t = st.conic_transversal[c];
    std::vector<int32_t>& out = st.stab_conic[c];
    out.reserve(stab_q1.size());
    for (int32_t h : stab_q1) out.push_back(gd.conj_idx(t, h));
    std::sort(out.begin(), out.end());
  });
  return st;
}

// Adds decomposition stabilizers, anchored at the component of Q1.
inline void add_decomposition_stabilizers(const GroupData& gd, const CurveData& cd,
                                          const Pipeline& p, int threads, Stabilizers* st) {
  int d1 = p.conic_to_D[st->q1];
  Bitset dset(cd.nc());
  for (int c : p.D_list[d1]) dset.set(c);
  int c0 = p.D_list[d1][0];
  std::vector<int32_t> stab_d1;
  for (size_t e = 0; e < gd.n; ++e) {
    if (!dset.test(gd.map_conic(static_cast<int>(e), c0))) continue;
    bool fixes = true;
    for (int c : p.D_list[d1])
      if (!dset.test(gd.map_conic(static_cast<int>(e), c))) { fixes = false; break; }
    if (fixes) stab_d1.push_back(static_cast<int32_t>(e));
  }

  int nd = static_cast<int>(p.D_list.size());
  st->decomp_transversal.assign(nd, -1);
  for (int d = 0; d < nd; ++d)
    // t maps Q1 into D, hence the component of Q1 onto D
    st->decomp_transversal[d] =
        d == d1 ? gd.identity : st->conic_transversal[p.D_list[d][0]];
  st->stab_decomp.assign(nd, {});
  pipeline::parallel_rows(nd, threads, [&](int d) {
    int32_t t = st->decomp_transversal[d];
    std::vector<int32_t>& out = st->stab_decomp[d];
    out.reserve(stab_d1.size());
    for (int32_t h : stab_d1) out.push_back(gd.conj_idx(t, h));
    std::sort(out.begin(), out.end());
  });
}

inline Stabilizers build_stabilizers(const GroupData& gd, const CurveData& cd,
                                     const Pipeline& p, int threads) {
  Stabilizers st = build_conic_stabilizers(gd, cd, threads);
  add_decomposition_stabilizers(gd, cd, p, threads, &st);
  return st;
}

// Adjacency in G restated group-theoretically: the pairwise stabilizer has
// order 12 with the A4 order histogram (three involutions, eight 3-cycles).
inline bool edge_rule_S5(const GroupData& gd, const Stabilizers& st, int c1, int c2) {
  check(c1 != c2, Errc::InvalidInput, "edge rule needs distinct conics");
  auto inter = intersect_sorted(st.stab_conic[c1], st.stab_conic[c2]);
  if (inter.size() != 12) return false;
  return small_group_name(gd, inter) == "A4";
}

// ---- the action on the seven clique labels of one decomposition ----

using Perm7 = std::array<uint8_t, 7>;

inline uint32_t pack7(const Perm7& s) {
  uint32_t k = 0;
  for (int i = 6; i >= 0; --i) k = (k << 3) | s[i];
  return k;
}
inline Perm7 unpack7(uint32_t k) {
  Perm7 s;
  for (int i = 0; i < 7; ++i) {
    s[i] = k & 7;
    k >>= 3;
  }
  return s;
}
inline Perm7 compose7(const Perm7& a, const Perm7& b) {
  Perm7 r;
  for (int i = 0; i < 7; ++i) r[i] = a[b[i]];
  return r;
}
inline Perm7 inverse7(const Perm7& a) {
  Perm7 r;
  for (int i = 0; i < 7; ++i) r[a[i]] = static_cast<uint8_t>(i);
  return r;
}
inline bool even7(const Perm7& s) {
  int inv = 0;
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) inv += s[i] > s[j];
  return inv % 2 == 0;
}

struct A7Ident {
  int d = -1;
  std::vector<Perm7> sigma;  // aligned with the sorted stabilizer list
  bool injective = false;
  bool all_even = false;
  size_t image_size = 0;
};

// Each stabilizer element permutes the 21 conics of D preserving the
// 6-clique structure, inducing a permutation of the seven clique labels.
inline A7Ident a7_identification(const GroupData& gd, const Pipeline& p,
                                 const Stabilizers& st, int d) {
  A7Ident out;
  out.d = d;
  const auto& comp = p.D_list[d];
  const auto& cert = p.t7[d];
  check(cert.ok && comp.size() == 21, Errc::InvalidInput,
        "decomposition without a T(7) certificate");
  std::unordered_map<int, int> local;
  for (size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<int>(i);
  std::map<std::vector<int>, int> clique_ids;
  for (int ci = 0; ci < 7; ++ci) {
    std::vector<int> k = cert.cliques[ci];
    std::sort(k.begin(), k.end());
    clique_ids[k] = ci;
  }
  std::set<uint32_t> image;
  for (int32_t e : st.stab_decomp[d]) {
    std::array<int, 21> pi;
    for (size_t i = 0; i < comp.size(); ++i) {
      auto it = local.find(gd.map_conic(e, comp[i]));
      check(it != local.end(), Errc::Falsified, "stabilizer element leaves the decomposition");
      pi[i] = it->second;
    }
    Perm7 sigma;
    for (int ci = 0; ci < 7; ++ci) {
      std::vector<int> img;
      for (int v : cert.cliques[ci]) img.push_back(pi[v]);
      std::sort(img.begin(), img.end());
      auto it = clique_ids.find(img);
      check(it != clique_ids.end(), Errc::Falsified,
            "stabilizer action is not label-compatible");
      sigma[ci] = static_cast<uint8_t>(it->second);
    }
    out.sigma.push_back(sigma);
    image.insert(pack7(sigma));
  }
  out.image_size = image.size();
  out.injective = image.size() == st.stab_decomp[d].size();
  out.all_even = true;
  for (const Perm7& s : out.sigma) out.all_even = out.all_even && even7(s);
  return out;
}

// Type of a pair of decompositions from the order of the intersection of
// their stabilizers alone.
inline TypeBig classify_T_by_group(const GroupData& gd, const Stabilizers& st, int d, int d2) {
  check(d != d2, Errc::InvalidInput, "classification needs distinct decompositions");
  size_t order = intersect_sorted(st.stab_decomp[d], st.stab_decomp[d2]).size();
  switch (order) {
    case 360: return TypeBig::a15g6;
    case 168: return TypeBig::b21;
    case 72: return TypeBig::a3g18;
    case 60: return TypeBig::g21;
    default:
      fail(Errc::Falsified, "unexpected stabilizer intersection order " + std::to_string(order));
  }
}

struct SigmaBSplit {
  std::vector<int> class_a, class_b;  // decomposition indices, 15 + 15
  bool matches_components = false;
  bool classes_fuse_under_odd = false;
};

// Splits the 30 type-b21 neighbours of D by the conjugacy class (inside the
// image alternating group) of the image of stab(D) . stab(D'), and compares
// with the split induced by the components of H.
inline SigmaBSplit sigma_b_split(const GroupData& gd, const Pipeline& p, const Stabilizers& st,
                                 const A7Ident& ident, int d) {
  check(ident.d == d, Errc::InvalidInput, "identification does not belong to D");
  const auto& stab = st.stab_decomp[d];
  auto sigma_of = [&](int32_t e) {
    auto it = std::lower_bound(stab.begin(), stab.end(), e);
    check(it != stab.end() && *it == e, Errc::Falsified, "element outside stab(D)");
    return ident.sigma[it - stab.begin()];
  };

  std::vector<int> nd;
  for (size_t e = 0; e < p.D_list.size(); ++e)
    if (static_cast<int>(e) != d && p.T(d, static_cast<int>(e)) == TypeBig::b21)
      nd.push_back(static_cast<int>(e));
  check(nd.size() == 30, Errc::Falsified, "|N_D| is not 30");

  auto subgroup_image = [&](int d2) {
    std::vector<uint32_t> img;
    for (int32_t e : intersect_sorted(stab, st.stab_decomp[d2])) img.push_back(pack7(sigma_of(e)));
    std::sort(img.begin(), img.end());
    check(img.size() == 168, Errc::Falsified, "b21 stabilizer intersection is not order 168");
    return img;
  };

  auto conjugate_set = [&](const std::vector<uint32_t>& sub, const Perm7& g) {
    Perm7 gi = inverse7(g);
    std::vector<uint32_t> out;
    out.reserve(sub.size());
    for (uint32_t code : sub) out.push_back(pack7(compose7(g, compose7(unpack7(code), gi))));
    std::sort(out.begin(), out.end());
    return out;
  };

  std::vector<std::vector<uint32_t>> subs;
  for (int e : nd) subs.push_back(subgroup_image(e));

  // the full conjugacy class of the first subgroup inside the image of stab(D)
  std::set<std::vector<uint32_t>> class_of_first;
  for (const Perm7& g : ident.sigma) class_of_first.insert(conjugate_set(subs[0], g));

  SigmaBSplit out;
  for (size_t i = 0; i < nd.size(); ++i)
    (class_of_first.count(subs[i]) ? out.class_a : out.class_b).push_back(nd[i]);
  check(out.class_a.size() == 15 && out.class_b.size() == 15, Errc::Falsified,
        "conjugacy split is not 15+15");

  std::set<int> comp_a, comp_b;
  for (int e : out.class_a) comp_a.insert(p.D_to_C[e]);
  for (int e : out.class_b) comp_b.insert(p.D_to_C[e]);
  out.matches_components =
      comp_a.size() == 1 && comp_b.size() == 1 && *comp_a.begin() != *comp_b.begin();

  // conjugating by any odd label permutation merges the classes
  Perm7 odd{1, 0, 2, 3, 4, 5, 6};
  std::vector<uint32_t> fused = conjugate_set(subs[0], odd);
  bool in_first = class_of_first.count(fused) > 0;
  const std::vector<uint32_t>* other = nullptr;
  for (size_t i = 0; i < nd.size(); ++i)
    if (!class_of_first.count(subs[i])) { other = &subs[i]; break; }
  std::set<std::vector<uint32_t>> class_b_set;
  if (other)
    for (const Perm7& g : ident.sigma) class_b_set.insert(conjugate_set(*other, g));
  out.classes_fuse_under_odd = !in_first && other && class_b_set.count(fused) > 0;
  return out;
}

// ---- the construction with no geometry: conjugates of one subgroup ----

struct PurelyGroupResult {
  uint64_t gamma_order = 0;
  size_t num_conjugates = 0;
  std::set<uint64_t> intersection_orders;
  std::vector<SrgCertificate> e360_components;      // expect three (50,7,0,1)
  std::vector<SrgCertificate> pair_restrictions;    // expect three (100,22,0,6)
  bool delta_is_orthogonal_stabilizer = false;
  bool delta_conjugate_generates_gamma_conjugate = false;
};

// The five published generator matrices.
inline std::vector<Mat3> theorem_generators(const FieldCtx& F) {
  Fq2 w = F.make(2, 3);
  Fq2 wi = F.inv(w);
  Fq2 o = F.zero(), i1 = F.one();
  Fq2 c2 = F.make(2), c3 = F.make(3), c4 = F.make(4);
  return {
      Mat3{i1, o, o, o, w, o, o, o, wi},
      Mat3{i1, c3, c2, c3, i1, c2, c2, c2, i1},
      Mat3{o, i1, o, i1, o, o, o, o, c4},
      Mat3{i1, o, o, o, o, c4, o, c4, o},
      Mat3{o, i1, o, i1, o, o, o, o, i1},
  };
}

// A small deterministic generating set of the whole group.
inline std::vector<int> full_group_generators(const GroupData& gd) {
  StabChain chain(gd.np);
  std::vector<int> gens;
  for (size_t e = 0; e < gd.n && chain.order() < gd.n; ++e) {
    Perm p(gd.perm(static_cast<int>(e)), gd.perm(static_cast<int>(e)) + gd.np);
    if (chain.contains(p)) continue;
    chain.add(p);
    gens.push_back(static_cast<int>(e));
  }
  check(chain.order() == gd.n, Errc::Falsified, "failed to generate the full group");
  return gens;
}

inline PurelyGroupResult theorem61_pipeline(const GroupData& gd, const CurveData& cd,
                                            const Stabilizers& st) {
  const FieldCtx& F = cd.F;
  PurelyGroupResult out;

  std::vector<int> gens;
  for (const Mat3& m : theorem_generators(F)) {
    check(unitary_mod_scalar(F, m), Errc::Falsified, "published generator is not unitary");
    auto it = gd.by_mat_key.find(mat_key(F, canonical_matrix(F, m)));
    check(it != gd.by_mat_key.end(), Errc::Falsified, "published generator not in the group");
    gens.push_back(it->second);
  }
  std::vector<int32_t> gamma = subgroup_closure(gd, gens);
  out.gamma_order = gamma.size();
  check(generated_order(gd, gens) == out.gamma_order, Errc::Falsified,
        "closure and stabilizer-chain orders disagree");

  // conjugacy orbit of Gamma
  auto conjugate_subgroup = [&](const std::vector<int32_t>& sub, int t) {
    std::vector<int32_t> out2;
    out2.reserve(sub.size());
    for (int32_t h : sub) out2.push_back(gd.conj_idx(t, h));
    std::sort(out2.begin(), out2.end());
    return out2;
  };
  std::vector<int> group_gens = full_group_generators(gd);
  std::map<std::vector<int32_t>, int> seen;
  std::vector<std::vector<int32_t>> orbit{gamma};
  seen.emplace(gamma, 0);
  for (size_t i = 0; i < orbit.size(); ++i)
    for (int t : group_gens) {
      auto s = conjugate_subgroup(orbit[i], t);
      if (seen.emplace(s, static_cast<int>(orbit.size())).second) orbit.push_back(std::move(s));
    }
  out.num_conjugates = orbit.size();

  int nv = static_cast<int>(orbit.size());
  Graph e360(nv), e360_168(nv);
  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j) {
      uint64_t o = intersect_sorted(orbit[i], orbit[j]).size();
      out.intersection_orders.insert(o);
      if (o == 360) e360.add_edge(i, j);
      if (o == 360 || o == 168) e360_168.add_edge(i, j);
    }
  auto comps = graphs::components(e360);
  for (const auto& comp : comps) {
    auto s = graphs::srg_check(e360.induced(comp));
    check(s.cert.has_value(), Errc::Falsified, "E360 component is not strongly regular");
    out.e360_components.push_back(*s.cert);
  }
  for (size_t i = 0; i < comps.size(); ++i)
    for (size_t j = i + 1; j < comps.size(); ++j) {
      std::vector<int> verts = comps[i];
      verts.insert(verts.end(), comps[j].begin(), comps[j].end());
      std::sort(verts.begin(), verts.end());
      auto s = graphs::srg_check(e360_168.induced(verts));
      check(s.cert.has_value(), Errc::Falsified, "E360+E168 restriction is not strongly regular");
      out.pair_restrictions.push_back(*s.cert);
    }

  // Delta = stab(Q1) coincides with the unitary matrices M with tMM diagonal
  std::vector<int32_t> orthogonal;
  for (size_t e = 0; e < gd.n; ++e) {
    Mat3 m = mat_from_key(F, gd.mat_keys[e]);
    Mat3 mt;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mt[3 * i + j] = m[3 * j + i];
    Mat3 g = mat_mul(F, mt, m);
    bool diag = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j && !FieldCtx::is_zero(g[3 * i + j])) diag = false;
    if (diag) orthogonal.push_back(static_cast<int32_t>(e));
  }
  const auto& delta = st.stab_conic[st.q1];
  out.delta_is_orthogonal_stabilizer = orthogonal == delta;

  // any gamma with Delta . gamma^-1 Delta gamma of A4 type regenerates a
  // conjugate of Gamma together with Delta
  for (size_t e = 0; e < gd.n; ++e) {
    int32_t gi = gd.inv_idx[e];
    std::vector<int32_t> conj;
    conj.reserve(delta.size());
    for (int32_t h : delta) conj.push_back(gd.conj_idx(gi, h));
    std::sort(conj.begin(), conj.end());
    auto inter = intersect_sorted(delta, conj);
    if (inter.size() != 12 || small_group_name(gd, inter) != "A4") continue;
    std::vector<int> both(delta.begin(), delta.end());
    both.insert(both.end(), conj.begin(), conj.end());
    std::vector<int32_t> closure = subgroup_closure(gd, both);
    out.delta_conjugate_generates_gamma_conjugate =
        closure.size() == out.gamma_order && seen.count(closure) > 0;
    break;
  }
  return out;
}

// ---- orbits of the conic stabilizer on the other conics ----

struct OrbitRow {
  int a = 0, s = 0;
  std::array<int, 4> n{};
  size_t stab_order = 0;
  std::string stab_name;
  long long count = 0;   // conics in this class
  long long orbits = 0;  // orbits of the conic stabilizer in this class
};

struct OrbitReport {
  long long total_orbits = 0;  // including the singleton {Q1}
  std::vector<OrbitRow> rows;  // excluding the self row
};

inline OrbitReport table_orbit_report(const GroupData& gd, const CurveData& cd,
                                      const Pipeline& p, const Stabilizers& st) {
  const auto& delta = st.stab_conic[st.q1];
  int nc = cd.nc();
  std::vector<int> orbit_id(nc, -1);
  long long norbits = 0;
  for (int c = 0; c < nc; ++c) {
    if (orbit_id[c] >= 0) continue;
    int id = static_cast<int>(norbits++);
    std::vector<int> stack{c};
    orbit_id[c] = id;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (int32_t e : delta) {
        int img = gd.map_conic(e, cur);
        if (orbit_id[img] < 0) {
          orbit_id[img] = id;
          stack.push_back(img);
        }
      }
    }
  }
  OrbitReport out;
  out.total_orbits = norbits;

  std::vector<std::vector<int>> orbits(norbits);
  for (int c = 0; c < nc; ++c) orbits[orbit_id[c]].push_back(c);

  std::map<std::tuple<int, int, std::array<int, 4>, size_t>, OrbitRow> rows;
  for (const auto& orb : orbits) {
    int rep = orb[0];
    if (rep == st.q1) continue;
    auto inter = intersect_sorted(delta, st.stab_conic[rep]);
    check(inter.size() * orb.size() == delta.size(), Errc::Falsified,
          "orbit-stabilizer identity failed inside the conic stabilizer");
    auto nu = pp::intersection_pattern(cd.F, cd.conics[st.q1].conic, cd.conics[rep].conic);
    auto key = std::make_tuple(static_cast<int>(p.m0(st.q1, rep)),
                               static_cast<int>(p.m1(st.q1, rep)), nu, inter.size());
    OrbitRow& row = rows[key];
    row.a = std::get<0>(key);
    row.s = std::get<1>(key);
    row.n = nu;
    row.stab_order = inter.size();
    row.stab_name = small_group_name(gd, inter);
    row.count += static_cast<long long>(orb.size());
    row.orbits += 1;
  }
  for (auto& [k, row] : rows) out.rows.push_back(row);
  return out;
}

}  // namespace ttc::pgu
