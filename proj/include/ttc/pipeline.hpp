#pragma once

#include <array>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "ttc/graphs.hpp"
#include "ttc/hermitian.hpp"

namespace ttc {

enum class TypeLittle : uint8_t { alpha, beta, gamma };
enum class TypeBig : uint8_t { b21, g21, a15g6, a3g18 };

inline const char* to_string(TypeLittle t) {
  switch (t) {
    case TypeLittle::alpha: return "a";
    case TypeLittle::beta: return "b";
    case TypeLittle::gamma: return "g";
  }
  return "?";
}
inline const char* to_string(TypeBig t) {
  switch (t) {
    case TypeBig::b21: return "b21";
    case TypeBig::g21: return "g21";
    case TypeBig::a15g6: return "a15g6";
    case TypeBig::a3g18: return "a3g18";
  }
  return "?";
}

// The construction pipeline for q = 5: pairwise matrices over the 3150
// conics, the graph G and its 150 decompositions, the type matrix, and the
// derived graphs. All downstream graphs are pure functions of (M0, M1, M2).
struct Pipeline {
  int nc = 0;
  std::vector<uint8_t> M0;  // |Q_i . Q_j . curve|
  std::vector<uint8_t> M1;  // |S(Q_i) . S(Q_j)|
  std::vector<uint8_t> M2;  // transversality indicator

  Graph G;
  std::vector<std::vector<int>> D_list;  // components of G, 21 conics each
  std::vector<int> conic_to_D;
  std::vector<graphs::T7Outcome> t7;

  std::vector<uint8_t> Tmat;  // TypeBig codes; 255 on the diagonal
  Graph H;
  std::vector<std::vector<int>> C;  // the three components of H (D indices)
  std::vector<int> D_to_C;
  Graph Hprime;

  std::vector<std::pair<int, int>> E1;  // edges of H|C1, lexicographic
  Graph haemers;                        // (E1, ~)
  Graph mclaughlin;                     // vertices E1 then C[1] then C[2]

  uint8_t m0(int i, int j) const { return M0[static_cast<size_t>(i) * nc + j]; }
  uint8_t m1(int i, int j) const { return M1[static_cast<size_t>(i) * nc + j]; }
  bool m2(int i, int j) const { return M2[static_cast<size_t>(i) * nc + j] != 0; }
  TypeBig T(int d, int d2) const {
    uint8_t v = Tmat[static_cast<size_t>(d) * D_list.size() + d2];
    check(v != 255, Errc::InvalidInput, "type of a decomposition with itself");
    return static_cast<TypeBig>(v);
  }
};

namespace pipeline {

inline void parallel_rows(int n, int threads, const std::function<void(int)>& row_fn) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (int i = 0; i < n; ++i) row_fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        row_fn(i);
      }
    });
  for (auto& th : pool) th.join();
}

// Nonvanishing of the discriminant of det(sA + tB), the transversality test
// used for the bulk matrix fill; pp::transverse is the reference route.
inline bool pencil_transverse(const FieldCtx& F, const std::array<Fq2, 9>& A,
                              const std::array<Fq2, 9>& B) {
  std::array<Fq2, 4> c{};  // coefficients of s^(3-k) t^k
  static constexpr int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                     {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  for (int p = 0; p < 6; ++p) {
    const int j0 = perm[p][0], j1 = perm[p][1], j2 = perm[p][2];
    Fq2 a0 = A[j0], b0 = B[j0];
    Fq2 a1 = A[3 + j1], b1 = B[3 + j1];
    Fq2 a2 = A[6 + j2], b2 = B[6 + j2];
    std::array<Fq2, 4> t{};
    // (a0 s + b0 t)(a1 s + b1 t)(a2 s + b2 t)
    Fq2 s01 = F.mul(a0, a1), m01 = F.add(F.mul(a0, b1), F.mul(a1, b0)), t01 = F.mul(b0, b1);
    t[0] = F.mul(s01, a2);
    t[1] = F.add(F.mul(s01, b2), F.mul(m01, a2));
    t[2] = F.add(F.mul(m01, b2), F.mul(t01, a2));
    t[3] = F.mul(t01, b2);
    for (int k = 0; k < 4; ++k) c[k] = p < 3 ? F.add(c[k], t[k]) : F.sub(c[k], t[k]);
  }
  // affine cubic a t^3 + b t^2 + c t + d has a = det(B) != 0
  Fq2 a = c[3], b = c[2], cc = c[1], d = c[0];
  Fq2 disc = F.mul(F.make(18), F.mul(F.mul(a, b), F.mul(cc, d)));
  disc = F.sub(disc, F.mul(F.make(4), F.mul(F.mul(b, b), F.mul(b, d))));
  disc = F.add(disc, F.mul(F.mul(b, b), F.mul(cc, cc)));
  disc = F.sub(disc, F.mul(F.make(4), F.mul(a, F.mul(cc, F.mul(cc, cc)))));
  disc = F.sub(disc, F.mul(F.make(27), F.mul(F.mul(a, a), F.mul(d, d))));
  return !FieldCtx::is_zero(disc);
}

inline void build_matrices(const CurveData& cd, Pipeline* p, int threads) {
  const FieldCtx& F = cd.F;
  int nc = cd.nc();
  p->nc = nc;
  p->M0.assign(static_cast<size_t>(nc) * nc, 0);
  p->M1.assign(static_cast<size_t>(nc) * nc, 0);
  p->M2.assign(static_cast<size_t>(nc) * nc, 0);
  std::vector<std::array<Fq2, 9>> mats(nc);
  for (int i = 0; i < nc; ++i) mats[i] = pp::conic_matrix(F, cd.conics[i].conic);
  parallel_rows(nc, threads, [&](int i) {
    for (int j = 0; j < nc; ++j) {
      size_t at = static_cast<size_t>(i) * nc + j;
      if (i == j) {
        p->M0[at] = static_cast<uint8_t>(F.q() + 1);
        p->M1[at] = static_cast<uint8_t>((F.q() + 1) * F.q() / 2);
        continue;
      }
      int a = cd.conics[i].trace_bits.count_and(cd.conics[j].trace_bits);
      check(a <= 2, Errc::Falsified, "two conics share more than 2 curve points");
      p->M0[at] = static_cast<uint8_t>(a);
      p->M1[at] = static_cast<uint8_t>(cd.conics[i].secant_bits.count_and(cd.conics[j].secant_bits));
      p->M2[at] = pencil_transverse(F, mats[i], mats[j]) ? 1 : 0;
    }
  });
}

// G: conics adjacent iff transverse with exactly 3 common secants.
inline void build_G(const CurveData& cd, Pipeline* p) {
  int nc = p->nc;
  p->G = Graph(nc);
  for (int i = 0; i < nc; ++i)
    for (int j = i + 1; j < nc; ++j)
      if (p->m2(i, j) && p->m1(i, j) == 3) p->G.add_edge(i, j);
  p->D_list = graphs::components(p->G);
  p->conic_to_D.assign(nc, -1);
  for (size_t d = 0; d < p->D_list.size(); ++d)
    for (int c : p->D_list[d]) p->conic_to_D[c] = static_cast<int>(d);
  p->t7.clear();
  for (const auto& comp : p->D_list) {
    Bitset uni(cd.np());
    int total = 0;
    for (int c : comp) {
      uni |= cd.conics[c].trace_bits;
      total += static_cast<int>(cd.conics[c].trace.size());
    }
    check(total == cd.np() && uni.count() == cd.np(), Errc::Falsified,
          "component traces do not partition the curve points");
    p->t7.push_back(graphs::t7_certificate(p->G.induced(comp)));
    check(p->t7.back().ok, Errc::Falsified,
          "a component of G is not T(7): " + p->t7.back().failed_stage);
  }
}

// Tally profile of |Q . Q' . curve| over the 21 conics of a component.
inline TypeLittle type_t(const Pipeline& p, int conic, int d2) {
  check(p.conic_to_D[conic] != d2, Errc::InvalidInput, "type_t needs Q outside D'");
  int n2 = 0, n1 = 0, n0 = 0;
  for (int c : p.D_list[d2]) {
    switch (p.m0(conic, c)) {
      case 2: ++n2; break;
      case 1: ++n1; break;
      case 0: ++n0; break;
      default: fail(Errc::Falsified, "impossible intersection tally");
    }
  }
  if (n2 == 3 && n1 == 0 && n0 == 18) return TypeLittle::alpha;
  if (n2 == 1 && n1 == 4 && n0 == 16) return TypeLittle::beta;
  if (n2 == 0 && n1 == 6 && n0 == 15) return TypeLittle::gamma;
  fail(Errc::TypeClassificationFailure,
       "t-profile (" + std::to_string(n2) + "," + std::to_string(n1) + "," +
           std::to_string(n0) + ") matches no case");
}

inline TypeBig type_T(const Pipeline& p, int d, int d2) {
  check(d != d2, Errc::InvalidInput, "type_T needs distinct decompositions");
  int na = 0, nb = 0, ng = 0;
  for (int c : p.D_list[d]) {
    switch (type_t(p, c, d2)) {
      case TypeLittle::alpha: ++na; break;
      case TypeLittle::beta: ++nb; break;
      case TypeLittle::gamma: ++ng; break;
    }
  }
  if (nb == 21 && na == 0 && ng == 0) return TypeBig::b21;
  if (ng == 21 && na == 0 && nb == 0) return TypeBig::g21;
  if (na == 15 && ng == 6 && nb == 0) return TypeBig::a15g6;
  if (na == 3 && ng == 18 && nb == 0) return TypeBig::a3g18;
  fail(Errc::TypeClassificationFailure,
       "T-profile (" + std::to_string(na) + "," + std::to_string(nb) + "," +
           std::to_string(ng) + ") matches no case");
}

inline void build_types(Pipeline* p) {
  size_t nd = p->D_list.size();
  p->Tmat.assign(nd * nd, 255);
  for (size_t d = 0; d < nd; ++d)
    for (size_t e = 0; e < nd; ++e)
      if (d != e) p->Tmat[d * nd + e] = static_cast<uint8_t>(type_T(*p, static_cast<int>(d),
                                                                    static_cast<int>(e)));
  static constexpr int expected[4] = {30, 42, 7, 70};
  for (size_t d = 0; d < nd; ++d) {
    int counts[4] = {0, 0, 0, 0};
    for (size_t e = 0; e < nd; ++e) {
      if (d == e) continue;
      check(p->Tmat[d * nd + e] == p->Tmat[e * nd + d], Errc::Falsified, "T is not symmetric");
      ++counts[p->Tmat[d * nd + e]];
    }
    for (int t = 0; t < 4; ++t)
      check(counts[t] == expected[t], Errc::Falsified, "T row profile is not (30,42,7,70)");
  }
}

inline void build_H(Pipeline* p) {
  int nd = static_cast<int>(p->D_list.size());
  p->H = Graph(nd);
  for (int d = 0; d < nd; ++d)
    for (int e = d + 1; e < nd; ++e)
      if (p->T(d, e) == TypeBig::a15g6) p->H.add_edge(d, e);
  p->C = graphs::components(p->H);
  check(p->C.size() == 3, Errc::Falsified, "H does not have three components");
  p->D_to_C.assign(nd, -1);
  for (size_t k = 0; k < 3; ++k)
    for (int d : p->C[k]) p->D_to_C[d] = static_cast<int>(k);
}

inline void build_Hprime(Pipeline* p) {
  int nd = static_cast<int>(p->D_list.size());
  p->Hprime = Graph(nd);
  for (int d = 0; d < nd; ++d)
    for (int e = d + 1; e < nd; ++e)
      if (p->T(d, e) == TypeBig::b21 || p->T(d, e) == TypeBig::a15g6) p->Hprime.add_edge(d, e);
}

// g_k: for D outside C_k, the set of D' in C_k with T(D, D') = b21, as
// positions within C_k.
inline std::vector<int> coclique_map(const Pipeline& p, int k, int d) {
  check(p.D_to_C[d] != k, Errc::InvalidInput, "coclique_map needs D outside C_k");
  std::vector<int> out;
  for (size_t pos = 0; pos < p.C[k].size(); ++pos)
    if (p.T(d, p.C[k][pos]) == TypeBig::b21) out.push_back(static_cast<int>(pos));
  return out;
}

// E1, the Haemers graph (E1, ~), and the McLaughlin candidate.
inline void build_mclaughlin(Pipeline* p) {
  p->E1.clear();
  for (size_t a = 0; a < p->C[0].size(); ++a)
    for (size_t b = a + 1; b < p->C[0].size(); ++b)
      if (p->H.adjacent(p->C[0][a], p->C[0][b])) p->E1.emplace_back(p->C[0][a], p->C[0][b]);
  int ne = static_cast<int>(p->E1.size());

  p->haemers = Graph(ne);
  for (int x = 0; x < ne; ++x)
    for (int y = x + 1; y < ne; ++y) {
      auto [a, b] = p->E1[x];
      auto [c, d] = p->E1[y];
      if (a == c || a == d || b == c || b == d) continue;  // must be disjoint
      // a connecting edge has one endpoint in {a,b} and one in {c,d}
      if (p->H.adjacent(a, c) || p->H.adjacent(a, d) || p->H.adjacent(b, c) ||
          p->H.adjacent(b, d))
        p->haemers.add_edge(x, y);
    }

  int n2 = static_cast<int>(p->C[1].size()), n3 = static_cast<int>(p->C[2].size());
  p->mclaughlin = Graph(ne + n2 + n3);
  auto vert = [&](int k, int pos) { return ne + (k == 2 ? n2 : 0) + pos; };
  for (int x = 0; x < ne; ++x)
    for (int y = x + 1; y < ne; ++y)
      if (p->haemers.adjacent(x, y)) p->mclaughlin.add_edge(x, y);
  for (int x = 0; x < ne; ++x) {
    auto [d1, d2] = p->E1[x];
    for (int k = 1; k <= 2; ++k)
      for (size_t pos = 0; pos < p->C[k].size(); ++pos) {
        int d = p->C[k][pos];
        if (p->T(d1, d) == TypeBig::a3g18 && p->T(d2, d) == TypeBig::a3g18)
          p->mclaughlin.add_edge(x, vert(k, static_cast<int>(pos)));
      }
  }
  for (int k1 = 1; k1 <= 2; ++k1)
    for (int k2 = k1; k2 <= 2; ++k2)
      for (size_t i = 0; i < p->C[k1].size(); ++i)
        for (size_t j = (k1 == k2 ? i + 1 : 0); j < p->C[k2].size(); ++j) {
          TypeBig t = p->T(p->C[k1][i], p->C[k2][j]);
          if (t == TypeBig::a15g6 || t == TypeBig::a3g18)
            p->mclaughlin.add_edge(vert(k1, static_cast<int>(i)),
                                   vert(k2, static_cast<int>(j)));
        }
}

inline Pipeline build(const CurveData& cd, int threads) {
  Pipeline p;
  build_matrices(cd, &p, threads);
  build_G(cd, &p);
  build_types(&p);
  build_H(&p);
  build_Hprime(&p);
  build_mclaughlin(&p);
  return p;
}

// ---- alternative characterizations of the edges ----

struct CliquePairs {
  std::vector<std::vector<int>> cliques;   // all 6-cliques of G, by component
  std::vector<std::pair<int, int>> pairs;  // indices into `cliques`
  std::vector<Bitset> unions;              // 36-point trace unions per clique
};

// Pairs {K, K'} of disjoint 6-cliques with equal trace unions.
inline CliquePairs six_clique_pairs(const CurveData& cd, const Pipeline& p) {
  CliquePairs out;
  for (const auto& comp : p.D_list)
    for (const auto& k : graphs::cliques_of_size(p.G.induced(comp), 6)) {
      std::vector<int> clique;
      for (int local : k) clique.push_back(comp[local]);
      std::sort(clique.begin(), clique.end());
      out.cliques.push_back(std::move(clique));
    }
  out.unions.reserve(out.cliques.size());
  std::map<std::vector<uint64_t>, std::vector<int>> by_union;
  for (size_t i = 0; i < out.cliques.size(); ++i) {
    Bitset u(cd.np());
    for (int c : out.cliques[i]) u |= cd.conics[c].trace_bits;
    check(u.count() == 36, Errc::Falsified, "6-clique union is not 36 points");
    by_union[u.words()].push_back(static_cast<int>(i));
    out.unions.push_back(std::move(u));
  }
  for (const auto& [key, members] : by_union) {
    check(members.size() == 2, Errc::Falsified,
          "trace union shared by " + std::to_string(members.size()) + " cliques, not 2");
    const auto& ka = out.cliques[members[0]];
    const auto& kb = out.cliques[members[1]];
    for (int c : ka)
      for (int c2 : kb)
        check(c != c2, Errc::Falsified, "partner cliques are not disjoint");
    out.pairs.emplace_back(members[0], members[1]);
  }
  return out;
}

// S_D = union of the secant sets over the 21 conics of D.
inline std::vector<Bitset> secant_unions(const CurveData& cd, const Pipeline& p) {
  std::vector<Bitset> out;
  out.reserve(p.D_list.size());
  for (const auto& comp : p.D_list) {
    Bitset u(cd.ns());
    for (int c : comp) u |= cd.conics[c].secant_bits;
    out.push_back(std::move(u));
  }
  return out;
}

struct DoublyTangential {
  std::vector<std::vector<int>> R;   // per conic: conics with M0=2, M1=1
  std::vector<Bitset> R_bits;
  std::vector<Bitset> RD_bits;       // per decomposition: union over its conics
  std::array<Bitset, 3> Ctilde;      // conic sets of the three H-components
};

inline DoublyTangential doubly_tangential_sets(const CurveData& cd, const Pipeline& p) {
  DoublyTangential out;
  int nc = p.nc;
  out.R.resize(nc);
  out.R_bits.assign(nc, Bitset(nc));
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j)
      if (i != j && p.m0(i, j) == 2 && p.m1(i, j) == 1) {
        out.R[i].push_back(j);
        out.R_bits[i].set(j);
      }
  out.RD_bits.assign(p.D_list.size(), Bitset(nc));
  for (size_t d = 0; d < p.D_list.size(); ++d)
    for (int c : p.D_list[d]) out.RD_bits[d] |= out.R_bits[c];
  for (int k = 0; k < 3; ++k) {
    out.Ctilde[k] = Bitset(nc);
    for (int d : p.C[k])
      for (int c : p.D_list[d]) out.Ctilde[k].set(c);
  }
  return out;
}

// The bijection f_{D,D'}: for cross-component b21 pairs, each Q in D has a
// unique partner Q' in D' sharing two curve points.
inline std::vector<int> doubly_tangential_bijection(const Pipeline& p, int d, int d2) {
  check(p.T(d, d2) == TypeBig::b21, Errc::InvalidInput, "f_{D,D'} needs type b21");
  std::vector<int> image;
  for (int c : p.D_list[d]) {
    int partner = -1;
    for (int c2 : p.D_list[d2])
      if (p.m0(c, c2) == 2) {
        check(partner < 0, Errc::Falsified, "f_{D,D'} image not unique");
        partner = c2;
      }
    check(partner >= 0, Errc::Falsified, "f_{D,D'} has no image");
    image.push_back(partner);
  }
  return image;
}

}  // namespace pipeline

}  // namespace ttc
