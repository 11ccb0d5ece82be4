#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ttc/pipeline.hpp"

namespace ttc {

using Mat3 = std::array<Fq2, 9>;  // row-major

namespace pgu {

inline Mat3 mat_mul(const FieldCtx& F, const Mat3& a, const Mat3& b) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Fq2 s{};
      for (int k = 0; k < 3; ++k) s = F.add(s, F.mul(a[3 * i + k], b[3 * k + j]));
      r[3 * i + j] = s;
    }
  return r;
}

inline Mat3 mat_dagger(const FieldCtx& F, const Mat3& m) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[3 * i + j] = F.conjugate(m[3 * j + i]);
  return r;
}

// M is unitary modulo scalar iff M† M = s I for a nonzero s in GF(q).
inline bool unitary_mod_scalar(const FieldCtx& F, const Mat3& m) {
  Mat3 g = mat_mul(F, mat_dagger(F, m), m);
  Fq2 s = g[0];
  if (FieldCtx::is_zero(s) || !F.is_in_base_field(s)) return false;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Fq2 want = i == j ? s : Fq2{};
      if (g[3 * i + j] != want) return false;
    }
  return true;
}

inline Mat3 canonical_matrix(const FieldCtx& F, Mat3 m) {
  for (int i = 0; i < 9; ++i)
    if (!FieldCtx::is_zero(m[i])) {
      Fq2 s = F.inv(m[i]);
      for (int j = 0; j < 9; ++j) m[j] = F.mul(m[j], s);
      return m;
    }
  fail(Errc::InvalidInput, "zero matrix");
}

inline uint64_t mat_key(const FieldCtx& F, const Mat3& m) {
  uint64_t key = 0, base = static_cast<uint64_t>(F.q()) * F.q();
  for (int i = 8; i >= 0; --i) key = key * base + (m[i].a * F.q() + m[i].b);
  return key;
}

inline Mat3 mat_from_key(const FieldCtx& F, uint64_t key) {
  Mat3 m;
  uint64_t base = static_cast<uint64_t>(F.q()) * F.q();
  for (int i = 0; i < 9; ++i) {
    int d = static_cast<int>(key % base);
    m[i] = F.make(d / F.q(), d % F.q());
    key /= base;
  }
  return m;
}

}  // namespace pgu

// The projective unitary group of the curve, fully enumerated: canonical
// matrices (sorted, defining element indices) together with the faithful
// permutation action on the curve points. Immutable once built.
struct GroupData {
  const CurveData* cd = nullptr;
  int np = 0;
  size_t n = 0;
  std::vector<uint64_t> mat_keys;   // canonical matrix of element i
  std::vector<uint8_t> perms;       // n rows of np images
  std::vector<uint16_t> elem_order;
  std::vector<int32_t> inv_idx;
  std::vector<int> base;            // points whose images identify an element
  std::unordered_map<uint64_t, int32_t> by_base_key;
  std::unordered_map<uint64_t, int32_t> by_mat_key;
  int32_t identity = -1;

  const uint8_t* perm(int i) const { return perms.data() + static_cast<size_t>(i) * np; }

  uint64_t base_key_of(const uint8_t* p) const {
    uint64_t k = 0;
    for (int b : base) k = (k << 8) | p[b];
    return k;
  }

  int index_of_perm(const uint8_t* p) const {
    auto it = by_base_key.find(base_key_of(p));
    check(it != by_base_key.end(), Errc::InvalidInput, "permutation not in the group");
    return it->second;
  }

  // index of g_i g_j (first apply g_j, then g_i)
  int compose_idx(int i, int j) const {
    const uint8_t *a = perm(i), *b = perm(j);
    uint64_t k = 0;
    for (int bp : base) k = (k << 8) | a[b[bp]];
    auto it = by_base_key.find(k);
    check(it != by_base_key.end(), Errc::Falsified, "composition left the group");
    return it->second;
  }

  // index of t g t^-1
  int conj_idx(int t, int g) const { return compose_idx(compose_idx(t, g), inv_idx[t]); }

  int map_point(int elem, int point) const { return perm(elem)[point]; }

  int map_conic(int elem, int conic) const {
    const uint8_t* p = perm(elem);
    std::vector<uint16_t> img;
    img.reserve(cd->conics[conic].trace.size());
    for (uint16_t t : cd->conics[conic].trace) img.push_back(p[t]);
    std::sort(img.begin(), img.end());
    int idx = cd->conic_by_trace(img);
    check(idx >= 0, Errc::Falsified, "conic image is not a conic");
    return idx;
  }
};

namespace pgu {

// Enumerates PGU_3 by Hermitian Gram-Schmidt: all ordered triples of
// pairwise-orthogonal norm-1 columns, deduplicated modulo scalars.
inline GroupData build_group(const CurveData& cd, int threads) {
  const FieldCtx& F = cd.F;
  int q = F.q();
  check(q <= 11, Errc::ConfigError, "group enumeration supported for q <= 11");
  GroupData gd;
  gd.cd = &cd;
  gd.np = cd.np();
  check(gd.np <= 255, Errc::ConfigError, "point set too large for the permutation store");

  using Vec3 = std::array<Fq2, 3>;
  auto herm = [&](const Vec3& u, const Vec3& v) {
    Fq2 s{};
    for (int i = 0; i < 3; ++i) s = F.add(s, F.mul(F.conjugate(u[i]), v[i]));
    return s;
  };

  std::vector<Vec3> norm1;
  {
    std::vector<Fq2> elems;
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) elems.push_back(F.make(a, b));
    for (Fq2 x : elems)
      for (Fq2 y : elems)
        for (Fq2 z : elems) {
          Vec3 v{x, y, z};
          if (herm(v, v) == F.one()) norm1.push_back(v);
        }
  }

  // scalars of each norm, for completing the third column
  std::vector<std::vector<Fq2>> scalars_of_norm(q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      Fq2 c = F.make(a, b);
      if (!FieldCtx::is_zero(c)) scalars_of_norm[F.norm(c).a].push_back(c);
    }

  std::unordered_set<uint64_t> keys;
  keys.reserve(1 << 20);
  for (const Vec3& c1 : norm1)
    for (const Vec3& c2 : norm1) {
      if (!FieldCtx::is_zero(herm(c1, c2))) continue;
      // the orthogonal complement of {c1, c2} is spanned by conj(c1) x conj(c2)
      Vec3 b1{F.conjugate(c1[0]), F.conjugate(c1[1]), F.conjugate(c1[2])};
      Vec3 b2{F.conjugate(c2[0]), F.conjugate(c2[1]), F.conjugate(c2[2])};
      Vec3 x = pp::cross(F, b1, b2);
      Fq2 lambda = herm(x, x);
      check(F.is_in_base_field(lambda) && !FieldCtx::is_zero(lambda), Errc::Falsified,
            "degenerate complement in Gram-Schmidt enumeration");
      int need = F.base_inv(lambda.a);
      for (Fq2 s : scalars_of_norm[need]) {
        Vec3 c3{F.mul(s, x[0]), F.mul(s, x[1]), F.mul(s, x[2])};
        Mat3 m{c1[0], c2[0], c3[0], c1[1], c2[1], c3[1], c1[2], c2[2], c3[2]};
        keys.insert(mat_key(F, canonical_matrix(F, m)));
      }
    }

  gd.mat_keys.assign(keys.begin(), keys.end());
  std::sort(gd.mat_keys.begin(), gd.mat_keys.end());
  gd.n = gd.mat_keys.size();
  long long expected = static_cast<long long>(q) * q * q * (q * q - 1) *
                       (static_cast<long long>(q) * q * q + 1);
  check(static_cast<long long>(gd.n) == expected, Errc::Falsified,
        "group order is not q^3(q^2-1)(q^3+1)");

  // permutation action on the curve points
  gd.perms.assign(gd.n * gd.np, 0);
  pipeline::parallel_rows(static_cast<int>(gd.n), threads, [&](int e) {
    Mat3 m = mat_from_key(F, gd.mat_keys[e]);
    uint8_t* row = gd.perms.data() + static_cast<size_t>(e) * gd.np;
    for (int p = 0; p < gd.np; ++p) {
      ProjPoint img = pp::normalize_point(F, pp::mat_vec(F, m, cd.points[p].v));
      int32_t idx = cd.point_code[cd.pack_point(img)];
      check(idx >= 0, Errc::Falsified, "group element moved a point off the curve");
      row[p] = static_cast<uint8_t>(idx);
    }
  });

  gd.by_mat_key.reserve(gd.n * 2);
  for (size_t i = 0; i < gd.n; ++i) gd.by_mat_key.emplace(gd.mat_keys[i], static_cast<int32_t>(i));

  // a base: points whose joint images distinguish all elements
  {
    std::vector<int32_t> alive(gd.n);
    std::iota(alive.begin(), alive.end(), 0);
    for (int p = 0; p < gd.np && alive.size() > 1 && gd.base.size() < 8; ++p) {
      bool moves = false;
      for (int32_t e : alive)
        if (gd.perm(e)[p] != p) { moves = true; break; }
      if (!moves) continue;
      gd.base.push_back(p);
      std::vector<int32_t> keep;
      for (int32_t e : alive)
        if (gd.perm(e)[p] == p) keep.push_back(e);
      alive = std::move(keep);
    }
    check(alive.size() == 1, Errc::Falsified, "no distinguishing base found");
  }
  gd.by_base_key.reserve(gd.n * 2);
  for (size_t i = 0; i < gd.n; ++i) {
    auto [it, fresh] = gd.by_base_key.emplace(gd.base_key_of(gd.perm(static_cast<int>(i))),
                                              static_cast<int32_t>(i));
    check(fresh, Errc::Falsified, "two elements share base images");
  }

  // identity, inverses, element orders
  gd.inv_idx.assign(gd.n, -1);
  gd.elem_order.assign(gd.n, 0);
  std::vector<uint8_t> buf(gd.np);
  for (size_t e = 0; e < gd.n; ++e) {
    const uint8_t* p = gd.perm(static_cast<int>(e));
    bool is_id = true;
    for (int i = 0; i < gd.np; ++i) is_id = is_id && p[i] == i;
    if (is_id) gd.identity = static_cast<int32_t>(e);
    for (int i = 0; i < gd.np; ++i) buf[p[i]] = static_cast<uint8_t>(i);
    gd.inv_idx[e] = gd.index_of_perm(buf.data());
    // order = lcm of cycle lengths
    std::vector<bool> seen(gd.np, false);
    long long ord = 1;
    for (int i = 0; i < gd.np; ++i) {
      if (seen[i]) continue;
      int len = 0, j = i;
      do {
        seen[j] = true;
        j = p[j];
        ++len;
      } while (j != i);
      ord = std::lcm(ord, static_cast<long long>(len));
    }
    gd.elem_order[e] = static_cast<uint16_t>(ord);
  }
  check(gd.identity >= 0, Errc::Falsified, "identity not found");
  return gd;
}

// ---- permutation-level Schreier-Sims order oracle ----

using Perm = std::vector<uint8_t>;

inline Perm p_identity(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}
inline Perm p_compose(const Perm& a, const Perm& b) {  // apply b, then a
  Perm r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
  return r;
}
inline Perm p_inverse(const Perm& a) {
  Perm r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<uint8_t>(i);
  return r;
}
inline bool p_is_identity(const Perm& a) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != i) return false;
  return true;
}

// Incremental stabilizer chain on at most 255 points; enough to answer
// order and membership for the subgroup generated by a list of elements.
class StabChain {
 public:
  explicit StabChain(int n) : n_(n) {}

  void add(const Perm& g) {
    if (contains(g)) return;
    extend(0, g);
  }

  bool contains(const Perm& g) const {
    Perm r = g;
    for (const Level& lv : levels_) {
      int img = r[lv.point];
      if (lv.trans[img].empty()) return false;
      r = p_compose(p_inverse(lv.trans[img]), r);
    }
    return p_is_identity(r);
  }

  uint64_t order() const {
    uint64_t o = 1;
    for (const Level& lv : levels_) {
      uint64_t c = 0;
      for (const Perm& t : lv.trans) c += !t.empty();
      o *= c;
    }
    return o;
  }

 private:
  struct Level {
    int point = -1;
    std::vector<Perm> gens;
    std::vector<Perm> trans;  // coset representative per orbit point; empty = not in orbit
  };

  void extend(size_t depth, const Perm& g) {
    if (depth == levels_.size()) {
      int moved = -1;
      for (int i = 0; i < n_; ++i)
        if (g[i] != i) { moved = i; break; }
      if (moved < 0) return;
      Level lv;
      lv.point = moved;
      lv.trans.assign(n_, Perm{});
      lv.trans[moved] = p_identity(n_);
      levels_.push_back(std::move(lv));
    }
    Level& lv = levels_[depth];
    lv.gens.push_back(g);
    // re-close the orbit with the enlarged generator set and sift all
    // Schreier generators into the next level
    std::vector<int> frontier;
    for (int i = 0; i < n_; ++i)
      if (!lv.trans[i].empty()) frontier.push_back(i);
    for (size_t fi = 0; fi < frontier.size(); ++fi) {
      int pt = frontier[fi];
      for (const Perm& s : lv.gens) {
        int img = s[pt];
        if (lv.trans[img].empty()) {
          lv.trans[img] = p_compose(s, lv.trans[pt]);
          frontier.push_back(img);
        } else {
          Perm schreier = p_compose(p_inverse(lv.trans[img]), p_compose(s, lv.trans[pt]));
          if (!p_is_identity(schreier) && !contains_from(depth + 1, schreier))
            extend(depth + 1, schreier);
        }
      }
    }
  }

  bool contains_from(size_t depth, const Perm& g) const {
    Perm r = g;
    for (size_t d = depth; d < levels_.size(); ++d) {
      const Level& lv = levels_[d];
      int img = r[lv.point];
      if (lv.trans[img].empty()) return false;
      r = p_compose(p_inverse(lv.trans[img]), r);
    }
    return p_is_identity(r);
  }

  int n_;
  std::vector<Level> levels_;
};

// Order of the subgroup generated by the given elements.
inline uint64_t generated_order(const GroupData& gd, const std::vector<int>& gens) {
  check(!gens.empty(), Errc::InvalidInput, "generated_order needs generators");
  StabChain chain(gd.np);
  for (int g : gens) chain.add(Perm(gd.perm(g), gd.perm(g) + gd.np));
  return chain.order();
}

// Explicit closure of a set of element indices under composition, as a
// sorted index list. Grows a small generating set adaptively so that the
// breadth-first closure runs over few generators.
inline std::vector<int32_t> subgroup_closure(const GroupData& gd, std::vector<int> gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<int> active;
  for (int g : gens)
    if (g != gd.identity) { active.push_back(g); if (active.size() >= 2) break; }
  if (active.empty()) return {gd.identity};
  for (;;) {
    std::unordered_set<int32_t> seen;
    std::vector<int32_t> frontier{gd.identity};
    seen.insert(gd.identity);
    for (size_t fi = 0; fi < frontier.size(); ++fi)
      for (int g : active) {
        int32_t nxt = gd.compose_idx(g, frontier[fi]);
        if (seen.insert(nxt).second) frontier.push_back(nxt);
      }
    int missing = -1;
    for (int g : gens)
      if (!seen.count(g)) { missing = g; break; }
    if (missing < 0) {
      std::vector<int32_t> out(seen.begin(), seen.end());
      std::sort(out.begin(), out.end());
      return out;
    }
    active.push_back(missing);
  }
}

inline std::vector<int32_t> intersect_sorted(const std::vector<int32_t>& a,
                                             const std::vector<int32_t>& b) {
  std::vector<int32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// (order, element-order histogram) fingerprint; enough to identify every
// isomorphism type appearing in the pairwise stabilizer tables.
inline std::string small_group_name(const GroupData& gd, const std::vector<int32_t>& elems) {
  std::map<int, int> hist;
  for (int32_t e : elems) ++hist[gd.elem_order[e]];
  size_t n = elems.size();
  auto is = [&](std::initializer_list<std::pair<int, int>> want) {
    return hist == std::map<int, int>(want.begin(), want.end());
  };
  if (n == 1) return "1";
  if (n == 2) return "Z2";
  if (n == 3) return "Z3";
  if (n == 4 && is({{1, 1}, {2, 3}})) return "Z2xZ2";
  if (n == 4 && is({{1, 1}, {2, 1}, {4, 2}})) return "Z4";
  if (n == 8 && is({{1, 1}, {2, 5}, {4, 2}})) return "D8";
  if (n == 10 && is({{1, 1}, {2, 5}, {5, 4}})) return "D10";
  if (n == 12 && is({{1, 1}, {2, 3}, {3, 8}})) return "A4";
  if (n == 12 && is({{1, 1}, {2, 7}, {3, 2}, {6, 2}})) return "D12";
  if (n == 60 && is({{1, 1}, {2, 15}, {3, 20}, {5, 24}})) return "A5";
  if (n == 72 && is({{1, 1}, {2, 15}, {3, 26}, {4, 18}, {6, 6}, {12, 6}})) return "(A4x3):2";
  if (n == 120 && is({{1, 1}, {2, 25}, {3, 20}, {4, 30}, {5, 24}, {6, 20}})) return "S5";
  if (n == 168 && is({{1, 1}, {2, 21}, {3, 56}, {4, 42}, {7, 48}})) return "PSL(3,2)";
  if (n == 360 && is({{1, 1}, {2, 45}, {3, 80}, {4, 90}, {5, 144}})) return "A6";
  std::string h = "order-" + std::to_string(n) + " [";
  for (auto [o, c] : hist) h += std::to_string(o) + ":" + std::to_string(c) + " ";
  h += "]";
  return h;
}

}  // namespace pgu

}  // namespace ttc
