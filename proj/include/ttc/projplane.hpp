#pragma once

#include <array>
#include <compare>
#include <functional>
#include <optional>
#include <vector>

#include "ttc/poly.hpp"

namespace ttc {

// Canonical representative of a point of P^2(GF(q^2)): not all coordinates
// zero, first nonzero coordinate scaled to 1.
struct ProjPoint {
  std::array<Fq2, 3> v{};
  friend auto operator<=>(const ProjPoint&, const ProjPoint&) = default;
};

// A line in dual coordinates, normalized the same way.
struct ProjLine {
  std::array<Fq2, 3> v{};
  friend auto operator<=>(const ProjLine&, const ProjLine&) = default;
};

// Conic coefficients in the monomial order (x^2, y^2, z^2, xy, yz, zx),
// normalized so the first nonzero entry is 1.
struct Conic {
  std::array<Fq2, 6> c{};
  friend auto operator<=>(const Conic&, const Conic&) = default;
};

namespace pp {

template <size_t N>
inline std::array<Fq2, N> normalize_tuple(const FieldCtx& F, std::array<Fq2, N> v) {
  size_t first = N;
  for (size_t i = 0; i < N; ++i)
    if (!FieldCtx::is_zero(v[i])) { first = i; break; }
  check(first < N, Errc::InvalidInput, "cannot normalize the zero tuple");
  Fq2 s = F.inv(v[first]);
  for (size_t i = 0; i < N; ++i) v[i] = F.mul(v[i], s);
  return v;
}

inline ProjPoint normalize_point(const FieldCtx& F, std::array<Fq2, 3> v) {
  return ProjPoint{normalize_tuple(F, v)};
}
inline ProjLine normalize_line(const FieldCtx& F, std::array<Fq2, 3> v) {
  return ProjLine{normalize_tuple(F, v)};
}
inline Conic normalize_conic(const FieldCtx& F, std::array<Fq2, 6> v) {
  return Conic{normalize_tuple(F, v)};
}

inline Fq2 dot(const FieldCtx& F, const std::array<Fq2, 3>& a, const std::array<Fq2, 3>& b) {
  Fq2 r{};
  for (int i = 0; i < 3; ++i) r = F.add(r, F.mul(a[i], b[i]));
  return r;
}

inline std::array<Fq2, 3> cross(const FieldCtx& F, const std::array<Fq2, 3>& a,
                                const std::array<Fq2, 3>& b) {
  return {F.sub(F.mul(a[1], b[2]), F.mul(a[2], b[1])),
          F.sub(F.mul(a[2], b[0]), F.mul(a[0], b[2])),
          F.sub(F.mul(a[0], b[1]), F.mul(a[1], b[0]))};
}

inline bool incident(const FieldCtx& F, const ProjLine& l, const ProjPoint& p) {
  return FieldCtx::is_zero(dot(F, l.v, p.v));
}

// The unique line through two distinct points.
inline ProjLine line_through(const FieldCtx& F, const ProjPoint& p, const ProjPoint& p2) {
  check(p != p2, Errc::DegenerateInput, "line through a repeated point");
  return normalize_line(F, cross(F, p.v, p2.v));
}

inline bool collinear(const FieldCtx& F, const ProjPoint& a, const ProjPoint& b,
                      const ProjPoint& c) {
  return FieldCtx::is_zero(dot(F, cross(F, a.v, b.v), c.v));
}

// Symmetric matrix F_Q of the quadratic form, row-major; cross coefficients
// are halved (q odd, so 2 is invertible).
inline std::array<Fq2, 9> conic_matrix(const FieldCtx& F, const Conic& Q) {
  Fq2 h = F.make((F.q() + 1) / 2);  // 1/2 mod q
  Fq2 xy = F.mul(Q.c[3], h), yz = F.mul(Q.c[4], h), zx = F.mul(Q.c[5], h);
  return {Q.c[0], xy, zx, xy, Q.c[1], yz, zx, yz, Q.c[2]};
}

inline Fq2 det3(const FieldCtx& F, const std::array<Fq2, 9>& m) {
  Fq2 r{};
  r = F.add(r, F.mul(m[0], F.sub(F.mul(m[4], m[8]), F.mul(m[5], m[7]))));
  r = F.sub(r, F.mul(m[1], F.sub(F.mul(m[3], m[8]), F.mul(m[5], m[6]))));
  r = F.add(r, F.mul(m[2], F.sub(F.mul(m[3], m[7]), F.mul(m[4], m[6]))));
  return r;
}

inline bool conic_nonsingular(const FieldCtx& F, const Conic& Q) {
  return !FieldCtx::is_zero(det3(F, conic_matrix(F, Q)));
}

inline std::array<Fq2, 3> mat_vec(const FieldCtx& F, const std::array<Fq2, 9>& m,
                                  const std::array<Fq2, 3>& v) {
  std::array<Fq2, 3> r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i] = F.add(r[i], F.mul(m[3 * i + j], v[j]));
  return r;
}

inline Fq2 conic_eval(const FieldCtx& F, const Conic& Q, const ProjPoint& p) {
  const auto& v = p.v;
  Fq2 r{};
  r = F.add(r, F.mul(Q.c[0], F.mul(v[0], v[0])));
  r = F.add(r, F.mul(Q.c[1], F.mul(v[1], v[1])));
  r = F.add(r, F.mul(Q.c[2], F.mul(v[2], v[2])));
  r = F.add(r, F.mul(Q.c[3], F.mul(v[0], v[1])));
  r = F.add(r, F.mul(Q.c[4], F.mul(v[1], v[2])));
  r = F.add(r, F.mul(Q.c[5], F.mul(v[2], v[0])));
  return r;
}

// Enumerates the canonical representatives of P^2(GF(q^2)) in ascending
// canonical order: (0:0:1), then (0:1:z), then (1:y:z).
inline void for_each_point(const FieldCtx& F, const std::function<void(const ProjPoint&)>& fn) {
  int q = F.q();
  auto elems = [&] {
    std::vector<Fq2> e;
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) e.push_back(F.make(a, b));
    return e;
  }();
  fn(ProjPoint{{F.zero(), F.zero(), F.one()}});
  for (Fq2 z : elems) fn(ProjPoint{{F.zero(), F.one(), z}});
  for (Fq2 y : elems)
    for (Fq2 z : elems) fn(ProjPoint{{F.one(), y, z}});
}

// All q^2+1 rational points of a nonsingular conic, ascending.
inline std::vector<ProjPoint> conic_points(const FieldCtx& F, const Conic& Q) {
  check(conic_nonsingular(F, Q), Errc::SingularConic, "conic_points on singular conic");
  std::vector<ProjPoint> out;
  for_each_point(F, [&](const ProjPoint& p) {
    if (FieldCtx::is_zero(conic_eval(F, Q, p))) out.push_back(p);
  });
  return out;
}

// Degree-2 parametrization (s:t) -> (X:Y:Z) of a nonsingular conic whose
// image is exactly its rational point set, injective on P^1(GF(q^2)).
struct ConicParam {
  std::array<BinaryForm, 3> coord;  // three binary quadratics
  ProjPoint base;                   // the least point of the conic

  ProjPoint at(const FieldCtx& F, Fq2 s, Fq2 t) const {
    std::array<Fq2, 3> v;
    for (int i = 0; i < 3; ++i) v[i] = bf::eval(F, coord[i], s, t);
    return normalize_point(F, v);
  }
};

inline ProjPoint least_conic_point(const FieldCtx& F, const Conic& Q) {
  std::optional<ProjPoint> best;
  for_each_point(F, [&](const ProjPoint& p) {
    if (!best && FieldCtx::is_zero(conic_eval(F, Q, p))) best = p;
  });
  check(best.has_value(), Errc::SingularConic, "conic has no rational point");
  return *best;
}

// Lines through the least point P0 of Q hit Q in one further point; the
// pencil is parametrized by the points u + t*v of a fixed line avoiding P0.
inline ConicParam parametrize(const FieldCtx& F, const Conic& Q) {
  check(conic_nonsingular(F, Q), Errc::SingularConic, "parametrize singular conic");
  auto M = conic_matrix(F, Q);
  ProjPoint p0 = least_conic_point(F, Q);
  std::array<Fq2, 3> u, w;
  if (!FieldCtx::is_zero(p0.v[0])) {
    u = {F.zero(), F.one(), F.zero()};
    w = {F.zero(), F.zero(), F.one()};
  } else if (!FieldCtx::is_zero(p0.v[1])) {
    u = {F.one(), F.zero(), F.zero()};
    w = {F.zero(), F.zero(), F.one()};
  } else {
    u = {F.one(), F.zero(), F.zero()};
    w = {F.zero(), F.one(), F.zero()};
  }
  Fq2 two = F.make(2);
  auto fu = mat_vec(F, M, u), fw = mat_vec(F, M, w);
  Fq2 uFu = dot(F, u, fu), wFw = dot(F, w, fw), uFw = dot(F, u, fw);
  Fq2 pFu = dot(F, p0.v, fu), pFw = dot(F, p0.v, fw);
  // Second intersection of the line {p0, u + t w} with Q:
  //   (d^T F d) p0 - 2 (p0^T F d) d,  d = s u + t w.
  ConicParam cp;
  cp.base = p0;
  for (int i = 0; i < 3; ++i) {
    Fq2 cs2 = F.sub(F.mul(uFu, p0.v[i]), F.mul(F.mul(two, pFu), u[i]));
    Fq2 cst = F.sub(F.mul(F.mul(two, uFw), p0.v[i]),
                    F.add(F.mul(F.mul(two, pFu), w[i]), F.mul(F.mul(two, pFw), u[i])));
    Fq2 ct2 = F.sub(F.mul(wFw, p0.v[i]), F.mul(F.mul(two, pFw), w[i]));
    cp.coord[i] = bf::make({cs2, cst, ct2}, 2);
  }
  return cp;
}

// Restriction of a conic form along a parametrization: a binary quartic.
inline BinaryForm restrict_conic_along(const FieldCtx& F, const ConicParam& cp, const Conic& Q) {
  const auto& X = cp.coord[0];
  const auto& Y = cp.coord[1];
  const auto& Z = cp.coord[2];
  BinaryForm r = bf::scale(F, bf::mul(F, X, X), Q.c[0]);
  r = bf::add(F, r, bf::scale(F, bf::mul(F, Y, Y), Q.c[1]));
  r = bf::add(F, r, bf::scale(F, bf::mul(F, Z, Z), Q.c[2]));
  r = bf::add(F, r, bf::scale(F, bf::mul(F, X, Y), Q.c[3]));
  r = bf::add(F, r, bf::scale(F, bf::mul(F, Y, Z), Q.c[4]));
  r = bf::add(F, r, bf::scale(F, bf::mul(F, Z, X), Q.c[5]));
  return r;
}

// Restriction of x^(q+1) + y^(q+1) + z^(q+1) along a parametrization:
// a binary form of degree 2(q+1).
inline BinaryForm restrict_fermat_along(const FieldCtx& F, const ConicParam& cp) {
  int e = F.q() + 1;
  BinaryForm r = bf::pow(F, cp.coord[0], e);
  r = bf::add(F, r, bf::pow(F, cp.coord[1], e));
  r = bf::add(F, r, bf::pow(F, cp.coord[2], e));
  return r;
}

// det(s F + t F') as a binary cubic; its coefficients come from expanding
// the determinant of a matrix of linear binary forms.
inline BinaryForm pencil_cubic(const FieldCtx& F, const Conic& Q, const Conic& Q2) {
  auto A = conic_matrix(F, Q), B = conic_matrix(F, Q2);
  auto lin = [&](int i, int j) { return std::array<Fq2, 2>{A[3 * i + j], B[3 * i + j]}; };
  std::array<Fq2, 4> acc{};
  static constexpr int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                     {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  for (int p = 0; p < 6; ++p) {
    auto l0 = lin(0, perm[p][0]), l1 = lin(1, perm[p][1]), l2 = lin(2, perm[p][2]);
    std::array<Fq2, 4> term{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          Fq2 v = F.mul(F.mul(l0[i], l1[j]), l2[k]);
          term[i + j + k] = F.add(term[i + j + k], v);
        }
    for (int k = 0; k < 4; ++k)
      acc[k] = p < 3 ? F.add(acc[k], term[k]) : F.sub(acc[k], term[k]);
  }
  return bf::make({acc[0], acc[1], acc[2], acc[3]}, 3);
}

// True iff Q and Q2 meet transversely in four distinct points, decided by
// squarefreeness of the pencil determinant as a binary form.
inline bool transverse(const FieldCtx& F, const Conic& Q, const Conic& Q2) {
  check(Q != Q2, Errc::DegenerateInput, "transversality of a conic with itself");
  check(conic_nonsingular(F, Q) && conic_nonsingular(F, Q2), Errc::SingularConic,
        "transversality needs nonsingular conics");
  auto parts = poly::multiplicity_partition(F, pencil_cubic(F, Q, Q2));
  return parts.size() == 3;  // {1,1,1}
}

// [nu_1, nu_2, nu_3, nu_4]: the number of intersection points of each
// multiplicity, over the algebraic closure; sum of m*nu_m is 4.
inline std::array<int, 4> intersection_pattern(const FieldCtx& F, const Conic& Q,
                                               const Conic& Q2) {
  check(Q != Q2, Errc::DegenerateInput, "intersection pattern of a conic with itself");
  check(conic_nonsingular(F, Q) && conic_nonsingular(F, Q2), Errc::SingularConic,
        "intersection pattern needs nonsingular conics");
  ConicParam cp = parametrize(F, Q);
  BinaryForm quartic = restrict_conic_along(F, cp, Q2);
  check(!bf::is_zero(quartic), Errc::InvalidInput, "conics coincide up to scalar");
  std::array<int, 4> nu{};
  for (int m : poly::multiplicity_partition(F, quartic)) {
    check(m >= 1 && m <= 4, Errc::Falsified, "conic intersection multiplicity out of range");
    ++nu[m - 1];
  }
  return nu;
}

// True iff the restriction of the degree-(q+1) Fermat form to Q consists of
// q+1 distinct double points.
inline bool tangency_certificate(const FieldCtx& F, const Conic& Q) {
  ConicParam cp = parametrize(F, Q);
  BinaryForm r = restrict_fermat_along(F, cp);
  check(!bf::is_zero(r), Errc::CurveContainsConic, "curve restriction vanishes on conic");
  auto parts = poly::multiplicity_partition(F, r);
  if (static_cast<int>(parts.size()) != F.q() + 1) return false;
  for (int m : parts)
    if (m != 2) return false;
  return true;
}

// Kernel of a dense matrix over GF(q^2) (row-major, rows x cols), via
// Gaussian elimination. Returns a basis of the null space.
inline std::vector<std::vector<Fq2>> kernel_basis(const FieldCtx& F,
                                                  std::vector<std::vector<Fq2>> m, int cols) {
  int rows = static_cast<int>(m.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (!FieldCtx::is_zero(m[i][c])) { sel = i; break; }
    if (sel < 0) continue;
    std::swap(m[r], m[sel]);
    Fq2 piv_inv = F.inv(m[r][c]);
    for (int j = 0; j < cols; ++j) m[r][j] = F.mul(m[r][j], piv_inv);
    for (int i = 0; i < rows; ++i) {
      if (i == r || FieldCtx::is_zero(m[i][c])) continue;
      Fq2 f = m[i][c];
      for (int j = 0; j < cols; ++j) m[i][j] = F.sub(m[i][j], F.mul(f, m[r][j]));
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<Fq2>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Fq2> v(cols, Fq2{});
    v[free] = F.one();
    for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i)
      v[pivot_col[i]] = F.neg(m[i][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace pp

}  // namespace ttc
