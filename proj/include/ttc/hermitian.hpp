#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "ttc/bitset.hpp"
#include "ttc/projplane.hpp"

namespace ttc {

struct SecantRec {
  ProjLine line;
  std::vector<uint16_t> trace;  // ascending point indices, size q+1
};

struct ConicRec {
  Conic conic;
  std::vector<uint16_t> trace;    // ascending point indices, size q+1
  std::vector<uint16_t> secants;  // ascending secant indices, size C(q+1,2)
  Bitset trace_bits;              // over points
  Bitset secant_bits;             // over secants
};

// Packed key for a sorted trace: at most 8 point indices, each < 2^16.
struct TraceKey {
  uint64_t w0 = 0, w1 = 0;
  friend bool operator==(const TraceKey&, const TraceKey&) = default;
};
struct TraceKeyHash {
  size_t operator()(const TraceKey& k) const {
    uint64_t h = (k.w0 ^ (k.w1 * 0x9e3779b97f4a7c15ull)) + (k.w1 >> 31);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return static_cast<size_t>(h);
  }
};

// Everything enumerated once from the curve x^(q+1) + y^(q+1) + z^(q+1) = 0:
// its GF(q^2)-rational points, the secant lines through two of them, and the
// totally tangent conics with their traces and secant sets. Immutable after
// construction.
struct CurveData {
  FieldCtx F;
  std::vector<ProjPoint> points;
  std::vector<SecantRec> secants;
  std::vector<ConicRec> conics;
  long long coconical_triples = 0;

  std::vector<int32_t> point_code;  // packed coordinate -> point index
  std::vector<int32_t> psec;        // np*np pair -> secant index
  std::map<Conic, int> conic_index;
  std::unordered_map<TraceKey, int32_t, TraceKeyHash> trace_index;

  int np() const { return static_cast<int>(points.size()); }
  int ns() const { return static_cast<int>(secants.size()); }
  int nc() const { return static_cast<int>(conics.size()); }

  int pack_point(const ProjPoint& p) const {
    int q = F.q(), qq = q * q;
    int code = 0;
    for (int i = 0; i < 3; ++i) code = code * qq + (p.v[i].a * q + p.v[i].b);
    return code;
  }

  int point_idx(const ProjPoint& p) const {
    int32_t i = point_code[pack_point(p)];
    check(i >= 0, Errc::InvalidInput, "point is not on the curve");
    return i;
  }

  int secant_idx(int pi, int pj) const {
    int32_t s = psec[pi * np() + pj];
    check(s >= 0, Errc::Falsified, "point pair without a secant");
    return s;
  }

  static TraceKey trace_key(const std::vector<uint16_t>& t) {
    TraceKey k;
    for (size_t i = 0; i < t.size(); ++i) {
      uint64_t v = static_cast<uint64_t>(t[i]) << (16 * (i & 3));
      (i < 4 ? k.w0 : k.w1) |= v;
    }
    return k;
  }

  // conic index from an ascending trace; -1 when no conic has this trace
  int conic_by_trace(const std::vector<uint16_t>& t) const {
    auto it = trace_index.find(trace_key(t));
    return it == trace_index.end() ? -1 : it->second;
  }
};

namespace hermitian {

// x^(q+1) = N(x), so the curve test is a norm sum in GF(q).
inline bool is_weierstrass(const FieldCtx& F, const ProjPoint& p) {
  Fq2 s = F.add(F.add(F.norm(p.v[0]), F.norm(p.v[1])), F.norm(p.v[2]));
  return FieldCtx::is_zero(s);
}

// All q^3+1 rational points of the curve, in ascending canonical order.
inline std::vector<ProjPoint> weierstrass_points(const FieldCtx& F) {
  std::vector<ProjPoint> out;
  pp::for_each_point(F, [&](const ProjPoint& p) {
    if (is_weierstrass(F, p)) out.push_back(p);
  });
  long long expected = static_cast<long long>(F.q()) * F.q() * F.q() + 1;
  check(static_cast<long long>(out.size()) == expected, Errc::Falsified,
        "Weierstrass point count is not q^3+1");
  return out;
}

// The tangent line at a curve point has dual coordinates (a^q : b^q : c^q).
inline ProjLine tangent_line_at(const FieldCtx& F, const ProjPoint& p) {
  check(is_weierstrass(F, p), Errc::InvalidInput, "tangent_line_at needs a curve point");
  return pp::normalize_line(F, {F.conjugate(p.v[0]), F.conjugate(p.v[1]), F.conjugate(p.v[2])});
}

// kappa_ij = <p_i, conj p_j>; the triple is co-conical iff the cyclic
// product is a nonzero element of the base field.
inline Fq2 kappa(const FieldCtx& F, const ProjPoint& pi, const ProjPoint& pj) {
  Fq2 r{};
  for (int k = 0; k < 3; ++k) r = F.add(r, F.mul(pi.v[k], F.conjugate(pj.v[k])));
  return r;
}

inline bool coconical_triple(const FieldCtx& F, const ProjPoint& p0, const ProjPoint& p1,
                             const ProjPoint& p2) {
  check(p0 != p1 && p1 != p2 && p0 != p2, Errc::InvalidInput, "triple points must be distinct");
  check(is_weierstrass(F, p0) && is_weierstrass(F, p1) && is_weierstrass(F, p2),
        Errc::InvalidInput, "triple points must lie on the curve");
  check(!pp::collinear(F, p0, p1, p2), Errc::CollinearInput, "triple must be non-collinear");
  Fq2 prod = F.mul(F.mul(kappa(F, p0, p1), kappa(F, p1, p2)), kappa(F, p2, p0));
  return !FieldCtx::is_zero(prod) && F.is_in_base_field(prod);
}

// The unique nonsingular conic whose polar line at each p_i is the curve
// tangent there, from the kernel of the 9x6 proportionality system.
inline Conic conic_from_tangency_data(const FieldCtx& F, const ProjPoint& p0,
                                      const ProjPoint& p1, const ProjPoint& p2) {
  check(p0 != p1 && p1 != p2 && p0 != p2, Errc::InvalidInput, "triple points must be distinct");
  check(is_weierstrass(F, p0) && is_weierstrass(F, p1) && is_weierstrass(F, p2),
        Errc::InvalidInput, "triple points must lie on the curve");
  check(!pp::collinear(F, p0, p1, p2), Errc::CollinearInput, "triple must be non-collinear");
  Fq2 h = F.make((F.q() + 1) / 2);
  std::vector<std::vector<Fq2>> rows;
  for (const ProjPoint* pt : {&p0, &p1, &p2}) {
    const auto& p = pt->v;
    std::array<Fq2, 3> l = {F.conjugate(p[0]), F.conjugate(p[1]), F.conjugate(p[2])};
    // rows of F(c) * p as linear forms in c = (cxx, cyy, czz, cxy, cyz, czx)
    // row r, unknown u: coefficient table
    std::array<std::array<Fq2, 6>, 3> fp{};
    fp[0] = {p[0], F.zero(), F.zero(), F.mul(h, p[1]), F.zero(), F.mul(h, p[2])};
    fp[1] = {F.zero(), p[1], F.zero(), F.mul(h, p[0]), F.mul(h, p[2]), F.zero()};
    fp[2] = {F.zero(), F.zero(), p[2], F.zero(), F.mul(h, p[1]), F.mul(h, p[0])};
    for (int r = 0; r < 3; ++r) {
      int i = (r + 1) % 3, j = (r + 2) % 3;
      std::vector<Fq2> row(6);
      for (int u = 0; u < 6; ++u)
        row[u] = F.sub(F.mul(fp[i][u], l[j]), F.mul(fp[j][u], l[i]));
      rows.push_back(std::move(row));
    }
  }
  auto basis = pp::kernel_basis(F, std::move(rows), 6);
  check(basis.size() == 1, Errc::InconsistentTangencyData,
        "tangency system kernel dimension is " + std::to_string(basis.size()));
  std::array<Fq2, 6> c;
  std::copy_n(basis[0].begin(), 6, c.begin());
  Conic Q = pp::normalize_conic(F, c);
  check(pp::conic_nonsingular(F, Q), Errc::SingularConic, "tangency solution is singular");
  return Q;
}

// Builds the full curve dataset for odd prime q.
inline CurveData build_curve(int q) {
  CurveData cd{FieldCtx(q)};
  const FieldCtx& F = cd.F;
  cd.points = weierstrass_points(F);
  int np = cd.np();

  int qq = q * q;
  cd.point_code.assign(static_cast<size_t>(qq) * qq * qq, -1);
  for (int i = 0; i < np; ++i) cd.point_code[cd.pack_point(cd.points[i])] = i;

  // Special secants: lines through two curve points, with their traces.
  cd.psec.assign(static_cast<size_t>(np) * np, -1);
  std::map<ProjLine, int> line_index;
  for (int i = 0; i < np; ++i)
    for (int j = i + 1; j < np; ++j)
      line_index.emplace(pp::line_through(F, cd.points[i], cd.points[j]), 0);
  {
    int idx = 0;
    for (auto& [line, id] : line_index) id = idx++;
    cd.secants.resize(line_index.size());
    for (const auto& [line, id] : line_index) {
      SecantRec rec;
      rec.line = line;
      for (int i = 0; i < np; ++i)
        if (pp::incident(F, line, cd.points[i])) rec.trace.push_back(static_cast<uint16_t>(i));
      check(static_cast<int>(rec.trace.size()) == q + 1, Errc::Falsified,
            "secant trace size is not q+1");
      cd.secants[id] = std::move(rec);
    }
    for (int s = 0; s < cd.ns(); ++s)
      for (size_t a = 0; a < cd.secants[s].trace.size(); ++a)
        for (size_t b = 0; b < cd.secants[s].trace.size(); ++b)
          if (a != b)
            cd.psec[cd.secants[s].trace[a] * np + cd.secants[s].trace[b]] = s;
  }

  // kappa matrix for the co-conical filter
  std::vector<Fq2> kap(static_cast<size_t>(np) * np);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) kap[i * np + j] = kappa(F, cd.points[i], cd.points[j]);

  // Enumerate conics from co-conical triples; dedupe by canonical form.
  std::map<Conic, int> found;
  for (int i = 0; i < np; ++i)
    for (int j = i + 1; j < np; ++j) {
      for (int k = j + 1; k < np; ++k) {
        if (pp::collinear(F, cd.points[i], cd.points[j], cd.points[k])) continue;
        Fq2 prod = F.mul(F.mul(kap[i * np + j], kap[j * np + k]), kap[k * np + i]);
        if (FieldCtx::is_zero(prod) || !F.is_in_base_field(prod)) continue;
        ++cd.coconical_triples;
        Conic Q = conic_from_tangency_data(F, cd.points[i], cd.points[j], cd.points[k]);
        found.emplace(Q, 0);
      }
    }

  cd.conics.reserve(found.size());
  int cidx = 0;
  for (auto& [Q, id] : found) {
    id = cidx++;
    ConicRec rec;
    rec.conic = Q;
    rec.trace_bits = Bitset(np);
    for (int i = 0; i < np; ++i)
      if (FieldCtx::is_zero(pp::conic_eval(F, Q, cd.points[i]))) {
        rec.trace.push_back(static_cast<uint16_t>(i));
        rec.trace_bits.set(i);
      }
    check(static_cast<int>(rec.trace.size()) == q + 1, Errc::Falsified,
          "conic trace size is not q+1");
    rec.secant_bits = Bitset(cd.ns());
    for (size_t a = 0; a < rec.trace.size(); ++a)
      for (size_t b = a + 1; b < rec.trace.size(); ++b) {
        int s = cd.secant_idx(rec.trace[a], rec.trace[b]);
        if (!rec.secant_bits.test(s)) {
          rec.secant_bits.set(s);
          rec.secants.push_back(static_cast<uint16_t>(s));
        }
      }
    std::sort(rec.secants.begin(), rec.secants.end());
    check(static_cast<int>(rec.secants.size()) == (q + 1) * q / 2, Errc::Falsified,
          "secant set size is not C(q+1,2)");
    cd.conics.push_back(std::move(rec));
  }
  cd.conic_index = std::move(found);
  if (q <= 7)
    for (int c = 0; c < cd.nc(); ++c)
      cd.trace_index.emplace(CurveData::trace_key(cd.conics[c].trace), c);

  long long expected = static_cast<long long>(q) * q * (static_cast<long long>(q) * q * q + 1);
  check(static_cast<long long>(cd.nc()) == expected, Errc::Falsified,
        "conic count is not q^2(q^3+1)");
  return cd;
}

// The secants spanned by pairs of the conic's trace, as indices.
inline const std::vector<uint16_t>& secants_of(const CurveData& cd, int conic) {
  return cd.conics.at(conic).secants;
}

}  // namespace hermitian

}  // namespace ttc
