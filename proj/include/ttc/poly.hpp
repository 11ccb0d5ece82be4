#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "ttc/gf.hpp"

namespace ttc {

// Dense univariate polynomial over GF(q^2), lowest degree first.
// Invariant: no trailing zero coefficients (the zero polynomial is empty).
struct Poly {
  std::vector<Fq2> c;
};

// Homogeneous binary form of formal degree d in (s,t); coefficient of
// s^(d-k) t^k is stored at index k, so c.size() == d+1.
struct BinaryForm {
  std::vector<Fq2> c;
  int d = 0;
};

namespace poly {

inline Poly trimmed(std::vector<Fq2> c) {
  while (!c.empty() && FieldCtx::is_zero(c.back())) c.pop_back();
  return Poly{std::move(c)};
}

inline int deg(const Poly& f) { return static_cast<int>(f.c.size()) - 1; }
inline bool is_zero(const Poly& f) { return f.c.empty(); }

inline Poly constant(Fq2 v) {
  return FieldCtx::is_zero(v) ? Poly{} : Poly{{v}};
}

inline Poly add(const FieldCtx& F, const Poly& f, const Poly& g) {
  std::vector<Fq2> c(std::max(f.c.size(), g.c.size()));
  for (size_t i = 0; i < c.size(); ++i) {
    Fq2 a = i < f.c.size() ? f.c[i] : Fq2{};
    Fq2 b = i < g.c.size() ? g.c[i] : Fq2{};
    c[i] = F.add(a, b);
  }
  return trimmed(std::move(c));
}

inline Poly scale(const FieldCtx& F, const Poly& f, Fq2 s) {
  if (FieldCtx::is_zero(s)) return {};
  std::vector<Fq2> c(f.c.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = F.mul(f.c[i], s);
  return Poly{std::move(c)};
}

inline Poly mul(const FieldCtx& F, const Poly& f, const Poly& g) {
  if (is_zero(f) || is_zero(g)) return {};
  std::vector<Fq2> c(f.c.size() + g.c.size() - 1);
  for (size_t i = 0; i < f.c.size(); ++i)
    for (size_t j = 0; j < g.c.size(); ++j)
      c[i + j] = F.add(c[i + j], F.mul(f.c[i], g.c[j]));
  return trimmed(std::move(c));
}

inline Poly monic(const FieldCtx& F, const Poly& f) {
  if (is_zero(f)) return {};
  return scale(F, f, F.inv(f.c.back()));
}

// Returns (quotient, remainder) with f = q*g + r, deg r < deg g.
inline std::pair<Poly, Poly> divmod(const FieldCtx& F, Poly f, const Poly& g) {
  check(!is_zero(g), Errc::DivisionByZero, "polynomial division by zero");
  Poly q;
  if (deg(f) >= deg(g)) q.c.assign(f.c.size() - g.c.size() + 1, Fq2{});
  Fq2 lead_inv = F.inv(g.c.back());
  while (!is_zero(f) && deg(f) >= deg(g)) {
    int shift = deg(f) - deg(g);
    Fq2 coef = F.mul(f.c.back(), lead_inv);
    q.c[shift] = coef;
    for (size_t i = 0; i < g.c.size(); ++i)
      f.c[i + shift] = F.sub(f.c[i + shift], F.mul(coef, g.c[i]));
    f = trimmed(std::move(f.c));
  }
  return {trimmed(std::move(q.c)), std::move(f)};
}

inline Poly derivative(const FieldCtx& F, const Poly& f) {
  if (deg(f) < 1) return {};
  std::vector<Fq2> c(f.c.size() - 1);
  for (size_t i = 1; i < f.c.size(); ++i)
    c[i - 1] = F.mul(f.c[i], F.make(static_cast<long long>(i)));
  return trimmed(std::move(c));
}

// Monic gcd by the Euclidean algorithm. gcd(f, 0) = monic(f).
inline Poly gcd(const FieldCtx& F, Poly f, Poly g) {
  check(!is_zero(f) || !is_zero(g), Errc::InvalidInput, "gcd(0, 0) undefined");
  while (!is_zero(g)) {
    Poly r = divmod(F, std::move(f), g).second;
    f = std::move(g);
    g = std::move(r);
  }
  return monic(F, f);
}

// True iff f has no repeated roots over the algebraic closure. If f' = 0,
// f is a p-th power (characteristic p = q) and thus not squarefree.
inline bool is_squarefree(const FieldCtx& F, const Poly& f) {
  check(!is_zero(f), Errc::InvalidInput, "squarefree test on zero polynomial");
  if (deg(f) == 0) return true;
  Poly d = derivative(F, f);
  if (is_zero(d)) return false;
  return deg(gcd(F, f, d)) == 0;
}

// p-th root of a polynomial all of whose exponents are multiples of p.
// Coefficient roots use c^(q) since (c^q)^q = c in GF(q^2) with p = q.
inline Poly pth_root(const FieldCtx& F, const Poly& f) {
  int p = F.q();
  std::vector<Fq2> c((f.c.size() + p - 1) / p);
  for (size_t i = 0; i < f.c.size(); ++i) {
    if (i % p == 0) {
      c[i / p] = F.conjugate(f.c[i]);
    } else {
      check(FieldCtx::is_zero(f.c[i]), Errc::InvalidInput,
            "pth_root: exponent not divisible by p");
    }
  }
  return trimmed(std::move(c));
}

// Characteristic-p squarefree decomposition: f = prod A_i^i (up to a
// constant), each A_i monic squarefree, pairwise coprime. Handles p-th
// powers by recursing on the p-th root.
inline void squarefree_decomposition(const FieldCtx& F, const Poly& f_in,
                                     std::map<int, Poly>* out, int mult_scale = 1) {
  Poly f = monic(F, f_in);
  if (deg(f) <= 0) return;
  Poly fp = derivative(F, f);
  if (is_zero(fp)) {
    squarefree_decomposition(F, pth_root(F, f), out, mult_scale * F.q());
    return;
  }
  Poly c = gcd(F, f, fp);
  Poly w = divmod(F, f, c).first;
  int i = 1;
  while (deg(w) > 0) {
    Poly y = gcd(F, w, c);
    Poly z = divmod(F, w, y).first;
    if (deg(z) > 0) {
      Poly& slot = (*out)[i * mult_scale];
      slot = is_zero(slot) ? monic(F, z) : mul(F, slot, monic(F, z));
    }
    c = divmod(F, c, y).first;
    w = std::move(y);
    ++i;
  }
  if (deg(c) > 0) squarefree_decomposition(F, pth_root(F, c), out, mult_scale * F.q());
}

}  // namespace poly

namespace bf {

inline BinaryForm make(std::vector<Fq2> c, int d) {
  check(static_cast<int>(c.size()) == d + 1, Errc::InvalidInput, "binary form size mismatch");
  return BinaryForm{std::move(c), d};
}

inline bool is_zero(const BinaryForm& f) {
  for (Fq2 v : f.c)
    if (!FieldCtx::is_zero(v)) return false;
  return true;
}

inline Fq2 eval(const FieldCtx& F, const BinaryForm& f, Fq2 s, Fq2 t) {
  Fq2 r{};
  for (int k = 0; k <= f.d; ++k) {
    Fq2 term = F.mul(f.c[k], F.mul(F.pow(s, f.d - k), F.pow(t, k)));
    r = F.add(r, term);
  }
  return r;
}

inline BinaryForm mul(const FieldCtx& F, const BinaryForm& f, const BinaryForm& g) {
  std::vector<Fq2> c(f.d + g.d + 1);
  for (int i = 0; i <= f.d; ++i)
    for (int j = 0; j <= g.d; ++j)
      c[i + j] = F.add(c[i + j], F.mul(f.c[i], g.c[j]));
  return BinaryForm{std::move(c), f.d + g.d};
}

inline BinaryForm add(const FieldCtx& F, const BinaryForm& f, const BinaryForm& g) {
  check(f.d == g.d, Errc::InvalidInput, "binary form degree mismatch");
  std::vector<Fq2> c(f.d + 1);
  for (int i = 0; i <= f.d; ++i) c[i] = F.add(f.c[i], g.c[i]);
  return BinaryForm{std::move(c), f.d};
}

inline BinaryForm scale(const FieldCtx& F, const BinaryForm& f, Fq2 s) {
  std::vector<Fq2> c(f.d + 1);
  for (int i = 0; i <= f.d; ++i) c[i] = F.mul(f.c[i], s);
  return BinaryForm{std::move(c), f.d};
}

inline BinaryForm pow(const FieldCtx& F, const BinaryForm& f, int e) {
  BinaryForm r = make({F.one()}, 0);
  for (int i = 0; i < e; ++i) r = mul(F, r, f);
  return r;
}

}  // namespace bf

namespace poly {

// Multiset of root multiplicities of a nonzero binary form over the
// algebraic closure, as a sorted vector; entries sum to the formal degree.
// The root at (s:t) = (0:1) contributes d - deg of the dehomogenization.
inline std::vector<int> multiplicity_partition(const FieldCtx& F, const BinaryForm& f) {
  check(!bf::is_zero(f), Errc::InvalidInput, "multiplicity partition of zero form");
  Poly affine = trimmed(f.c);  // value at (1, t): plain coefficients in t
  std::vector<int> parts;
  int inf_mult = f.d - deg(affine);
  if (inf_mult > 0) parts.push_back(inf_mult);
  std::map<int, Poly> dec;
  squarefree_decomposition(F, affine, &dec);
  for (const auto& [m, a] : dec)
    for (int i = 0; i < deg(a); ++i) parts.push_back(m);
  std::sort(parts.begin(), parts.end());
  int total = 0;
  for (int m : parts) total += m;
  check(total == f.d, Errc::Falsified, "multiplicity partition does not sum to degree");
  return parts;
}

}  // namespace poly

}  // namespace ttc
