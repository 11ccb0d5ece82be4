#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "ttc/error.hpp"

namespace ttc {

// Element a + b*w of GF(q^2), where w^2 equals a fixed non-residue mod q.
// Componentwise equality; the total order is lexicographic on (a, b).
struct Fq2 {
  uint8_t a = 0, b = 0;
  friend constexpr auto operator<=>(const Fq2&, const Fq2&) = default;
};

// Exact arithmetic in GF(q) and GF(q^2) = GF(q)[w]/(w^2 - n) for an odd
// prime q, with n the least quadratic non-residue mod q. All operations are
// pure; a context is cheap to copy.
class FieldCtx {
 public:
  explicit FieldCtx(int q) : q_(q) {
    check(q >= 3 && q <= 251 && (q & 1) && is_prime(q), Errc::ConfigError,
          "q must be an odd prime in [3,251], got " + std::to_string(q));
    inv_.assign(q_, 0);
    for (int x = 1; x < q_; ++x)
      for (int y = 1; y < q_; ++y)
        if (x * y % q_ == 1) { inv_[x] = static_cast<uint8_t>(y); break; }
    n_ = 0;
    for (int c = 2; c < q_; ++c)
      if (!is_square_mod(c)) { n_ = c; break; }
    check(n_ != 0, Errc::ConfigError, "no quadratic non-residue found");
  }

  int q() const { return q_; }
  int nonresidue() const { return n_; }

  Fq2 make(long long a, long long b = 0) const {
    return Fq2{red(a), red(b)};
  }
  Fq2 zero() const { return {}; }
  Fq2 one() const { return Fq2{1, 0}; }
  Fq2 alpha() const { return Fq2{0, 1}; }

  static bool is_zero(Fq2 x) { return x.a == 0 && x.b == 0; }

  Fq2 add(Fq2 x, Fq2 y) const { return Fq2{red(x.a + y.a), red(x.b + y.b)}; }
  Fq2 sub(Fq2 x, Fq2 y) const { return Fq2{red(x.a - y.a + q_), red(x.b - y.b + q_)}; }
  Fq2 neg(Fq2 x) const { return Fq2{red(q_ - x.a), red(q_ - x.b)}; }

  Fq2 mul(Fq2 x, Fq2 y) const {
    int a = (x.a * y.a + n_ * x.b % q_ * y.b) % q_;
    int b = (x.a * y.b + x.b * y.a) % q_;
    return Fq2{static_cast<uint8_t>(a), static_cast<uint8_t>(b)};
  }

  Fq2 inv(Fq2 x) const {
    check(!is_zero(x), Errc::DivisionByZero, "inverse of zero in GF(q^2)");
    // 1/(a+bw) = (a-bw)/(a^2 - n b^2); the denominator is the norm, nonzero.
    int den = (x.a * x.a % q_ + (q_ - n_ % q_) * (x.b * x.b % q_)) % q_;
    int d = inv_[den];
    return Fq2{red(x.a * d), red((q_ - x.b) * d)};
  }

  Fq2 div(Fq2 x, Fq2 y) const { return mul(x, inv(y)); }

  Fq2 pow(Fq2 x, uint64_t e) const {
    Fq2 r = one();
    while (e) {
      if (e & 1) r = mul(r, x);
      x = mul(x, x);
      e >>= 1;
    }
    return r;
  }

  // Frobenius x -> x^q; for q prime this is a - b*w.
  Fq2 conjugate(Fq2 x) const { return Fq2{x.a, red(q_ - x.b)}; }

  bool is_in_base_field(Fq2 x) const { return x.b == 0; }

  // N(x) = x * conj(x) = a^2 - n b^2, always in GF(q).
  Fq2 norm(Fq2 x) const { return mul(x, conjugate(x)); }

  // GF(q)-scalar inverse helper (y in 1..q-1).
  int base_inv(int y) const { return inv_[y % q_]; }

  // Canonical serialization, e.g. "3+2*w".
  static std::string to_string(Fq2 x) {
    return std::to_string(x.a) + "+" + std::to_string(x.b) + "*w";
  }

  Fq2 parse(const std::string& s) const {
    size_t plus = s.find('+');
    size_t star = s.find("*w");
    check(plus != std::string::npos && star != std::string::npos && plus < star,
          Errc::InvalidInput, "malformed field element: " + s);
    long long a = std::stoll(s.substr(0, plus));
    long long b = std::stoll(s.substr(plus + 1, star - plus - 1));
    return make(a, b);
  }

 private:
  uint8_t red(long long v) const { return static_cast<uint8_t>(((v % q_) + q_) % q_); }

  static bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  bool is_square_mod(int c) const {
    for (int x = 0; x < q_; ++x)
      if (x * x % q_ == c) return true;
    return false;
  }

  int q_;
  int n_;
  std::vector<uint8_t> inv_;
};

}  // namespace ttc
