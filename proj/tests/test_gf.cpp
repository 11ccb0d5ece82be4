#include <catch2/catch_amalgamated.hpp>

#include "ttc/gf.hpp"

using namespace ttc;

namespace {

std::vector<Fq2> all_elements(const FieldCtx& F) {
  std::vector<Fq2> v;
  for (int a = 0; a < F.q(); ++a)
    for (int b = 0; b < F.q(); ++b) v.push_back(F.make(a, b));
  return v;
}

}  // namespace

TEST_CASE("context picks the least non-residue") {
  CHECK(FieldCtx(5).nonresidue() == 2);
  CHECK(FieldCtx(3).nonresidue() == 2);
  CHECK(FieldCtx(7).nonresidue() == 3);
}

TEST_CASE("context rejects bad q") {
  CHECK_THROWS_AS(FieldCtx(4), Error);
  CHECK_THROWS_AS(FieldCtx(9), Error);
  CHECK_THROWS_AS(FieldCtx(2), Error);
  CHECK_THROWS_AS(FieldCtx(1), Error);
}

TEST_CASE("basic arithmetic identities in GF(25)") {
  FieldCtx F(5);
  Fq2 w = F.alpha();
  CHECK(F.mul(w, w) == F.make(2));       // w^2 = 2
  CHECK(F.pow(w, 6) == F.make(3));       // 2^3 = 8 = 3 mod 5
  for (Fq2 x : all_elements(F)) {
    CHECK(F.mul(F.one(), x) == x);
    if (!FieldCtx::is_zero(x)) CHECK(F.mul(x, F.inv(x)) == F.one());
  }
  CHECK_THROWS_AS(F.inv(F.zero()), Error);
}

TEST_CASE("conjugation is Frobenius and an involution") {
  for (int q : {3, 5, 7}) {
    FieldCtx F(q);
    CHECK(F.conjugate(F.make(3)) == F.make(3));
    CHECK(F.conjugate(F.alpha()) == F.neg(F.alpha()));
    for (Fq2 x : all_elements(F)) {
      CHECK(F.conjugate(x) == F.pow(x, q));
      CHECK(F.conjugate(F.conjugate(x)) == x);
    }
  }
}

TEST_CASE("base field membership") {
  FieldCtx F(5);
  CHECK(F.is_in_base_field(F.zero()));
  CHECK_FALSE(F.is_in_base_field(F.alpha()));
  for (Fq2 x : all_elements(F)) {
    CHECK(F.is_in_base_field(x) == (F.conjugate(x) == x));
    CHECK(F.is_in_base_field(F.norm(x)));
  }
}

TEST_CASE("norm is multiplicative") {
  FieldCtx F(5);
  auto elems = all_elements(F);
  for (Fq2 x : elems)
    for (Fq2 y : elems) CHECK(F.norm(F.mul(x, y)) == F.mul(F.norm(x), F.norm(y)));
}

TEST_CASE("field axioms hold exhaustively in GF(9)") {
  FieldCtx F(3);
  auto elems = all_elements(F);
  for (Fq2 x : elems)
    for (Fq2 y : elems) {
      CHECK(F.add(x, y) == F.add(y, x));
      CHECK(F.mul(x, y) == F.mul(y, x));
      CHECK(F.sub(F.add(x, y), y) == x);
      if (!FieldCtx::is_zero(y)) CHECK(F.mul(F.div(x, y), y) == x);
      for (Fq2 z : elems)
        CHECK(F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z)));
    }
}

TEST_CASE("string round-trip") {
  FieldCtx F(5);
  for (Fq2 x : all_elements(F)) CHECK(F.parse(FieldCtx::to_string(x)) == x);
  CHECK(FieldCtx::to_string(F.make(2, 3)) == "2+3*w");
}
