#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>

#include "ttc/projplane.hpp"

using namespace ttc;

namespace {

// coefficient pairs (base, alpha) in the order x^2, y^2, z^2, xy, yz, zx
Conic conic_of(const FieldCtx& F, std::initializer_list<std::pair<int, int>> coeffs) {
  std::array<Fq2, 6> c{};
  int i = 0;
  for (auto [a, b] : coeffs) c[i++] = F.make(a, b);
  return pp::normalize_conic(F, c);
}

ProjPoint pt(const FieldCtx& F, int x0, int x1, int y0, int y1, int z0, int z1) {
  return pp::normalize_point(F, {F.make(x0, x1), F.make(y0, y1), F.make(z0, z1)});
}

ProjPoint random_point(const FieldCtx& F, std::mt19937& rng) {
  for (;;) {
    std::array<Fq2, 3> v;
    bool nonzero = false;
    for (auto& c : v) {
      c = F.make(static_cast<int>(rng() % F.q()), static_cast<int>(rng() % F.q()));
      nonzero = nonzero || !FieldCtx::is_zero(c);
    }
    if (nonzero) return pp::normalize_point(F, v);
  }
}

const Conic& q1(const FieldCtx& F) {
  static Conic c = conic_of(F, {{1, 0}, {1, 0}, {1, 0}, {0, 0}, {0, 0}, {0, 0}});
  return c;
}

}  // namespace

TEST_CASE("normalization") {
  FieldCtx F(5);
  CHECK(pt(F, 0, 0, 2, 0, 4, 0) == pt(F, 0, 0, 1, 0, 2, 0));
  CHECK(pt(F, 1, 0, 0, 0, 2, 0).v == std::array<Fq2, 3>{F.one(), F.zero(), F.make(2)});
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    ProjPoint p = random_point(F, rng);
    CHECK(pp::normalize_point(F, p.v) == p);
  }
  CHECK_THROWS_AS(pp::normalize_point(F, {F.zero(), F.zero(), F.zero()}), Error);
}

TEST_CASE("lines through points") {
  FieldCtx F(5);
  ProjPoint e0 = pt(F, 1, 0, 0, 0, 0, 0), e1 = pt(F, 0, 0, 1, 0, 0, 0);
  CHECK(pp::line_through(F, e0, e1).v == std::array<Fq2, 3>{F.zero(), F.zero(), F.one()});
  CHECK(pp::line_through(F, pt(F, 0, 0, 1, 0, 2, 0), pt(F, 0, 0, 1, 0, 3, 0)).v ==
        std::array<Fq2, 3>{F.one(), F.zero(), F.zero()});
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    ProjPoint p = random_point(F, rng), p2 = random_point(F, rng);
    if (p == p2) continue;
    ProjLine l = pp::line_through(F, p, p2);
    CHECK(pp::incident(F, l, p));
    CHECK(pp::incident(F, l, p2));
  }
  CHECK_THROWS_AS(pp::line_through(F, e0, e0), Error);
}

TEST_CASE("conic evaluation at listed points") {
  FieldCtx F(5);
  CHECK(FieldCtx::is_zero(pp::conic_eval(F, q1(F), pt(F, 0, 0, 1, 0, 2, 0))));
  CHECK(pp::conic_eval(F, q1(F), pt(F, 1, 0, 0, 0, 0, 0)) == F.one());
  CHECK(FieldCtx::is_zero(pp::conic_eval(F, q1(F), pt(F, 1, 0, 2, 0, 0, 0))));
}

TEST_CASE("conic point count is q^2+1") {
  FieldCtx F(5);
  auto pts = pp::conic_points(F, q1(F));
  CHECK(pts.size() == 26);
  int rational_over_base = 0;
  for (const auto& p : pts) {
    bool base = true;
    for (Fq2 c : p.v) base = base && F.is_in_base_field(c);
    rational_over_base += base;
  }
  CHECK(rational_over_base == 6);  // q+1 points over the prime field
  Conic singular = conic_of(F, {{1, 0}, {4, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}});
  CHECK_THROWS_AS(pp::conic_points(F, singular), Error);
}

TEST_CASE("parametrization is a bijection onto the conic") {
  FieldCtx F(5);
  for (const Conic& Q : {q1(F), conic_of(F, {{0, 0}, {0, 0}, {2, 0}, {1, 0}, {0, 0}, {0, 0}})}) {
    pp::ConicParam cp = pp::parametrize(F, Q);
    std::set<ProjPoint> image;
    image.insert(cp.at(F, F.zero(), F.one()));  // t = infinity
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) image.insert(cp.at(F, F.one(), F.make(a, b)));
    auto pts = pp::conic_points(F, Q);
    CHECK(image.size() == pts.size());
    CHECK(std::set<ProjPoint>(pts.begin(), pts.end()) == image);
  }
}

TEST_CASE("the classical parametrization of x^2+y^2+z^2 lies on it") {
  FieldCtx F(5);
  // (t^2+4 : 2t : 2t^2+2), homogenized with s
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      Fq2 t = F.make(a, b);
      std::array<Fq2, 3> v = {F.add(F.mul(t, t), F.make(4)), F.mul(F.make(2), t),
                              F.add(F.mul(F.make(2), F.mul(t, t)), F.make(2))};
      ProjPoint p = pp::normalize_point(F, v);
      CHECK(FieldCtx::is_zero(pp::conic_eval(F, q1(F), p)));
    }
}

TEST_CASE("transversality of pinned examples") {
  FieldCtx F(5);
  Conic row2 = conic_of(F, {{2, 2}, {2, 3}, {1, 0}, {0, 0}, {0, 0}, {0, 0}});
  Conic row4 = conic_of(F, {{0, 3}, {4, 3}, {1, 3}, {0, 0}, {1, 0}, {0, 0}});
  CHECK(pp::transverse(F, q1(F), row2));
  CHECK_FALSE(pp::transverse(F, q1(F), row4));
  CHECK_THROWS_AS(pp::transverse(F, q1(F), q1(F)), Error);
}

TEST_CASE("intersection patterns of pinned examples") {
  FieldCtx F(5);
  auto nu = [&](const Conic& c) { return pp::intersection_pattern(F, q1(F), c); };
  CHECK(nu(conic_of(F, {{2, 2}, {2, 3}, {1, 0}, {0, 0}, {0, 0}, {0, 0}})) ==
        std::array<int, 4>{4, 0, 0, 0});
  CHECK(nu(conic_of(F, {{2, 1}, {0, 1}, {0, 1}, {0, 0}, {1, 0}, {0, 0}})) ==
        std::array<int, 4>{0, 2, 0, 0});
  CHECK(nu(conic_of(F, {{0, 3}, {4, 3}, {1, 3}, {0, 0}, {1, 0}, {0, 0}})) ==
        std::array<int, 4>{0, 0, 0, 1});
  CHECK(nu(conic_of(F, {{0, 3}, {2, 1}, {3, 0}, {3, 0}, {3, 2}, {1, 0}})) ==
        std::array<int, 4>{1, 0, 1, 0});
  CHECK(nu(conic_of(F, {{2, 4}, {4, 3}, {1, 3}, {0, 0}, {1, 0}, {0, 0}})) ==
        std::array<int, 4>{2, 1, 0, 0});
}

TEST_CASE("pattern [4,0,0,0] is exactly transversality, and weights sum to 4") {
  FieldCtx F(5);
  std::mt19937 rng(17);
  int tried = 0;
  while (tried < 60) {
    std::array<Fq2, 6> c;
    bool nonzero = false;
    for (auto& v : c) {
      v = F.make(static_cast<int>(rng() % 5), static_cast<int>(rng() % 5));
      nonzero = nonzero || !FieldCtx::is_zero(v);
    }
    if (!nonzero) continue;
    Conic Q = pp::normalize_conic(F, c);
    if (!pp::conic_nonsingular(F, Q) || Q == q1(F)) continue;
    ++tried;
    auto nu = pp::intersection_pattern(F, q1(F), Q);
    CHECK(nu[0] + 2 * nu[1] + 3 * nu[2] + 4 * nu[3] == 4);
    CHECK(pp::transverse(F, q1(F), Q) == (nu == std::array<int, 4>{4, 0, 0, 0}));
  }
}

TEST_CASE("tangency certificate") {
  FieldCtx F(5);
  CHECK(pp::tangency_certificate(F, q1(F)));
  // x^2+y^2+z^2+xy passes through the curve point (0:1:2) but its tangent
  // there differs from the curve's, so the contact is transversal
  Conic bad = conic_of(F, {{1, 0}, {1, 0}, {1, 0}, {1, 0}, {0, 0}, {0, 0}});
  CHECK_FALSE(pp::tangency_certificate(F, bad));
  // restriction of the curve form always has total degree 2(q+1)
  auto parts = poly::multiplicity_partition(F, pp::restrict_fermat_along(F, pp::parametrize(F, bad)));
  int sum = 0;
  for (int m : parts) sum += m;
  CHECK(sum == 12);
}
