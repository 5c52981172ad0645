#include <catch_amalgamated.hpp>

#include "common.hpp"

using namespace polydist;
using testutil::square_frame;
using testutil::vec2;

TEST_CASE("level facet coefficients for a single ball") {
  // Ball center (2.5, 0.5), r^2 = 2.5, query (0.3, 0.4): the quadratic terms
  // cancel into the affine facet 2(C0-Ck).x + (|Ck|^2 - r^2 - |C0|^2 + R^2).
  const BallIntersection Q{{Ball(vec2(2.5, 0.5), std::sqrt(2.5))}};
  const CircumscribedFrame frame = square_frame();

  const LevelPolytope L0 = build_level_polytope(Q, frame, 0.0);
  REQUIRE(L0.base.facets() == 1);
  CHECK(L0.base.A(0, 0) == Catch::Approx(-4.4));
  CHECK(L0.base.A(0, 1) == Catch::Approx(-0.2));
  CHECK(L0.base.b(0) == Catch::Approx(3.75));
  CHECK(level_value(L0, vec2(1, 1)) == Catch::Approx(-0.85));

  // R enters only through the offset: +R^2 on every facet.
  const LevelPolytope L1 = build_level_polytope(Q, frame, 1.0);
  CHECK(L1.base.b(0) == Catch::Approx(4.75));
  CHECK(level_value(L1, vec2(1, 1)) == Catch::Approx(0.15));
}

TEST_CASE("level value equals the quadratic difference everywhere") {
  const CircumscribedFrame frame = square_frame();
  const BallIntersection Q{{Ball(vec2(-1.5, 0.5), std::sqrt(6.5)),
                            Ball(vec2(0.5, -1.5), std::sqrt(6.5)),
                            Ball(vec2(2.0, 2.0), 2.0)}};
  SplitMix64 rng(7);
  for (double R : {0.0, 0.5, 1.3}) {
    const LevelPolytope L = build_level_polytope(Q, frame, R);
    for (int i = 0; i < 200; ++i) {
      const Vec x = vec2(rng.uniform(-2.0, 3.0), rng.uniform(-2.0, 3.0));
      const double direct = eval_h(Q, x) - eval_g(frame, x) + R * R;
      CHECK(std::abs(level_value(L, x) - direct) <= 1e-9);
    }
  }
}

TEST_CASE("balls whose centers align with the query give parallel facets") {
  const CircumscribedFrame frame = square_frame();
  const Vec d = vec2(1.0, 2.0).normalized();
  const BallIntersection Q{{Ball(frame.C0 + 1.0 * d, 1.0), Ball(frame.C0 + 2.5 * d, 1.0)}};
  const LevelPolytope L = build_level_polytope(Q, frame, 0.0);
  REQUIRE(L.base.facets() == 2);
  const Vec n0 = L.base.A.row(0).normalized();
  const Vec n1 = L.base.A.row(1).normalized();
  CHECK(std::abs(n0.dot(n1)) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the level set shrinks as R grows") {
  const CircumscribedFrame frame = square_frame();
  const BallIntersection Q{{Ball(vec2(-1.5, 0.5), std::sqrt(6.5)),
                            Ball(vec2(2.5, 0.5), std::sqrt(6.5))}};
  SplitMix64 rng(11);
  const LevelPolytope lo = build_level_polytope(Q, frame, 0.4);
  const LevelPolytope hi = build_level_polytope(Q, frame, 0.9);
  for (int i = 0; i < 200; ++i) {
    const Vec x = vec2(rng.uniform(-2.0, 3.0), rng.uniform(-2.0, 3.0));
    if (level_value(hi, x) <= 0.0) CHECK(level_value(lo, x) <= 0.0);
  }
}

TEST_CASE("construction rejects bad parameters") {
  const CircumscribedFrame frame = square_frame();
  const BallIntersection Q{{Ball(vec2(2.5, 0.5), 1.0)}};
  CHECK_THROWS_AS(build_level_polytope(Q, frame, -0.1), std::invalid_argument);

  // A ball centered at the query point has no affine facet.
  const BallIntersection bad{{Ball(frame.C0, 1.0)}};
  CHECK_THROWS_AS(build_level_polytope(bad, frame, 0.5), std::invalid_argument);
}
