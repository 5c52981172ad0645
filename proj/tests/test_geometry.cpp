#include <catch_amalgamated.hpp>

#include "common.hpp"

using namespace polydist;
using testutil::square;
using testutil::square_frame;
using testutil::vec2;

TEST_CASE("polytope construction validates shape") {
  Mat A(2, 2);
  A << 1, 0, 0, 1;
  Vec b(2);
  b << -1, -1;
  CHECK_NOTHROW(HPolytope(A, b));

  Vec short_b(1);
  short_b << -1;
  CHECK_THROWS_AS(HPolytope(A, short_b), std::invalid_argument);

  Mat zero_row(2, 2);
  zero_row << 1, 0, 0, 0;
  CHECK_THROWS_AS(HPolytope(zero_row, b), std::invalid_argument);
}

TEST_CASE("ball requires positive radius") {
  CHECK_NOTHROW(Ball(vec2(0, 0), 1.0));
  CHECK_THROWS_AS(Ball(vec2(0, 0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Ball(vec2(0, 0), -1.0), std::invalid_argument);
  CHECK(Ball(vec2(0, 0), 3.0).radius_sq() == 9.0);
}

TEST_CASE("frame validation") {
  CHECK_NOTHROW(square_frame().validate());

  CircumscribedFrame tight = square_frame();
  tight.rho = tight.R_circ;  // migration radius must exceed the frame radius
  CHECK_THROWS_AS(tight.validate(), std::invalid_argument);

  CircumscribedFrame coincident = square_frame();
  coincident.C0 = coincident.C;
  CHECK_THROWS_AS(coincident.validate(), std::invalid_argument);

  CircumscribedFrame mismatched = square_frame();
  mismatched.C0 = testutil::vec3(0.3, 0.4, 0.0);
  CHECK_THROWS_AS(mismatched.validate(), std::invalid_argument);

  CircumscribedFrame degenerate = square_frame();
  degenerate.R_circ = 0.0;
  CHECK_THROWS_AS(degenerate.validate(), std::invalid_argument);
}

TEST_CASE("containment and violation on the unit square") {
  const HPolytope P = square();
  CHECK(polytope_contains(P, vec2(0.5, 0.5)));
  CHECK(polytope_contains(P, vec2(1.0, 1.0)));
  CHECK_FALSE(polytope_contains(P, vec2(1.1, 0.5)));
  CHECK(polytope_contains(P, vec2(1.05, 0.5), 0.1));
  CHECK_THROWS_AS(polytope_contains(P, vec2(0.5, 0.5), -1.0), std::invalid_argument);

  CHECK(facet_violation(P, vec2(0.5, 0.5)) == Catch::Approx(-0.5));
  CHECK(facet_violation(P, vec2(1.1, 0.5)) == Catch::Approx(0.1));
  CHECK(facet_violation(P, vec2(1.0, 1.0)) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("violation is normalized by the facet normal length") {
  Mat A(1, 2);
  A << 3, 4;  // norm 5
  Vec b(1);
  b << -5;
  const HPolytope P{A, b};
  CHECK(facet_violation(P, vec2(3, 4)) == Catch::Approx(4.0));  // (25-5)/5
}

TEST_CASE("distance evaluations") {
  const CircumscribedFrame frame = square_frame();
  CHECK(eval_g(frame, vec2(1, 1)) == Catch::Approx(0.85));
  CHECK(eval_g(frame, frame.C0) == 0.0);

  const BallIntersection Q{{Ball(vec2(0, 0), 1.0), Ball(vec2(1, 0), 2.0)}};
  // max of ||x||^2 - 1 and ||x-(1,0)||^2 - 4 at (2,0): max(3, -3) = 3
  CHECK(eval_h(Q, vec2(2, 0)) == Catch::Approx(3.0));
  CHECK(eval_h(Q, vec2(0, 0)) == Catch::Approx(-1.0));
  CHECK(Q.dim() == 2);
}

TEST_CASE("dimension mismatches are rejected") {
  const CircumscribedFrame frame = square_frame();
  CHECK_THROWS_AS(eval_g(frame, testutil::vec3(1, 1, 1)), std::invalid_argument);
  const BallIntersection Q{{Ball(vec2(0, 0), 1.0)}};
  CHECK_THROWS_AS(eval_h(Q, testutil::vec3(0, 0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(polytope_contains(square(), testutil::vec3(0, 0, 0)),
                  std::invalid_argument);
}
