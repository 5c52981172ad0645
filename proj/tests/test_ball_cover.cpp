#include <catch_amalgamated.hpp>

#include "common.hpp"

using namespace polydist;
using testutil::square;
using testutil::square_frame;
using testutil::vec2;

TEST_CASE("fixed-radius ball for the right facet of the square") {
  // Facet x1 <= 1 with the centered frame: plane distance 0.5, imprint
  // radius^2 = R^2 - s^2 = 0.25. With r = 2 the center slides to
  // 1 - sqrt(4 - 0.25) along the inward normal.
  const FacetBallSpec spec = facet_ball_fixed_radius(square(), 0, square_frame(), 2.0);
  CHECK(spec.facet_index == 0);
  CHECK(spec.radius == 2.0);
  CHECK(spec.center(0) == Catch::Approx(1.0 - std::sqrt(3.75)).epsilon(1e-14));
  CHECK(spec.center(1) == Catch::Approx(0.5));
  CHECK(spec.foot_point(0) == Catch::Approx(1.0));
  CHECK(spec.foot_point(1) == Catch::Approx(0.5));
  CHECK(spec.imprint_radius_sq == Catch::Approx(0.25));
  CHECK(epsilon_bound(spec) == Catch::Approx(2.0 - std::sqrt(3.75)).epsilon(1e-12));
}

TEST_CASE("fixed-rho ball for the right facet of the square") {
  // Center at distance rho = 2 on the inward normal: (-1.5, 0.5); the cut
  // identity gives r^2 = rho^2 + 2 rho s + R^2 = 6.5.
  const FacetBallSpec spec = facet_ball_fixed_rho(square(), 0, square_frame());
  CHECK(spec.center(0) == Catch::Approx(-1.5));
  CHECK(spec.center(1) == Catch::Approx(0.5));
  CHECK(spec.radius == Catch::Approx(std::sqrt(6.5)).epsilon(1e-14));
  CHECK(epsilon_bound(spec) == Catch::Approx(std::sqrt(6.5) - 2.5).epsilon(1e-12));
}

TEST_CASE("imprint points stay on the ball boundary") {
  // Every square corner adjacent to a facet lies on that facet's sphere
  // imprint, hence exactly on the replacement ball's boundary.
  const HPolytope P = square();
  const CircumscribedFrame frame = square_frame();
  const Vec corners[4] = {vec2(0, 0), vec2(0, 1), vec2(1, 0), vec2(1, 1)};

  for (const CoverMethod& method : {CoverMethod{FixedRho{}}, CoverMethod{FixedRadius{2.0}}}) {
    const BallIntersection Q = build_ball_cover(P, frame, method);
    REQUIRE(Q.balls.size() == 4);
    for (const Vec& corner : corners)
      CHECK(std::abs(eval_h(Q, corner)) <= 1e-12);
  }
}

TEST_CASE("cover contains the polytope") {
  const HPolytope P = square();
  const BallIntersection Q = build_ball_cover(P, square_frame());
  SplitMix64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const Vec x = vec2(rng.uniform(), rng.uniform());
    CHECK(eval_h(Q, x) <= 1e-12);
  }
}

TEST_CASE("larger rho tightens the cover") {
  double prev = std::numeric_limits<double>::infinity();
  for (double rho : {1.0, 2.0, 4.0, 8.0}) {
    const FacetBallSpec spec = facet_ball_fixed_rho(square(), 0, square_frame(rho));
    const double eps = epsilon_bound(spec);
    CHECK(eps > 0.0);
    CHECK(eps < prev);
    prev = eps;
  }
}

TEST_CASE("per-facet construction rejects bad geometry") {
  const HPolytope P = square();

  // Frame center on the facet plane: not strictly inside.
  const CircumscribedFrame on_plane{vec2(1.0, 0.5), std::sqrt(0.5), vec2(0.3, 0.4), 2.0};
  CHECK_THROWS_AS(facet_ball_fixed_rho(P, 1, on_plane), std::domain_error);

  // Plane beyond the frame ball.
  const CircumscribedFrame small_ball{vec2(0.5, 0.5), 0.3, vec2(0.45, 0.45), 2.0};
  CHECK_THROWS_AS(facet_ball_fixed_rho(P, 0, small_ball), std::domain_error);
  CHECK_THROWS_AS(facet_ball_fixed_radius(P, 0, small_ball, 2.0), std::domain_error);

  // Radius smaller than the imprint radius cannot reproduce the cut.
  CHECK_THROWS_AS(facet_ball_fixed_radius(P, 0, square_frame(), 0.4), std::domain_error);

  CHECK_THROWS_AS(facet_ball_fixed_rho(P, 7, square_frame()), std::invalid_argument);
}

TEST_CASE("signed construction covers level facets on either side") {
  // A facet plane at any signed distance yields a ball; beyond +R_circ it
  // contains the whole frame ball.
  Mat A(1, 2);
  A << 1, 0;
  Vec b(1);
  b << -5;  // x1 <= 5, far beyond the frame ball
  const HPolytope far{A, b};
  const CircumscribedFrame frame = square_frame();
  const FacetBallSpec spec = facet_ball_fixed_rho_signed(far, 0, frame);
  CHECK(spec.radius > frame.rho + frame.R_circ - 1e-12);
  // Frame ball's far pole along the facet normal stays covered.
  const Vec pole = frame.C + frame.R_circ * vec2(1, 0);
  CHECK((pole - spec.center).norm() <= spec.radius + 1e-12);
}

TEST_CASE("carving cover drops facets outside the frame ball") {
  // Clip the square by a redundant facet x1 <= 3: it misses the frame ball
  // and must contribute neither ball nor chain center.
  Mat A(5, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1, 1, 0;
  Vec b(5);
  b << -1, 0, -1, 0, -3;
  const HPolytope clipped{A, b};
  const auto specs = carving_cover_specs(clipped, square_frame());
  REQUIRE(specs.size() == 4);
  for (const auto& spec : specs) CHECK(spec.facet_index != 4);

  // With a strict build the redundant facet is an error instead.
  CHECK_THROWS_AS(build_ball_cover(clipped, square_frame()), std::domain_error);
}

TEST_CASE("cover spec list covers every facet in order") {
  const auto specs = build_ball_cover_specs(square(), square_frame(), CoverMethod{FixedRadius{2.0}});
  REQUIRE(specs.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(specs[static_cast<size_t>(i)].facet_index == i);
    CHECK(specs[static_cast<size_t>(i)].radius == 2.0);
  }
}
