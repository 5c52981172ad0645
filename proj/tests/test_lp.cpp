#include <catch_amalgamated.hpp>

#include "common.hpp"

using namespace polydist;
using testutil::square;
using testutil::vec2;

namespace {

// [0,1]^2 clipped by x1 + 2 x2 <= 1.5.
HPolytope clipped_square() {
  Mat A(5, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1, 1, 2;
  Vec b(5);
  b << -1, 0, -1, 0, -1.5;
  return HPolytope{A, b};
}

}  // namespace

TEST_CASE("maximization lands on the optimal vertex") {
  const LPResult res = lp_maximize(vec2(0.7, 0.6), clipped_square());
  REQUIRE(res.status == LPStatus::optimal);
  CHECK(res.objective == Catch::Approx(0.85).epsilon(1e-12));
  CHECK(res.x(0) == Catch::Approx(1.0).margin(1e-9));
  CHECK(res.x(1) == Catch::Approx(0.25).margin(1e-9));
}

TEST_CASE("maximization handles degenerate objectives") {
  const LPResult res = lp_maximize(vec2(1.0, 0.0), square());
  REQUIRE(res.status == LPStatus::optimal);
  CHECK(res.objective == Catch::Approx(1.0).margin(1e-9));
  CHECK(facet_violation(square(), res.x) <= 1e-9);
}

TEST_CASE("infeasible and unbounded statuses") {
  Mat A(2, 1);
  A << 1, -1;
  Vec b(2);
  b << 0, 1;  // x <= 0 and x >= 1
  const HPolytope empty{A, b};
  CHECK(lp_maximize(Vec::Ones(1), empty).status == LPStatus::infeasible);
  CHECK(feasible_point(empty).status == LPStatus::infeasible);

  Mat A2(1, 1);
  A2 << 1;
  Vec b2(1);
  b2 << -1;  // x <= 1, unbounded below
  const HPolytope half{A2, b2};
  Vec down(1);
  down << -1;
  CHECK(lp_maximize(down, half).status == LPStatus::unbounded);
}

TEST_CASE("interior point maximizes the worst slack") {
  const LPResult res = feasible_point(square());
  REQUIRE(res.status == LPStatus::optimal);
  CHECK(res.objective == Catch::Approx(0.5).epsilon(1e-9));
  // The square's deepest point is unique.
  CHECK(res.x(0) == Catch::Approx(0.5).margin(1e-9));
  CHECK(res.x(1) == Catch::Approx(0.5).margin(1e-9));
  CHECK(facet_violation(square(), res.x) <= -0.5 + 1e-9);
}

TEST_CASE("interior point of a slab keeps the slab's depth") {
  Mat A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  Vec b(4);
  b << -1, 0, -3, 0;  // [0,1] x [0,3]
  const HPolytope slab{A, b};
  const LPResult res = feasible_point(slab);
  REQUIRE(res.status == LPStatus::optimal);
  // Depth is capped by the thin direction; the deep coordinate is not pinned.
  CHECK(res.objective == Catch::Approx(0.5).epsilon(1e-9));
  CHECK(facet_violation(slab, res.x) <= -0.5 + 1e-9);
}

TEST_CASE("hull membership by LP") {
  const std::vector<Vec> diamond = {vec2(2.5, 0.5), vec2(0.5, 2.5), vec2(-1.5, 0.5),
                                    vec2(0.5, -1.5)};

  SECTION("interior query") {
    const HullStatus in = hull_membership_lp(diamond, vec2(0.3, 0.4));
    REQUIRE(in.inside);
    REQUIRE(in.lambda.size() == 4);
    Vec rebuilt = Vec::Zero(2);
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
      CHECK(in.lambda(k) >= -1e-9);
      rebuilt += in.lambda(k) * diamond[static_cast<size_t>(k)];
      total += in.lambda(k);
    }
    CHECK(total == Catch::Approx(1.0).epsilon(1e-9));
    CHECK((rebuilt - vec2(0.3, 0.4)).norm() <= 1e-9);
  }

  SECTION("exterior query yields a separating direction") {
    const HullStatus out = hull_membership_lp(diamond, vec2(3.0, 3.0));
    REQUIRE_FALSE(out.inside);
    CHECK(out.direction.norm() == Catch::Approx(1.0).epsilon(1e-9));
    double support = -std::numeric_limits<double>::infinity();
    for (const Vec& c : diamond) support = std::max(support, out.direction.dot(c));
    CHECK(out.direction.dot(vec2(3.0, 3.0)) - support == Catch::Approx(out.margin).margin(1e-9));
    CHECK(out.margin > 0.0);
    // The outward diagonal separates best here.
    CHECK(out.direction(0) == Catch::Approx(out.direction(1)).margin(1e-6));
  }

  SECTION("vertex query is inside") {
    CHECK(hull_membership_lp(diamond, vec2(2.5, 0.5)).inside);
  }
}
