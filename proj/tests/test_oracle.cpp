#include <catch_amalgamated.hpp>

#include "common.hpp"

using namespace polydist;
using testutil::square;
using testutil::unit_box;
using testutil::vec2;
using testutil::vec3;

TEST_CASE("vertex enumeration lists the square's corners in lexical order") {
  const VertexSet vs = enumerate_vertices(square());
  REQUIRE(vs.vertices.size() == 4);
  CHECK((vs.vertices[0] - vec2(0, 0)).norm() <= 1e-12);
  CHECK((vs.vertices[1] - vec2(0, 1)).norm() <= 1e-12);
  CHECK((vs.vertices[2] - vec2(1, 0)).norm() <= 1e-12);
  CHECK((vs.vertices[3] - vec2(1, 1)).norm() <= 1e-12);
}

TEST_CASE("vertex enumeration handles a clipped square") {
  Mat A(5, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1, 1, 2;
  Vec b(5);
  b << -1, 0, -1, 0, -1.5;
  const VertexSet vs = enumerate_vertices(HPolytope{A, b});
  REQUIRE(vs.vertices.size() == 4);
  CHECK((vs.vertices[0] - vec2(0, 0)).norm() <= 1e-12);
  CHECK((vs.vertices[1] - vec2(0, 0.75)).norm() <= 1e-12);
  CHECK((vs.vertices[2] - vec2(1, 0)).norm() <= 1e-12);
  CHECK((vs.vertices[3] - vec2(1, 0.25)).norm() <= 1e-12);
}

TEST_CASE("vertex enumeration counts the cube and dedupes degenerate bases") {
  CHECK(enumerate_vertices(unit_box(3)).vertices.size() == 8);
  // 2n facets meeting at 2^n corners out of C(2n, n) bases: heavy dedup.
  CHECK(enumerate_vertices(unit_box(4)).vertices.size() == 16);
}

TEST_CASE("vertex enumeration enforces its budget and dimension cap") {
  CHECK_THROWS_AS(enumerate_vertices(square(), 1), std::runtime_error);
  CHECK_THROWS_AS(enumerate_vertices(unit_box(13)), std::invalid_argument);
}

TEST_CASE("exhaustive farthest vertex and ties") {
  const auto [far, dist] = brute_maxdist(square(), vec2(0.3, 0.4));
  CHECK(dist == Catch::Approx(std::sqrt(0.85)).epsilon(1e-12));
  CHECK((far - vec2(1, 1)).norm() <= 1e-12);

  // Central query ties all four corners: the lexically smallest wins.
  const auto [tied, tdist] = brute_maxdist(square(), vec2(0.5, 0.5));
  CHECK(tdist == Catch::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK((tied - vec2(0, 0)).norm() <= 1e-12);
}

TEST_CASE("closed-form cube farthest vertex") {
  const auto [v, dist] = hypercube_farthest(vec3(0.3, 0.4, 0.9));
  CHECK((v - vec3(1, 1, 0)).norm() == 0.0);
  CHECK(dist == Catch::Approx(std::sqrt(1.66)).epsilon(1e-14));

  // Exact midpoints round up.
  const auto [vm, dm] = hypercube_farthest(vec2(0.5, 0.2));
  CHECK((vm - vec2(1, 1)).norm() == 0.0);
  CHECK(dm == Catch::Approx(std::sqrt(0.89)).epsilon(1e-14));

  CHECK_THROWS_AS(hypercube_farthest(vec2(1.2, 0.0)), std::invalid_argument);
}

TEST_CASE("closed form agrees with enumeration on the cube") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    Vec C0(3);
    for (int j = 0; j < 3; ++j) C0(j) = rng.uniform();
    const auto [v, dist] = hypercube_farthest(C0);
    const auto [bv, bdist] = brute_maxdist(unit_box(3), C0);
    CHECK(dist == Catch::Approx(bdist).epsilon(1e-12));
    CHECK((v - bv).norm() <= 1e-12);
  }
}

TEST_CASE("subset-sum exhaustive decision") {
  CHECK(ssp_brute({1, 2, 3}, 3));
  CHECK(ssp_brute({1, 2, 3}, 6));
  CHECK(ssp_brute({1, 2, 3}, 0));
  CHECK_FALSE(ssp_brute({1, 2, 3}, 7));
  CHECK_FALSE(ssp_brute({2, 4}, 3));
  CHECK_FALSE(ssp_brute({2, 4}, 5));
  CHECK(ssp_brute({2, 4}, 6));
}
