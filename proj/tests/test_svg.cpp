#include <catch_amalgamated.hpp>

#include "common.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace polydist;

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    fields.push_back(cur);
    rows.push_back(std::move(fields));
  }
  return rows;
}

size_t count_kind(const std::vector<std::vector<std::string>>& rows, const std::string& kind,
                  const std::string& gen) {
  size_t n = 0;
  for (const auto& r : rows)
    if (r[0] == kind && r[1] == gen) ++n;
  return n;
}

}  // namespace

TEST_CASE("stage-zero drawing lists the square, its cover, and the markers") {
  const HPolytope P = testutil::square();
  const CircumscribedFrame frame = testutil::square_frame();
  const CenterChain chain = build_chain(P, frame, 200);

  PlotOptions opts;
  opts.stage = 0;
  opts.R = 0.5;
  const PlotOutput out = render_plot2d(P, frame, chain, opts);
  const auto rows = csv_rows(out.csv);

  REQUIRE(!rows.empty());
  for (const auto& r : rows) REQUIRE(r.size() == 8);

  CHECK(count_kind(rows, "polytope_vertex", "0") == 4);
  CHECK(count_kind(rows, "ball", "0") == 4);
  CHECK(count_kind(rows, "center", "0") == 4);
  CHECK(count_kind(rows, "imprint", "0") == 4);
  CHECK(count_kind(rows, "query", "") == 1);
  CHECK(count_kind(rows, "frame_circle", "") == 1);
  CHECK(count_kind(rows, "distance_circle", "") == 1);

  // Nothing beyond the requested stage.
  for (const auto& r : rows) CHECK((r[1].empty() || r[1] == "0"));

  // The drawn vertices are exactly the square corners.
  std::set<std::pair<double, double>> seen;
  for (const auto& r : rows)
    if (r[0] == "polytope_vertex") seen.insert({std::stod(r[3]), std::stod(r[4])});
  const std::set<std::pair<double, double>> corners = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK(seen == corners);
}

TEST_CASE("imprint chords of the square cover end at the corners") {
  // The frame circle circumscribes the square, so each facet's rim cut is the
  // chord between that facet's two corners.
  const HPolytope P = testutil::square();
  const CircumscribedFrame frame = testutil::square_frame();
  const CenterChain chain = build_chain(P, frame, 200);

  PlotOptions opts;
  opts.stage = 0;
  const PlotOutput out = render_plot2d(P, frame, chain, opts);

  const std::vector<Vec> corners = {testutil::vec2(0, 0), testutil::vec2(0, 1),
                                    testutil::vec2(1, 0), testutil::vec2(1, 1)};
  size_t imprints = 0;
  for (const auto& r : csv_rows(out.csv)) {
    if (r[0] != "imprint") continue;
    ++imprints;
    for (const auto& endpoint :
         {testutil::vec2(std::stod(r[3]), std::stod(r[4])),
          testutil::vec2(std::stod(r[5]), std::stod(r[6]))}) {
      double best = 1e300;
      for (const Vec& c : corners) best = std::min(best, (endpoint - c).norm());
      CHECK(best <= 1e-9);
    }
  }
  CHECK(imprints == 4);
}

TEST_CASE("the full drawing walks every generation to the exit") {
  const HPolytope P = testutil::square();
  const CircumscribedFrame frame = testutil::square_frame();
  const CenterChain chain = build_chain(P, frame, 200);
  REQUIRE(chain.exit_generation.has_value());
  const int exit_gen = *chain.exit_generation;

  PlotOptions opts;
  opts.R = 0.9;
  const PlotOutput out = render_plot2d(P, frame, chain, opts);
  const auto rows = csv_rows(out.csv);

  std::map<std::string, size_t> balls_per_gen;
  for (const auto& r : rows)
    if (r[0] == "ball") ++balls_per_gen[r[1]];
  CHECK(balls_per_gen.size() == static_cast<size_t>(exit_gen) + 1);
  for (int g = 0; g <= exit_gen; ++g) {
    REQUIRE(balls_per_gen.count(std::to_string(g)) == 1);
    CHECK(balls_per_gen[std::to_string(g)] == 4);
  }

  CHECK(out.svg.find("<svg") != std::string::npos);
  CHECK(out.svg.find("stroke-dasharray") != std::string::npos);
  CHECK(out.svg.find("polytope-" + std::to_string(exit_gen)) != std::string::npos);
}

TEST_CASE("rendering is deterministic") {
  const HPolytope P = testutil::square();
  const CircumscribedFrame frame = testutil::square_frame();
  const CenterChain chain = build_chain(P, frame, 200);
  PlotOptions opts;
  opts.R = 0.7;
  const PlotOutput a = render_plot2d(P, frame, chain, opts);
  const PlotOutput b = render_plot2d(P, frame, chain, opts);
  CHECK(a.svg == b.svg);
  CHECK(a.csv == b.csv);
}

TEST_CASE("only planar problems can be drawn") {
  const HPolytope P = testutil::unit_box(3);
  CircumscribedFrame frame;
  frame.C = 0.5 * Vec::Ones(3);
  frame.R_circ = std::sqrt(3.0) / 2.0;
  frame.C0 = testutil::vec3(0.3, 0.4, 0.9);
  frame.rho = 2.6;
  CHECK_THROWS_AS(render_plot2d(P, frame, CenterChain{}, {}), std::invalid_argument);
}
