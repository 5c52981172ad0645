#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ball_cover.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "level_polytope.hpp"
#include "oracle.hpp"
#include "pipeline.hpp"

namespace polydist {

struct PlotOptions {
  std::optional<int> stage;  // inclusive generation cap; default: through the exit
  double R = 0.0;            // distance parameter for level polytopes and the distance circle
  double width = 760.0;      // pixel width of the drawing
};

struct PlotOutput {
  std::string svg;
  std::string csv;
};

namespace detail {

struct PlotStageData {
  std::vector<Vec> polygon;           // ordered boundary vertices of the stage polytope
  std::vector<FacetBallSpec> cover;   // one spec per facet
};

inline std::vector<Vec> ordered_polygon(const HPolytope& P) {
  std::vector<Vec> vs;
  try {
    vs = enumerate_vertices(P).vertices;
  } catch (const std::exception&) {
    return {};
  }
  if (vs.size() < 3) return vs;
  Vec centroid = Vec::Zero(2);
  for (const Vec& v : vs) centroid += v;
  centroid /= static_cast<double>(vs.size());
  std::sort(vs.begin(), vs.end(), [&](const Vec& a, const Vec& b) {
    return std::atan2(a(1) - centroid(1), a(0) - centroid(0)) <
           std::atan2(b(1) - centroid(1), b(0) - centroid(0));
  });
  return vs;
}

// Stage 0 is the input polytope with its strict cover; stage i >= 1 is the
// level polytope of the previous cover at R with the signed cover on top.
inline std::vector<PlotStageData> collect_stages(const HPolytope& P,
                                                 const CircumscribedFrame& frame, int last,
                                                 double R) {
  std::vector<PlotStageData> stages;
  PlotStageData s0;
  s0.polygon = ordered_polygon(P);
  s0.cover = carving_cover_specs(P, frame);
  stages.push_back(std::move(s0));

  for (int gen = 1; gen <= last; ++gen) {
    BallIntersection prev;
    for (const FacetBallSpec& spec : stages.back().cover) prev.balls.push_back(spec.ball());
    const LevelPolytope L = build_level_polytope(prev, frame, R);
    PlotStageData s;
    s.polygon = ordered_polygon(L.base);
    s.cover.reserve(static_cast<size_t>(L.base.facets()));
    for (Eigen::Index i = 0; i < L.base.facets(); ++i)
      s.cover.push_back(facet_ball_fixed_rho_signed(L.base, i, frame));
    stages.push_back(std::move(s));
  }
  return stages;
}

inline std::string csv_num(double v) { return format_double(v); }

inline const char* stage_color(int gen) {
  static const char* palette[] = {"#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#17becf", "#bcbd22", "#e377c2"};
  return palette[gen % 8];
}

}  // namespace detail

// Layered 2-d figure plus a flat CSV of every primitive drawn. CSV schema:
// kind,generation,index,x1,y1,x2,y2,r with empty cells where not applicable;
// kinds: polytope_vertex, ball, center, imprint (both rim points in one row),
// query, frame_circle, distance_circle.
inline PlotOutput render_plot2d(const HPolytope& P, const CircumscribedFrame& frame,
                                const CenterChain& chain, const PlotOptions& opts = {}) {
  if (P.dim() != 2) throw std::invalid_argument("render_plot2d: dimension must be 2");
  int last = chain.exit_generation ? *chain.exit_generation
                                   : static_cast<int>(chain.generations.size()) - 1;
  if (opts.stage) last = std::min(last, std::max(0, *opts.stage));

  const std::vector<detail::PlotStageData> stages =
      detail::collect_stages(P, frame, last, opts.R);

  std::string csv = "kind,generation,index,x1,y1,x2,y2,r\n";
  auto row = [&](const std::string& kind, int gen, int idx, const std::string& cells) {
    csv += kind + "," + (gen < 0 ? std::string() : std::to_string(gen)) + "," +
           (idx < 0 ? std::string() : std::to_string(idx)) + "," + cells + "\n";
  };
  using detail::csv_num;

  double min_x = frame.C0(0), max_x = frame.C0(0), min_y = frame.C0(1), max_y = frame.C0(1);
  auto grow = [&](double x, double y, double r = 0.0) {
    min_x = std::min(min_x, x - r);
    max_x = std::max(max_x, x + r);
    min_y = std::min(min_y, y - r);
    max_y = std::max(max_y, y + r);
  };

  for (size_t gen = 0; gen < stages.size(); ++gen) {
    const auto& st = stages[gen];
    for (size_t i = 0; i < st.polygon.size(); ++i) {
      const Vec& v = st.polygon[i];
      row("polytope_vertex", static_cast<int>(gen), static_cast<int>(i),
          csv_num(v(0)) + "," + csv_num(v(1)) + ",,,");
      grow(v(0), v(1));
    }
    for (size_t i = 0; i < st.cover.size(); ++i) {
      const FacetBallSpec& spec = st.cover[i];
      row("ball", static_cast<int>(gen), static_cast<int>(i),
          csv_num(spec.center(0)) + "," + csv_num(spec.center(1)) + ",,," +
              csv_num(spec.radius));
      row("center", static_cast<int>(gen), static_cast<int>(i),
          csv_num(spec.center(0)) + "," + csv_num(spec.center(1)) + ",,,");
      grow(spec.center(0), spec.center(1));
      if (spec.imprint_radius_sq >= 0.0) {
        const Vec a = (spec.foot_point - spec.center).normalized();
        Vec tt(2);  // rim direction: perpendicular of the facet normal
        tt << -a(1), a(0);
        const double w = std::sqrt(std::max(spec.imprint_radius_sq, 0.0));
        const Vec p1 = spec.foot_point + w * tt;
        const Vec p2 = spec.foot_point - w * tt;
        row("imprint", static_cast<int>(gen), static_cast<int>(i),
            csv_num(p1(0)) + "," + csv_num(p1(1)) + "," + csv_num(p2(0)) + "," +
                csv_num(p2(1)) + ",");
      }
    }
  }
  row("query", -1, -1, csv_num(frame.C0(0)) + "," + csv_num(frame.C0(1)) + ",,,");
  row("frame_circle", -1, -1,
      csv_num(frame.C(0)) + "," + csv_num(frame.C(1)) + ",,," + csv_num(frame.R_circ));
  grow(frame.C(0), frame.C(1), frame.R_circ);
  if (opts.R > 0.0) {
    row("distance_circle", -1, -1,
        csv_num(frame.C0(0)) + "," + csv_num(frame.C0(1)) + ",,," + csv_num(opts.R));
    grow(frame.C0(0), frame.C0(1), opts.R);
  }

  // --- SVG ---
  const double margin = 30.0;
  const double span = std::max(std::max(max_x - min_x, max_y - min_y), 1e-9);
  const double scale = (opts.width - 2.0 * margin) / span;
  const double height = 2.0 * margin + (max_y - min_y) * scale;
  auto sx = [&](double x) { return margin + (x - min_x) * scale; };
  auto sy = [&](double y) { return height - margin - (y - min_y) * scale; };
  auto num = [&](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " +
         num(opts.width) + " " + num(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  svg += "<g id=\"frame\">\n<circle cx=\"" + num(sx(frame.C(0))) + "\" cy=\"" +
         num(sy(frame.C(1))) + "\" r=\"" + num(frame.R_circ * scale) +
         "\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"6 4\"/>\n</g>\n";

  for (size_t gen = 0; gen < stages.size(); ++gen) {
    const auto& st = stages[gen];
    const std::string color = detail::stage_color(static_cast<int>(gen));
    svg += "<g id=\"polytope-" + std::to_string(gen) + "\">\n";
    if (st.polygon.size() >= 2) {
      svg += "<path d=\"";
      for (size_t i = 0; i < st.polygon.size(); ++i) {
        svg += (i == 0 ? "M " : "L ");
        svg += num(sx(st.polygon[i](0))) + " " + num(sy(st.polygon[i](1))) + " ";
      }
      svg += "Z\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.6\"/>\n";
    }
    svg += "</g>\n<g id=\"cover-" + std::to_string(gen) + "\">\n";
    for (const FacetBallSpec& spec : st.cover) {
      svg += "<circle cx=\"" + num(sx(spec.center(0))) + "\" cy=\"" + num(sy(spec.center(1))) +
             "\" r=\"" + num(spec.radius * scale) + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-opacity=\"0.55\"/>\n";
      svg += "<circle cx=\"" + num(sx(spec.center(0))) + "\" cy=\"" + num(sy(spec.center(1))) +
             "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
    }
    svg += "</g>\n";
  }

  if (opts.R > 0.0)
    svg += "<g id=\"distance\">\n<circle cx=\"" + num(sx(frame.C0(0))) + "\" cy=\"" +
           num(sy(frame.C0(1))) + "\" r=\"" + num(opts.R * scale) +
           "\" fill=\"none\" stroke=\"#d62728\" stroke-dasharray=\"3 3\"/>\n</g>\n";
  svg += "<g id=\"query\">\n<circle cx=\"" + num(sx(frame.C0(0))) + "\" cy=\"" +
         num(sy(frame.C0(1))) + "\" r=\"3.5\" fill=\"#d62728\"/>\n</g>\n";
  svg += "</svg>\n";

  PlotOutput out;
  out.svg = std::move(svg);
  out.csv = std::move(csv);
  return out;
}

}  // namespace polydist
