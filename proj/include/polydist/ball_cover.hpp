#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "geometry.hpp"

namespace polydist {

// One ball of the covering intersection, built from facet i of the polytope.
// Geometry: let s = -(A_i.C + b_i)/||A_i|| be the signed distance from the
// frame center C to the facet plane (positive when C is on the feasible
// side), P_i the foot of C on the plane, and imprint_radius_sq =
// R_circ^2 - s^2 the squared radius of the (n-2)-sphere where the plane cuts
// the circumscribing sphere. The ball center sits on the interior side of
// the plane at distance rho from C, so its boundary crosses the sphere
// exactly at that cut:
//   r_i^2 = ||C_i - P_i||^2 + imprint_radius_sq.
// Centered on the interior side, the ball contains the whole feasible cap
// {A_i.x + b_i <= 0} of the closed frame ball, which gives P subset Q.
struct FacetBallSpec {
  int facet_index = -1;
  Vec center;
  double radius = 0.0;
  Vec foot_point;
  double imprint_radius_sq = 0.0;

  Ball ball() const { return Ball(center, radius); }
};

inline double epsilon_bound(const FacetBallSpec& spec) {
  return spec.radius - (spec.center - spec.foot_point).norm();
}

namespace detail {

struct FacetGeometry {
  Vec unit_normal;   // outward
  double signed_dist;  // s, positive when C strictly inside
  Vec foot;
};

inline FacetGeometry facet_geometry(const HPolytope& P, Eigen::Index i,
                                    const CircumscribedFrame& frame) {
  require_dim(P.dim(), frame.C.size(), "facet ball");
  if (i < 0 || i >= P.facets()) throw std::invalid_argument("facet ball: bad facet index");
  FacetGeometry g;
  const double norm = P.A.row(i).norm();
  g.unit_normal = P.A.row(i).transpose() / norm;
  g.signed_dist = -(P.A.row(i).dot(frame.C) + P.b(i)) / norm;
  g.foot = frame.C + g.signed_dist * g.unit_normal;
  return g;
}

}  // namespace detail

// Fixed-radius construction: the ball radius r is prescribed; the center
// distance along the inward normal follows from the cut identity.
inline FacetBallSpec facet_ball_fixed_radius(const HPolytope& P, Eigen::Index i,
                                             const CircumscribedFrame& frame, double r) {
  const auto g = detail::facet_geometry(P, i, frame);
  if (!(g.signed_dist > 0.0))
    throw std::domain_error("facet " + std::to_string(i) + ": frame center not strictly inside");
  const double imprint_sq = frame.R_circ * frame.R_circ - g.signed_dist * g.signed_dist;
  if (imprint_sq < 0.0)
    throw std::domain_error("facet " + std::to_string(i) + ": plane misses the circumscribing ball");
  const double axial_sq = r * r - imprint_sq;
  if (axial_sq <= 0.0)
    throw std::domain_error("facet " + std::to_string(i) + ": radius too small for the cut");
  const double axial = std::sqrt(axial_sq);  // ||C_i - P_i||

  FacetBallSpec spec;
  spec.facet_index = static_cast<int>(i);
  spec.center = g.foot - axial * g.unit_normal;  // interior side of the plane
  spec.radius = r;
  spec.foot_point = g.foot;
  spec.imprint_radius_sq = imprint_sq;
  return spec;
}

// Fixed-rho construction: every center sits at distance rho from C on the
// inward facet normal; the radius follows from the cut identity, expanding to
//   r_i^2 = rho^2 + 2 rho s + R_circ^2.
// `signed_mode` admits s of any sign (used on level-polytope facets, where C
// may be outside a facet). For s >= R_circ the plane misses the frame ball
// on the far side and the formula yields r_i >= rho + R_circ, a ball
// containing the whole frame ball: the facet is redundant there, and keeping
// the enclosing ball preserves soundness. For s <= -R_circ the feasible cap
// is empty; callers treat that as an empty intersection signal.
inline FacetBallSpec facet_ball_fixed_rho_signed(const HPolytope& P, Eigen::Index i,
                                                 const CircumscribedFrame& frame) {
  const auto g = detail::facet_geometry(P, i, frame);
  const double rho = frame.rho, R = frame.R_circ;
  FacetBallSpec spec;
  spec.facet_index = static_cast<int>(i);
  spec.center = frame.C - rho * g.unit_normal;
  spec.radius = std::sqrt(rho * rho + 2.0 * rho * g.signed_dist + R * R);
  spec.foot_point = g.foot;
  spec.imprint_radius_sq = R * R - g.signed_dist * g.signed_dist;
  return spec;
}

inline FacetBallSpec facet_ball_fixed_rho(const HPolytope& P, Eigen::Index i,
                                          const CircumscribedFrame& frame) {
  const auto g = detail::facet_geometry(P, i, frame);
  if (!(g.signed_dist > 0.0))
    throw std::domain_error("facet " + std::to_string(i) + ": frame center not strictly inside");
  if (g.signed_dist > frame.R_circ)
    throw std::domain_error("facet " + std::to_string(i) + ": plane misses the circumscribing ball");
  return facet_ball_fixed_rho_signed(P, i, frame);
}

struct FixedRadius { double r; };
struct FixedRho {};
using CoverMethod = std::variant<FixedRadius, FixedRho>;

inline std::vector<FacetBallSpec> build_ball_cover_specs(const HPolytope& P,
                                                         const CircumscribedFrame& frame,
                                                         const CoverMethod& method = FixedRho{}) {
  std::vector<FacetBallSpec> specs;
  specs.reserve(static_cast<size_t>(P.facets()));
  for (Eigen::Index i = 0; i < P.facets(); ++i) {
    if (const auto* fixed = std::get_if<FixedRadius>(&method))
      specs.push_back(facet_ball_fixed_radius(P, i, frame, fixed->r));
    else
      specs.push_back(facet_ball_fixed_rho(P, i, frame));
  }
  return specs;
}

inline BallIntersection build_ball_cover(const HPolytope& P, const CircumscribedFrame& frame,
                                         const CoverMethod& method = FixedRho{}) {
  std::vector<Ball> balls;
  for (const FacetBallSpec& spec : build_ball_cover_specs(P, frame, method))
    balls.push_back(spec.ball());
  return BallIntersection(std::move(balls));
}

// Fixed-rho cover restricted to facets that actually carve the frame ball.
// A plane at signed distance >= R_circ keeps the whole ball on its feasible
// side (the imprint is empty or a single tangent point), so the facet is
// redundant within the frame and contributes no ball and no chain center.
inline std::vector<FacetBallSpec> carving_cover_specs(const HPolytope& P,
                                                      const CircumscribedFrame& frame) {
  std::vector<FacetBallSpec> specs;
  specs.reserve(static_cast<size_t>(P.facets()));
  for (Eigen::Index i = 0; i < P.facets(); ++i) {
    if (detail::facet_geometry(P, i, frame).signed_dist >= frame.R_circ) continue;
    specs.push_back(facet_ball_fixed_rho(P, i, frame));
  }
  return specs;
}

}  // namespace polydist
