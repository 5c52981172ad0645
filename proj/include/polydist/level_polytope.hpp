#pragma once

#include <cmath>

#include "geometry.hpp"

namespace polydist {

// Affine-facet form of the level set {x : h(x) - g(x) <= -R^2}. The quadratic
// terms of h and g cancel, leaving one halfspace per ball:
//   2 (C0 - C_k) . x + ||C_k||^2 - r_k^2 - ||C0||^2 + R^2 <= 0.
// base.b stores the full offset including R^2, so base membership is exactly
// level-set membership; facets at different R differ only by the offset.
struct LevelPolytope {
  HPolytope base;
  double R = 0.0;
};

inline LevelPolytope build_level_polytope(const BallIntersection& Q,
                                          const CircumscribedFrame& frame, double R) {
  if (R < 0.0) throw std::invalid_argument("build_level_polytope: R must be >= 0");
  const Eigen::Index n = Q.dim();
  require_dim(n, frame.C0.size(), "build_level_polytope");
  const Eigen::Index m = static_cast<Eigen::Index>(Q.balls.size());
  const double c0sq = frame.C0.squaredNorm();

  Mat A(m, n);
  Vec b(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Ball& ball = Q.balls[k];
    Vec normal = 2.0 * (frame.C0 - ball.center);
    if (normal.norm() <= 1e-14 * (1.0 + frame.C0.norm()))
      throw std::invalid_argument("build_level_polytope: ball center " + std::to_string(k) +
                                  " coincides with C0");
    A.row(k) = normal;
    b(k) = ball.center.squaredNorm() - ball.radius_sq() - c0sq + R * R;
  }
  return LevelPolytope{HPolytope(std::move(A), std::move(b)), R};
}

// max over facets of the stored affine value; equals h(x) - g(x) + R^2.
inline double level_value(const LevelPolytope& L, const Vec& x) {
  require_dim(L.base.dim(), x.size(), "level_value");
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < L.base.facets(); ++i)
    worst = std::max(worst, L.base.A.row(i).dot(x) + L.base.b(i));
  return worst;
}

}  // namespace polydist
