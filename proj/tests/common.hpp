#pragma once

#include "polydist/polydist.hpp"

#include <vector>

namespace testutil {

using namespace polydist;

inline Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline Vec vec3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

inline HPolytope unit_box(int n) {
  Mat A = Mat::Zero(2 * n, n);
  Vec b(2 * n);
  for (int j = 0; j < n; ++j) {
    A(2 * j, j) = 1.0;
    b(2 * j) = -1.0;
    A(2 * j + 1, j) = -1.0;
    b(2 * j + 1) = 0.0;
  }
  return HPolytope{A, b};
}

inline HPolytope square() { return unit_box(2); }

// Unit square, centered frame, query (0.3, 0.4): the worked example used
// throughout the suite. Farthest vertex (1,1) at distance sqrt(0.85).
inline CircumscribedFrame square_frame(double rho = 2.0) {
  return CircumscribedFrame{vec2(0.5, 0.5), std::sqrt(0.5), vec2(0.3, 0.4), rho};
}

inline CircumscribedFrame box_frame(int n, const Vec& C0, double rho_factor = 3.0) {
  const double R = 0.5 * std::sqrt(static_cast<double>(n));
  return CircumscribedFrame{Vec::Constant(n, 0.5), R, C0, rho_factor * R};
}

// Random bounded polytope: the unit box plus `cuts` halfspaces, each keeping
// an interior anchor with real margin so the result has volume. The frame
// center is the max-slack interior point, and R_circ is the exact farthest
// vertex distance, so at least one vertex lies on the circumscribing sphere.
struct RandomInstance {
  HPolytope P;
  CircumscribedFrame frame;
  VertexSet vertices;
};

inline RandomInstance random_instance(SplitMix64& rng, int n, int cuts) {
  for (;;) {
    Vec anchor(n);
    for (int j = 0; j < n; ++j) anchor(j) = rng.uniform(0.3, 0.7);

    Mat A = Mat::Zero(2 * n + cuts, n);
    Vec b(2 * n + cuts);
    for (int j = 0; j < n; ++j) {
      A(2 * j, j) = 1.0;
      b(2 * j) = -1.0;
      A(2 * j + 1, j) = -1.0;
      b(2 * j + 1) = 0.0;
    }
    for (int k = 0; k < cuts; ++k) {
      Vec a(n);
      double norm = 0.0;
      do {
        for (int j = 0; j < n; ++j) a(j) = rng.uniform(-1.0, 1.0);
        norm = a.norm();
      } while (norm < 1e-3);
      a /= norm;
      const double margin = rng.uniform(0.05, 0.4);
      A.row(2 * n + k) = a.transpose();
      b(2 * n + k) = -(a.dot(anchor) + margin);
    }
    HPolytope P{A, b};

    const LPResult fp = feasible_point(P);
    if (fp.status != LPStatus::optimal || fp.objective < 1e-3) continue;
    const Vec C = fp.x;

    VertexSet vs = enumerate_vertices(P);
    if (vs.vertices.size() < static_cast<size_t>(n) + 1) continue;
    double R = 0.0;
    for (const Vec& v : vs.vertices) R = std::max(R, (v - C).norm());
    if (R < 1e-3) continue;

    Vec C0(n);
    for (int j = 0; j < n; ++j) C0(j) = rng.uniform(-0.25, 1.25);
    if ((C0 - C).norm() < 1e-3) continue;

    RandomInstance inst;
    inst.P = std::move(P);
    inst.frame = CircumscribedFrame{C, R, C0, 3.0 * R};
    inst.vertices = std::move(vs);
    return inst;
  }
}

}  // namespace testutil
