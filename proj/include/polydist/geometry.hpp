#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polydist {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Feasible set {x : A.row(i) * x + b(i) <= 0 for all i}. Normals are kept
// exactly as supplied (not unit length); operations normalize where needed.
struct HPolytope {
  Mat A;  // m x n facet normals, outward
  Vec b;  // m offsets

  HPolytope() = default;
  HPolytope(Mat normals, Vec offsets) : A(std::move(normals)), b(std::move(offsets)) {
    if (A.rows() != b.size()) throw std::invalid_argument("HPolytope: A rows != b size");
    for (Eigen::Index i = 0; i < A.rows(); ++i)
      if (A.row(i).norm() <= 0.0)
        throw std::invalid_argument("HPolytope: facet " + std::to_string(i) + " has zero normal");
  }

  Eigen::Index facets() const { return A.rows(); }
  Eigen::Index dim() const { return A.cols(); }
};

struct Ball {
  Vec center;
  double radius = 0.0;

  Ball() = default;
  Ball(Vec c, double r) : center(std::move(c)), radius(r) {
    if (!(radius > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
  }
  double radius_sq() const { return radius * radius; }
};

// Q = intersection of closed balls; membership is h(x) <= 0 with
// h(x) = max_k ||x - C_k||^2 - r_k^2.
struct BallIntersection {
  std::vector<Ball> balls;

  BallIntersection() = default;
  explicit BallIntersection(std::vector<Ball> bs) : balls(std::move(bs)) {
    if (balls.empty()) throw std::invalid_argument("BallIntersection: needs at least one ball");
  }
  Eigen::Index dim() const { return balls.front().center.size(); }
};

// The fixed data of one solver run: a ball B(C, R_circ) containing the
// polytope, the query point C0 of the squared-distance objective
// g(x) = ||x - C0||^2, and the sphere radius rho on which surrogate ball
// centers are placed.
struct CircumscribedFrame {
  Vec C;
  double R_circ = 0.0;
  Vec C0;
  double rho = 0.0;

  CircumscribedFrame() = default;
  CircumscribedFrame(Vec c, double r_circ, Vec c0, double rho_)
      : C(std::move(c)), R_circ(r_circ), C0(std::move(c0)), rho(rho_) {
    validate();
  }

  void validate() const {
    if (C.size() != C0.size()) throw std::invalid_argument("frame: C and C0 dimension mismatch");
    if (!(R_circ > 0.0)) throw std::invalid_argument("frame: R_circ must be positive");
    if (!(rho > R_circ)) throw std::invalid_argument("frame: rho must exceed R_circ");
    if ((C - C0).norm() == 0.0) throw std::invalid_argument("frame: C0 must differ from C");
  }
};

inline void require_dim(Eigen::Index expected, Eigen::Index got, const char* what) {
  if (expected != got)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(expected) + " vs " + std::to_string(got) + ")");
}

inline double eval_h(const BallIntersection& Q, const Vec& x) {
  require_dim(Q.dim(), x.size(), "eval_h");
  double best = -std::numeric_limits<double>::infinity();
  for (const Ball& ball : Q.balls) {
    const double v = (x - ball.center).squaredNorm() - ball.radius_sq();
    if (v > best) best = v;
  }
  return best;
}

inline double eval_g(const CircumscribedFrame& frame, const Vec& x) {
  require_dim(frame.C0.size(), x.size(), "eval_g");
  return (x - frame.C0).squaredNorm();
}

inline bool polytope_contains(const HPolytope& P, const Vec& x, double tol = 0.0) {
  require_dim(P.dim(), x.size(), "polytope_contains");
  if (tol < 0.0) throw std::invalid_argument("polytope_contains: tol must be >= 0");
  for (Eigen::Index i = 0; i < P.facets(); ++i)
    if (P.A.row(i).dot(x) + P.b(i) > tol) return false;
  return true;
}

// Largest signed violation max_i (A_i x + b_i) / ||A_i||; <= 0 inside.
inline double facet_violation(const HPolytope& P, const Vec& x) {
  require_dim(P.dim(), x.size(), "facet_violation");
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < P.facets(); ++i) {
    const double v = (P.A.row(i).dot(x) + P.b(i)) / P.A.row(i).norm();
    if (v > worst) worst = v;
  }
  return worst;
}

}  // namespace polydist
