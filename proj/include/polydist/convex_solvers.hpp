#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "geometry.hpp"
#include "level_polytope.hpp"

namespace polydist {

struct SolverConfig {
  double tol_obj = 1e-7;
  double tol_feas = 1e-9;
  int max_iters = 0;         // 0: scale with dimension
  double initial_radius = 0.0;  // 0: derive from a quadratic term when present

  int iters_or_default(Eigen::Index n) const {
    if (max_iters > 0) return max_iters;
    const double nn = static_cast<double>(n);
    return static_cast<int>(4000.0 + 140.0 * nn * std::sqrt(nn));
  }
};

// One piece of a pointwise max: f(x) = quad * x.x + lin.x + constant with
// quad in {0, 1}; covers both ball constraints and affine halfspaces.
struct ConvexTerm {
  double quad = 0.0;
  Vec lin;
  double constant = 0.0;

  double value(const Vec& x) const { return quad * x.squaredNorm() + lin.dot(x) + constant; }
  Vec gradient(const Vec& x) const { return 2.0 * quad * x + lin; }

  // ||x - c||^2 - r^2
  static ConvexTerm ball(const Vec& c, double radius_sq) {
    return ConvexTerm{1.0, -2.0 * c, c.squaredNorm() - radius_sq};
  }
  static ConvexTerm affine(const Vec& a, double b) { return ConvexTerm{0.0, a, b}; }
};

inline double eval_max(const std::vector<ConvexTerm>& terms, const Vec& x, int* which = nullptr) {
  double best = -std::numeric_limits<double>::infinity();
  int idx = -1;
  for (size_t k = 0; k < terms.size(); ++k) {
    const double v = terms[k].value(x);
    if (v > best) { best = v; idx = static_cast<int>(k); }  // ties keep the lowest index
  }
  if (which) *which = idx;
  return best;
}

enum class FeasStatus { feasible, infeasible, indeterminate };

struct MinimizeResult {
  Vec x;
  double value = 0.0;
  double lower_bound = -std::numeric_limits<double>::infinity();
  bool converged = false;
};

namespace detail {

// Shared ellipsoid descent on phi(x) = max_k term_k(x). In feasibility mode
// the run stops as soon as phi <= level or the certified minimum over the
// start ellipsoid exceeds level; in minimization mode `level` tracks the best
// value seen, which turns every step into a deep cut at the incumbent.
//
// Certificates used:
//   - per-iteration lower bound phi(c) - sqrt(g' Q g) (minimum of the
//     supporting linearization over the current ellipsoid), valid as long as
//     the start ellipsoid contains a minimizer;
//   - deep-cut depth alpha = (phi(c) - level) / sqrt(g' Q g); alpha >= 1
//     means the sublevel set misses the ellipsoid entirely.
struct EllipsoidRun {
  Vec x_best;
  double f_best = std::numeric_limits<double>::infinity();
  double lower_bound = -std::numeric_limits<double>::infinity();
  FeasStatus feas = FeasStatus::indeterminate;
  bool budget_exhausted = false;
};

inline EllipsoidRun ellipsoid_descend(const std::vector<ConvexTerm>& terms, const Vec& start,
                                      double start_radius, const SolverConfig& cfg,
                                      bool feasibility_mode) {
  const Eigen::Index n = start.size();
  const int iters = cfg.iters_or_default(n);
  Vec c = start;
  Mat Q = Mat::Identity(n, n) * (start_radius * start_radius);

  EllipsoidRun run;
  for (int it = 0; it < iters; ++it) {
    int which = -1;
    const double phi = eval_max(terms, c, &which);
    if (phi < run.f_best) { run.f_best = phi; run.x_best = c; }
    if (feasibility_mode && phi <= cfg.tol_feas) { run.feas = FeasStatus::feasible; return run; }

    const Vec g = terms[static_cast<size_t>(which)].gradient(c);
    const Vec Qg = Q * g;
    const double gQg = g.dot(Qg);
    if (!(gQg > 0.0)) {
      // Ellipsoid flattened along the subgradient: the linearization is
      // constant over it, so phi(c) bounds the minimum from below.
      run.lower_bound = std::max(run.lower_bound, phi);
      break;
    }
    const double width = std::sqrt(gQg);
    run.lower_bound = std::max(run.lower_bound, phi - width);

    const double level = feasibility_mode ? cfg.tol_feas : run.f_best;
    if (feasibility_mode && run.lower_bound > cfg.tol_feas) {
      run.feas = FeasStatus::infeasible;
      return run;
    }
    if (!feasibility_mode &&
        run.f_best - run.lower_bound <= cfg.tol_obj * std::max(1.0, std::abs(run.f_best)))
      break;

    double alpha = (phi - level) / width;
    alpha = std::clamp(alpha, 0.0, 1.0 - 1e-12);

    if (n == 1) {
      const double w = std::sqrt(Q(0, 0));
      const double shift = 0.5 * (1.0 + alpha) * w * (g(0) > 0 ? 1.0 : -1.0);
      c(0) -= shift;
      const double half = 0.5 * (1.0 - alpha) * w;
      Q(0, 0) = half * half;
      continue;
    }
    const double nn = static_cast<double>(n);
    const double tau = (1.0 + nn * alpha) / (nn + 1.0);
    const double delta = (nn * nn) * (1.0 - alpha * alpha) / (nn * nn - 1.0);
    const double sigma = 2.0 * (1.0 + nn * alpha) / ((nn + 1.0) * (1.0 + alpha));
    c -= (tau / width) * Qg;
    Q = delta * (Q - (sigma / gQg) * (Qg * Qg.transpose()));
    Q = 0.5 * (Q + Q.transpose()).eval();
  }
  run.budget_exhausted = true;
  if (feasibility_mode && run.f_best <= cfg.tol_feas) run.feas = FeasStatus::feasible;
  return run;
}

// Exact minimum over all of R^n of max(f_i, f_k) for two ball terms: the
// minimizer lies on the line through the centers, where both pieces are 1-d
// quadratics; the max is minimized at the equalizing point clamped between
// the individual minima. A positive value certifies the whole intersection
// empty without touching the ellipsoid.
inline double ball_pair_floor(const Ball& bi, const Ball& bk) {
  const double d = (bk.center - bi.center).norm();
  if (d <= 0.0) {
    const double r = std::min(bi.radius, bk.radius);
    return -r * r;
  }
  const double ri2 = bi.radius * bi.radius;
  const double rk2 = bk.radius * bk.radius;
  double s = (d * d + ri2 - rk2) / (2.0 * d);
  s = std::clamp(s, 0.0, d);
  const double fi = s * s - ri2;
  const double fk = (d - s) * (d - s) - rk2;
  return std::max(fi, fk);
}

// Exact minimum of an affine term over a single ball.
inline double ball_affine_floor(const Ball& bk, const Vec& a, double b) {
  return a.dot(bk.center) + b - a.norm() * bk.radius;
}

// Sound floor on min over R^n of max over all terms, from pairs: the max of
// any sub-collection's exact floor is a valid floor for the whole max.
inline double cheap_feasibility_floor(const BallIntersection& Q, const LevelPolytope& L) {
  double floor_val = -std::numeric_limits<double>::infinity();
  const size_t m = Q.balls.size();
  for (size_t i = 0; i < m; ++i)
    for (size_t k = i + 1; k < m; ++k)
      floor_val = std::max(floor_val, ball_pair_floor(Q.balls[i], Q.balls[k]));
  // Q sits inside every ball, so each ball's exact facet minimum is a valid
  // floor for the facet over Q; take the strongest one.
  for (Eigen::Index j = 0; j < L.base.facets(); ++j) {
    const Vec a = L.base.A.row(j);
    const double b = L.base.b(j);
    double best = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < m; ++k) best = std::max(best, ball_affine_floor(Q.balls[k], a, b));
    floor_val = std::max(floor_val, best);
  }
  return floor_val;
}

// Start ball certified to contain a minimizer of the max: any quadratic term
// k bounds it via ||x - c_k||^2 <= r_k^2-ish + phi(anchor); with no quadratic
// term the caller-provided radius is trusted.
inline std::pair<Vec, double> start_ball(const std::vector<ConvexTerm>& terms,
                                         const SolverConfig& cfg) {
  for (const ConvexTerm& t : terms) {
    if (t.quad > 0.0) {
      Vec center = -0.5 * t.lin;
      const double phi = eval_max(terms, center);
      const double own = t.value(center);  // = constant - ||center||^2 <= 0 part
      const double radius_sq = std::max(phi - own, 0.0) + 1e-12;
      return {center, std::sqrt(radius_sq) * (1.0 + 1e-9) + 1e-9};
    }
  }
  const double r = cfg.initial_radius > 0.0 ? cfg.initial_radius : 100.0;
  return {Vec(), r};
}

}  // namespace detail

inline MinimizeResult minimize_piecewise_max(const std::vector<ConvexTerm>& terms,
                                             const SolverConfig& cfg = {},
                                             std::optional<Vec> start = std::nullopt) {
  if (terms.empty()) throw std::invalid_argument("minimize_piecewise_max: no terms");
  Vec c;
  double r0 = 0.0;
  if (start) {
    c = *start;
    r0 = cfg.initial_radius > 0.0 ? cfg.initial_radius : 100.0;
  } else {
    auto [center, r] = detail::start_ball(terms, cfg);
    if (center.size() == 0) {
      // Affine-only terms carry no anchor of their own; trust the configured
      // bounding ball around the origin.
      Eigen::Index n = 0;
      for (const ConvexTerm& t : terms) n = std::max(n, t.lin.size());
      center = Vec::Zero(n);
    }
    c = center;
    r0 = r;
  }
  auto run = detail::ellipsoid_descend(terms, c, r0, cfg, /*feasibility_mode=*/false);
  MinimizeResult out;
  out.x = run.x_best;
  out.value = run.f_best;
  out.lower_bound = run.lower_bound;
  out.converged = !run.budget_exhausted ||
                  run.f_best - run.lower_bound <= cfg.tol_obj * std::max(1.0, std::abs(run.f_best));
  return out;
}

struct FeasibilityResult {
  FeasStatus status = FeasStatus::indeterminate;
  Vec point;        // witness when feasible
  double best_value = std::numeric_limits<double>::infinity();
};

// Feasibility of {x : h_Q(x) <= 0} intersected with a level polytope, decided
// by descending phi = max(ball terms, level facet values). Feasible iff the
// minimum dips to tol_feas; infeasible once the certified lower bound clears
// tol_feas; indeterminate only on budget exhaustion. `hints` are candidate
// witnesses checked by direct evaluation before any iterative work — callers
// doing parametric sweeps pass the previous witness.
inline FeasibilityResult intersection_feasible(const BallIntersection& Q, const LevelPolytope& L,
                                               const SolverConfig& cfg = {},
                                               const std::vector<Vec>& hints = {}) {
  require_dim(Q.dim(), L.base.dim(), "intersection_feasible");
  std::vector<ConvexTerm> terms;
  terms.reserve(Q.balls.size() + static_cast<size_t>(L.base.facets()));
  for (const Ball& ball : Q.balls) terms.push_back(ConvexTerm::ball(ball.center, ball.radius_sq()));
  for (Eigen::Index i = 0; i < L.base.facets(); ++i)
    terms.push_back(ConvexTerm::affine(L.base.A.row(i), L.base.b(i)));

  FeasibilityResult out;
  for (const Vec& h : hints) {
    if (h.size() != Q.dim()) continue;
    const double v = eval_max(terms, h);
    if (v <= cfg.tol_feas) {
      out.status = FeasStatus::feasible;
      out.point = h;
      out.best_value = v;
      return out;
    }
  }
  if (detail::cheap_feasibility_floor(Q, L) > cfg.tol_feas) {
    out.status = FeasStatus::infeasible;
    return out;
  }

  auto [center, r0] = detail::start_ball(terms, cfg);
  auto run = detail::ellipsoid_descend(terms, center, r0, cfg, /*feasibility_mode=*/true);
  out.status = run.feas;
  out.best_value = run.f_best;
  if (run.feas == FeasStatus::feasible) out.point = run.x_best;
  return out;
}

struct HullResult {
  bool inside = false;
  Vec lambda;
  Vec direction;
  double margin = 0.0;
  double residual = 0.0;  // ||sum lambda C_k - C0|| at the returned lambda
};

// Membership of C0 in conv(centers) by minimizing ||sum_k lambda_k C_k - C0||
// over the simplex with a Frank-Wolfe scheme (away steps added for linear
// convergence near faces). Each iterate yields a one-sided certificate: if
// the direction from the current hull point toward C0 separates C0 from every
// center by more than tol_feas, C0 is certifiably outside. Budget exhaustion
// without a certificate resolves to "inside" so callers keep iterating
// rather than acting on an unproven separation.
inline HullResult hull_membership(const std::vector<Vec>& centers, const Vec& C0,
                                  const SolverConfig& cfg = {}) {
  if (centers.empty()) throw std::invalid_argument("hull_membership: no centers");
  const Eigen::Index n = C0.size();
  const size_t m = centers.size();
  for (const Vec& ck : centers) require_dim(n, ck.size(), "hull_membership");

  size_t start = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < m; ++k) {
    const double d = (centers[k] - C0).squaredNorm();
    if (d < best_d) { best_d = d; start = k; }
  }
  Vec lambda = Vec::Zero(static_cast<Eigen::Index>(m));
  lambda(static_cast<Eigen::Index>(start)) = 1.0;
  Vec p = centers[start];

  const int iters = cfg.max_iters > 0 ? cfg.max_iters : static_cast<int>(200 * m + 5000);
  HullResult out;
  for (int it = 0; it < iters; ++it) {
    const Vec resid = p - C0;
    const double dist = resid.norm();
    if (dist <= cfg.tol_feas) {
      out.inside = true;
      out.lambda = lambda;
      out.residual = dist;
      return out;
    }
    const Vec d = -resid / dist;  // unit direction from p toward C0
    double far = -std::numeric_limits<double>::infinity();
    for (const Vec& ck : centers) far = std::max(far, d.dot(ck));
    const double margin = d.dot(C0) - far;
    if (margin > cfg.tol_feas) {
      out.inside = false;
      out.direction = d;
      out.margin = margin;
      out.lambda = lambda;
      out.residual = dist;
      return out;
    }

    size_t fw = 0, away = 0;
    double fw_score = std::numeric_limits<double>::infinity();
    double away_score = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < m; ++k) {
      const double grad_k = resid.dot(centers[k]);
      if (grad_k < fw_score) { fw_score = grad_k; fw = k; }
      if (lambda(static_cast<Eigen::Index>(k)) > 0.0 && grad_k > away_score) {
        away_score = grad_k;
        away = k;
      }
    }
    const double gain_fw = resid.dot(p - centers[fw]);
    const double gain_away = resid.dot(centers[away] - p);
    Vec step;
    double gamma_max = 0.0;
    bool is_away = gain_away > gain_fw;
    if (is_away) {
      step = p - centers[away];
      const double la = lambda(static_cast<Eigen::Index>(away));
      gamma_max = la >= 1.0 ? std::numeric_limits<double>::infinity() : la / (1.0 - la);
    } else {
      step = centers[fw] - p;
      gamma_max = 1.0;
    }
    const double denom = step.squaredNorm();
    if (denom <= 0.0) break;
    double gamma = std::clamp(-resid.dot(step) / denom, 0.0, gamma_max);
    if (gamma <= 0.0) break;
    if (is_away) {
      lambda *= (1.0 + gamma);
      lambda(static_cast<Eigen::Index>(away)) -= gamma;
      if (lambda(static_cast<Eigen::Index>(away)) < 1e-15)
        lambda(static_cast<Eigen::Index>(away)) = 0.0;
    } else {
      lambda *= (1.0 - gamma);
      lambda(static_cast<Eigen::Index>(fw)) += gamma;
    }
    lambda /= lambda.sum();
    p = Vec::Zero(n);
    for (size_t k = 0; k < m; ++k)
      if (lambda(static_cast<Eigen::Index>(k)) > 0.0)
        p += lambda(static_cast<Eigen::Index>(k)) * centers[k];
  }
  out.inside = true;  // undecided at tolerance; conservative for the caller
  out.lambda = lambda;
  out.residual = (p - C0).norm();
  return out;
}

struct MaxdistResult {
  FeasStatus status = FeasStatus::indeterminate;
  double R = 0.0;
  Vec y;
};

// Largest R with Q intersecting its own level polytope at R, by bisection;
// valid when C0 is outside the hull of the ball centers, where that largest R
// equals max over Q of ||x - C0||. Keeps the witness of the last feasible
// step; the bracket must straddle (R_lo feasible, R_hi infeasible).
inline MaxdistResult maxdist_outside_hull(const BallIntersection& Q,
                                          const CircumscribedFrame& frame, double R_lo,
                                          double R_hi, const SolverConfig& cfg = {}) {
  if (!(R_lo <= R_hi)) throw std::invalid_argument("maxdist_outside_hull: bad bracket order");
  std::vector<Vec> hints;
  auto feas_at = [&](double R) {
    auto res = intersection_feasible(Q, build_level_polytope(Q, frame, R), cfg, hints);
    if (res.status == FeasStatus::feasible) hints.assign(1, res.point);
    return res;
  };
  MaxdistResult out;
  const double tol = cfg.tol_obj;

  auto lo_probe = feas_at(R_lo);
  if (lo_probe.status == FeasStatus::indeterminate) return out;
  if (lo_probe.status == FeasStatus::infeasible)
    throw std::invalid_argument("maxdist_outside_hull: R_lo infeasible");
  Vec witness = lo_probe.point;

  if (R_hi - R_lo > tol * std::max(1.0, R_hi)) {
    auto hi_probe = feas_at(R_hi);
    if (hi_probe.status == FeasStatus::indeterminate) return out;
    if (hi_probe.status == FeasStatus::feasible)
      throw std::invalid_argument("maxdist_outside_hull: R_hi feasible");
    double lo = R_lo, hi = R_hi;
    while (hi - lo > tol * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      auto probe = feas_at(mid);
      if (probe.status == FeasStatus::indeterminate) return out;
      if (probe.status == FeasStatus::feasible) { lo = mid; witness = probe.point; }
      else hi = mid;
    }
    out.R = 0.5 * (lo + hi);
  } else {
    out.R = 0.5 * (R_lo + R_hi);
  }
  out.status = FeasStatus::feasible;
  out.y = witness;
  return out;
}

}  // namespace polydist
