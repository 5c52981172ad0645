#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "convex_solvers.hpp"
#include "geometry.hpp"
#include "lp.hpp"
#include "oracle.hpp"
#include "pipeline.hpp"

namespace polydist {

// Subset-sum SSP(S, T) as a farthest-point instance: over the box-with-slab
// polytope P = [0,1]^n ∩ {beta S·x <= beta T}, the squared distance from
// C0 = (1 - beta S)/2 satisfies ||x - C0||^2 - ||C0||^2 = x·(x-1) + beta S·x,
// which for binary x collapses to beta S·x. The maximum over P reaches
// beta T + ||C0||^2 exactly when some subset hits T.
struct SSPInstance {
  std::vector<long long> S;
  long long T = 0;
  double beta = 1.0;
  HPolytope P;
  Vec C0;
  double threshold_sq = 0.0;
  CircumscribedFrame frame;  // default frame; solvers may ladder over others
};

inline SSPInstance build_instance(const std::vector<long long>& S, long long T,
                                  double beta = 0.0) {
  if (S.empty()) throw std::invalid_argument("build_instance: empty item list");
  long long s_max = 0;
  for (long long s : S) {
    if (s <= 0) throw std::invalid_argument("build_instance: items must be positive");
    s_max = std::max(s_max, s);
  }
  if (T < 0) throw std::invalid_argument("build_instance: negative target");
  if (beta == 0.0) beta = 1.0 / static_cast<double>(s_max);
  if (!(beta > 0.0)) throw std::invalid_argument("build_instance: beta must be positive");

  const Eigen::Index n = static_cast<Eigen::Index>(S.size());
  SSPInstance inst;
  inst.S = S;
  inst.T = T;
  inst.beta = beta;

  Mat A = Mat::Zero(2 * n + 1, n);
  Vec b(2 * n + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    A(2 * j, j) = 1.0;        // x_j <= 1
    b(2 * j) = -1.0;
    A(2 * j + 1, j) = -1.0;   // x_j >= 0
    b(2 * j + 1) = 0.0;
  }
  for (Eigen::Index j = 0; j < n; ++j)
    A(2 * n, j) = beta * static_cast<double>(S[static_cast<size_t>(j)]);
  b(2 * n) = -beta * static_cast<double>(T);
  inst.P = HPolytope{A, b};

  inst.C0 = Vec(n);
  for (Eigen::Index j = 0; j < n; ++j)
    inst.C0(j) = 0.5 * (1.0 - beta * static_cast<double>(S[static_cast<size_t>(j)]));
  inst.threshold_sq = beta * static_cast<double>(T) + inst.C0.squaredNorm();

  // Default frame: the box midpoint when comfortably interior, otherwise the
  // max-slack point; enclosing radius sqrt(n) always covers the unit box.
  Vec mid = Vec::Constant(n, 0.5);
  Vec C = mid;
  if (facet_violation(inst.P, mid) > -1e-6) {
    const LPResult fp = feasible_point(inst.P);
    if (fp.status != LPStatus::optimal)
      throw std::invalid_argument("build_instance: empty polytope");
    C = fp.x;
  }
  const double R_circ = std::sqrt(static_cast<double>(n));
  inst.frame = CircumscribedFrame{C, R_circ, inst.C0, 3.0 * R_circ};
  return inst;
}

enum class SSPOutcome { certified_no, achieved_yes, inconclusive };

struct SSPDecision {
  SSPOutcome outcome = SSPOutcome::inconclusive;
  std::optional<std::vector<int>> subset;  // indicator vector for achieved_yes
};

// Reads a bounds report as a one-sided decision certificate. The upper bound
// refutes when it clears the threshold; the lower-bound point affirms when it
// rounds to a binary vector whose exact integer sum hits T.
inline SSPDecision interpret(const SSPInstance& inst, const BoundsReport& report) {
  SSPDecision out;
  if (report.x_lb.size() == inst.P.dim()) {
    std::vector<int> bits(inst.S.size());
    bool integral = true;
    for (Eigen::Index j = 0; j < report.x_lb.size(); ++j) {
      const double r = std::round(report.x_lb(j));
      if (std::abs(report.x_lb(j) - r) > 1e-6 || (r != 0.0 && r != 1.0)) {
        integral = false;
        break;
      }
      bits[static_cast<size_t>(j)] = static_cast<int>(r);
    }
    if (integral) {
      long long sum = 0;
      for (size_t j = 0; j < bits.size(); ++j)
        if (bits[j]) sum += inst.S[j];
      if (sum == inst.T) {
        out.outcome = SSPOutcome::achieved_yes;
        out.subset = bits;
        return out;
      }
    }
  }
  const double upper_sq = report.upper_bound * report.upper_bound;
  const double tol = 1e-6 * std::max(1.0, inst.threshold_sq);
  if (!std::isnan(report.upper_bound) && upper_sq < inst.threshold_sq - tol)
    out.outcome = SSPOutcome::certified_no;
  return out;
}

struct SSPRung {
  std::string frame_kind;
  double rho = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  bool on_sphere = false;
  bool indeterminate = false;
  SSPOutcome outcome = SSPOutcome::inconclusive;
};

struct SSPReport {
  SSPOutcome outcome = SSPOutcome::inconclusive;
  std::optional<std::vector<int>> subset;
  double best_upper_sq = std::numeric_limits<double>::infinity();
  double threshold_sq = 0.0;
  std::vector<SSPRung> rungs;
};

namespace detail {

// Minimum enclosing ball of the vertex set by convex minimization of
// max_k ||x - v_k||^2, then an exact max-distance radius so the frame
// certifiably contains the polytope (the hull of those vertices).
inline std::optional<CircumscribedFrame> meb_frame(const SSPInstance& inst,
                                                   const SolverConfig& cfg) {
  if (inst.P.dim() > 12) return std::nullopt;
  VertexSet vs;
  try {
    vs = enumerate_vertices(inst.P);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (vs.vertices.empty()) return std::nullopt;

  std::vector<ConvexTerm> terms;
  terms.reserve(vs.vertices.size());
  for (const Vec& v : vs.vertices) terms.push_back(ConvexTerm::ball(v, 0.0));
  SolverConfig meb_cfg = cfg;
  meb_cfg.tol_obj = std::min(cfg.tol_obj, 1e-9);
  const MinimizeResult res = minimize_piecewise_max(terms, meb_cfg);

  Vec C = res.x;
  // Keep the frame center strictly interior so the facet cover is defined.
  if (facet_violation(inst.P, C) > -1e-9) {
    const LPResult fp = feasible_point(inst.P);
    if (fp.status != LPStatus::optimal) return std::nullopt;
    C = 0.999 * C + 0.001 * fp.x;
    if (facet_violation(inst.P, C) > -1e-12) C = 0.9 * C + 0.1 * fp.x;
    if (facet_violation(inst.P, C) > -1e-12) return std::nullopt;
  }
  double R = 0.0;
  for (const Vec& v : vs.vertices) R = std::max(R, (v - C).norm());
  R = R * (1.0 + 1e-12) + 1e-12;
  return CircumscribedFrame{C, R, inst.C0, 3.0 * R};
}

}  // namespace detail

// Decision driver: exact integer shortcuts, then a ladder of sound
// (frame, rho) runs — every rung's upper bound is valid, so the minimum is
// taken and any rung may affirm via its lower-bound point. `thorough` adds
// the minimum-enclosing-ball frame and a rho sweep; otherwise a single
// default rung runs.
inline SSPReport solve_ssp(const SSPInstance& inst, const SolveOptions& opts = {},
                           bool thorough = true) {
  SSPReport out;
  out.threshold_sq = inst.threshold_sq;

  long long total = 0;
  for (long long s : inst.S) total += s;
  if (inst.T == 0) {
    out.outcome = SSPOutcome::achieved_yes;
    out.subset = std::vector<int>(inst.S.size(), 0);
    return out;
  }
  if (inst.T > total) {
    out.outcome = SSPOutcome::certified_no;
    out.best_upper_sq = inst.beta * static_cast<double>(total) + inst.C0.squaredNorm();
    return out;
  }
  if (inst.T == total) {
    out.outcome = SSPOutcome::achieved_yes;
    out.subset = std::vector<int>(inst.S.size(), 1);
    return out;
  }

  std::vector<std::pair<std::string, CircumscribedFrame>> frames;
  if (thorough) {
    if (auto meb = detail::meb_frame(inst, opts.solver)) frames.emplace_back("meb", *meb);
  }
  frames.emplace_back("default", inst.frame);

  std::vector<double> rho_factors = thorough ? std::vector<double>{1.5, 3.0, 10.0}
                                             : std::vector<double>{3.0};
  for (const auto& [kind, base] : frames) {
    std::vector<double> rhos;
    for (double f : rho_factors) rhos.push_back(f * base.R_circ);
    if (thorough) {
      const double c = (base.C - base.C0).norm();
      if (0.9 * c > base.R_circ) rhos.push_back(0.9 * c);
    }
    for (double rho : rhos) {
      CircumscribedFrame fr = base;
      fr.rho = std::max(rho, base.R_circ * (1.0 + 1e-6));
      SSPRung rung;
      rung.frame_kind = kind;
      rung.rho = fr.rho;
      try {
        const BoundsReport rep = solve(inst.P, fr, opts);
        rung.upper = rep.upper_bound;
        rung.lower = rep.lower_bound;
        rung.on_sphere = rep.on_sphere;
        rung.indeterminate = rep.indeterminate;
        const SSPDecision dec = interpret(inst, rep);
        rung.outcome = dec.outcome;
        if (!std::isnan(rep.upper_bound))
          out.best_upper_sq = std::min(out.best_upper_sq, rep.upper_bound * rep.upper_bound);
        if (dec.outcome == SSPOutcome::achieved_yes) {
          out.outcome = SSPOutcome::achieved_yes;
          out.subset = dec.subset;
          out.rungs.push_back(rung);
          return out;
        }
      } catch (const std::exception&) {
        rung.indeterminate = true;
      }
      out.rungs.push_back(rung);
    }
  }
  const double tol = 1e-6 * std::max(1.0, inst.threshold_sq);
  if (out.best_upper_sq < inst.threshold_sq - tol) out.outcome = SSPOutcome::certified_no;
  return out;
}

}  // namespace polydist
