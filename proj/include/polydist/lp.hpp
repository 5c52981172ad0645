#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "geometry.hpp"

namespace polydist {

enum class LPStatus { optimal, infeasible, unbounded };

struct LPResult {
  LPStatus status = LPStatus::infeasible;
  Vec x;               // primal point in the caller's variable space
  double objective = 0.0;
};

namespace detail {

// Dense two-phase tableau simplex on standard form
//   min c.z  s.t.  E z = f, z >= 0,
// with Bland's rule (lowest-index entering and leaving ties), which excludes
// cycling. Rows are sign-normalized so f >= 0 before the artificial phase.
class StandardSimplex {
 public:
  StandardSimplex(Mat E, Vec f, Vec c) : E_(std::move(E)), f_(std::move(f)), c_(std::move(c)) {}

  LPStatus solve(Vec& z_out, double& obj_out) {
    const Eigen::Index m = E_.rows(), n = E_.cols();
    for (Eigen::Index i = 0; i < m; ++i)
      if (f_(i) < 0.0) { E_.row(i) *= -1.0; f_(i) *= -1.0; }

    // Tableau over [real vars | artificials | rhs].
    T_.resize(m, n + m + 1);
    T_.leftCols(n) = E_;
    T_.middleCols(n, m) = Mat::Identity(m, m);
    T_.col(n + m) = f_;
    basis_.resize(m);
    std::iota(basis_.begin(), basis_.end(), static_cast<int>(n));

    // Phase 1: minimize the artificial sum.
    Vec cost1 = Vec::Zero(n + m);
    cost1.segment(n, m).setOnes();
    if (!run_phase(cost1, n + m)) return LPStatus::unbounded;  // cannot happen: phase 1 bounded below by 0
    if (phase_objective(cost1) > 1e-7 * (1.0 + f_.lpNorm<Eigen::Infinity>()))
      return LPStatus::infeasible;
    pivot_artificials_out(n);

    // Phase 2 ignores artificial columns entirely.
    Vec cost2 = Vec::Zero(n + m);
    cost2.head(n) = c_;
    if (!run_phase(cost2, n)) return LPStatus::unbounded;

    z_out = Vec::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i)
      if (basis_[i] < n) z_out(basis_[i]) = T_(i, n + m);
    obj_out = c_.dot(z_out);
    return LPStatus::optimal;
  }

 private:
  static constexpr double kPivotTol = 1e-11;
  static constexpr double kCostTol = 1e-9;

  double phase_objective(const Vec& cost) const {
    double v = 0.0;
    for (size_t i = 0; i < basis_.size(); ++i) v += cost(basis_[i]) * T_(i, T_.cols() - 1);
    return v;
  }

  // Reduced cost of column j under `cost` given the current basis.
  double reduced_cost(const Vec& cost, Eigen::Index j) const {
    double rc = cost(j);
    for (Eigen::Index i = 0; i < T_.rows(); ++i) rc -= cost(basis_[i]) * T_(i, j);
    return rc;
  }

  bool run_phase(const Vec& cost, Eigen::Index usable_cols) {
    const Eigen::Index m = T_.rows(), rhs = T_.cols() - 1;
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < usable_cols; ++j) {
        if (is_basic(j)) continue;
        if (reduced_cost(cost, j) < -kCostTol) { enter = j; break; }  // Bland: first improving
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (T_(i, enter) > kPivotTol) {
          const double ratio = T_(i, rhs) / T_(i, enter);
          if (ratio < best_ratio - 1e-15 ||
              (ratio < best_ratio + 1e-15 && (leave < 0 || basis_[i] < basis_[leave])))
            { best_ratio = ratio; leave = i; }
        }
      }
      if (leave < 0) return false;  // improving ray
      pivot(leave, enter);
    }
  }

  bool is_basic(Eigen::Index j) const {
    return std::find(basis_.begin(), basis_.end(), static_cast<int>(j)) != basis_.end();
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    T_.row(row) /= T_(row, col);
    for (Eigen::Index i = 0; i < T_.rows(); ++i)
      if (i != row && std::abs(T_(i, col)) > 0.0) T_.row(i) -= T_(i, col) * T_.row(row);
    basis_[row] = static_cast<int>(col);
  }

  // After phase 1, swap any artificial still in the basis for a real column
  // (its row is degenerate); rows with no eligible pivot are redundant and
  // left in place with a zero rhs.
  void pivot_artificials_out(Eigen::Index n_real) {
    for (Eigen::Index i = 0; i < T_.rows(); ++i) {
      if (basis_[i] < n_real) continue;
      for (Eigen::Index j = 0; j < n_real; ++j) {
        if (!is_basic(j) && std::abs(T_(i, j)) > 1e-9) { pivot(i, j); break; }
      }
    }
  }

  Mat E_;
  Vec f_, c_;
  Mat T_;
  std::vector<int> basis_;
};

}  // namespace detail

// Maximize c.x over {x : G x <= h}, x free. Free variables are split as
// x = u - v; rows are scaled to unit infinity norm first.
inline LPResult lp_maximize_ineq(const Vec& c, const Mat& G, const Vec& h) {
  const Eigen::Index m = G.rows(), n = G.cols();
  Mat Gs = G;
  Vec hs = h;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = std::max(Gs.row(i).lpNorm<Eigen::Infinity>(), std::abs(hs(i)));
    if (s > 0.0) { Gs.row(i) /= s; hs(i) /= s; }
  }

  // variables z = [u, v, slack]
  Mat E(m, 2 * n + m);
  E.leftCols(n) = Gs;
  E.middleCols(n, n) = -Gs;
  E.rightCols(m) = Mat::Identity(m, m);
  Vec cz = Vec::Zero(2 * n + m);
  cz.head(n) = -c;
  cz.segment(n, n) = c;

  Vec z;
  double obj = 0.0;
  LPResult out;
  out.status = detail::StandardSimplex(E, hs, cz).solve(z, obj);
  if (out.status == LPStatus::optimal) {
    out.x = z.head(n) - z.segment(n, n);
    out.objective = c.dot(out.x);
  }
  return out;
}

inline LPResult lp_maximize(const Vec& c, const HPolytope& P) {
  require_dim(P.dim(), c.size(), "lp_maximize");
  return lp_maximize_ineq(c, P.A, -P.b);
}

// Point of maximum uniform slack: maximize t with A_i x + b_i <= -||A_i|| t.
// t is capped so a polytope with unbounded inscribed radius (a slab or a
// halfspace) still yields a finite point. objective = attained slack.
inline LPResult feasible_point(const HPolytope& P, double slack_cap = 1e6) {
  const Eigen::Index m = P.facets(), n = P.dim();
  Mat G(m + 1, n + 1);
  Vec h(m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    G.row(i).head(n) = P.A.row(i);
    G(i, n) = P.A.row(i).norm();
    h(i) = -P.b(i);
  }
  G.row(m).setZero();
  G(m, n) = 1.0;
  h(m) = slack_cap;

  Vec c = Vec::Zero(n + 1);
  c(n) = 1.0;
  LPResult lifted = lp_maximize_ineq(c, G, h);
  LPResult out;
  out.status = lifted.status;
  if (lifted.status == LPStatus::optimal) {
    out.x = lifted.x.head(n);
    out.objective = lifted.x(n);  // attained slack
    if (out.objective < -1e-9) out.status = LPStatus::infeasible;
  }
  return out;
}

struct HullStatus {
  bool inside = false;
  Vec lambda;      // convex coefficients when inside
  Vec direction;   // unit separating direction when outside
  double margin = 0.0;  // d.C0 - max_k d.C_k when outside (positive)
};

// Exact membership of C0 in conv(centers) by LP feasibility on
// {lambda >= 0, sum lambda = 1, sum lambda C_k = C0}; on the outside branch a
// second LP recovers a separating direction with box-normalized coefficients.
inline HullStatus hull_membership_lp(const std::vector<Vec>& centers, const Vec& C0) {
  if (centers.empty()) throw std::invalid_argument("hull_membership_lp: no centers");
  const Eigen::Index n = C0.size(), m = static_cast<Eigen::Index>(centers.size());
  Mat E(n + 1, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    require_dim(n, centers[k].size(), "hull_membership_lp");
    E.col(k).head(n) = centers[k];
    E(n, k) = 1.0;
  }
  Vec f(n + 1);
  f.head(n) = C0;
  f(n) = 1.0;
  // equilibrate rows
  for (Eigen::Index i = 0; i < n + 1; ++i) {
    const double s = std::max(E.row(i).lpNorm<Eigen::Infinity>(), std::abs(f(i)));
    if (s > 0.0) { E.row(i) /= s; f(i) /= s; }
  }

  HullStatus st;
  Vec lambda;
  double obj = 0.0;
  if (detail::StandardSimplex(E, f, Vec::Zero(m)).solve(lambda, obj) == LPStatus::optimal) {
    st.inside = true;
    st.lambda = lambda;
    return st;
  }

  // Separation: maximize d.C0 - t subject to d.C_k <= t, |d_j| <= 1.
  Mat G(m + 2 * n, n + 1);
  Vec h = Vec::Zero(m + 2 * n);
  for (Eigen::Index k = 0; k < m; ++k) {
    G.row(k).head(n) = centers[k];
    G(k, n) = -1.0;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    G.row(m + 2 * j).setZero();
    G(m + 2 * j, j) = 1.0;
    h(m + 2 * j) = 1.0;
    G.row(m + 2 * j + 1).setZero();
    G(m + 2 * j + 1, j) = -1.0;
    h(m + 2 * j + 1) = 1.0;
  }
  Vec c = Vec::Zero(n + 1);
  c.head(n) = C0;
  c(n) = -1.0;
  LPResult sep = lp_maximize_ineq(c, G, h);
  st.inside = false;
  if (sep.status == LPStatus::optimal && sep.x.head(n).norm() > 0.0) {
    st.direction = sep.x.head(n).normalized();
    double far = -std::numeric_limits<double>::infinity();
    for (const Vec& ck : centers) far = std::max(far, st.direction.dot(ck));
    st.margin = st.direction.dot(C0) - far;
  }
  return st;
}

}  // namespace polydist
