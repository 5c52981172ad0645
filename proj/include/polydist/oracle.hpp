#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"

namespace polydist {

struct VertexSet {
  std::vector<Vec> vertices;                       // lexicographically sorted
  std::vector<std::vector<Eigen::Index>> bases;    // facet tuple that produced each vertex
};

namespace detail {

inline bool lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    if (a(j) < b(j)) return true;
    if (a(j) > b(j)) return false;
  }
  return false;
}

}  // namespace detail

// Every basic solution: for each n-subset of facets with invertible normal
// matrix solve A_S x = -b_S, keep the feasible ones, deduplicate. Exhaustive
// by design; the budget guards against combinatorial blowups.
inline VertexSet enumerate_vertices(const HPolytope& P, long budget = 2000000) {
  const Eigen::Index n = P.dim();
  const Eigen::Index m = P.facets();
  if (n > 12) throw std::invalid_argument("enumerate_vertices: dimension too large");
  if (m < n) return {};

  double combos = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) combos *= static_cast<double>(m - i) / static_cast<double>(i + 1);
  if (combos > static_cast<double>(budget))
    throw std::runtime_error("enumerate_vertices: facet-combination budget exceeded");

  VertexSet out;
  std::vector<Eigen::Index> idx(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;

  Mat sub(n, n);
  Vec rhs(n);
  while (true) {
    for (Eigen::Index i = 0; i < n; ++i) {
      sub.row(i) = P.A.row(idx[static_cast<size_t>(i)]);
      rhs(i) = -P.b(idx[static_cast<size_t>(i)]);
    }
    Eigen::FullPivLU<Mat> lu(sub);
    if (lu.isInvertible()) {
      const Vec x = lu.solve(rhs);
      if (facet_violation(P, x) <= 1e-9) {
        bool fresh = true;
        for (const Vec& v : out.vertices)
          if ((v - x).lpNorm<Eigen::Infinity>() <= 1e-8) { fresh = false; break; }
        if (fresh) {
          out.vertices.push_back(x);
          out.bases.push_back(idx);
        }
      }
    }
    // next combination in lexicographic index order
    Eigen::Index i = n - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == m - n + i) --i;
    if (i < 0) break;
    ++idx[static_cast<size_t>(i)];
    for (Eigen::Index j = i + 1; j < n; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }

  std::vector<size_t> order(out.vertices.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return detail::lex_less(out.vertices[a], out.vertices[b]);
  });
  VertexSet sorted;
  sorted.vertices.reserve(out.vertices.size());
  sorted.bases.reserve(out.bases.size());
  for (size_t i : order) {
    sorted.vertices.push_back(out.vertices[i]);
    sorted.bases.push_back(out.bases[i]);
  }
  return sorted;
}

// Exact farthest vertex from C0; maximizers of convex distance sit at
// vertices. Ties break to the lexicographically smallest vertex.
inline std::pair<Vec, double> brute_maxdist(const HPolytope& P, const Vec& C0,
                                            long budget = 2000000) {
  require_dim(P.dim(), C0.size(), "brute_maxdist");
  const VertexSet vs = enumerate_vertices(P, budget);
  if (vs.vertices.empty()) throw std::invalid_argument("brute_maxdist: no vertices found");
  const Vec* best = &vs.vertices.front();
  double best_sq = (vs.vertices.front() - C0).squaredNorm();
  for (const Vec& v : vs.vertices) {
    const double d = (v - C0).squaredNorm();
    if (d > best_sq) { best_sq = d; best = &v; }  // lex order already sorted; ties keep first
  }
  return {*best, std::sqrt(best_sq)};
}

// Farthest corner of [0,1]^n from a point inside it, componentwise:
// take 1 when the coordinate is <= 1/2 (ties to 1), else 0.
inline std::pair<Vec, double> hypercube_farthest(const Vec& C0) {
  const Eigen::Index n = C0.size();
  Vec v(n);
  double d_sq = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(C0(j) >= 0.0 && C0(j) <= 1.0))
      throw std::invalid_argument("hypercube_farthest: point outside the unit box");
    v(j) = C0(j) <= 0.5 ? 1.0 : 0.0;
    const double far = std::max(C0(j), 1.0 - C0(j));
    d_sq += far * far;
  }
  return {v, std::sqrt(d_sq)};
}

// Exhaustive subset-sum decision.
inline bool ssp_brute(const std::vector<long long>& S, long long T) {
  if (S.size() > 24) throw std::invalid_argument("ssp_brute: too many items");
  const std::uint32_t limit = static_cast<std::uint32_t>(1u) << S.size();
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    long long sum = 0;
    for (size_t j = 0; j < S.size(); ++j)
      if (mask & (1u << j)) sum += S[j];
    if (sum == T) return true;
  }
  return false;
}

}  // namespace polydist
