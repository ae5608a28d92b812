#ifndef QAPBNB_UPPER_BOUND_HPP_
#define QAPBNB_UPPER_BOUND_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "qapbnb/common.hpp"
#include "qapbnb/model.hpp"

namespace qapbnb {

/// First-column extract of the relaxation iterate arranged on the free
/// cell grid; approximately doubly stochastic near the optimum.
struct StochasticExtract {
  Matrix U_hat;  // clipped at zero
  Vector row_sums;
  Vector col_sums;
};

inline StochasticExtract extract_assignment_matrix(const Matrix& X_hat, const Assignment& asg) {
  CellIndex cells = CellIndex::of(asg);
  if (X_hat.rows() != cells.dim() || X_hat.cols() != cells.dim())
    throw ModelError("extract_assignment_matrix: index mismatch");
  StochasticExtract ext;
  ext.U_hat.resize(cells.mf(), cells.ml());
  for (int lp = 0; lp < cells.ml(); ++lp)
    for (int fp = 0; fp < cells.mf(); ++fp)
      ext.U_hat(fp, lp) = std::max(0.0, X_hat(cells.index_of_pos(fp, lp), 0));
  ext.row_sums = ext.U_hat.rowwise().sum();
  ext.col_sums = ext.U_hat.colwise().sum().transpose();
  return ext;
}

namespace detail {

// Shortest augmenting path LAP solver with row/column potentials.
inline double lap_value(const Matrix& cost, std::vector<int>& row_of_col) {
  const int m = static_cast<int>(cost.rows());
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, m), way(m + 1, 0);  // p[j]: row matched to column j
  for (int i = 0; i < m; ++i) {
    p[m] = i;
    int j0 = m;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 0; j < m; ++j) {
        if (used[j]) continue;
        double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != m);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != m);
  }
  row_of_col.assign(p.begin(), p.end() - 1);
  double total = 0.0;
  for (int j = 0; j < m; ++j) total += cost(row_of_col[j], j);
  return total;
}

}  // namespace detail

/// Minimum-cost linear assignment; returns (perm, value) with
/// perm[i] the column assigned to row i.  Among optimal assignments the
/// lexicographically smallest permutation is returned.
inline std::pair<std::vector<int>, double> hungarian(const Matrix& cost) {
  const int m = static_cast<int>(cost.rows());
  if (m < 1 || cost.cols() != m) throw ModelError("hungarian: cost matrix must be square");
  if (!cost.allFinite()) throw ModelError("hungarian: non-finite cost entry");

  std::vector<int> row_of_col;
  const double best = detail::lap_value(cost, row_of_col);
  const double tol = 1e-9 * (1.0 + std::abs(best));

  // lexicographic refinement: fix rows in order, keeping optimality
  std::vector<int> perm(m, -1);
  std::vector<char> col_used(m, 0);
  double prefix = 0.0;
  for (int i = 0; i < m; ++i) {
    const int rest = m - i - 1;
    for (int j = 0; j < m; ++j) {
      if (col_used[j]) continue;
      double completion = 0.0;
      if (rest > 0) {
        Matrix sub(rest, rest);
        int rr = 0;
        for (int r = i + 1; r < m; ++r, ++rr) {
          int cc = 0;
          for (int c = 0; c < m; ++c) {
            if (col_used[c] || c == j) continue;
            sub(rr, cc++) = cost(r, c);
          }
        }
        std::vector<int> tmp;
        completion = detail::lap_value(sub, tmp);
      }
      if (prefix + cost(i, j) + completion <= best + tol) {
        perm[i] = j;
        col_used[j] = 1;
        prefix += cost(i, j);
        break;
      }
    }
  }
  return {perm, best};
}

/// Permutation matrix closest in Frobenius norm to U_hat: a linear
/// assignment with cost -U_hat (the constant terms drop).
inline std::vector<int> nearest_permutation(const StochasticExtract& ext) {
  return hungarian(-ext.U_hat).first;
}

/// Greedy row-argmax rounding, kept for comparison with the LAP route.
inline std::vector<int> simple_rounding(const StochasticExtract& ext) {
  const int m = static_cast<int>(ext.U_hat.rows());
  std::vector<std::tuple<double, int, int>> cells;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) cells.emplace_back(-ext.U_hat(i, j), i, j);
  std::sort(cells.begin(), cells.end());
  std::vector<int> perm(m, -1);
  std::vector<char> col_used(m, 0);
  for (auto& [negval, i, j] : cells)
    if (perm[i] < 0 && !col_used[j]) {
      perm[i] = j;
      col_used[j] = 1;
    }
  for (int i = 0, j = 0; i < m; ++i) {
    if (perm[i] >= 0) continue;
    while (col_used[j]) ++j;
    perm[i] = j;
    col_used[j] = 1;
  }
  return perm;
}

namespace detail {

// Objective change from swapping the locations of facilities a and b.
inline double swap_delta(const QapInstance& inst, const std::vector<int>& perm, int a, int b) {
  const int pa = perm[a], pb = perm[b];
  double d = inst.C(a, pb) + inst.C(b, pa) - inst.C(a, pa) - inst.C(b, pb);
  d += inst.A(a, a) * (inst.B(pb, pb) - inst.B(pa, pa)) +
       inst.B(pa, pa) * inst.A(b, b) - inst.B(pb, pb) * inst.A(b, b);
  for (int k = 0; k < inst.n; ++k) {
    if (k == a || k == b) continue;
    d += 2.0 * (inst.A(a, k) - inst.A(b, k)) * (inst.B(pb, perm[k]) - inst.B(pa, perm[k]));
  }
  return d;
}

}  // namespace detail

/// Best-improvement pairwise-swap descent.  Only positions marked
/// movable participate; an empty mask means all positions.
inline std::pair<std::vector<int>, double> local_improve(const QapInstance& inst,
                                                         std::vector<int> perm,
                                                         const std::vector<int>& movable = {}) {
  if (!is_permutation(perm, inst.n)) throw ModelError("local_improve: invalid permutation");
  std::vector<int> pos(movable);
  if (pos.empty()) {
    pos.resize(inst.n);
    std::iota(pos.begin(), pos.end(), 0);
  }
  for (;;) {
    double best_delta = -1e-9;
    int best_a = -1, best_b = -1;
    for (std::size_t x = 0; x < pos.size(); ++x)
      for (std::size_t y = x + 1; y < pos.size(); ++y) {
        double d = detail::swap_delta(inst, perm, pos[x], pos[y]);
        if (d < best_delta) {
          best_delta = d;
          best_a = pos[x];
          best_b = pos[y];
        }
      }
    if (best_a < 0) break;
    std::swap(perm[best_a], perm[best_b]);
  }
  double value = objective(inst, perm);
  return {std::move(perm), value};
}

/// Feasible completion of a node from the relaxation iterate: extract
/// the assignment matrix, round to the nearest permutation, merge with
/// the fixed pairs, and run swap descent on the free part.
inline std::pair<double, std::vector<int>> upper_bound(const QapInstance& inst,
                                                       const SubQap& node, const Matrix& X_hat,
                                                       bool use_hungarian = true) {
  const Assignment& asg = node.asg;
  std::vector<int> perm(inst.n, -1);
  for (int p = 0; p < asg.depth(); ++p) perm[asg.facilities[p]] = asg.locations[p];
  if (node.free_size() > 0) {
    StochasticExtract ext = extract_assignment_matrix(X_hat, asg);
    std::vector<int> sigma = use_hungarian ? nearest_permutation(ext) : simple_rounding(ext);
    const auto& ff = node.cells.free_f;
    const auto& fl = node.cells.free_l;
    for (int p = 0; p < static_cast<int>(ff.size()); ++p) perm[ff[p]] = fl[sigma[p]];
    auto [improved, value] = local_improve(inst, std::move(perm), ff);
    return {value, std::move(improved)};
  }
  return {objective(inst, perm), std::move(perm)};
}

}  // namespace qapbnb

#endif  // QAPBNB_UPPER_BOUND_HPP_
