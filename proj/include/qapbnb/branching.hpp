#ifndef QAPBNB_BRANCHING_HPP_
#define QAPBNB_BRANCHING_HPP_

#include <algorithm>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qapbnb/common.hpp"
#include "qapbnb/dnn.hpp"
#include "qapbnb/model.hpp"
#include "qapbnb/nb_solver.hpp"

namespace qapbnb {

enum class Rule { M, P, D };

inline char rule_letter(Rule r) { return r == Rule::M ? 'M' : r == Rule::P ? 'P' : 'D'; }

inline Rule rule_from_letter(char c) {
  switch (c) {
    case 'M': case 'm': return Rule::M;
    case 'P': case 'p': return Rule::P;
    case 'D': case 'd': return Rule::D;
  }
  throw ModelError("unknown branching rule");
}

/// Child evaluation table phi(f,l) over the free grid, plus the row and
/// column means that drive side selection.  Rule D also carries
/// per-child prune flags (phi is a certified child lower bound there).
struct PhiTable {
  Rule rule = Rule::M;
  Matrix values;     // |F^c| x |L^c|
  Vector row_means;  // phi-bar(f, .)
  Vector col_means;  // phi-bar(., l)
  Matrix prunes;     // 0/1, rule D only (empty otherwise)

  void finalize_means() {
    row_means = values.rowwise().mean();
    col_means = values.colwise().mean().transpose();
  }
};

struct BranchDecision {
  BranchSide side = BranchSide::Facility;
  int fixed = -1;  // the selected facility or location
  std::vector<Assignment> children;
  std::vector<char> child_prunes;  // aligned with children; empty unless rule D
};

/// Rule M: evaluate each child's objective at the uniform substitution
/// point (x0 = 1, every free cell 1/(n-r-1)).  Computed from the parent
/// matrix with inclusion-exclusion over the deleted row/column, so no
/// child matrix is materialized.
inline PhiTable phi_mean(const SubQap& node) {
  const CellIndex& cells = node.cells;
  const int mf = cells.mf(), ml = cells.ml();
  if (node.free_size() < 2) throw ModelError("phi_mean: need at least two free pairs");
  const Matrix& Q = node.Q;
  const int d = cells.dim();
  const double w = 1.0 / (node.free_size() - 1);

  // per-row sums over cell columns, grouped by facility and by location
  Vector cell_sum = Vector::Zero(d);        // sum over all cells beta of Q(alpha, beta)
  Matrix fac_sum = Matrix::Zero(d, mf);     // ... restricted to cells of one facility
  Matrix loc_sum = Matrix::Zero(d, ml);
  for (int b = 1; b < d; ++b) {
    const int fp = cells.fpos_of(b), lp = cells.lpos_of(b);
    for (int a = 0; a < d; ++a) {
      cell_sum(a) += Q(a, b);
      fac_sum(a, fp) += Q(a, b);
      loc_sum(a, lp) += Q(a, b);
    }
  }
  const double total = cell_sum.tail(d - 1).sum();

  PhiTable table;
  table.rule = Rule::M;
  table.values.resize(mf, ml);
  std::vector<int> deleted;
  for (int fp = 0; fp < mf; ++fp)
    for (int lp = 0; lp < ml; ++lp) {
      const int c = cells.index_of_pos(fp, lp);
      const double q00 = Q(0, 0) + 2.0 * Q(0, c) + Q(c, c);
      const double s1 = (cell_sum(0) - fac_sum(0, fp) - loc_sum(0, lp) + Q(0, c)) +
                        (cell_sum(c) - fac_sum(c, fp) - loc_sum(c, lp) + Q(c, c));
      deleted.clear();
      for (int lp2 = 0; lp2 < ml; ++lp2) deleted.push_back(cells.index_of_pos(fp, lp2));
      for (int fp2 = 0; fp2 < mf; ++fp2)
        if (fp2 != fp) deleted.push_back(cells.index_of_pos(fp2, lp));
      double del_rows = 0.0, del_pairs = 0.0;
      for (int a : deleted) {
        del_rows += cell_sum(a);
        for (int b : deleted) del_pairs += Q(a, b);
      }
      const double s2 = total - 2.0 * del_rows + del_pairs;
      table.values(fp, lp) = q00 + 2.0 * w * s1 + w * w * s2;
    }
  table.finalize_means();
  return table;
}

namespace detail {

// Sparse symmetric constraint functional: <R, X> = sum w * X(i,j).
struct SparseConstraint {
  std::vector<std::tuple<int, int, double>> entries;
  double rhs = 0.0;
};

// Least-squares projector onto the affine manifold every feasible child
// relaxation iterate must satisfy: X00 = 1, the assignment-row
// quadratic identities, and the diagonal/border ties.  The constraint
// pattern depends only on the child's free-grid shape, so one projector
// serves every child of a node.
class ManifoldProjector {
 public:
  ManifoldProjector(int mf, int ml) {
    const int dc = 1 + mf * ml;
    auto cell = [mf](int fp, int lp) { return 1 + lp * mf + fp; };

    constraints_.push_back({{{0, 0, 1.0}}, 1.0});
    for (int a = 1; a < dc; ++a)
      constraints_.push_back({{{0, a, 0.5}, {a, 0, 0.5}, {a, a, -1.0}}, 0.0});
    auto add_outer = [&](const std::vector<std::pair<int, double>>& c) {
      SparseConstraint sc;
      for (auto [i, wi] : c)
        for (auto [j, wj] : c) sc.entries.emplace_back(i, j, wi * wj);
      constraints_.push_back(std::move(sc));
    };
    for (int fp = 0; fp < mf; ++fp) {
      std::vector<std::pair<int, double>> c{{0, -1.0}};
      for (int lp = 0; lp < ml; ++lp) c.emplace_back(cell(fp, lp), 1.0);
      add_outer(c);
    }
    for (int lp = 0; lp < ml; ++lp) {
      std::vector<std::pair<int, double>> c{{0, -1.0}};
      for (int fp = 0; fp < mf; ++fp) c.emplace_back(cell(fp, lp), 1.0);
      add_outer(c);
    }

    const int k = static_cast<int>(constraints_.size());
    Matrix gram(k, k);
    std::vector<std::unordered_map<long, double>> maps(k);
    for (int t = 0; t < k; ++t)
      for (auto& [i, j, v] : constraints_[t].entries) maps[t][long(i) * dc + j] += v;
    for (int s = 0; s < k; ++s)
      for (int t = s; t < k; ++t) {
        double dot = 0.0;
        const auto& small = maps[s].size() <= maps[t].size() ? maps[s] : maps[t];
        const auto& big = maps[s].size() <= maps[t].size() ? maps[t] : maps[s];
        for (auto& [key, v] : small) {
          auto it = big.find(key);
          if (it != big.end()) dot += v * it->second;
        }
        gram(s, t) = gram(t, s) = dot;
      }
    solver_.setThreshold(1e-10);
    solver_.compute(gram);
  }

  Matrix project(const Matrix& X) const {
    const int k = static_cast<int>(constraints_.size());
    Vector resid(k);
    for (int t = 0; t < k; ++t) {
      double dot = 0.0;
      for (auto& [i, j, v] : constraints_[t].entries) dot += v * X(i, j);
      resid(t) = dot - constraints_[t].rhs;
    }
    Vector mu = solver_.solve(resid);
    Matrix Y = X;
    for (int t = 0; t < k; ++t)
      for (auto& [i, j, v] : constraints_[t].entries) Y(i, j) -= mu(t) * v;
    return Y;
  }

 private:
  std::vector<SparseConstraint> constraints_;
  Eigen::CompleteOrthogonalDecomposition<Matrix> solver_;
};

// Congruence fold of a reduced-space symmetric matrix when the cell
// (f,l) becomes fixed: its row/column is absorbed into index 0 and the
// clashing row/column block is dropped.
inline Matrix fold_reduced_matrix(const CellIndex& cells, const Matrix& M, int f, int l,
                                  CellIndex* child_cells_out = nullptr) {
  const int c = cells.index_of(f, l);
  CellIndex child;
  for (int x : cells.free_f)
    if (x != f) child.free_f.push_back(x);
  for (int x : cells.free_l)
    if (x != l) child.free_l.push_back(x);
  const int dc = child.dim();
  std::vector<int> keep(dc);
  keep[0] = 0;
  for (int b = 1; b < dc; ++b)
    keep[b] = cells.index_of(child.facility_of(b), child.location_of(b));
  Matrix Mc(dc, dc);
  Mc(0, 0) = M(0, 0) + 2.0 * M(0, c) + M(c, c);
  for (int b = 1; b < dc; ++b) {
    Mc(0, b) = Mc(b, 0) = M(0, keep[b]) + M(c, keep[b]);
    for (int b2 = 1; b2 <= b; ++b2) Mc(b, b2) = Mc(b2, b) = M(keep[b], keep[b2]);
  }
  if (child_cells_out) *child_cells_out = std::move(child);
  return Mc;
}

// Row/column deletion restriction of X to a child's index set.
inline Matrix restrict_matrix(const CellIndex& cells, const Matrix& X, int f, int l) {
  CellIndex child;
  for (int x : cells.free_f)
    if (x != f) child.free_f.push_back(x);
  for (int x : cells.free_l)
    if (x != l) child.free_l.push_back(x);
  const int dc = child.dim();
  std::vector<int> keep(dc);
  keep[0] = 0;
  for (int b = 1; b < dc; ++b)
    keep[b] = cells.index_of(child.facility_of(b), child.location_of(b));
  Matrix Y(dc, dc);
  for (int b = 0; b < dc; ++b)
    for (int b2 = 0; b2 < dc; ++b2) Y(b, b2) = X(keep[b], keep[b2]);
  return Y;
}

}  // namespace detail

/// Rule P: restrict the relaxation iterate to each child's index set,
/// project onto the child's affine manifold, and price the child matrix
/// at the projected point.
inline PhiTable phi_primal(const SubQap& node, const Matrix& X_hat) {
  const CellIndex& cells = node.cells;
  const int mf = cells.mf(), ml = cells.ml();
  if (node.free_size() < 2) throw ModelError("phi_primal: need at least two free pairs");
  detail::ManifoldProjector projector(mf - 1, ml - 1);

  PhiTable table;
  table.rule = Rule::P;
  table.values.resize(mf, ml);
  for (int fp = 0; fp < mf; ++fp)
    for (int lp = 0; lp < ml; ++lp) {
      const int f = cells.free_f[fp], l = cells.free_l[lp];
      Matrix Xc = detail::restrict_matrix(cells, X_hat, f, l);
      Matrix Xp = projector.project(Xc);
      Matrix Qc = detail::fold_reduced_matrix(cells, node.Q, f, l);
      table.values(fp, lp) = Qc.cwiseProduct(Xp).sum();
    }
  table.finalize_means();
  return table;
}

/// Rule D: transform the terminal dual certificate by the child
/// congruence; phi(f,l) = y + (n-r) * tau(f,l) is itself a certified
/// child lower bound, so children at or above the incumbent are flagged
/// for immediate pruning.
inline PhiTable phi_dual(const SubQap& node, const LagrangianDnn& dnn, const NbResult& nb,
                         double zeta_hat, bool integral) {
  const CellIndex& cells = node.cells;
  const int mf = cells.mf(), ml = cells.ml();
  if (node.free_size() < 2) throw ModelError("phi_dual: need at least two free pairs");
  const int m = node.free_size();

  PhiTable table;
  table.rule = Rule::D;
  table.values.resize(mf, ml);
  table.prunes = Matrix::Zero(mf, ml);
  for (int fp = 0; fp < mf; ++fp)
    for (int lp = 0; lp < ml; ++lp) {
      const int f = cells.free_f[fp], l = cells.free_l[lp];
      Matrix Y1c = detail::fold_reduced_matrix(cells, nb.Y1_hat, f, l);
      double tau = std::min(0.0, min_eigenvalue(Y1c));
      double phi_scaled = nb.y + m * tau;
      double phi = dnn.scale * phi_scaled;
      phi -= detail::lb_guard(phi);
      table.values(fp, lp) = phi;
      if (std::isfinite(zeta_hat) && zeta_hat <= (integral ? std::ceil(phi) : phi))
        table.prunes(fp, lp) = 1.0;
    }
  table.finalize_means();
  return table;
}

/// Side selection: the axis whose best mean is largest wins, with the
/// facility side favored on ties; within an axis ties break toward the
/// smallest free index.
inline BranchDecision select(const PhiTable& table, const Assignment& asg) {
  if (table.values.size() == 0) throw ModelError("select: empty table");
  const auto& rm = table.row_means;
  const auto& cm = table.col_means;
  int best_row = 0, best_col = 0;
  for (int i = 1; i < rm.size(); ++i)
    if (rm(i) > rm(best_row)) best_row = i;
  for (int j = 1; j < cm.size(); ++j)
    if (cm(j) > cm(best_col)) best_col = j;

  CellIndex cells = CellIndex::of(asg);
  BranchDecision dec;
  if (rm(best_row) >= cm(best_col)) {
    dec.side = BranchSide::Facility;
    dec.fixed = cells.free_f[best_row];
    dec.children = children(asg, BranchSide::Facility, dec.fixed);
    if (table.prunes.size())
      for (int lp = 0; lp < cm.size(); ++lp)
        dec.child_prunes.push_back(table.prunes(best_row, lp) != 0.0);
  } else {
    dec.side = BranchSide::Location;
    dec.fixed = cells.free_l[best_col];
    dec.children = children(asg, BranchSide::Location, dec.fixed);
    if (table.prunes.size())
      for (int fp = 0; fp < rm.size(); ++fp)
        dec.child_prunes.push_back(table.prunes(fp, best_col) != 0.0);
  }
  return dec;
}

}  // namespace qapbnb

#endif  // QAPBNB_BRANCHING_HPP_
