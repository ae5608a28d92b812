#ifndef QAPBNB_DNN_HPP_
#define QAPBNB_DNN_HPP_

#include <algorithm>
#include <utility>
#include <vector>

#include "qapbnb/common.hpp"
#include "qapbnb/model.hpp"

namespace qapbnb {

/// The assignment-sum rows of the relaxation: one vector per free
/// facility (its row sum minus x0) and per free location (column sum).
/// Every feasible binary completion is annihilated by each row.
struct ConstraintRows {
  std::vector<Vector> rows;
};

inline ConstraintRows build_constraint_rows(const Assignment& asg) {
  CellIndex cells = CellIndex::of(asg);
  if (cells.mf() == 0) throw ModelError("build_constraint_rows: no free cells");
  const int d = cells.dim();
  ConstraintRows cr;
  for (int fp = 0; fp < cells.mf(); ++fp) {
    Vector v = Vector::Zero(d);
    v(0) = -1.0;
    for (int lp = 0; lp < cells.ml(); ++lp) v(cells.index_of_pos(fp, lp)) = 1.0;
    cr.rows.push_back(std::move(v));
  }
  for (int lp = 0; lp < cells.ml(); ++lp) {
    Vector v = Vector::Zero(d);
    v(0) = -1.0;
    for (int fp = 0; fp < cells.mf(); ++fp) v(cells.index_of_pos(fp, lp)) = 1.0;
    cr.rows.push_back(std::move(v));
  }
  return cr;
}

/// The Lagrangian matrix Q_lambda = Q + lambda * sum of rank-1 penalty
/// terms, held in objective-scaled units.  Bounds computed against
/// Q_lambda multiply back by `scale` to apply to the original objective.
struct LagrangianDnn {
  Matrix Q_lambda;   // scaled
  Matrix Q_scaled;   // Q(F,L) / scale
  double lambda = 0.0;
  double scale = 1.0;  // unscaled value = scale * scaled value
  int dim_free = 0;    // |F^c|, the trace-bound parameter
  int dim = 0;         // 1 + |F^c||L^c|
};

inline LagrangianDnn build_q_lambda(const SubQap& sub, double lambda) {
  if (!(lambda > 0.0)) throw ModelError("build_q_lambda: lambda must be positive");
  LagrangianDnn dnn;
  dnn.lambda = lambda;
  dnn.dim = sub.cells.dim();
  dnn.dim_free = sub.free_size();
  dnn.scale = std::max(1.0, sub.Q.norm() / static_cast<double>(dnn.dim));
  dnn.Q_scaled = sub.Q / dnn.scale;
  Matrix penalty = Matrix::Zero(dnn.dim, dnn.dim);
  for (const Vector& c : build_constraint_rows(sub.asg).rows) penalty.noalias() += c * c.transpose();
  dnn.Q_lambda = dnn.Q_scaled + lambda * penalty;
  return dnn;
}

/// Frobenius-nearest positive semidefinite matrix: eigen-decompose and
/// clip negative eigenvalues at zero.
inline Matrix project_psd(const Matrix& X) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(X);
  if (es.info() != Eigen::Success) throw EigenFailure("project_psd: eigensolver failed");
  Vector ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

inline double min_eigenvalue(const Matrix& X) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(X, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenFailure("min_eigenvalue: eigensolver failed");
  return es.eigenvalues()(0);
}

/// Frobenius-nearest point of K2 = { X >= 0 entrywise, X(0,a) = X(a,a) }.
/// Each cell's tied triple (X0a, Xa0, Xaa) collapses to
/// t = max(0, (2*X0a + Xaa)/3); every untied entry is clipped at zero.
inline Matrix project_k2(const Matrix& X) {
  const int d = static_cast<int>(X.rows());
  Matrix Y = X.cwiseMax(0.0);
  for (int a = 1; a < d; ++a) {
    double t = std::max(0.0, (X(0, a) + X(a, 0) + X(a, a)) / 3.0);
    Y(0, a) = Y(a, 0) = Y(a, a) = t;
  }
  return Y;
}

/// Moreau complement of project_k2; negating the result gives a member
/// of the dual cone K2*.
inline Matrix project_k2_polar(const Matrix& X) { return X - project_k2(X); }

/// Metric projection onto the dual cone K2*.
inline Matrix project_k2_dual(const Matrix& X) { return X + project_k2(-X); }

}  // namespace qapbnb

#endif  // QAPBNB_DNN_HPP_
