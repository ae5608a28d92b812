#ifndef QAPBNB_NB_SOLVER_HPP_
#define QAPBNB_NB_SOLVER_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>

#include "qapbnb/common.hpp"
#include "qapbnb/dnn.hpp"

namespace qapbnb {

struct NbConfig {
  double eps = 1e-5;
  int max_iter = 2000;
  double feas_tol_factor = 1e-8;  // feas_tol = factor * (1 + ||Q_lambda||_F)
  bool conservative_trace = false;  // use 1 + |F^c||L^c| instead of 1 + |F^c|
  bool integral = false;            // instance data integral: ceil-based prune test
  int first_split_iters = 25;       // dual-split refinements on the first certificate
  int split_iters = 4;              // refinements on warm-started certificates
  int primal_steps = 2;             // ADMM sweeps per iteration
  int stall_iters = 60;             // exit when no bound progress for this many iterations
  // per-iteration instrumentation: (k, lb, ub, certificate residual)
  std::function<void(int, double, double, double)> trace;
};

enum class NbStop { Converged, PruneByBound, MustBranch, IterLimit };

struct NbResult {
  double lb = -kInf;  // certified, unscaled
  double ub = kInf;   // unscaled value of the best certified primal iterate
  double y = 0.0;     // dual scalar (scaled units) of the best certificate
  Matrix X_hat;       // approximate primal (shared with branching rule P)
  Matrix Y1_hat;      // dual split of the best certificate (scaled units)
  Matrix Y2_hat;
  double primal_violation = kInf;
  NbStop stop_reason = NbStop::IterLimit;
  int iterations = 0;
  double scale = 1.0;
};

struct CertifiedLb {
  double lb = -kInf;         // unscaled
  double lb_scaled = -kInf;  // y + (1 + rho) * tau
  double tau = 0.0;
  Matrix Y1;
  Matrix Y2;
};

namespace detail {

inline int trace_factor(const LagrangianDnn& dnn, const NbConfig& cfg) {
  return 1 + (cfg.conservative_trace ? dnn.dim - 1 : dnn.dim_free);
}

// Small slack protecting certified bounds against eigenvalue roundoff.
inline double lb_guard(double v) { return 1e-8 * (1.0 + std::abs(v)); }

// Projection onto K2 with the (0,0) entry pinned at 1 (the tied groups
// do not involve the corner, so pinning stays a metric projection).
inline Matrix project_k2_unit(const Matrix& X) {
  Matrix Y = project_k2(X);
  Y(0, 0) = 1.0;
  return Y;
}

inline double k2_unit_violation(const Matrix& X) { return (X - project_k2_unit(X)).norm(); }

}  // namespace detail

/// Dual certificate at a fixed y.  Splits G = Q_lambda - H*y into
/// Y1 + Y2 with Y2 in K2*, refining the split by alternating metric
/// projections, then corrects by the most negative eigenvalue of Y1:
///   lb = y + (1 + |F^c|) * min{0, lambda_min(Y1)}.
/// The identity Q_lambda - H*y - Y1 - Y2 = 0 holds exactly by
/// construction (Y1 is computed as G - Y2).  Y2 starts at zero: the
/// penalty part of G is nearly PSD and belongs in Y1, so the one-shot
/// Moreau split is a far worse starting point than none at all.
inline CertifiedLb certified_lb(const LagrangianDnn& dnn, double y,
                                const Matrix* warm_y2 = nullptr, int refine_iters = 25,
                                const NbConfig& cfg = NbConfig{}) {
  Matrix G = dnn.Q_lambda;
  G(0, 0) -= y;

  Matrix Y2 = warm_y2 ? *warm_y2 : Matrix::Zero(dnn.dim, dnn.dim).eval();
  for (int j = 0; j < refine_iters; ++j) {
    Matrix Y1p = project_psd(G - Y2);
    Y2 = project_k2_dual(G - Y1p);
  }
  CertifiedLb out;
  out.Y1 = G - Y2;
  out.Y2 = std::move(Y2);
  out.tau = std::min(0.0, min_eigenvalue(out.Y1));
  out.lb_scaled = y + detail::trace_factor(dnn, cfg) * out.tau;
  out.lb = dnn.scale * out.lb_scaled - detail::lb_guard(dnn.scale * out.lb_scaled);
  return out;
}

/// Primal iterate for  min <Q_lambda, X>  over  K1 ∩ K2, X00 = 1,
/// advanced by a two-block ADMM splitting: X lives in the PSD cone,
/// Z in K2 with unit corner, W is the scaled dual.
struct PrimalState {
  Matrix X;
  Matrix Z;
  Matrix W;
  double beta = 1.0;
  double obj_scaled = kInf;  // <Q_lambda, X>
  double violation = kInf;   // Frobenius distance of X to K2 with X00 = 1
  double split_residual = kInf;  // ||X - Z||_F
  int steps = 0;
};

inline Matrix uniform_barycenter(int dim, int free_per_row) {
  Vector x(dim);
  x(0) = 1.0;
  for (int a = 1; a < dim; ++a) x(a) = 1.0 / free_per_row;
  return x * x.transpose();
}

inline PrimalState primal_init(const LagrangianDnn& dnn) {
  PrimalState st;
  st.Z = detail::project_k2_unit(uniform_barycenter(dnn.dim, std::max(1, dnn.dim_free)));
  st.X = project_psd(st.Z);
  st.W = Matrix::Zero(dnn.dim, dnn.dim);
  st.beta = std::max(1.0, dnn.Q_lambda.norm() / dnn.dim);
  st.violation = detail::k2_unit_violation(st.X);
  st.obj_scaled = dnn.Q_lambda.cwiseProduct(st.X).sum();
  return st;
}

/// One ADMM sweep with residual-balancing penalty adaptation.
inline void primal_step(const LagrangianDnn& dnn, PrimalState& st) {
  st.X = project_psd(st.Z - st.W);
  Matrix Z_old = std::move(st.Z);
  st.Z = detail::project_k2_unit(st.X + st.W - dnn.Q_lambda / st.beta);
  st.W += st.X - st.Z;

  st.split_residual = (st.X - st.Z).norm();
  const double dual_res = st.beta * (st.Z - Z_old).norm();
  ++st.steps;
  if (st.steps % 20 == 0) {
    if (st.split_residual > 10.0 * dual_res) {
      st.beta *= 2.0;
      st.W *= 0.5;
    } else if (dual_res > 10.0 * st.split_residual) {
      st.beta *= 0.5;
      st.W *= 2.0;
    }
  }
  st.violation = detail::k2_unit_violation(st.X);
  st.obj_scaled = dnn.Q_lambda.cwiseProduct(st.X).sum();
}

/// The bracketing lower-bound solver.  Maintains a shrinking interval
/// [lb, ub] around the dual optimum y*: lb from running-max certified
/// bounds, ub from y values whose certificates stay infeasible after
/// refinement (plus any certified primal value).  The returned lb is
/// always certified; ub drives only the stopping rules, so an
/// over-eager infeasibility call costs tree size, never soundness.
inline NbResult nb_solve(const LagrangianDnn& dnn, double incumbent, const NbConfig& cfg,
                         std::optional<double> y_seed_unscaled = std::nullopt,
                         std::optional<double> lb_seed_unscaled = std::nullopt) {
  NbResult res;
  res.scale = dnn.scale;
  const double feas_tol = cfg.feas_tol_factor * (1.0 + dnn.Q_lambda.norm());
  const double rho = detail::trace_factor(dnn, cfg);

  PrimalState pr = primal_init(dnn);

  // initial dual scalar: objective at the uniform barycenter (the
  // penalty vanishes there), an upper estimate of the dual optimum
  double y = y_seed_unscaled
                 ? *y_seed_unscaled / dnn.scale
                 : dnn.Q_lambda.cwiseProduct(uniform_barycenter(dnn.dim, std::max(1, dnn.dim_free)))
                       .sum();

  // a bound inherited from the parent node is a valid bracket bottom
  // for the child's dual optimum (the child relaxation only tightens)
  double lb_s = lb_seed_unscaled && std::isfinite(*lb_seed_unscaled)
                    ? *lb_seed_unscaled / dnn.scale
                    : -kInf;  // best certified lb, scaled
  double y_up = kInf;    // bracket top in y-space (smallest y deemed infeasible)
  double prim_s = kInf;  // best certified primal value, scaled
  double step_up = std::max(1.0, std::abs(y));
  Matrix warm_y2;
  bool have_warm = false;
  int last_progress = 0;

  auto ub_scaled = [&] { return std::min(prim_s, y_up); };
  auto finish = [&](NbStop why, int k) {
    res.stop_reason = why;
    res.iterations = k;
    res.X_hat = pr.X;
    res.primal_violation = pr.violation;
    if (std::isfinite(ub_scaled())) res.ub = dnn.scale * ub_scaled();
    return res;
  };

  for (int k = 1; k <= cfg.max_iter; ++k) {
    const double tau_tol = cfg.eps * std::max(1.0, std::abs(y)) / rho;
    CertifiedLb cert = certified_lb(dnn, y, have_warm ? &warm_y2 : nullptr,
                                    have_warm ? cfg.split_iters : cfg.first_split_iters, cfg);
    warm_y2 = cert.Y2;
    have_warm = true;
    if (cert.tau < -tau_tol && cert.tau > -16.0 * tau_tol) {
      // borderline: spend extra refinements before calling y infeasible
      cert = certified_lb(dnn, y, &warm_y2, cfg.first_split_iters, cfg);
      warm_y2 = cert.Y2;
    }
    if (cert.lb > res.lb) {
      res.lb = cert.lb;
      res.y = y;
      res.Y1_hat = cert.Y1;
      res.Y2_hat = cert.Y2;
      lb_s = std::max(lb_s, cert.lb_scaled);
      last_progress = k;
    }

    for (int s = 0; s < cfg.primal_steps; ++s) primal_step(dnn, pr);
    if (pr.violation <= feas_tol && pr.obj_scaled < prim_s) {
      prim_s = pr.obj_scaled;
      last_progress = k;
    }

    // bracket update from the certificate's feasibility verdict
    double y_next;
    if (cert.tau >= -tau_tol) {
      y_next = std::isfinite(y_up) ? 0.5 * (y + y_up) : y + step_up;
      step_up *= 2.0;
    } else {
      if (y < y_up - 1e-15 * std::max(1.0, std::abs(y))) {
        y_up = y;
        last_progress = k;
      }
      y_next = std::isfinite(lb_s) ? 0.5 * (std::max(lb_s, y - 4.0 * step_up) + y) : y - step_up;
      if (!std::isfinite(lb_s)) step_up *= 2.0;
    }

    // stopping criteria
    const double lb_u = res.lb;
    const double ub_u = std::isfinite(ub_scaled()) ? dnn.scale * ub_scaled() : kInf;
    if (cfg.trace) {
      Matrix G = dnn.Q_lambda;
      G(0, 0) -= y;
      const double resid = (G - cert.Y1 - cert.Y2).norm() / (1.0 + dnn.Q_lambda.norm());
      cfg.trace(k, lb_u, ub_u, resid);
    }
    if (std::isfinite(incumbent)) {
      double prune_lb = cfg.integral ? std::ceil(lb_u) : lb_u;
      if (incumbent <= prune_lb) return finish(NbStop::PruneByBound, k);
      if (ub_u < incumbent) return finish(NbStop::MustBranch, k);
    }
    if (std::isfinite(ub_u) && std::isfinite(lb_u) &&
        std::abs(ub_u - lb_u) < cfg.eps * std::max({std::abs(lb_u), std::abs(ub_u), 1.0}))
      return finish(NbStop::Converged, k);
    if (k - last_progress >= cfg.stall_iters) return finish(NbStop::IterLimit, k);

    if (std::isfinite(lb_s)) y_next = std::max(y_next, lb_s);
    if (std::isfinite(y_up)) y_next = std::min(y_next, y_up);
    y = y_next;
  }
  return finish(NbStop::IterLimit, cfg.max_iter);
}

}  // namespace qapbnb

#endif  // QAPBNB_NB_SOLVER_HPP_
