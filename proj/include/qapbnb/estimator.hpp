#ifndef QAPBNB_ESTIMATOR_HPP_
#define QAPBNB_ESTIMATOR_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "qapbnb/engine.hpp"

namespace qapbnb {

/// Per-depth sample sizes; an explicit per_depth entry wins, otherwise
/// s_r = min(available, max(min_size, fraction * available)).
struct SamplePlan {
  double fraction = 0.05;
  int min_size = 30;
  std::vector<std::uint64_t> per_depth;  // optional; index = depth

  std::uint64_t size_at(int depth, std::uint64_t available) const {
    std::uint64_t want;
    if (static_cast<std::size_t>(depth) < per_depth.size() && per_depth[depth] > 0) {
      want = per_depth[depth];
    } else {
      want = std::max<std::uint64_t>(static_cast<std::uint64_t>(min_size),
                                     static_cast<std::uint64_t>(fraction * static_cast<double>(available)));
    }
    return std::min(want, available);  // oversized plans are clamped, not fatal
  }

  static SamplePlan full() {
    SamplePlan p;
    p.fraction = 1.0;
    return p;
  }
};

struct EstimateReport {
  Rule rule = Rule::D;
  std::vector<double> m_hat;           // per-depth estimates, index 0..n
  std::vector<std::uint64_t> s;        // sample sizes used per depth
  std::vector<std::uint64_t> t;        // survivor counts per depth
  double total_hat = 0.0;
  std::uint64_t seed = 0;
  double incumbent = kInf;
};

/// Depth-by-depth sampling estimate of the enumeration tree size for a
/// fixed branching rule and a fixed incumbent: sample generated nodes
/// without replacement, bound them, count survivors, branch survivors,
/// and extrapolate m-hat through the survivor-fraction recursion.
inline EstimateReport estimate(const QapInstance& inst, Rule rule, const SamplePlan& plan,
                               std::uint64_t seed, std::optional<double> incumbent_init,
                               EngineConfig base = EngineConfig{}) {
  base.rule = rule;
  base.freeze_incumbent = true;
  base.observer = nullptr;

  SubQap root0 = build_q0(inst);
  const bool integral = inst.integral();
  double zeta_hat;
  if (incumbent_init) {
    zeta_hat = *incumbent_init;
  } else {
    zeta_hat = heuristic_solution(inst, root0).first;
  }

  EstimateReport rep;
  rep.rule = rule;
  rep.seed = seed;
  rep.incumbent = zeta_hat;
  rep.m_hat.assign(static_cast<std::size_t>(inst.n) + 1, 0.0);
  rep.s.assign(rep.m_hat.size(), 0);
  rep.t.assign(rep.m_hat.size(), 0);
  rep.m_hat[0] = 1.0;

  std::mt19937_64 rng(seed);
  std::vector<Node> gen{Node{Assignment{inst.n, {}, {}}}};

  for (int r = 0; r < inst.n; ++r) {
    if (gen.empty()) break;
    if (inst.n - r <= base.leaf_size) break;  // these nodes solve by enumeration

    const std::uint64_t avail = gen.size();
    const std::uint64_t sr = plan.size_at(r, avail);
    std::vector<std::uint64_t> idx(avail);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::uint64_t i = 0; i < sr; ++i) {
      std::uniform_int_distribution<std::uint64_t> pick(i, avail - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(sr);
    std::sort(idx.begin(), idx.end());

    std::vector<Node> next;
    std::uint64_t tr = 0;
    for (std::uint64_t i : idx) {
      ProcessResult res = process_node(inst, root0, gen[i], zeta_hat, base, integral);
      if (res.kind != ProcessResult::Kind::Branched) continue;
      ++tr;
      for (auto& child : res.children) next.push_back(std::move(child));
    }
    rep.s[r] = sr;
    rep.t[r] = tr;
    rep.m_hat[r + 1] =
        sr > 0 ? rep.m_hat[r] * static_cast<double>(inst.n - r) * static_cast<double>(tr) /
                     static_cast<double>(sr)
               : 0.0;
    if (tr == 0) break;
    gen = std::move(next);
  }

  rep.total_hat = std::accumulate(rep.m_hat.begin(), rep.m_hat.end(), 0.0);
  return rep;
}

}  // namespace qapbnb

#endif  // QAPBNB_ESTIMATOR_HPP_
