#ifndef QAPBNB_ENGINE_HPP_
#define QAPBNB_ENGINE_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <queue>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qapbnb/branching.hpp"
#include "qapbnb/common.hpp"
#include "qapbnb/dnn.hpp"
#include "qapbnb/model.hpp"
#include "qapbnb/nb_solver.hpp"
#include "qapbnb/upper_bound.hpp"

namespace qapbnb {

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { VersionMismatch, DigestMismatch, Corrupt };
  CheckpointError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class DepthOutOfRange : public ModelError {
 public:
  explicit DepthOutOfRange(const std::string& what) : ModelError(what) {}
};

/// An open subproblem.  inherited_lb is the best lower bound known
/// before the node is processed (parent's certified bound, possibly
/// tightened by the dual branching evaluation); dual_seed carries the
/// parent's terminal dual scalar in original objective units.
struct Node {
  Assignment assignment;
  double inherited_lb = -kInf;
  std::optional<double> dual_seed;

  int depth() const { return assignment.depth(); }
};

enum class IncumbentInit { Heuristic, Value };

struct NodeObservation;  // forward

struct EngineConfig {
  Rule rule = Rule::D;
  int workers = 1;
  int leaf_size = 7;
  double lambda = 1e5;
  double eps = 1e-5;
  IncumbentInit incumbent_init = IncumbentInit::Heuristic;
  double incumbent_value = kInf;     // used when incumbent_init == Value
  bool freeze_incumbent = false;     // never tighten zeta-hat (estimation oracle mode)
  int warm_depth = 0;
  bool best_first = true;            // false: strict FIFO breadth-first
  std::string checkpoint_path;
  double checkpoint_interval_s = 1800.0;
  std::uint64_t node_budget = 0;     // 0: unlimited; else pause after this many processed
  double time_limit_s = 0.0;         // 0: unlimited
  int pool_target_factor = 4;        // open-pool size hint, informational
  std::function<void(const NodeObservation&)> observer;  // called per processed node
};

struct RunReport {
  double optimum = kInf;
  std::vector<int> perm;  // empty when no feasible completion was materialized
  std::uint64_t nodes_generated = 0;
  std::vector<std::uint64_t> nodes_per_depth;
  double wall_seconds = 0.0;
  Rule rule = Rule::D;
  int workers = 1;
  bool completed = true;  // false when paused by node_budget/time_limit
  double incumbent_final = kInf;
};

struct ProcessResult {
  enum class Kind { Pruned, Solved, Branched };
  Kind kind = Kind::Pruned;
  double value = kInf;        // Solved
  std::vector<int> perm;      // Solved
  double ub_value = kInf;     // Branched: heuristic completion value
  std::vector<int> ub_perm;
  double node_lb = -kInf;     // certified bound actually used
  std::vector<Node> children;      // Branched: all generated children
  std::vector<char> child_prunes;  // rule D flags, aligned; empty otherwise
};

/// Per-node instrumentation payload handed to EngineConfig::observer.
/// Pointers are valid only during the call; with workers > 1 the
/// observer runs concurrently from several threads.
struct NodeObservation {
  const Assignment* assignment = nullptr;
  const SubQap* sub = nullptr;         // null when pruned before reduction
  const NbResult* nb = nullptr;        // null for leaves and pre-pruned nodes
  const PhiTable* table = nullptr;     // null unless branched
  double zeta_hat = kInf;
};

namespace detail {

inline double prune_bound(double lb, bool integral) { return integral ? std::ceil(lb) : lb; }

// Exhaustive leaf enumeration over all completions of the free part;
// ties resolve to the lexicographically first permutation visited.
inline std::pair<double, std::vector<int>> enumerate_leaf(const QapInstance& inst,
                                                          const Assignment& asg) {
  std::vector<int> ff = asg.free_facilities();
  std::vector<int> fl = asg.free_locations();
  std::vector<int> base = asg.to_permutation();
  std::vector<int> best_perm;
  double best = kInf;
  std::vector<int> order(fl.size());
  std::iota(order.begin(), order.end(), 0);
  do {
    std::vector<int> perm = base;
    for (std::size_t p = 0; p < ff.size(); ++p) perm[ff[p]] = fl[order[p]];
    double v = objective(inst, perm);
    if (v < best) {
      best = v;
      best_perm = std::move(perm);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return {best, std::move(best_perm)};
}

inline ProcessResult process_node_once(const QapInstance& inst, const SubQap& root0,
                                       const Node& node, double zeta_hat,
                                       const EngineConfig& cfg, bool integral) {
  ProcessResult res;
  const int m = inst.n - node.depth();

  if (std::isfinite(zeta_hat) && zeta_hat <= prune_bound(node.inherited_lb, integral)) {
    res.kind = ProcessResult::Kind::Pruned;
    res.node_lb = node.inherited_lb;
    if (cfg.observer) cfg.observer({&node.assignment, nullptr, nullptr, nullptr, zeta_hat});
    return res;
  }

  if (m <= cfg.leaf_size) {
    auto [value, perm] = enumerate_leaf(inst, node.assignment);
    res.kind = ProcessResult::Kind::Solved;
    res.value = value;
    res.perm = std::move(perm);
    if (cfg.observer) cfg.observer({&node.assignment, nullptr, nullptr, nullptr, zeta_hat});
    return res;
  }

  SubQap sub = reduce(root0, node.assignment);
  LagrangianDnn dnn = build_q_lambda(sub, cfg.lambda);
  NbConfig nbcfg;
  nbcfg.eps = cfg.eps;
  nbcfg.integral = integral;
  NbResult nb = nb_solve(dnn, zeta_hat, nbcfg, node.dual_seed,
                         std::isfinite(node.inherited_lb) ? std::optional<double>(node.inherited_lb)
                                                          : std::nullopt);
  res.node_lb = std::max(node.inherited_lb, nb.lb);

  if (nb.stop_reason == NbStop::PruneByBound ||
      (std::isfinite(zeta_hat) && zeta_hat <= prune_bound(res.node_lb, integral))) {
    res.kind = ProcessResult::Kind::Pruned;
    if (cfg.observer) cfg.observer({&node.assignment, &sub, &nb, nullptr, zeta_hat});
    return res;
  }

  auto [ubv, ubperm] = upper_bound(inst, sub, nb.X_hat);
  res.ub_value = ubv;
  res.ub_perm = std::move(ubperm);
  double zeta_eff = cfg.freeze_incumbent ? zeta_hat : std::min(zeta_hat, ubv);

  PhiTable table;
  switch (cfg.rule) {
    case Rule::M: table = phi_mean(sub); break;
    case Rule::P: table = phi_primal(sub, nb.X_hat); break;
    case Rule::D: table = phi_dual(sub, dnn, nb, zeta_eff, integral); break;
  }
  BranchDecision dec = select(table, node.assignment);

  res.kind = ProcessResult::Kind::Branched;
  const double seed = dnn.scale * nb.y;
  for (std::size_t c = 0; c < dec.children.size(); ++c) {
    Node child;
    child.assignment = std::move(dec.children[c]);
    child.inherited_lb = res.node_lb;
    if (!dec.child_prunes.empty()) {
      const auto& cell = child.assignment;
      const int f = cell.facilities.back(), l = cell.locations.back();
      CellIndex cells = sub.cells;
      const int fp = static_cast<int>(std::lower_bound(cells.free_f.begin(), cells.free_f.end(), f) -
                                      cells.free_f.begin());
      const int lp = static_cast<int>(std::lower_bound(cells.free_l.begin(), cells.free_l.end(), l) -
                                      cells.free_l.begin());
      child.inherited_lb = std::max(child.inherited_lb, table.values(fp, lp));
    }
    child.dual_seed = seed;
    res.children.push_back(std::move(child));
  }
  res.child_prunes = std::move(dec.child_prunes);
  if (cfg.observer) cfg.observer({&node.assignment, &sub, &nb, &table, zeta_hat});
  return res;
}

}  // namespace detail

/// Process one node against the current incumbent: pre-check the
/// inherited bound, enumerate leaves exhaustively, otherwise bound,
/// compute a feasible completion, and branch with the configured rule.
/// A failing node is retried once before the error propagates.
inline ProcessResult process_node(const QapInstance& inst, const SubQap& root0, const Node& node,
                                  double zeta_hat, const EngineConfig& cfg, bool integral) {
  try {
    return detail::process_node_once(inst, root0, node, zeta_hat, cfg, integral);
  } catch (const EigenFailure&) {
    return detail::process_node_once(inst, root0, node, zeta_hat, cfg, integral);
  }
}

/// Feasible solution from the root relaxation's uniform starting point:
/// LAP rounding plus swap descent.  Used to seed the incumbent.
inline std::pair<double, std::vector<int>> heuristic_solution(const QapInstance& inst,
                                                              const SubQap& root0) {
  Matrix X = uniform_barycenter(root0.cells.dim(), inst.n);
  return upper_bound(inst, root0, X);
}

/// Content digest of an instance, used to pair checkpoints with their
/// instance file (FNV-1a over a canonical rendering).
inline std::string instance_digest(const QapInstance& inst) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const char* buf, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  };
  char buf[64];
  int len = std::snprintf(buf, sizeof buf, "n=%d;", inst.n);
  mix(buf, static_cast<std::size_t>(len));
  for (const Matrix* m : {&inst.A, &inst.B, &inst.C})
    for (int j = 0; j < m->cols(); ++j)
      for (int i = 0; i < m->rows(); ++i) {
        len = std::snprintf(buf, sizeof buf, "%.17g,", (*m)(i, j));
        mix(buf, static_cast<std::size_t>(len));
      }
  len = std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, static_cast<std::size_t>(len));
}

/// Serializable search state: the open pool plus incumbent and counters.
struct EngineState {
  std::string digest;
  double incumbent_value = kInf;
  double best_value = kInf;
  std::vector<int> best_perm;
  std::vector<Node> open;
  std::uint64_t nodes_generated = 0;
  std::vector<std::uint64_t> nodes_per_depth;
};

inline constexpr int kCheckpointFormatVersion = 1;

inline std::string checkpoint(const EngineState& state) {
  nlohmann::json j;
  j["format_version"] = kCheckpointFormatVersion;
  j["digest"] = state.digest;
  j["incumbent"] = state.incumbent_value;
  j["best_value"] = state.best_value;
  j["best_perm"] = state.best_perm;
  j["nodes_generated"] = state.nodes_generated;
  j["nodes_per_depth"] = state.nodes_per_depth;
  nlohmann::json open = nlohmann::json::array();
  for (const Node& nd : state.open) {
    nlohmann::json e;
    e["f"] = nd.assignment.facilities;
    e["l"] = nd.assignment.locations;
    if (std::isfinite(nd.inherited_lb)) e["lb"] = nd.inherited_lb;
    open.push_back(std::move(e));
  }
  j["open"] = std::move(open);
  return j.dump();
}

inline EngineState restore(const std::string& bytes, const QapInstance& inst) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(CheckpointError::Kind::Corrupt, e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kCheckpointFormatVersion)
      throw CheckpointError(CheckpointError::Kind::VersionMismatch,
                            "unsupported checkpoint format version");
    EngineState st;
    st.digest = j.at("digest").get<std::string>();
    if (st.digest != instance_digest(inst))
      throw CheckpointError(CheckpointError::Kind::DigestMismatch,
                            "checkpoint belongs to a different instance");
    st.incumbent_value = j.at("incumbent").get<double>();
    st.best_value = j.at("best_value").get<double>();
    st.best_perm = j.at("best_perm").get<std::vector<int>>();
    st.nodes_generated = j.at("nodes_generated").get<std::uint64_t>();
    st.nodes_per_depth = j.at("nodes_per_depth").get<std::vector<std::uint64_t>>();
    for (const auto& e : j.at("open")) {
      Node nd;
      nd.assignment.n = inst.n;
      nd.assignment.facilities = e.at("f").get<std::vector<int>>();
      nd.assignment.locations = e.at("l").get<std::vector<int>>();
      nd.inherited_lb = e.contains("lb") ? e.at("lb").get<double>() : -kInf;
      if (!nd.assignment.valid())
        throw CheckpointError(CheckpointError::Kind::Corrupt, "invalid open node");
      st.open.push_back(std::move(nd));
    }
    return st;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(CheckpointError::Kind::Corrupt, e.what());
  }
}

/// Complete level-d frontier of the enumeration tree, generated with
/// the bounding-free mean rule only; returns n(n-1)...(n-d+1) nodes.
inline std::vector<Node> warm_start_frontier(const QapInstance& inst, int d, int workers = 1) {
  if (d < 0 || d > inst.n) throw DepthOutOfRange("frontier depth out of range");
  SubQap root0 = build_q0(inst);
  std::vector<Node> level{Node{Assignment{inst.n, {}, {}}, -kInf, std::nullopt}};
  for (int r = 0; r < d; ++r) {
    std::vector<std::vector<Assignment>> child_lists(level.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= level.size()) return;
        const Assignment& asg = level[i].assignment;
        if (inst.n - asg.depth() == 1) {
          child_lists[i] = {asg.extended(asg.free_facilities()[0], asg.free_locations()[0])};
          continue;
        }
        SubQap sub = reduce(root0, asg);
        child_lists[i] = select(phi_mean(sub), asg).children;
      }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    std::vector<Node> nxt;
    for (auto& lst : child_lists)
      for (auto& asg : lst) nxt.push_back(Node{std::move(asg), -kInf, std::nullopt});
    level = std::move(nxt);
  }
  return level;
}

/// The branch-and-bound driver: a coordinator-owned open pool served by
/// worker threads.  Workers pull one node, process it, and push back
/// children and incumbent improvements; the coordinator handles
/// checkpoints, budgets, and termination.
class BnbSolver {
 public:
  BnbSolver(const QapInstance& inst, EngineConfig cfg)
      : inst_(inst), cfg_(std::move(cfg)), root0_(build_q0(inst)), integral_(inst.integral()) {
    if (cfg_.workers < 1) throw ModelError("solve: workers must be >= 1");
    if (cfg_.leaf_size < 1) throw ModelError("solve: leaf_size must be >= 1");
  }

  RunReport run() {
    EngineState st;
    st.digest = instance_digest(inst_);
    st.nodes_per_depth.assign(static_cast<std::size_t>(inst_.n) + 1, 0);
    if (cfg_.incumbent_init == IncumbentInit::Value) {
      st.incumbent_value = cfg_.incumbent_value;
    } else {
      auto [v, p] = heuristic_solution(inst_, root0_);
      st.incumbent_value = v;
      st.best_value = v;
      st.best_perm = std::move(p);
    }
    std::vector<Node> frontier = cfg_.warm_depth > 0
                                     ? warm_start_frontier(inst_, cfg_.warm_depth, cfg_.workers)
                                     : std::vector<Node>{Node{Assignment{inst_.n, {}, {}}}};
    for (Node& nd : frontier) {
      ++st.nodes_generated;
      ++st.nodes_per_depth[static_cast<std::size_t>(nd.depth())];
      st.open.push_back(std::move(nd));
    }
    return run_from(std::move(st));
  }

  RunReport run_from(EngineState st) {
    if (st.digest != instance_digest(inst_))
      throw CheckpointError(CheckpointError::Kind::DigestMismatch,
                            "state belongs to a different instance");
    const auto t0 = std::chrono::steady_clock::now();
    incumbent_ = st.incumbent_value;
    best_value_ = st.best_value;
    best_perm_ = std::move(st.best_perm);
    nodes_generated_ = st.nodes_generated;
    nodes_per_depth_ = std::move(st.nodes_per_depth);
    if (nodes_per_depth_.size() != static_cast<std::size_t>(inst_.n) + 1)
      nodes_per_depth_.assign(static_cast<std::size_t>(inst_.n) + 1, 0);
    pool_.clear();
    seq_ = 0;
    for (Node& nd : st.open) pool_.push_back({std::move(nd), seq_++});
    if (cfg_.best_first)
      std::stable_sort(pool_.begin(), pool_.end(),
                       [](const OpenNode& a, const OpenNode& b) { return a.node.inherited_lb < b.node.inherited_lb; });
    in_flight_.assign(static_cast<std::size_t>(cfg_.workers), std::nullopt);
    stop_ = false;
    processed_ = 0;
    error_.clear();

    std::vector<std::thread> threads;
    for (int w = 0; w < cfg_.workers; ++w) threads.emplace_back([this, w] { worker_loop(w); });

    // coordinator: periodic checkpoints and budget enforcement
    {
      std::unique_lock<std::mutex> lk(mu_);
      auto last_ckpt = t0;
      while (!done_locked()) {
        cv_.wait_for(lk, std::chrono::milliseconds(50));
        const auto now = std::chrono::steady_clock::now();
        const double elapsed = std::chrono::duration<double>(now - t0).count();
        if (cfg_.time_limit_s > 0.0 && elapsed >= cfg_.time_limit_s) stop_ = true;
        if (!cfg_.checkpoint_path.empty() && cfg_.checkpoint_interval_s > 0.0 &&
            std::chrono::duration<double>(now - last_ckpt).count() >= cfg_.checkpoint_interval_s) {
          write_checkpoint_locked();
          last_ckpt = now;
        }
        if (stop_) cv_.notify_all();
      }
      cv_.notify_all();
    }
    for (auto& t : threads) t.join();

    if (!cfg_.checkpoint_path.empty()) {
      std::unique_lock<std::mutex> lk(mu_);
      write_checkpoint_locked();
    }
    if (!error_.empty()) throw ModelError("node processing failed twice: " + error_);

    RunReport rep;
    rep.rule = cfg_.rule;
    rep.workers = cfg_.workers;
    rep.nodes_generated = nodes_generated_;
    rep.nodes_per_depth = nodes_per_depth_;
    rep.completed = pool_.empty();
    rep.incumbent_final = incumbent_;
    if (std::isfinite(best_value_)) {
      rep.optimum = best_value_;
      rep.perm = best_perm_;
    } else {
      rep.optimum = incumbent_;
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }

  /// Quiesced snapshot of the last run's final state.
  EngineState state() const {
    EngineState st;
    st.digest = instance_digest(inst_);
    st.incumbent_value = incumbent_;
    st.best_value = best_value_;
    st.best_perm = best_perm_;
    st.nodes_generated = nodes_generated_;
    st.nodes_per_depth = nodes_per_depth_;
    for (const auto& on : pool_) {
      Node nd = on.node;
      nd.dual_seed.reset();
      st.open.push_back(std::move(nd));
    }
    return st;
  }

  const SubQap& root0() const { return root0_; }

 private:
  struct OpenNode {
    Node node;
    std::uint64_t seq = 0;
  };

  bool done_locked() const {
    if (!error_.empty()) return active_ == 0;
    if (stop_) return active_ == 0;
    if (!pool_.empty()) return false;
    return active_ == 0;
  }

  // callers hold mu_
  std::size_t pick_index_locked() {
    if (!cfg_.best_first) return 0;  // FIFO
    std::size_t best = 0;
    for (std::size_t i = 1; i < pool_.size(); ++i) {
      if (pool_[i].node.inherited_lb < pool_[best].node.inherited_lb ||
          (pool_[i].node.inherited_lb == pool_[best].node.inherited_lb &&
           pool_[i].seq < pool_[best].seq))
        best = i;
    }
    return best;
  }

  void write_checkpoint_locked() {
    EngineState st;
    st.digest = instance_digest(inst_);
    st.incumbent_value = incumbent_;
    st.best_value = best_value_;
    st.best_perm = best_perm_;
    st.nodes_generated = nodes_generated_;
    st.nodes_per_depth = nodes_per_depth_;
    for (const auto& on : pool_) {
      Node nd = on.node;
      nd.dual_seed.reset();
      st.open.push_back(std::move(nd));
    }
    for (const auto& slot : in_flight_)
      if (slot) {
        Node nd = *slot;
        nd.dual_seed.reset();
        st.open.push_back(std::move(nd));
      }
    std::string bytes = checkpoint(st);
    std::ofstream out(cfg_.checkpoint_path + ".tmp", std::ios::binary | std::ios::trunc);
    out << bytes;
    out.close();
    std::rename((cfg_.checkpoint_path + ".tmp").c_str(), cfg_.checkpoint_path.c_str());
  }

  void worker_loop(int w) {
    for (;;) {
      Node node;
      {
        std::unique_lock<std::mutex> lk(mu_);
        cv_.wait(lk, [this] { return stop_ || !error_.empty() || !pool_.empty() || active_ == 0; });
        if (stop_ || !error_.empty()) return;
        if (pool_.empty()) {
          if (active_ == 0) {
            cv_.notify_all();
            return;
          }
          continue;  // spurious wakeup while peers are still expanding
        }
        std::size_t idx = pick_index_locked();
        node = std::move(pool_[idx].node);
        pool_.erase(pool_.begin() + static_cast<std::ptrdiff_t>(idx));
        in_flight_[static_cast<std::size_t>(w)] = node;
        ++active_;
      }

      ProcessResult res;
      bool failed = false;
      std::string what;
      try {
        res = process_node(inst_, root0_, node, incumbent_snapshot(), cfg_, integral_);
      } catch (const std::exception& e) {
        failed = true;
        what = e.what();
      }

      {
        std::unique_lock<std::mutex> lk(mu_);
        in_flight_[static_cast<std::size_t>(w)].reset();
        --active_;
        ++processed_;
        if (failed) {
          error_ = what;
          pool_.push_back({std::move(node), seq_++});  // keep it for the flushed checkpoint
        } else {
          absorb_locked(res);
        }
        if (cfg_.node_budget > 0 && processed_ >= cfg_.node_budget) stop_ = true;
        cv_.notify_all();
      }
    }
  }

  double incumbent_snapshot() {
    std::unique_lock<std::mutex> lk(mu_);
    return incumbent_;
  }

  // callers hold mu_
  void absorb_locked(ProcessResult& res) {
    auto offer = [this](double v, std::vector<int>& p) {
      if (v < best_value_) {
        best_value_ = v;
        best_perm_ = p;
      }
      if (!cfg_.freeze_incumbent && v < incumbent_) incumbent_ = v;
    };
    if (res.kind == ProcessResult::Kind::Solved) {
      offer(res.value, res.perm);
      return;
    }
    if (res.kind != ProcessResult::Kind::Branched) return;
    if (std::isfinite(res.ub_value)) offer(res.ub_value, res.ub_perm);
    for (std::size_t c = 0; c < res.children.size(); ++c) {
      Node& child = res.children[c];
      ++nodes_generated_;
      ++nodes_per_depth_[static_cast<std::size_t>(child.depth())];
      const bool flagged = !res.child_prunes.empty() && res.child_prunes[c];
      const bool lb_prune = std::isfinite(incumbent_) &&
                            incumbent_ <= detail::prune_bound(child.inherited_lb, integral_);
      if (!flagged && !lb_prune) pool_.push_back({std::move(child), seq_++});
    }
  }

  const QapInstance& inst_;
  EngineConfig cfg_;
  SubQap root0_;
  bool integral_ = false;

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<OpenNode> pool_;
  std::vector<std::optional<Node>> in_flight_;
  std::uint64_t seq_ = 0;
  int active_ = 0;
  bool stop_ = false;
  std::uint64_t processed_ = 0;
  std::string error_;

  double incumbent_ = kInf;
  double best_value_ = kInf;
  std::vector<int> best_perm_;
  std::uint64_t nodes_generated_ = 0;
  std::vector<std::uint64_t> nodes_per_depth_;
};

inline RunReport solve(const QapInstance& inst, const EngineConfig& cfg) {
  return BnbSolver(inst, cfg).run();
}

}  // namespace qapbnb

#endif  // QAPBNB_ENGINE_HPP_
