// Command-line driver: solve / bound / estimate / eval over QAPLIB-style
// instance files, with JSON or plain-text reports.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qapbnb/engine.hpp"
#include "qapbnb/estimator.hpp"
#include "qapbnb/qaplib_io.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string stem(const std::string& path) {
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

int default_workers() {
  if (const char* env = std::getenv("QAPFORGE_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc >= 1 ? static_cast<int>(hc) : 1;
}

json perm_to_json(const std::vector<int>& perm) {
  json a = json::array();
  for (int v : perm) a.push_back(v + 1);  // 1-based in reports
  return a;
}

const char* stop_name(qapbnb::NbStop s) {
  switch (s) {
    case qapbnb::NbStop::Converged: return "converged";
    case qapbnb::NbStop::PruneByBound: return "prune_by_bound";
    case qapbnb::NbStop::MustBranch: return "must_branch";
    case qapbnb::NbStop::IterLimit: return "iter_limit";
  }
  return "unknown";
}

void emit(const json& j, const std::string& output) {
  if (output == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it)
    std::cout << it.key() << ": " << it.value().dump() << "\n";
}

struct CommonOpts {
  std::string instance_path;
  std::string rule = "D";
  int workers = default_workers();
  int leaf_size = 7;
  double lambda = 1e5;
  double eps = 1e-5;
  std::optional<double> incumbent;
  std::string output = "json";
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_engine) {
  cmd->add_option("instance", o.instance_path, "QAPLIB-style instance file")->required();
  cmd->add_option("--lambda", o.lambda, "penalty multiplier")->check(CLI::PositiveNumber);
  cmd->add_option("--eps", o.eps, "relative bound-gap tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--incumbent", o.incumbent, "initial incumbent value");
  cmd->add_option("--output", o.output, "report format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  cmd->add_flag("--no-timing", o.no_timing, "omit wall-clock fields from the report");
  if (with_engine) {
    cmd->add_option("--rule", o.rule, "branching rule")
        ->check(CLI::IsMember({"M", "P", "D"}))
        ->capture_default_str();
    cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--leaf-size", o.leaf_size, "exhaustive-enumeration threshold")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
}

qapbnb::EngineConfig engine_config(const CommonOpts& o) {
  qapbnb::EngineConfig cfg;
  cfg.rule = qapbnb::rule_from_letter(o.rule[0]);
  cfg.workers = o.workers;
  cfg.leaf_size = o.leaf_size;
  cfg.lambda = o.lambda;
  cfg.eps = o.eps;
  if (o.incumbent) {
    cfg.incumbent_init = qapbnb::IncumbentInit::Value;
    cfg.incumbent_value = *o.incumbent;
  }
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"exact quadratic assignment solver"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a TOML/INI file");

  CommonOpts solve_o, bound_o, est_o, eval_o;
  int warm_depth = 0;
  std::string checkpoint_path, resume_path;
  double checkpoint_interval = 1800.0;
  bool breadth_first = false;
  std::uint64_t node_budget = 0;
  double time_limit = 0.0;

  CLI::App* solve_cmd = app.add_subcommand("solve", "run the branch-and-bound search");
  add_common(solve_cmd, solve_o, true);
  solve_cmd->add_option("--warm-depth", warm_depth, "start from the complete level-d frontier")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint file path");
  solve_cmd->add_option("--checkpoint-interval", checkpoint_interval, "seconds between checkpoints")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve_cmd->add_option("--resume", resume_path, "resume from a checkpoint file");
  solve_cmd->add_flag("--breadth-first", breadth_first, "strict FIFO search order");
  solve_cmd->add_option("--node-budget", node_budget, "pause after this many processed nodes");
  solve_cmd->add_option("--time-limit", time_limit, "pause after this many seconds");

  CLI::App* bound_cmd = app.add_subcommand("bound", "bound the root relaxation only");
  add_common(bound_cmd, bound_o, false);

  std::uint64_t seed = 0;
  double fraction = 0.05;
  int min_sample = 30;
  bool full_sampling = false;
  CLI::App* est_cmd = app.add_subcommand("estimate", "estimate the enumeration tree size");
  add_common(est_cmd, est_o, true);
  est_cmd->add_option("--seed", seed, "sampling seed")->capture_default_str();
  est_cmd->add_option("--fraction", fraction, "per-depth sample fraction")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  est_cmd->add_option("--min-sample", min_sample, "per-depth sample floor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  est_cmd->add_flag("--full", full_sampling, "sample every generated node");

  std::string perm_path;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a permutation file");
  add_common(eval_cmd, eval_o, false);
  eval_cmd->add_option("perm", perm_path, "permutation file (1-based)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (solve_cmd->parsed()) {
    qapbnb::QapInstance inst =
        qapbnb::parse_instance(slurp(solve_o.instance_path), stem(solve_o.instance_path));
    qapbnb::EngineConfig cfg = engine_config(solve_o);
    cfg.warm_depth = warm_depth;
    cfg.checkpoint_path = checkpoint_path;
    cfg.checkpoint_interval_s = checkpoint_interval;
    cfg.best_first = !breadth_first;
    cfg.node_budget = node_budget;
    cfg.time_limit_s = time_limit;

    qapbnb::BnbSolver solver(inst, cfg);
    qapbnb::RunReport rep;
    if (!resume_path.empty()) {
      rep = solver.run_from(qapbnb::restore(slurp(resume_path), inst));
    } else {
      rep = solver.run();
    }

    json j;
    j["command"] = "solve";
    j["instance"] = inst.name;
    j["rule"] = std::string(1, qapbnb::rule_letter(rep.rule));
    j["workers"] = rep.workers;
    j["optimum"] = rep.optimum;
    j["perm"] = perm_to_json(rep.perm);
    j["nodes_generated"] = rep.nodes_generated;
    j["nodes_per_depth"] = rep.nodes_per_depth;
    j["completed"] = rep.completed;
    if (!solve_o.no_timing) j["wall_seconds"] = rep.wall_seconds;
    emit(j, solve_o.output);
    return kExitOk;
  }

  if (bound_cmd->parsed()) {
    qapbnb::QapInstance inst =
        qapbnb::parse_instance(slurp(bound_o.instance_path), stem(bound_o.instance_path));
    qapbnb::SubQap root0 = qapbnb::build_q0(inst);
    qapbnb::LagrangianDnn dnn = qapbnb::build_q_lambda(root0, bound_o.lambda);
    qapbnb::NbConfig nbcfg;
    nbcfg.eps = bound_o.eps;
    nbcfg.integral = inst.integral();
    double zeta = bound_o.incumbent ? *bound_o.incumbent : qapbnb::kInf;
    qapbnb::NbResult nb = qapbnb::nb_solve(dnn, zeta, nbcfg);

    json j;
    j["command"] = "bound";
    j["instance"] = inst.name;
    j["lb"] = nb.lb;
    j["ub"] = nb.ub;
    j["iterations"] = nb.iterations;
    j["stop_reason"] = stop_name(nb.stop_reason);
    emit(j, bound_o.output);
    return kExitOk;
  }

  if (est_cmd->parsed()) {
    qapbnb::QapInstance inst =
        qapbnb::parse_instance(slurp(est_o.instance_path), stem(est_o.instance_path));
    qapbnb::SamplePlan plan;
    plan.fraction = full_sampling ? 1.0 : fraction;
    plan.min_size = full_sampling ? 1 : min_sample;
    qapbnb::EngineConfig base = engine_config(est_o);
    qapbnb::EstimateReport rep = qapbnb::estimate(inst, base.rule, plan, seed, est_o.incumbent, base);

    json j;
    j["command"] = "estimate";
    j["instance"] = inst.name;
    j["rule"] = std::string(1, qapbnb::rule_letter(rep.rule));
    j["seed"] = rep.seed;
    j["incumbent"] = rep.incumbent;
    j["m_hat"] = rep.m_hat;
    j["s"] = rep.s;
    j["t"] = rep.t;
    j["total_hat"] = rep.total_hat;
    emit(j, est_o.output);
    return kExitOk;
  }

  // eval
  qapbnb::QapInstance inst =
      qapbnb::parse_instance(slurp(eval_o.instance_path), stem(eval_o.instance_path));
  std::vector<int> perm = qapbnb::parse_permutation(slurp(perm_path), inst.n);
  json j;
  j["command"] = "eval";
  j["instance"] = inst.name;
  j["perm"] = perm_to_json(perm);
  j["objective"] = qapbnb::objective(inst, perm);
  emit(j, eval_o.output);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const qapbnb::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const qapbnb::CheckpointError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const qapbnb::EigenFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const qapbnb::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
