#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracle.hpp"
#include "qapbnb/engine.hpp"

using namespace qapbnb;

namespace {

EngineConfig base_config(Rule rule = Rule::D) {
  EngineConfig cfg;
  cfg.rule = rule;
  cfg.leaf_size = 4;
  return cfg;
}

}  // namespace

TEST_CASE("leaf enumeration is exhaustive") {
  QapInstance inst = oracle::random_instance(6, 1000, true);
  Assignment asg{6, {0, 4}, {3, 1}};
  auto [value, perm] = detail::enumerate_leaf(inst, asg);
  CHECK(value == Catch::Approx(oracle::node_optimum(inst, asg)).margin(1e-9));
  CHECK(is_permutation(perm, 6));
  CHECK(perm[0] == 3);
  CHECK(perm[4] == 1);
  CHECK(objective(inst, perm) == value);
}

TEST_CASE("process_node dispatches on the node state") {
  QapInstance inst = oracle::random_instance(6, 1001);
  SubQap root0 = build_q0(inst);
  EngineConfig cfg = base_config();

  // small free part: solved exactly
  Node leaf{Assignment{6, {1, 5}, {0, 2}}, -kInf, std::nullopt};
  ProcessResult solved = process_node(inst, root0, leaf, kInf, cfg, true);
  CHECK(solved.kind == ProcessResult::Kind::Solved);
  CHECK(solved.value ==
        Catch::Approx(oracle::node_optimum(inst, leaf.assignment)).margin(1e-9));

  // inherited bound at the incumbent: dropped before any reduction
  Node doomed{Assignment{6, {}, {}}, 500.0, std::nullopt};
  ProcessResult pruned = process_node(inst, root0, doomed, 100.0, cfg, true);
  CHECK(pruned.kind == ProcessResult::Kind::Pruned);
  CHECK(pruned.node_lb == 500.0);

  // big free part: bound, round, and branch
  cfg.leaf_size = 2;
  Node big{Assignment{6, {}, {}}, -kInf, std::nullopt};
  ProcessResult branched = process_node(inst, root0, big, kInf, cfg, true);
  REQUIRE(branched.kind == ProcessResult::Kind::Branched);
  CHECK(branched.children.size() == 6);
  CHECK(is_permutation(branched.ub_perm, 6));
  CHECK(branched.ub_value == objective(inst, branched.ub_perm));
  CHECK(branched.node_lb <= oracle::brute_force(inst).first + 1e-6);
  for (const Node& c : branched.children) {
    CHECK(c.depth() == 1);
    CHECK(c.inherited_lb >= branched.node_lb - 1e-12);
    CHECK(c.dual_seed.has_value());
  }
  CHECK(branched.child_prunes.size() == branched.children.size());
}

TEST_CASE("an unbeatable incumbent prunes the root relaxation") {
  QapInstance inst = oracle::random_instance(6, 1002);
  SubQap root0 = build_q0(inst);
  EngineConfig cfg = base_config();
  cfg.leaf_size = 2;
  Node root{Assignment{6, {}, {}}, -kInf, std::nullopt};
  ProcessResult res = process_node(inst, root0, root, -1e7, cfg, true);
  CHECK(res.kind == ProcessResult::Kind::Pruned);
}

TEST_CASE("full runs find the optimum under every rule") {
  QapInstance inst = oracle::random_instance(8, 1010, true);
  auto [opt, opt_perm] = oracle::brute_force(inst);
  for (Rule rule : {Rule::M, Rule::P, Rule::D}) {
    RunReport rep = solve(inst, base_config(rule));
    INFO("rule " << rule_letter(rule));
    CHECK(rep.completed);
    CHECK(rep.optimum == Catch::Approx(opt).margin(1e-9));
    CHECK(is_permutation(rep.perm, 8));
    CHECK(objective(inst, rep.perm) == rep.optimum);
    CHECK(rep.nodes_generated >= 1);
    std::uint64_t total = 0;
    for (auto c : rep.nodes_per_depth) total += c;
    CHECK(total == rep.nodes_generated);
  }
}

TEST_CASE("leaf_size covering the instance degenerates to enumeration") {
  QapInstance inst = oracle::random_instance(5, 1020);
  EngineConfig cfg = base_config();
  cfg.leaf_size = 5;
  RunReport rep = solve(inst, cfg);
  CHECK(rep.nodes_generated == 1);
  CHECK(rep.optimum == Catch::Approx(oracle::brute_force(inst).first).margin(1e-9));
}

TEST_CASE("incumbent seeding modes") {
  QapInstance inst = oracle::random_instance(7, 1030);
  double opt = oracle::brute_force(inst).first;

  EngineConfig cold = base_config();
  cold.incumbent_init = IncumbentInit::Value;
  cold.incumbent_value = kInf;
  RunReport a = solve(inst, cold);
  CHECK(a.optimum == Catch::Approx(opt).margin(1e-9));

  // exact incumbent given up front: still correct
  EngineConfig primed = cold;
  primed.incumbent_value = opt;
  RunReport b = solve(inst, primed);
  CHECK(b.optimum == Catch::Approx(opt).margin(1e-9));

  // frozen incumbent above the optimum: tree still closes correctly
  EngineConfig frozen = cold;
  frozen.incumbent_value = opt + 5.0;
  frozen.freeze_incumbent = true;
  RunReport c = solve(inst, frozen);
  CHECK(c.optimum == Catch::Approx(opt).margin(1e-9));
  CHECK(c.incumbent_final == opt + 5.0);
}

TEST_CASE("worker count does not change the answer or the tree") {
  QapInstance inst = oracle::random_instance(7, 1040, true);
  RunReport one = solve(inst, base_config());
  EngineConfig many = base_config();
  many.workers = 4;
  RunReport four = solve(inst, many);
  CHECK(four.optimum == one.optimum);
  CHECK(four.nodes_generated == one.nodes_generated);
  CHECK(four.nodes_per_depth == one.nodes_per_depth);
}

TEST_CASE("repeated runs are deterministic") {
  QapInstance inst = oracle::random_instance(7, 1050);
  RunReport a = solve(inst, base_config());
  RunReport b = solve(inst, base_config());
  CHECK(a.optimum == b.optimum);
  CHECK(a.perm == b.perm);
  CHECK(a.nodes_generated == b.nodes_generated);
  CHECK(a.nodes_per_depth == b.nodes_per_depth);
}

TEST_CASE("breadth-first ordering reaches the same optimum") {
  QapInstance inst = oracle::random_instance(7, 1055);
  EngineConfig cfg = base_config();
  cfg.best_first = false;
  CHECK(solve(inst, cfg).optimum ==
        Catch::Approx(oracle::brute_force(inst).first).margin(1e-9));
}

TEST_CASE("warm start frontier shape") {
  QapInstance inst = oracle::random_instance(5, 1060);
  CHECK(warm_start_frontier(inst, 0).size() == 1);
  std::vector<Node> l1 = warm_start_frontier(inst, 1);
  REQUIRE(l1.size() == 5);
  std::vector<Node> l2 = warm_start_frontier(inst, 2, 3);
  REQUIRE(l2.size() == 20);
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
  for (const Node& nd : l2) {
    CHECK(nd.depth() == 2);
    CHECK(nd.assignment.valid());
    seen.insert({nd.assignment.facilities, nd.assignment.locations});
  }
  CHECK(seen.size() == 20);  // all distinct
  CHECK_THROWS_AS(warm_start_frontier(inst, 6), DepthOutOfRange);
  CHECK_THROWS_AS(warm_start_frontier(inst, -1), DepthOutOfRange);
}

TEST_CASE("warm started runs agree with cold runs") {
  QapInstance inst = oracle::random_instance(7, 1070);
  double opt = oracle::brute_force(inst).first;
  for (int d : {1, 2}) {
    EngineConfig cfg = base_config();
    cfg.warm_depth = d;
    RunReport rep = solve(inst, cfg);
    INFO("warm depth " << d);
    CHECK(rep.optimum == Catch::Approx(opt).margin(1e-9));
    CHECK(rep.completed);
  }
}

TEST_CASE("instance digest separates instances") {
  QapInstance a = oracle::random_instance(5, 1), b = oracle::random_instance(5, 2);
  CHECK(instance_digest(a) == instance_digest(a));
  CHECK(instance_digest(a) != instance_digest(b));
  QapInstance c = a;
  c.A(0, 1) = c.A(1, 0) = c.A(0, 1) + 1.0;
  CHECK(instance_digest(a) != instance_digest(c));
}

TEST_CASE("checkpoint round trip preserves the state") {
  QapInstance inst = oracle::random_instance(6, 1080);
  EngineState st;
  st.digest = instance_digest(inst);
  st.incumbent_value = 42.0;
  st.best_value = 42.0;
  st.best_perm = {1, 0, 2, 3, 5, 4};
  st.nodes_generated = 7;
  st.nodes_per_depth = {1, 6, 0, 0, 0, 0, 0};
  st.open.push_back(Node{Assignment{6, {2}, {3}}, 17.5, std::nullopt});
  st.open.push_back(Node{Assignment{6, {0, 1}, {5, 4}}, -kInf, std::nullopt});

  EngineState back = restore(checkpoint(st), inst);
  CHECK(back.incumbent_value == 42.0);
  CHECK(back.best_perm == st.best_perm);
  CHECK(back.nodes_generated == 7);
  CHECK(back.nodes_per_depth == st.nodes_per_depth);
  REQUIRE(back.open.size() == 2);
  CHECK(back.open[0].assignment.facilities == std::vector<int>{2});
  CHECK(back.open[0].inherited_lb == 17.5);
  CHECK(back.open[1].inherited_lb == -kInf);
}

TEST_CASE("checkpoint restore rejects bad inputs") {
  QapInstance inst = oracle::random_instance(5, 1090);
  EngineState st;
  st.digest = instance_digest(inst);
  std::string good = checkpoint(st);

  auto kind_of = [&](const std::string& bytes, const QapInstance& against) {
    try {
      restore(bytes, against);
    } catch (const CheckpointError& e) {
      return e.kind();
    }
    throw std::logic_error("expected restore to fail");
  };
  CHECK(kind_of("not json{", inst) == CheckpointError::Kind::Corrupt);
  CHECK(kind_of("{}", inst) == CheckpointError::Kind::Corrupt);
  CHECK(kind_of(good, oracle::random_instance(5, 1091)) ==
        CheckpointError::Kind::DigestMismatch);

  nlohmann::json j = nlohmann::json::parse(good);
  j["format_version"] = kCheckpointFormatVersion + 1;
  CHECK(kind_of(j.dump(), inst) == CheckpointError::Kind::VersionMismatch);

  j = nlohmann::json::parse(good);
  j["open"] = nlohmann::json::array({{{"f", {0, 0}}, {"l", {1, 2}}}});
  CHECK(kind_of(j.dump(), inst) == CheckpointError::Kind::Corrupt);
}

TEST_CASE("pause on a node budget, then resume to the optimum") {
  QapInstance inst = oracle::random_instance(8, 1100);
  double opt = oracle::brute_force(inst).first;

  EngineConfig cfg = base_config();
  cfg.node_budget = 2;
  BnbSolver first(inst, cfg);
  RunReport paused = first.run();
  CHECK_FALSE(paused.completed);
  EngineState snap = first.state();
  CHECK(!snap.open.empty());

  // serialize through the checkpoint text, as a resume would
  EngineState thawed = restore(checkpoint(snap), inst);
  EngineConfig rest = base_config();
  BnbSolver second(inst, rest);
  RunReport done = second.run_from(std::move(thawed));
  CHECK(done.completed);
  CHECK(done.optimum == Catch::Approx(opt).margin(1e-9));
  CHECK(is_permutation(done.perm, 8));
}

TEST_CASE("checkpoint files are written and reloadable") {
  QapInstance inst = oracle::random_instance(6, 1110);
  std::string path = "engine_ckpt_test.json";
  EngineConfig cfg = base_config();
  cfg.checkpoint_path = path;
  cfg.checkpoint_interval_s = 0.0;  // only the final flush
  RunReport rep = solve(inst, cfg);
  CHECK(rep.completed);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  EngineState st = restore(ss.str(), inst);
  CHECK(st.open.empty());  // the run finished, nothing left open
  CHECK(st.best_value == Catch::Approx(rep.optimum).margin(1e-9));
  std::remove(path.c_str());
}

TEST_CASE("observer sees every processed node") {
  QapInstance inst = oracle::random_instance(6, 1120);
  std::atomic<int> calls{0};
  EngineConfig cfg = base_config();
  cfg.leaf_size = 3;
  cfg.observer = [&](const NodeObservation& obs) {
    ++calls;
    REQUIRE(obs.assignment != nullptr);
    CHECK(obs.assignment->valid());
  };
  solve(inst, cfg);
  CHECK(calls >= 1);
}

TEST_CASE("configuration validation") {
  QapInstance inst = oracle::random_instance(4, 1);
  EngineConfig bad = base_config();
  bad.workers = 0;
  CHECK_THROWS_AS(BnbSolver(inst, bad), ModelError);
  bad = base_config();
  bad.leaf_size = 0;
  CHECK_THROWS_AS(BnbSolver(inst, bad), ModelError);
}
