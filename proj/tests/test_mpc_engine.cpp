#include <numeric>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "rankagg/mpc.hpp"

using namespace rankagg::mpc;

namespace {
MpcConfig config(std::size_t n, double eps = 0.5) {
  MpcConfig cfg;
  cfg.n = n;
  cfg.epsilon = eps;
  return cfg;
}
}  // namespace

TEST_CASE("config sizes") {
  auto cfg = config(16);
  CHECK(cfg.blockSize() == 4);
  CHECK(cfg.blockCount() == 4);
  CHECK(cfg.wordCap() == 64);
  CHECK(cfg.blockOf(5) == 1);
  CHECK(cfg.blockStart(3) == 13);
  cfg = config(10, 0.9);
  CHECK(cfg.blockSize() == 2);
  CHECK(cfg.blockCount() == 5);
  CHECK(cfg.blockLength(4) == 2);
  cfg = config(10, 0.5);
  CHECK(cfg.blockSize() == 3);
  CHECK(cfg.blockLength(3) == 1);
  cfg.epsilon = 1.0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("empty program") {
  auto r = runProgram({}, config(16));
  CHECK(r.trace.rounds == 0);
  CHECK(r.trace.machinesUsed == 0);
  CHECK_FALSE(r.trace.failed);
  auto j = nlohmann::json::parse(traceJson(r.trace));
  CHECK(j["rounds"] == 0);
  CHECK(j["failed"].is_null());
}

TEST_CASE("messages arrive next round in sender order") {
  MpcProgram prog;
  for (MachineId i = 0; i < 4; ++i) prog.inputs.push_back({i, 0, {static_cast<Word>(10 + i)}});
  prog.rounds.push_back([](Context& ctx) {
    ctx.send(9, {ctx.store()[0][0]});
    ctx.store().clear();
  });
  prog.rounds.push_back([](Context& ctx) {
    Words all;
    for (const auto& m : ctx.inbox()) all.push_back(m.payload[0]);
    ctx.store()[1] = all;
  });
  auto r = runProgram(prog, config(16));
  CHECK(r.trace.rounds == 2);
  CHECK(r.trace.totalMessages == 4);
  CHECK(r.trace.machinesUsed == 5);
  REQUIRE(r.stores.count(9));
  CHECK(r.stores.at(9).at(1) == Words{10, 11, 12, 13});
  CHECK(r.stores.count(0) == 0);
}

TEST_CASE("prefix sum over sixteen machines") {
  auto cfg = config(16);
  IdSpace ids;
  const auto base = ids.take(16);
  std::vector<MachineId> leaves(16);
  std::iota(leaves.begin(), leaves.end(), base);
  Tree tree(leaves, 2, cfg.wordCap(), ids);
  CHECK(tree.depth() == 1);
  CHECK(tree.nodeCount() == 1);

  Engine engine(cfg);
  for (auto id : leaves) engine.place({id, 0, {static_cast<Word>(id + 1)}});
  auto round = [&](Context& ctx) {
    if (tree.isNode(ctx.id())) {
      prefixSumNode(ctx, tree, 1);
      return;
    }
    if (ctx.round() == 1) {
      ctx.send(tree.parentOf(ctx.id()), {kTagUp, ctx.store()[0][0]});
    }
  };
  CHECK(engine.run({round, round}));
  CHECK(engine.trace().rounds == 2);
  for (auto id : leaves) {
    const auto& inbox = engine.inboxes().at(id);
    REQUIRE(inbox.size() == 1);
    const Word expect = static_cast<Word>(id * (id + 1) / 2);
    CHECK(inbox[0].payload == Words{kTagDown, expect, 136});
  }
}

TEST_CASE("deeper trees keep leaf order") {
  IdSpace ids;
  const auto base = ids.take(20);
  std::vector<MachineId> leaves(20);
  std::iota(leaves.begin(), leaves.end(), base);
  Tree tree(leaves, 2, 6, ids);
  CHECK(tree.fanIn() == 3);
  CHECK(tree.depth() == 3);
  auto cfg = config(16);
  Engine engine(cfg);
  for (auto id : leaves) engine.place({id, 0, {1}});
  auto round = [&](Context& ctx) {
    if (tree.isNode(ctx.id())) {
      prefixSumNode(ctx, tree, 1);
      return;
    }
    if (ctx.round() == 1) ctx.send(tree.parentOf(ctx.id()), {kTagUp, 1});
  };
  CHECK(engine.run(std::vector<RoundFn>(6, round)));
  for (auto id : leaves) {
    CHECK(engine.inboxes().at(id).at(0).payload == Words{kTagDown, static_cast<Word>(id), 20});
  }
}

TEST_CASE("gather and multicast") {
  auto cfg = config(64);
  IdSpace ids;
  const auto base = ids.take(5);
  std::vector<MachineId> leaves(5);
  std::iota(leaves.begin(), leaves.end(), base);
  Tree tree(leaves, 3, cfg.wordCap(), ids);
  const auto relayBase = ids.take(3);
  const std::vector<MachineId> targets{100, 101, 102, 103, 104};
  const RelayPlan plan{3, 2};
  Engine engine(cfg);
  for (auto id : leaves) engine.place({id, 0, {static_cast<Word>(id)}});
  auto round = [&](Context& ctx) {
    if (tree.isNode(ctx.id())) {
      gatherNode(ctx, tree, 7);
      if (ctx.round() == 2) multicast(ctx, targets, ctx.store()[7], relayBase, plan);
      return;
    }
    if (ctx.id() >= relayBase && ctx.id() < relayBase + 3) {
      relayForward(ctx);
      return;
    }
    if (ctx.round() == 1) {
      ctx.send(tree.parentOf(ctx.id()), {kTagGather, 1, static_cast<Word>(ctx.id() * 10)});
      ctx.store().clear();
    }
  };
  CHECK(engine.run({round, round, round}));
  const Words expect{1, 0, 1, 10, 1, 20, 1, 30, 1, 40};
  CHECK(*engine.read(tree.root(), 7) == expect);
  for (auto t : targets) CHECK(engine.inboxes().at(t).at(0).payload == expect);
}

TEST_CASE("relay plans respect the cap") {
  for (std::size_t cap : {16, 64, 200}) {
    for (std::size_t data : {1, 5, 30}) {
      for (std::size_t targets : {1, 7, 100}) {
        auto p = planRelays(targets, data, cap);
        CHECK(p.relays * p.perRelay >= targets);
        if (cap > data + 1) {
          CHECK(1 + p.perRelay + data <= cap);
          CHECK(p.perRelay * data <= cap);
        }
      }
    }
  }
}

TEST_CASE("cap violation records the locus") {
  MpcProgram prog;
  for (MachineId i = 0; i < 8; ++i) prog.inputs.push_back({i, 0, {1, 2}});
  prog.rounds.push_back([](Context&) {});
  prog.rounds.push_back([](Context& ctx) {
    if (ctx.id() == 5) ctx.store()[1] = Words(100, 0);
  });
  prog.rounds.push_back([](Context&) {});
  auto r = runProgram(prog, config(16));
  REQUIRE(r.trace.failed);
  CHECK(r.trace.failed->machine == 5);
  CHECK(r.trace.failed->round == 2);
  CHECK(r.trace.rounds == 2);
  auto j = nlohmann::json::parse(traceJson(r.trace));
  CHECK(j["failed"]["machine"] == 5);
  CHECK(j["failed"]["round"] == 2);

  MpcProgram inbound;
  inbound.inputs.push_back({0, 0, Words(40, 1)});
  inbound.inputs.push_back({1, 0, Words(40, 1)});
  inbound.rounds.push_back([](Context& ctx) {
    ctx.send(2, ctx.store()[0]);
    ctx.store().clear();
  });
  inbound.rounds.push_back([](Context&) {});
  r = runProgram(inbound, config(16));
  REQUIRE(r.trace.failed);
  CHECK(r.trace.failed->machine == 2);
  CHECK(r.trace.failed->round == 2);
}

TEST_CASE("machine budget") {
  auto cfg = config(16);
  cfg.machineBudget = 4;
  Engine engine(cfg);
  CHECK_THROWS_AS(engine.place({4, 0, {1}}), MachineBudgetExceeded);
  engine.place({0, 0, {1}});
  CHECK_THROWS_AS(engine.step([](Context& ctx) { ctx.send(10, {1}); }), MachineBudgetExceeded);
}
