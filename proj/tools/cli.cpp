#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "rankagg/framework.hpp"
#include "rankagg/io.hpp"
#include "rankagg/local_solvers.hpp"
#include "rankagg/mpc/lanes.hpp"
#include "rankagg/mpc_algorithms.hpp"
#include "rankagg/oracles.hpp"
#include "rankagg/reconstruct.hpp"
#include "rankagg/verify.hpp"

namespace rankagg::cli {

Json toJson(const RunReport& r) {
  Json j;
  j["instance"] = {{"n", r.n}, {"m", r.m}, {"weighted", r.weighted}};
  j["algorithm"] = r.algorithm;
  j["metric"] = r.metric;
  j["params"] = r.params;
  j["output"] = r.output;
  j["cost"] = r.cost;
  j["estimatedCost"] = r.estimatedCost;
  j["candidateCount"] = r.candidateCount;
  j["provenance"] = {{"kind", r.provenance}, {"indices", r.provenanceIndices}};
  if (r.opt) j["opt"] = *r.opt;
  if (r.ratio) j["ratio"] = *r.ratio;
  if (r.trace) j["trace"] = *r.trace;
  j["seed"] = r.seed;
  j["wallSeconds"] = r.wallSeconds;
  return j;
}

RunReport reportFromJson(const Json& j) {
  RunReport r;
  r.n = j.at("instance").at("n");
  r.m = j.at("instance").at("m");
  r.weighted = j.at("instance").at("weighted");
  r.algorithm = j.at("algorithm");
  r.metric = j.at("metric");
  r.params = j.at("params");
  r.output = j.at("output").get<std::vector<int>>();
  r.cost = j.at("cost");
  r.estimatedCost = j.at("estimatedCost");
  r.candidateCount = j.at("candidateCount");
  r.provenance = j.at("provenance").at("kind");
  r.provenanceIndices = j.at("provenance").at("indices").get<std::vector<std::size_t>>();
  if (j.contains("opt")) r.opt = j["opt"].get<double>();
  if (j.contains("ratio")) r.ratio = j["ratio"].get<double>();
  if (j.contains("trace")) r.trace = j["trace"];
  r.seed = j.at("seed");
  r.wallSeconds = j.at("wallSeconds");
  return r;
}

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  bool json = false;
  std::string metric = "kendall";
  double epsilon = 0.5;
  double rho = 0.25;
  double delta = 0.5;
  std::optional<std::size_t> r;
  std::size_t tupleCap = 1024;
  double c = 4.0;
  std::optional<double> kappa;
};

std::vector<int> oneLine(const Permutation& p) { return {p.oneLine().begin(), p.oneLine().end()}; }

Json traceToJson(const mpc::MpcTrace& t) { return Json::parse(mpc::traceJson(t)); }

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  Globals g;

  std::uint64_t seed() {
    if (!seed_) {
      if (g.seed) {
        seed_ = *g.seed;
      } else {
        std::random_device rd;
        seed_ = (std::uint64_t{rd()} << 32) ^ rd();
        err_ << "seed: " << *seed_ << "\n";
      }
    }
    return *seed_;
  }

  ReconstructParams reconstructParams() const {
    ReconstructParams p;
    p.epsilon = g.epsilon;
    p.rho = g.rho;
    p.tupleCap = g.tupleCap;
    p.validate();
    return p;
  }

  mpc::MpcConfig mpcConfig(std::size_t n, bool relaxed) const {
    mpc::MpcConfig cfg;
    cfg.n = n;
    cfg.epsilon = g.epsilon;
    cfg.c = g.c;
    cfg.kappa = g.kappa.value_or(relaxed ? mpc::kRelaxedKappa : 1.0);
    cfg.validate();
    return cfg;
  }

  void emit(const Json& j) { out_ << j.dump(2) << "\n"; }

  // gen -----------------------------------------------------------------
  std::size_t genN = 0, genM = 0, moves = 1;
  std::string model = "uniform", genOut;

  int gen() {
    if (genN < 1 || genM < 1) throw InvalidInput("gen: n and m must be at least 1");
    const auto s = seed();
    Instance inst;
    std::optional<Permutation> center;
    if (model == "uniform") {
      inst = generateUniform(genN, genM, s);
    } else if (model == "planted") {
      auto p = generatePlanted(genN, genM, moves, s);
      inst = std::move(p.instance);
      center = std::move(p.center);
    } else {
      throw InvalidInput("gen: unknown model '" + model + "' (uniform, planted)");
    }
    const auto text = formatInstance(inst);
    if (!genOut.empty()) {
      std::ofstream(genOut) << text;
      if (center) std::ofstream(genOut + ".center") << center->toString() << "\n";
    }
    if (g.json) {
      Json j{{"n", genN}, {"m", genM}, {"model", model}, {"seed", s}};
      if (center) j["center"] = oneLine(*center);
      if (genOut.empty()) j["instance"] = text;
      emit(j);
    } else if (genOut.empty()) {
      out_ << text;
      if (center) err_ << "center: " << center->toString() << "\n";
    }
    return kOk;
  }

  // dist ----------------------------------------------------------------
  std::string file;
  std::optional<std::size_t> i, j;
  bool useMpc = false;

  const Permutation& member(const Instance& P, std::size_t k) {
    if (k < 1 || k > P.m()) {
      throw InvalidInput("member " + std::to_string(k) + " out of range 1.." + std::to_string(P.m()));
    }
    return P.perms[k - 1];
  }

  int dist() {
    const auto P = readInstanceFile(file);
    const auto metric = parseMetric(g.metric);
    const auto* w = P.weightsOrNull();
    if (isWeighted(metric) && !w) throw InvalidInput(std::string(toString(metric)) + " needs a weight line");
    if (i.has_value() != j.has_value()) throw InvalidInput("dist: give both --i and --j or neither");
    if (i) {
      const auto& p = member(P, *i);
      const auto& q = member(P, *j);
      Json res{{"metric", toString(metric)}, {"i", *i}, {"j", *j}};
      if (useMpc) {
        const auto r = mpc::mpcDistance(metric, p, q, mpcConfig(P.n, false), w);
        res["distance"] = r.value;
        res["trace"] = traceToJson(r.trace);
      } else {
        res["distance"] = distance(metric, p, q, w);
      }
      if (metric == Metric::Ulam || metric == Metric::WeightedUlam) {
        res["indel"] = res["distance"];
        res["moves"] = res["distance"].get<double>() / 2;
      }
      if (g.json) {
        emit(res);
      } else {
        out_ << res["distance"].get<double>() << "\n";
      }
      return kOk;
    }
    if (useMpc) throw InvalidInput("dist --mpc needs --i and --j");
    std::vector<std::vector<double>> matrix(P.m(), std::vector<double>(P.m()));
    for (std::size_t a = 0; a < P.m(); ++a) {
      for (std::size_t b = 0; b < P.m(); ++b) matrix[a][b] = distance(metric, P.perms[a], P.perms[b], w);
    }
    if (g.json) {
      emit({{"metric", toString(metric)}, {"matrix", matrix}});
    } else {
      for (const auto& row : matrix) {
        for (std::size_t b = 0; b < row.size(); ++b) out_ << (b ? " " : "") << row[b];
        out_ << "\n";
      }
    }
    return kOk;
  }

  // slack ---------------------------------------------------------------
  std::string xText;
  std::optional<std::size_t> xMember;

  int slackCmd() {
    const auto P = readInstanceFile(file);
    const auto metric = parseMetric(g.metric);
    if (isWeighted(metric) && !P.weights) throw InvalidInput(std::string(toString(metric)) + " needs a weight line");
    if (xText.empty() == !xMember.has_value()) throw InvalidInput("slack: give exactly one of --x and --x-member");
    const auto x = xMember ? member(P, *xMember) : parsePermutation(xText);
    if (x.size() != P.n) throw InvalidInput("slack: x has size " + std::to_string(x.size()) + ", instance n is " + std::to_string(P.n));
    const auto rep = totalSlack(P, x, metric);
    if (g.json) {
      Json pairs = Json::array();
      for (const auto& [ij, s] : rep.pairwise) pairs.push_back({{"i", ij.first + 1}, {"j", ij.second + 1}, {"slack", s}});
      emit({{"metric", toString(metric)},
            {"x", oneLine(x)},
            {"total", rep.total},
            {"identityResidual", rep.identityResidual},
            {"identityHolds", rep.identityHolds},
            {"pairwise", pairs}});
    } else {
      for (const auto& [ij, s] : rep.pairwise) out_ << ij.first + 1 << " " << ij.second + 1 << " " << s << "\n";
      out_ << "total " << rep.total << (rep.identityHolds ? "" : " (identity check FAILED)") << "\n";
    }
    return rep.identityHolds ? kOk : kVerifyFailed;
  }

  // aggregate -----------------------------------------------------------
  bool verifyOpt = false, fullEval = false;
  std::string solverName = "default";

  int aggregateCmd() {
    const auto start = std::chrono::steady_clock::now();
    const auto P = readInstanceFile(file);
    const auto metric = parseMetric(g.metric);
    const auto rp = reconstructParams();
    LocalSolver solver;
    if (useMpc) {
      solver = mpc::mpcLocalSolver(metric, rp);
    } else if (solverName == "default") {
      solver = defaultSolver(metric);
    } else if (solverName == "reconstruct") {
      if (metric != Metric::Ulam && metric != Metric::WeightedUlam) {
        throw InvalidInput("aggregate: the reconstruct solver is for Ulam metrics");
      }
      solver = mpc::mpcLocalSolver(metric, rp);
    } else {
      throw InvalidInput("aggregate: unknown solver '" + solverName + "' (default, reconstruct)");
    }
    FrameworkConfig cfg;
    cfg.r = g.r.value_or(solver.r);
    cfg.delta = g.delta;
    cfg.seed = seed();
    cfg.fullEvaluation = fullEval;

    RunReport rep;
    rep.n = P.n;
    rep.m = P.m();
    rep.weighted = P.weights.has_value();
    rep.metric = toString(metric);
    rep.algorithm = std::string(useMpc ? "mpc-framework/" : "framework/") + solver.name;
    rep.params = {{"r", cfg.r}, {"delta", cfg.delta}, {"fullEvaluation", fullEval}};
    std::optional<AggregationResult> out;
    if (useMpc) {
      const auto mc = mpcConfig(P.n, metric == Metric::Ulam || metric == Metric::WeightedUlam);
      rep.params["epsilon"] = mc.epsilon;
      rep.params["c"] = mc.c;
      rep.params["kappa"] = mc.kappa;
      try {
        auto r = mpc::mpcAggregate(P, metric, mc, cfg, rp);
        out.emplace(std::move(r.result));
        rep.trace = traceToJson(r.trace);
      } catch (const mpc::CapViolation& e) {
        emit({{"error", e.what()}, {"trace", traceToJson(e.trace())}});
        throw;
      }
    } else {
      out.emplace(aggregate(P, metric, cfg, solver));
    }
    const auto& res = *out;
    if (solver.name == "ulam-reconstruct") {
      rep.params["epsilon"] = rp.epsilon;
      rep.params["rho"] = rp.rho;
      rep.params["tupleCap"] = rp.tupleCap;
    }
    rep.output = oneLine(res.median);
    rep.cost = res.exactCost.value_or(cost(res.median, P, metric));
    rep.estimatedCost = res.estimatedCost;
    rep.candidateCount = res.candidateCount;
    rep.provenance = res.provenance.kind == Provenance::Kind::SampledInput ? "sampledInput" : "localSolution";
    rep.provenanceIndices = res.provenance.indices;
    if (verifyOpt) {
      try {
        const double opt = oracles::exactMedian(P, metric).cost;
        rep.opt = opt;
        if (opt > 0) {
          rep.ratio = rep.cost / opt;
        } else if (rep.cost == 0) {
          rep.ratio = 1.0;
        }
      } catch (const oracles::BudgetExceeded& e) {
        err_ << "verify skipped: " << e.what() << "\n";
      }
    }
    rep.seed = cfg.seed;
    rep.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(toJson(rep));
    return kOk;
  }

  // mpc -----------------------------------------------------------------
  std::string algorithm = "aggregate";

  int mpcCmd() {
    const auto P = readInstanceFile(file);
    const auto metric = parseMetric(g.metric);
    const bool ulam = algorithm == "ulam-reconstruct" ||
                      (algorithm == "aggregate" && (metric == Metric::Ulam || metric == Metric::WeightedUlam));
    const auto cfg = mpcConfig(P.n, ulam);
    Json res{{"algorithm", algorithm}};
    mpc::MpcTrace trace;
    try {
      if (algorithm == "distance") {
        if (!i || !j) throw InvalidInput("mpc distance needs --i and --j");
        if (isWeighted(metric) && !P.weights) throw InvalidInput(std::string(toString(metric)) + " needs a weight line");
        const auto r = mpc::mpcDistance(metric, member(P, *i), member(P, *j), cfg, P.weightsOrNull());
        res["metric"] = toString(metric);
        res["distance"] = r.value;
        trace = r.trace;
      } else if (algorithm == "hamming-median" || algorithm == "footrule-median" || algorithm == "kendall-median") {
        const auto r = algorithm == "hamming-median"    ? mpc::mpcHammingMedian(P, cfg)
                       : algorithm == "footrule-median" ? mpc::mpcFootruleMedian(P, cfg)
                                                        : mpc::mpcKendallMedian(P, cfg, seed());
        res["output"] = oneLine(r.output);
        trace = r.trace;
      } else if (algorithm == "ulam-reconstruct") {
        const auto r = mpc::mpcUlamReconstruct(P, reconstructParams(), cfg);
        res["output"] = oneLine(r.output);
        res["blockEd"] = r.blockEd;
        res["compositionWords"] = r.compositionWords;
        trace = r.trace;
      } else if (algorithm == "aggregate") {
        FrameworkConfig fc;
        fc.r = g.r.value_or(mpc::mpcLocalSolver(metric).r);
        fc.delta = g.delta;
        fc.seed = seed();
        const auto r = mpc::mpcAggregate(P, metric, cfg, fc, reconstructParams());
        res["metric"] = toString(metric);
        res["output"] = oneLine(r.result.median);
        res["estimatedCost"] = r.result.estimatedCost;
        res["cost"] = *r.result.exactCost;
        res["candidateCount"] = r.result.candidateCount;
        res["seed"] = fc.seed;
        trace = r.trace;
      } else {
        throw InvalidInput("mpc: unknown algorithm '" + algorithm + "'");
      }
    } catch (const mpc::CapViolation& e) {
      emit({{"algorithm", algorithm}, {"error", e.what()}, {"trace", traceToJson(e.trace())}});
      throw;
    }
    res["config"] = {{"n", cfg.n}, {"epsilon", cfg.epsilon}, {"c", cfg.c}, {"kappa", cfg.kappa},
                     {"wordCap", cfg.wordCap()}};
    res["trace"] = traceToJson(trace);
    emit(res);
    return kOk;
  }

  // verify --------------------------------------------------------------
  std::vector<std::string> suites;

  int verifyCmd() {
    std::vector<std::string> names = suites;
    if (names.empty() || (names.size() == 1 && names[0] == "all")) names = verify::suiteNames();
    bool all = true;
    Json reports = Json::array();
    for (const auto& name : names) {
      const auto rep = verify::runSuite(name);
      all = all && rep.passed();
      if (g.json) {
        Json checks = Json::array();
        for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        reports.push_back({{"suite", rep.name}, {"passed", rep.passed()}, {"seconds", rep.seconds}, {"checks", checks}});
      } else {
        out_ << "== " << rep.name << ": " << rep.title << "\n";
        for (const auto& c : rep.checks) {
          out_ << (c.passed ? "  pass  " : "  FAIL  ") << c.name;
          if (!c.detail.empty()) out_ << " [" << c.detail << "]";
          out_ << "\n";
        }
        out_ << (rep.passed() ? "PASS " : "FAIL ") << rep.name << " (" << rep.seconds << " s)\n";
      }
    }
    if (g.json) emit(reports);
    return all ? kOk : kVerifyFailed;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  std::optional<std::uint64_t> seed_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Runner runner(out, err);
  auto& g = runner.g;
  CLI::App app{"Rank aggregation: medians of permutations under Hamming, footrule, Kendall and Ulam distances"};
  app.name("rankagg");
  app.require_subcommand(1);
  app.add_option("--seed", g.seed, "RNG seed; drawn and printed when omitted");
  app.add_flag("--json", g.json, "JSON output");
  app.add_option("--metric", g.metric, "hamming, whamming, footrule, kendall, wkendall, ulam, wulam")
      ->capture_default_str();
  app.add_option("--epsilon", g.epsilon, "block exponent for reconstruction and MPC")->capture_default_str();
  app.add_option("--rho", g.rho, "window grid constant")->capture_default_str();
  app.add_option("--delta", g.delta, "framework accuracy parameter")->capture_default_str();
  app.add_option("--r", g.r, "subset size (default: the solver's)");
  app.add_option("--tuple-cap", g.tupleCap, "window tuples enumerated per block")->capture_default_str();
  app.add_option("--c", g.c, "MPC cap constant")->capture_default_str();
  app.add_option("--kappa", g.kappa, "MPC cap log exponent (default 1, or the relaxed value for Ulam reconstruction)");

  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("n", runner.genN, "permutation size")->required();
  gen->add_option("m", runner.genM, "number of permutations")->required();
  gen->add_option("--model", runner.model, "uniform or planted")->capture_default_str();
  gen->add_option("--moves", runner.moves, "random element moves per member (planted)")->capture_default_str();
  gen->add_option("-o,--out", runner.genOut, "output file; planted also writes <out>.center");

  auto* dist = app.add_subcommand("dist", "distances between members (numbered from 1)");
  dist->add_option("file", runner.file, "instance file")->required();
  dist->add_option("--i", runner.i);
  dist->add_option("--j", runner.j);
  dist->add_flag("--mpc", runner.useMpc, "compute on the simulated cluster");

  auto* slack = app.add_subcommand("slack", "total slack of x over the instance");
  slack->add_option("file", runner.file, "instance file")->required();
  slack->add_option("--x", runner.xText, "permutation in one-line notation");
  slack->add_option("--x-member", runner.xMember, "use member k as x");

  auto* agg = app.add_subcommand("aggregate", "approximate median; prints a JSON run report");
  agg->add_option("file", runner.file, "instance file")->required();
  agg->add_flag("--mpc", runner.useMpc, "run the framework on the simulated cluster");
  agg->add_flag("--verify", runner.verifyOpt, "compute the exact optimum when n is small enough");
  agg->add_flag("--full-eval", runner.fullEval, "evaluate candidates against every member");
  agg->add_option("--solver", runner.solverName, "default or reconstruct (Ulam)")->capture_default_str();

  auto* mpcCmd = app.add_subcommand("mpc", "run one MPC algorithm and print its trace");
  mpcCmd->add_option("file", runner.file, "instance file")->required();
  mpcCmd->add_option("--algorithm", runner.algorithm,
                     "distance, hamming-median, footrule-median, kendall-median, ulam-reconstruct, aggregate")
      ->capture_default_str();
  mpcCmd->add_option("--i", runner.i);
  mpcCmd->add_option("--j", runner.j);

  auto* ver = app.add_subcommand("verify", "run verification suites");
  ver->add_option("suites", runner.suites, "suite names, or all");

  for (auto* sub : {gen, dist, slack, agg, mpcCmd, ver}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*gen) return runner.gen();
    if (*dist) return runner.dist();
    if (*slack) return runner.slackCmd();
    if (*agg) return runner.aggregateCmd();
    if (*mpcCmd) return runner.mpcCmd();
    if (*ver) return runner.verifyCmd();
  } catch (const ParseError& e) {
    err << "error: " << runner.file << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    return kInputError;
  } catch (const mpc::CapViolation& e) {
    err << "error: " << e.what() << "\n";
    return kCapViolation;
  } catch (const mpc::MachineBudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCapViolation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace rankagg::cli
