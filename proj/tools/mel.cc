// Copyright 2026 The MEL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: learn, verify, gen, compile-circuit,
// check-circuit and bench.
//
// Exit codes: 0 success, 1 tolerance failure, 2 input or usage error,
// 3 internal solver failure. Relative output paths are resolved against
// $MEL_OUTPUT_DIR when it is set.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mel/core/dp.h"
#include "mel/core/equilibrium.h"
#include "mel/core/errors.h"
#include "mel/core/generators.h"
#include "mel/core/io.h"
#include "mel/core/rng.h"
#include "mel/gcircuit/circuit.h"
#include "mel/gcircuit/coloring.h"
#include "mel/gcircuit/compile.h"
#include "mel/gcircuit/io.h"
#include "mel/spocmar/learner.h"
#include "mel/spocmar/params.h"

namespace mel {
namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

constexpr char kOutputDirEnv[] = "MEL_OUTPUT_DIR";

// Relative paths land under $MEL_OUTPUT_DIR; parent directories are created.
std::string OutputPath(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
      p = std::filesystem::path(dir) / p;
    }
  }
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p.string();
}

void WriteOutput(const std::string& path, const json& doc) {
  WriteJsonFile(OutputPath(path), doc);
}

double MaxOf(const std::vector<double>& xs) {
  return xs.empty() ? 0.0 : *std::max_element(xs.begin(), xs.end());
}

// ---------------------------------------------------------------- learn

struct LearnArgs {
  std::string game;
  uint64_t seed = 0;
  double epsilon = 0.1;
  double delta = 0.1;
  double c_j = 1.0;
  double c_n = 1.0;
  int64_t budget = 0;
  int max_stages = 0;
  std::string policy_out = "policy.json";
  std::string metrics_out = "metrics.json";
};

int RunLearn(const LearnArgs& args) {
  const LoadedGame loaded = GameFromJson(ReadJsonFile(args.game));
  if (!loaded.finite()) {
    throw UsageError("learn needs a finite-horizon game");
  }
  const FiniteHorizonGame& game = loaded.finite_game();
  RequireValid(game);
  LearnerParams params = DefaultParams(
      game.num_players(), game.num_states(), game.horizon(),
      game.joint_space().max_actions(), args.epsilon, args.delta, args.c_j,
      args.c_n);
  params.episode_budget = args.budget;
  if (args.max_stages > 0) params.max_stages = args.max_stages;
  const SpocmarResult result = RunSpocmar(game, params, args.seed);

  WriteOutput(args.policy_out, PolicyToJson(result.policy, game.joint_space()));
  const std::vector<double> gaps =
      EquilibriumGaps(game, result.policy, GapMode::kCceAtMu);
  json stages = json::array();
  for (const StageRecord& st : result.stages) {
    stages.push_back({{"stage", st.stage},
                      {"episodes", st.episodes},
                      {"visited_size", st.visited_size},
                      {"added", st.added.size()},
                      {"clamped_losses", st.clamped_losses}});
  }
  json metrics = {{"seed", args.seed},
                  {"episodes", result.episodes},
                  {"stages", result.stages.size()},
                  {"output_stage", result.output_stage},
                  {"visited_size", result.visited.size()},
                  {"terminated", result.terminated},
                  {"clamped_losses", result.clamped_losses},
                  {"diagnostic", result.diagnostic},
                  {"cce_gaps", gaps},
                  {"params", ParamsToJson(params)},
                  {"stage_log", std::move(stages)}};
  WriteOutput(args.metrics_out, metrics);
  std::cout << "episodes " << result.episodes << ", stages "
            << result.stages.size() << ", |V| " << result.visited.size()
            << ", max cce gap " << MaxOf(gaps) << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
  std::string game;
  std::string policy;
  std::string mode = "cce_at_mu";
  double tolerance = 1e-6;
  std::string out;
};

int RunVerify(const VerifyArgs& args) {
  const LoadedGame loaded = GameFromJson(ReadJsonFile(args.game));
  const GapMode mode = ParseGapMode(args.mode);
  const AnyPolicy policy =
      PolicyFromJson(ReadJsonFile(args.policy), loaded.joint_space(),
                     loaded.annotation ? &*loaded.annotation : nullptr);
  std::vector<double> gaps;
  if (loaded.finite()) {
    const FiniteHorizonGame& game = loaded.finite_game();
    RequireValid(game);
    if (!std::holds_alternative<NonstationaryJointPolicy>(policy)) {
      throw UsageError("finite-horizon games take nonstationary policies");
    }
    const auto& pi = std::get<NonstationaryJointPolicy>(policy);
    RequireValidPolicy(pi, game.joint_space(), game.horizon(),
                       game.num_states());
    gaps = EquilibriumGaps(game, pi, mode);
  } else {
    const DiscountedGame& game = loaded.discounted_game();
    RequireValid(game);
    if (const auto* pi = std::get_if<StationaryPolicy>(&policy)) {
      RequireValidPolicy(*pi, game.joint_space(), game.num_states());
      gaps = EquilibriumGaps(game, *pi, mode);
    } else {
      const auto& ns = std::get<NonstationaryJointPolicy>(policy);
      RequireValidPolicy(ns, game.joint_space(), ns.horizon(),
                         game.num_states());
      gaps = EquilibriumGaps(game, ns, mode);
    }
  }
  const double worst = MaxOf(gaps);
  const bool pass = worst <= args.tolerance;
  for (size_t i = 0; i < gaps.size(); ++i) {
    std::cout << "player " << i << " gap " << std::setprecision(10)
              << gaps[i] << "\n";
  }
  std::cout << (pass ? "within" : "exceeds") << " tolerance "
            << args.tolerance << "\n";
  if (!args.out.empty()) {
    WriteOutput(args.out, {{"mode", GapModeName(mode)},
                           {"gaps", gaps},
                           {"max_gap", worst},
                           {"tolerance", args.tolerance},
                           {"pass", pass}});
  }
  return pass ? kExitOk : kExitTolerance;
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::string family = "uniform";
  int states = 3;
  int players = 2;
  std::vector<int> actions = {2};
  int horizon = 0;
  double gamma = -1.0;
  uint64_t seed = 0;
  std::string out = "game.json";
};

int RunGen(const GenArgs& args) {
  if (args.states < 1 || args.players < 1) {
    throw InputError("sizes must be positive");
  }
  std::vector<int> counts = args.actions;
  if (counts.size() == 1) counts.assign(args.players, counts[0]);
  if (static_cast<int>(counts.size()) != args.players) {
    throw InputError("give one action count or one per player");
  }
  for (int a : counts) {
    if (a < 1) throw InputError("action counts must be positive");
  }
  if ((args.horizon > 0) == (args.gamma >= 0.0)) {
    throw UsageError("give exactly one of --horizon and --gamma");
  }
  const GameFamily family = ParseGameFamily(args.family);
  Rng rng(args.seed);
  TurnBasedAnnotation annotation;
  TurnBasedAnnotation* ann =
      family == GameFamily::kTurnBased ? &annotation : nullptr;
  json doc;
  if (args.horizon > 0) {
    const FiniteHorizonGame game = RandomFiniteGame(
        family, args.states, counts, args.horizon, rng, ann);
    RequireValid(game);
    doc = GameToJson(game, ann);
  } else {
    const DiscountedGame game =
        RandomDiscountedGame(family, args.states, counts, args.gamma, rng, ann);
    RequireValid(game);
    doc = GameToJson(game, ann);
  }
  doc["meta"] = {{"family", GameFamilyName(family)}, {"seed", args.seed}};
  WriteOutput(args.out, doc);
  return kExitOk;
}

// ------------------------------------------------------ compile-circuit

struct CompileArgs {
  std::string in;
  double epsilon = 0.0625;
  double gamma = 0.0;      // 0: default epsilon^2
  double eps_prime = 0.0;  // 0: default epsilon^4
  std::string coloring;    // Use this coloring on the normalized circuit.
  bool half_discount = false;
  std::string out = "compiled.json";
  std::string circuit_out;
  std::string coloring_out;
};

int RunCompile(const CompileArgs& args) {
  const GeneralizedCircuit raw = CircuitFromJson(ReadJsonFile(args.in));
  GeneralizedCircuit circuit;
  std::vector<double> phi;
  if (args.coloring.empty()) {
    ColoredCircuit colored =
        MakeValidColoring(NormalizeCircuit(raw), args.epsilon);
    circuit = std::move(colored.circuit);
    phi = std::move(colored.phi);
  } else {
    circuit = NormalizeCircuit(raw);
    phi = NodeValuesFromJson(circuit, ReadJsonFile(args.coloring));
  }
  CompileOptions options;
  options.epsilon = args.epsilon;
  if (args.gamma > 0.0) options.gamma = args.gamma;
  if (args.eps_prime > 0.0) options.eps_prime = args.eps_prime;
  CompiledGame compiled = Compile(circuit, phi, options);
  if (args.half_discount) compiled = RescaleToHalfDiscount(compiled);
  WriteOutput(args.out, CompiledGameToJson(compiled));
  if (!args.circuit_out.empty()) {
    WriteOutput(args.circuit_out, CircuitToJson(circuit));
  }
  if (!args.coloring_out.empty()) {
    WriteOutput(args.coloring_out, NodeValuesToJson(circuit, phi));
  }
  std::cout << "nodes " << circuit.num_nodes() << ", gates "
            << circuit.num_gates() << ", states "
            << compiled.game.num_states() << ", gamma "
            << compiled.game.gamma() << "\n";
  return kExitOk;
}

// -------------------------------------------------------- check-circuit

struct CheckArgs {
  std::string circuit;
  std::string assignment;
  double epsilon = 0.0;
  double min_fraction = 1.0;
  std::string out;
};

int RunCheck(const CheckArgs& args) {
  GeneralizedCircuit circuit = CircuitFromJson(ReadJsonFile(args.circuit));
  if (!IsNormalized(circuit)) circuit = NormalizeCircuit(circuit);
  const std::vector<double> pi =
      NodeValuesFromJson(circuit, ReadJsonFile(args.assignment));
  const AssignmentCheck check = CheckAssignment(circuit, pi, args.epsilon);
  const bool pass = check.fraction >= args.min_fraction;
  std::cout << check.num_satisfied << " of " << circuit.num_gates()
            << " gates satisfied (fraction " << check.fraction << ")\n";
  for (int g = 0; g < circuit.num_gates(); ++g) {
    if (!check.satisfied[g]) {
      std::cout << "unsatisfied gate " << g << " ("
                << GateKindName(circuit.gate(g).kind) << ") -> "
                << circuit.node_name(circuit.gate(g).output) << "\n";
    }
  }
  if (!args.out.empty()) {
    WriteOutput(args.out, {{"epsilon", args.epsilon},
                           {"satisfied", check.satisfied},
                           {"fraction", check.fraction},
                           {"pass", pass}});
  }
  return pass ? kExitOk : kExitTolerance;
}

// ---------------------------------------------------------------- bench

// One learner run per (game, seed, C_J) replica on uniform random games.
struct BenchSuite {
  int games = 3;
  int seeds = 2;
  int states = 2;
  int players = 2;
  int actions = 2;
  int horizon = 2;
  double epsilon = 0.1;
  double delta = 0.1;
  double c_n = 2.3e-4;
  std::vector<double> c_j = {1e-6, 3.4e-6, 1e-5};
  uint64_t seed = 0;

  static BenchSuite FromJson(const json& doc) {
    BenchSuite s;
    try {
      s.games = doc.value("games", s.games);
      s.seeds = doc.value("seeds", s.seeds);
      s.states = doc.value("states", s.states);
      s.players = doc.value("players", s.players);
      s.actions = doc.value("actions", s.actions);
      s.horizon = doc.value("horizon", s.horizon);
      s.epsilon = doc.value("epsilon", s.epsilon);
      s.delta = doc.value("delta", s.delta);
      s.c_n = doc.value("c_n", s.c_n);
      s.c_j = doc.value("c_j", s.c_j);
      s.seed = doc.value("seed", s.seed);
    } catch (const json::exception& e) {
      throw InputError(std::string("malformed suite: ") + e.what());
    }
    if (s.games < 1 || s.seeds < 1 || s.states < 1 || s.players < 1 ||
        s.actions < 1 || s.horizon < 1 || s.c_j.empty()) {
      throw InputError("suite sizes must be positive");
    }
    for (double c : s.c_j) {
      if (!(c > 0.0)) throw InputError("suite C_J values must be positive");
    }
    return s;
  }
};

struct BenchRow {
  int game = 0;
  uint64_t seed = 0;
  int64_t episodes = 0;
  double gap = 0.0;
};

BenchRow RunReplica(const BenchSuite& suite, int g, int k, int c) {
  Rng game_rng(DeriveSeed(suite.seed, g));
  const FiniteHorizonGame game = RandomFiniteGame(
      GameFamily::kUniform, suite.states,
      std::vector<int>(suite.players, suite.actions), suite.horizon, game_rng);
  const LearnerParams params = DefaultParams(
      suite.players, suite.states, suite.horizon, suite.actions,
      suite.epsilon, suite.delta, suite.c_j[c], suite.c_n);
  const uint64_t run_seed = static_cast<uint64_t>(k);
  const SpocmarResult result = RunSpocmar(game, params, run_seed);
  return {g, run_seed, result.episodes,
          MaxOf(EquilibriumGaps(game, result.policy, GapMode::kCceAtMu))};
}

int RunBench(const std::string& suite_path, int threads,
             const std::string& out) {
  const BenchSuite suite = BenchSuite::FromJson(
      suite_path.empty() ? json::object() : ReadJsonFile(suite_path));
  const int per_game = suite.seeds * static_cast<int>(suite.c_j.size());
  const int total = suite.games * per_game;
  std::vector<BenchRow> rows(total);
  std::vector<std::string> errors(total);
  // Replicas own their RNGs and write disjoint slots, so the table does not
  // depend on scheduling.
  auto work = [&](int worker, int stride) {
    for (int r = worker; r < total; r += stride) {
      const int g = r / per_game;
      const int k = (r % per_game) / static_cast<int>(suite.c_j.size());
      const int c = r % static_cast<int>(suite.c_j.size());
      try {
        rows[r] = RunReplica(suite, g, k, c);
      } catch (const std::exception& e) {
        errors[r] = e.what();
      }
    }
  };
  const int n = std::max(1, std::min(threads, total));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work, t, n);
  work(0, n);
  for (std::thread& t : pool) t.join();
  for (const std::string& e : errors) {
    if (!e.empty()) throw InputError("bench replica failed: " + e);
  }
  const std::string path = OutputPath(out);
  std::ofstream csv(path);
  if (!csv) throw InputError("cannot write " + path);
  csv << "game-id,seed,episodes,exact-gap\n";
  csv << std::setprecision(10);
  for (const BenchRow& row : rows) {
    csv << row.game << "," << row.seed << "," << row.episodes << ","
        << row.gap << "\n";
  }
  std::cout << "wrote " << total << " rows to " << path << "\n";
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Multi-agent equilibrium learning toolkit"};
  app.require_subcommand(1);

  LearnArgs learn;
  CLI::App* learn_cmd =
      app.add_subcommand("learn", "Run the decentralized CCE learner");
  learn_cmd->add_option("--game", learn.game, "Finite-horizon game JSON")
      ->required();
  learn_cmd->add_option("--seed", learn.seed, "Run seed");
  learn_cmd->add_option("--epsilon", learn.epsilon, "Target CCE gap");
  learn_cmd->add_option("--delta", learn.delta, "Failure probability");
  learn_cmd->add_option("--cj", learn.c_j, "Constant C_J of the sample floor");
  learn_cmd->add_option("--cn", learn.c_n, "Constant C_N of EstVisit");
  learn_cmd->add_option("--budget", learn.budget,
                        "Episode budget (0 = unlimited)");
  learn_cmd->add_option("--max-stages", learn.max_stages,
                        "Stage cap (0 = S * H)");
  learn_cmd->add_option("--policy-out", learn.policy_out, "Policy JSON path");
  learn_cmd->add_option("--metrics-out", learn.metrics_out,
                        "Metrics JSON path");

  VerifyArgs verify;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Compute exact equilibrium gaps");
  verify_cmd->add_option("--game", verify.game, "Game JSON")->required();
  verify_cmd->add_option("--policy", verify.policy, "Policy JSON")
      ->required();
  verify_cmd->add_option(
      "--mode", verify.mode,
      "cce_at_mu, perfect, ne_sg, pne_sg, wsne_sg or pwsne_sg");
  verify_cmd->add_option("--tolerance", verify.tolerance,
                         "Exit 0 iff the largest gap is at most this");
  verify_cmd->add_option("--out", verify.out, "Report JSON path");

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a random game");
  gen_cmd->add_option("--family", gen.family, "uniform, chain or turn-based");
  gen_cmd->add_option("--states", gen.states, "Number of states");
  gen_cmd->add_option("--players", gen.players, "Number of players");
  gen_cmd->add_option("--actions", gen.actions,
                      "Action count, or one per player")
      ->delimiter(',');
  gen_cmd->add_option("--horizon", gen.horizon, "Horizon of a finite game");
  gen_cmd->add_option("--gamma", gen.gamma, "Discount of a discounted game");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--out", gen.out, "Game JSON path");

  CompileArgs compile;
  CLI::App* compile_cmd = app.add_subcommand(
      "compile-circuit", "Compile a generalized circuit into a game");
  compile_cmd->add_option("--in", compile.in, "Circuit JSON")->required();
  compile_cmd->add_option("--epsilon", compile.epsilon, "Gate accuracy");
  compile_cmd->add_option("--gamma", compile.gamma,
                          "Discount (default epsilon^2)");
  compile_cmd->add_option("--eps-prime", compile.eps_prime,
                          "Unimprovability level (default epsilon^4)");
  compile_cmd->add_option("--coloring", compile.coloring,
                          "Coloring JSON for the normalized circuit; "
                          "skips the coloring construction");
  compile_cmd->add_flag("--half-discount", compile.half_discount,
                        "Rescale the output to discount 1/2");
  compile_cmd->add_option("--out", compile.out, "Compiled game JSON path");
  compile_cmd->add_option("--circuit-out", compile.circuit_out,
                          "Write the compiled circuit");
  compile_cmd->add_option("--coloring-out", compile.coloring_out,
                          "Write the coloring");

  CheckArgs check;
  CLI::App* check_cmd = app.add_subcommand(
      "check-circuit", "Check an assignment against a circuit");
  check_cmd->add_option("--circuit", check.circuit, "Circuit JSON")
      ->required();
  check_cmd->add_option("--assignment", check.assignment,
                        "Assignment JSON {node: value}")
      ->required();
  check_cmd->add_option("--epsilon", check.epsilon, "Gate accuracy")
      ->required();
  check_cmd->add_option("--min-fraction", check.min_fraction,
                        "Exit 0 iff this fraction of gates is satisfied");
  check_cmd->add_option("--out", check.out, "Report JSON path");

  std::string suite_path;
  int threads = 1;
  std::string bench_out = "bench.csv";
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Emit a CSV of episodes against exact CCE gap");
  bench_cmd->add_option("--suite", suite_path,
                        "Suite JSON; built-in defaults when omitted");
  bench_cmd->add_option("--threads", threads, "Worker threads");
  bench_cmd->add_option("--out", bench_out, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*learn_cmd) return RunLearn(learn);
    if (*verify_cmd) return RunVerify(verify);
    if (*gen_cmd) return RunGen(gen);
    if (*compile_cmd) return RunCompile(compile);
    if (*check_cmd) return RunCheck(check);
    if (*bench_cmd) return RunBench(suite_path, threads, bench_out);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace
}  // namespace mel

int main(int argc, char** argv) { return mel::Main(argc, argv); }
