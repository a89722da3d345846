// rlsim command-line front end.
//
//   rlsim complexity --n 5 --alpha 2 --beta 10 --samples 1000
//   rlsim complexity --table3
//   rlsim train --game connect4 --config 5x4 --games 1000 --checkpoint net.txt
//   rlsim tournament run --spec session.ini --out results --workers 4
//   rlsim analyze --rankings a/ranking.csv b/ranking.csv c/ranking.csv --game-label connect4 --out results/analysis
//   rlsim experiment preset --scale desk --out results
//   rlsim experiment run --specs specs/ --out results --dry-run

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rlsim/complexity/complexity.hpp"
#include "rlsim/complexity/reference.hpp"
#include "rlsim/learning/checkpoint.hpp"
#include "rlsim/learning/training.hpp"
#include "rlsim/orchestration/experiment.hpp"

namespace fs = std::filesystem;
using namespace rlsim;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: RLSIM_WORKERS or 1
  std::string out;
};

std::string ratio_text(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", r);
  return buf;
}

// "5x4" (connect4 height x width), "10x2x10" (rlgame n x alpha x beta) or the
// long form "rlgame n=10 alpha=2 beta=10".
GameConfig game_from(const std::string& game, const std::string& config) {
  if (config.find('=') != std::string::npos) return parse_config(game + " " + config);
  std::vector<int> v;
  std::stringstream ss(config);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    try {
      v.push_back(std::stoi(part));
    } catch (const std::logic_error&) {
      throw InvalidConfig("config", "cannot read '" + config + "'");
    }
  }
  if (game == "connect4" && v.size() == 2) return parse_config("connect4 height=" + std::to_string(v[0]) + " width=" + std::to_string(v[1]));
  if (game == "rlgame" && (v.size() == 2 || v.size() == 3))
    return parse_config("rlgame n=" + std::to_string(v[0]) + " alpha=" + std::to_string(v[1]) +
                        " beta=" + std::to_string(v.size() == 3 ? v[2] : 10));
  throw InvalidConfig("config", "expected HxW for connect4 or NxA[xB] for rlgame, got '" + config + "'");
}

void write_profile_csv(std::ostream& out, const complexity::ComplexityEstimate& e) {
  csv::write_row(out, {"n", "alpha", "beta", "white_on_field", "black_on_field", "weight", "samples", "legit", "fraction"});
  for (const auto& p : e.per_profile)
    csv::write_row(out, {std::to_string(e.config.n), std::to_string(e.config.alpha), std::to_string(e.config.beta),
                         std::to_string(p.profile.white), std::to_string(p.profile.black),
                         complexity::profile_weight(e.config, p.profile.white, p.profile.black).str(),
                         std::to_string(p.samples), std::to_string(p.legit), csv::fixed(p.fraction())});
}

int run_complexity(const Globals& g, int n, int alpha, int beta, std::uint64_t samples, bool table3, bool formula_only,
                   const std::string& csv_path) {
  const unsigned workers = resolve_workers(g.workers);
  if (table3) {
    std::ostringstream csv_out;
    csv::write_row(csv_out, {"n", "alpha", "beta", "formula", "ratio"});
    std::printf("%-8s %-12s %-7s %-12s %-7s\n", "n,alpha", "beta=1", "ratio", "beta=10", "ratio");
    for (const auto& row : complexity::reference::kRLGame) {
      std::string cells[4];
      for (int b = 0; b < 2; ++b) {
        const RLGameConfig c{row.n, row.alpha, b == 0 ? 1 : 10};
        const auto f = complexity::to_scientific(complexity::upper_bound(c));
        std::string ratio = "-";
        if (!formula_only) ratio = ratio_text(complexity::estimate(c, samples, derive_seed(g.seed, to_text(c)), workers).ratio);
        cells[2 * b] = f.str();
        cells[2 * b + 1] = ratio;
        csv::write_row(csv_out, {std::to_string(c.n), std::to_string(c.alpha), std::to_string(c.beta), f.str(), ratio});
      }
      std::printf("%-8s %-12s %-7s %-12s %-7s\n", (std::to_string(row.n) + "," + std::to_string(row.alpha)).c_str(),
                  cells[0].c_str(), cells[1].c_str(), cells[2].c_str(), cells[3].c_str());
      std::fflush(stdout);
    }
    if (!csv_path.empty()) std::ofstream(csv_path) << csv_out.str();
    return 0;
  }
  const RLGameConfig c{n, alpha, beta};
  validate(c);
  const auto e = complexity::estimate(c, samples, g.seed, workers);
  std::printf("n=%d alpha=%d beta=%d formula=%s ratio=%s\n", n, alpha, beta,
              complexity::to_scientific(e.formula_value).str().c_str(), ratio_text(e.ratio).c_str());
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    write_profile_csv(f, e);
  } else {
    write_profile_csv(std::cout, e);
  }
  return 0;
}

int run_train(const Globals& g, const std::string& game, const std::string& config, int games, AgentProfile agent,
              int eval_games, const std::string& checkpoint) {
  const auto cfg = game_from(game, config);
  auto net = initial_network(cfg, g.seed, agent.id);
  EvaluationResult before, after;
  std::visit(
      [&](const auto& c) {
        using C = std::decay_t<decltype(c)>;
        using S = std::conditional_t<std::is_same_v<C, Connect4Config>, Connect4State, RLGameState>;
        before = evaluate_vs_random<S>(net, c, eval_games, g.seed);
        self_play<S>(agent, net, c, games, g.seed);
        after = evaluate_vs_random<S>(net, c, eval_games, g.seed);
      },
      cfg);
  std::printf("%s: %d self-play games (epsilon=%g gamma=%g lambda=%g)\n", to_text(cfg).c_str(), games, agent.epsilon,
              agent.gamma, agent.lambda);
  std::printf("vs random before: %d/%d wins, %d draws (%.3f)\n", before.wins, before.games, before.draws, before.win_rate());
  std::printf("vs random after:  %d/%d wins, %d draws (%.3f)\n", after.wins, after.games, after.draws, after.win_rate());
  if (!checkpoint.empty()) {
    save_checkpoint(checkpoint, net, cfg);
    std::printf("checkpoint: %s\n", checkpoint.c_str());
  }
  return 0;
}

int run_tournament(const Globals& g, const std::string& spec_path) {
  auto spec = load_tournament_spec(spec_path);
  const fs::path out = resolve_output_root(g.out, "rlsim-out") / spec.name;
  const auto r = run_and_write_session(spec, out, resolve_workers(g.workers));
  std::printf("%s: %zu/%zu rounds, %ld games, %s\n", spec.name.c_str(), r.rounds_completed, r.rounds_total,
              static_cast<long>(r.games_played()), r.complete ? "complete" : "incomplete");
  if (!r.complete) {
    std::fprintf(stderr, "error: %s\n", r.error.c_str());
    return 1;
  }
  for (int rank = 1; rank <= 10; ++rank)
    for (std::size_t i = 0; i < r.agents.size(); ++i)
      if (r.ranking[i] == rank) std::printf("%3d  %s\n", rank, r.agents[i].id.c_str());
  std::printf("written to %s\n", out.string().c_str());
  return 0;
}

// Session label of a ranking file: its directory name for ".../<session>/ranking.csv",
// otherwise the file stem.
std::string label_of(const fs::path& p) {
  if (p.filename() == "ranking.csv" && p.has_parent_path() && !p.parent_path().filename().empty())
    return p.parent_path().filename().string();
  return p.stem().string();
}

int run_analyze(const Globals& g, const std::vector<std::string>& files, const std::string& game_label,
                KMeansOptions opt) {
  std::vector<std::string> labels;
  std::vector<std::vector<RankedAgent>> tables;
  for (const auto& f : files) {
    labels.push_back(label_of(f));
    tables.push_back(read_ranking_csv(fs::path(f)));
  }
  opt.seed = g.seed;
  opt.workers = resolve_workers(g.workers);
  const auto report = analyze(ranking_matrix(labels, tables), opt);
  const fs::path out = resolve_output_root(g.out, "rlsim-out") / "analysis" / game_label;
  write_analysis(out, report);
  std::printf("%s", format_heatmap(report.correlations).c_str());
  for (const auto& c : report.clusters.clusters)
    std::printf("%s: %zu agents, epsilon %.3f gamma %.3f lambda %.3f, mean rank %.2f\n", c.label.c_str(), c.size,
                c.epsilon, c.gamma, c.lambda, c.mean_rank);
  std::printf("written to %s\n", out.string().c_str());
  return 0;
}

int run_experiment_cmd(const Globals& g, const ExperimentManifest& m, bool dry_run) {
  if (dry_run) {
    std::printf("%s", dry_run_report(m).c_str());
    return 0;
  }
  ExperimentOptions opt;
  opt.out = resolve_output_root(g.out, "rlsim-out");
  opt.workers = resolve_workers(g.workers);
  opt.log = &std::cout;
  const auto r = run_experiment(m, opt);
  for (const auto& n : r.analysis_notes) std::printf("analysis %s\n", n.c_str());
  std::printf("%s: %s (%s)\n", m.name.c_str(), r.ok() ? "complete" : "incomplete", opt.out.string().c_str());
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-play tournament simulator for Connect-4 and RLGame"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads (default: RLSIM_WORKERS or 1)");
  app.add_option("--out", g.out, "Output root (default: RLSIM_OUT or ./rlsim-out)");

  auto* cx = app.add_subcommand("complexity", "State-space bound and legality ratio for RLGame")->fallthrough();
  int n = 5, alpha = 2, beta = 1;
  std::uint64_t samples = 1000;
  bool table3 = false, formula_only = false;
  std::string csv_path;
  cx->add_option("--n", n, "Board size")->capture_default_str();
  cx->add_option("--alpha", alpha, "Base size")->capture_default_str();
  cx->add_option("--beta", beta, "Pawns per side")->capture_default_str();
  cx->add_option("--samples", samples, "Samples per profile")->capture_default_str();
  cx->add_flag("--table3", table3, "Sweep all board/base pairs at beta 1 and 10");
  cx->add_flag("--formula-only", formula_only, "With --table3: skip the sampled ratios");
  cx->add_option("--csv", csv_path, "Write the CSV here instead of stdout");

  auto* tr = app.add_subcommand("train", "Self-play training smoke run")->fallthrough();
  std::string game = "connect4", config = "5x4", checkpoint;
  int games = 1000, eval_games = 200;
  AgentProfile agent{"train", 0.6, 0.9, 0.9};
  tr->add_option("--game", game, "connect4 or rlgame")->check(CLI::IsMember({"connect4", "rlgame"}))->capture_default_str();
  tr->add_option("--config", config, "HxW for connect4, NxA[xB] for rlgame")->capture_default_str();
  tr->add_option("--games", games, "Self-play games")->check(CLI::NonNegativeNumber)->capture_default_str();
  tr->add_option("--epsilon", agent.epsilon)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  tr->add_option("--gamma", agent.gamma)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  tr->add_option("--lambda", agent.lambda)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  tr->add_option("--eval-games", eval_games, "Games against the random mover")->check(CLI::NonNegativeNumber)->capture_default_str();
  tr->add_option("--checkpoint", checkpoint, "Save the trained network here");

  auto* tn = app.add_subcommand("tournament", "Round-robin tournament sessions")->fallthrough();
  tn->require_subcommand(1);
  auto* tn_run = tn->add_subcommand("run", "Run one session from a spec file")->fallthrough();
  std::string spec_path;
  tn_run->add_option("--spec", spec_path, "Session spec (.ini)")->required()->check(CLI::ExistingFile);

  auto* an = app.add_subcommand("analyze", "Correlation and clustering over session rankings")->fallthrough();
  std::vector<std::string> rankings;
  std::string game_label = "game";
  KMeansOptions km;
  bool uniform_init = false;
  an->add_option("--rankings", rankings, "ranking.csv files, one per session")->required()->check(CLI::ExistingFile);
  an->add_option("--game-label", game_label, "Name of the analysis directory")->capture_default_str();
  an->add_option("--k", km.k)->capture_default_str();
  an->add_option("--reruns", km.reruns)->capture_default_str();
  an->add_option("--max-iter", km.max_iter)->capture_default_str();
  an->add_flag("--uniform-init", uniform_init, "Seed k-means uniformly instead of k-means++");

  auto* ex = app.add_subcommand("experiment", "Multi-session experiments")->fallthrough();
  ex->require_subcommand(1);
  auto* ex_preset = ex->add_subcommand("preset", "The six standard sessions")->fallthrough();
  std::string scale = "desk", write_specs;
  bool dry_run = false;
  ex_preset->add_option("--scale", scale, "desk or full")->check(CLI::IsMember({"desk", "full"}))->capture_default_str();
  ex_preset->add_option("--write-specs", write_specs, "Write the session specs to this directory and stop");
  ex_preset->add_flag("--dry-run", dry_run, "Print the schedule and game counts only");
  auto* ex_run = ex->add_subcommand("run", "Run every spec file in a directory")->fallthrough();
  std::string specs_dir;
  ex_run->add_option("--specs", specs_dir, "Directory of .ini session specs")->required()->check(CLI::ExistingDirectory);
  ex_run->add_flag("--dry-run", dry_run, "Print the schedule and game counts only");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cx->parsed()) return run_complexity(g, n, alpha, beta, samples, table3, formula_only, csv_path);
    if (tr->parsed()) return run_train(g, game, config, games, agent, eval_games, checkpoint);
    if (tn_run->parsed()) return run_tournament(g, spec_path);
    if (an->parsed()) {
      km.plus_plus = !uniform_init;
      return run_analyze(g, rankings, game_label, km);
    }
    if (ex_preset->parsed()) {
      const auto m = preset_standard_experiment(scale_from(scale), g.seed);
      if (!write_specs.empty()) {
        write_experiment_specs(write_specs, m);
        std::printf("wrote %zu specs to %s\n", m.sessions.size(), write_specs.c_str());
        return 0;
      }
      return run_experiment_cmd(g, m, dry_run);
    }
    if (ex_run->parsed()) return run_experiment_cmd(g, load_experiment_specs(specs_dir, g.seed), dry_run);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
