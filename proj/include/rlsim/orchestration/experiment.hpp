#pragma once

// Multi-session experiments: presets for the six standard sessions, a
// resumable runner and the per-game / cross-game analysis pass.
//
// Output tree under the output root:
//
//   manifest                      experiment status, one line per session
//   <session name>/               spec.ini, matches.csv, ratings.csv,
//                                 ranking.csv, manifest
//   analysis/connect4/, analysis/rlgame/
//                                 correlations, clusters, summaries, shifts,
//                                 linkage for the sessions of one game
//   analysis/cross-game/          correlations over every session

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rlsim/analysis/analysis.hpp"
#include "rlsim/tournament/session_io.hpp"

namespace rlsim {

enum class Scale { Desk, Full };

inline std::string to_string(Scale s) { return s == Scale::Desk ? "desk" : "full"; }

inline Scale scale_from(const std::string& s) {
  if (s == "desk") return Scale::Desk;
  if (s == "full") return Scale::Full;
  throw InvalidConfig("scale", "expected desk or full, got '" + s + "'");
}

struct ExperimentManifest {
  std::string name;
  std::uint64_t seed = 1;
  std::vector<TournamentSpec> sessions;
};

inline std::string session_label(const GameConfig& g) {
  if (const auto* c4 = std::get_if<Connect4Config>(&g))
    return "C4-R(" + std::to_string(c4->height) + "x" + std::to_string(c4->width) + ")";
  const auto& rl = std::get<RLGameConfig>(g);
  return "RL-R(" + std::to_string(rl.n) + "x" + std::to_string(rl.alpha) + ")";
}

inline std::string game_family(const GameConfig& g) {
  return std::holds_alternative<Connect4Config>(g) ? "connect4" : "rlgame";
}

// Three Connect-4 and three RLGame sessions (beta = 10) in increasing
// complexity. Full: 64 agents, 10 games per match. Desk: 8 agents, 4 games.
inline ExperimentManifest preset_standard_experiment(Scale scale, std::uint64_t seed = 1) {
  ExperimentManifest m;
  m.name = "standard-" + to_string(scale);
  m.seed = seed;
  const GameConfig games[] = {Connect4Config{8, 3},     Connect4Config{7, 4},     Connect4Config{6, 7},
                              RLGameConfig{5, 2, 10}, RLGameConfig{7, 2, 10}, RLGameConfig{10, 2, 10}};
  for (const auto& g : games) {
    TournamentSpec s;
    s.game = g;
    s.name = session_label(g);
    if (scale == Scale::Desk) {
      s.grid = {{0.6, 0.9}, {0.6, 0.9}, {0.6, 0.9}};
      s.games_per_match = 4;
    }
    s.seed = derive_seed(seed, s.name);
    m.sessions.push_back(s);
  }
  return m;
}

inline void validate(const ExperimentManifest& m) {
  std::set<std::string> names;
  for (const auto& s : m.sessions) {
    validate(s);
    if (!names.insert(s.name).second) throw InvalidConfig("sessions", "duplicate session name " + s.name);
    if (s.name.find('/') != std::string::npos || s.name == "analysis" || s.name == "." || s.name == "..")
      throw InvalidConfig("sessions", "unusable session name " + s.name);
  }
}

inline std::string manifest_hash(const ExperimentManifest& m) {
  std::string all = m.name + "\n" + std::to_string(m.seed) + "\n";
  for (const auto& s : m.sessions) all += to_ini(s);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(all)));
  return buf;
}

// Schedule and game counts without playing anything.
inline std::string dry_run_report(const ExperimentManifest& m) {
  validate(m);
  std::ostringstream out;
  out << "experiment " << m.name << " (" << m.sessions.size() << " sessions)\n";
  long total = 0;
  for (const auto& s : m.sessions) {
    const auto agents = build_agent_grid(s.grid).size();
    const auto rounds = schedule(agents);
    std::size_t matches = 0;
    for (const auto& r : rounds) matches += r.size();
    const long games = expected_games(s);
    total += games;
    out << "  " << s.name << ": " << to_text(s.game) << ", " << agents << " agents, " << rounds.size() << " rounds, "
        << matches << " matches, " << games << " games, rating " << s.rating << '\n';
  }
  out << "total games: " << total << '\n';
  return out.str();
}

struct SessionStatus {
  std::string name;
  std::string status;  // complete, resumed, incomplete, failed
  std::string detail;
};

struct ExperimentResult {
  std::vector<SessionStatus> sessions;
  std::vector<std::string> analysis_notes;
  bool ok() const {
    for (const auto& s : sessions)
      if (s.status != "complete" && s.status != "resumed") return false;
    return true;
  }
};

struct ExperimentOptions {
  std::filesystem::path out = "rlsim-out";
  unsigned workers = 1;
  KMeansOptions kmeans{};
  std::ostream* log = nullptr;
};

namespace experiment_detail {

inline void write_manifest(const std::filesystem::path& out, const ExperimentManifest& m, const ExperimentResult& r,
                           long wall_time_ms) {
  session_detail::write_file(out / "manifest", [&](std::ostream& o) {
    o << "format: rlsim experiment v1\n";
    o << "name: " << m.name << '\n';
    o << "manifest_hash: " << manifest_hash(m) << '\n';
    o << "seed: " << m.seed << '\n';
    o << "version: " << kVersion << '\n';
    for (const auto& s : r.sessions) {
      o << "session: " << s.name << " " << s.status;
      if (!s.detail.empty()) o << " (" << s.detail << ")";
      o << '\n';
    }
    for (const auto& n : r.analysis_notes) o << "analysis: " << n << '\n';
    o << "status: " << (r.ok() ? "complete" : "incomplete") << '\n';
    o << "wall_time_ms: " << wall_time_ms << '\n';
  });
}

}  // namespace experiment_detail

// Runs sessions in order (skipping finished ones with a matching spec hash),
// then analyses each game's sessions and all sessions together.
inline ExperimentResult run_experiment(const ExperimentManifest& m, const ExperimentOptions& opt) {
  validate(m);
  const auto start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(opt.out);
  ExperimentResult res;
  auto log = [&](const std::string& line) {
    if (opt.log) *opt.log << line << std::endl;
  };

  for (const auto& spec : m.sessions) {
    const auto dir = opt.out / spec.name;
    if (session_is_complete(dir, spec)) {
      res.sessions.push_back({spec.name, "resumed", ""});
      log(spec.name + ": already complete, skipped");
      continue;
    }
    try {
      const auto r = run_and_write_session(spec, dir, opt.workers);
      res.sessions.push_back({spec.name, r.complete ? "complete" : "incomplete", r.error});
      log(spec.name + ": " + res.sessions.back().status + ", " + std::to_string(r.games_played()) + " games");
    } catch (const std::exception& e) {
      res.sessions.push_back({spec.name, "failed", e.what()});
      log(spec.name + ": failed: " + e.what());
    }
  }

  auto usable = [&](const TournamentSpec& s) { return session_is_complete(opt.out / s.name, s); };
  auto load = [&](const std::vector<const TournamentSpec*>& specs) {
    std::vector<std::string> labels;
    std::vector<std::vector<RankedAgent>> tables;
    for (const auto* s : specs) {
      labels.push_back(s->name);
      tables.push_back(read_ranking_csv(opt.out / s->name / "ranking.csv"));
    }
    return ranking_matrix(labels, tables);
  };

  std::vector<const TournamentSpec*> all;
  std::map<std::string, std::vector<const TournamentSpec*>> families;
  for (const auto& s : m.sessions)
    if (usable(s)) {
      all.push_back(&s);
      families[game_family(s.game)].push_back(&s);
    }
  for (const auto& [family, specs] : families) {
    try {
      if (specs.size() < 2) {
        res.analysis_notes.push_back(family + ": skipped, fewer than two complete sessions");
        continue;
      }
      KMeansOptions k = opt.kmeans;
      k.seed = derive_seed(m.seed, "kmeans:" + family);
      write_analysis(opt.out / "analysis" / family, analyze(load(specs), k));
      res.analysis_notes.push_back(family + ": " + std::to_string(specs.size()) + " sessions");
    } catch (const std::exception& e) {
      res.analysis_notes.push_back(family + ": failed: " + e.what());
    }
  }
  if (all.size() >= 2) {
    try {
      const auto t = correlation_heatmap(load(all));
      const auto dir = opt.out / "analysis" / "cross-game";
      std::filesystem::create_directories(dir);
      session_detail::write_file(dir / "correlations.csv", [&](std::ostream& o) { write_correlations_csv(o, t); });
      session_detail::write_file(dir / "correlations.txt", [&](std::ostream& o) { o << format_heatmap(t); });
      res.analysis_notes.push_back("cross-game: " + std::to_string(all.size()) + " sessions");
    } catch (const std::exception& e) {
      res.analysis_notes.push_back(std::string("cross-game: failed: ") + e.what());
    }
  }

  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  experiment_detail::write_manifest(opt.out, m, res, static_cast<long>(ms));
  return res;
}

// Writes one spec file per session ("NN-<name>.ini") into `dir`.
inline void write_experiment_specs(const std::filesystem::path& dir, const ExperimentManifest& m) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < m.sessions.size(); ++i) {
    char prefix[8];
    std::snprintf(prefix, sizeof prefix, "%02zu-", i + 1);
    session_detail::write_file(dir / (prefix + m.sessions[i].name + ".ini"),
                               [&](std::ostream& o) { o << to_ini(m.sessions[i]); });
  }
}

// Reads every *.ini in `dir`, in file name order.
inline ExperimentManifest load_experiment_specs(const std::filesystem::path& dir, std::uint64_t seed = 1) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".ini") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InvalidConfig("specs", "no .ini files in " + dir.string());
  ExperimentManifest m;
  m.name = dir.filename().string();
  m.seed = seed;
  for (const auto& f : files) m.sessions.push_back(load_tournament_spec(f));
  return m;
}

// Environment overrides: RLSIM_OUT for the output root, RLSIM_WORKERS for the
// worker count. Explicit values win over the environment.
inline std::filesystem::path resolve_output_root(const std::string& flag, const std::string& fallback) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RLSIM_OUT"); env && *env) return env;
  return fallback;
}

inline unsigned resolve_workers(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("RLSIM_WORKERS"); env && *env) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
    }
    throw InvalidConfig("RLSIM_WORKERS", std::string("expected a positive integer, got '") + env + "'");
  }
  return 1;
}

}  // namespace rlsim
