#pragma once

// Tournament spec files and per-session output trees.
//
// Spec file (INI):
//
//   [session]
//   name = C4-R(8x3)
//   [game]
//   type = connect4
//   height = 8
//   width = 3
//   [grid]
//   epsilon = 0.6, 0.7, 0.8, 0.9
//   gamma = 0.6, 0.7, 0.8, 0.9
//   lambda = 0.6, 0.7, 0.8, 0.9
//   [match]
//   games = 10
//   [rating]
//   method = elo
//   [seed]
//   master = 1
//
// An rlgame section has type = rlgame and keys n, alpha, beta and optionally
// metric. Rating methods: elo, winrate. Lines starting with ';' are comments.
//
// Session directory: spec.ini, matches.csv, ratings.csv, ranking.csv and
// manifest (written last, so a directory without one is unfinished).

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rlsim/core/csv.hpp"
#include "rlsim/core/version.hpp"
#include "rlsim/game/text.hpp"
#include "rlsim/tournament/tournament.hpp"

namespace rlsim {

namespace spec_detail {

inline std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::vector<double> number_list(const std::string& s, const std::string& field) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(s);
  while (in >> token) {
    std::istringstream parts(token);
    std::string piece;
    while (std::getline(parts, piece, ',')) {
      if (piece.empty()) continue;
      try {
        std::size_t used = 0;
        out.push_back(std::stod(piece, &used));
        if (used != piece.size()) throw std::invalid_argument(piece);
      } catch (const std::logic_error&) {
        throw ParseError("spec: bad number '" + piece + "' in " + field);
      }
    }
  }
  if (out.empty()) throw ParseError("spec: empty value list for " + field);
  return out;
}

inline std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + number(v[i]);
  return out;
}

}  // namespace spec_detail

inline TournamentSpec parse_tournament_spec(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(std::string("spec: ") + e.what());
  }
  auto get = [&](const std::string& path) -> std::string {
    const auto v = tree.get_optional<std::string>(path);
    if (!v) throw ParseError("spec: missing " + path);
    return *v;
  };
  auto get_int = [&](const std::string& path) {
    const std::string s = get(path);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error&) {
      throw ParseError("spec: expected integer for " + path + ", got '" + s + "'");
    }
  };

  TournamentSpec spec;
  spec.name = tree.get<std::string>("session.name", spec.name);
  const std::string type = get("game.type");
  if (type == "connect4") {
    spec.game = Connect4Config{static_cast<int>(get_int("game.height")), static_cast<int>(get_int("game.width"))};
  } else if (type == "rlgame") {
    RLGameConfig c{static_cast<int>(get_int("game.n")), static_cast<int>(get_int("game.alpha")),
                   static_cast<int>(get_int("game.beta"))};
    if (const auto m = tree.get_optional<std::string>("game.metric")) c.metric = text_detail::metric_from(*m);
    spec.game = c;
  } else {
    throw ParseError("spec: unknown game type '" + type + "'");
  }
  if (const auto v = tree.get_optional<std::string>("grid.epsilon")) spec.grid.epsilon = spec_detail::number_list(*v, "grid.epsilon");
  if (const auto v = tree.get_optional<std::string>("grid.gamma")) spec.grid.gamma = spec_detail::number_list(*v, "grid.gamma");
  if (const auto v = tree.get_optional<std::string>("grid.lambda")) spec.grid.lambda = spec_detail::number_list(*v, "grid.lambda");
  if (tree.get_optional<std::string>("match.games")) spec.games_per_match = static_cast<int>(get_int("match.games"));
  spec.rating = tree.get<std::string>("rating.method", spec.rating);
  if (const auto v = tree.get_optional<std::string>("seed.master")) {
    try {
      std::size_t used = 0;
      if (!v->empty() && (*v)[0] == '-') throw std::invalid_argument(*v);
      spec.seed = std::stoull(*v, &used);
      if (used != v->size()) throw std::invalid_argument(*v);
    } catch (const std::logic_error&) {
      throw ParseError("spec: expected unsigned integer for seed.master, got '" + *v + "'");
    }
  }
  validate(spec);
  return spec;
}

inline TournamentSpec load_tournament_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  return parse_tournament_spec(in);
}

// Canonical text; its hash identifies the session's inputs.
inline std::string to_ini(const TournamentSpec& s) {
  std::ostringstream out;
  out << "[session]\nname = " << s.name << "\n\n[game]\n";
  if (const auto* c4 = std::get_if<Connect4Config>(&s.game)) {
    out << "type = connect4\nheight = " << c4->height << "\nwidth = " << c4->width << '\n';
  } else {
    const auto& rl = std::get<RLGameConfig>(s.game);
    out << "type = rlgame\nn = " << rl.n << "\nalpha = " << rl.alpha << "\nbeta = " << rl.beta
        << "\nmetric = " << text_detail::metric_name(rl.metric) << '\n';
  }
  out << "\n[grid]\nepsilon = " << spec_detail::join(s.grid.epsilon) << "\ngamma = " << spec_detail::join(s.grid.gamma)
      << "\nlambda = " << spec_detail::join(s.grid.lambda) << "\n\n[match]\ngames = " << s.games_per_match
      << "\n\n[rating]\nmethod = " << s.rating << "\n\n[seed]\nmaster = " << s.seed << '\n';
  return out.str();
}

inline std::string spec_hash(const TournamentSpec& s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_ini(s))));
  return buf;
}

inline std::string outcome_label(const MatchRecord& m, const GameResult& g) {
  const int s = g.a_score_sign();
  return s > 0 ? m.a : s < 0 ? m.b : "draw";
}

inline void write_matches_csv(std::ostream& out, const SessionResult& r) {
  csv::write_row(out, {"match_id", "round", "agent_a", "agent_b", "game", "white", "winner", "moves", "seed"});
  for (const auto& m : r.matches)
    for (std::size_t g = 0; g < m.games.size(); ++g) {
      const auto& game = m.games[g];
      csv::write_row(out, {m.id(), std::to_string(m.round), m.a, m.b, std::to_string(g + 1),
                           game.a_color == Player::White ? m.a : m.b, outcome_label(m, game),
                           std::to_string(game.plies), std::to_string(game.seed)});
    }
}

inline void write_ratings_csv(std::ostream& out, const SessionResult& r) {
  csv::write_row(out, {"round", "agent", "rating"});
  for (const auto& row : r.rating_trace) csv::write_row(out, {std::to_string(row.round), row.agent, csv::fixed(row.rating)});
}

inline void write_ranking_csv(std::ostream& out, const SessionResult& r) {
  csv::write_row(out, {"agent", "epsilon", "gamma", "lambda", "rating", "rank"});
  std::vector<std::size_t> order(r.agents.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return r.ranking[x] < r.ranking[y]; });
  for (std::size_t i : order) {
    const auto& a = r.agents[i];
    csv::write_row(out, {a.id, spec_detail::number(a.epsilon), spec_detail::number(a.gamma), spec_detail::number(a.lambda),
                         csv::fixed(r.ratings[i]), std::to_string(r.ranking[i])});
  }
}

inline void write_session_manifest(std::ostream& out, const SessionResult& r, long wall_time_ms) {
  out << "format: rlsim session v1\n";
  out << "name: " << r.spec.name << '\n';
  out << "spec_hash: " << spec_hash(r.spec) << '\n';
  out << "seed: " << r.spec.seed << '\n';
  out << "version: " << kVersion << '\n';
  out << "game: " << to_text(r.spec.game) << '\n';
  out << "rating: " << r.spec.rating << '\n';
  out << "agents: " << r.agents.size() << '\n';
  out << "games_per_match: " << r.spec.games_per_match << '\n';
  out << "rounds: " << r.rounds_completed << '/' << r.rounds_total << '\n';
  out << "games: " << r.games_played() << '/' << expected_games(r.spec) << '\n';
  out << "status: " << (r.complete ? "complete" : "incomplete") << '\n';
  if (!r.error.empty()) out << "error: " << r.error << '\n';
  out << "wall_time_ms: " << wall_time_ms << '\n';
}

namespace session_detail {

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& w) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    w(out);
    if (!out) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace session_detail

inline void write_session(const std::filesystem::path& dir, const SessionResult& r, long wall_time_ms) {
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / "manifest");
  session_detail::write_file(dir / "spec.ini", [&](std::ostream& o) { o << to_ini(r.spec); });
  session_detail::write_file(dir / "matches.csv", [&](std::ostream& o) { write_matches_csv(o, r); });
  session_detail::write_file(dir / "ratings.csv", [&](std::ostream& o) { write_ratings_csv(o, r); });
  session_detail::write_file(dir / "ranking.csv", [&](std::ostream& o) { write_ranking_csv(o, r); });
  session_detail::write_file(dir / "manifest", [&](std::ostream& o) { write_session_manifest(o, r, wall_time_ms); });
}

// Runs a session and persists it, including partial results on failure.
inline SessionResult run_and_write_session(const TournamentSpec& spec, const std::filesystem::path& dir, unsigned workers) {
  const auto start = std::chrono::steady_clock::now();
  SessionOptions options;
  options.workers = workers;
  SessionResult r = run_session(spec, options);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  write_session(dir, r, static_cast<long>(ms));
  return r;
}

// "key: value" lines.
inline std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find(": ");
    if (pos != std::string::npos) out[line.substr(0, pos)] = line.substr(pos + 2);
  }
  return out;
}

// True iff `dir` holds a finished session for exactly this spec.
inline bool session_is_complete(const std::filesystem::path& dir, const TournamentSpec& spec) {
  const auto m = read_manifest(dir / "manifest");
  const auto status = m.find("status");
  const auto hash = m.find("spec_hash");
  return status != m.end() && status->second == "complete" && hash != m.end() && hash->second == spec_hash(spec);
}

struct RankedAgent {
  std::string id;
  double epsilon = 0;
  double gamma = 0;
  double lambda = 0;
  double rating = 0;
  int rank = 0;
};

inline std::vector<RankedAgent> read_ranking_csv(std::istream& in) {
  const auto rows = csv::read(in);
  if (rows.empty()) throw ParseError("ranking csv: empty");
  const auto& header = rows[0];
  auto col = [&](const std::string& name) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
    return -1;
  };
  const auto id = col("agent"), e = col("epsilon"), g = col("gamma"), l = col("lambda"), rt = col("rating"), rk = col("rank");
  if (id < 0 || e < 0 || g < 0 || l < 0 || rk < 0) throw ParseError("ranking csv: missing column");
  std::vector<RankedAgent> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& row = rows[k];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) throw ParseError("ranking csv: row " + std::to_string(k + 1) + " has wrong width");
    try {
      out.push_back({row[static_cast<std::size_t>(id)], std::stod(row[static_cast<std::size_t>(e)]),
                     std::stod(row[static_cast<std::size_t>(g)]), std::stod(row[static_cast<std::size_t>(l)]),
                     rt >= 0 ? std::stod(row[static_cast<std::size_t>(rt)]) : 0.0,
                     std::stoi(row[static_cast<std::size_t>(rk)])});
    } catch (const std::logic_error&) {
      throw ParseError("ranking csv: bad number in row " + std::to_string(k + 1));
    }
  }
  return out;
}

inline std::vector<RankedAgent> read_ranking_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  return read_ranking_csv(in);
}

}  // namespace rlsim
