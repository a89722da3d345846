#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "rlsim/tournament/session_io.hpp"
#include "rlsim/tournament/tournament.hpp"

using namespace rlsim;

namespace {

TournamentSpec small_spec(unsigned games = 2) {
  TournamentSpec s;
  s.name = "mini";
  s.game = Connect4Config{5, 4};
  s.grid = {{0.6, 0.9}, {0.6, 0.9}, {0.6, 0.9}};
  s.games_per_match = static_cast<int>(games);
  s.seed = 7;
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string without_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("wall_time_ms:", 0) != 0) out += line + "\n";
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("rlsim_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(AgentGrid, CartesianProductWithCanonicalIds) {
  const auto full = build_agent_grid(AgentGrid{});
  ASSERT_EQ(full.size(), 64u);
  EXPECT_EQ(full.front().id, "e06-g06-l06");
  EXPECT_EQ(full[1].id, "e06-g06-l07");
  EXPECT_EQ(full.back().id, "e09-g09-l09");
  std::set<std::string> ids;
  for (const auto& a : full) ids.insert(a.id);
  EXPECT_EQ(ids.size(), 64u);

  EXPECT_EQ(build_agent_grid({{0.5}, {0.5}, {0.5}}).size(), 1u);
  EXPECT_EQ(build_agent_grid({{0.6, 0.7}, {0.6, 0.7, 0.8}, {0.6, 0.7, 0.8, 0.9}}).size(), 24u);
  EXPECT_EQ(agent_id(0.6, 0.7, 0.9), "e06-g07-l09");
  EXPECT_EQ(agent_id(1.0, 0.0, 0.65), "e10-g00-l065");
  EXPECT_THROW(build_agent_grid({{}, {0.5}, {0.5}}), InvalidConfig);
  EXPECT_THROW(build_agent_grid({{1.5}, {0.5}, {0.5}}), InvalidConfig);
}

TEST(Schedule, EveryPairExactlyOnceAndRoundsDisjoint) {
  for (std::size_t n = 2; n <= 64; ++n) {
    const auto rounds = schedule(n);
    ASSERT_EQ(rounds.size(), n % 2 == 0 ? n - 1 : n) << n;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& round : rounds) {
      EXPECT_EQ(round.size(), n / 2) << n;
      std::set<std::size_t> busy;
      for (const auto& p : round) {
        ASSERT_LT(p.a, n);
        ASSERT_LT(p.b, n);
        ASSERT_NE(p.a, p.b);
        EXPECT_TRUE(busy.insert(p.a).second);
        EXPECT_TRUE(busy.insert(p.b).second);
        EXPECT_TRUE(seen.insert({std::min(p.a, p.b), std::max(p.a, p.b)}).second);
      }
    }
    EXPECT_EQ(seen.size(), n * (n - 1) / 2) << n;
  }
  EXPECT_EQ(schedule(1).size(), 0u);
  std::size_t matches = 0;
  for (const auto& r : schedule(64)) matches += r.size();
  EXPECT_EQ(matches, 2016u);
}

TEST(RunMatch, AccountingAndColourAlternation) {
  const Connect4Config cfg{5, 4};
  const AgentProfile a{"a", 0.8, 0.9, 0.0};
  const AgentProfile b{"b", 0.8, 0.9, 0.0};
  ValueNetwork na(encode_len(cfg)), nb(encode_len(cfg));
  const auto m = run_match(a, na, b, nb, cfg, 10, 3);
  ASSERT_EQ(m.games.size(), 10u);
  EXPECT_EQ(m.wins_a() + m.wins_b() + m.draws(), 10);
  int a_white = 0;
  for (std::size_t g = 0; g < 10; ++g) {
    EXPECT_EQ(m.games[g].a_color, g % 2 == 0 ? Player::White : Player::Black);
    a_white += m.games[g].a_color == Player::White;
  }
  EXPECT_EQ(a_white, 5);
  EXPECT_EQ(na, ValueNetwork(encode_len(cfg)));
  EXPECT_THROW(run_match(a, na, b, nb, cfg, 0, 3), InvalidConfig);
}

TEST(RunMatch, DeterministicReplay) {
  const RLGameConfig cfg{5, 2, 3};
  const AgentProfile a{"a", 0.7, 0.8, 0.9};
  const AgentProfile b{"b", 0.9, 0.6, 0.6};
  auto run = [&] {
    auto na = ValueNetwork::random(encode_len(cfg), 1);
    auto nb = ValueNetwork::random(encode_len(cfg), 2);
    const auto m = run_match(a, na, b, nb, cfg, 6, 99);
    std::vector<std::tuple<int, int, std::uint64_t>> games;
    for (const auto& g : m.games) games.emplace_back(static_cast<int>(g.outcome), g.plies, g.seed);
    return std::tuple{games, na, nb};
  };
  const auto first = run();
  EXPECT_EQ(first, run());
  EXPECT_NE(std::get<1>(first), ValueNetwork::random(encode_len(cfg), 1));
}

TEST(Rating, EloMatchesHandComputation) {
  EloRating elo;
  elo.reset(3);
  elo.record_game(0, 1, 1.0);
  EXPECT_DOUBLE_EQ(elo.value(0), 1508.0);
  EXPECT_DOUBLE_EQ(elo.value(1), 1492.0);
  elo.record_game(1, 2, 0.5);
  // expected score of 1492 against 1500
  const double e = 1.0 / (1.0 + std::pow(10.0, 8.0 / 400.0));
  EXPECT_NEAR(elo.value(1), 1492.0 + 16.0 * (0.5 - e), 1e-12);
  EXPECT_NEAR(elo.value(0) + elo.value(1) + elo.value(2), 4500.0, 1e-9);
}

TEST(Rating, WinRateAndDominance) {
  WinRateRating w;
  w.reset(4);
  for (std::size_t x = 1; x < 4; ++x)
    for (int g = 0; g < 3; ++g) w.record_game(0, x, 1.0);
  w.record_game(1, 2, 0.5);
  EXPECT_DOUBLE_EQ(w.value(0), 1.0);
  EXPECT_DOUBLE_EQ(w.value(1), 0.5 / 4);
  EXPECT_DOUBLE_EQ(w.value(3), 0.0);
  const auto r = rank({w.value(0), w.value(1), w.value(2), w.value(3)}, {"d", "c", "b", "a"});
  EXPECT_EQ(r[0], 1);
  EXPECT_THROW(make_rating("glicko"), InvalidConfig);
}

TEST(Rank, OrderAndTieBreaks) {
  EXPECT_EQ(rank({3.0, 1.0, 2.0}, {"x", "y", "z"}), (std::vector<int>{1, 3, 2}));
  EXPECT_EQ(rank({1.0, 1.0, 1.0}, {"c", "a", "b"}), (std::vector<int>{3, 1, 2}));
  // equal ratings: head-to-head wins inside the tie group come first
  std::vector<std::vector<int>> h2h{{0, 0, 0}, {3, 0, 9}, {5, 0, 0}};
  EXPECT_EQ(rank({2.0, 2.0, 2.0}, {"a", "b", "c"}, h2h), (std::vector<int>{3, 1, 2}));
  // wins against agents outside the group do not count
  std::vector<std::vector<int>> h2h2{{0, 0, 9}, {1, 0, 0}, {0, 0, 0}};
  EXPECT_EQ(rank({2.0, 2.0, 1.0}, {"a", "b", "c"}, h2h2), (std::vector<int>{2, 1, 3}));

  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + uniform_index(rng, 30);
    std::vector<double> r(n);
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = static_cast<double>(uniform_index(rng, 5));
      ids[i] = "id" + std::to_string(i);
    }
    const auto ranks = rank(r, ids);
    std::vector<int> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(sorted[i], static_cast<int>(i + 1));
    const auto top = std::find(ranks.begin(), ranks.end(), 1) - ranks.begin();
    for (double v : r) EXPECT_GE(r[static_cast<std::size_t>(top)], v);
  }
}

TEST(Session, MiniSessionInvariants) {
  const auto spec = small_spec(2);
  const auto r = run_session(spec);
  ASSERT_TRUE(r.complete) << r.error;
  ASSERT_EQ(r.agents.size(), 8u);
  EXPECT_EQ(r.matches.size(), 28u);
  EXPECT_EQ(r.games_played(), expected_games(spec));
  EXPECT_EQ(r.games_played(), 56);
  EXPECT_EQ(r.rounds_completed, 7u);
  std::vector<int> sorted = r.ranking;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 8; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i + 1);
  std::map<std::string, int> appearances;
  for (const auto& m : r.matches) {
    ++appearances[m.a];
    ++appearances[m.b];
  }
  for (const auto& a : r.agents) EXPECT_EQ(appearances[a.id], 7);
  EXPECT_EQ(r.rating_trace.size(), 8u * 8u);
  const auto best = std::find(r.ranking.begin(), r.ranking.end(), 1) - r.ranking.begin();
  for (double v : r.ratings) EXPECT_GE(r.ratings[static_cast<std::size_t>(best)], v);
}

TEST(Session, ReproducibleAcrossRunsAndWorkerCounts) {
  const auto spec = small_spec(3);
  SessionOptions four;
  four.workers = 4;
  const auto a = run_session(spec);
  const auto b = run_session(spec, four);
  std::ostringstream ma, mb, ra, rb, ka, kb;
  write_matches_csv(ma, a);
  write_matches_csv(mb, b);
  write_ratings_csv(ra, a);
  write_ratings_csv(rb, b);
  write_ranking_csv(ka, a);
  write_ranking_csv(kb, b);
  EXPECT_EQ(ma.str(), mb.str());
  EXPECT_EQ(ra.str(), rb.str());
  EXPECT_EQ(ka.str(), kb.str());
  EXPECT_EQ(a.ranking, b.ranking);
}

TEST(Session, RLGameSessionRuns) {
  TournamentSpec s = small_spec(2);
  s.game = RLGameConfig{5, 2, 3};
  s.grid = {{0.6, 0.9}, {0.8}, {0.7, 0.9}};
  s.rating = "winrate";
  const auto r = run_session(s);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.games_played(), 12);
}

TEST(Session, FailedMatchKeepsEarlierResultsAndIsMarkedIncomplete) {
  const auto spec = small_spec(2);
  SessionOptions opt;
  opt.workers = 2;
  opt.before_match = [](std::size_t round, const Pairing&) {
    if (round == 3) throw TrainingDivergence("injected");
  };
  const auto r = run_session(spec, opt);
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.rounds_completed, 2u);
  EXPECT_EQ(r.matches.size(), 8u);
  EXPECT_NE(r.error.find("injected"), std::string::npos);
  EXPECT_NE(r.error.find("round 3"), std::string::npos);

  const auto dir = scratch("partial");
  write_session(dir, r, 0);
  const auto manifest = read_manifest(dir / "manifest");
  EXPECT_EQ(manifest.at("status"), "incomplete");
  EXPECT_EQ(manifest.at("rounds"), "2/7");
  EXPECT_FALSE(session_is_complete(dir, spec));
  std::filesystem::remove_all(dir);
}

TEST(SpecFile, ParseAndCanonicalRoundTrip) {
  std::istringstream in(R"(; desk example
[session]
name = RL-R(5x2)

[game]
type = rlgame
n = 5
alpha = 2
beta = 10

[grid]
epsilon = 0.6, 0.9
gamma = 0.6 0.9
lambda = 0.7

[match]
games = 4

[rating]
method = winrate

[seed]
master = 12
)");
  const auto s = parse_tournament_spec(in);
  EXPECT_EQ(s.name, "RL-R(5x2)");
  const auto& rl = std::get<RLGameConfig>(s.game);
  EXPECT_EQ(rl.n, 5);
  EXPECT_EQ(rl.beta, 10);
  EXPECT_EQ(rl.metric, DistanceMetric::Chebyshev);
  EXPECT_EQ(s.grid.gamma, (std::vector<double>{0.6, 0.9}));
  EXPECT_EQ(s.grid.lambda, (std::vector<double>{0.7}));
  EXPECT_EQ(s.games_per_match, 4);
  EXPECT_EQ(s.rating, "winrate");
  EXPECT_EQ(s.seed, 12u);

  std::istringstream again(to_ini(s));
  const auto t = parse_tournament_spec(again);
  EXPECT_EQ(to_ini(t), to_ini(s));
  EXPECT_EQ(spec_hash(t), spec_hash(s));
  auto u = t;
  u.seed = 13;
  EXPECT_NE(spec_hash(u), spec_hash(s));
}

TEST(SpecFile, RejectsBadInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_tournament_spec(in);
  };
  EXPECT_THROW(parse("[game]\ntype = chess\n"), ParseError);
  EXPECT_THROW(parse("[game]\ntype = connect4\nheight = 6\n"), ParseError);
  EXPECT_THROW(parse("[game]\ntype = connect4\nheight = six\nwidth = 7\n"), ParseError);
  EXPECT_THROW(parse("[game]\ntype = connect4\nheight = 3\nwidth = 3\n"), InvalidConfig);
  EXPECT_THROW(parse("[game]\ntype = connect4\nheight = 6\nwidth = 7\n[match]\ngames = 0\n"), InvalidConfig);
  EXPECT_THROW(parse("[game]\ntype = connect4\nheight = 6\nwidth = 7\n[grid]\nepsilon = 0.5, x\n"), ParseError);
  EXPECT_THROW(parse("[game]\ntype = connect4\nheight = 6\nwidth = 7\n[rating]\nmethod = glicko\n"), InvalidConfig);
  EXPECT_THROW(parse("[game\n"), ParseError);
}

TEST(SessionFiles, WrittenTreeIsCompleteAndStable) {
  const auto spec = small_spec(2);
  const auto d1 = scratch("tree1");
  const auto d2 = scratch("tree2");
  const auto r = run_and_write_session(spec, d1, 1);
  run_and_write_session(spec, d2, 3);
  for (const char* f : {"spec.ini", "matches.csv", "ratings.csv", "ranking.csv", "manifest"}) {
    ASSERT_TRUE(std::filesystem::exists(d1 / f)) << f;
    EXPECT_EQ(without_wall_time(slurp(d1 / f)), without_wall_time(slurp(d2 / f))) << f;
  }
  EXPECT_TRUE(session_is_complete(d1, spec));
  auto other = spec;
  other.seed = 8;
  EXPECT_FALSE(session_is_complete(d1, other));

  const auto ranked = read_ranking_csv(d1 / "ranking.csv");
  ASSERT_EQ(ranked.size(), 8u);
  for (std::size_t k = 0; k < ranked.size(); ++k) EXPECT_EQ(ranked[k].rank, static_cast<int>(k + 1));
  for (const auto& ra : ranked) {
    const auto it = std::find_if(r.agents.begin(), r.agents.end(), [&](const AgentProfile& a) { return a.id == ra.id; });
    ASSERT_NE(it, r.agents.end());
    EXPECT_EQ(ra.epsilon, it->epsilon);
    EXPECT_EQ(ra.rank, r.ranking[static_cast<std::size_t>(it - r.agents.begin())]);
  }
  const auto matches = slurp(d1 / "matches.csv");
  EXPECT_EQ(std::count(matches.begin(), matches.end(), '\n'), 1 + 56);
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST(Csv, QuotingRoundTrip) {
  std::ostringstream out;
  csv::write_row(out, {"plain", "with,comma", "with \"quote\"", ""});
  std::istringstream in(out.str());
  const auto rows = csv::read(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"plain", "with,comma", "with \"quote\"", ""}));
  EXPECT_EQ(csv::fixed(-0.0000001, 3), "0.000");
}
