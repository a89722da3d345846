#pragma once

// Round-robin tournaments between TD agents drawn from an (epsilon, gamma,
// lambda) grid. Every agent owns one network for the whole session; rounds
// run in order, matches inside a round run concurrently.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "rlsim/core/parallel.hpp"
#include "rlsim/game/game.hpp"
#include "rlsim/learning/agent.hpp"
#include "rlsim/learning/training.hpp"

namespace rlsim {

struct AgentGrid {
  std::vector<double> epsilon{0.6, 0.7, 0.8, 0.9};
  std::vector<double> gamma{0.6, 0.7, 0.8, 0.9};
  std::vector<double> lambda{0.6, 0.7, 0.8, 0.9};
};

// "e06-g07-l09": tenths as two digits; values off the tenths grid use
// hundredths ("e065").
inline std::string value_code(double v) {
  const double tenths = v * 10.0;
  char buf[16];
  if (std::abs(tenths - std::round(tenths)) < 1e-9) std::snprintf(buf, sizeof buf, "%02d", static_cast<int>(std::lround(tenths)));
  else std::snprintf(buf, sizeof buf, "%03d", static_cast<int>(std::lround(v * 100.0)));
  return buf;
}

inline std::string agent_id(double epsilon, double gamma, double lambda) {
  return "e" + value_code(epsilon) + "-g" + value_code(gamma) + "-l" + value_code(lambda);
}

// Cartesian product, epsilon outermost.
inline std::vector<AgentProfile> build_agent_grid(const AgentGrid& grid) {
  if (grid.epsilon.empty() || grid.gamma.empty() || grid.lambda.empty())
    throw InvalidConfig("grid", "every value set must be nonempty");
  std::vector<AgentProfile> out;
  for (double e : grid.epsilon)
    for (double g : grid.gamma)
      for (double l : grid.lambda) {
        AgentProfile a{agent_id(e, g, l), e, g, l};
        validate(a);
        out.push_back(a);
      }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (out[i].id == out[j].id) throw InvalidConfig("grid", "duplicate agent id " + out[i].id);
  return out;
}

struct Pairing {
  std::size_t a = 0;  // agent indices; a plays White in the first game
  std::size_t b = 0;
  friend bool operator==(const Pairing&, const Pairing&) = default;
};
using Round = std::vector<Pairing>;

// Circle method: agent 0 stays fixed, the others rotate one step per round.
// An odd field gets a phantom opponent; whoever meets it sits out the round.
inline std::vector<Round> schedule(std::size_t agents) {
  std::vector<Round> rounds;
  if (agents < 2) return rounds;
  const std::size_t n = agents % 2 == 0 ? agents : agents + 1;
  std::vector<std::size_t> ring(n);
  std::iota(ring.begin(), ring.end(), 0);
  for (std::size_t r = 0; r + 1 < n; ++r) {
    Round round;
    for (std::size_t k = 0; k < n / 2; ++k) {
      std::size_t a = ring[k];
      std::size_t b = ring[n - 1 - k];
      if (a >= agents || b >= agents) continue;
      // alternate who is listed first so the fixed agent does not always open
      if ((r + k) % 2 == 1) std::swap(a, b);
      round.push_back({a, b});
    }
    rounds.push_back(std::move(round));
    std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
  }
  return rounds;
}

struct GameResult {
  Player a_color = Player::White;
  Outcome outcome = Outcome::Ongoing;
  int plies = 0;
  std::uint64_t seed = 0;

  // +1 agent A won, -1 agent B won, 0 draw
  int a_score_sign() const {
    if (outcome == Outcome::Draw) return 0;
    return outcome == win_for(a_color) ? 1 : -1;
  }
};

struct MatchRecord {
  std::size_t round = 0;  // 1-based
  std::size_t index = 0;  // position within the round, 1-based
  std::string a;
  std::string b;
  std::vector<GameResult> games;

  std::string id() const { return "r" + std::to_string(round) + "-m" + std::to_string(index); }
  int wins_a() const { return count(1); }
  int wins_b() const { return count(-1); }
  int draws() const { return count(0); }

private:
  int count(int sign) const {
    return static_cast<int>(std::count_if(games.begin(), games.end(), [&](const GameResult& g) { return g.a_score_sign() == sign; }));
  }
};

// Plays `games` learning games; A is White in games 1, 3, 5, ... Game g uses
// a generator seeded with derive_seed(seed, g).
inline MatchRecord run_match(const AgentProfile& a, ValueNetwork& net_a, const AgentProfile& b, ValueNetwork& net_b,
                             const GameConfig& config, int games, std::uint64_t seed) {
  if (games < 1) throw InvalidConfig("games_per_match", "must be at least 1");
  MatchRecord rec;
  rec.a = a.id;
  rec.b = b.id;
  for (int g = 0; g < games; ++g) {
    GameResult res;
    res.a_color = g % 2 == 0 ? Player::White : Player::Black;
    res.seed = derive_seed(seed, static_cast<std::uint64_t>(g));
    Rng rng(res.seed);
    const Seat sa{&a, &net_a};
    const Seat sb{&b, &net_b};
    const Seat white = res.a_color == Player::White ? sa : sb;
    const Seat black = res.a_color == Player::White ? sb : sa;
    const std::string label = a.id + " vs " + b.id + ", game " + std::to_string(g + 1);
    const GameRecord gr = std::visit(
        [&](const auto& cfg) {
          using C = std::decay_t<decltype(cfg)>;
          using S = std::conditional_t<std::is_same_v<C, Connect4Config>, Connect4State, RLGameState>;
          return play_game<S>(white, black, cfg, rng, true, label);
        },
        config);
    res.outcome = gr.outcome;
    res.plies = gr.plies();
    rec.games.push_back(res);
  }
  return rec;
}

// Rating interface: one scalar per agent, higher is better.
class Rating {
public:
  virtual ~Rating() = default;
  virtual std::string method() const = 0;
  virtual void reset(std::size_t agents) = 0;
  // score_a: 1 win for a, 0 loss, 0.5 draw
  virtual void record_game(std::size_t a, std::size_t b, double score_a) = 0;
  virtual double value(std::size_t agent) const = 0;
};

// (wins + draws/2) / games played; 0 before the first game.
class WinRateRating final : public Rating {
public:
  std::string method() const override { return "winrate"; }
  void reset(std::size_t agents) override {
    points_.assign(agents, 0.0);
    played_.assign(agents, 0);
  }
  void record_game(std::size_t a, std::size_t b, double score_a) override {
    points_[a] += score_a;
    points_[b] += 1.0 - score_a;
    ++played_[a];
    ++played_[b];
  }
  double value(std::size_t agent) const override {
    return played_[agent] ? points_[agent] / static_cast<double>(played_[agent]) : 0.0;
  }

private:
  std::vector<double> points_;
  std::vector<long> played_;
};

// Elo update after every game.
class EloRating final : public Rating {
public:
  explicit EloRating(double k = 16.0, double initial = 1500.0) : k_(k), initial_(initial) {}
  std::string method() const override { return "elo"; }
  void reset(std::size_t agents) override { r_.assign(agents, initial_); }
  void record_game(std::size_t a, std::size_t b, double score_a) override {
    const double expected_a = 1.0 / (1.0 + std::pow(10.0, (r_[b] - r_[a]) / 400.0));
    const double delta = k_ * (score_a - expected_a);
    r_[a] += delta;
    r_[b] -= delta;
  }
  double value(std::size_t agent) const override { return r_[agent]; }

private:
  double k_;
  double initial_;
  std::vector<double> r_;
};

inline std::unique_ptr<Rating> make_rating(const std::string& method) {
  if (method == "elo") return std::make_unique<EloRating>();
  if (method == "winrate") return std::make_unique<WinRateRating>();
  throw InvalidConfig("rating", "unknown method '" + method + "' (expected elo or winrate)");
}

// Ranks 1..N by descending rating. Equal ratings are ordered by wins against
// the other members of the tie group, then by id.
inline std::vector<int> rank(const std::vector<double>& ratings, const std::vector<std::string>& ids,
                             const std::vector<std::vector<int>>& head_to_head = {}) {
  const std::size_t n = ratings.size();
  if (ids.size() != n) throw LengthMismatch("rank: one id per rating required");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ratings[x] > ratings[y]; });

  std::vector<int> ranks(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && ratings[order[end]] == ratings[order[start]]) ++end;
    std::vector<std::size_t> group(order.begin() + static_cast<long>(start), order.begin() + static_cast<long>(end));
    std::vector<int> group_wins(n, 0);
    if (!head_to_head.empty())
      for (std::size_t x : group)
        for (std::size_t y : group) group_wins[x] += head_to_head[x][y];
    std::sort(group.begin(), group.end(), [&](std::size_t x, std::size_t y) {
      if (group_wins[x] != group_wins[y]) return group_wins[x] > group_wins[y];
      return ids[x] < ids[y];
    });
    for (std::size_t k = 0; k < group.size(); ++k) ranks[group[k]] = static_cast<int>(start + k + 1);
    start = end;
  }
  return ranks;
}

struct TournamentSpec {
  std::string name = "session";
  GameConfig game = Connect4Config{};
  AgentGrid grid;
  int games_per_match = 10;
  std::uint64_t seed = 1;
  std::string rating = "elo";
};

inline void validate(const TournamentSpec& s) {
  validate(s.game);
  if (s.games_per_match < 1) throw InvalidConfig("games_per_match", "must be at least 1");
  if (s.name.empty()) throw InvalidConfig("name", "must not be empty");
  make_rating(s.rating);
  build_agent_grid(s.grid);
}

struct RatingTraceRow {
  std::size_t round = 0;  // 0 = before the first round
  std::string agent;
  double rating = 0.0;
};

struct SessionResult {
  TournamentSpec spec;
  std::vector<AgentProfile> agents;
  std::vector<MatchRecord> matches;  // completed matches, in schedule order
  std::vector<RatingTraceRow> rating_trace;
  std::vector<double> ratings;
  std::vector<int> ranking;  // ranking[i] is the rank of agents[i]
  std::size_t rounds_completed = 0;
  std::size_t rounds_total = 0;
  bool complete = false;
  std::string error;

  long games_played() const {
    long g = 0;
    for (const auto& m : matches) g += static_cast<long>(m.games.size());
    return g;
  }
};

inline long expected_games(const TournamentSpec& s) {
  const long n = static_cast<long>(build_agent_grid(s.grid).size());
  return n * (n - 1) / 2 * s.games_per_match;
}

namespace tournament_detail {

// Guards the single-writer rule for networks.
class OwnershipTokens {
public:
  explicit OwnershipTokens(std::size_t n) : held_(n) {}
  void acquire(std::size_t i) {
    if (held_[i].exchange(true)) throw std::logic_error("network " + std::to_string(i) + " is already in use");
  }
  void release(std::size_t i) { held_[i].store(false); }

private:
  std::vector<std::atomic<bool>> held_;
};

}  // namespace tournament_detail

// Match seeds depend only on the pair of ids, network seeds only on the agent
// id, and round results are applied in pairing order, so the outcome does not
// depend on the worker count. A failed match ends the session after its round;
// earlier matches of that round are kept and the result is marked incomplete.
struct SessionOptions {
  unsigned workers = 1;
  // called after each completed round
  std::function<void(const SessionResult&)> on_round;
  // called on the worker before a match starts; an exception aborts the match
  std::function<void(std::size_t round, const Pairing&)> before_match;
};

inline SessionResult run_session(const TournamentSpec& spec, const SessionOptions& options = {}) {
  validate(spec);
  SessionResult res;
  res.spec = spec;
  res.agents = build_agent_grid(spec.grid);
  const std::size_t n = res.agents.size();
  std::vector<ValueNetwork> nets;
  nets.reserve(n);
  for (const auto& a : res.agents) nets.push_back(initial_network(spec.game, spec.seed, a.id));

  auto rating = make_rating(spec.rating);
  rating->reset(n);
  std::vector<std::vector<int>> h2h(n, std::vector<int>(n, 0));
  auto trace = [&](std::size_t round) {
    for (std::size_t i = 0; i < n; ++i) res.rating_trace.push_back({round, res.agents[i].id, rating->value(i)});
  };
  trace(0);

  const auto rounds = schedule(n);
  res.rounds_total = rounds.size();
  tournament_detail::OwnershipTokens tokens(n);
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    const Round& round = rounds[r];
    std::vector<std::optional<MatchRecord>> done(round.size());
    std::vector<std::string> errors(round.size());
    parallel_for(round.size(), options.workers, [&](std::size_t k) {
      const Pairing p = round[k];
      tokens.acquire(p.a);
      tokens.acquire(p.b);
      try {
        if (options.before_match) options.before_match(r + 1, p);
        const auto& a = res.agents[p.a];
        const auto& b = res.agents[p.b];
        done[k] = run_match(a, nets[p.a], b, nets[p.b], spec.game, spec.games_per_match,
                            derive_seed(spec.seed, "match:" + a.id + ":" + b.id));
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
      tokens.release(p.a);
      tokens.release(p.b);
    });

    for (std::size_t k = 0; k < round.size(); ++k) {
      if (!done[k]) {
        res.error = "round " + std::to_string(r + 1) + ", match " + std::to_string(k + 1) + ": " + errors[k];
        break;
      }
      MatchRecord& m = *done[k];
      m.round = r + 1;
      m.index = k + 1;
      const Pairing p = round[k];
      for (const auto& g : m.games) {
        const int s = g.a_score_sign();
        rating->record_game(p.a, p.b, s > 0 ? 1.0 : s < 0 ? 0.0 : 0.5);
        if (s > 0) ++h2h[p.a][p.b];
        if (s < 0) ++h2h[p.b][p.a];
      }
      res.matches.push_back(std::move(m));
    }
    if (!res.error.empty()) break;
    trace(r + 1);
    res.rounds_completed = r + 1;
    if (options.on_round) options.on_round(res);
  }

  res.ratings.resize(n);
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    res.ratings[i] = rating->value(i);
    ids[i] = res.agents[i].id;
  }
  res.ranking = rank(res.ratings, ids, h2h);
  res.complete = res.error.empty();
  return res;
}

}  // namespace rlsim
