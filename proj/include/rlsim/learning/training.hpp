#pragma once

// Standalone self-play training and evaluation against a uniform-random mover.

#include <string>

#include "rlsim/learning/agent.hpp"

namespace rlsim {

// Network initialised from (seed, agent id).
inline ValueNetwork initial_network(const GameConfig& config, std::uint64_t seed, const std::string& agent_id) {
  return ValueNetwork::random(encode_len(config), derive_seed(seed, agent_id));
}

// The agent plays both colours with one network.
template <TurnBasedGame S>
void self_play(const AgentProfile& agent, ValueNetwork& net, const typename GameTraits<S>::Config& config, int games,
               std::uint64_t seed) {
  validate(agent);
  Rng rng(derive_seed(seed, "self-play"));
  for (int g = 0; g < games; ++g)
    play_game<S>({&agent, &net}, {&agent, &net}, config, rng, true, "self-play game " + std::to_string(g + 1));
}

struct EvaluationResult {
  int games = 0;
  int wins = 0;
  int draws = 0;
  int losses = 0;
  double win_rate() const noexcept { return games ? static_cast<double>(wins) / games : 0.0; }
};

// Greedy play (epsilon = 1, no learning) against a uniform-random mover,
// alternating colours starting as White.
template <TurnBasedGame S>
EvaluationResult evaluate_vs_random(const ValueNetwork& net, const typename GameTraits<S>::Config& config, int games,
                                    std::uint64_t seed) {
  const AgentProfile greedy{"greedy", 1.0, 0.0, 0.0};
  const AgentProfile random{"random", 0.0, 0.0, 0.0};
  ValueNetwork mine = net;
  ValueNetwork unused(net.input_width());
  Rng rng(derive_seed(seed, "evaluation"));
  EvaluationResult r;
  for (int g = 0; g < games; ++g) {
    const Player me = g % 2 == 0 ? Player::White : Player::Black;
    const Seat a{&greedy, &mine};
    const Seat b{&random, &unused};
    const auto rec = me == Player::White ? play_game<S>(a, b, config, rng, false) : play_game<S>(b, a, config, rng, false);
    ++r.games;
    if (rec.outcome == Outcome::Draw) ++r.draws;
    else if (rec.outcome == win_for(me)) ++r.wins;
    else ++r.losses;
  }
  return r;
}

}  // namespace rlsim
