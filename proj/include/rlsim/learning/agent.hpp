#pragma once

// epsilon-gamma-lambda TD agents.
//
//   epsilon  probability of the greedy (best-valued) move; otherwise uniform
//   gamma    discount applied to the value of the next own position
//   lambda   step size of the gradient update (no eligibility traces)

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "rlsim/core/error.hpp"
#include "rlsim/core/random.hpp"
#include "rlsim/game/game.hpp"
#include "rlsim/game/text.hpp"
#include "rlsim/learning/value_network.hpp"

namespace rlsim {

struct AgentProfile {
  std::string id;
  double epsilon = 0.9;
  double gamma = 0.9;
  double lambda = 0.1;

  friend bool operator==(const AgentProfile&, const AgentProfile&) = default;
};

inline void validate(const AgentProfile& a) {
  auto unit = [&](double v, const char* field) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidConfig(field, "must lie in [0, 1]");
  };
  unit(a.epsilon, "epsilon");
  unit(a.gamma, "gamma");
  unit(a.lambda, "lambda");
}

// Uniform draw u first: u < epsilon exploits. The exploration branch draws a
// second number for the move index.
template <TurnBasedGame S>
typename GameTraits<S>::Move select_move(const AgentProfile& agent, const ValueNetwork& net, const S& state, Rng& rng) {
  const auto moves = legal_moves(state);
  const double u = uniform01(rng);
  if (u < agent.epsilon) {
    const Player me = state.to_move();
    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t k = 0; k < moves.size(); ++k) {
      const double v = net.evaluate(encode(apply_move(state, moves[k]), me));
      if (v > best_value) {
        best_value = v;
        best = k;
      }
    }
    return moves[best];
  }
  return moves[uniform_index(rng, moves.size())];
}

// w <- w + lambda (target - V(x)) dV/dx. Returns the TD error.
inline double td_update(ValueNetwork& net, std::span<const double> features, double target, double lambda,
                        const std::string& context = {}) {
  double v = 0.0;
  const auto grad = net.gradient(features, &v);
  const double delta = target - v;
  if (lambda == 0.0 || delta == 0.0) return delta;
  net.add_scaled(grad, lambda * delta);
  if (!net.all_finite()) throw TrainingDivergence(context.empty() ? "non-finite weights" : context);
  return delta;
}

struct EpisodeStep {
  std::vector<double> features;  // encoded position after an own move
  double value = 0.0;            // network value when the position was reached
};

// One agent's TD stream through a single game.
class Episode {
public:
  Episode(ValueNetwork& net, const AgentProfile& agent) : net_(&net), agent_(&agent) {}

  // Position after one of our moves: the previous own position moves toward
  // gamma * V(this one).
  void observe(std::vector<double> features, const std::string& context = {}) {
    const double v = net_->evaluate(features);
    if (!steps_.empty()) td_update(*net_, steps_.back().features, agent_->gamma * v, agent_->lambda, context);
    steps_.push_back({std::move(features), v});
  }

  // Game over: the last own position moves toward the reward, undiscounted.
  void finish(double reward, const std::string& context = {}) {
    if (!steps_.empty()) td_update(*net_, steps_.back().features, reward, agent_->lambda, context);
    final_reward_ = reward;
  }

  const std::vector<EpisodeStep>& steps() const noexcept { return steps_; }
  double final_reward() const noexcept { return final_reward_; }
  void clear() {
    steps_.clear();
    final_reward_ = 0.0;
  }

private:
  ValueNetwork* net_;
  const AgentProfile* agent_;
  std::vector<EpisodeStep> steps_;
  double final_reward_ = 0.0;
};

inline double reward_for(Outcome o, Player p) {
  if (o == Outcome::Draw) return 0.5;
  return o == win_for(p) ? 1.0 : 0.0;
}

struct Seat {
  const AgentProfile* agent;
  ValueNetwork* net;
};

struct GameRecord {
  Outcome outcome = Outcome::Ongoing;
  std::vector<std::string> moves;
  int plies() const noexcept { return static_cast<int>(moves.size()); }
  std::optional<Player> winner() const { return winner_of(outcome); }
};

// Plays one game from the initial position. With `learn`, each side runs its
// own TD stream over its own moves only. `label` tags divergence errors.
template <TurnBasedGame S>
GameRecord play_game(Seat white, Seat black, const typename GameTraits<S>::Config& config, Rng& rng, bool learn,
                     const std::string& label = "game") {
  S state = initial_state(config);
  const auto width = encode_len(config);
  for (const Seat* seat : {&white, &black})
    if (seat->net->input_width() != width) throw DimensionMismatch(width, seat->net->input_width());

  Episode episodes[2] = {Episode(*white.net, *white.agent), Episode(*black.net, *black.agent)};
  GameRecord rec;
  while (!is_terminal(state)) {
    const Player me = state.to_move();
    const Seat& seat = me == Player::White ? white : black;
    const auto move = select_move(*seat.agent, *seat.net, state, rng);
    rec.moves.push_back(to_text(move));
    state = apply_move(state, move);
    if (learn) {
      std::ostringstream ctx;
      ctx << label << ", move " << rec.moves.size() << " (" << seat.agent->id << ")";
      episodes[index(me)].observe(encode(state, me), ctx.str());
    }
  }
  rec.outcome = outcome(state);
  if (learn) {
    for (Player p : {Player::White, Player::Black}) {
      std::ostringstream ctx;
      ctx << label << ", final update (" << (p == Player::White ? white : black).agent->id << ")";
      episodes[index(p)].finish(reward_for(rec.outcome, p), ctx.str());
    }
  }
  return rec;
}

}  // namespace rlsim
