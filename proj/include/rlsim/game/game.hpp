#pragma once

#include <concepts>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "rlsim/game/connect4.hpp"
#include "rlsim/game/rlgame.hpp"

namespace rlsim {

template <class State>
struct GameTraits;

template <>
struct GameTraits<Connect4State> {
  using Config = Connect4Config;
  using Move = Connect4Move;
  static constexpr std::string_view name = "connect4";
};

template <>
struct GameTraits<RLGameState> {
  using Config = RLGameConfig;
  using Move = RLGameMove;
  static constexpr std::string_view name = "rlgame";
};

// Two-player, turn-based, perfect-information game with value-type states.
template <class S>
concept TurnBasedGame = requires(const S& s, const typename GameTraits<S>::Config& c,
                                 const typename GameTraits<S>::Move& m) {
  { initial_state(c) } -> std::same_as<S>;
  { legal_moves(s) } -> std::same_as<std::vector<typename GameTraits<S>::Move>>;
  { apply_move(s, m) } -> std::same_as<S>;
  { s.to_move() } -> std::same_as<Player>;
  { s.outcome() } -> std::same_as<Outcome>;
  { s.config() } -> std::convertible_to<const typename GameTraits<S>::Config&>;
  { encode(s, Player::White) } -> std::same_as<std::vector<double>>;
  { encode_len(c) } -> std::same_as<std::size_t>;
};

static_assert(TurnBasedGame<Connect4State>);
static_assert(TurnBasedGame<RLGameState>);

template <TurnBasedGame S>
bool is_terminal(const S& s) noexcept {
  return s.outcome() != Outcome::Ongoing;
}

template <TurnBasedGame S>
std::optional<Player> winner(const S& s) noexcept {
  return winner_of(s.outcome());
}

using GameConfig = std::variant<Connect4Config, RLGameConfig>;

inline void validate(const GameConfig& c) {
  std::visit([](const auto& x) { validate(x); }, c);
}

inline std::size_t encode_len(const GameConfig& c) {
  return std::visit([](const auto& x) { return encode_len(x); }, c);
}

}  // namespace rlsim
