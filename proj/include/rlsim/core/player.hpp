#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace rlsim {

// White always moves first.
enum class Player : std::uint8_t { White = 0, Black = 1 };

constexpr Player opponent(Player p) noexcept {
  return p == Player::White ? Player::Black : Player::White;
}

constexpr int index(Player p) noexcept { return static_cast<int>(p); }

constexpr char to_char(Player p) noexcept { return p == Player::White ? 'W' : 'B'; }

enum class Outcome : std::uint8_t { Ongoing, WhiteWins, BlackWins, Draw };

constexpr Outcome win_for(Player p) noexcept {
  return p == Player::White ? Outcome::WhiteWins : Outcome::BlackWins;
}

constexpr std::optional<Player> winner_of(Outcome o) noexcept {
  if (o == Outcome::WhiteWins) return Player::White;
  if (o == Outcome::BlackWins) return Player::Black;
  return std::nullopt;
}

constexpr std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Ongoing: return "ongoing";
    case Outcome::WhiteWins: return "win-W";
    case Outcome::BlackWins: return "win-B";
    case Outcome::Draw: return "draw";
  }
  return "?";
}

}  // namespace rlsim
