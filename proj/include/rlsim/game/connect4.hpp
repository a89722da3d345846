#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlsim/core/error.hpp"
#include "rlsim/core/player.hpp"

namespace rlsim {

// Connect-4 on an arbitrary height x width grid with gravity. Four in a row
// (vertical, horizontal or diagonal) wins; a full grid without a line is a draw.
struct Connect4Config {
  int height = 6;
  int width = 7;
  static constexpr int connect_target = 4;

  friend bool operator==(const Connect4Config&, const Connect4Config&) = default;
};

struct Connect4Move {
  int column = 0;

  friend auto operator<=>(const Connect4Move&, const Connect4Move&) = default;
};

enum class Cell : std::int8_t { Empty = 0, White = 1, Black = 2 };

constexpr Cell cell_of(Player p) noexcept { return p == Player::White ? Cell::White : Cell::Black; }

class Connect4State {
public:
  Connect4State() = default;
  explicit Connect4State(Connect4Config config)
      : config_(config),
        cells_(static_cast<std::size_t>(config.height * config.width), Cell::Empty),
        column_height_(static_cast<std::size_t>(config.width), 0) {}

  const Connect4Config& config() const noexcept { return config_; }
  Player to_move() const noexcept { return to_move_; }
  Outcome outcome() const noexcept { return outcome_; }
  int ply() const noexcept { return ply_; }

  // row 0 is the bottom of the grid
  Cell at(int row, int col) const { return cells_[index(row, col)]; }
  int column_height(int col) const { return column_height_[static_cast<std::size_t>(col)]; }
  bool column_full(int col) const { return column_height(col) >= config_.height; }
  int coins(Player p) const noexcept { return coins_[rlsim::index(p)]; }

  friend bool operator==(const Connect4State&, const Connect4State&) = default;

private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row * config_.width + col);
  }

  Connect4Config config_{};
  std::vector<Cell> cells_;
  std::vector<int> column_height_;
  std::array<int, 2> coins_{0, 0};
  Player to_move_ = Player::White;
  Outcome outcome_ = Outcome::Ongoing;
  int ply_ = 0;

  friend Connect4State apply_move(const Connect4State&, Connect4Move);
  friend Connect4State make_connect4_state(Connect4Config, const std::vector<Cell>&, Player, Outcome);
};

inline void validate(const Connect4Config& c) {
  if (c.height < 1) throw InvalidConfig("height", "must be positive");
  if (c.width < 1) throw InvalidConfig("width", "must be positive");
  if (c.height < Connect4Config::connect_target && c.width < Connect4Config::connect_target)
    throw InvalidConfig("height", "height or width must be at least 4");
}

inline Connect4State initial_state(const Connect4Config& config) {
  validate(config);
  return Connect4State(config);
}

inline std::vector<Connect4Move> legal_moves(const Connect4State& s) {
  if (s.outcome() != Outcome::Ongoing) throw TerminalState();
  std::vector<Connect4Move> moves;
  moves.reserve(static_cast<std::size_t>(s.config().width));
  for (int c = 0; c < s.config().width; ++c)
    if (!s.column_full(c)) moves.push_back({c});
  return moves;
}

namespace detail {

inline bool completes_line(const Connect4State& s, int row, int col, Cell who) {
  constexpr std::array<std::array<int, 2>, 4> dirs{{{0, 1}, {1, 0}, {1, 1}, {1, -1}}};
  const int h = s.config().height;
  const int w = s.config().width;
  for (auto [dr, dc] : dirs) {
    int run = 1;
    for (int sign : {1, -1}) {
      int r = row + sign * dr;
      int c = col + sign * dc;
      while (r >= 0 && r < h && c >= 0 && c < w && s.at(r, c) == who) {
        ++run;
        r += sign * dr;
        c += sign * dc;
      }
    }
    if (run >= Connect4Config::connect_target) return true;
  }
  return false;
}

}  // namespace detail

inline Connect4State apply_move(const Connect4State& s, Connect4Move m) {
  if (s.outcome_ != Outcome::Ongoing) throw TerminalState();
  if (m.column < 0 || m.column >= s.config_.width)
    throw IllegalMove("column " + std::to_string(m.column) + " out of range");
  if (s.column_full(m.column)) throw IllegalMove("column " + std::to_string(m.column) + " is full");

  Connect4State next = s;
  const int row = next.column_height_[static_cast<std::size_t>(m.column)]++;
  const Cell me = cell_of(s.to_move_);
  next.cells_[next.index(row, m.column)] = me;
  ++next.coins_[rlsim::index(s.to_move_)];
  ++next.ply_;
  next.to_move_ = opponent(s.to_move_);

  if (detail::completes_line(next, row, m.column, me))
    next.outcome_ = win_for(s.to_move_);
  else if (next.ply_ == s.config_.height * s.config_.width)
    next.outcome_ = Outcome::Draw;
  return next;
}

// Builds an arbitrary (possibly unreachable) position; used by fixtures and the
// text parser. Gravity and coin parity are validated, the outcome is trusted.
inline Connect4State make_connect4_state(Connect4Config config, const std::vector<Cell>& cells,
                                         Player to_move, Outcome outcome) {
  validate(config);
  Connect4State s(config);
  if (cells.size() != s.cells_.size()) throw ParseError("connect4: wrong cell count");
  s.cells_ = cells;
  for (int c = 0; c < config.width; ++c) {
    int h = 0;
    while (h < config.height && s.at(h, c) != Cell::Empty) ++h;
    for (int r = h; r < config.height; ++r)
      if (s.at(r, c) != Cell::Empty) throw ParseError("connect4: floating coin in column " + std::to_string(c));
    s.column_height_[static_cast<std::size_t>(c)] = h;
  }
  for (Cell x : cells) {
    if (x == Cell::White) ++s.coins_[0];
    if (x == Cell::Black) ++s.coins_[1];
  }
  const int diff = s.coins_[0] - s.coins_[1];
  if (diff != 0 && diff != 1) throw ParseError("connect4: coin counts violate turn order");
  if ((diff == 0) != (to_move == Player::White)) throw ParseError("connect4: side to move inconsistent with coins");
  s.to_move_ = to_move;
  s.ply_ = s.coins_[0] + s.coins_[1];
  s.outcome_ = outcome;
  return s;
}

inline Outcome outcome(const Connect4State& s) noexcept { return s.outcome(); }

// Feature layout: one entry per cell (row-major from the bottom), +1 for the
// perspective player's coin, -1 for the opponent's, then four coverage flags.
inline std::size_t encode_len(const Connect4Config& c) {
  return static_cast<std::size_t>(c.height * c.width) + 4;
}

inline std::vector<double> encode(const Connect4State& s, Player perspective) {
  const auto& c = s.config();
  const int cells = c.height * c.width;
  std::vector<double> x;
  x.reserve(encode_len(c));
  const Cell own = cell_of(perspective);
  for (int r = 0; r < c.height; ++r)
    for (int col = 0; col < c.width; ++col) {
      const Cell v = s.at(r, col);
      x.push_back(v == Cell::Empty ? 0.0 : (v == own ? 1.0 : -1.0));
    }
  const double per_player = static_cast<double>((cells + 1) / 2);
  for (Player p : {perspective, opponent(perspective)}) {
    x.push_back(static_cast<double>(s.coins(p)) / cells);
    x.push_back(static_cast<double>(s.coins(p)) / per_player);
  }
  return x;
}

}  // namespace rlsim
