#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "rlsim/core/error.hpp"
#include "rlsim/core/player.hpp"
#include "rlsim/game/connect4.hpp"

namespace rlsim {

// RLGame: an n x n board with two alpha x alpha bases in opposite corners
// (White bottom-left, Black top-right), beta pawns per side. A pawn steps to an
// orthogonally adjacent free square as long as its distance from its own base
// does not shrink. Entering the enemy base wins; pawns left without a move are
// removed; a side without pawns loses.

// How "distance from the own base" is measured. Chebyshev (the larger of the
// row and column offsets to the base region) is the default.
enum class DistanceMetric : std::uint8_t { Chebyshev, Manhattan };

struct RLGameConfig {
  int n = 5;
  int alpha = 2;
  int beta = 10;
  DistanceMetric metric = DistanceMetric::Chebyshev;

  int field_size() const noexcept { return n * n - 2 * alpha * alpha; }
  // Plies after which an undecided game is scored a draw.
  int ply_cap() const noexcept { return 20 * n * n; }

  friend bool operator==(const RLGameConfig&, const RLGameConfig&) = default;
};

inline void validate(const RLGameConfig& c) {
  if (c.n < 5 || c.n > 10) throw InvalidConfig("n", "board size must be in 5..10, got " + std::to_string(c.n));
  if (c.alpha < 2 || c.alpha > 4)
    throw InvalidConfig("alpha", "base size must be in 2..4, got " + std::to_string(c.alpha));
  if (c.beta < 1 || c.beta > 10)
    throw InvalidConfig("beta", "pawns per player must be in 1..10, got " + std::to_string(c.beta));
  if (c.n < 2 * c.alpha + 1)
    throw InvalidConfig("alpha", "bases must be at least one square apart (n >= 2*alpha+1)");
}

struct Square {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Square&, const Square&) = default;
};

// from == nullopt means "out of the own base".
struct RLGameMove {
  std::optional<Square> from;
  Square to;

  friend bool operator==(const RLGameMove&, const RLGameMove&) = default;
  friend std::strong_ordering operator<=>(const RLGameMove& a, const RLGameMove& b) {
    if (a.from.has_value() != b.from.has_value()) return a.from.has_value() ? std::strong_ordering::greater
                                                                             : std::strong_ordering::less;
    if (a.from && *a.from != *b.from) return *a.from <=> *b.from;
    return a.to <=> b.to;
  }
};

// Board geometry shared by the engine and the complexity sampler.
class RLGameGeometry {
public:
  explicit RLGameGeometry(const RLGameConfig& c) : n_(c.n), alpha_(c.alpha), metric_(c.metric) {}

  int n() const noexcept { return n_; }
  bool on_board(int r, int c) const noexcept { return r >= 0 && r < n_ && c >= 0 && c < n_; }

  bool in_base(Player owner, int r, int c) const noexcept {
    if (owner == Player::White) return r < alpha_ && c < alpha_;
    return r >= n_ - alpha_ && c >= n_ - alpha_;
  }
  bool in_any_base(int r, int c) const noexcept {
    return in_base(Player::White, r, c) || in_base(Player::Black, r, c);
  }

  int distance(Player owner, int r, int c) const noexcept {
    int dr = 0;
    int dc = 0;
    if (owner == Player::White) {
      dr = std::max(0, r - (alpha_ - 1));
      dc = std::max(0, c - (alpha_ - 1));
    } else {
      dr = std::max(0, (n_ - alpha_) - r);
      dc = std::max(0, (n_ - alpha_) - c);
    }
    return metric_ == DistanceMetric::Chebyshev ? std::max(dr, dc) : dr + dc;
  }

  // Orthogonal neighbours in row-major order.
  template <class F>
  void for_each_neighbour(int r, int c, F&& f) const {
    constexpr std::array<std::array<int, 2>, 4> steps{{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};
    for (auto [dr, dc] : steps)
      if (on_board(r + dr, c + dc)) f(r + dr, c + dc);
  }

  // Field cells orthogonally adjacent to the owner's base, row-major.
  std::vector<Square> base_exits(Player owner) const {
    std::vector<Square> out;
    for (int r = 0; r < n_; ++r)
      for (int c = 0; c < n_; ++c) {
        if (in_any_base(r, c)) continue;
        bool adjacent = false;
        for_each_neighbour(r, c, [&](int rr, int cc) { adjacent |= in_base(owner, rr, cc); });
        if (adjacent) out.push_back({r, c});
      }
    return out;
  }

private:
  int n_;
  int alpha_;
  DistanceMetric metric_;
};

class RLGameState {
public:
  RLGameState() = default;

  const RLGameConfig& config() const noexcept { return config_; }
  RLGameGeometry geometry() const { return RLGameGeometry(config_); }
  Player to_move() const noexcept { return to_move_; }
  Outcome outcome() const noexcept { return outcome_; }
  int ply() const noexcept { return ply_; }

  // Cell::Empty on base squares; pawns in a base are tracked by count.
  Cell at(int r, int c) const { return field_[idx(r, c)]; }
  Cell at(Square s) const { return at(s.row, s.col); }
  int in_base(Player p) const noexcept { return in_base_[rlsim::index(p)]; }
  int on_field(Player p) const noexcept { return on_field_[rlsim::index(p)]; }
  int lost(Player p) const noexcept { return lost_[rlsim::index(p)]; }
  int entered(Player p) const noexcept { return entered_[rlsim::index(p)]; }

  friend bool operator==(const RLGameState&, const RLGameState&) = default;

  // Arbitrary (possibly unreachable) position. Pawn accounting is validated;
  // the outcome is taken as given. Used by fixtures, the text parser and the
  // complexity sampler.
  static RLGameState make(const RLGameConfig& config, std::vector<Cell> field, std::array<int, 2> in_base,
                          std::array<int, 2> lost, std::array<int, 2> entered, Player to_move,
                          Outcome outcome, int ply) {
    validate(config);
    RLGameState s;
    s.config_ = config;
    const auto n = static_cast<std::size_t>(config.n);
    if (field.size() != n * n) throw ParseError("rlgame: wrong cell count");
    s.field_ = std::move(field);
    const RLGameGeometry g(config);
    for (int r = 0; r < config.n; ++r)
      for (int c = 0; c < config.n; ++c) {
        const Cell v = s.at(r, c);
        if (v == Cell::Empty) continue;
        if (g.in_any_base(r, c)) throw ParseError("rlgame: pawn drawn on a base square");
        ++s.on_field_[v == Cell::White ? 0 : 1];
      }
    s.in_base_ = in_base;
    s.lost_ = lost;
    s.entered_ = entered;
    for (int p = 0; p < 2; ++p) {
      if (in_base[p] < 0 || lost[p] < 0 || entered[p] < 0 || entered[p] > 1)
        throw ParseError("rlgame: negative pawn count");
      if (s.on_field_[p] + in_base[p] + lost[p] + entered[p] != config.beta)
        throw ParseError("rlgame: pawn accounting does not add up to beta");
    }
    s.to_move_ = to_move;
    s.outcome_ = outcome;
    s.ply_ = ply;
    return s;
  }

private:
  std::size_t idx(int r, int c) const { return static_cast<std::size_t>(r * config_.n + c); }
  Cell& cell(int r, int c) { return field_[idx(r, c)]; }

  RLGameConfig config_{};
  std::vector<Cell> field_;
  std::array<int, 2> in_base_{0, 0};
  std::array<int, 2> on_field_{0, 0};
  std::array<int, 2> lost_{0, 0};
  std::array<int, 2> entered_{0, 0};
  Player to_move_ = Player::White;
  Outcome outcome_ = Outcome::Ongoing;
  int ply_ = 0;

  friend RLGameState initial_state(const RLGameConfig&);
  friend RLGameState apply_move(const RLGameState&, const RLGameMove&);
};

inline RLGameState initial_state(const RLGameConfig& config) {
  validate(config);
  RLGameState s;
  s.config_ = config;
  s.field_.assign(static_cast<std::size_t>(config.n * config.n), Cell::Empty);
  s.in_base_ = {config.beta, config.beta};
  return s;
}

// Targets reachable by the pawn of `owner` standing on `from`, row-major.
// Works for either colour regardless of who is to move.
template <class F>
void for_each_pawn_target(const RLGameState& s, const RLGameGeometry& g, Square from, Player owner, F&& f) {
  const int d = g.distance(owner, from.row, from.col);
  g.for_each_neighbour(from.row, from.col, [&](int r, int c) {
    if (g.in_base(owner, r, c)) return;
    if (g.in_base(opponent(owner), r, c)) {
      f(Square{r, c});
      return;
    }
    if (s.at(r, c) != Cell::Empty) return;
    if (g.distance(owner, r, c) >= d) f(Square{r, c});
  });
}

// A pawn with no target is dead.
inline bool pawn_can_move(const RLGameState& s, const RLGameGeometry& g, Square from, Player owner) {
  bool any = false;
  for_each_pawn_target(s, g, from, owner, [&](Square) { any = true; });
  return any;
}

inline bool pawn_can_move(const RLGameState& s, Square from) {
  const Cell v = s.at(from);
  if (v == Cell::Empty) return false;
  return pawn_can_move(s, s.geometry(), from, v == Cell::White ? Player::White : Player::Black);
}

namespace detail {

inline std::vector<RLGameMove> rl_moves_for(const RLGameState& s, Player p) {
  const RLGameGeometry g = s.geometry();
  std::vector<RLGameMove> moves;
  if (s.in_base(p) > 0)
    for (Square t : g.base_exits(p))
      if (s.at(t) == Cell::Empty) moves.push_back({std::nullopt, t});
  const Cell mine = cell_of(p);
  for (int r = 0; r < g.n(); ++r)
    for (int c = 0; c < g.n(); ++c) {
      if (s.at(r, c) != mine) continue;
      for_each_pawn_target(s, g, Square{r, c}, p, [&](Square t) { moves.push_back({Square{r, c}, t}); });
    }
  return moves;
}

}  // namespace detail

// Canonical order: base exits first (by target), then on-field pawns row-major
// by origin, each by target.
inline std::vector<RLGameMove> legal_moves(const RLGameState& s) {
  if (s.outcome() != Outcome::Ongoing) throw TerminalState();
  return detail::rl_moves_for(s, s.to_move());
}

inline RLGameState apply_move(const RLGameState& s, const RLGameMove& m) {
  if (s.outcome_ != Outcome::Ongoing) throw TerminalState();
  const RLGameGeometry g = s.geometry();
  const Player me = s.to_move_;
  const Player them = opponent(me);
  const int pm = rlsim::index(me);
  const int pt = rlsim::index(them);
  if (!g.on_board(m.to.row, m.to.col)) throw IllegalMove("target off the board");

  RLGameState next = s;
  next.to_move_ = them;
  ++next.ply_;

  if (!m.from) {
    if (s.in_base_[pm] == 0) throw IllegalMove("no pawns left in base");
    if (g.in_any_base(m.to.row, m.to.col)) throw IllegalMove("base exit must land on the field");
    bool adjacent = false;
    g.for_each_neighbour(m.to.row, m.to.col, [&](int r, int c) { adjacent |= g.in_base(me, r, c); });
    if (!adjacent) throw IllegalMove("target is not adjacent to the base");
    if (s.at(m.to) != Cell::Empty) throw IllegalMove("occupied target");
    --next.in_base_[pm];
    ++next.on_field_[pm];
    next.cell(m.to.row, m.to.col) = cell_of(me);
  } else {
    const Square from = *m.from;
    if (!g.on_board(from.row, from.col) || s.at(from) != cell_of(me)) throw IllegalMove("no own pawn on origin");
    if (std::abs(from.row - m.to.row) + std::abs(from.col - m.to.col) != 1)
      throw IllegalMove("target is not orthogonally adjacent");
    if (g.in_base(me, m.to.row, m.to.col)) throw IllegalMove("cannot re-enter own base");
    next.cell(from.row, from.col) = Cell::Empty;
    if (g.in_base(them, m.to.row, m.to.col)) {
      --next.on_field_[pm];
      next.entered_[pm] = 1;
      next.outcome_ = win_for(me);
      return next;
    }
    if (s.at(m.to) != Cell::Empty) throw IllegalMove("occupied target");
    if (g.distance(me, m.to.row, m.to.col) < g.distance(me, from.row, from.col))
      throw IllegalMove("backward move (distance from base would decrease)");
    next.cell(m.to.row, m.to.col) = cell_of(me);
  }

  // Dead-pawn sweep: remove every currently dead pawn at once, repeat to fixpoint.
  std::vector<Square> dead;
  for (;;) {
    dead.clear();
    for (int r = 0; r < g.n(); ++r)
      for (int c = 0; c < g.n(); ++c)
        if (next.at(r, c) != Cell::Empty && !pawn_can_move(next, Square{r, c})) dead.push_back({r, c});
    if (dead.empty()) break;
    for (Square d : dead) {
      const int owner = next.at(d) == Cell::White ? 0 : 1;
      --next.on_field_[owner];
      ++next.lost_[owner];
      next.cell(d.row, d.col) = Cell::Empty;
    }
  }

  if (next.on_field_[pt] + next.in_base_[pt] == 0) {
    next.outcome_ = win_for(me);
  } else if (next.on_field_[pm] + next.in_base_[pm] == 0) {
    next.outcome_ = win_for(them);
  } else if (next.ply_ >= s.config_.ply_cap()) {
    next.outcome_ = Outcome::Draw;
  } else if (detail::rl_moves_for(next, them).empty()) {
    // stuck with pawns only in a blocked base
    next.outcome_ = win_for(me);
  }
  return next;
}

inline Outcome outcome(const RLGameState& s) noexcept { return s.outcome(); }

// Feature layout: one entry per field square (+1 own pawn, -1 enemy), read in
// the perspective player's frame (Black's board is rotated 180 degrees so the
// own base is always bottom-left), then own/enemy in-base counts over beta,
// then coverage flags [own occupied fraction, own pawns/beta, same for enemy].
inline std::size_t encode_len(const RLGameConfig& c) { return static_cast<std::size_t>(c.field_size()) + 6; }

inline std::vector<double> encode(const RLGameState& s, Player perspective) {
  const auto& cfg = s.config();
  const RLGameGeometry g = s.geometry();
  std::vector<double> x;
  x.reserve(encode_len(cfg));
  const Cell own = cell_of(perspective);
  const bool flip = perspective == Player::Black;
  for (int r = 0; r < cfg.n; ++r)
    for (int c = 0; c < cfg.n; ++c) {
      const int rr = flip ? cfg.n - 1 - r : r;
      const int cc = flip ? cfg.n - 1 - c : c;
      if (g.in_any_base(rr, cc)) continue;
      const Cell v = s.at(rr, cc);
      x.push_back(v == Cell::Empty ? 0.0 : (v == own ? 1.0 : -1.0));
    }
  const double beta = cfg.beta;
  x.push_back(s.in_base(perspective) / beta);
  x.push_back(s.in_base(opponent(perspective)) / beta);
  const double field = cfg.field_size();
  for (Player p : {perspective, opponent(perspective)}) {
    x.push_back(s.on_field(p) / field);
    x.push_back(s.on_field(p) / beta);
  }
  return x;
}

}  // namespace rlsim
