#pragma once

// One-line text forms for configs, states and moves, plus replayable game logs.
//
//   config    := "connect4 height=H width=W"
//              | "rlgame n=N alpha=A beta=B metric=(chebyshev|manhattan)"
//   c4 state  := <c4 config> " to=(W|B) status=S cells=" ROW ("/" ROW)*
//   rl state  := <rl config> " to=(W|B) ply=P status=S in_base=x,y lost=x,y entered=x,y cells=" ROW ("/" ROW)*
//   status    := "ongoing" | "win-W" | "win-B" | "draw"
//   ROW       := one char per column, bottom row first:
//                '.' empty, 'W'/'B' piece, 'w'/'b' White/Black base square
//   c4 move   := column index
//   rl move   := ("base" | R "," C) ">" R "," C
//
// Game log: a header line "# rlsim game log v1", a line "config: <config>",
// then one move per line. Blank lines and further '#' lines are ignored.

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rlsim/game/game.hpp"

namespace rlsim {

namespace text_detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline int to_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError("expected integer for " + std::string(what) + ", got '" + std::string(s) + "'");
  return v;
}

struct Fields {
  std::string kind;
  std::map<std::string, std::string, std::less<>> kv;

  const std::string& get(std::string_view key) const {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("missing field '" + std::string(key) + "'");
    return it->second;
  }
  int integer(std::string_view key) const { return to_int(get(key), key); }
};

inline Fields fields(std::string_view line) {
  Fields f;
  std::istringstream in{std::string(line)};
  std::string tok;
  if (!(in >> f.kind)) throw ParseError("empty line");
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok + "'");
    f.kv.emplace(tok.substr(0, eq), tok.substr(eq + 1));
  }
  return f;
}

inline Player player_from(std::string_view s) {
  if (s == "W") return Player::White;
  if (s == "B") return Player::Black;
  throw ParseError("bad side '" + std::string(s) + "'");
}

inline Outcome outcome_from(std::string_view s) {
  for (Outcome o : {Outcome::Ongoing, Outcome::WhiteWins, Outcome::BlackWins, Outcome::Draw})
    if (to_string(o) == s) return o;
  throw ParseError("bad status '" + std::string(s) + "'");
}

inline std::array<int, 2> pair_from(std::string_view s, std::string_view what) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw ParseError("expected x,y for " + std::string(what));
  return {to_int(parts[0], what), to_int(parts[1], what)};
}

inline char cell_char(Cell c) {
  return c == Cell::White ? 'W' : c == Cell::Black ? 'B' : '.';
}

inline Cell cell_from(char ch) {
  if (ch == 'W') return Cell::White;
  if (ch == 'B') return Cell::Black;
  if (ch == '.') return Cell::Empty;
  throw ParseError(std::string("bad cell '") + ch + "'");
}

inline std::string_view metric_name(DistanceMetric m) {
  return m == DistanceMetric::Chebyshev ? "chebyshev" : "manhattan";
}

inline DistanceMetric metric_from(std::string_view s) {
  if (s == "chebyshev") return DistanceMetric::Chebyshev;
  if (s == "manhattan") return DistanceMetric::Manhattan;
  throw ParseError("bad metric '" + std::string(s) + "'");
}

}  // namespace text_detail

inline std::string to_text(const Connect4Config& c) {
  return "connect4 height=" + std::to_string(c.height) + " width=" + std::to_string(c.width);
}

inline std::string to_text(const RLGameConfig& c) {
  return "rlgame n=" + std::to_string(c.n) + " alpha=" + std::to_string(c.alpha) +
         " beta=" + std::to_string(c.beta) + " metric=" + std::string(text_detail::metric_name(c.metric));
}

inline std::string to_text(const GameConfig& c) {
  return std::visit([](const auto& x) { return to_text(x); }, c);
}

inline GameConfig parse_config(std::string_view line) {
  const auto f = text_detail::fields(line);
  if (f.kind == "connect4") {
    Connect4Config c{f.integer("height"), f.integer("width")};
    validate(c);
    return c;
  }
  if (f.kind == "rlgame") {
    RLGameConfig c{f.integer("n"), f.integer("alpha"), f.integer("beta")};
    if (f.kv.count("metric")) c.metric = text_detail::metric_from(f.get("metric"));
    validate(c);
    return c;
  }
  throw ParseError("unknown game '" + f.kind + "'");
}

inline std::string to_text(Connect4Move m) { return std::to_string(m.column); }

inline std::string to_text(const RLGameMove& m) {
  auto sq = [](Square s) { return std::to_string(s.row) + "," + std::to_string(s.col); };
  return (m.from ? sq(*m.from) : std::string("base")) + ">" + sq(m.to);
}

inline Connect4Move parse_connect4_move(std::string_view s) { return {text_detail::to_int(s, "column")}; }

inline RLGameMove parse_rlgame_move(std::string_view s) {
  const auto gt = s.find('>');
  if (gt == std::string_view::npos) throw ParseError("rl move needs '>'");
  auto square = [](std::string_view p) {
    const auto xy = text_detail::pair_from(p, "square");
    return Square{xy[0], xy[1]};
  };
  RLGameMove m;
  const auto from = s.substr(0, gt);
  if (from != "base") m.from = square(from);
  m.to = square(s.substr(gt + 1));
  return m;
}

inline std::string to_text(const Connect4State& s) {
  std::string out = to_text(s.config());
  out += std::string(" to=") + to_char(s.to_move()) + " status=" + std::string(to_string(s.outcome())) + " cells=";
  for (int r = 0; r < s.config().height; ++r) {
    if (r) out += '/';
    for (int c = 0; c < s.config().width; ++c) out += text_detail::cell_char(s.at(r, c));
  }
  return out;
}

inline std::string to_text(const RLGameState& s) {
  const auto g = s.geometry();
  auto pair = [](int a, int b) { return std::to_string(a) + "," + std::to_string(b); };
  std::string out = to_text(s.config());
  out += std::string(" to=") + to_char(s.to_move()) + " ply=" + std::to_string(s.ply()) +
         " status=" + std::string(to_string(s.outcome())) +
         " in_base=" + pair(s.in_base(Player::White), s.in_base(Player::Black)) +
         " lost=" + pair(s.lost(Player::White), s.lost(Player::Black)) +
         " entered=" + pair(s.entered(Player::White), s.entered(Player::Black)) + " cells=";
  for (int r = 0; r < g.n(); ++r) {
    if (r) out += '/';
    for (int c = 0; c < g.n(); ++c) {
      if (g.in_base(Player::White, r, c)) out += 'w';
      else if (g.in_base(Player::Black, r, c)) out += 'b';
      else out += text_detail::cell_char(s.at(r, c));
    }
  }
  return out;
}

inline Connect4State parse_connect4_state(std::string_view line) {
  const auto f = text_detail::fields(line);
  if (f.kind != "connect4") throw ParseError("not a connect4 state");
  const Connect4Config c{f.integer("height"), f.integer("width")};
  validate(c);
  const auto rows = text_detail::split(f.get("cells"), '/');
  if (static_cast<int>(rows.size()) != c.height) throw ParseError("connect4: wrong row count");
  std::vector<Cell> cells;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c.width) throw ParseError("connect4: wrong row width");
    for (char ch : row) cells.push_back(text_detail::cell_from(ch));
  }
  return make_connect4_state(c, cells, text_detail::player_from(f.get("to")),
                             text_detail::outcome_from(f.get("status")));
}

inline RLGameState parse_rlgame_state(std::string_view line) {
  const auto f = text_detail::fields(line);
  if (f.kind != "rlgame") throw ParseError("not an rlgame state");
  RLGameConfig c{f.integer("n"), f.integer("alpha"), f.integer("beta")};
  c.metric = text_detail::metric_from(f.get("metric"));
  validate(c);
  const RLGameGeometry g(c);
  const auto rows = text_detail::split(f.get("cells"), '/');
  if (static_cast<int>(rows.size()) != c.n) throw ParseError("rlgame: wrong row count");
  std::vector<Cell> cells;
  for (int r = 0; r < c.n; ++r) {
    if (static_cast<int>(rows[r].size()) != c.n) throw ParseError("rlgame: wrong row width");
    for (int col = 0; col < c.n; ++col) {
      const char ch = rows[r][col];
      const bool base = g.in_any_base(r, col);
      if (base != (ch == 'w' || ch == 'b')) throw ParseError("rlgame: base squares misplaced");
      cells.push_back(base ? Cell::Empty : text_detail::cell_from(ch));
    }
  }
  return RLGameState::make(c, std::move(cells), text_detail::pair_from(f.get("in_base"), "in_base"),
                           text_detail::pair_from(f.get("lost"), "lost"),
                           text_detail::pair_from(f.get("entered"), "entered"),
                           text_detail::player_from(f.get("to")), text_detail::outcome_from(f.get("status")),
                           f.integer("ply"));
}

// Game logs ----------------------------------------------------------------

struct GameLog {
  GameConfig config;
  std::vector<std::string> moves;  // move text, one per ply
};

inline void write_game_log(std::ostream& out, const GameLog& log) {
  out << "# rlsim game log v1\n";
  out << "config: " << to_text(log.config) << '\n';
  for (const auto& m : log.moves) out << m << '\n';
}

inline GameLog read_game_log(std::istream& in) {
  std::string line;
  std::optional<GameConfig> config;
  std::vector<std::string> moves;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("config:", 0) == 0) {
      if (config) throw ParseError("game log: duplicate config line");
      config = parse_config(std::string_view(line).substr(7));
      continue;
    }
    if (!config) throw ParseError("game log: move before config line");
    moves.push_back(line);
  }
  if (!config) throw ParseError("game log: missing config line");
  return {*config, std::move(moves)};
}

// Replays a log from the initial position; returns every visited state.
template <TurnBasedGame S>
std::vector<S> replay(const typename GameTraits<S>::Config& config, const std::vector<std::string>& moves) {
  std::vector<S> states{initial_state(config)};
  for (const auto& m : moves) {
    if constexpr (std::is_same_v<S, Connect4State>)
      states.push_back(apply_move(states.back(), parse_connect4_move(m)));
    else
      states.push_back(apply_move(states.back(), parse_rlgame_move(m)));
  }
  return states;
}

}  // namespace rlsim
