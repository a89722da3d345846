#pragma once

// State-space size of RLGame: an exact combinatorial upper bound and a
// Monte-Carlo estimate of the fraction of "legit" positions (no dead pawns).
//
// The bound sums over i white and j black pawns on the playing field:
//
//   sum_{i=0..beta} sum_{j=0..beta} C(F, i+j) C(i+j, i) (1 + 2(beta-i)) (1 + 2(beta-j))
//
// with F = n^2 - 2 alpha^2 field squares. The last two factors count the ways
// the off-field pawns of each side split between "still in the own base" and
// "one pawn inside the enemy base". Summation starts at zero: the
// reference values (e.g. 383 for n=5, alpha=2, beta=1) include the terms with
// an empty side of the field.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rlsim/core/parallel.hpp"
#include "rlsim/core/random.hpp"
#include "rlsim/game/rlgame.hpp"

namespace rlsim::complexity {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct ConfigProfile {
  RLGameConfig config;
  int white = 0;  // i: white pawns on the field
  int black = 0;  // j: black pawns on the field

  friend bool operator==(const ConfigProfile&, const ConfigProfile&) = default;
};

struct ProfileResult {
  ConfigProfile profile;
  std::uint64_t legit = 0;
  std::uint64_t samples = 0;
  double fraction() const { return samples ? static_cast<double>(legit) / static_cast<double>(samples) : 0.0; }
};

struct ComplexityEstimate {
  RLGameConfig config;
  BigInt formula_value;
  BigRational sampled_legit;
  double ratio = 0.0;
  std::vector<ProfileResult> per_profile;
};

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

// Positions with exactly i white and j black pawns on the field.
inline BigInt profile_weight(const RLGameConfig& c, int i, int j) {
  const int f = c.field_size();
  return binomial(f, i + j) * binomial(i + j, i) * (1 + 2 * (c.beta - i)) * (1 + 2 * (c.beta - j));
}

inline BigInt upper_bound(const RLGameConfig& c) {
  validate(c);
  BigInt total = 0;
  for (int i = 0; i <= c.beta; ++i)
    for (int j = 0; j <= c.beta; ++j) total += profile_weight(c, i, j);
  return total;
}

inline BigInt upper_bound(int n, int alpha, int beta) { return upper_bound(RLGameConfig{n, alpha, beta}); }

// Profiles with at least one pawn of each colour on the field, i-major.
inline std::vector<ConfigProfile> enumerate_profiles(const RLGameConfig& c) {
  validate(c);
  std::vector<ConfigProfile> out;
  for (int i = 1; i <= c.beta; ++i)
    for (int j = 1; j <= c.beta; ++j)
      if (i + j <= c.field_size()) out.push_back({c, i, j});
  return out;
}

// True iff no pawn on the synthetic position is dead. Uses the engine's own
// movement rule, looking at every pawn from its owner's side.
inline bool is_legit(const RLGameState& s) {
  const RLGameGeometry g = s.geometry();
  for (int r = 0; r < g.n(); ++r)
    for (int c = 0; c < g.n(); ++c) {
      const Cell v = s.at(r, c);
      if (v == Cell::Empty) continue;
      if (!pawn_can_move(s, g, Square{r, c}, v == Cell::White ? Player::White : Player::Black)) return false;
    }
  return true;
}

// Places i white and j black pawns uniformly at random on the field squares
// (without replacement; colours by a random subset of size i) `count` times
// and counts the placements without dead pawns. Reachability is not checked.
inline ProfileResult sample_profile(const ConfigProfile& p, std::uint64_t count, std::uint64_t seed) {
  const RLGameConfig& c = p.config;
  validate(c);
  if (p.white < 0 || p.black < 0 || p.white > c.beta || p.black > c.beta || p.white + p.black > c.field_size())
    throw InvalidConfig("profile", "pawn counts out of range");
  const RLGameGeometry g(c);
  std::vector<int> field_cells;
  for (int r = 0; r < c.n; ++r)
    for (int col = 0; col < c.n; ++col)
      if (!g.in_any_base(r, col)) field_cells.push_back(r * c.n + col);

  Rng rng(seed);
  const int placed = p.white + p.black;
  ProfileResult result{p, 0, count};
  std::vector<Cell> board(static_cast<std::size_t>(c.n * c.n), Cell::Empty);
  for (std::uint64_t s = 0; s < count; ++s) {
    // partial Fisher-Yates: the first `placed` entries are a uniform sample
    for (int k = 0; k < placed; ++k) {
      const auto pick = k + uniform_index(rng, field_cells.size() - static_cast<std::size_t>(k));
      std::swap(field_cells[static_cast<std::size_t>(k)], field_cells[pick]);
    }
    std::fill(board.begin(), board.end(), Cell::Empty);
    for (int k = 0; k < placed; ++k)
      board[static_cast<std::size_t>(field_cells[static_cast<std::size_t>(k)])] =
          k < p.white ? Cell::White : Cell::Black;
    const auto state = RLGameState::make(c, board, {c.beta - p.white, c.beta - p.black}, {0, 0}, {0, 0},
                                         Player::White, Outcome::Ongoing, 0);
    if (is_legit(state)) ++result.legit;
  }
  return result;
}

// Profile k is sampled with derive_seed(seed, k), so the estimate does not
// depend on the number of workers.
inline ComplexityEstimate estimate(const RLGameConfig& c, std::uint64_t samples_per_profile, std::uint64_t seed,
                                   unsigned workers = 1) {
  if (samples_per_profile == 0) throw InvalidConfig("samples", "must be positive");
  ComplexityEstimate est;
  est.config = c;
  est.formula_value = upper_bound(c);
  const auto profiles = enumerate_profiles(c);
  est.per_profile.resize(profiles.size());
  parallel_for(profiles.size(), workers, [&](std::size_t k) {
    est.per_profile[k] = sample_profile(profiles[k], samples_per_profile, derive_seed(seed, k));
  });

  BigRational legit = 0;
  // Sides with no pawn on the field cannot have dead pawns.
  for (int i = 0; i <= c.beta; ++i)
    for (int j = 0; j <= c.beta; ++j)
      if (i == 0 || j == 0) legit += BigRational(profile_weight(c, i, j));
  for (const auto& r : est.per_profile)
    legit += BigRational(profile_weight(c, r.profile.white, r.profile.black) * r.legit, BigInt(r.samples));
  est.sampled_legit = legit;
  est.ratio = BigRational(legit / BigRational(est.formula_value)).convert_to<double>();
  return est;
}

struct MonotonicityRow {
  int beta = 0;
  double ratio = 0.0;
};

struct MonotonicityReport {
  int n = 0;
  int alpha = 0;
  std::vector<MonotonicityRow> rows;
  std::vector<int> violations;  // beta values whose successor does not decrease
};

inline MonotonicityReport ratio_monotonicity_report(int n, int alpha, std::uint64_t samples_per_profile,
                                                    std::uint64_t seed, unsigned workers = 1,
                                                    DistanceMetric metric = DistanceMetric::Chebyshev) {
  MonotonicityReport rep{n, alpha, {}, {}};
  for (int beta = 1; beta <= 10; ++beta) {
    const RLGameConfig c{n, alpha, beta, metric};
    rep.rows.push_back({beta, estimate(c, samples_per_profile, seed, workers).ratio});
  }
  for (std::size_t k = 0; k + 1 < rep.rows.size(); ++k)
    if (!(rep.rows[k + 1].ratio < rep.rows[k].ratio)) rep.violations.push_back(rep.rows[k].beta);
  return rep;
}

// Scientific notation with `digits` significant figures, rounded half up:
// 383 -> {"3.83", 2}.
struct Scientific {
  std::string mantissa;
  int exponent = 0;

  std::string str() const { return mantissa + "e" + std::to_string(exponent); }
  std::string pretty() const { return mantissa + " x 10^" + std::to_string(exponent); }
};

inline Scientific to_scientific(const BigInt& v, int digits = 3) {
  if (v < 0) throw std::domain_error("to_scientific: negative value");
  std::string s = v.str();
  int exponent = static_cast<int>(s.size()) - 1;
  if (static_cast<int>(s.size()) > digits) {
    std::string head = s.substr(0, static_cast<std::size_t>(digits));
    const bool round_up = s[static_cast<std::size_t>(digits)] >= '5';
    if (round_up) {
      int k = digits - 1;
      while (k >= 0 && head[static_cast<std::size_t>(k)] == '9') head[static_cast<std::size_t>(k--)] = '0';
      if (k < 0) {
        head.insert(head.begin(), '1');
        head.pop_back();
        ++exponent;
      } else {
        ++head[static_cast<std::size_t>(k)];
      }
    }
    s = head;
  } else {
    s.append(static_cast<std::size_t>(digits) - s.size(), '0');
  }
  std::string m = s.substr(0, 1);
  if (digits > 1) m += "." + s.substr(1);
  return {m, exponent};
}

// True iff `printed` is a correct rounding of `exact` to its number of
// significant figures, i.e. |exact - printed| <= half a unit in the last
// printed place. Ties may round either way.
inline bool is_valid_rounding(const BigInt& exact, const std::string& mantissa, int exponent) {
  std::string digits;
  for (char ch : mantissa)
    if (ch != '.') digits += ch;
  const int last_place = exponent - static_cast<int>(digits.size()) + 1;
  BigInt printed(digits);
  BigInt lhs = exact;
  BigInt unit = 1;
  if (last_place >= 0) {
    for (int k = 0; k < last_place; ++k) {
      printed *= 10;
      unit *= 10;
    }
  } else {
    for (int k = 0; k < -last_place; ++k) lhs *= 10;
  }
  BigInt diff = lhs - printed;
  if (diff < 0) diff = -diff;
  return 2 * diff <= unit;
}

// The board/base pairs for which two bases fit at least a square apart.
inline std::vector<std::pair<int, int>> valid_board_base_pairs() {
  std::vector<std::pair<int, int>> out;
  for (int n = 5; n <= 10; ++n)
    for (int a = 2; a <= 4; ++a)
      if (n >= 2 * a + 1) out.emplace_back(n, a);
  return out;
}

}  // namespace rlsim::complexity
