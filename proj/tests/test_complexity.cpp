#include <gtest/gtest.h>

#include <cmath>

#include "oracles/placement_enum.hpp"
#include "rlsim/complexity/complexity.hpp"
#include "rlsim/complexity/reference.hpp"

using namespace rlsim;
using namespace rlsim::complexity;

TEST(UpperBound, SmallExactValues) {
  EXPECT_EQ(upper_bound(5, 2, 1), 383);  // 9 + 51 + 51 + 272
  EXPECT_EQ(upper_bound(6, 2, 1), 933);
  EXPECT_EQ(upper_bound(7, 2, 1), 1895);
  EXPECT_EQ(upper_bound(7, 3, 1), 1125);
  EXPECT_THROW(upper_bound(5, 3, 1), InvalidConfig);
}

TEST(UpperBound, ReferenceTableToThreeFigures) {
  for (const auto& row : reference::kRLGame) {
    EXPECT_TRUE(is_valid_rounding(upper_bound(row.n, row.alpha, 1), row.formula_beta1, row.exp_beta1))
        << row.n << "," << row.alpha;
    EXPECT_TRUE(is_valid_rounding(upper_bound(row.n, row.alpha, 10), row.formula_beta10, row.exp_beta10))
        << row.n << "," << row.alpha;
  }
}

TEST(UpperBound, ValidRoundingAcceptsTiesOnly) {
  EXPECT_TRUE(is_valid_rounding(BigInt(1895), "1.89", 3));
  EXPECT_TRUE(is_valid_rounding(BigInt(1895), "1.90", 3));
  EXPECT_FALSE(is_valid_rounding(BigInt(1896), "1.89", 3));
  EXPECT_FALSE(is_valid_rounding(BigInt(384), "3.82", 2));
  EXPECT_TRUE(is_valid_rounding(BigInt(5), "5.00", 0));
  EXPECT_FALSE(is_valid_rounding(BigInt(5), "5.01", 0));
}

TEST(UpperBound, LargestCaseIsExactBeyondSixtyFourBits) {
  const BigInt v = upper_bound(10, 2, 10);
  EXPECT_GT(v, BigInt(std::numeric_limits<std::uint64_t>::max()));
  EXPECT_EQ(v.str().size(), 26u);
  EXPECT_EQ(v.str().substr(0, 3), "350");
}

TEST(UpperBound, MatchesExhaustiveEnumeration) {
  for (RLGameConfig c : {RLGameConfig{5, 2, 1}, RLGameConfig{5, 2, 2}, RLGameConfig{7, 3, 1}, RLGameConfig{6, 2, 2}}) {
    EXPECT_EQ(oracle::enumerate_placements(c).states, upper_bound(c)) << c.n << "," << c.alpha << "," << c.beta;
  }
}

TEST(Scientific, Rounding) {
  EXPECT_EQ(to_scientific(BigInt(383)).str(), "3.83e2");
  EXPECT_EQ(to_scientific(BigInt(9995)).str(), "1.00e4");
  EXPECT_EQ(to_scientific(BigInt(9994)).str(), "9.99e3");
  EXPECT_EQ(to_scientific(BigInt(5)).str(), "5.00e0");
  EXPECT_EQ(to_scientific(BigInt(1895)).pretty(), "1.90 x 10^3");
}

TEST(Profiles, Enumeration) {
  const auto one = enumerate_profiles({5, 2, 1});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].white, 1);
  EXPECT_EQ(one[0].black, 1);
  EXPECT_EQ(enumerate_profiles({5, 2, 2}).size(), 4u);
  // 100 pairs minus the six with i + j > 17
  const auto ten = enumerate_profiles({5, 2, 10});
  EXPECT_EQ(ten.size(), 94u);
  for (const auto& p : ten) EXPECT_LE(p.white + p.black, 17);
  EXPECT_EQ(enumerate_profiles({10, 2, 10}).size(), 100u);
}

TEST(Sampler, SinglePawnsAgreeWithExhaustiveFraction) {
  const RLGameConfig c{5, 2, 1};
  const auto exact = oracle::enumerate_placements(c).profile_counts.at({1, 1});
  ASSERT_EQ(exact.second, 272u);  // C(17,2) * 2
  const double p = static_cast<double>(exact.first) / exact.second;
  EXPECT_NEAR(p, 0.987, 0.01);
  const auto r = sample_profile({c, 1, 1}, 10000, 7);
  const double sigma = std::sqrt(p * (1 - p) / 10000);
  EXPECT_NEAR(r.fraction(), p, 3 * sigma);
}

TEST(Sampler, FullFieldHasNoLegitPlacement) {
  // Every field square occupied: only pawns touching the enemy base can move.
  const RLGameConfig c{5, 2, 10};
  const auto full = sample_profile({c, 10, 7}, 2000, 1);
  EXPECT_EQ(full.legit, 0u);

  // exhaustive over all C(17,10) colourings
  const RLGameGeometry g(c);
  std::vector<std::pair<int, int>> field;
  for (int r = 0; r < 5; ++r)
    for (int col = 0; col < 5; ++col)
      if (!g.in_any_base(r, col)) field.emplace_back(r, col);
  std::uint64_t legit = 0;
  std::uint64_t total = 0;
  for (std::uint32_t mask = 0; mask < (1u << 17); ++mask) {
    if (__builtin_popcount(mask) != 10) continue;
    std::vector<Cell> board(25, Cell::Empty);
    for (int k = 0; k < 17; ++k) board[field[k].first * 5 + field[k].second] = (mask >> k) & 1 ? Cell::White : Cell::Black;
    const auto s = RLGameState::make(c, board, {0, 3}, {0, 0}, {0, 0}, Player::White, Outcome::Ongoing, 0);
    bool ok = true;
    for (auto [r, col] : field) ok &= !oracle::rl_pawn_dead(s, r, col);
    legit += ok;
    ++total;
  }
  EXPECT_EQ(total, 19448u);
  EXPECT_EQ(legit, 0u);
}

TEST(Sampler, SameSeedSameFraction) {
  const ConfigProfile p{{7, 2, 6}, 4, 3};
  EXPECT_EQ(sample_profile(p, 500, 42).legit, sample_profile(p, 500, 42).legit);
  EXPECT_THROW(sample_profile({{5, 2, 2}, 3, 1}, 10, 1), InvalidConfig);
}

TEST(Estimate, ReferenceRatios) {
  EXPECT_NEAR(estimate({5, 2, 1}, 1000, 1).ratio, 0.991, 0.03);
  EXPECT_NEAR(estimate({8, 3, 1}, 1000, 1).ratio, 1.0, 0.03);
  EXPECT_NEAR(estimate({5, 2, 10}, 1000, 1).ratio, 0.127, 0.05);
}

TEST(Estimate, InvariantsAndWorkerIndependence) {
  const auto a = estimate({6, 2, 4}, 300, 11, 1);
  const auto b = estimate({6, 2, 4}, 300, 11, 3);
  EXPECT_EQ(a.sampled_legit, b.sampled_legit);
  EXPECT_GT(a.ratio, 0.0);
  EXPECT_LE(a.ratio, 1.0);
  for (const auto& r : a.per_profile) {
    EXPECT_GE(r.fraction(), 0.0);
    EXPECT_LE(r.fraction(), 1.0);
  }
  EXPECT_LE(a.sampled_legit, BigRational(a.formula_value));
  EXPECT_THROW(estimate({6, 2, 4}, 0, 1), InvalidConfig);
}

TEST(Estimate, ExhaustiveSmallCaseRatio) {
  const RLGameConfig c{5, 2, 2};
  const auto e = oracle::enumerate_placements(c);
  const double exact = BigRational(e.legit_states, e.states).convert_to<double>();
  // variance of the estimate from the exact per-profile fractions
  double var = 0;
  const double ub = upper_bound(c).convert_to<double>();
  for (const auto& [ij, counts] : e.profile_counts) {
    const double p = static_cast<double>(counts.first) / counts.second;
    const double w = profile_weight(c, ij.first, ij.second).convert_to<double>() / ub;
    var += w * w * p * (1 - p) / 4000;
  }
  EXPECT_NEAR(estimate(c, 4000, 5).ratio, exact, 3 * std::sqrt(var) + 1e-12);
}

TEST(Monotonicity, EndpointsOnSmallestBoard) {
  const auto rep = ratio_monotonicity_report(5, 2, 300, 3);
  ASSERT_EQ(rep.rows.size(), 10u);
  EXPECT_GT(rep.rows.front().ratio, rep.rows.back().ratio);
  EXPECT_NEAR(rep.rows.front().ratio, 0.991, 0.03);
  EXPECT_NEAR(rep.rows.back().ratio, 0.127, 0.05);
}
