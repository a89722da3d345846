#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "rlsim/game/text.hpp"
#include "rlsim/learning/agent.hpp"
#include "rlsim/learning/checkpoint.hpp"
#include "rlsim/learning/training.hpp"

using namespace rlsim;

namespace {

std::vector<double> random_input(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : x) v = u(rng);
  return x;
}

// Central differences, one parameter at a time.
std::vector<double> numeric_gradient(ValueNetwork net, const std::vector<double>& x, double h) {
  std::vector<double> g(net.parameters().size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double saved = net.parameters()[k];
    net.parameters()[k] = saved + h;
    const double up = net.evaluate(x);
    net.parameters()[k] = saved - h;
    const double down = net.evaluate(x);
    net.parameters()[k] = saved;
    g[k] = (up - down) / (2 * h);
  }
  return g;
}

}  // namespace

TEST(ValueNetwork, ZeroWeightsGiveOneHalf) {
  const ValueNetwork net(46);
  EXPECT_EQ(net.hidden_width(), 23u);
  EXPECT_EQ(ValueNetwork(31).hidden_width(), 16u);
  Rng rng(1);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(net.evaluate(random_input(46, rng)), 0.5);
  EXPECT_THROW(net.evaluate(std::vector<double>(45)), DimensionMismatch);
}

TEST(ValueNetwork, SameSeedSameOutput) {
  const auto a = ValueNetwork::random(30, 99);
  const auto b = ValueNetwork::random(30, 99);
  EXPECT_EQ(a, b);
  Rng rng(3);
  const auto x = random_input(30, rng);
  EXPECT_EQ(a.evaluate(x), b.evaluate(x));
  for (double p : a.parameters()) {
    EXPECT_GE(p, -0.5);
    EXPECT_LE(p, 0.5);
  }
}

TEST(ValueNetwork, GradientMatchesCentralDifferences) {
  Rng rng(2024);
  int checked = 0;
  double worst = 0.0;
  for (int c = 0; c < 100; ++c) {
    const std::size_t width = 2 + uniform_index(rng, 40);
    const auto net = ValueNetwork::random(width, rng(), 1.0);
    const auto x = random_input(width, rng);
    double v = 0;
    const auto analytic = net.gradient(x, &v);
    EXPECT_EQ(v, net.evaluate(x));
    const auto numeric = numeric_gradient(net, x, 1e-5);
    ASSERT_EQ(analytic.size(), numeric.size());
    for (std::size_t k = 0; k < analytic.size(); ++k) {
      const double scale = std::max({std::abs(analytic[k]), std::abs(numeric[k]), 1e-6});
      const double rel = std::abs(analytic[k] - numeric[k]) / scale;
      worst = std::max(worst, rel);
      EXPECT_LT(rel, 1e-4) << "case " << c << " param " << k;
      ++checked;
    }
  }
  EXPECT_GT(checked, 1000);
  RecordProperty("worst_relative_error", std::to_string(worst));
}

TEST(ValueNetwork, OutputStaysInOpenInterval) {
  Rng rng(5);
  for (int c = 0; c < 200; ++c) {
    const auto net = ValueNetwork::random(20, rng(), 3.0);
    const double v = net.evaluate(random_input(20, rng));
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(TdUpdate, FixedPointAndDirection) {
  Rng rng(8);
  auto net = ValueNetwork::random(12, 4);
  const auto x = random_input(12, rng);
  const auto before = net;
  EXPECT_EQ(td_update(net, x, net.evaluate(x), 0.5), 0.0);
  EXPECT_EQ(net, before);

  ValueNetwork flat(12);
  flat.parameters().back() = std::log(0.4 / 0.6);
  ASSERT_NEAR(flat.evaluate(x), 0.4, 1e-12);
  td_update(flat, x, 1.0, 0.3);
  EXPECT_GT(flat.evaluate(x), 0.4);

  auto down = ValueNetwork::random(12, 6);
  const double v0 = down.evaluate(x);
  td_update(down, x, 0.0, 0.3);
  EXPECT_LT(down.evaluate(x), v0);
}

TEST(TdUpdate, NonFiniteWeightsAreReported) {
  auto net = ValueNetwork::random(6, 1);
  const std::vector<double> x(6, 1.0);
  try {
    td_update(net, x, 1.0, std::numeric_limits<double>::infinity(), "game 3, move 7");
    FAIL() << "expected divergence";
  } catch (const TrainingDivergence& e) {
    EXPECT_NE(std::string(e.what()).find("game 3, move 7"), std::string::npos);
  }
}

TEST(SelectMove, GreedyTiesGoToFirstMove) {
  const auto s = initial_state(Connect4Config{6, 7});
  const ValueNetwork zero(encode_len(Connect4Config{6, 7}));
  const AgentProfile greedy{"g", 1.0, 0.9, 0.1};
  Rng rng(1);
  for (int k = 0; k < 20; ++k) EXPECT_EQ(select_move(greedy, zero, s, rng).column, 0);
}

TEST(SelectMove, GreedyPicksHighestValuedSuccessor) {
  const Connect4Config cfg{6, 7};
  const auto s = apply_move(apply_move(initial_state(cfg), Connect4Move{3}), Connect4Move{2});
  const auto net = ValueNetwork::random(encode_len(cfg), 77);
  std::size_t best = 0;
  double best_v = -1;
  const auto moves = legal_moves(s);
  for (std::size_t k = 0; k < moves.size(); ++k) {
    const double v = net.evaluate(encode(apply_move(s, moves[k]), s.to_move()));
    if (v > best_v) best_v = v, best = k;
  }
  Rng rng(2);
  const AgentProfile greedy{"g", 1.0, 0.9, 0.1};
  EXPECT_EQ(select_move(greedy, net, s, rng), moves[best]);

  // a network that only reads cell (0,0) prefers the move that fills it
  ValueNetwork pick(encode_len(cfg));
  const std::size_t in = pick.input_width();
  pick.parameters()[0] = 4.0;                          // hidden 0 reads cell (0,0)
  pick.parameters()[pick.hidden_width() * in] = 0.0;    // b1[0]
  pick.parameters()[pick.hidden_width() * in + pick.hidden_width()] = 3.0;  // W2[0]
  const auto empty = initial_state(cfg);
  const double v0 = pick.evaluate(encode(apply_move(empty, Connect4Move{0}), Player::White));
  const double v1 = pick.evaluate(encode(apply_move(empty, Connect4Move{1}), Player::White));
  ASSERT_GT(v0, v1);
  EXPECT_EQ(select_move(greedy, pick, empty, rng).column, 0);
}

TEST(SelectMove, ExploitFrequencyWithinThreeSigma) {
  const Connect4Config cfg{6, 7};
  const auto s = initial_state(cfg);
  const auto net = ValueNetwork::random(encode_len(cfg), 31);
  const AgentProfile greedy{"g", 1.0, 0.9, 0.1};
  Rng r0(0);
  const auto best = select_move(greedy, net, s, r0);
  for (double eps : {0.6, 0.75, 0.9}) {
    const AgentProfile a{"a", eps, 0.9, 0.1};
    Rng rng(derive_seed(11, static_cast<std::uint64_t>(eps * 100)));
    const int n = 10000;
    int hits = 0;
    for (int k = 0; k < n; ++k) hits += select_move(a, net, s, rng) == best;
    const double p = eps + (1 - eps) / 7;
    EXPECT_NEAR(static_cast<double>(hits) / n, p, 3 * std::sqrt(p * (1 - p) / n)) << eps;
  }
}

TEST(SelectMove, ZeroEpsilonIsUniform) {
  const Connect4Config cfg{6, 7};
  const auto s = initial_state(cfg);
  const auto net = ValueNetwork::random(encode_len(cfg), 31);
  const AgentProfile a{"a", 0.0, 0.9, 0.1};
  Rng rng(17);
  std::vector<int> counts(7, 0);
  const int n = 10000;
  for (int k = 0; k < n; ++k) ++counts[static_cast<std::size_t>(select_move(a, net, s, rng).column)];
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  EXPECT_LT(chi2, 22.46);  // 6 dof, p = 0.001
}

TEST(PlayGame, ZeroStepSizeAndLearningOffLeaveNetsUntouched) {
  const Connect4Config cfg{5, 4};
  const AgentProfile a{"a", 0.8, 0.9, 0.0};
  const AgentProfile b{"b", 0.7, 0.7, 0.0};
  auto na = ValueNetwork::random(encode_len(cfg), 1);
  auto nb = ValueNetwork::random(encode_len(cfg), 2);
  const auto ca = na, cb = nb;
  Rng r1(5), r2(5);
  const auto g1 = play_game<Connect4State>({&a, &na}, {&b, &nb}, cfg, r1, true);
  const auto g2 = play_game<Connect4State>({&a, &na}, {&b, &nb}, cfg, r2, true);
  EXPECT_EQ(g1.moves, g2.moves);
  EXPECT_EQ(na, ca);
  EXPECT_EQ(nb, cb);

  const AgentProfile c{"c", 0.8, 0.9, 0.9};
  Rng r3(6);
  for (int k = 0; k < 20; ++k) play_game<Connect4State>({&c, &na}, {&c, &nb}, cfg, r3, false);
  EXPECT_EQ(na, ca);
  EXPECT_EQ(nb, cb);
}

TEST(PlayGame, OnlyOwningNetworksChange) {
  const Connect4Config cfg{5, 4};
  const AgentProfile learner{"l", 0.8, 0.9, 0.5};
  const AgentProfile frozen{"f", 0.8, 0.9, 0.0};
  auto nl = ValueNetwork::random(encode_len(cfg), 1);
  auto nf = ValueNetwork::random(encode_len(cfg), 2);
  const auto cf = nf, cl = nl;
  Rng rng(9);
  play_game<Connect4State>({&learner, &nl}, {&frozen, &nf}, cfg, rng, true);
  EXPECT_EQ(nf, cf);
  EXPECT_NE(nl, cl);
}

TEST(PlayGame, SeedDeterminesTrajectoryAndWeights) {
  const RLGameConfig cfg{5, 2, 3};
  const AgentProfile a{"a", 0.8, 0.9, 0.7};
  const AgentProfile b{"b", 0.6, 0.6, 0.9};
  auto run = [&] {
    auto na = ValueNetwork::random(encode_len(cfg), derive_seed(3, "a"));
    auto nb = ValueNetwork::random(encode_len(cfg), derive_seed(3, "b"));
    Rng rng(123);
    std::vector<std::string> log;
    for (int g = 0; g < 10; ++g) {
      const auto rec = play_game<RLGameState>({&a, &na}, {&b, &nb}, cfg, rng, true);
      log.insert(log.end(), rec.moves.begin(), rec.moves.end());
      log.emplace_back(to_string(rec.outcome));
    }
    return std::tuple{log, na, nb};
  };
  EXPECT_EQ(run(), run());
}

TEST(PlayGame, RecordedMovesReplayToTheSameOutcome) {
  const RLGameConfig cfg{6, 2, 4};
  const AgentProfile a{"a", 0.7, 0.9, 0.5};
  auto na = ValueNetwork::random(encode_len(cfg), 1);
  Rng rng(4);
  for (int g = 0; g < 5; ++g) {
    const auto rec = play_game<RLGameState>({&a, &na}, {&a, &na}, cfg, rng, true);
    RLGameState s = initial_state(cfg);
    for (const auto& m : rec.moves) s = apply_move(s, parse_rlgame_move(m));
    EXPECT_EQ(s.outcome(), rec.outcome);
  }
}

TEST(PlayGame, RandomMoversTerminateWithinPlyCap) {
  const AgentProfile rnd{"r", 0.0, 0.0, 0.0};
  for (RLGameConfig cfg : {RLGameConfig{5, 2, 1}, RLGameConfig{10, 2, 10}}) {
    ValueNetwork net(encode_len(cfg));
    Rng rng(10);
    for (int g = 0; g < 50; ++g) {
      const auto rec = play_game<RLGameState>({&rnd, &net}, {&rnd, &net}, cfg, rng, false);
      EXPECT_NE(rec.outcome, Outcome::Ongoing);
      EXPECT_LE(rec.plies(), cfg.ply_cap());
    }
  }
}

TEST(PlayGame, RejectsNetworksOfTheWrongWidth) {
  const AgentProfile a{"a", 0.7, 0.9, 0.5};
  ValueNetwork wrong(10);
  Rng rng(1);
  EXPECT_THROW(play_game<Connect4State>({&a, &wrong}, {&a, &wrong}, Connect4Config{5, 4}, rng, true),
               DimensionMismatch);
}

TEST(Training, WeightsStayFiniteAtLargestStepSize) {
  const Connect4Config c4{5, 4};
  const RLGameConfig rl{5, 2, 3};
  const AgentProfile a{"a", 0.6, 0.9, 0.9};
  const AgentProfile b{"b", 0.9, 0.6, 0.9};
  auto c4a = ValueNetwork::random(encode_len(c4), 1), c4b = ValueNetwork::random(encode_len(c4), 2);
  auto rla = ValueNetwork::random(encode_len(rl), 3), rlb = ValueNetwork::random(encode_len(rl), 4);
  Rng rng(77);
  for (int g = 0; g < 5000; ++g) {
    play_game<Connect4State>({&a, &c4a}, {&b, &c4b}, c4, rng, true);
    play_game<RLGameState>({&b, &rla}, {&a, &rlb}, rl, rng, true);
  }
  EXPECT_TRUE(c4a.all_finite() && c4b.all_finite() && rla.all_finite() && rlb.all_finite());
}

TEST(Training, EvaluationCountsAddUp) {
  const Connect4Config cfg{5, 4};
  const auto net = initial_network(cfg, 1, "x");
  const auto r = evaluate_vs_random<Connect4State>(net, cfg, 50, 2);
  EXPECT_EQ(r.games, 50);
  EXPECT_EQ(r.wins + r.draws + r.losses, 50);
  EXPECT_EQ(r.wins, evaluate_vs_random<Connect4State>(net, cfg, 50, 2).wins);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  const GameConfig cfg = RLGameConfig{6, 2, 5};
  const auto net = ValueNetwork::random(encode_len(cfg), 42, 0.5);
  std::stringstream buf;
  save_checkpoint(buf, net, cfg);
  const auto back = load_checkpoint(buf, cfg);
  EXPECT_EQ(back, net);
}

TEST(Checkpoint, RejectsMismatches) {
  const GameConfig cfg = Connect4Config{5, 4};
  const auto net = ValueNetwork::random(encode_len(cfg), 1);
  std::stringstream good;
  save_checkpoint(good, net, cfg);
  const std::string text = good.str();

  std::istringstream other(text);
  EXPECT_THROW(load_checkpoint(other, GameConfig{Connect4Config{6, 7}}), InvalidConfig);

  std::string bad_shape = text;
  bad_shape.replace(bad_shape.find("shape: 24 12"), 12, "shape: 24 13");
  std::istringstream s1(bad_shape);
  EXPECT_THROW(load_checkpoint(s1, cfg), DimensionMismatch);

  std::istringstream s2("not a checkpoint\n");
  EXPECT_THROW(load_checkpoint(s2, cfg), ParseError);

  std::istringstream s3(text.substr(0, text.size() / 2));
  EXPECT_THROW(load_checkpoint(s3, cfg), ParseError);
}
