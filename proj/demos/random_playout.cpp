// Plays one uniform-random game of each kind and prints every move.
//
//   demo_random_playout [seed]

#include <cstdio>
#include <cstdlib>

#include "rlsim/core/random.hpp"
#include "rlsim/game/game.hpp"
#include "rlsim/game/text.hpp"

using namespace rlsim;

template <class S, class C>
void playout(const C& config, Rng& rng) {
  std::printf("%s\n", to_text(config).c_str());
  S s = initial_state(config);
  while (!is_terminal(s)) {
    const auto moves = legal_moves(s);
    const auto m = moves[uniform_index(rng, moves.size())];
    std::printf("  %3d %c %-10s (%zu legal)\n", s.ply() + 1, to_char(s.to_move()), to_text(m).c_str(), moves.size());
    s = apply_move(s, m);
  }
  std::printf("result: %s after %d plies\nfinal: %s\n\n", std::string(to_string(outcome(s))).c_str(), s.ply(),
              to_text(s).c_str());
}

int main(int argc, char** argv) {
  Rng rng(argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1);
  playout<Connect4State>(Connect4Config{6, 7}, rng);
  playout<RLGameState>(RLGameConfig{5, 2, 3}, rng);
  return 0;
}
