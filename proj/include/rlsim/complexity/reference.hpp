#pragma once

// Reference values used by the CLI tables and the acceptance suite.

#include <array>

namespace rlsim::complexity::reference {

struct RLGameRow {
  int n;
  int alpha;
  const char* formula_beta1;  // mantissa, exponent pairs as printed
  int exp_beta1;
  double ratio_beta1;
  const char* formula_beta10;
  int exp_beta10;
  double ratio_beta10;
};

inline constexpr std::array<RLGameRow, 12> kRLGame{{
    {5, 2, "3.83", 2, 0.991, "1.11", 10, 0.127},
    {6, 2, "9.33", 2, 0.997, "1.50", 14, 0.088},
    {7, 2, "1.89", 3, 0.999, "6.93", 17, 0.177},
    {7, 3, "1.12", 3, 0.994, "1.37", 15, 0.113},
    {8, 2, "3.43", 3, 0.998, "7.21", 20, 0.373},
    {8, 3, "2.36", 3, 1.000, "9.10", 18, 0.254},
    {9, 2, "5.70", 3, 0.996, "2.40", 23, 0.562},
    {9, 3, "4.29", 3, 0.997, "9.64", 21, 0.486},
    {9, 4, "2.66", 3, 1.000, "3.72", 19, 0.315},
    {10, 2, "8.93", 3, 1.000, "3.50", 25, 0.712},
    {10, 3, "7.14", 3, 1.000, "2.96", 24, 0.645},
    {10, 4, "4.97", 3, 0.998, "5.12", 22, 0.530},
}};

// Connect-4 state-space sizes by (height, width), shipped as constants.
struct Connect4Row {
  int height;
  int width;
  double states;
  double coins_per_player;
};

inline constexpr std::array<Connect4Row, 11> kConnect4{{
    {8, 2, 1.33e4, 8},    {8, 3, 8.42e6, 12},    {8, 4, 1.10e9, 16},  {7, 4, 1.35e8, 14},
    {7, 5, 1.42e10, 17.5}, {6, 5, 1.04e9, 15},   {6, 6, 6.92e10, 18}, {6, 7, 4.53e12, 21},
    {5, 5, 6.98e7, 12.5}, {5, 6, 2.82e9, 15},    {5, 7, 1.13e10, 17},
}};

}  // namespace rlsim::complexity::reference
