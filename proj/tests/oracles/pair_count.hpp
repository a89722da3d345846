#pragma once

// Brute-force rank statistics: every pair examined directly.

#include <cmath>
#include <vector>

namespace oracle {

struct PairCounts {
  long concordant = 0;
  long discordant = 0;
  long tied_a_only = 0;
  long tied_b_only = 0;
  long tied_both = 0;
};

inline PairCounts count_pairs(const std::vector<double>& a, const std::vector<double>& b) {
  PairCounts c;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0 && db == 0) ++c.tied_both;
      else if (da == 0) ++c.tied_a_only;
      else if (db == 0) ++c.tied_b_only;
      else if ((da > 0) == (db > 0)) ++c.concordant;
      else ++c.discordant;
    }
  return c;
}

inline double tau_b(const std::vector<double>& a, const std::vector<double>& b) {
  const auto c = count_pairs(a, b);
  const double n1 = static_cast<double>(c.concordant + c.discordant + c.tied_b_only);  // pairs untied in a
  const double n2 = static_cast<double>(c.concordant + c.discordant + c.tied_a_only);  // pairs untied in b
  return static_cast<double>(c.concordant - c.discordant) / std::sqrt(n1 * n2);
}

// Rank of each value: 1 + number of smaller values + half the other equal ones.
inline std::vector<double> mid_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++less;
      else if (v[j] == v[i] && j != i) ++equal;
    }
    r[i] = 1 + less + equal / 2;
  }
  return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - sx / n) * (y[i] - sy / n);
    dx += (x[i] - sx / n) * (x[i] - sx / n);
    dy += (y[i] - sy / n) * (y[i] - sy / n);
  }
  return num / std::sqrt(dx * dy);
}

inline double rho(const std::vector<double>& a, const std::vector<double>& b) {
  return pearson(mid_ranks(a), mid_ranks(b));
}

}  // namespace oracle
