#pragma once

// Spearman's rho and Kendall's tau-b for rank vectors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "rlsim/core/error.hpp"

namespace rlsim {

// Fractional ranks (1-based); tied values share the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && v[order[j]] == v[order[i]]) ++j;
    const double mean = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) r[order[k]] = mean;
    i = j;
  }
  return r;
}

namespace correlation_detail {

inline void check(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw LengthMismatch("correlation: vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  if (a.size() < 2) throw UndefinedCorrelation("correlation: need at least two observations");
  auto constant = [](std::span<const double> v) { return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; }); };
  if (constant(a) || constant(b)) throw UndefinedCorrelation("correlation: constant vector");
}

inline bool has_ties(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) != s.end();
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Number of pairs tied within runs of equal values of a sorted sequence.
template <class It, class Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
  std::int64_t total = 0;
  while (first != last) {
    It run = first;
    std::int64_t len = 0;
    while (run != last && eq(*run, *first)) ++run, ++len;
    total += len * (len - 1) / 2;
    first = run;
  }
  return total;
}

// Sorts v by value and returns the number of inversions.
inline std::int64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<long>(lo), buf.begin() + static_cast<long>(hi), v.begin() + static_cast<long>(lo));
  return swaps;
}

}  // namespace correlation_detail

// rho = 1 - 6 sum d^2 / (n (n^2 - 1)) when neither vector has ties, otherwise
// Pearson's r on average ranks.
inline double spearman(std::span<const double> a, std::span<const double> b) {
  correlation_detail::check(a, b);
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  if (!correlation_detail::has_ties(a) && !correlation_detail::has_ties(b)) {
    double d2 = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    const double n = static_cast<double>(a.size());
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
  }
  return correlation_detail::pearson(ra, rb);
}

// Tau-b in O(n log n): sort by (a, b), count ties, then count the
// inversions of b with a merge sort.
inline double kendall(std::span<const double> a, std::span<const double> b) {
  correlation_detail::check(a, b);
  const std::size_t n = a.size();
  std::vector<std::pair<double, double>> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = {a[i], b[i]};
  std::sort(p.begin(), p.end());

  const auto n0 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t ties_a = correlation_detail::tied_pairs(p.begin(), p.end(), [](auto& x, auto& y) { return x.first == y.first; });
  const std::int64_t ties_ab = correlation_detail::tied_pairs(p.begin(), p.end(), [](auto& x, auto& y) { return x == y; });

  std::vector<double> bs(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) bs[i] = p[i].second;
  const std::int64_t swaps = correlation_detail::merge_count(bs, buf, 0, n);
  const std::int64_t ties_b = correlation_detail::tied_pairs(bs.begin(), bs.end(), [](double x, double y) { return x == y; });

  // concordant - discordant over pairs untied in both
  const double s = static_cast<double>(n0 - ties_a - ties_b + ties_ab - 2 * swaps);
  return s / std::sqrt(static_cast<double>(n0 - ties_a) * static_cast<double>(n0 - ties_b));
}

inline double spearman(const std::vector<int>& a, const std::vector<int>& b) {
  const std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  return spearman(std::span<const double>(x), std::span<const double>(y));
}

inline double kendall(const std::vector<int>& a, const std::vector<int>& b) {
  const std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  return kendall(std::span<const double>(x), std::span<const double>(y));
}

}  // namespace rlsim
