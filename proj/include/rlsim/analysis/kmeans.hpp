#pragma once

// Lloyd's k-means with k-means++ (or uniform) seeding and best-of-reruns.

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "rlsim/core/error.hpp"
#include "rlsim/core/parallel.hpp"
#include "rlsim/core/random.hpp"

namespace rlsim {

using Point = std::vector<double>;

struct KMeansOptions {
  int k = 3;
  int reruns = 100;
  int max_iter = 300;
  std::uint64_t seed = 0;
  bool plus_plus = true;  // false: k distinct points chosen uniformly
  unsigned workers = 1;
};

struct KMeansResult {
  std::vector<int> labels;  // cluster index per point, in seeding order
  std::vector<Point> centroids;
  double inertia = 0.0;
  int iterations = 0;
  int run = 0;                        // index of the winning rerun
  std::vector<double> inertia_trace;  // after every assignment step of the winning run
};

namespace kmeans_detail {

inline double dist2(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return s;
}

inline std::size_t distinct_count(const std::vector<Point>& pts) {
  return std::set<Point>(pts.begin(), pts.end()).size();
}

inline std::vector<Point> seed_centroids(const std::vector<Point>& pts, int k, bool plus_plus, Rng& rng) {
  std::vector<Point> c;
  std::vector<double> d2(pts.size(), std::numeric_limits<double>::infinity());
  c.push_back(pts[uniform_index(rng, pts.size())]);
  while (static_cast<int>(c.size()) < k) {
    for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = std::min(d2[i], dist2(pts[i], c.back()));
    std::size_t pick = 0;
    if (plus_plus) {
      double total = 0;
      for (double v : d2) total += v;
      double u = uniform01(rng) * total;
      pick = pts.size();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (d2[i] == 0) continue;
        pick = i;
        if (u < d2[i]) break;
        u -= d2[i];
      }
    } else {
      // uniform over points not already chosen as a centroid
      std::vector<std::size_t> fresh;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if (d2[i] > 0) fresh.push_back(i);
      pick = fresh[uniform_index(rng, fresh.size())];
    }
    c.push_back(pts[pick]);
  }
  return c;
}

inline double assign(const std::vector<Point>& pts, const std::vector<Point>& c, std::vector<int>& labels) {
  double inertia = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double d = dist2(pts[i], c[j]);
      if (d < best) best = d, arg = static_cast<int>(j);
    }
    labels[i] = arg;
    inertia += best;
  }
  return inertia;
}

// Empty clusters take the point farthest from its centroid, drawn from a
// cluster that keeps at least one member.
inline void repair_empty(const std::vector<Point>& pts, std::vector<Point>& c, std::vector<int>& labels) {
  for (std::size_t j = 0; j < c.size(); ++j) {
    std::vector<int> sizes(c.size(), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    if (sizes[j] > 0) continue;
    double worst = -1;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto l = static_cast<std::size_t>(labels[i]);
      if (sizes[l] < 2) continue;
      const double d = dist2(pts[i], c[l]);
      if (d > worst) worst = d, arg = i;
    }
    labels[arg] = static_cast<int>(j);
    c[j] = pts[arg];
  }
}

inline void update(const std::vector<Point>& pts, const std::vector<int>& labels, std::vector<Point>& c) {
  const std::size_t dim = pts[0].size();
  std::vector<Point> sum(c.size(), Point(dim, 0.0));
  std::vector<int> count(c.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto l = static_cast<std::size_t>(labels[i]);
    for (std::size_t d = 0; d < dim; ++d) sum[l][d] += pts[i][d];
    ++count[l];
  }
  for (std::size_t j = 0; j < c.size(); ++j)
    if (count[j] > 0)
      for (std::size_t d = 0; d < dim; ++d) c[j][d] = sum[j][d] / count[j];
}

inline double inertia_of(const std::vector<Point>& pts, const std::vector<Point>& c, const std::vector<int>& labels) {
  double s = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) s += dist2(pts[i], c[static_cast<std::size_t>(labels[i])]);
  return s;
}

}  // namespace kmeans_detail

inline void check_kmeans_input(const std::vector<Point>& pts, int k) {
  if (k < 1) throw InvalidConfig("k", "must be at least 1");
  if (pts.empty()) throw InfeasibleK("k-means: no points");
  for (const auto& p : pts)
    if (p.size() != pts[0].size()) throw DimensionMismatch(pts[0].size(), p.size());
  const std::size_t distinct = kmeans_detail::distinct_count(pts);
  if (distinct < static_cast<std::size_t>(k))
    throw InfeasibleK("k-means: " + std::to_string(distinct) + " distinct points for k = " + std::to_string(k));
}

// One Lloyd run. Throws std::logic_error if the objective ever increases.
inline KMeansResult kmeans_once(const std::vector<Point>& pts, int k, int max_iter, std::uint64_t seed, bool plus_plus = true) {
  check_kmeans_input(pts, k);
  Rng rng(seed);
  KMeansResult r;
  r.centroids = kmeans_detail::seed_centroids(pts, k, plus_plus, rng);
  r.labels.assign(pts.size(), -1);
  std::vector<int> prev;
  for (int it = 0; it < std::max(1, max_iter); ++it) {
    prev = r.labels;
    kmeans_detail::assign(pts, r.centroids, r.labels);
    kmeans_detail::repair_empty(pts, r.centroids, r.labels);
    const double inertia = kmeans_detail::inertia_of(pts, r.centroids, r.labels);
    if (!r.inertia_trace.empty() && inertia > r.inertia_trace.back() * (1 + 1e-12) + 1e-12)
      throw std::logic_error("k-means: inertia increased");
    r.inertia_trace.push_back(inertia);
    r.iterations = it + 1;
    if (r.labels == prev) break;
    kmeans_detail::update(pts, r.labels, r.centroids);
  }
  r.inertia = kmeans_detail::inertia_of(pts, r.centroids, r.labels);
  return r;
}

// Best of `reruns` runs by inertia; ties go to the lower run index. Run i is
// seeded with derive_seed(seed, i).
inline KMeansResult kmeans(const std::vector<Point>& pts, const KMeansOptions& opt = {}) {
  check_kmeans_input(pts, opt.k);
  if (opt.reruns < 1) throw InvalidConfig("reruns", "must be at least 1");
  std::vector<KMeansResult> runs(static_cast<std::size_t>(opt.reruns));
  parallel_for(runs.size(), opt.workers, [&](std::size_t i) {
    runs[i] = kmeans_once(pts, opt.k, opt.max_iter, derive_seed(opt.seed, i), opt.plus_plus);
    runs[i].run = static_cast<int>(i);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].inertia < runs[best].inertia) best = i;
  return runs[best];
}

}  // namespace rlsim
