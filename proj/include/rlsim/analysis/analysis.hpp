#pragma once

// Cross-session analysis of tournament rankings: correlation heat-maps,
// k-means clusters of agents, per-cluster characteristic means, shifts
// between complexity levels and a complete-linkage table.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rlsim/analysis/correlation.hpp"
#include "rlsim/analysis/kmeans.hpp"
#include "rlsim/learning/agent.hpp"
#include "rlsim/tournament/session_io.hpp"

namespace rlsim {

// agents x sessions; ranks[i][s] is agent i's rank in session s.
struct RankingMatrix {
  std::vector<std::string> sessions;
  std::vector<AgentProfile> agents;
  std::vector<std::vector<int>> ranks;

  std::vector<int> column(std::size_t s) const {
    std::vector<int> c;
    for (const auto& row : ranks) c.push_back(row[s]);
    return c;
  }
};

// Aligns several ranking tables on agent id (order of the first table's ids
// sorted lexicographically). Every table must hold the same agents, and each
// column must be a permutation of 1..N.
inline RankingMatrix ranking_matrix(const std::vector<std::string>& labels,
                                    const std::vector<std::vector<RankedAgent>>& tables) {
  if (labels.size() != tables.size()) throw LengthMismatch("ranking_matrix: one label per table");
  if (tables.empty()) throw InvalidConfig("rankings", "at least one ranking table is required");
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size())
    throw InvalidConfig("rankings", "session labels must be unique");
  RankingMatrix m;
  m.sessions = labels;
  std::vector<RankedAgent> first = tables[0];
  std::sort(first.begin(), first.end(), [](const RankedAgent& a, const RankedAgent& b) { return a.id < b.id; });
  for (const auto& a : first) m.agents.push_back({a.id, a.epsilon, a.gamma, a.lambda});
  const std::size_t n = first.size();
  m.ranks.assign(n, std::vector<int>(tables.size(), 0));
  for (std::size_t s = 0; s < tables.size(); ++s) {
    if (tables[s].size() != n) throw LengthMismatch("ranking_matrix: session " + labels[s] + " has a different agent count");
    std::map<std::string, int> by_id;
    for (const auto& a : tables[s]) by_id[a.id] = a.rank;
    std::vector<bool> seen(n + 1, false);
    for (std::size_t i = 0; i < n; ++i) {
      const auto it = by_id.find(m.agents[i].id);
      if (it == by_id.end()) throw InvalidConfig("rankings", "agent " + m.agents[i].id + " missing from " + labels[s]);
      const int r = it->second;
      if (r < 1 || r > static_cast<int>(n) || seen[static_cast<std::size_t>(r)])
        throw InvalidConfig("rankings", labels[s] + " is not a permutation of 1.." + std::to_string(n));
      seen[static_cast<std::size_t>(r)] = true;
      m.ranks[i][s] = r;
    }
  }
  return m;
}

struct CorrelationResult {
  std::string a;
  std::string b;
  double rho = 0.0;
  double tau = 0.0;
};

// Full symmetric matrix over the sessions of `m`, diagonal included.
struct CorrelationTable {
  std::vector<std::string> sessions;
  std::vector<std::vector<double>> rho;
  std::vector<std::vector<double>> tau;

  std::vector<CorrelationResult> pairs() const {
    std::vector<CorrelationResult> out;
    for (std::size_t i = 0; i < sessions.size(); ++i)
      for (std::size_t j = i + 1; j < sessions.size(); ++j) out.push_back({sessions[i], sessions[j], rho[i][j], tau[i][j]});
    return out;
  }
};

inline CorrelationTable correlation_heatmap(const RankingMatrix& m) {
  const std::size_t s = m.sessions.size();
  CorrelationTable t{m.sessions, std::vector<std::vector<double>>(s, std::vector<double>(s, 1.0)),
                     std::vector<std::vector<double>>(s, std::vector<double>(s, 1.0))};
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j) {
      const auto a = m.column(i), b = m.column(j);
      t.rho[i][j] = t.rho[j][i] = spearman(a, b);
      t.tau[i][j] = t.tau[j][i] = kendall(a, b);
    }
  return t;
}

// Text heat-map: one block per row session, rho above tau in every cell.
inline std::string format_heatmap(const CorrelationTable& t) {
  std::string out = "rho over tau\n";
  auto cell = [](const std::string& s) {
    std::string c = s.substr(0, 12);
    return std::string(13 - c.size(), ' ') + c;
  };
  out += cell("");
  for (const auto& s : t.sessions) out += cell(s);
  out += '\n';
  for (std::size_t i = 0; i < t.sessions.size(); ++i) {
    out += cell(t.sessions[i]);
    for (std::size_t j = 0; j < t.sessions.size(); ++j) out += cell(csv::fixed(t.rho[i][j], 3));
    out += '\n' + cell("");
    for (std::size_t j = 0; j < t.sessions.size(); ++j) out += cell(csv::fixed(t.tau[i][j], 3));
    out += '\n';
  }
  return out;
}

struct ClusterStats {
  std::string label;  // C1 = lowest mean rank
  std::size_t size = 0;
  double epsilon = 0, gamma = 0, lambda = 0;
  double mean_rank = 0;
  std::vector<double> centroid;
};

struct ClusterReport {
  int k = 3;
  std::vector<std::string> sessions;
  std::vector<std::string> agent_ids;
  std::vector<int> cluster;  // per agent, 0-based index into `clusters` (0 = C1)
  std::vector<ClusterStats> clusters;
  double inertia = 0;
  int reruns = 0;
  int best_run = 0;
};

inline std::string cluster_label(std::size_t index) { return "C" + std::to_string(index + 1); }

// Clusters agents on their rank vectors over the given session columns and
// relabels clusters by ascending mean rank.
inline ClusterReport cluster_agents(const RankingMatrix& m, const KMeansOptions& opt,
                                    const std::vector<std::size_t>& columns = {}) {
  std::vector<std::size_t> cols = columns;
  if (cols.empty())
    for (std::size_t s = 0; s < m.sessions.size(); ++s) cols.push_back(s);
  std::vector<Point> pts;
  for (const auto& row : m.ranks) {
    Point p;
    for (std::size_t c : cols) p.push_back(row[c]);
    pts.push_back(p);
  }
  const KMeansResult km = kmeans(pts, opt);

  const std::size_t k = static_cast<std::size_t>(opt.k);
  std::vector<ClusterStats> raw(k);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto& c = raw[static_cast<std::size_t>(km.labels[i])];
    ++c.size;
    c.epsilon += m.agents[i].epsilon;
    c.gamma += m.agents[i].gamma;
    c.lambda += m.agents[i].lambda;
    for (double v : pts[i]) c.mean_rank += v;
  }
  for (std::size_t j = 0; j < k; ++j) {
    auto& c = raw[j];
    const double n = static_cast<double>(c.size);
    c.epsilon /= n;
    c.gamma /= n;
    c.lambda /= n;
    c.mean_rank /= n * static_cast<double>(cols.size());
    c.centroid = km.centroids[j];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a].mean_rank < raw[b].mean_rank; });
  std::vector<int> relabel(k);
  ClusterReport rep;
  rep.k = opt.k;
  for (std::size_t c : cols) rep.sessions.push_back(m.sessions[c]);
  for (std::size_t pos = 0; pos < k; ++pos) {
    relabel[order[pos]] = static_cast<int>(pos);
    rep.clusters.push_back(raw[order[pos]]);
    rep.clusters.back().label = cluster_label(pos);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rep.agent_ids.push_back(m.agents[i].id);
    rep.cluster.push_back(relabel[static_cast<std::size_t>(km.labels[i])]);
  }
  rep.inertia = km.inertia;
  rep.reruns = opt.reruns;
  rep.best_run = km.run;
  return rep;
}

// Characteristic bands over the [0.6, 0.9] grid: <= 0.7 low, <= 0.8 mid,
// otherwise high. A small tolerance keeps means like (0.6 + 0.8) / 2 in band.
enum class Band { Low, Mid, High };

inline Band band_of(double v) {
  constexpr double tol = 1e-9;
  if (v <= 0.7 + tol) return Band::Low;
  if (v <= 0.8 + tol) return Band::Mid;
  return Band::High;
}

inline std::string epsilon_descriptor(double v) {
  switch (band_of(v)) {
    case Band::Low: return "knowledge explorer";
    case Band::Mid: return "balanced explorer/exploiter";
    default: return "knowledge exploiter";
  }
}

inline std::string gamma_descriptor(double v) {
  switch (band_of(v)) {
    case Band::Low: return "risky, short-term strategies";
    case Band::Mid: return "medium-term strategies";
    default: return "conservative, long-term strategies";
  }
}

inline std::string lambda_descriptor(double v) {
  switch (band_of(v)) {
    case Band::Low: return "slow, smooth learner";
    case Band::Mid: return "medium-speed learner";
    default: return "fast, unstable learner";
  }
}

// Thirds of 1..N.
inline std::string rank_descriptor(double mean_rank, std::size_t agents) {
  const double n = static_cast<double>(agents);
  if (mean_rank <= n / 3.0) return "good playing";
  if (mean_rank <= 2.0 * n / 3.0) return "moderate playing";
  return "bad playing";
}

struct ClusterSummaryRow {
  std::string scope;    // "joint" (all sessions together) or "session"
  std::string session;  // "all" for the joint clustering
  ClusterStats stats;
  std::string epsilon_label, gamma_label, lambda_label, rank_label;
};

// Per-cluster means of the characteristic values. The joint clustering gives
// one row per cluster; each session is also clustered on its own ranks so
// that every (cluster, session) pair gets its own triple.
inline std::vector<ClusterSummaryRow> cluster_profile_summary(const RankingMatrix& m, const KMeansOptions& opt) {
  std::vector<ClusterSummaryRow> out;
  auto add = [&](const std::string& scope, const std::string& session, const ClusterReport& rep) {
    for (const auto& c : rep.clusters)
      out.push_back({scope, session, c, epsilon_descriptor(c.epsilon), gamma_descriptor(c.gamma),
                     lambda_descriptor(c.lambda), rank_descriptor(c.mean_rank, m.agents.size())});
  };
  add("joint", "all", cluster_agents(m, opt));
  for (std::size_t s = 0; s < m.sessions.size(); ++s) {
    KMeansOptions o = opt;
    o.seed = derive_seed(opt.seed, m.sessions[s]);
    add("session", m.sessions[s], cluster_agents(m, o, {s}));
  }
  return out;
}

struct ShiftRow {
  std::string cluster;
  std::string characteristic;  // epsilon, gamma, lambda
  double low = 0;
  double high = 0;
  double shift_percent = 0;  // (high - low) / low * 100
};

// Relative change of each cluster's means from `low` to `high`, matched by
// cluster label.
inline std::vector<ShiftRow> shift_report(const std::vector<ClusterStats>& low, const std::vector<ClusterStats>& high) {
  std::vector<ShiftRow> out;
  for (const auto& h : high) {
    const auto l = std::find_if(low.begin(), low.end(), [&](const ClusterStats& c) { return c.label == h.label; });
    if (l == low.end()) throw InvalidConfig("shift_report", "cluster " + h.label + " missing from the low summary");
    auto row = [&](const char* name, double lo, double hi) {
      out.push_back({h.label, name, lo, hi, lo == 0 ? 0.0 : (hi - lo) / lo * 100.0});
    };
    row("epsilon", l->epsilon, h.epsilon);
    row("gamma", l->gamma, h.gamma);
    row("lambda", l->lambda, h.lambda);
  }
  return out;
}

// Per-label mean of several summaries (e.g. the lower complexity sessions).
inline std::vector<ClusterStats> average_summaries(const std::vector<std::vector<ClusterStats>>& parts) {
  if (parts.empty()) return {};
  std::vector<ClusterStats> out = parts[0];
  for (auto& c : out) {
    c.epsilon = c.gamma = c.lambda = c.mean_rank = 0;
    c.size = 0;
    c.centroid.clear();
    for (const auto& part : parts) {
      const auto it = std::find_if(part.begin(), part.end(), [&](const ClusterStats& x) { return x.label == c.label; });
      if (it == part.end()) throw InvalidConfig("shift_report", "cluster " + c.label + " missing");
      c.epsilon += it->epsilon / static_cast<double>(parts.size());
      c.gamma += it->gamma / static_cast<double>(parts.size());
      c.lambda += it->lambda / static_cast<double>(parts.size());
      c.mean_rank += it->mean_rank / static_cast<double>(parts.size());
      c.size += it->size;
    }
  }
  return out;
}

struct LinkageStep {
  std::size_t left = 0;   // ids < n are leaves; n + s is the cluster made at step s
  std::size_t right = 0;
  double distance = 0;
  std::size_t size = 0;
};

// Agglomerative complete linkage on Euclidean distance. Ties merge the pair
// with the smallest ids first.
inline std::vector<LinkageStep> complete_linkage(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  std::vector<LinkageStep> steps;
  if (n < 2) return steps;
  std::vector<std::vector<double>> d(2 * n - 1, std::vector<double>(2 * n - 1, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = std::sqrt(kmeans_detail::dist2(pts[i], pts[j]));
  std::vector<std::size_t> active(n);
  std::iota(active.begin(), active.end(), 0);
  std::vector<std::size_t> size(2 * n - 1, 1);
  for (std::size_t s = 0; s + 1 < n; ++s) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < active.size(); ++x)
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const double v = d[active[x]][active[y]];
        if (v < best) best = v, bi = x, bj = y;
      }
    const std::size_t a = active[bi], b = active[bj], id = n + s;
    size[id] = size[a] + size[b];
    for (std::size_t c : active) d[id][c] = d[c][id] = std::max(d[a][c], d[b][c]);
    steps.push_back({std::min(a, b), std::max(a, b), best, size[id]});
    active.erase(active.begin() + static_cast<long>(bj));
    active.erase(active.begin() + static_cast<long>(bi));
    active.push_back(id);
  }
  return steps;
}

// Everything emitted for one group of sessions (one game).
struct AnalysisReport {
  RankingMatrix matrix;
  CorrelationTable correlations;
  ClusterReport clusters;
  std::vector<ClusterSummaryRow> summary;
  std::vector<ShiftRow> shifts;  // last session vs mean of the earlier ones
  std::vector<LinkageStep> agent_linkage;
  std::vector<LinkageStep> session_linkage;
};

inline AnalysisReport analyze(const RankingMatrix& m, const KMeansOptions& opt) {
  AnalysisReport r;
  r.matrix = m;
  r.correlations = correlation_heatmap(m);
  r.clusters = cluster_agents(m, opt);
  r.summary = cluster_profile_summary(m, opt);
  if (m.sessions.size() >= 2) {
    std::vector<std::vector<ClusterStats>> per_session(m.sessions.size());
    for (const auto& row : r.summary)
      if (row.scope == "session")
        for (std::size_t s = 0; s < m.sessions.size(); ++s)
          if (m.sessions[s] == row.session) per_session[s].push_back(row.stats);
    const std::vector<std::vector<ClusterStats>> earlier(per_session.begin(), per_session.end() - 1);
    r.shifts = shift_report(average_summaries(earlier), per_session.back());
  }
  std::vector<Point> agents, sessions(m.sessions.size());
  for (const auto& row : m.ranks) agents.emplace_back(row.begin(), row.end());
  for (std::size_t s = 0; s < m.sessions.size(); ++s)
    for (const auto& row : m.ranks) sessions[s].push_back(row[s]);
  r.agent_linkage = complete_linkage(agents);
  r.session_linkage = complete_linkage(sessions);
  return r;
}

inline void write_correlations_csv(std::ostream& out, const CorrelationTable& t) {
  csv::write_row(out, {"session_a", "session_b", "rho", "tau"});
  for (const auto& p : t.pairs()) csv::write_row(out, {p.a, p.b, csv::fixed(p.rho), csv::fixed(p.tau)});
}

inline void write_clusters_csv(std::ostream& out, const AnalysisReport& r) {
  std::vector<std::string> header{"agent", "epsilon", "gamma", "lambda", "cluster"};
  for (const auto& s : r.matrix.sessions) header.push_back("rank_" + s);
  csv::write_row(out, header);
  for (std::size_t i = 0; i < r.matrix.agents.size(); ++i) {
    const auto& a = r.matrix.agents[i];
    std::vector<std::string> row{a.id, spec_detail::number(a.epsilon), spec_detail::number(a.gamma),
                                 spec_detail::number(a.lambda), cluster_label(static_cast<std::size_t>(r.clusters.cluster[i]))};
    for (int v : r.matrix.ranks[i]) row.push_back(std::to_string(v));
    csv::write_row(out, row);
  }
}

inline void write_cluster_summary_csv(std::ostream& out, const std::vector<ClusterSummaryRow>& rows) {
  csv::write_row(out, {"scope", "session", "cluster", "size", "mean_epsilon", "mean_gamma", "mean_lambda", "mean_rank",
                       "epsilon_descriptor", "gamma_descriptor", "lambda_descriptor", "rank_descriptor"});
  for (const auto& r : rows)
    csv::write_row(out, {r.scope, r.session, r.stats.label, std::to_string(r.stats.size), csv::fixed(r.stats.epsilon),
                         csv::fixed(r.stats.gamma), csv::fixed(r.stats.lambda), csv::fixed(r.stats.mean_rank),
                         r.epsilon_label, r.gamma_label, r.lambda_label, r.rank_label});
}

inline void write_shifts_csv(std::ostream& out, const std::vector<ShiftRow>& rows, const std::string& from,
                             const std::string& to) {
  csv::write_row(out, {"cluster", "characteristic", "from", "to", "low", "high", "shift_percent"});
  for (const auto& r : rows)
    csv::write_row(out, {r.cluster, r.characteristic, from, to, csv::fixed(r.low), csv::fixed(r.high), csv::fixed(r.shift_percent, 3)});
}

inline void write_linkage_csv(std::ostream& out, const AnalysisReport& r) {
  csv::write_row(out, {"target", "step", "left", "right", "distance", "size", "left_name", "right_name"});
  auto emit = [&](const char* target, const std::vector<LinkageStep>& steps, const std::vector<std::string>& names) {
    const std::size_t n = names.size();
    auto name = [&](std::size_t id) { return id < n ? names[id] : "node" + std::to_string(id); };
    for (std::size_t s = 0; s < steps.size(); ++s)
      csv::write_row(out, {target, std::to_string(s + 1), std::to_string(steps[s].left), std::to_string(steps[s].right),
                           csv::fixed(steps[s].distance), std::to_string(steps[s].size), name(steps[s].left),
                           name(steps[s].right)});
  };
  std::vector<std::string> ids;
  for (const auto& a : r.matrix.agents) ids.push_back(a.id);
  emit("agents", r.agent_linkage, ids);
  emit("sessions", r.session_linkage, r.matrix.sessions);
}

inline std::string shift_from_label(const RankingMatrix& m) {
  std::string s;
  for (std::size_t i = 0; i + 1 < m.sessions.size(); ++i) s += (i ? "+" : "") + m.sessions[i];
  return s;
}

// correlations.csv, correlations.txt, clusters.csv, cluster_summary.csv,
// shifts.csv and linkage.csv.
inline void write_analysis(const std::filesystem::path& dir, const AnalysisReport& r) {
  std::filesystem::create_directories(dir);
  session_detail::write_file(dir / "correlations.csv", [&](std::ostream& o) { write_correlations_csv(o, r.correlations); });
  session_detail::write_file(dir / "correlations.txt", [&](std::ostream& o) { o << format_heatmap(r.correlations); });
  session_detail::write_file(dir / "clusters.csv", [&](std::ostream& o) { write_clusters_csv(o, r); });
  session_detail::write_file(dir / "cluster_summary.csv", [&](std::ostream& o) { write_cluster_summary_csv(o, r.summary); });
  session_detail::write_file(dir / "shifts.csv", [&](std::ostream& o) {
    write_shifts_csv(o, r.shifts, shift_from_label(r.matrix), r.matrix.sessions.empty() ? "" : r.matrix.sessions.back());
  });
  session_detail::write_file(dir / "linkage.csv", [&](std::ostream& o) { write_linkage_csv(o, r); });
}

}  // namespace rlsim
