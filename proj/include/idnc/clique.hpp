#pragma once

// Maximum-weight clique solvers over vertex-weighted graphs.
//
// All solvers share one selection order: larger total weight wins (weights
// within a relative 1e-12 of each other tie), then larger cardinality, then
// the lexicographically smallest sorted vertex-index sequence.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "idnc/graph.hpp"

namespace idnc {

/// Exact: generic branch and bound on the vertex graph.
/// Combination: exact search over XOR packet combinations (IDNC graphs only).
/// Auto: exact; alternates Combination and Exact under growing node budgets
///       and returns whichever finishes first (IDNC graphs only).
/// Greedy: highest-weight-first insertion, not optimal.
enum class SolverKind { Auto, Exact, Combination, Greedy };

class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Edgeless graph on n vertices, all weights zero.
  explicit WeightedGraph(std::size_t n)
      : adjacency_(n, VertexSet(n)), weights_(n, 0.0), labels_(n) {
    std::iota(labels_.begin(), labels_.end(), std::size_t{0});
  }

  /// Induced subgraph of an IDNC graph. `subset` must be strictly increasing;
  /// `weights[k]` is the weight of vertex subset[k].
  static WeightedGraph induced(const IdncGraph& graph, const std::vector<std::size_t>& subset,
                               std::vector<double> weights) {
    if (weights.size() != subset.size())
      throw std::invalid_argument("one weight per vertex required");
    WeightedGraph wg;
    const std::size_t m = subset.size();
    wg.labels_ = subset;
    wg.weights_ = std::move(weights);
    wg.adjacency_.assign(m, VertexSet(m));
    const bool whole = m == graph.size();
    for (std::size_t a = 0; a < m; ++a) {
      if (a > 0 && subset[a] <= subset[a - 1])
        throw std::invalid_argument("subset must be strictly increasing");
      if (subset[a] >= graph.size()) throw std::out_of_range("subset vertex out of range");
      if (whole) {
        wg.adjacency_[a] = graph.neighbours(a);
        continue;
      }
      const VertexSet& row = graph.neighbours(subset[a]);
      for (std::size_t b = a + 1; b < m; ++b) {
        if (row.test(subset[b])) {
          wg.adjacency_[a].set(b);
          wg.adjacency_[b].set(a);
        }
      }
    }
    wg.check_weights();
    return wg;
  }

  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  void add_edge(std::size_t a, std::size_t b) {
    if (a == b) throw std::invalid_argument("self loops are not allowed");
    adjacency_.at(a).set(b);
    adjacency_.at(b).set(a);
  }
  void set_weight(std::size_t v, double w) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("weights must be finite and >= 0");
    weights_.at(v) = w;
  }

  bool adjacent(std::size_t a, std::size_t b) const { return adjacency_[a].test(b); }
  const VertexSet& neighbours(std::size_t v) const { return adjacency_[v]; }
  double weight(std::size_t v) const { return weights_[v]; }
  const std::vector<double>& weights() const { return weights_; }

  /// Index of local vertex v in the graph this one was induced from.
  std::size_t label(std::size_t v) const { return labels_[v]; }

  bool is_clique(const std::vector<std::size_t>& vs) const {
    for (std::size_t a = 0; a < vs.size(); ++a) {
      if (vs[a] >= size()) return false;
      for (std::size_t b = a + 1; b < vs.size(); ++b)
        if (vs[a] == vs[b] || !adjacent(vs[a], vs[b])) return false;
    }
    return true;
  }

  /// Weight summed in ascending vertex order, so equal sets give equal sums.
  double clique_weight(const std::vector<std::size_t>& sorted_vs) const {
    double w = 0.0;
    for (std::size_t v : sorted_vs) w += weights_[v];
    return w;
  }

  /// Maps a clique in local indices back to the parent graph.
  Clique to_parent(const Clique& local) const {
    Clique out;
    out.vertices.reserve(local.size());
    for (std::size_t v : local.vertices) out.vertices.push_back(labels_[v]);
    return out;
  }

 private:
  void check_weights() const {
    for (double w : weights_)
      if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("weights must be finite and >= 0");
  }

  std::vector<VertexSet> adjacency_;
  std::vector<double> weights_;
  std::vector<std::size_t> labels_;
};

namespace detail {

inline double tie_tolerance(double a, double b) {
  return 1e-12 * std::max(std::abs(a), std::abs(b));
}

/// -1, 0, +1 comparing (weight, cardinality); weights within tolerance tie.
inline int compare_weight_card(double wa, std::size_t ca, double wb, std::size_t cb) {
  const double tol = tie_tolerance(wa, wb);
  if (wa > wb + tol) return 1;
  if (wa < wb - tol) return -1;
  if (ca != cb) return ca > cb ? 1 : -1;
  return 0;
}

// Vertices by descending weight, then ascending index.
inline std::vector<std::size_t> weight_order(const WeightedGraph& g) {
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g.weight(a) > g.weight(b); });
  return order;
}

class ExactSearch {
 public:
  ExactSearch(const WeightedGraph& g, const Clique& seed, std::size_t node_limit = 0)
      : g_(g), node_limit_(node_limit) {
    best_ = seed.vertices;
    best_w_ = g.clique_weight(best_);
  }

  Clique run() {
    VertexSet all(g_.size());
    all.set();
    current_.clear();
    expand(std::move(all), 0.0, 0);
    return Clique{best_};
  }

  std::size_t nodes() const { return nodes_; }
  std::size_t last_improvement() const { return last_improvement_; }
  /// False when the node limit stopped the search before optimality was proven.
  bool exhausted() const { return !stopped_; }

 private:
  struct ColorClass {
    std::vector<std::size_t> members;  // ascending index
    std::vector<double> suffix_max;    // max weight over members[k..]
    std::size_t cursor = 0;
  };

  struct Scratch {
    std::vector<std::size_t> members;
    std::vector<VertexSet> forbidden;
    std::vector<ColorClass> classes;
    std::size_t used = 0;
  };

  // Greedy colouring of `p`, highest index first. Low-index vertices end up
  // in the late classes, which empty out as branching advances through them.
  void color(const VertexSet& p, Scratch& s) const {
    s.members.clear();
    for (auto v = p.find_first(); v != VertexSet::npos; v = p.find_next(v)) s.members.push_back(v);
    s.used = 0;
    for (auto it = s.members.rbegin(); it != s.members.rend(); ++it) {
      const std::size_t v = *it;
      std::size_t c = 0;
      while (c < s.used && s.forbidden[c].test(v)) ++c;
      if (c == s.used) {
        if (s.forbidden.size() == s.used) {
          s.forbidden.emplace_back(g_.size());
          s.classes.emplace_back();
        } else {
          s.forbidden[c].reset();
        }
        s.classes[c].members.clear();
        ++s.used;
      }
      s.classes[c].members.push_back(v);
      s.forbidden[c] |= g_.neighbours(v);
    }
    for (std::size_t c = 0; c < s.used; ++c) {
      ColorClass& cls = s.classes[c];
      std::reverse(cls.members.begin(), cls.members.end());
      cls.suffix_max.resize(cls.members.size());
      double m = 0.0;
      for (std::size_t k = cls.members.size(); k-- > 0;) {
        m = std::max(m, g_.weight(cls.members[k]));
        cls.suffix_max[k] = m;
      }
      cls.cursor = 0;
    }
  }

  void visit() {
    const double w = g_.clique_weight(current_);
    const int cmp = compare_weight_card(w, current_.size(), best_w_, best_.size());
    if (cmp > 0 || (provisional_ && cmp == 0)) {
      best_ = current_;
      best_w_ = w;
      provisional_ = false;
      last_improvement_ = nodes_;
    }
  }

  bool prune(double bound_w, std::size_t bound_card) const {
    const int cmp = compare_weight_card(bound_w, bound_card, best_w_, best_.size());
    return provisional_ ? cmp < 0 : cmp <= 0;
  }

  // Include-first branching on the smallest remaining index visits cliques of
  // equal cardinality in lexicographic order, so the first clique reaching a
  // given (weight, cardinality) is the one the tie-break selects.
  void expand(VertexSet p, double w, std::size_t depth) {
    if (stopped_) return;
    if (node_limit_ != 0 && nodes_ >= node_limit_) {
      stopped_ = true;
      return;
    }
    ++nodes_;
    visit();
    if (p.none()) return;
    if (scratch_.size() <= depth) scratch_.resize(depth + 1);
    color(p, scratch_[depth]);
    for (auto v = p.find_first(); v != VertexSet::npos; v = p.find_next(v)) {
      // Scratch may be reallocated by deeper levels; re-fetch each iteration.
      Scratch& s = scratch_[depth];
      double bound_w = w;
      std::size_t bound_card = current_.size();
      for (std::size_t c = 0; c < s.used; ++c) {
        ColorClass& cls = s.classes[c];
        while (cls.cursor < cls.members.size() && cls.members[cls.cursor] < v) ++cls.cursor;
        if (cls.cursor < cls.members.size()) {
          bound_w += cls.suffix_max[cls.cursor];
          ++bound_card;
        }
      }
      if (prune(bound_w, bound_card)) return;
      // Vertices below v are already removed from p.
      VertexSet child = p & g_.neighbours(v);
      current_.push_back(v);
      expand(std::move(child), w + g_.weight(v), depth + 1);
      current_.pop_back();
      if (stopped_) return;
      p.reset(v);
    }
  }

  const WeightedGraph& g_;
  std::vector<Scratch> scratch_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
  double best_w_ = 0.0;
  bool provisional_ = true;
  std::size_t node_limit_ = 0;
  std::size_t nodes_ = 0;
  std::size_t last_improvement_ = 0;
  bool stopped_ = false;
};

}  // namespace detail

/// Highest-weight-first insertion. Not optimal in general.
inline Clique max_weight_clique_greedy(const WeightedGraph& g) {
  Clique c;
  for (std::size_t v : detail::weight_order(g)) {
    bool ok = true;
    for (std::size_t u : c.vertices) {
      if (!g.adjacent(u, v)) {
        ok = false;
        break;
      }
    }
    if (ok) c.vertices.push_back(v);
  }
  std::sort(c.vertices.begin(), c.vertices.end());
  return c;
}

/// Exact branch and bound with a weighted colouring bound.
inline Clique max_weight_clique_exact(const WeightedGraph& g) {
  if (g.empty()) return {};
  detail::ExactSearch search(g, max_weight_clique_greedy(g));
  return search.run();
}

namespace detail {

// Search over packet combinations K. A user is served by K iff exactly one
// of its wanted packets is in K; every clique is contained in the set of
// vertices K serves, where K is the clique's own packet set, so the best
// such closure over all K is a maximum-weight clique.
class CombinationSearch {
 public:
  CombinationSearch(const IdncGraph& graph, const std::vector<std::size_t>& subset,
                    const std::vector<double>& weights, std::size_t node_limit = 0)
      : node_limit_(node_limit) {
    if (weights.size() != subset.size()) throw std::invalid_argument("one weight per vertex required");
    const std::size_t num_packets = graph.num_packets();
    std::vector<std::size_t> local_of_user(graph.num_users(), npos);
    std::vector<double> packet_score(num_packets, 0.0);
    std::vector<std::uint8_t> packet_used(num_packets, 0);
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const std::size_t v = subset.at(k);
      if (k > 0 && v <= subset[k - 1]) throw std::invalid_argument("subset must be strictly increasing");
      if (v >= graph.size()) throw std::out_of_range("subset vertex out of range");
      if (!std::isfinite(weights[k]) || weights[k] < 0.0)
        throw std::invalid_argument("weights must be finite and >= 0");
      const Vertex& vx = graph.vertex(v);
      if (local_of_user[vx.user] == npos) {
        local_of_user[vx.user] = users_.size();
        users_.push_back({});
      }
      packet_used[vx.packet] = 1;
      packet_score[vx.packet] += weights[k];
    }
    for (PacketId j = 0; j < num_packets; ++j)
      if (packet_used[j]) packets_.push_back(j);
    // Popular packets first: good combinations are found early.
    std::stable_sort(packets_.begin(), packets_.end(),
                     [&](PacketId a, PacketId b) { return packet_score[a] > packet_score[b]; });
    std::vector<std::size_t> position(num_packets, npos);
    for (std::size_t k = 0; k < packets_.size(); ++k) position[packets_[k]] = k;

    const std::size_t m = packets_.size();
    wanting_.assign(m, {});
    for (UserId i = 0; i < graph.num_users(); ++i) {
      const std::size_t u = local_of_user[i];
      if (u == npos) continue;
      users_[u].vertex_at.assign(m, npos);
      users_[u].weight_at.assign(m, 0.0);
      const PacketSet& w = graph.user_wants(i);
      for (auto j = w.find_first(); j != PacketSet::npos; j = w.find_next(j)) {
        // Wanted packets outside the candidate set are never added to K.
        if (position[j] == npos) continue;
        wanting_[position[j]].push_back(u);
        users_[u].wanted.push_back(position[j]);
      }
    }
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const Vertex& vx = graph.vertex(subset[k]);
      User& user = users_[local_of_user[vx.user]];
      user.vertex_at[position[vx.packet]] = subset[k];
      user.weight_at[position[vx.packet]] = weights[k];
    }
    for (User& user : users_) {
      std::sort(user.wanted.begin(), user.wanted.end());
      user.suffix_weight.assign(m + 1, 0.0);
      user.suffix_any.assign(m + 1, 0);
      for (std::size_t k = m; k-- > 0;) {
        const bool here = user.vertex_at[k] != npos;
        user.suffix_weight[k] = std::max(user.suffix_weight[k + 1], here ? user.weight_at[k] : 0.0);
        user.suffix_any[k] = user.suffix_any[k + 1] || here;
        if (here && user.last == npos) user.last = k;
      }
    }
    vertex_weight_.assign(graph.size(), 0.0);
    for (std::size_t k = 0; k < subset.size(); ++k) vertex_weight_[subset[k]] = weights[k];
    kill_.assign(m, 0.0);
  }

  Clique run() {
    best_.clear();
    best_w_ = 0.0;
    top_w_ = 0.0;
    ++nodes_;
    visit();
    // Russian-doll order: doll_[k] is the best weight using packets at
    // positions >= k only, an upper bound on what any suffix can still add.
    const std::size_t m = packets_.size();
    doll_.assign(m + 1, 0.0);
    reach_w_.assign(m + 1, std::vector<double>(m + 1));
    reach_card_.assign(m + 1, std::vector<std::size_t>(m + 1));
    for (std::size_t k = m; k-- > 0;) {
      include(k);
      expand(k + 1);
      undo(k);
      doll_[k] = top_w_;
      if (stopped_) {
        for (std::size_t r = k; r-- > 0;) doll_[r] = std::numeric_limits<double>::infinity();
        break;
      }
    }
    return Clique{best_};
  }

  std::size_t nodes() const { return nodes_; }
  /// False when the node limit stopped the search before optimality was proven.
  bool exhausted() const { return !stopped_; }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  struct User {
    std::vector<std::size_t> vertex_at;  // by packet position; npos if not a candidate
    std::vector<double> weight_at;
    std::vector<double> suffix_weight;
    std::vector<std::uint8_t> suffix_any;
    std::vector<std::size_t> wanted;      // candidate packet positions
    std::size_t last = npos;              // last position with a vertex
    int count = 0;                        // |K ∩ W|, saturating at 2
    std::size_t served_at = npos;         // packet position when count == 1
  };

  double vertex_weight(std::size_t v) const { return vertex_weight_[v]; }

  void visit() {
    top_w_ = std::max(top_w_, cur_w_);
    const int cmp = compare_weight_card(cur_w_, cur_card_, best_w_, best_.size());
    if (cmp < 0) return;
    std::vector<std::size_t> clique;
    clique.reserve(cur_card_);
    for (const User& u : users_)
      if (u.count == 1 && u.served_at != npos && u.vertex_at[u.served_at] != npos)
        clique.push_back(u.vertex_at[u.served_at]);
    std::sort(clique.begin(), clique.end());
    double w = 0.0;
    for (std::size_t v : clique) w += vertex_weight(v);
    const int exact = compare_weight_card(w, clique.size(), best_w_, best_.size());
    if (exact > 0 || (exact == 0 && clique < best_)) {
      best_ = std::move(clique);
      best_w_ = w;
    }
  }

  // kill_[r]: weight lost by the currently served users if packet r joins K.
  // Below position k only r > k is ever read, so only that part is kept.
  void add_kill(const User& u, std::size_t k, double w) {
    auto it = std::upper_bound(u.wanted.begin(), u.wanted.end(), k);
    for (; it != u.wanted.end(); ++it) kill_[*it] += w;
  }

  void include(std::size_t k) {
    undo_marks_.push_back(undo_log_.size());
    for (std::size_t ui : wanting_[k]) {
      User& u = users_[ui];
      if (u.count >= 2) continue;
      undo_log_.emplace_back(ui, u.count);
      if (u.count == 1) {
        if (u.vertex_at[u.served_at] != npos) {
          cur_w_ -= u.weight_at[u.served_at];
          --cur_card_;
          add_kill(u, k, -u.weight_at[u.served_at]);
        }
        u.count = 2;
      } else {
        u.count = 1;
        u.served_at = k;
        if (u.vertex_at[k] != npos) {
          cur_w_ += u.weight_at[k];
          ++cur_card_;
          add_kill(u, k, u.weight_at[k]);
        }
      }
    }
  }

  void undo(std::size_t k) {
    const std::size_t mark = undo_marks_.back();
    undo_marks_.pop_back();
    while (undo_log_.size() > mark) {
      const auto [ui, before] = undo_log_.back();
      undo_log_.pop_back();
      User& u = users_[ui];
      if (before == 1) {
        u.count = 1;
        if (u.vertex_at[u.served_at] != npos) {
          cur_w_ += u.weight_at[u.served_at];
          ++cur_card_;
          add_kill(u, k, u.weight_at[u.served_at]);
        }
      } else {
        if (u.vertex_at[k] != npos) {
          cur_w_ -= u.weight_at[k];
          --cur_card_;
          add_kill(u, k, -u.weight_at[k]);
        }
        u.count = 0;
        u.served_at = npos;
      }
    }
  }

  // Children add their smallest new packet r >= k. Such an extension gains
  // at most the free users still reachable from r, minus kill_[r], and at
  // most doll_[r].
  void expand(std::size_t k) {
    if (stopped_) return;
    if (node_limit_ != 0 && nodes_ >= node_limit_) {
      stopped_ = true;
      return;
    }
    ++nodes_;
    visit();
    const std::size_t m = packets_.size();
    if (k == m) return;
    std::vector<double>& rw = reach_w_[depth_];
    std::vector<std::size_t>& rc = reach_card_[depth_];
    std::fill(rw.begin() + static_cast<std::ptrdiff_t>(k), rw.end(), 0.0);
    std::fill(rc.begin() + static_cast<std::ptrdiff_t>(k), rc.end(), 0);
    for (const User& u : users_) {
      if (u.count == 0 && u.suffix_any[k]) {
        rw[u.last] += u.suffix_weight[k];
        ++rc[u.last];
      }
    }
    for (std::size_t r = m - 1; r > k; --r) {
      rw[r - 1] += rw[r];
      rc[r - 1] += rc[r];
    }
    ++depth_;
    for (std::size_t r = k; r < m && !stopped_; ++r) {
      const std::size_t card = cur_card_ + rc[r];
      // Without the kill term both parts only shrink as r grows.
      if (compare_weight_card(cur_w_ + std::min(rw[r], doll_[r]), card, best_w_, best_.size()) < 0) break;
      // The slack absorbs rounding drift in the incrementally kept kill_.
      const double gain = std::max(0.0, rw[r] - kill_[r] + 1e-9);
      // Ties are explored: the lexicographic tie-break needs every optimum.
      if (compare_weight_card(cur_w_ + std::min(gain, doll_[r]), card, best_w_, best_.size()) < 0) continue;
      include(r);
      expand(r + 1);
      undo(r);
    }
    --depth_;
  }

  std::vector<User> users_;
  std::vector<PacketId> packets_;
  std::vector<std::vector<std::size_t>> wanting_;  // by packet position: local users wanting it
  std::vector<double> vertex_weight_;
  std::size_t node_limit_ = 0;
  bool stopped_ = false;
  std::vector<std::size_t> best_;
  double best_w_ = 0.0;
  double top_w_ = 0.0;  // largest weight visited, ignoring ties
  std::vector<double> doll_;
  std::vector<double> kill_;
  std::vector<std::vector<double>> reach_w_;  // per depth: free weight reachable from r
  std::vector<std::vector<std::size_t>> reach_card_;
  std::size_t depth_ = 0;
  std::vector<std::pair<std::size_t, int>> undo_log_;  // (user, count before)
  std::vector<std::size_t> undo_marks_;
  double cur_w_ = 0.0;
  std::size_t cur_card_ = 0;
  std::size_t nodes_ = 0;
};

}  // namespace detail

/// Exact maximum-weight clique of the subgraph of an IDNC graph induced by
/// `subset` (strictly increasing vertex indices; weights[k] belongs to
/// subset[k]). Same selection order as the other solvers; returns indices
/// of `graph`.
inline Clique max_weight_clique_combination(const IdncGraph& graph,
                                            const std::vector<std::size_t>& subset,
                                            const std::vector<double>& weights) {
  if (subset.empty()) return {};
  detail::CombinationSearch search(graph, subset, weights);
  return search.run();
}

inline constexpr std::size_t kBruteForceLimit = 20;

/// Enumerates every vertex subset. Test oracle; refuses more than 20 vertices.
inline Clique max_weight_clique_bruteforce(const WeightedGraph& g) {
  const std::size_t n = g.size();
  if (n > kBruteForceLimit) throw std::invalid_argument("brute force limited to 20 vertices");
  std::vector<std::uint32_t> adj(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && g.adjacent(a, b)) adj[a] |= std::uint32_t{1} << b;

  std::vector<std::size_t> best;
  double best_w = 0.0;
  std::vector<std::size_t> members;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    members.clear();
    bool clique = true;
    for (std::size_t v = 0; v < n && clique; ++v) {
      if (!(mask >> v & 1U)) continue;
      const std::uint32_t others = mask & ~(std::uint32_t{1} << v);
      if ((others & ~adj[v]) != 0) clique = false;
      members.push_back(v);
    }
    if (!clique) continue;
    double w = 0.0;
    for (std::size_t v : members) w += g.weight(v);
    const double tol = 1e-12 * std::max(std::abs(w), std::abs(best_w));
    bool take = false;
    if (w > best_w + tol) {
      take = true;
    } else if (w >= best_w - tol) {
      if (members.size() != best.size()) take = members.size() > best.size();
      else take = std::lexicographical_compare(members.begin(), members.end(), best.begin(), best.end());
    }
    if (take) {
      best = members;
      best_w = w;
    }
  }
  return Clique{best};
}

/// Generic solvers only; Combination needs the IDNC structure, see solve_subgraph.
inline Clique max_weight_clique(const WeightedGraph& g, SolverKind solver) {
  switch (solver) {
    case SolverKind::Exact: return max_weight_clique_exact(g);
    case SolverKind::Greedy: return max_weight_clique_greedy(g);
    case SolverKind::Auto:
    case SolverKind::Combination: break;
  }
  throw std::invalid_argument("auto and combination solvers require an IDNC graph");
}

/// Both exact searches return the same clique, so the race only affects
/// running time. Combination is strong on large graphs with many users, the
/// colouring bound on graphs with few users and many packets.
inline Clique max_weight_clique_auto(const IdncGraph& graph, const std::vector<std::size_t>& subset,
                                     std::vector<double> weights) {
  if (subset.empty()) return {};
  std::optional<WeightedGraph> wg;
  std::optional<Clique> seed;
  auto try_exact = [&](std::size_t budget) -> std::optional<Clique> {
    if (!wg) {
      wg = WeightedGraph::induced(graph, subset, weights);
      seed = max_weight_clique_greedy(*wg);
    }
    detail::ExactSearch exact(*wg, *seed, budget);
    Clique e = exact.run();
    if (exact.exhausted()) return wg->to_parent(e);
    return std::nullopt;
  };
  if (subset.size() <= 400) {
    if (auto e = try_exact(1024)) return *e;
  }
  for (std::size_t budget = std::size_t{1} << 18;; budget *= 4) {
    detail::CombinationSearch comb(graph, subset, weights, budget);
    Clique c = comb.run();
    if (comb.exhausted()) return c;
    if (auto e = try_exact(budget / 32)) return *e;
  }
}

/// Best clique of the IDNC subgraph induced by `subset` under `solver`.
inline Clique solve_subgraph(const IdncGraph& graph, const std::vector<std::size_t>& subset,
                             std::vector<double> weights, SolverKind solver) {
  if (solver == SolverKind::Auto) return max_weight_clique_auto(graph, subset, std::move(weights));
  if (solver == SolverKind::Combination)
    return max_weight_clique_combination(graph, subset, weights);
  const auto wg = WeightedGraph::induced(graph, subset, std::move(weights));
  return wg.to_parent(max_weight_clique(wg, solver));
}

/// Grows `base` (a clique of `graph`) by the best clique among the `layer`
/// vertices adjacent to every base vertex. `weights` is indexed by graph vertex.
inline Clique extend_clique_through_layer(const IdncGraph& graph,
                                          const std::vector<std::size_t>& layer,
                                          const std::vector<double>& weights, const Clique& base,
                                          SolverKind solver = SolverKind::Auto) {
  std::vector<std::size_t> candidates;
  std::vector<double> cand_weights;
  for (std::size_t v : layer) {
    if (std::binary_search(base.vertices.begin(), base.vertices.end(), v)) continue;
    bool ok = true;
    for (std::size_t b : base.vertices) {
      if (!graph.adjacent(v, b)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      candidates.push_back(v);
      cand_weights.push_back(weights[v]);
    }
  }
  if (candidates.empty()) return base;
  Clique grown = solve_subgraph(graph, candidates, std::move(cand_weights), solver);
  grown.vertices.insert(grown.vertices.end(), base.vertices.begin(), base.vertices.end());
  std::sort(grown.vertices.begin(), grown.vertices.end());
  return grown;
}

}  // namespace idnc
