#pragma once

// IDNC graph: one vertex per (user, wanted packet) pair. Two vertices are
// adjacent when one coded packet can serve both users instantly. Also holds
// the delay-dependent anticipated completion times and the criticality
// layering built on top of them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "idnc/model.hpp"

namespace idnc {

using VertexSet = boost::dynamic_bitset<std::uint64_t>;

/// Real-arithmetic tolerance for completion-time comparisons.
inline constexpr double kCtTolerance = 1e-9;

struct Vertex {
  UserId user = 0;
  PacketId packet = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Sorted vertex indices; every pair mutually adjacent.
struct Clique {
  std::vector<std::size_t> vertices;

  bool empty() const { return vertices.empty(); }
  std::size_t size() const { return vertices.size(); }

  friend bool operator==(const Clique&, const Clique&) = default;
};

class IdncGraph {
 public:
  IdncGraph() = default;

  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }

  const Vertex& vertex(std::size_t v) const { return vertices_[v]; }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  bool adjacent(std::size_t a, std::size_t b) const { return adjacency_[a].test(b); }
  const VertexSet& neighbours(std::size_t v) const { return adjacency_[v]; }

  std::size_t num_users() const { return wants_.size(); }
  std::size_t num_packets() const { return wants_.empty() ? 0 : wants_.front().size(); }
  /// Wants set of a user at construction time; empty for completed users.
  const PacketSet& user_wants(UserId i) const { return wants_[i]; }

  bool is_clique(const std::vector<std::size_t>& vs) const {
    for (std::size_t a = 0; a < vs.size(); ++a) {
      if (vs[a] >= size()) return false;
      for (std::size_t b = a + 1; b < vs.size(); ++b) {
        if (vs[a] == vs[b] || !adjacent(vs[a], vs[b])) return false;
      }
    }
    return true;
  }

  friend IdncGraph build_graph(const std::vector<UserState>& states);

 private:
  std::vector<Vertex> vertices_;
  std::vector<VertexSet> adjacency_;
  std::vector<PacketSet> wants_;
};

/// Adjacency rule over the users' Has sets: same packet, or each packet is
/// already held by the other vertex's user (served by j XOR l).
inline bool are_adjacent(const Vertex& a, const Vertex& b, const std::vector<UserState>& states) {
  if (a.user == b.user) return false;
  if (a.packet == b.packet) return true;
  return states[b.user].has.test(a.packet) && states[a.user].has.test(b.packet);
}

/// Vertices are ordered by (user, packet). Completed users contribute none.
inline IdncGraph build_graph(const std::vector<UserState>& states) {
  IdncGraph g;
  std::vector<std::pair<std::size_t, std::size_t>> user_range(states.size());
  g.wants_.reserve(states.size());
  for (UserId i = 0; i < states.size(); ++i) {
    const std::size_t begin = g.vertices_.size();
    g.wants_.push_back(states[i].completed() ? PacketSet(states[i].wants.size()) : states[i].wants);
    if (!states[i].completed()) {
      const PacketSet& w = states[i].wants;
      for (auto j = w.find_first(); j != PacketSet::npos; j = w.find_next(j)) {
        g.vertices_.push_back({i, j});
      }
    }
    user_range[i] = {begin, g.vertices_.size()};
  }
  const std::size_t n = g.vertices_.size();
  g.adjacency_.assign(n, VertexSet(n));
  if (n == 0) return g;

  // Row of (i, j): vertices (k, l) with l in H_i and j in H_k, plus the
  // other vertices of packet j. Vertices of user i itself never qualify.
  const std::size_t num_packets = states.front().wants.size();
  std::vector<VertexSet> held_by_user(states.size(), VertexSet(n));  // l in H_i
  std::vector<VertexSet> holders_of(num_packets, VertexSet(n));      // j in H_k
  std::vector<VertexSet> same_packet(num_packets, VertexSet(n));
  for (std::size_t v = 0; v < n; ++v) {
    const Vertex& x = g.vertices_[v];
    same_packet[x.packet].set(v);
    for (UserId i = 0; i < states.size(); ++i)
      if (user_range[i].first != user_range[i].second && states[i].has.test(x.packet))
        held_by_user[i].set(v);
    const PacketSet& h = states[x.user].has;
    for (auto j = h.find_first(); j != PacketSet::npos; j = h.find_next(j)) holders_of[j].set(v);
  }
  for (std::size_t v = 0; v < n; ++v) {
    const Vertex& x = g.vertices_[v];
    VertexSet& row = g.adjacency_[v];
    row = held_by_user[x.user];
    row &= holders_of[x.packet];
    row |= same_packet[x.packet];
    row.reset(v);
  }
  return g;
}

struct Transmission {
  PacketCombination combination;
  std::vector<UserId> targeted;
};

/// Maps a clique to its XOR payload and the users it serves instantly.
inline Transmission clique_to_combination(const Clique& clique, const IdncGraph& graph) {
  if (clique.empty()) throw std::logic_error("cannot transmit an empty clique");
  if (!graph.is_clique(clique.vertices))
    throw std::logic_error("selected vertex set is not a clique of the IDNC graph");
  std::vector<PacketId> packets;
  std::vector<UserId> users;
  packets.reserve(clique.size());
  users.reserve(clique.size());
  for (std::size_t v : clique.vertices) {
    packets.push_back(graph.vertex(v).packet);
    users.push_back(graph.vertex(v).user);
  }
  std::sort(users.begin(), users.end());
  return {PacketCombination(std::move(packets)), std::move(users)};
}

/// Completion time the user would reach with no further decoding delay:
/// (|W(0)| + D - p) / (1 - p). Users that never needed recovery map to 0.
inline double anticipated_ct(const UserState& state) {
  if (state.wants0 == 0) return 0.0;
  const double p = std::min(state.erasure, kMaxErasure);
  return (static_cast<double>(state.wants0) + static_cast<double>(state.delay) - p) / (1.0 - p);
}

/// Anticipated-CT increment caused by one more decoding-delay unit.
inline double delay_step(const UserState& state) {
  return 1.0 / (1.0 - std::min(state.erasure, kMaxErasure));
}

/// Non-completed user with the largest anticipated CT (lowest id on ties).
inline UserId most_critical_user(const std::vector<UserState>& states) {
  std::optional<UserId> best;
  double best_ct = -std::numeric_limits<double>::infinity();
  for (const UserState& s : states) {
    if (s.completed()) continue;
    const double ct = anticipated_ct(s);
    if (!best || ct > best_ct + kCtTolerance) {
      best = s.user_id;
      best_ct = ct;
    }
  }
  if (!best) throw std::logic_error("frame already complete");
  return *best;
}

/// Users whose next decoding-delay unit would push their anticipated CT
/// above the current maximum.
inline std::vector<UserId> compute_critical_set(const std::vector<UserState>& states) {
  const double ct_max = anticipated_ct(states[most_critical_user(states)]);
  std::vector<UserId> critical;
  for (const UserState& s : states) {
    if (s.completed()) continue;
    if (anticipated_ct(s) + delay_step(s) > ct_max + kCtTolerance) critical.push_back(s.user_id);
  }
  return critical;
}

/// Layer index n >= 1 of a user: the number of decoding-delay units it can
/// absorb before exceeding ct_max, plus one. An exact tie with ct_max
/// (within kCtTolerance) does not count as exceeding it.
inline std::size_t criticality_layer(const UserState& s, double ct_max) {
  const double ct = anticipated_ct(s);
  const double step = delay_step(s);
  const double gap = std::max(0.0, (ct_max - ct) / step);
  auto n = static_cast<std::size_t>(std::floor(gap)) + 1;
  while (n > 1 && ct + static_cast<double>(n - 1) * step > ct_max + kCtTolerance) --n;
  while (ct + static_cast<double>(n) * step <= ct_max + kCtTolerance) ++n;
  return n;
}

/// G_1 .. G_h in descending criticality; layers[0] is G_1. Intermediate
/// layers may be empty.
struct Layering {
  std::vector<std::vector<std::size_t>> layers;

  std::size_t depth() const { return layers.size(); }
};

inline Layering partition_layers(const IdncGraph& graph, const std::vector<UserState>& states) {
  if (graph.empty()) throw std::logic_error("cannot layer an empty graph");
  const double ct_max = anticipated_ct(states[most_critical_user(states)]);
  std::vector<std::size_t> user_layer(states.size(), 0);
  std::size_t depth = 0;
  for (const UserState& s : states) {
    if (s.completed()) continue;
    user_layer[s.user_id] = criticality_layer(s, ct_max);
    depth = std::max(depth, user_layer[s.user_id]);
  }
  Layering out;
  out.layers.resize(depth);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    out.layers[user_layer[graph.vertex(v).user] - 1].push_back(v);
  }
  return out;
}

}  // namespace idnc
