#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "idnc/idnc.hpp"

namespace idnc::test {

/// Explicit states: wants[i] lists user i's wanted packets, delay[i] its D_i.
inline std::vector<UserState> make_states(std::size_t num_packets,
                                          const std::vector<std::vector<PacketId>>& wants,
                                          const std::vector<double>& erasure,
                                          const std::vector<std::size_t>& delay = {}) {
  std::vector<UserState> out;
  for (std::size_t i = 0; i < wants.size(); ++i) {
    out.push_back(UserState::from_wants(i, num_packets, erasure.at(i), wants[i]));
    if (!delay.empty()) out.back().delay = delay.at(i);
  }
  return out;
}

/// Random states straight after a random initial phase.
inline std::vector<UserState> random_states(std::uint64_t seed, std::size_t m, std::size_t n, double p,
                                            double spread = 0.1) {
  SystemConfig c;
  c.num_users = m;
  c.num_packets = n;
  c.mean_erasure = p;
  c.erasure_spread = spread;
  Engine rng(seed);
  const auto ps = sample_user_erasures(c, rng);
  return run_initial_phase(c, ps, rng);
}

/// Exhaustive oracle written independently of the library: enumerates every
/// subset of `candidates`, keeps cliques of `g`, and returns the best one by
/// (weight, then size, then lexicographic order) with a relative 1e-12 tie.
inline std::vector<std::size_t> oracle_clique(const IdncGraph& g, const std::vector<std::size_t>& candidates,
                                              const std::vector<double>& weight_of_vertex) {
  const std::size_t n = candidates.size();
  std::vector<std::size_t> best;
  double best_w = 0.0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> vs;
    for (std::size_t k = 0; k < n; ++k)
      if (mask >> k & 1U) vs.push_back(candidates[k]);
    bool ok = true;
    for (std::size_t a = 0; a < vs.size() && ok; ++a)
      for (std::size_t b = a + 1; b < vs.size() && ok; ++b) ok = g.adjacent(vs[a], vs[b]);
    if (!ok) continue;
    std::sort(vs.begin(), vs.end());
    double w = 0.0;
    for (std::size_t v : vs) w += weight_of_vertex[v];
    const double tol = 1e-12 * std::max(std::abs(w), std::abs(best_w));
    bool take;
    if (std::abs(w - best_w) > tol) take = w > best_w;
    else if (vs.size() != best.size()) take = vs.size() > best.size();
    else take = vs < best;
    if (take) {
      best = vs;
      best_w = w;
    }
  }
  return best;
}

inline double sum_weights(const std::vector<std::size_t>& vs, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t v : vs) s += w[v];
  return s;
}

/// Random weighted graph with edge density `density` and U(0,1) weights.
inline WeightedGraph random_weighted_graph(Engine& rng, std::size_t n, double density) {
  WeightedGraph g(n);
  for (std::size_t a = 0; a < n; ++a) {
    g.set_weight(a, uniform01(rng));
    for (std::size_t b = a + 1; b < n; ++b)
      if (uniform01(rng) < density) g.add_edge(a, b);
  }
  return g;
}

}  // namespace idnc::test
