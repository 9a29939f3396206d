#pragma once

// Transmission-selection policies. Each maps the current IDNC graph and user
// states to one clique to transmit.
//
//   pct   - layered critical-criterion selection: max-weight clique over the
//           most critical layer with weights -ln(p_i), then extended layer by
//           layer through less critical users.
//   minct - completion-time baseline: one max-weight clique over the whole
//           graph with weights (1 - p_i)(|W_i(0)| + D_i).
//   sdd   - decoding-delay baseline: one max-weight clique over the whole
//           graph with weights (1 - p_i), i.e. the expected number of users
//           decoding the transmission.
//
// minct and sdd are stand-ins sharing the same solver; they approximate the
// published heuristics of the same names but do not reproduce them.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "idnc/clique.hpp"
#include "idnc/graph.hpp"
#include "idnc/model.hpp"

namespace idnc {

enum class PolicyKind { PCT, MinCT, SDD };

inline std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::PCT: return "pct";
    case PolicyKind::MinCT: return "minct";
    case PolicyKind::SDD: return "sdd";
  }
  return "?";
}

inline PolicyKind parse_policy(std::string_view name) {
  if (name == "pct") return PolicyKind::PCT;
  if (name == "minct") return PolicyKind::MinCT;
  if (name == "sdd") return PolicyKind::SDD;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "' (expected pct, minct or sdd)");
}

/// -ln(p) with p clamped to [1e-9, 0.999] so the weight stays finite.
inline double vertex_weight_pct(double p) {
  return -std::log(std::clamp(p, 1e-9, kMaxErasure));
}

inline double vertex_weight_minct(const UserState& s) {
  return (1.0 - s.erasure) * static_cast<double>(s.wants0 + s.delay);
}

inline double vertex_weight_sdd(const UserState& s) { return 1.0 - s.erasure; }

namespace detail {

template <typename WeightFn>
std::vector<double> graph_weights(const IdncGraph& graph, const std::vector<UserState>& states,
                                  WeightFn fn) {
  std::vector<double> w(graph.size());
  for (std::size_t v = 0; v < graph.size(); ++v) w[v] = fn(states[graph.vertex(v).user]);
  return w;
}

template <typename WeightFn>
Clique whole_graph_clique(const IdncGraph& graph, const std::vector<UserState>& states,
                          WeightFn fn, SolverKind solver) {
  if (graph.empty()) throw std::logic_error("nothing to schedule");
  std::vector<std::size_t> all(graph.size());
  for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
  return solve_subgraph(graph, all, graph_weights(graph, states, fn), solver);
}

}  // namespace detail

struct PctSelection {
  Layering layering;
  /// Optimum over G_1 alone, before extension.
  Clique critical;
  Clique clique;
};

/// The full P-CT decision, exposing the layering and the critical-layer clique.
inline PctSelection select_pct_detailed(const IdncGraph& graph, const std::vector<UserState>& states,
                                        SolverKind solver = SolverKind::Auto) {
  if (graph.empty()) throw std::logic_error("nothing to schedule");
  PctSelection out;
  out.layering = partition_layers(graph, states);
  const auto weights = detail::graph_weights(
      graph, states, [](const UserState& s) { return vertex_weight_pct(s.erasure); });

  out.critical = extend_clique_through_layer(graph, out.layering.layers.front(), weights, {}, solver);
  out.clique = out.critical;
  for (std::size_t n = 1; n < out.layering.depth(); ++n) {
    out.clique = extend_clique_through_layer(graph, out.layering.layers[n], weights, out.clique, solver);
  }
  return out;
}

inline Clique select_pct(const IdncGraph& graph, const std::vector<UserState>& states,
                         SolverKind solver = SolverKind::Auto) {
  return select_pct_detailed(graph, states, solver).clique;
}

inline Clique select_minct_baseline(const IdncGraph& graph, const std::vector<UserState>& states,
                                    SolverKind solver = SolverKind::Auto) {
  return detail::whole_graph_clique(graph, states, vertex_weight_minct, solver);
}

inline Clique select_sdd_baseline(const IdncGraph& graph, const std::vector<UserState>& states,
                                  SolverKind solver = SolverKind::Auto) {
  return detail::whole_graph_clique(graph, states, vertex_weight_sdd, solver);
}

inline Clique select_clique(PolicyKind kind, const IdncGraph& graph,
                            const std::vector<UserState>& states,
                            SolverKind solver = SolverKind::Auto) {
  switch (kind) {
    case PolicyKind::PCT: return select_pct(graph, states, solver);
    case PolicyKind::MinCT: return select_minct_baseline(graph, states, solver);
    case PolicyKind::SDD: return select_sdd_baseline(graph, states, solver);
  }
  throw std::logic_error("unhandled policy");
}

}  // namespace idnc
