#pragma once

// Frame-level simulation: uncoded initial phase followed by the coded
// recovery loop under one policy, with the per-user counters needed to
// check the completion-time accounting identity
//
//   C_i = |W_i(0)| + D_i + E_i(C_i - 1)
//
// and the law-of-large-numbers approximation C_i ~ (|W_i(0)| + D_i - p_i) / (1 - p_i).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "idnc/clique.hpp"
#include "idnc/graph.hpp"
#include "idnc/model.hpp"
#include "idnc/policies.hpp"
#include "idnc/random.hpp"

namespace idnc {

struct UserRecord {
  double erasure = 0.0;
  PacketSet initial_wants;
  std::size_t wants0 = 0;
  std::size_t delay = 0;
  /// Erasures up to and including C_i - 1 (the completing packet is never erased).
  std::size_t erasures = 0;
  std::optional<std::size_t> completion_time;
};

struct LoggedTransmission {
  std::size_t t = 0;
  PacketCombination combination;
  std::vector<UserId> targeted;
  /// One entry per user; drawn only for users still active at t, 0 otherwise.
  std::vector<std::uint8_t> erased;
};

struct FrameMetrics {
  std::uint64_t seed = 0;
  std::size_t num_packets = 0;
  std::vector<UserRecord> users;
  std::size_t overall_completion_time = 0;
  std::size_t sum_decoding_delay = 0;
  std::vector<LoggedTransmission> transmission_log;
  bool aborted = false;

  double mean_decoding_delay() const {
    return users.empty() ? 0.0
                         : static_cast<double>(sum_decoding_delay) / static_cast<double>(users.size());
  }
};

/// What the recovery loop decided at one transmission, before receptions are applied.
struct StepView {
  std::size_t t;
  const IdncGraph& graph;
  const std::vector<UserState>& states;
  const Clique& clique;
  const Transmission& transmission;
};

struct SimulationOptions {
  SolverKind solver = SolverKind::Auto;
  bool record_log = true;
  std::function<void(const StepView&)> observer;
};

/// Recovery phase from explicit initial states. Consumes one draw per active
/// user per transmission, in ascending user id.
inline FrameMetrics run_recovery(std::vector<UserState> states, PolicyKind policy, Engine& rng,
                                 std::size_t cap, const SimulationOptions& options = {}) {
  FrameMetrics m;
  m.num_packets = states.empty() ? 0 : states.front().wants.size();
  m.users.reserve(states.size());
  for (const UserState& s : states) {
    UserRecord r;
    r.erasure = s.erasure;
    r.initial_wants = s.wants;
    r.wants0 = s.wants0;
    m.users.push_back(std::move(r));
  }

  auto active = [&] {
    for (const UserState& s : states)
      if (!s.completed()) return true;
    return false;
  };

  std::size_t t = 0;
  while (active()) {
    if (t >= cap) {
      m.aborted = true;
      break;
    }
    ++t;
    const IdncGraph graph = build_graph(states);
    const Clique clique = select_clique(policy, graph, states, options.solver);
    const Transmission tx = clique_to_combination(clique, graph);
    if (options.observer) options.observer(StepView{t, graph, states, clique, tx});

    LoggedTransmission entry;
    entry.t = t;
    entry.erased.assign(states.size(), 0);
    for (UserState& s : states) {
      if (s.completed()) continue;
      const bool erased = bernoulli(rng, s.erasure);
      entry.erased[s.user_id] = erased ? 1 : 0;
      apply_reception(s, tx.combination, t, !erased);
    }
    if (options.record_log) {
      entry.combination = tx.combination;
      entry.targeted = tx.targeted;
      m.transmission_log.push_back(std::move(entry));
    }
  }

  for (std::size_t i = 0; i < states.size(); ++i) {
    UserRecord& r = m.users[i];
    r.delay = states[i].delay;
    r.erasures = states[i].erasures;
    r.completion_time = states[i].completion_time;
    m.sum_decoding_delay += r.delay;
    if (r.completion_time)
      m.overall_completion_time = std::max(m.overall_completion_time, *r.completion_time);
  }
  if (m.aborted) m.overall_completion_time = t;
  return m;
}

inline FrameMetrics simulate_frame(const SystemConfig& config, PolicyKind policy, std::uint64_t seed,
                                   const SimulationOptions& options = {}) {
  config.validate();
  Engine rng(seed);
  const auto p = sample_user_erasures(config, rng);
  auto states = run_initial_phase(config, p, rng);
  FrameMetrics m = run_recovery(std::move(states), policy, rng, config.recovery_cap(), options);
  m.seed = seed;
  return m;
}

/// Replays the logged schedule from the initial Wants sets and checks, for
/// every user, that transmissions up to its completion split exactly into
/// |W_i(0)| decodable receptions, D_i delay receptions and E_i erasures, and
/// that the recorded counters and completion times match the replay.
inline bool verify_accounting_identity(const FrameMetrics& m) {
  if (m.aborted) throw std::logic_error("identity undefined under cap");
  for (const UserRecord& r : m.users) {
    if (!r.completion_time) return false;
    PacketSet wants = r.initial_wants;
    if (wants.count() != r.wants0) return false;
    std::size_t erased = 0, decoded = 0, delayed = 0;
    std::optional<std::size_t> completed;
    if (wants.none()) completed = 0;
    const std::size_t user = static_cast<std::size_t>(&r - m.users.data());
    for (const LoggedTransmission& tx : m.transmission_log) {
      if (completed) break;
      if (tx.erased.size() != m.users.size()) return false;
      if (tx.erased[user]) {
        ++erased;
        continue;
      }
      std::size_t hits = 0;
      PacketId hit = 0;
      for (PacketId j : tx.combination.packets()) {
        if (j < wants.size() && wants.test(j)) {
          ++hits;
          hit = j;
        }
      }
      if (hits == 1) {
        wants.reset(hit);
        ++decoded;
        if (wants.none()) completed = tx.t;
      } else {
        ++delayed;
      }
    }
    if (!completed || *completed != *r.completion_time) return false;
    if (decoded != r.wants0 || delayed != r.delay || erased != r.erasures) return false;
    if (*completed != r.wants0 + r.delay + r.erasures) return false;
  }
  std::size_t overall = 0;
  for (const UserRecord& r : m.users) overall = std::max(overall, *r.completion_time);
  return overall == m.overall_completion_time;
}

/// C_i - (|W_i(0)| + D_i - p_i) / (1 - p_i) per user; 0 for users complete
/// after the initial phase.
inline std::vector<double> ct_residual(const FrameMetrics& m) {
  if (m.aborted) throw std::invalid_argument("residual undefined for an aborted frame");
  std::vector<double> out;
  out.reserve(m.users.size());
  for (const UserRecord& r : m.users) {
    if (r.wants0 == 0) {
      out.push_back(0.0);
      continue;
    }
    const double p = r.erasure;
    const double predicted = (static_cast<double>(r.wants0 + r.delay) - p) / (1.0 - p);
    out.push_back(static_cast<double>(*r.completion_time) - predicted);
  }
  return out;
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline MeanStderr mean_and_stderr(std::span<const double> xs) {
  if (xs.empty()) return {};
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

struct RunSummary {
  PolicyKind policy = PolicyKind::PCT;
  std::size_t num_users = 0;
  std::size_t num_packets = 0;
  double mean_erasure = 0.0;
  std::size_t iterations = 0;
  MeanStderr completion_time;
  MeanStderr sum_decoding_delay;
  MeanStderr decoding_delay_per_user;
  std::size_t aborted_frames = 0;
};

/// Means and standard errors over the non-aborted frames. Only the
/// statistics are filled in; the caller labels policy and configuration.
inline RunSummary aggregate(std::span<const FrameMetrics> frames) {
  RunSummary s;
  s.iterations = frames.size();
  std::vector<double> ct, sdd, dd;
  for (const FrameMetrics& f : frames) {
    if (f.aborted) {
      ++s.aborted_frames;
      continue;
    }
    ct.push_back(static_cast<double>(f.overall_completion_time));
    sdd.push_back(static_cast<double>(f.sum_decoding_delay));
    dd.push_back(f.mean_decoding_delay());
  }
  if (ct.empty()) throw std::runtime_error("all frames aborted");
  s.completion_time = mean_and_stderr(ct);
  s.sum_decoding_delay = mean_and_stderr(sdd);
  s.decoding_delay_per_user = mean_and_stderr(dd);
  return s;
}

}  // namespace idnc
