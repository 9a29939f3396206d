#pragma once

// Sender-side model of an erasure broadcast frame: per-user side information
// (Has / Wants sets), erasure statistics and the reception semantics of the
// uncoded initial phase and the XOR-coded recovery phase.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "idnc/random.hpp"

namespace idnc {

using UserId = std::size_t;
using PacketId = std::size_t;
using PacketSet = boost::dynamic_bitset<std::uint64_t>;

/// Largest per-user erasure probability; a user that never receives cannot complete.
inline constexpr double kMaxErasure = 0.999;

struct SystemConfig {
  std::size_t num_users = 1;
  std::size_t num_packets = 1;
  double mean_erasure = 0.25;
  double erasure_spread = 0.1;
  std::uint64_t base_seed = 1;
  /// 0 selects the default, see recovery_cap().
  std::size_t max_recovery_transmissions = 0;

  void validate() const {
    if (num_users < 1) throw std::invalid_argument("num_users must be >= 1");
    if (num_packets < 1) throw std::invalid_argument("num_packets must be >= 1");
    if (!(mean_erasure >= 0.0 && mean_erasure < 1.0))
      throw std::invalid_argument("mean_erasure must lie in [0, 1)");
    if (!(erasure_spread >= 0.0) || !std::isfinite(erasure_spread))
      throw std::invalid_argument("erasure_spread must be finite and >= 0");
  }

  /// Safety cap on recovery transmissions: 50 * N / (1 - P) unless set explicitly.
  std::size_t recovery_cap() const {
    if (max_recovery_transmissions > 0) return max_recovery_transmissions;
    return static_cast<std::size_t>(
        std::ceil(50.0 * static_cast<double>(num_packets) / (1.0 - mean_erasure)));
  }
};

struct UserState {
  UserId user_id = 0;
  double erasure = 0.0;
  PacketSet has;
  PacketSet wants;
  std::size_t wants0 = 0;
  std::size_t delay = 0;
  std::size_t erasures = 0;
  std::optional<std::size_t> completion_time;

  bool completed() const { return completion_time.has_value(); }

  /// Builds a state from an explicit Wants list; Has is the complement in {0..N-1}.
  static UserState from_wants(UserId id, std::size_t num_packets, double erasure,
                              const std::vector<PacketId>& wanted) {
    UserState s;
    s.user_id = id;
    s.erasure = erasure;
    s.wants = PacketSet(num_packets);
    for (PacketId j : wanted) {
      if (j >= num_packets) throw std::out_of_range("wanted packet id out of range");
      s.wants.set(j);
    }
    s.has = ~s.wants;
    s.wants0 = s.wants.count();
    if (s.wants0 == 0) s.completion_time = 0;
    return s;
  }
};

/// The source packets XOR'd into one recovery transmission.
class PacketCombination {
 public:
  PacketCombination() = default;
  explicit PacketCombination(std::vector<PacketId> packets) : packets_(std::move(packets)) {
    std::sort(packets_.begin(), packets_.end());
    packets_.erase(std::unique(packets_.begin(), packets_.end()), packets_.end());
    if (packets_.empty()) throw std::invalid_argument("packet combination must be nonempty");
  }

  const std::vector<PacketId>& packets() const { return packets_; }
  std::size_t size() const { return packets_.size(); }

  friend bool operator==(const PacketCombination&, const PacketCombination&) = default;

 private:
  std::vector<PacketId> packets_;
};

struct ReceptionOutcome {
  enum class Kind { NonInnovative, InstantlyDecodable, NonInstantlyDecodable };

  Kind kind = Kind::NonInnovative;
  /// Set only for InstantlyDecodable.
  std::optional<PacketId> packet;

  static ReceptionOutcome non_innovative() { return {Kind::NonInnovative, std::nullopt}; }
  static ReceptionOutcome instantly_decodable(PacketId j) { return {Kind::InstantlyDecodable, j}; }
  static ReceptionOutcome non_instantly_decodable() {
    return {Kind::NonInstantlyDecodable, std::nullopt};
  }

  bool decodable() const { return kind == Kind::InstantlyDecodable; }

  friend bool operator==(const ReceptionOutcome&, const ReceptionOutcome&) = default;
};

/// Per-frame erasure probabilities: U[P - spread, P + spread] clamped to [0, 0.999].
inline std::vector<double> sample_user_erasures(const SystemConfig& config, Engine& rng) {
  config.validate();
  std::vector<double> p(config.num_users);
  const double lo = config.mean_erasure - config.erasure_spread;
  const double width = 2.0 * config.erasure_spread;
  for (auto& pi : p) {
    const double u = uniform01(rng);
    pi = std::clamp(lo + width * u, 0.0, kMaxErasure);
  }
  return p;
}

/// Uncoded broadcast of the N frame packets. Users that receive everything
/// are complete at recovery time 0.
inline std::vector<UserState> run_initial_phase(const SystemConfig& config,
                                                const std::vector<double>& erasure, Engine& rng) {
  if (erasure.size() != config.num_users)
    throw std::invalid_argument("erasure list length must equal num_users");
  std::vector<UserState> users(config.num_users);
  for (UserId i = 0; i < config.num_users; ++i) {
    UserState& u = users[i];
    u.user_id = i;
    u.erasure = erasure[i];
    u.has = PacketSet(config.num_packets);
    for (PacketId j = 0; j < config.num_packets; ++j) {
      if (!bernoulli(rng, erasure[i])) u.has.set(j);
    }
    u.wants = ~u.has;
    u.wants0 = u.wants.count();
    if (u.wants0 == 0) u.completion_time = 0;
  }
  return users;
}

inline ReceptionOutcome classify_packet(const UserState& user, const PacketCombination& combo) {
  if (combo.size() == 0) throw std::invalid_argument("cannot classify an empty combination");
  std::size_t wanted = 0;
  PacketId last = 0;
  for (PacketId j : combo.packets()) {
    if (j < user.wants.size() && user.wants.test(j)) {
      ++wanted;
      last = j;
      if (wanted > 1) return ReceptionOutcome::non_instantly_decodable();
    }
  }
  if (wanted == 0) return ReceptionOutcome::non_innovative();
  return ReceptionOutcome::instantly_decodable(last);
}

/// Updates one user after recovery transmission t (t >= 1). Completed users are inert.
inline void apply_reception(UserState& user, const PacketCombination& combo, std::size_t t,
                            bool received) {
  if (t < 1) throw std::invalid_argument("recovery transmission index starts at 1");
  if (user.completed() || user.wants.none()) return;
  if (!received) {
    ++user.erasures;
    return;
  }
  const ReceptionOutcome outcome = classify_packet(user, combo);
  if (outcome.decodable()) {
    user.wants.reset(*outcome.packet);
    user.has.set(*outcome.packet);
    if (user.wants.none()) user.completion_time = t;
  } else {
    ++user.delay;
  }
}

}  // namespace idnc
