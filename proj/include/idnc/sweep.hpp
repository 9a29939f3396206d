#pragma once

// Parameter sweeps: a grid over (M, N, P) run for each policy, aggregated
// into one CSV row per point, with an optional per-frame CSV and a JSON
// manifest written beside the summary.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "idnc/clique.hpp"
#include "idnc/model.hpp"
#include "idnc/policies.hpp"
#include "idnc/random.hpp"
#include "idnc/simulator.hpp"
#include "idnc/version.hpp"

namespace idnc {

enum class SweepAxis { Users, Packets, Erasure };

inline std::string_view axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::Users: return "users";
    case SweepAxis::Packets: return "packets";
    case SweepAxis::Erasure: return "erasure";
  }
  return "?";
}

inline SweepAxis parse_axis(std::string_view s) {
  if (s == "users" || s == "M") return SweepAxis::Users;
  if (s == "packets" || s == "N") return SweepAxis::Packets;
  if (s == "erasure" || s == "P") return SweepAxis::Erasure;
  throw std::invalid_argument("unknown sweep axis '" + std::string(s) +
                              "' (expected users, packets or erasure)");
}

inline std::string_view solver_name(SolverKind s) {
  switch (s) {
    case SolverKind::Auto: return "auto";
    case SolverKind::Exact: return "exact";
    case SolverKind::Combination: return "combination";
    case SolverKind::Greedy: return "greedy";
  }
  return "?";
}

inline SolverKind parse_solver(std::string_view s) {
  if (s == "auto") return SolverKind::Auto;
  if (s == "exact") return SolverKind::Exact;
  if (s == "combination") return SolverKind::Combination;
  if (s == "greedy") return SolverKind::Greedy;
  throw std::invalid_argument("unknown solver '" + std::string(s) +
                              "' (expected auto, exact, combination or greedy)");
}

namespace detail {

inline double parse_number(std::string_view tok) {
  const std::string s(tok);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("malformed number '" + s + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

/// Comma-separated items, each a number or an inclusive `start:stop:step`
/// range (stop included when within 1e-12 of a grid point).
inline std::vector<double> parse_value_list(std::string_view text) {
  std::vector<double> out;
  if (text.empty()) throw std::invalid_argument("empty value list");
  for (std::string_view item : detail::split(text, ',')) {
    const auto parts = detail::split(item, ':');
    if (parts.size() == 1) {
      out.push_back(detail::parse_number(parts[0]));
      continue;
    }
    if (parts.size() != 3) throw std::invalid_argument("malformed range '" + std::string(item) + "'");
    const double start = detail::parse_number(parts[0]);
    const double stop = detail::parse_number(parts[1]);
    const double step = detail::parse_number(parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument("range step must be > 0 in '" + std::string(item) + "'");
    if (stop < start) throw std::invalid_argument("range stop below start in '" + std::string(item) + "'");
    // Index-based so rounding never adds or drops a point.
    const double span = (stop - start) / step;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-12 / step)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
      double v = start + static_cast<double>(k) * step;
      if (std::abs(v - stop) <= 1e-12) v = stop;
      out.push_back(v);
    }
  }
  return out;
}

inline std::vector<std::size_t> parse_count_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (double v : parse_value_list(text)) {
    if (v < 1.0 || std::abs(v - std::round(v)) > 1e-9)
      throw std::invalid_argument("expected positive integers, got " + std::to_string(v));
    out.push_back(static_cast<std::size_t>(std::llround(v)));
  }
  return out;
}

inline std::vector<PolicyKind> parse_policy_list(std::string_view text) {
  std::vector<PolicyKind> out;
  for (std::string_view item : detail::split(text, ',')) out.push_back(parse_policy(item));
  return out;
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::Erasure;
  std::vector<std::size_t> users{60};
  std::vector<std::size_t> packets{30};
  std::vector<double> erasures{0.25};
  double erasure_spread = 0.1;
  std::size_t iterations = 500;
  std::vector<PolicyKind> policies{PolicyKind::PCT, PolicyKind::MinCT, PolicyKind::SDD};
  std::uint64_t seed = 1;
  SolverKind solver = SolverKind::Auto;
  std::size_t threads = 1;
  std::size_t max_recovery_transmissions = 0;
  std::string out;
  bool per_frame = false;

  void validate() const {
    if (users.empty() || packets.empty() || erasures.empty())
      throw std::invalid_argument("value lists must be nonempty");
    if (policies.empty()) throw std::invalid_argument("policy list must be nonempty");
    for (std::size_t m : users)
      if (m < 1) throw std::invalid_argument("users must be >= 1");
    for (std::size_t n : packets)
      if (n < 1) throw std::invalid_argument("packets must be >= 1");
    for (double p : erasures)
      if (!(p >= 0.0 && p <= 0.95)) throw std::invalid_argument("erasure values must lie in [0, 0.95]");
    if (!(erasure_spread >= 0.0) || !std::isfinite(erasure_spread))
      throw std::invalid_argument("erasure spread must be finite and >= 0");
    if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  }

  std::size_t num_points() const { return users.size() * packets.size() * erasures.size(); }
};

/// fig1/fig2: M swept at N = 60; fig3/fig4: N swept at M = 60; both for
/// P in {0.25, 0.5}. fig5: P swept over 0.05..0.5 at M = 60, N = 30.
inline SweepSpec preset(std::string_view name) {
  SweepSpec s;
  if (name == "fig1" || name == "fig2") {
    s.axis = SweepAxis::Users;
    s.users = parse_count_list("10:60:10");
    s.packets = {60};
    s.erasures = {0.25, 0.5};
  } else if (name == "fig3" || name == "fig4") {
    s.axis = SweepAxis::Packets;
    s.users = {60};
    s.packets = parse_count_list("10:60:10");
    s.erasures = {0.25, 0.5};
  } else if (name == "fig5") {
    s.axis = SweepAxis::Erasure;
    s.users = {60};
    s.packets = {30};
    s.erasures = parse_value_list("0.05:0.5:0.05");
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected fig1..fig5)");
  }
  return s;
}

inline nlohmann::json to_json(const SweepSpec& s) {
  nlohmann::json j;
  j["sweep"] = axis_name(s.axis);
  j["users"] = s.users;
  j["packets"] = s.packets;
  j["erasure"] = s.erasures;
  j["spread"] = s.erasure_spread;
  j["iterations"] = s.iterations;
  std::vector<std::string> pols;
  for (PolicyKind p : s.policies) pols.emplace_back(policy_name(p));
  j["policies"] = pols;
  j["seed"] = s.seed;
  j["solver"] = solver_name(s.solver);
  j["threads"] = s.threads;
  j["max_recovery_transmissions"] = s.max_recovery_transmissions;
  j["out"] = s.out;
  j["per_frame"] = s.per_frame;
  return j;
}

namespace detail {

template <typename T>
std::vector<T> json_list(const nlohmann::json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace detail

/// Overlays the keys present in `j` onto `s`. Lists may be JSON arrays,
/// single values, or strings in the command-line range syntax.
inline void apply_json(SweepSpec& s, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const std::vector<std::string> known{
      "preset", "sweep", "users", "packets", "erasure", "spread", "iterations", "policies",
      "seed", "solver", "threads", "max_recovery_transmissions", "out", "per_frame"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown config key '" + key + "'");
  }
  try {
    if (j.contains("preset")) s = preset(j["preset"].get<std::string>());
    if (j.contains("sweep")) s.axis = parse_axis(j["sweep"].get<std::string>());
    auto counts = [](const nlohmann::json& v) {
      return v.is_string() ? parse_count_list(v.get<std::string>()) : detail::json_list<std::size_t>(v);
    };
    if (j.contains("users")) s.users = counts(j["users"]);
    if (j.contains("packets")) s.packets = counts(j["packets"]);
    if (j.contains("erasure")) {
      const auto& v = j["erasure"];
      s.erasures = v.is_string() ? parse_value_list(v.get<std::string>()) : detail::json_list<double>(v);
    }
    if (j.contains("spread")) s.erasure_spread = j["spread"].get<double>();
    if (j.contains("iterations")) s.iterations = j["iterations"].get<std::size_t>();
    if (j.contains("policies")) {
      const auto& v = j["policies"];
      if (v.is_string()) {
        s.policies = parse_policy_list(v.get<std::string>());
      } else {
        s.policies.clear();
        for (const auto& p : v) s.policies.push_back(parse_policy(p.get<std::string>()));
      }
    }
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("solver")) s.solver = parse_solver(j["solver"].get<std::string>());
    if (j.contains("threads")) s.threads = j["threads"].get<std::size_t>();
    if (j.contains("max_recovery_transmissions"))
      s.max_recovery_transmissions = j["max_recovery_transmissions"].get<std::size_t>();
    if (j.contains("out")) s.out = j["out"].get<std::string>();
    if (j.contains("per_frame")) s.per_frame = j["per_frame"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
}

inline constexpr std::string_view kSummaryHeader =
    "policy,M,N,P,iterations,mean_ct,stderr_ct,mean_sdd,stderr_sdd,mean_dd_per_user,"
    "stderr_dd_per_user,aborted_frames";

inline constexpr std::string_view kFrameHeader =
    "policy,M,N,P,iteration,seed,ct,sdd,dd_per_user,aborted";

namespace detail {

inline std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

inline std::string summary_row(const RunSummary& s) {
  std::ostringstream o;
  o << policy_name(s.policy) << ',' << s.num_users << ',' << s.num_packets << ','
    << detail::fmt_real(s.mean_erasure) << ',' << s.iterations << ','
    << detail::fmt_real(s.completion_time.mean) << ',' << detail::fmt_real(s.completion_time.stderr_) << ','
    << detail::fmt_real(s.sum_decoding_delay.mean) << ','
    << detail::fmt_real(s.sum_decoding_delay.stderr_) << ','
    << detail::fmt_real(s.decoding_delay_per_user.mean) << ','
    << detail::fmt_real(s.decoding_delay_per_user.stderr_) << ',' << s.aborted_frames;
  return o.str();
}

inline std::string frame_row(PolicyKind policy, const SystemConfig& c, std::size_t iteration,
                             const FrameMetrics& f) {
  std::ostringstream o;
  o << policy_name(policy) << ',' << c.num_users << ',' << c.num_packets << ','
    << detail::fmt_real(c.mean_erasure) << ',' << iteration << ',' << f.seed << ','
    << f.overall_completion_time << ',' << f.sum_decoding_delay << ','
    << detail::fmt_real(f.mean_decoding_delay()) << ',' << (f.aborted ? 1 : 0);
  return o.str();
}

/// Frames 0..iterations-1 of one grid point. Frame i uses frame_seed(seed, i)
/// for every policy and point, so policies are compared on common draws.
inline std::vector<FrameMetrics> run_point(const SystemConfig& config, PolicyKind policy,
                                           std::size_t iterations, SolverKind solver,
                                           std::size_t threads = 1) {
  std::vector<FrameMetrics> frames(iterations);
  SimulationOptions options;
  options.solver = solver;
  options.record_log = false;
  auto one = [&](std::size_t i) {
    frames[i] = simulate_frame(config, policy, frame_seed(config.base_seed, i), options);
  };
  if (threads <= 1 || iterations <= 1) {
    for (std::size_t i = 0; i < iterations; ++i) one(i);
    return frames;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  const std::size_t n = std::min(threads, iterations);
  for (std::size_t w = 0; w < n; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < iterations && !failed; i = next++) {
        try {
          one(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return frames;
}

struct SweepPoint {
  PolicyKind policy;
  SystemConfig config;
};

/// Grid in output order: policy, then M, N, P.
inline std::vector<SweepPoint> sweep_points(const SweepSpec& spec) {
  std::vector<SweepPoint> out;
  for (PolicyKind pol : spec.policies)
    for (std::size_t m : spec.users)
      for (std::size_t n : spec.packets)
        for (double p : spec.erasures) {
          SystemConfig c;
          c.num_users = m;
          c.num_packets = n;
          c.mean_erasure = p;
          c.erasure_spread = spec.erasure_spread;
          c.base_seed = spec.seed;
          c.max_recovery_transmissions = spec.max_recovery_transmissions;
          out.push_back({pol, c});
        }
  return out;
}

using SweepProgress = std::function<void(std::size_t done, std::size_t total, const RunSummary&)>;

/// Writes the summary header and one row per point to `csv` (and per-frame
/// rows to `frames` when given), flushing after every point so a failure
/// leaves every completed row on disk.
inline std::vector<RunSummary> run_sweep(const SweepSpec& spec, std::ostream& csv,
                                         std::ostream* frames = nullptr,
                                         const SweepProgress& progress = {}) {
  spec.validate();
  const auto points = sweep_points(spec);
  csv << kSummaryHeader << '\n';
  if (frames) *frames << kFrameHeader << '\n';
  std::vector<RunSummary> out;
  out.reserve(points.size());
  for (const SweepPoint& pt : points) {
    const auto metrics = run_point(pt.config, pt.policy, spec.iterations, spec.solver, spec.threads);
    RunSummary s = aggregate(metrics);
    s.policy = pt.policy;
    s.num_users = pt.config.num_users;
    s.num_packets = pt.config.num_packets;
    s.mean_erasure = pt.config.mean_erasure;
    if (frames) {
      for (std::size_t i = 0; i < metrics.size(); ++i)
        *frames << frame_row(pt.policy, pt.config, i, metrics[i]) << '\n';
      frames->flush();
    }
    csv << summary_row(s) << '\n';
    csv.flush();
    if (!csv) throw std::runtime_error("failed writing summary CSV");
    out.push_back(s);
    if (progress) progress(out.size(), points.size(), s);
  }
  return out;
}

inline std::string manifest_path(const std::string& csv_path) { return csv_path + ".manifest.json"; }
inline std::string frames_path(const std::string& csv_path) { return csv_path + ".frames.csv"; }

namespace detail {

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_manifest(const std::string& path, const nlohmann::json& m) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open manifest '" + path + "' for writing");
  f << m.dump(2) << '\n';
  if (!f) throw std::runtime_error("failed writing manifest '" + path + "'");
}

}  // namespace detail

/// File-level sweep: summary CSV at spec.out, optional `<out>.frames.csv`,
/// and `<out>.manifest.json` recording the resolved spec and the outcome.
/// On failure the rows already written stay in place, the manifest is marked
/// "failed" with the error, and the exception propagates.
inline std::vector<RunSummary> run_sweep_to_files(const SweepSpec& spec,
                                                  const SweepProgress& progress = {}) {
  spec.validate();
  if (spec.out.empty()) throw std::invalid_argument("output path required");
  const std::filesystem::path out(spec.out);
  if (out.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(out.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory '" + out.parent_path().string() + "': " + ec.message());
  }
  std::ofstream csv(spec.out, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open '" + spec.out + "' for writing");
  std::ofstream frames;
  if (spec.per_frame) {
    frames.open(frames_path(spec.out), std::ios::binary);
    if (!frames) throw std::runtime_error("cannot open '" + frames_path(spec.out) + "' for writing");
  }

  nlohmann::json manifest;
  manifest["spec"] = to_json(spec);
  manifest["seed"] = spec.seed;
  manifest["version"] = kVersion;
  manifest["timestamp"] = detail::utc_timestamp();
  manifest["prng"] = "mt19937_64 per frame, frame seed splitmix64(base ^ splitmix64(i + 1))";
  manifest["summary_csv"] = spec.out;
  if (spec.per_frame) manifest["frames_csv"] = frames_path(spec.out);
  manifest["status"] = "running";
  detail::write_manifest(manifest_path(spec.out), manifest);

  std::size_t rows = 0;
  auto counting = [&](std::size_t done, std::size_t total, const RunSummary& s) {
    rows = done;
    if (progress) progress(done, total, s);
  };
  try {
    auto result = run_sweep(spec, csv, spec.per_frame ? &frames : nullptr, counting);
    manifest["status"] = "complete";
    manifest["rows"] = rows;
    detail::write_manifest(manifest_path(spec.out), manifest);
    return result;
  } catch (const std::exception& e) {
    csv.flush();
    manifest["status"] = "failed";
    manifest["rows"] = rows;
    manifest["error"] = e.what();
    detail::write_manifest(manifest_path(spec.out), manifest);
    throw;
  }
}

}  // namespace idnc
