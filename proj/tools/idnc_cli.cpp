// idnc-sweep: runs parameter sweeps of the IDNC recovery simulation and
// writes summary CSVs with a JSON manifest.
//
// Log verbosity comes from IDNC_LOG_LEVEL (trace, debug, info, warn, error,
// off; default info). Logs go to stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "idnc/sweep.hpp"
#include "idnc/version.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kRunError = 1;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("idnc");
  logger->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("IDNC_LOG_LEVEL")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept real names.
    if (level != spdlog::level::off || std::string(env) == "off") {
      spdlog::set_level(level);
    } else {
      spdlog::warn("ignoring unknown IDNC_LOG_LEVEL '{}'", env);
    }
  }
}

struct Flags {
  std::optional<std::string> preset;
  std::optional<std::string> config;
  std::optional<std::string> sweep;
  std::optional<std::string> values;
  std::optional<std::string> users;
  std::optional<std::string> packets;
  std::optional<std::string> erasure;
  std::optional<double> spread;
  std::optional<std::size_t> iterations;
  std::optional<std::string> policies;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> solver;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> max_transmissions;
  bool per_frame = false;
  bool print_spec = false;
};

idnc::SweepSpec resolve(const Flags& f) {
  idnc::SweepSpec s;
  if (f.preset) s = idnc::preset(*f.preset);
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw std::invalid_argument("cannot read config file '" + *f.config + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config file '" + *f.config + "': " + e.what());
    }
    // An explicit --preset outranks the file's.
    if (f.preset && j.is_object()) j.erase("preset");
    idnc::apply_json(s, j);
  }
  if (f.sweep) s.axis = idnc::parse_axis(*f.sweep);
  if (f.users) s.users = idnc::parse_count_list(*f.users);
  if (f.packets) s.packets = idnc::parse_count_list(*f.packets);
  if (f.erasure) s.erasures = idnc::parse_value_list(*f.erasure);
  if (f.values) {
    if (!f.sweep) throw std::invalid_argument("--values needs --sweep");
    switch (s.axis) {
      case idnc::SweepAxis::Users: s.users = idnc::parse_count_list(*f.values); break;
      case idnc::SweepAxis::Packets: s.packets = idnc::parse_count_list(*f.values); break;
      case idnc::SweepAxis::Erasure: s.erasures = idnc::parse_value_list(*f.values); break;
    }
  }
  if (f.spread) s.erasure_spread = *f.spread;
  if (f.iterations) s.iterations = *f.iterations;
  if (f.policies) s.policies = idnc::parse_policy_list(*f.policies);
  if (f.seed) s.seed = *f.seed;
  if (f.out) s.out = *f.out;
  if (f.solver) s.solver = idnc::parse_solver(*f.solver);
  if (f.threads) s.threads = *f.threads;
  if (f.max_transmissions) s.max_recovery_transmissions = *f.max_transmissions;
  if (f.per_frame) s.per_frame = true;
  s.validate();
  if (s.out.empty() && !f.print_spec) throw std::invalid_argument("missing required --out (or \"out\" in the config)");
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IDNC completion-time simulation sweeps", "idnc-sweep"};
  app.set_version_flag("--version", std::string(idnc::kVersion));
  Flags f;
  app.add_option("--preset", f.preset, "Figure preset: fig1..fig5");
  app.add_option("--config", f.config, "JSON config file; flags override its values");
  app.add_option("--sweep", f.sweep, "Swept parameter: users, packets or erasure");
  app.add_option("--values", f.values, "Values of the swept parameter (list or start:stop:step)");
  app.add_option("--users", f.users, "Number of users M (list allowed)");
  app.add_option("--packets", f.packets, "Frame size N (list allowed)");
  app.add_option("--erasure", f.erasure, "Mean erasure probability P in [0, 0.95] (list allowed)");
  app.add_option("--spread", f.spread, "Half-width of the per-user erasure distribution (default 0.1)");
  app.add_option("--iterations", f.iterations, "Frames per point (default 500)");
  app.add_option("--policies", f.policies, "Comma list of pct, minct, sdd");
  app.add_option("--seed", f.seed, "Base seed (default 1)");
  app.add_option("--out", f.out, "Summary CSV path");
  app.add_option("--solver", f.solver, "Clique solver: auto, exact, combination, greedy");
  app.add_option("--threads", f.threads, "Worker threads per point (default 1)");
  app.add_option("--max-transmissions", f.max_transmissions,
                 "Recovery cap per frame (default ceil(50 N / (1 - P)))");
  app.add_flag("--per-frame", f.per_frame, "Also write <out>.frames.csv");
  app.add_flag("--print-spec", f.print_spec, "Print the resolved spec as JSON and exit");
  app.allow_extras(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsageError;
  }

  setup_logging();

  idnc::SweepSpec spec;
  try {
    spec = resolve(f);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    std::cerr << "Run with --help for usage.\n";
    return kUsageError;
  }

  if (f.print_spec) {
    std::cout << idnc::to_json(spec).dump(2) << '\n';
    return 0;
  }

  spdlog::info("sweep {} over {} point(s) x {} polic(ies), {} iteration(s), seed {} -> {}",
               idnc::axis_name(spec.axis), spec.num_points(), spec.policies.size(),
               spec.iterations, spec.seed, spec.out);
  try {
    idnc::run_sweep_to_files(spec, [](std::size_t done, std::size_t total, const idnc::RunSummary& s) {
      spdlog::info("[{}/{}] {} M={} N={} P={}: mean CT {:.3f} (se {:.3f}), mean SDD {:.3f}", done, total,
                   idnc::policy_name(s.policy), s.num_users, s.num_packets, s.mean_erasure,
                   s.completion_time.mean, s.completion_time.stderr_, s.sum_decoding_delay.mean);
      if (s.aborted_frames > 0) spdlog::warn("{} frame(s) hit the recovery cap", s.aborted_frames);
    });
  } catch (const std::exception& e) {
    spdlog::error("sweep failed: {} (partial output kept, see {})", e.what(),
                  idnc::manifest_path(spec.out));
    return kRunError;
  }
  spdlog::info("wrote {} and {}", spec.out, idnc::manifest_path(spec.out));
  return 0;
}
