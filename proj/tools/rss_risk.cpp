// Copyright 2026 The rssrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "rssrisk/errors.hpp"
#include "rssrisk/experiments.hpp"
#include "rssrisk/io.hpp"
#include "rssrisk/simulator.hpp"
#include "rssrisk/verify.hpp"
#include "rssrisk/version.hpp"

namespace
{

namespace fs = std::filesystem;
using namespace rssrisk;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCollision = 2;
constexpr int kExitCounterexample = 3;

int thread_cap()
{
  const char * env = std::getenv("RSS_RISK_THREADS");
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) {
    hw = 1;
  }
  if (env == nullptr || *env == '\0') {
    return hw;
  }
  const int requested = std::atoi(env);
  if (requested < 1) {
    return hw;
  }
  return std::min(requested, hw);
}

std::string checksum_tag(const std::string & config_bytes)
{
  std::ostringstream tag;
  tag << "fnv1a64:" << std::hex << io::fnv1a64(config_bytes);
  return tag.str();
}

void emit_manifest(
  const fs::path & out_dir, const std::string & filename, const std::string & config_bytes,
  std::uint64_t seed, const std::string & started, const std::vector<std::string> & outputs)
{
  io::RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.config_checksum = checksum_tag(config_bytes);
  manifest.master_seed = seed;
  manifest.started = started;
  manifest.finished = io::utc_timestamp();
  manifest.outputs = outputs;
  io::write_file((out_dir / filename).string(), io::dump_manifest(manifest));
}

struct CommonOptions
{
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed{0};
  std::optional<double> dt;
  bool strict{false};

  core::BranchPolicy policy() const
  {
    return strict ? core::BranchPolicy::kStrictPaper : core::BranchPolicy::kReinterpreted;
  }
};

int cmd_risk(const std::string & state_file, const std::string & params_file, bool strict)
{
  const auto state = io::load_pair_state(state_file);
  const auto params = io::load_risk_params(params_file);
  const auto policy =
    strict ? core::BranchPolicy::kStrictPaper : core::BranchPolicy::kReinterpreted;
  const auto breakdown = core::risk_breakdown(
    state.lon, state.lat, params.rss.lon, params.rss.lat, params.risk, policy);
  io::write_risk_csv(std::cout, breakdown);
  return kExitOk;
}

int cmd_simulate(const CommonOptions & opt)
{
  const std::string started = io::utc_timestamp();
  const std::string config_bytes = io::read_file(opt.config_path);
  io::FullConfig config = io::parse_full_config(config_bytes);
  if (opt.dt) {
    config.scenario.dt = *opt.dt;
  }
  config.scenario.branch_policy = opt.policy();
  config.scenario.validate();

  fs::create_directories(opt.out_dir);
  const sim::Trace trace = sim::run_scenario(config.scenario);

  std::vector<std::string> ids;
  ids.reserve(config.scenario.vehicles.size());
  for (const auto & v : config.scenario.vehicles) {
    ids.push_back(v.state.id);
  }
  std::ostringstream csv;
  io::write_trace_csv(csv, trace, ids);
  io::write_file((fs::path(opt.out_dir) / config.output.trace_filename).string(), csv.str());

  emit_manifest(
    opt.out_dir, config.output.manifest_filename, config_bytes, opt.seed, started,
    {config.output.trace_filename});

  if (trace.status == sim::TerminalStatus::kCollision) {
    std::cerr << "collision at t=" << io::format_double(trace.end_time) << "\n";
    return kExitCollision;
  }
  return kExitOk;
}

int cmd_experiment(const CommonOptions & opt, const std::string & experiment, int episodes)
{
  const std::string started = io::utc_timestamp();
  const std::string config_bytes = io::read_file(opt.config_path);
  io::FullConfig config = io::parse_full_config(config_bytes);
  if (opt.dt) {
    config.scenario.dt = *opt.dt;
  }
  config.scenario.branch_policy = opt.policy();
  config.scenario.validate();

  experiments::ExperimentSpec spec;
  spec.behavior = config.behavior;
  spec.state = config.state;
  spec.kind = experiment == "behavior" ? experiments::ExperimentKind::kBehavior
                                       : experiments::ExperimentKind::kState;

  fs::create_directories(opt.out_dir);
  const auto result =
    experiments::run_campaign(config.scenario, spec, episodes, opt.seed, 999, thread_cap());

  std::ostringstream episodes_csv;
  io::write_episodes_csv(episodes_csv, result.records);
  io::write_file(
    (fs::path(opt.out_dir) / config.output.episodes_filename).string(), episodes_csv.str());

  std::ostringstream summary_csv;
  io::write_summary_csv(summary_csv, result);
  io::write_file(
    (fs::path(opt.out_dir) / config.output.summary_filename).string(), summary_csv.str());

  emit_manifest(
    opt.out_dir, config.output.manifest_filename, config_bytes, opt.seed, started,
    {config.output.episodes_filename, config.output.summary_filename});

  std::cout << "episodes=" << result.episodes << " collisions=" << result.collisions;
  if (result.stats.degenerate) {
    std::cout << " degenerate=1\n";
  } else {
    std::cout << " point_biserial=" << io::format_double(*result.stats.point_biserial)
              << " auc=" << io::format_double(*result.stats.auc)
              << " permutation_p=" << io::format_double(*result.stats.permutation_p) << "\n";
  }
  return kExitOk;
}

int cmd_verify(const CommonOptions & opt, int samples, int grid_levels, double horizon)
{
  const std::string config_bytes = io::read_file(opt.config_path);
  io::FullConfig config = io::parse_full_config(config_bytes);

  verify::VerifyConfig vcfg;
  vcfg.accel_grid_levels = grid_levels;
  vcfg.dt = opt.dt.value_or(0.1);
  vcfg.horizon = horizon;
  vcfg.validate();

  // Draw the eligible states up front so the report is thread-independent.
  std::mt19937_64 rng(opt.seed);
  std::vector<std::pair<geometry::VehicleState, geometry::VehicleState>> eligible;
  for (int i = 0; i < samples; ++i) {
    auto pair = verify::sample_vehicle_pair(rng);
    const auto states = geometry::pair_states(pair.first, pair.second);
    const auto breakdown = core::risk_breakdown(
      states.lon, states.lat, config.scenario.rss.lon, config.scenario.rss.lat,
      config.scenario.risk, opt.policy());
    if (breakdown.r == 0.0) {
      eligible.push_back(std::move(pair));
    }
  }

  std::vector<std::optional<verify::VerifyResult>> results(eligible.size());
  std::atomic<size_t> next{0};
  const int workers = std::min<int>(thread_cap(), std::max<size_t>(eligible.size(), 1));
  auto work = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= eligible.size()) {
        return;
      }
      results[i] = verify::verify_zero_risk(
        eligible[i].first, eligible[i].second, config.scenario.rss, config.scenario.risk, vcfg,
        opt.policy());
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back(work);
  }
  work();
  for (auto & th : pool) {
    th.join();
  }

  int counterexamples = 0;
  for (size_t i = 0; i < results.size(); ++i) {
    if (!results[i]->verified) {
      ++counterexamples;
      const auto & profile = *results[i]->counterexample;
      std::cout << "counterexample sample=" << i
                << " t=" << io::format_double(*results[i]->collision_time)
                << " rear_lon_response=" << io::format_double(profile.rear_lon_response)
                << " front_lon_response=" << io::format_double(profile.front_lon_response)
                << " front_lon_after=" << io::format_double(profile.front_lon_after)
                << " lat_a=" << io::format_double(profile.lat_response_a)
                << " lat_b=" << io::format_double(profile.lat_response_b) << "\n";
    }
  }
  std::cout << "sampled=" << samples << " eligible=" << eligible.size()
            << " verified=" << (eligible.size() - static_cast<size_t>(counterexamples))
            << " counterexamples=" << counterexamples << "\n";
  return counterexamples > 0 ? kExitCounterexample : kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"RSS-based risk indices, 2D traffic simulator and Monte Carlo harness"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions opt;
  std::string state_file;
  std::string params_file;
  std::string experiment = "behavior";
  int episodes = 500;
  int samples = 100;
  int grid_levels = 5;
  double verify_horizon = 10.0;

  auto * risk_cmd = app.add_subcommand("risk", "Evaluate the risk indices for one vehicle pair");
  risk_cmd->add_option("state-file", state_file, "JSON pair-state file")->required();
  risk_cmd->add_option("params-file", params_file, "JSON file with rss and risk sections")
    ->required();
  risk_cmd->add_flag("--strict-branches", opt.strict, "Literal piecewise branch guards");

  auto * sim_cmd = app.add_subcommand("simulate", "Run one scenario and export its trace");
  sim_cmd->add_option("--config", opt.config_path, "Scenario config file")->required();
  sim_cmd->add_option("--out", opt.out_dir, "Output directory")->required();
  sim_cmd->add_option("--seed", opt.seed, "Seed recorded in the manifest");
  sim_cmd->add_option("--dt", opt.dt, "Override the scenario timestep");
  sim_cmd->add_flag("--strict-branches", opt.strict, "Literal piecewise branch guards");

  auto * exp_cmd = app.add_subcommand("experiment", "Run a Monte Carlo campaign");
  exp_cmd->add_option("--config", opt.config_path, "Scenario config file")->required();
  exp_cmd->add_option("--experiment", experiment, "Perturbation model")
    ->check(CLI::IsMember({"behavior", "state"}));
  exp_cmd->add_option("--episodes", episodes, "Episode count")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--seed", opt.seed, "Master seed; episode i uses master_seed + i");
  exp_cmd->add_option("--out", opt.out_dir, "Output directory")->required();
  exp_cmd->add_option("--dt", opt.dt, "Override the scenario timestep");
  exp_cmd->add_flag("--strict-branches", opt.strict, "Literal piecewise branch guards");

  auto * verify_cmd =
    app.add_subcommand("verify", "Empirically check that zero-risk states cannot collide");
  verify_cmd->add_option("--config", opt.config_path, "Config file providing rss/risk params")
    ->required();
  verify_cmd->add_option("--samples", samples, "Random states to draw")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", opt.seed, "Sampling seed");
  verify_cmd->add_option("--dt", opt.dt, "Adversary integration step (default 0.1 s)");
  verify_cmd->add_option("--grid-levels", grid_levels, "Acceleration grid levels per axis")
    ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--horizon", verify_horizon, "Adversary horizon in seconds");
  verify_cmd->add_flag("--strict-branches", opt.strict, "Literal piecewise branch guards");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (risk_cmd->parsed()) {
      return cmd_risk(state_file, params_file, opt.strict);
    }
    if (sim_cmd->parsed()) {
      return cmd_simulate(opt);
    }
    if (exp_cmd->parsed()) {
      return cmd_experiment(opt, experiment, episodes);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(opt, samples, grid_levels, verify_horizon);
    }
  } catch (const ConfigError & e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidInputError & e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParameterError & e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
