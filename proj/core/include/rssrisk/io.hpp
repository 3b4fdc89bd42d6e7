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

#ifndef RSSRISK_IO_HPP_
#define RSSRISK_IO_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rssrisk/experiments.hpp"
#include "rssrisk/simulator.hpp"

namespace rssrisk::io
{

struct OutputConfig
{
  std::string trace_filename{"trace.csv"};
  std::string episodes_filename{"episodes.csv"};
  std::string summary_filename{"summary.csv"};
  std::string manifest_filename{"manifest.json"};
};

/// Everything a config file carries: the scenario (with RSS and risk
/// parameters), both experiment models and the output filenames.
struct FullConfig
{
  sim::ScenarioConfig scenario;
  experiments::BehaviorViolationModel behavior;
  experiments::StateNoiseModel state;
  OutputConfig output;
};

/// Parses a JSON config file with sections {scenario, rss, risk, experiment,
/// output}. Unknown keys are rejected with a diagnostic naming the key.
FullConfig load_full_config(const std::string & path);
FullConfig parse_full_config(const std::string & text);

/// Serializes a FullConfig back to canonical JSON (2-space indent).
std::string dump_full_config(const FullConfig & config);

/// State file for one-shot risk evaluation: sections {longitudinal, lateral}.
struct PairStateFile
{
  core::LongitudinalPairState lon;
  core::LateralPairState lat;
};

PairStateFile load_pair_state(const std::string & path);

/// Params file: a JSON document with at least {rss, risk} sections (a full
/// config file works too).
struct RiskParamsFile
{
  sim::RssParams rss;
  core::RiskParams risk;
};

RiskParamsFile load_risk_params(const std::string & path);

/// Locale-independent shortest-faithful formatting at 9 significant digits.
std::string format_double(double value);

void write_risk_csv(std::ostream & out, const core::RiskBreakdown & breakdown);
void write_trace_csv(
  std::ostream & out, const sim::Trace & trace, const std::vector<std::string> & vehicle_ids);
void write_episodes_csv(
  std::ostream & out, const std::vector<experiments::EpisodeRecord> & records);
void write_summary_csv(std::ostream & out, const experiments::CampaignResult & result);

/// FNV-1a 64-bit, used as the config checksum recorded in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

struct RunManifest
{
  std::string tool_version;
  std::string config_checksum;
  std::uint64_t master_seed{0};
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;
};

std::string dump_manifest(const RunManifest & manifest);

/// Current UTC wall time as ISO-8601 (manifests only; CSV outputs carry no
/// timestamps so they stay byte-reproducible).
std::string utc_timestamp();

std::string read_file(const std::string & path);
void write_file(const std::string & path, std::string_view contents);

}  // namespace rssrisk::io

#endif  // RSSRISK_IO_HPP_
