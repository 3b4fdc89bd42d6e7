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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "rssrisk/errors.hpp"
#include "rssrisk/experiments.hpp"
#include "rssrisk/io.hpp"

using namespace rssrisk;

namespace
{

std::string write_temp(const std::string & name, const std::string & contents)
{
  const std::string path = "/tmp/rssrisk_test_" + name;
  io::write_file(path, contents);
  return path;
}

}  // namespace

TEST_CASE("format_double: nine significant digits, dot decimal separator")
{
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(75.25) == "75.25");
  CHECK(io::format_double(1.0 / 3.0) == "0.333333333");
  CHECK(io::format_double(0.0) == "0");
  CHECK(io::format_double(-38.95) == "-38.95");
  CHECK(io::format_double(123456789012.0) == "1.23456789e+11");
}

TEST_CASE("risk CSV row for the midpoint fixture")
{
  core::RiskBreakdown b;
  b.r_lon = 0.5;
  b.r_lat = 0.5;
  b.r = 0.25;
  b.d_lon_min = 75.25;
  b.d_lon_min_brake = 38.95;
  b.d_lat_min = 2.375;
  b.d_lat_min_brake = 1.8125;

  std::ostringstream out;
  io::write_risk_csv(out, b);
  CHECK(
    out.str() ==
    "r_lon,r_lat,r,d_lon_min,d_lon_min_brake,d_lat_min,d_lat_min_brake\n"
    "0.5,0.5,0.25,75.25,38.95,2.375,1.8125\n");
}

TEST_CASE("episodes CSV schema: column order, LF endings, empty absent fields")
{
  experiments::EpisodeRecord rec;
  rec.episode_id = 3;
  rec.seed = 45;
  rec.max_risk = 0.75;
  rec.max_r_lon = 1.0;
  rec.max_r_lat = 0.75;
  rec.min_d_lon = 1.5;
  rec.min_d_lat = 0.25;
  rec.collision = true;
  rec.t_collision = 12.34;

  experiments::EpisodeRecord clean;
  clean.episode_id = 4;
  clean.seed = 46;

  std::ostringstream out;
  io::write_episodes_csv(out, {rec, clean});
  CHECK(
    out.str() ==
    "episode_id,seed,max_risk,max_r_lon,max_r_lat,min_d_lon,min_d_lat,collision,t_collision\n"
    "3,45,0.75,1,0.75,1.5,0.25,1,12.34\n"
    "4,46,0,0,0,,,0,\n");
}

TEST_CASE("summary CSV flags degenerate campaigns with empty statistics")
{
  experiments::CampaignResult result;
  result.episodes = 10;
  result.collisions = 0;
  result.stats.degenerate = true;

  std::ostringstream out;
  io::write_summary_csv(out, result);
  CHECK(
    out.str() ==
    "episodes,collisions,point_biserial,auc,permutation_p,degenerate\n"
    "10,0,,,,1\n");
}

TEST_CASE("config round-trips through dump and parse")
{
  io::FullConfig config;
  config.scenario = experiments::default_two_lane_scenario();
  config.behavior = experiments::default_behavior_experiment().behavior;
  config.state = experiments::default_state_experiment().state;

  const std::string text = io::dump_full_config(config);
  const io::FullConfig parsed = io::parse_full_config(text);
  CHECK(io::dump_full_config(parsed) == text);
  CHECK(parsed.scenario.vehicles.size() == 3);
  CHECK(parsed.scenario.rss.lon.a_cap_brake == 12.0);
  CHECK(parsed.scenario.vehicles[0].behavior.kind == sim::BehaviorKind::kRssFollower);
  CHECK(parsed.scenario.vehicles[0].is_ego);
  parsed.scenario.validate();
}

TEST_CASE("config parsing rejects unknown keys with a named diagnostic")
{
  io::FullConfig config;
  config.scenario = experiments::default_two_lane_scenario();
  std::string text = io::dump_full_config(config);
  text.replace(text.find("\"lane_width\""), 12, "\"lane_widht\"");
  CHECK_THROWS_WITH_AS(
    (void)io::parse_full_config(text), doctest::Contains("lane_widht"), ConfigError);
}

TEST_CASE("config parsing rejects malformed JSON and missing sections")
{
  CHECK_THROWS_AS((void)io::parse_full_config("{not json"), ConfigError);
  CHECK_THROWS_AS((void)io::parse_full_config("{}"), ConfigError);
  CHECK_THROWS_AS(
    (void)io::parse_full_config(R"({"scenario":{"vehicles":[]},"risk":{"beta":1,"gamma":1}})"),
    ConfigError);
}

TEST_CASE("pair state and params files parse")
{
  const std::string state_path = write_temp(
    "state.json",
    R"({"longitudinal": {"v_rear": 20, "v_front": 10, "d_lon": 57.1},
        "lateral": {"v_left": 1, "v_right": -1, "d_lat": 2.09375}})");
  const auto state = io::load_pair_state(state_path);
  CHECK(state.lon.v_rear == 20.0);
  CHECK(state.lat.d_lat == 2.09375);

  const std::string params_path = write_temp(
    "params.json",
    R"({"rss": {"rho": 1, "a_max_accel": 2, "a_min_brake": 4, "a_max_brake": 8,
                "a_cap_brake": 10, "a_lat_max_accel": 1, "a_lat_min_brake": 2,
                "a_lat_cap_brake": 4},
        "risk": {"beta": 1, "gamma": 1}})");
  const auto params = io::load_risk_params(params_path);
  CHECK(params.rss.lon.a_cap_brake == 10.0);
  CHECK(params.rss.lat.rho == 1.0);
  CHECK(params.risk.beta == 1.0);

  std::remove(state_path.c_str());
  std::remove(params_path.c_str());
}

TEST_CASE("fnv1a64 checksum is stable and input-sensitive")
{
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a64("a") != io::fnv1a64("b"));
  CHECK(io::fnv1a64("config") == io::fnv1a64("config"));
}

TEST_CASE("manifest JSON carries the checksum and output list")
{
  io::RunManifest manifest;
  manifest.tool_version = "0.1.0";
  manifest.config_checksum = "fnv1a64:deadbeef";
  manifest.master_seed = 42;
  manifest.started = "2026-01-01T00:00:00Z";
  manifest.finished = "2026-01-01T00:00:05Z";
  manifest.outputs = {"episodes.csv", "summary.csv"};

  const std::string text = io::dump_manifest(manifest);
  CHECK(text.find("fnv1a64:deadbeef") != std::string::npos);
  CHECK(text.find("episodes.csv") != std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("trace CSV header lists vehicle columns then pair blocks")
{
  sim::Trace trace;
  sim::TraceSample sample;
  sample.t = 0.0;
  geometry::VehicleState a;
  a.id = "ego";
  a.v_x = 1.0;
  geometry::VehicleState b;
  b.id = "lead";
  b.x = 30.0;
  sample.states = {a, b};
  sim::PairRisk pr;
  pr.i = 0;
  pr.j = 1;
  pr.d_lon = 25.2;
  sample.pair_risks = {pr};
  trace.samples = {sample};

  std::ostringstream out;
  io::write_trace_csv(out, trace, {"ego", "lead"});
  const std::string text = out.str();
  CHECK(text.find(
          "t,vehicle_id,x,y,v_x,v_y,a_x,a_y,"
          "pair_0_1_d_lon,pair_0_1_d_lat,pair_0_1_r_lon,pair_0_1_r_lat,pair_0_1_r\n") == 0);
  CHECK(text.find("0,ego,0,0,1,0,0,0,25.2,0,0,0,0\n") != std::string::npos);
  CHECK(text.find("0,lead,30,0,0,0,0,0,25.2,0,0,0,0\n") != std::string::npos);
}
