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

#include "rssrisk/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rssrisk/errors.hpp"

namespace rssrisk::io
{

using nlohmann::json;

namespace
{

void check_keys(const json & obj, std::initializer_list<const char *> allowed,
                const std::string & where)
{
  for (const auto & item : obj.items()) {
    bool known = false;
    for (const char * key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

const json & require_object(const json & parent, const char * key, const std::string & where)
{
  if (!parent.contains(key)) {
    throw ConfigError("missing section '" + std::string(key) + "' in " + where);
  }
  const json & section = parent.at(key);
  if (!section.is_object()) {
    throw ConfigError("section '" + std::string(key) + "' must be an object in " + where);
  }
  return section;
}

double get_number(const json & obj, const char * key, const std::string & where)
{
  if (!obj.contains(key)) {
    throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  }
  if (!obj.at(key).is_number()) {
    throw ConfigError("key '" + std::string(key) + "' must be a number in " + where);
  }
  return obj.at(key).get<double>();
}

double get_number_or(const json & obj, const char * key, double fallback, const std::string & where)
{
  if (!obj.contains(key)) {
    return fallback;
  }
  if (!obj.at(key).is_number()) {
    throw ConfigError("key '" + std::string(key) + "' must be a number in " + where);
  }
  return obj.at(key).get<double>();
}

std::string get_string_or(
  const json & obj, const char * key, const std::string & fallback, const std::string & where)
{
  if (!obj.contains(key)) {
    return fallback;
  }
  if (!obj.at(key).is_string()) {
    throw ConfigError("key '" + std::string(key) + "' must be a string in " + where);
  }
  return obj.at(key).get<std::string>();
}

sim::RssParams parse_rss(const json & section)
{
  check_keys(
    section,
    {"rho", "a_max_accel", "a_min_brake", "a_max_brake", "a_cap_brake", "a_lat_max_accel",
     "a_lat_min_brake", "a_lat_cap_brake"},
    "rss");
  sim::RssParams p;
  p.lon.rho = get_number(section, "rho", "rss");
  p.lon.a_max_accel = get_number(section, "a_max_accel", "rss");
  p.lon.a_min_brake = get_number(section, "a_min_brake", "rss");
  p.lon.a_max_brake = get_number(section, "a_max_brake", "rss");
  p.lon.a_cap_brake = get_number(section, "a_cap_brake", "rss");
  p.lat.rho = p.lon.rho;
  p.lat.a_lat_max_accel = get_number(section, "a_lat_max_accel", "rss");
  p.lat.a_lat_min_brake = get_number(section, "a_lat_min_brake", "rss");
  p.lat.a_lat_cap_brake = get_number(section, "a_lat_cap_brake", "rss");
  return p;
}

core::RiskParams parse_risk(const json & section)
{
  check_keys(section, {"beta", "gamma"}, "risk");
  core::RiskParams p;
  p.beta = get_number(section, "beta", "risk");
  p.gamma = get_number(section, "gamma", "risk");
  return p;
}

sim::BehaviorSpec parse_behavior(const json & obj, const std::string & where)
{
  check_keys(
    obj, {"kind", "target_speed", "headway_margin", "response_delay", "profile", "lane_center"},
    where);
  sim::BehaviorSpec spec;
  const std::string kind = get_string_or(obj, "kind", "constant_speed", where);
  if (kind == "constant_speed") {
    spec.kind = sim::BehaviorKind::kConstantSpeed;
  } else if (kind == "rss_follower") {
    spec.kind = sim::BehaviorKind::kRssFollower;
  } else if (kind == "scripted_accel_profile") {
    spec.kind = sim::BehaviorKind::kScriptedAccelProfile;
  } else {
    throw ConfigError("unknown behavior kind '" + kind + "' in " + where);
  }
  spec.target_speed = get_number_or(obj, "target_speed", 0.0, where);
  spec.headway_margin = get_number_or(obj, "headway_margin", 0.0, where);
  spec.response_delay = get_number_or(obj, "response_delay", -1.0, where);
  if (obj.contains("lane_center")) {
    spec.lane_center = get_number(obj, "lane_center", where);
  }
  if (obj.contains("profile")) {
    if (!obj.at("profile").is_array()) {
      throw ConfigError("'profile' must be an array in " + where);
    }
    for (const auto & knot : obj.at("profile")) {
      check_keys(knot, {"t", "a_x", "a_y"}, where + ".profile");
      sim::AccelSample s;
      s.t = get_number(knot, "t", where + ".profile");
      s.a_x = get_number_or(knot, "a_x", 0.0, where + ".profile");
      s.a_y = get_number_or(knot, "a_y", 0.0, where + ".profile");
      spec.profile.push_back(s);
    }
  }
  return spec;
}

void parse_scenario(const json & section, sim::ScenarioConfig & cfg)
{
  check_keys(section, {"lane_width", "lane_count", "dt", "horizon", "vehicles"}, "scenario");
  cfg.lane_width = get_number_or(section, "lane_width", cfg.lane_width, "scenario");
  cfg.lane_count =
    static_cast<int>(get_number_or(section, "lane_count", cfg.lane_count, "scenario"));
  cfg.dt = get_number_or(section, "dt", cfg.dt, "scenario");
  cfg.horizon = get_number_or(section, "horizon", cfg.horizon, "scenario");

  if (!section.contains("vehicles") || !section.at("vehicles").is_array()) {
    throw ConfigError("scenario.vehicles must be an array");
  }
  cfg.vehicles.clear();
  int index = 0;
  for (const auto & vj : section.at("vehicles")) {
    const std::string where = "scenario.vehicles[" + std::to_string(index) + "]";
    check_keys(
      vj,
      {"id", "ego", "x", "y", "v_x", "v_y", "a_x", "a_y", "length", "width", "behavior"},
      where);
    sim::VehicleSetup setup;
    if (!vj.contains("id") || !vj.at("id").is_string()) {
      throw ConfigError("missing string 'id' in " + where);
    }
    setup.state.id = vj.at("id").get<std::string>();
    setup.is_ego = vj.contains("ego") && vj.at("ego").is_boolean() && vj.at("ego").get<bool>();
    setup.state.x = get_number_or(vj, "x", 0.0, where);
    setup.state.y = get_number_or(vj, "y", 0.0, where);
    setup.state.v_x = get_number_or(vj, "v_x", 0.0, where);
    setup.state.v_y = get_number_or(vj, "v_y", 0.0, where);
    setup.state.a_x = get_number_or(vj, "a_x", 0.0, where);
    setup.state.a_y = get_number_or(vj, "a_y", 0.0, where);
    setup.state.length = get_number_or(vj, "length", 4.8, where);
    setup.state.width = get_number_or(vj, "width", 1.8, where);
    if (vj.contains("behavior")) {
      setup.behavior = parse_behavior(vj.at("behavior"), where + ".behavior");
    }
    cfg.vehicles.push_back(std::move(setup));
    ++index;
  }
}

experiments::BehaviorViolationModel parse_violation(const json & obj)
{
  check_keys(
    obj, {"rate", "duration", "brake_excess", "accel_excess", "target"}, "experiment.behavior");
  experiments::BehaviorViolationModel m;
  m.rate = get_number_or(obj, "rate", m.rate, "experiment.behavior");
  m.duration = get_number_or(obj, "duration", m.duration, "experiment.behavior");
  m.brake_excess = get_number_or(obj, "brake_excess", m.brake_excess, "experiment.behavior");
  m.accel_excess = get_number_or(obj, "accel_excess", m.accel_excess, "experiment.behavior");
  if (obj.contains("target")) {
    const json & t = obj.at("target");
    if (t.is_string() && t.get<std::string>() == "traffic") {
      m.target_ids.clear();
    } else if (t.is_array()) {
      for (const auto & id : t) {
        if (!id.is_string()) {
          throw ConfigError("experiment.behavior.target entries must be strings");
        }
        m.target_ids.push_back(id.get<std::string>());
      }
    } else {
      throw ConfigError("experiment.behavior.target must be \"traffic\" or an id array");
    }
  }
  return m;
}

experiments::StateNoiseModel parse_noise(const json & obj)
{
  check_keys(
    obj, {"sigma_pos", "sigma_vel", "sigma_acc", "applies_to", "refresh_period"},
    "experiment.state");
  experiments::StateNoiseModel m;
  m.sigma_pos = get_number_or(obj, "sigma_pos", m.sigma_pos, "experiment.state");
  m.sigma_vel = get_number_or(obj, "sigma_vel", m.sigma_vel, "experiment.state");
  m.sigma_acc = get_number_or(obj, "sigma_acc", m.sigma_acc, "experiment.state");
  m.refresh_period = get_number_or(obj, "refresh_period", m.refresh_period, "experiment.state");
  const std::string applies = get_string_or(obj, "applies_to", "both", "experiment.state");
  if (applies == "ego") {
    m.applies_to = experiments::StateNoiseModel::AppliesTo::kEgo;
  } else if (applies == "traffic") {
    m.applies_to = experiments::StateNoiseModel::AppliesTo::kTraffic;
  } else if (applies == "both") {
    m.applies_to = experiments::StateNoiseModel::AppliesTo::kBoth;
  } else {
    throw ConfigError("experiment.state.applies_to must be ego|traffic|both");
  }
  return m;
}

json parsed_or_throw(const std::string & text)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error & e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

}  // namespace

FullConfig parse_full_config(const std::string & text)
{
  const json root = parsed_or_throw(text);
  if (!root.is_object()) {
    throw ConfigError("config root must be a JSON object");
  }
  check_keys(root, {"scenario", "rss", "risk", "experiment", "output"}, "config");

  FullConfig config;
  parse_scenario(require_object(root, "scenario", "config"), config.scenario);
  config.scenario.rss = parse_rss(require_object(root, "rss", "config"));
  config.scenario.risk = parse_risk(require_object(root, "risk", "config"));

  if (root.contains("experiment")) {
    const json & exp = root.at("experiment");
    check_keys(exp, {"behavior", "state"}, "experiment");
    if (exp.contains("behavior")) {
      config.behavior = parse_violation(exp.at("behavior"));
    }
    if (exp.contains("state")) {
      config.state = parse_noise(exp.at("state"));
    }
  }
  if (root.contains("output")) {
    const json & out = root.at("output");
    check_keys(
      out, {"trace_filename", "episodes_filename", "summary_filename", "manifest_filename"},
      "output");
    config.output.trace_filename =
      get_string_or(out, "trace_filename", config.output.trace_filename, "output");
    config.output.episodes_filename =
      get_string_or(out, "episodes_filename", config.output.episodes_filename, "output");
    config.output.summary_filename =
      get_string_or(out, "summary_filename", config.output.summary_filename, "output");
    config.output.manifest_filename =
      get_string_or(out, "manifest_filename", config.output.manifest_filename, "output");
  }
  return config;
}

FullConfig load_full_config(const std::string & path)
{
  return parse_full_config(read_file(path));
}

std::string dump_full_config(const FullConfig & config)
{
  json root;
  json & scenario = root["scenario"];
  scenario["lane_width"] = config.scenario.lane_width;
  scenario["lane_count"] = config.scenario.lane_count;
  scenario["dt"] = config.scenario.dt;
  scenario["horizon"] = config.scenario.horizon;
  scenario["vehicles"] = json::array();
  for (const auto & v : config.scenario.vehicles) {
    json vj;
    vj["id"] = v.state.id;
    if (v.is_ego) {
      vj["ego"] = true;
    }
    vj["x"] = v.state.x;
    vj["y"] = v.state.y;
    vj["v_x"] = v.state.v_x;
    vj["v_y"] = v.state.v_y;
    vj["a_x"] = v.state.a_x;
    vj["a_y"] = v.state.a_y;
    vj["length"] = v.state.length;
    vj["width"] = v.state.width;
    json bj;
    switch (v.behavior.kind) {
      case sim::BehaviorKind::kConstantSpeed:
        bj["kind"] = "constant_speed";
        bj["target_speed"] = v.behavior.target_speed;
        break;
      case sim::BehaviorKind::kRssFollower:
        bj["kind"] = "rss_follower";
        bj["target_speed"] = v.behavior.target_speed;
        bj["headway_margin"] = v.behavior.headway_margin;
        if (v.behavior.response_delay >= 0.0) {
          bj["response_delay"] = v.behavior.response_delay;
        }
        break;
      case sim::BehaviorKind::kScriptedAccelProfile: {
        bj["kind"] = "scripted_accel_profile";
        json knots = json::array();
        for (const auto & k : v.behavior.profile) {
          knots.push_back({{"t", k.t}, {"a_x", k.a_x}, {"a_y", k.a_y}});
        }
        bj["profile"] = std::move(knots);
        break;
      }
    }
    if (v.behavior.lane_center) {
      bj["lane_center"] = *v.behavior.lane_center;
    }
    vj["behavior"] = std::move(bj);
    scenario["vehicles"].push_back(std::move(vj));
  }

  json & rss = root["rss"];
  rss["rho"] = config.scenario.rss.lon.rho;
  rss["a_max_accel"] = config.scenario.rss.lon.a_max_accel;
  rss["a_min_brake"] = config.scenario.rss.lon.a_min_brake;
  rss["a_max_brake"] = config.scenario.rss.lon.a_max_brake;
  rss["a_cap_brake"] = config.scenario.rss.lon.a_cap_brake;
  rss["a_lat_max_accel"] = config.scenario.rss.lat.a_lat_max_accel;
  rss["a_lat_min_brake"] = config.scenario.rss.lat.a_lat_min_brake;
  rss["a_lat_cap_brake"] = config.scenario.rss.lat.a_lat_cap_brake;

  root["risk"] = {{"beta", config.scenario.risk.beta}, {"gamma", config.scenario.risk.gamma}};

  json & exp = root["experiment"];
  exp["behavior"] = {
    {"rate", config.behavior.rate},
    {"duration", config.behavior.duration},
    {"brake_excess", config.behavior.brake_excess},
    {"accel_excess", config.behavior.accel_excess}};
  if (!config.behavior.target_ids.empty()) {
    exp["behavior"]["target"] = config.behavior.target_ids;
  }
  const char * applies =
    config.state.applies_to == experiments::StateNoiseModel::AppliesTo::kEgo
      ? "ego"
      : (config.state.applies_to == experiments::StateNoiseModel::AppliesTo::kTraffic
           ? "traffic"
           : "both");
  exp["state"] = {
    {"sigma_pos", config.state.sigma_pos},
    {"sigma_vel", config.state.sigma_vel},
    {"sigma_acc", config.state.sigma_acc},
    {"applies_to", applies},
    {"refresh_period", config.state.refresh_period}};

  root["output"] = {
    {"trace_filename", config.output.trace_filename},
    {"episodes_filename", config.output.episodes_filename},
    {"summary_filename", config.output.summary_filename},
    {"manifest_filename", config.output.manifest_filename}};

  return root.dump(2) + "\n";
}

PairStateFile load_pair_state(const std::string & path)
{
  const json root = parsed_or_throw(read_file(path));
  check_keys(root, {"longitudinal", "lateral"}, "state file");
  const json & lon = require_object(root, "longitudinal", "state file");
  const json & lat = require_object(root, "lateral", "state file");
  check_keys(lon, {"v_rear", "v_front", "d_lon"}, "longitudinal");
  check_keys(lat, {"v_left", "v_right", "d_lat"}, "lateral");

  PairStateFile out;
  out.lon.v_rear = get_number(lon, "v_rear", "longitudinal");
  out.lon.v_front = get_number(lon, "v_front", "longitudinal");
  out.lon.d_lon = get_number(lon, "d_lon", "longitudinal");
  out.lat.v_left = get_number(lat, "v_left", "lateral");
  out.lat.v_right = get_number(lat, "v_right", "lateral");
  out.lat.d_lat = get_number(lat, "d_lat", "lateral");
  return out;
}

RiskParamsFile load_risk_params(const std::string & path)
{
  const json root = parsed_or_throw(read_file(path));
  RiskParamsFile out;
  out.rss = parse_rss(require_object(root, "rss", "params file"));
  out.risk = parse_risk(require_object(root, "risk", "params file"));
  return out;
}

std::string format_double(double value)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

void write_risk_csv(std::ostream & out, const core::RiskBreakdown & b)
{
  out << "r_lon,r_lat,r,d_lon_min,d_lon_min_brake,d_lat_min,d_lat_min_brake\n";
  out << format_double(b.r_lon) << ',' << format_double(b.r_lat) << ',' << format_double(b.r)
      << ',' << format_double(b.d_lon_min) << ',' << format_double(b.d_lon_min_brake) << ','
      << format_double(b.d_lat_min) << ',' << format_double(b.d_lat_min_brake) << '\n';
}

void write_trace_csv(
  std::ostream & out, const sim::Trace & trace, const std::vector<std::string> & vehicle_ids)
{
  out << "t,vehicle_id,x,y,v_x,v_y,a_x,a_y";
  const size_t n = vehicle_ids.size();
  for (size_t i = 0; i + 1 < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const std::string tag = "pair_" + std::to_string(i) + "_" + std::to_string(j) + "_";
      out << ',' << tag << "d_lon" << ',' << tag << "d_lat" << ',' << tag << "r_lon" << ','
          << tag << "r_lat" << ',' << tag << "r";
    }
  }
  out << '\n';

  for (const auto & sample : trace.samples) {
    std::string pair_block;
    for (const auto & pr : sample.pair_risks) {
      pair_block += ',' + format_double(pr.d_lon) + ',' + format_double(pr.d_lat) + ',' +
                    format_double(pr.risk.r_lon) + ',' + format_double(pr.risk.r_lat) + ',' +
                    format_double(pr.risk.r);
    }
    for (size_t v = 0; v < sample.states.size(); ++v) {
      const auto & s = sample.states[v];
      out << format_double(sample.t) << ',' << vehicle_ids[v] << ',' << format_double(s.x) << ','
          << format_double(s.y) << ',' << format_double(s.v_x) << ',' << format_double(s.v_y)
          << ',' << format_double(s.a_x) << ',' << format_double(s.a_y) << pair_block << '\n';
    }
  }
}

void write_episodes_csv(
  std::ostream & out, const std::vector<experiments::EpisodeRecord> & records)
{
  out << "episode_id,seed,max_risk,max_r_lon,max_r_lat,min_d_lon,min_d_lat,collision,"
         "t_collision\n";
  for (const auto & rec : records) {
    out << rec.episode_id << ',' << rec.seed << ',' << format_double(rec.max_risk) << ','
        << format_double(rec.max_r_lon) << ',' << format_double(rec.max_r_lat) << ','
        << (rec.min_d_lon ? format_double(*rec.min_d_lon) : std::string{}) << ','
        << (rec.min_d_lat ? format_double(*rec.min_d_lat) : std::string{}) << ','
        << (rec.collision ? 1 : 0) << ','
        << (rec.t_collision ? format_double(*rec.t_collision) : std::string{}) << '\n';
  }
}

void write_summary_csv(std::ostream & out, const experiments::CampaignResult & result)
{
  out << "episodes,collisions,point_biserial,auc,permutation_p,degenerate\n";
  out << result.episodes << ',' << result.collisions << ','
      << (result.stats.point_biserial ? format_double(*result.stats.point_biserial)
                                      : std::string{})
      << ',' << (result.stats.auc ? format_double(*result.stats.auc) : std::string{}) << ','
      << (result.stats.permutation_p ? format_double(*result.stats.permutation_p)
                                     : std::string{})
      << ',' << (result.stats.degenerate ? 1 : 0) << '\n';
}

std::uint64_t fnv1a64(std::string_view bytes)
{
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string dump_manifest(const RunManifest & manifest)
{
  json root;
  root["tool_version"] = manifest.tool_version;
  root["config_checksum"] = manifest.config_checksum;
  root["master_seed"] = manifest.master_seed;
  root["started"] = manifest.started;
  root["finished"] = manifest.finished;
  root["outputs"] = manifest.outputs;
  return root.dump(2) + "\n";
}

std::string utc_timestamp()
{
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string & path, std::string_view contents)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write file: " + path);
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw ConfigError("write failed: " + path);
  }
}

}  // namespace rssrisk::io
