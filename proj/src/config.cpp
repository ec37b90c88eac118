#include "immortal/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>

#include "immortal/errors.hpp"

namespace immortal
{

namespace
{

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& v)
{
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw std::invalid_argument("not a finite number: '" + v + "'");
  }
  return out;
}

std::int64_t to_int(const std::string& v)
{
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("not an integer: '" + v + "'");
  }
  return out;
}

template <std::size_t N>
std::array<double, N> to_vector(const std::string& v)
{
  std::array<double, N> out{};
  std::size_t n = 0;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const std::string item = trim(v.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (n >= N) {
      throw std::invalid_argument("expected " + std::to_string(N) + " comma-separated values");
    }
    out[n++] = to_real(item);
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  if (n != N) {
    throw std::invalid_argument("expected " + std::to_string(N) + " comma-separated values, got " +
                                std::to_string(n));
  }
  return out;
}

using Setter = std::function<void(PipelineConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
  static const std::map<std::string, Setter> table = {
      {"preprocess.score_min", [](PipelineConfig& c, const std::string& v) { c.preprocess.score_min = to_real(v); }},
      {"preprocess.nms_iou", [](PipelineConfig& c, const std::string& v) { c.preprocess.nms_iou = to_real(v); }},
      {"association.metric",
       [](PipelineConfig& c, const std::string& v) {
         if (v == "iou") {
           c.tracker.assoc.metric = SimilarityMetric::IoU3D;
         } else if (v == "giou") {
           c.tracker.assoc.metric = SimilarityMetric::GIoU3D;
         } else {
           throw std::invalid_argument("metric must be 'iou' or 'giou'");
         }
       }},
      {"association.gate", [](PipelineConfig& c, const std::string& v) { c.tracker.assoc.gate = to_real(v); }},
      {"kalman.p0", [](PipelineConfig& c, const std::string& v) { c.tracker.kf.p0_diag = to_vector<kStateDim>(v); }},
      {"kalman.q", [](PipelineConfig& c, const std::string& v) { c.tracker.kf.q_diag = to_vector<kStateDim>(v); }},
      {"kalman.r", [](PipelineConfig& c, const std::string& v) { c.tracker.kf.r_diag = to_vector<kObsDim>(v); }},
      {"tracker.mode",
       [](PipelineConfig& c, const std::string& v) {
         if (v == "immortal") {
           c.tracker.mode = TrackerMode::Immortal;
         } else if (v == "baseline") {
           c.tracker.mode = TrackerMode::Baseline;
         } else {
           throw std::invalid_argument("mode must be 'immortal' or 'baseline'");
         }
       }},
      {"tracker.m_hits", [](PipelineConfig& c, const std::string& v) { c.tracker.m_hits = static_cast<int>(to_int(v)); }},
      {"tracker.a_max", [](PipelineConfig& c, const std::string& v) { c.tracker.a_max = static_cast<int>(to_int(v)); }},
      {"eval.match_iou", [](PipelineConfig& c, const std::string& v) { c.match_iou = to_real(v); }},
      {"simulate.seed",
       [](PipelineConfig& c, const std::string& v) {
         const auto s = to_int(v);
         if (s < 0) {
           throw std::invalid_argument("seed must be >= 0");
         }
         c.scenario.seed = static_cast<std::uint64_t>(s);
       }},
      {"simulate.num_objects", [](PipelineConfig& c, const std::string& v) { c.scenario.num_objects = static_cast<int>(to_int(v)); }},
      {"simulate.num_frames", [](PipelineConfig& c, const std::string& v) { c.scenario.num_frames = static_cast<int>(to_int(v)); }},
      {"simulate.extent", [](PipelineConfig& c, const std::string& v) { c.scenario.extent = to_real(v); }},
      {"simulate.speed_min", [](PipelineConfig& c, const std::string& v) { c.scenario.speed_min = to_real(v); }},
      {"simulate.speed_max", [](PipelineConfig& c, const std::string& v) { c.scenario.speed_max = to_real(v); }},
      {"simulate.turn_rate_min", [](PipelineConfig& c, const std::string& v) { c.scenario.turn_rate_min = to_real(v); }},
      {"simulate.turn_rate_max", [](PipelineConfig& c, const std::string& v) { c.scenario.turn_rate_max = to_real(v); }},
      {"simulate.occlusion_prob", [](PipelineConfig& c, const std::string& v) { c.scenario.occlusion_prob = to_real(v); }},
      {"simulate.occlusion_min", [](PipelineConfig& c, const std::string& v) { c.scenario.occlusion_min = static_cast<int>(to_int(v)); }},
      {"simulate.occlusion_max", [](PipelineConfig& c, const std::string& v) { c.scenario.occlusion_max = static_cast<int>(to_int(v)); }},
      {"simulate.pos_sigma", [](PipelineConfig& c, const std::string& v) { c.scenario.pos_sigma = to_real(v); }},
      {"simulate.yaw_sigma", [](PipelineConfig& c, const std::string& v) { c.scenario.yaw_sigma = to_real(v); }},
      {"simulate.size_sigma", [](PipelineConfig& c, const std::string& v) { c.scenario.size_sigma = to_real(v); }},
      {"simulate.dropout", [](PipelineConfig& c, const std::string& v) { c.scenario.dropout = to_real(v); }},
      {"simulate.fp_rate", [](PipelineConfig& c, const std::string& v) { c.scenario.fp_rate = to_real(v); }},
  };
  return table;
}

}  // namespace

void PipelineConfig::validate() const
{
  preprocess.validate();
  tracker.validate();
  if (!std::isfinite(match_iou) || match_iou < 0.0 || match_iou > 1.0) {
    throw std::invalid_argument("eval.match_iou must lie in [0, 1]");
  }
  scenario.validate();
}

void apply_setting(PipelineConfig& cfg, const std::string& dotted_key, const std::string& value)
{
  const auto& table = setters();
  const auto it = table.find(dotted_key);
  if (it == table.end()) {
    throw std::invalid_argument("unknown key '" + dotted_key + "'");
  }
  it->second(cfg, value);
}

PipelineConfig parse_config(std::istream& in, const std::string& source)
{
  PipelineConfig cfg;
  std::optional<double> gate;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError(source, line_no, "malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      static const std::vector<std::string> known = {"preprocess", "association", "kalman",
                                                     "tracker", "eval", "simulate"};
      if (std::find(known.begin(), known.end(), section) == known.end()) {
        throw ParseError(source, line_no, "unknown section '" + section + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source, line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string dotted = section.empty() || key.find('.') != std::string::npos ? key : section + "." + key;
    try {
      apply_setting(cfg, dotted, value);
      if (dotted == "association.gate") {
        gate = cfg.tracker.assoc.gate;
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  cfg.tracker.assoc.gate = gate.value_or(default_gate(cfg.tracker.assoc.metric));
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(source, line_no, e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path.string(), 0, "cannot open file");
  }
  return parse_config(in, path.string());
}

const std::vector<std::string>& sweep_keys()
{
  static const std::vector<std::string> keys = {"a_max", "m_hits", "gate", "nms_iou"};
  return keys;
}

void apply_sweep(PipelineConfig& cfg, const std::string& key, double value)
{
  if (key == "a_max") {
    cfg.tracker.mode = TrackerMode::Baseline;
    cfg.tracker.a_max = static_cast<int>(std::lround(value));
  } else if (key == "m_hits") {
    cfg.tracker.m_hits = static_cast<int>(std::lround(value));
  } else if (key == "gate") {
    cfg.tracker.assoc.gate = value;
  } else if (key == "nms_iou") {
    cfg.preprocess.nms_iou = value;
  } else {
    throw std::invalid_argument("unknown sweep key '" + key + "'");
  }
  cfg.validate();
}

}  // namespace immortal
