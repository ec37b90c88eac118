#include "immortal/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "immortal/errors.hpp"
#include "immortal/pipeline.hpp"

namespace immortal
{

namespace
{

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn)
{
  try {
    return fn();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

PipelineConfig config_or_default(const std::optional<std::filesystem::path>& path)
{
  return path ? load_config(*path) : PipelineConfig{};
}

std::ofstream open_output(const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

std::string fixed6(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

int cmd_track(const TrackArgs& args, std::ostream& /*out*/, std::ostream& err)
{
  return guarded(err, [&] {
    const PipelineConfig cfg = config_or_default(args.config);
    const auto dets = load_detections(args.dets);
    const TrackRun run = track_detections(dets, cfg);
    const auto tracks = to_track_boxes(run.results);
    auto file = open_output(args.out);
    write_tracks(file, tracks);
    err << "frames=" << run.stats.frames << " tracklets_created=" << run.stats.tracklets_created
        << " matches=" << run.stats.matches << " outputs=" << tracks.size() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err)
{
  return guarded(err, [&] {
    const PipelineConfig cfg = config_or_default(args.config);
    const auto gt = load_gt(args.gt);
    const auto tracks = load_tracks(args.tracks);
    const EvalReport report = clear_mot(gt, tracks, cfg.match_iou);
    out << format_report(report);
    if (args.json) {
      auto file = open_output(*args.json);
      file << report_json(report).dump(2) << '\n';
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& /*out*/, std::ostream& err)
{
  return guarded(err, [&] {
    const PipelineConfig cfg = config_or_default(args.config);
    const Scenario scenario = generate(cfg.scenario);
    const std::vector<std::string> comments = {
        std::string("rng=") + ScenarioRng::kAlgorithm + " seed=" + std::to_string(cfg.scenario.seed)};
    auto dets_file = open_output(args.out_dets);
    write_detections(dets_file, scenario.detections, comments);
    auto gt_file = open_output(args.out_gt);
    write_gt(gt_file, scenario.gt, comments);
    err << "objects=" << cfg.scenario.num_objects << " frames=" << cfg.scenario.num_frames
        << " detections=" << scenario.detections.size() << " gt_boxes=" << scenario.gt.size() << '\n';
    return static_cast<int>(kExitOk);
  });
}

std::pair<std::string, std::vector<double>> parse_sweep(const std::string& spec)
{
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("sweep must look like KEY=v1,v2,...");
  }
  const std::string key = spec.substr(0, eq);
  const auto& keys = sweep_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    std::string valid;
    for (const auto& k : keys) {
      valid += (valid.empty() ? "" : ", ") + k;
    }
    throw std::invalid_argument("unknown sweep key '" + key + "' (valid keys: " + valid + ")");
  }
  std::vector<double> values;
  std::stringstream list(spec.substr(eq + 1));
  std::string item;
  while (std::getline(list, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw std::invalid_argument("bad sweep value '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw std::invalid_argument("sweep has no values");
  }
  return {key, values};
}

int cmd_ablate(const AblateArgs& args, std::ostream& out, std::ostream& err)
{
  return guarded(err, [&] {
    const auto [key, values] = parse_sweep(args.sweep);
    const PipelineConfig base = config_or_default(args.config);
    const auto dets = load_detections(args.dets);
    const auto gt = load_gt(args.gt);

    std::vector<AblationRow> rows;
    for (double v : values) {
      PipelineConfig cfg = base;
      apply_sweep(cfg, key, v);
      const TrackRun run = track_detections(dets, cfg);
      const EvalReport r = clear_mot(gt, to_track_boxes(run.results), cfg.match_iou);
      rows.push_back({v, r.mota, r.fp_pct, r.miss_pct, r.mismatch_pct, r.mismatch, r.ids_early_termination,
                      r.ids_wrong_association});
    }

    out << std::left << std::setw(10) << key << std::right << std::setw(12) << "mota" << std::setw(12)
        << "fp_pct" << std::setw(12) << "miss_pct" << std::setw(14) << "mismatch_pct" << std::setw(8) << "ids"
        << std::setw(8) << "ids_et" << std::setw(8) << "ids_wa" << '\n';
    for (const auto& row : rows) {
      out << std::left << std::setw(10) << format_real(row.value) << std::right << std::setw(12)
          << fixed6(row.mota) << std::setw(12) << fixed6(row.fp_pct) << std::setw(12) << fixed6(row.miss_pct)
          << std::setw(14) << fixed6(row.mismatch_pct) << std::setw(8) << row.ids << std::setw(8)
          << row.ids_early_termination << std::setw(8) << row.ids_wrong_association << '\n';
    }

    if (args.plot) {
      auto file = open_output(*args.plot);
      file << "# " << key << " mismatch_pct mota\n";
      for (const auto& row : rows) {
        file << format_real(row.value) << ' ' << fixed6(row.mismatch_pct) << ' ' << fixed6(row.mota) << '\n';
      }
    }
    return static_cast<int>(kExitOk);
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Tracking-by-detection with never-terminating tracklets"};
  app.require_subcommand(1);

  TrackArgs track;
  auto* track_cmd = app.add_subcommand("track", "Track a detection file");
  track_cmd->add_option("--dets", track.dets, "Detection file")->required();
  track_cmd->add_option("--config", track.config, "Config file");
  track_cmd->add_option("--out", track.out, "Output track file")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a track file against ground truth");
  eval_cmd->add_option("--gt", eval.gt, "Ground-truth file")->required();
  eval_cmd->add_option("--tracks", eval.tracks, "Track file")->required();
  eval_cmd->add_option("--config", eval.config, "Config file");
  eval_cmd->add_option("--json", eval.json, "Also write the report as JSON");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic scenario");
  sim_cmd->add_option("--config", sim.config, "Config file ([simulate] section)");
  sim_cmd->add_option("--out-dets", sim.out_dets, "Detection file to write")->required();
  sim_cmd->add_option("--out-gt", sim.out_gt, "Ground-truth file to write")->required();

  AblateArgs ablate;
  auto* ablate_cmd = app.add_subcommand("ablate", "Sweep one parameter and evaluate each value");
  ablate_cmd->add_option("--dets", ablate.dets, "Detection file")->required();
  ablate_cmd->add_option("--gt", ablate.gt, "Ground-truth file")->required();
  ablate_cmd->add_option("--config", ablate.config, "Config file");
  ablate_cmd->add_option("--sweep", ablate.sweep, "KEY=v1,v2,... with KEY in a_max, m_hits, gate, nms_iou")
      ->required();
  ablate_cmd->add_option("--plot", ablate.plot, "Plot-data file (x mismatch_pct mota)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  if (track_cmd->parsed()) {
    return cmd_track(track, out, err);
  }
  if (eval_cmd->parsed()) {
    return cmd_eval(eval, out, err);
  }
  if (sim_cmd->parsed()) {
    return cmd_simulate(sim, out, err);
  }
  return cmd_ablate(ablate, out, err);
}

}  // namespace immortal
