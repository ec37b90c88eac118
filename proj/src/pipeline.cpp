#include "immortal/pipeline.hpp"

#include <cstdio>
#include <map>
#include <sstream>

namespace immortal
{

TrackRun track_detections(const std::vector<Detection>& dets, const PipelineConfig& cfg)
{
  FrameStream stream = group_by_frame(dets);
  TrackRun run;
  run.first_frame = stream.first_frame;
  run.frames.reserve(stream.frames.size());
  for (const auto& frame : stream.frames) {
    run.frames.push_back(preprocess(frame, cfg.preprocess));
  }
  run.results = run_sequence(run.frames, cfg.tracker, run.first_frame, &run.stats);
  return run;
}

std::string format_report(const EvalReport& r)
{
  auto ratio = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "mota=" << ratio(r.mota) << '\n'
      << "fp_pct=" << ratio(r.fp_pct) << '\n'
      << "miss_pct=" << ratio(r.miss_pct) << '\n'
      << "mismatch_pct=" << ratio(r.mismatch_pct) << '\n'
      << "ids=" << r.mismatch << '\n'
      << "ids_early_termination=" << r.ids_early_termination << '\n'
      << "ids_wrong_association=" << r.ids_wrong_association << '\n'
      << "num_gt=" << r.num_gt << '\n'
      << "fp=" << r.fp << '\n'
      << "miss=" << r.miss << '\n'
      << "mismatch=" << r.mismatch << '\n';
  return out.str();
}

nlohmann::json report_json(const EvalReport& r)
{
  return {
      {"mota", r.mota},
      {"fp_pct", r.fp_pct},
      {"miss_pct", r.miss_pct},
      {"mismatch_pct", r.mismatch_pct},
      {"ids", r.mismatch},
      {"ids_early_termination", r.ids_early_termination},
      {"ids_wrong_association", r.ids_wrong_association},
      {"num_gt", r.num_gt},
      {"fp", r.fp},
      {"miss", r.miss},
      {"mismatch", r.mismatch},
  };
}

std::vector<TrackBox> find_unbacked_outputs(const std::vector<TrackBox>& tracks,
                                            const std::vector<Detection>& dets)
{
  std::multimap<FrameIndex, const Detection*> by_frame;
  for (const auto& d : dets) {
    by_frame.emplace(d.frame, &d);
  }
  std::vector<TrackBox> unbacked;
  for (const auto& t : tracks) {
    const std::string score = format_real(t.score);
    bool backed = false;
    const auto [lo, hi] = by_frame.equal_range(t.frame);
    for (auto it = lo; it != hi && !backed; ++it) {
      backed = format_real(it->second->score) == score && iou3d(it->second->box, t.box) > 0.0;
    }
    if (!backed) {
      unbacked.push_back(t);
    }
  }
  return unbacked;
}

}  // namespace immortal
