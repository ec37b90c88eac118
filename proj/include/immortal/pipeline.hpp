// pipeline.hpp: preprocess -> track -> evaluate glue shared by the CLI and tests

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "immortal/config.hpp"
#include "immortal/io.hpp"

namespace immortal
{

struct TrackRun
{
  FrameIndex first_frame = 0;
  std::vector<std::vector<Detection>> frames;  ///< detections after preprocessing
  std::vector<FrameResult> results;
  TrackerStats stats;
};

/// Groups by frame, preprocesses each frame, and runs the tracker.
TrackRun track_detections(const std::vector<Detection>& dets, const PipelineConfig& cfg);

/// `name=value` lines: ratios with 6 decimals, counts as integers.
std::string format_report(const EvalReport& report);
nlohmann::json report_json(const EvalReport& report);

/**
 * @brief Emitted tracks with no detection behind them.
 *
 * A track record is backed when a detection of the same frame carries the
 * same score (as written, 9 significant digits) and overlaps the track box.
 * Returns the offending records; empty means every output was a match.
 */
std::vector<TrackBox> find_unbacked_outputs(const std::vector<TrackBox>& tracks,
                                            const std::vector<Detection>& dets);

}  // namespace immortal
