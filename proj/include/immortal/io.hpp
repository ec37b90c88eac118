// io.hpp: line-oriented detection, track and ground-truth files
//
//   #immortal-dets v1    frame_idx score x y z yaw l w h
//   #immortal-tracks v1  frame_idx track_id score x y z yaw l w h
//   #immortal-gt v1      frame_idx object_id visible x y z yaw l w h
//
// The header is the first line. Later lines starting with '#' are comments and
// blank lines are skipped. Reals are written with 9 significant digits.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "immortal/metrics.hpp"
#include "immortal/preprocess.hpp"
#include "immortal/tracker.hpp"

namespace immortal
{

inline constexpr const char* kDetsHeader = "#immortal-dets v1";
inline constexpr const char* kTracksHeader = "#immortal-tracks v1";
inline constexpr const char* kGtHeader = "#immortal-gt v1";

/// "%.9g"
std::string format_real(double v);

/// Throws ParseError on malformed lines, ConsistencyError on descending frames.
std::vector<Detection> read_detections(std::istream& in, const std::string& source = "<dets>");
std::vector<TrackBox> read_tracks(std::istream& in, const std::string& source = "<tracks>");
std::vector<GtBox> read_gt(std::istream& in, const std::string& source = "<gt>");

void write_detections(std::ostream& out, const std::vector<Detection>& dets,
                      const std::vector<std::string>& comments = {});
void write_tracks(std::ostream& out, const std::vector<TrackBox>& tracks);
void write_gt(std::ostream& out, const std::vector<GtBox>& gt, const std::vector<std::string>& comments = {});

std::vector<Detection> load_detections(const std::filesystem::path& path);
std::vector<TrackBox> load_tracks(const std::filesystem::path& path);
std::vector<GtBox> load_gt(const std::filesystem::path& path);

/// Flattens tracker output into track-file records.
std::vector<TrackBox> to_track_boxes(const std::vector<FrameResult>& results);

/// Groups detections into contiguous frames [first, last]; frames without
/// detections become empty lists. Input must be frame-ascending.
struct FrameStream
{
  FrameIndex first_frame = 0;
  std::vector<std::vector<Detection>> frames;
};
FrameStream group_by_frame(const std::vector<Detection>& dets);

}  // namespace immortal
