#include "immortal/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "immortal/errors.hpp"

namespace immortal
{

namespace
{

struct Line
{
  std::size_t number;
  std::vector<std::string_view> fields;
};

std::vector<std::string_view> split_ws(std::string_view s)
{
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
      ++i;
    }
    const std::size_t start = i;
    while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
      ++i;
    }
    if (i > start) {
      out.push_back(s.substr(start, i - start));
    }
  }
  return out;
}

class RecordReader
{
public:
  RecordReader(std::istream& in, std::string source, const char* header)
    : in_(in), source_(std::move(source))
  {
    std::string first;
    if (!std::getline(in_, first)) {
      throw ParseError(source_, 1, std::string("missing header '") + header + "'");
    }
    line_no_ = 1;
    if (!first.empty() && first.back() == '\r') {
      first.pop_back();
    }
    if (first != header) {
      throw ParseError(source_, 1, std::string("expected header '") + header + "', got '" + first + "'");
    }
  }

  // Next data line, skipping blanks and comments.
  bool next(Line& line)
  {
    while (std::getline(in_, buf_)) {
      ++line_no_;
      auto fields = split_ws(buf_);
      if (fields.empty() || fields.front().front() == '#') {
        continue;
      }
      line = {line_no_, std::move(fields)};
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::size_t line, const std::string& what) const
  {
    throw ParseError(source_, line, what);
  }

  const std::string& source() const { return source_; }

  double real(const Line& line, std::size_t i) const
  {
    const auto f = line.fields[i];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
      fail(line.number, "field " + std::to_string(i + 1) + " is not a finite number: '" + std::string(f) + "'");
    }
    return v;
  }

  std::int64_t integer(const Line& line, std::size_t i) const
  {
    const auto f = line.fields[i];
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc() || ptr != f.data() + f.size()) {
      fail(line.number, "field " + std::to_string(i + 1) + " is not an integer: '" + std::string(f) + "'");
    }
    return v;
  }

  Box3D box(const Line& line, std::size_t first) const
  {
    double v[7];
    for (std::size_t k = 0; k < 7; ++k) {
      v[k] = real(line, first + k);
    }
    try {
      return Box3D(v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
    } catch (const std::invalid_argument& e) {
      fail(line.number, e.what());
    }
  }

private:
  std::istream& in_;
  std::string source_;
  std::string buf_;
  std::size_t line_no_ = 0;
};

void check_field_count(const RecordReader& r, const Line& line, std::size_t expected, bool at_least)
{
  const std::size_t n = line.fields.size();
  if (at_least ? n < expected : n != expected) {
    r.fail(line.number, "expected " + std::string(at_least ? "at least " : "") + std::to_string(expected) +
                            " fields, got " + std::to_string(n));
  }
}

void check_ascending(const RecordReader& r, const Line& line, FrameIndex frame, FrameIndex& previous,
                     bool& have_previous)
{
  if (have_previous && frame < previous) {
    throw ConsistencyError(r.source() + ":" + std::to_string(line.number) + ": frame " +
                           std::to_string(frame) + " after frame " + std::to_string(previous));
  }
  previous = frame;
  have_previous = true;
}

void write_box(std::ostream& out, const Box3D& b)
{
  for (double v : b.as_array()) {
    out << ' ' << format_real(v);
  }
}

template <typename T>
std::vector<T> load_with(const std::filesystem::path& path,
                         std::vector<T> (*reader)(std::istream&, const std::string&))
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path.string(), 0, "cannot open file");
  }
  return reader(in, path.string());
}

}  // namespace

std::string format_real(double v)
{
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.9g", v == 0.0 ? 0.0 : v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::vector<Detection> read_detections(std::istream& in, const std::string& source)
{
  RecordReader r(in, source, kDetsHeader);
  std::vector<Detection> out;
  FrameIndex prev = 0;
  bool have_prev = false;
  Line line;
  while (r.next(line)) {
    check_field_count(r, line, 9, true);
    Detection d;
    d.frame = r.integer(line, 0);
    d.score = r.real(line, 1);
    if (d.score < 0.0 || d.score > 1.0) {
      r.fail(line.number, "score must lie in [0, 1]");
    }
    d.box = r.box(line, 2);
    check_ascending(r, line, d.frame, prev, have_prev);
    out.push_back(d);
  }
  return out;
}

std::vector<TrackBox> read_tracks(std::istream& in, const std::string& source)
{
  RecordReader r(in, source, kTracksHeader);
  std::vector<TrackBox> out;
  std::set<std::pair<FrameIndex, TrackId>> seen;
  FrameIndex prev = 0;
  bool have_prev = false;
  Line line;
  while (r.next(line)) {
    check_field_count(r, line, 10, false);
    TrackBox t;
    t.frame = r.integer(line, 0);
    t.track_id = r.integer(line, 1);
    if (t.track_id <= 0) {
      r.fail(line.number, "track id must be positive");
    }
    t.score = r.real(line, 2);
    t.box = r.box(line, 3);
    check_ascending(r, line, t.frame, prev, have_prev);
    if (!seen.emplace(t.frame, t.track_id).second) {
      r.fail(line.number, "duplicate (frame, track_id)");
    }
    out.push_back(t);
  }
  return out;
}

std::vector<GtBox> read_gt(std::istream& in, const std::string& source)
{
  RecordReader r(in, source, kGtHeader);
  std::vector<GtBox> out;
  std::set<std::pair<FrameIndex, ObjectId>> seen;
  FrameIndex prev = 0;
  bool have_prev = false;
  Line line;
  while (r.next(line)) {
    check_field_count(r, line, 10, false);
    GtBox g;
    g.frame = r.integer(line, 0);
    g.object_id = r.integer(line, 1);
    const auto visible = r.integer(line, 2);
    if (visible != 0 && visible != 1) {
      r.fail(line.number, "visible must be 0 or 1");
    }
    g.visible = visible == 1;
    g.box = r.box(line, 3);
    check_ascending(r, line, g.frame, prev, have_prev);
    if (!seen.emplace(g.frame, g.object_id).second) {
      r.fail(line.number, "duplicate (frame, object_id)");
    }
    out.push_back(g);
  }
  return out;
}

void write_detections(std::ostream& out, const std::vector<Detection>& dets,
                      const std::vector<std::string>& comments)
{
  out << kDetsHeader << '\n';
  for (const auto& c : comments) {
    out << "# " << c << '\n';
  }
  for (const auto& d : dets) {
    out << d.frame << ' ' << format_real(d.score);
    write_box(out, d.box);
    out << '\n';
  }
}

void write_tracks(std::ostream& out, const std::vector<TrackBox>& tracks)
{
  out << kTracksHeader << '\n';
  for (const auto& t : tracks) {
    out << t.frame << ' ' << t.track_id << ' ' << format_real(t.score);
    write_box(out, t.box);
    out << '\n';
  }
}

void write_gt(std::ostream& out, const std::vector<GtBox>& gt, const std::vector<std::string>& comments)
{
  out << kGtHeader << '\n';
  for (const auto& c : comments) {
    out << "# " << c << '\n';
  }
  for (const auto& g : gt) {
    out << g.frame << ' ' << g.object_id << ' ' << (g.visible ? 1 : 0);
    write_box(out, g.box);
    out << '\n';
  }
}

std::vector<Detection> load_detections(const std::filesystem::path& path)
{
  return load_with<Detection>(path, &read_detections);
}

std::vector<TrackBox> load_tracks(const std::filesystem::path& path)
{
  return load_with<TrackBox>(path, &read_tracks);
}

std::vector<GtBox> load_gt(const std::filesystem::path& path)
{
  return load_with<GtBox>(path, &read_gt);
}

std::vector<TrackBox> to_track_boxes(const std::vector<FrameResult>& results)
{
  std::vector<TrackBox> out;
  for (const auto& r : results) {
    for (const auto& o : r.outputs) {
      out.push_back({r.frame, o.id, o.score, o.box});
    }
  }
  return out;
}

FrameStream group_by_frame(const std::vector<Detection>& dets)
{
  FrameStream stream;
  if (dets.empty()) {
    return stream;
  }
  stream.first_frame = dets.front().frame;
  for (const auto& d : dets) {
    if (d.frame < stream.first_frame + static_cast<FrameIndex>(stream.frames.size()) - 1) {
      throw ConsistencyError("detections are not frame-ascending at frame " + std::to_string(d.frame));
    }
    const auto slot = static_cast<std::size_t>(d.frame - stream.first_frame);
    if (slot >= stream.frames.size()) {
      stream.frames.resize(slot + 1);
    }
    stream.frames[slot].push_back(d);
  }
  return stream;
}

}  // namespace immortal
