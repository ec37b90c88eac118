#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "immortal/commands.hpp"
#include "immortal/io.hpp"
#include "immortal/simulate.hpp"

namespace fs = std::filesystem;

namespace
{

struct CliResult
{
  int code = 0;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("immortal_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const
  {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static std::string read(const std::string& p)
  {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static CliResult run(std::vector<std::string> args)
  {
    args.insert(args.begin(), "immortal");
    std::vector<const char*> argv;
    for (const auto& a : args) {
      argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = immortal::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
  }

  // A small occlusion-heavy scenario.
  std::string small_config() const
  {
    return write("small.cfg",
                 "[simulate]\nseed = 3\nnum_objects = 8\nnum_frames = 80\nextent = 60\n");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, UsageErrors)
{
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"track", "--dets", path("missing.txt")}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, SimulateIsDeterministicAndParsesBack)
{
  const auto cfg = small_config();
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dets", path("d1"), "--out-gt", path("g1")}).code, 0);
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dets", path("d2"), "--out-gt", path("g2")}).code, 0);
  EXPECT_EQ(read(path("d1")), read(path("d2")));
  EXPECT_EQ(read(path("g1")), read(path("g2")));
  EXPECT_NE(read(path("d1")).find(immortal::ScenarioRng::kAlgorithm), std::string::npos);

  const auto dets = immortal::load_detections(path("d1"));
  const auto gt = immortal::load_gt(path("g1"));
  EXPECT_EQ(gt.size(), 8u * 80u);
  EXPECT_FALSE(dets.empty());
  std::ostringstream rewritten;
  immortal::write_gt(rewritten, gt, {std::string("rng=") + immortal::ScenarioRng::kAlgorithm + " seed=3"});
  EXPECT_EQ(rewritten.str(), read(path("g1")));
}

TEST_F(CliTest, SimulateWithNoObjectsWritesHeaderOnlyFiles)
{
  const auto cfg = write("none.cfg", "simulate.num_objects = 0\nsimulate.fp_rate = 0\n");
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dets", path("d"), "--out-gt", path("g")}).code, 0);
  EXPECT_TRUE(immortal::load_detections(path("d")).empty());
  EXPECT_TRUE(immortal::load_gt(path("g")).empty());
  EXPECT_EQ(read(path("d")).rfind(immortal::kDetsHeader, 0), 0u);
}

TEST_F(CliTest, TrackEmptyFile)
{
  const auto dets = write("empty.txt", std::string(immortal::kDetsHeader) + "\n");
  const auto r = run({"track", "--dets", dets, "--out", path("tracks.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(read(path("tracks.txt")), std::string(immortal::kTracksHeader) + "\n");
  EXPECT_NE(r.err.find("tracklets_created=0"), std::string::npos);
}

TEST_F(CliTest, TrackNoiselessSingleObject)
{
  const auto cfg = write("one.cfg",
                         "[simulate]\nnum_objects = 1\nnum_frames = 50\nocclusion_prob = 0\npos_sigma = 0\n"
                         "yaw_sigma = 0\nsize_sigma = 0\ndropout = 0\nfp_rate = 0\n");
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dets", path("d"), "--out-gt", path("g")}).code, 0);
  ASSERT_EQ(run({"track", "--dets", path("d"), "--config", cfg, "--out", path("t")}).code, 0);
  const auto tracks = immortal::load_tracks(path("t"));
  ASSERT_EQ(tracks.size(), 50u);
  for (const auto& t : tracks) {
    EXPECT_EQ(t.track_id, 1);
  }
}

TEST_F(CliTest, TrackRejectsBadInput)
{
  const std::string header = std::string(immortal::kDetsHeader) + "\n";
  const auto bad = write("bad.txt", header + "0 0.9 1 2 0 0 4 2 1.5\n1 0.9 1 2 0 0 4 2\n");
  const auto r = run({"track", "--dets", bad, "--out", path("t")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.txt:3:"), std::string::npos) << r.err;

  const auto unordered = write("unordered.txt", header + "4 0.9 1 2 0 0 4 2 1.5\n2 0.9 1 2 0 0 4 2 1.5\n");
  EXPECT_EQ(run({"track", "--dets", unordered, "--out", path("t")}).code, 2);

  const auto bad_cfg = write("bad.cfg", "[tracker]\n\nhits = 2\n");
  const auto c = run({"track", "--dets", unordered, "--config", bad_cfg, "--out", path("t")});
  EXPECT_EQ(c.code, 1);
  EXPECT_NE(c.err.find("bad.cfg:3:"), std::string::npos) << c.err;
}

TEST_F(CliTest, EvalReports)
{
  std::string gt = std::string(immortal::kGtHeader) + "\n";
  std::string same = std::string(immortal::kTracksHeader) + "\n";
  std::string split = same;
  for (int f = 1; f <= 10; ++f) {
    const std::string box = std::to_string(f) + " 0 0.75 0 4 2 1.5\n";
    gt += std::to_string(f) + " 1 1 " + box;
    same += std::to_string(f) + " 1 0.9 " + box;
    split += std::to_string(f) + (f <= 5 ? " 1" : " 2") + " 0.9 " + box;
  }
  const auto gt_path = write("gt.txt", gt);

  const auto exact = run({"eval", "--gt", gt_path, "--tracks", write("same.txt", same), "--json", path("r.json")});
  EXPECT_EQ(exact.code, 0);
  EXPECT_NE(exact.out.find("mota=1.000000\n"), std::string::npos) << exact.out;
  const auto json = nlohmann::json::parse(read(path("r.json")));
  EXPECT_EQ(json.at("mota").get<double>(), 1.0);
  EXPECT_EQ(json.at("num_gt").get<int>(), 10);

  const auto s = run({"eval", "--gt", gt_path, "--tracks", write("split.txt", split)});
  EXPECT_NE(s.out.find("mismatch_pct=0.100000\n"), std::string::npos) << s.out;
  EXPECT_NE(s.out.find("mota=0.900000\n"), std::string::npos);
  EXPECT_NE(s.out.find("ids=1\n"), std::string::npos);
  EXPECT_NE(s.out.find("ids_early_termination=1\n"), std::string::npos);
  EXPECT_NE(s.out.find("ids_wrong_association=0\n"), std::string::npos);

  const auto empty = run({"eval", "--gt", gt_path, "--tracks", write("none.txt", std::string(immortal::kTracksHeader) + "\n")});
  EXPECT_NE(empty.out.find("miss_pct=1.000000\n"), std::string::npos);
  EXPECT_NE(empty.out.find("mota=0.000000\n"), std::string::npos);

  const auto outside = write("outside.txt", std::string(immortal::kTracksHeader) + "\n11 1 0.9 11 0 0.75 0 4 2 1.5\n");
  EXPECT_EQ(run({"eval", "--gt", gt_path, "--tracks", outside}).code, 2);
}

TEST_F(CliTest, AblateUnknownKeyListsValidKeys)
{
  const auto cfg = small_config();
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dets", path("d"), "--out-gt", path("g")}).code, 0);
  const auto r = run({"ablate", "--dets", path("d"), "--gt", path("g"), "--sweep", "speed=1,2"});
  EXPECT_EQ(r.code, 1);
  for (const char* key : {"a_max", "m_hits", "gate", "nms_iou"}) {
    EXPECT_NE(r.err.find(key), std::string::npos) << r.err;
  }
  EXPECT_EQ(run({"ablate", "--dets", path("d"), "--gt", path("g"), "--sweep", "gate=0.1,x"}).code, 1);
}

TEST_F(CliTest, AblateSingleValueMatchesEval)
{
  const auto cfg = small_config();
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dets", path("d"), "--out-gt", path("g")}).code, 0);
  const auto table = run({"ablate", "--dets", path("d"), "--gt", path("g"), "--config", cfg, "--sweep", "gate=0.3",
                          "--plot", path("plot.txt")});
  ASSERT_EQ(table.code, 0) << table.err;

  const auto tuned = write("tuned.cfg", read(cfg) + "[association]\ngate = 0.3\n");
  ASSERT_EQ(run({"track", "--dets", path("d"), "--config", tuned, "--out", path("t")}).code, 0);
  const auto eval = run({"eval", "--gt", path("g"), "--tracks", path("t"), "--config", tuned});
  ASSERT_EQ(eval.code, 0);

  auto value = [](const std::string& report, const std::string& key) {
    const auto at = report.find(key + "=");
    return report.substr(at + key.size() + 1, report.find('\n', at) - at - key.size() - 1);
  };
  std::istringstream row(table.out.substr(table.out.find('\n') + 1));
  std::string x, mota, fp, miss, mm, ids;
  row >> x >> mota >> fp >> miss >> mm >> ids;
  EXPECT_EQ(x, "0.3");
  EXPECT_EQ(mota, value(eval.out, "mota"));
  EXPECT_EQ(fp, value(eval.out, "fp_pct"));
  EXPECT_EQ(miss, value(eval.out, "miss_pct"));
  EXPECT_EQ(mm, value(eval.out, "mismatch_pct"));
  EXPECT_EQ(ids, value(eval.out, "ids"));
  EXPECT_EQ(read(path("plot.txt")), "# gate mismatch_pct mota\n0.3 " + mm + " " + mota + "\n");
}

TEST_F(CliTest, AblateMinimumHitsIsFlatOnCleanData)
{
  const auto cfg = write("clean.cfg",
                         "[simulate]\nseed = 5\nnum_objects = 10\nnum_frames = 500\nextent = 80\n"
                         "occlusion_prob = 0\ndropout = 0\nfp_rate = 0\n");
  ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dets", path("d"), "--out-gt", path("g")}).code, 0);
  const auto r = run({"ablate", "--dets", path("d"), "--gt", path("g"), "--config", cfg, "--sweep", "m_hits=0,1,2,3",
                      "--plot", path("plot.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream plot(read(path("plot.txt")));
  std::string header;
  std::getline(plot, header);
  double lo = 1.0, hi = -1.0, x = 0, mm = 0, mota = 0;
  int rows = 0;
  while (plot >> x >> mm >> mota) {
    lo = std::min(lo, mota);
    hi = std::max(hi, mota);
    ++rows;
  }
  EXPECT_EQ(rows, 4);
  // m_hits = 3 hides each object's first two frames: 2 / 500 = 0.004 of MOTA
  // at most, under the 0.5 percentage-point tolerance.
  EXPECT_LT(hi - lo, 0.005);
}
