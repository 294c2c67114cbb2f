#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "occtrack/errors.hpp"
#include "occtrack/mot_io.hpp"
#include "occtrack/png_io.hpp"

using namespace occtrack;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("occtrack_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("parse_mot reads gt-style rows") {
  TempDir dir;
  const auto path = dir.file("gt.txt");
  write_text(path, "1,3,10,20,30,40,1,1,1\n2,3,11,21,30,40,1,1,1\n");
  const auto records = parse_mot(path);
  REQUIRE(records.size() == 2);
  CHECK(records[0].frame == 1);
  CHECK(records[0].id == 3);
  CHECK(records[0].bbox.x == 10.0);
  CHECK(records[0].bbox.y == 20.0);
  CHECK(records[0].bbox.w == 30.0);
  CHECK(records[0].bbox.h == 40.0);
  CHECK(records[0].class_id == 1);
}

TEST_CASE("parse_mot maps result-file class -1 to 0 and accepts 10 fields") {
  TempDir dir;
  const auto path = dir.file("pred.txt");
  write_text(path, "4,7,1.5,2.5,3.5,4.5,0.8750,-1,-1,-1\n");
  const auto records = parse_mot(path);
  REQUIRE(records.size() == 1);
  CHECK(records[0].frame == 4);
  CHECK(records[0].score == 0.875);
  CHECK(records[0].class_id == 0);
}

TEST_CASE("parse_mot on an empty file yields an empty list") {
  TempDir dir;
  const auto path = dir.file("empty.txt");
  write_text(path, "");
  CHECK(parse_mot(path).empty());
}

TEST_CASE("parse errors carry line numbers; degenerate boxes are rejected") {
  TempDir dir;
  const auto bad = dir.file("bad.txt");
  write_text(bad, "1,1,0,0,5,5,1\nnot,numbers,a,b,c,d,e\n");
  try {
    parse_mot(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line_number == 2);
  }

  const auto flat = dir.file("flat.txt");
  write_text(flat, "1,3,10,20,0,40,1,1,1\n");
  CHECK_THROWS_AS(parse_mot(flat), NonPositiveBox);

  const auto missing = dir.file("missing.txt");
  write_text(missing, "1,1,2,3\n");
  CHECK_THROWS_AS(parse_mot(missing), ParseError);

  CHECK_THROWS_AS(parse_mot(dir.file("does_not_exist.txt")), ParseError);
}

TEST_CASE("write -> parse -> write is byte-stable") {
  TempDir dir;
  std::vector<TrackRecord> records = {
      {2, 5, BBox{1.25, 2.5, 3.75, 4.0}, 0.5, 0},
      {1, 9, BBox{10.0, 20.0, 30.0, 40.0}, 1.0, 0},
      {1, 2, BBox{0.123456, 7.0, 8.0, 9.0}, 0.25, 0},
  };
  const auto first = dir.file("a.txt");
  const auto second = dir.file("b.txt");
  write_mot(records, first);
  write_mot(parse_mot(first), second);
  const std::string text_a = read_text(first);
  const std::string text_b = read_text(second);
  CHECK(text_a == text_b);
  CHECK(!text_a.empty());
  CHECK(text_a.back() == '\n');

  // writer normalizes line order by (frame, id)
  const auto parsed = parse_mot(first);
  CHECK(parsed[0].frame == 1);
  CHECK(parsed[0].id == 2);
  CHECK(parsed[1].id == 9);
  CHECK(parsed[2].frame == 2);
}

TEST_CASE("embeddings sidecar round-trips and normalizes on load") {
  TempDir dir;
  const auto path = dir.file("embs.txt");
  write_text(path, "# dim=2\n1,0,1,0\n1,1,3,4\n");
  const auto table = parse_embeddings(path);
  CHECK(table.dim == 2);
  REQUIRE(table.vectors.size() == 2);
  const auto& v = table.vectors.at({1, 1});
  CHECK(v(0) == doctest::Approx(0.6));
  CHECK(v(1) == doctest::Approx(0.8));

  const auto out = dir.file("embs_out.txt");
  write_embeddings(table, out);
  const auto again = parse_embeddings(out);
  CHECK(again.dim == 2);
  CHECK((again.vectors.at({1, 1}) - v).norm() < 1e-12);
}

TEST_CASE("embedding rows with the wrong arity or no header fail") {
  TempDir dir;
  const auto short_row = dir.file("short.txt");
  write_text(short_row, "# dim=2\n1,0,1\n");
  CHECK_THROWS_AS(parse_embeddings(short_row), ParseError);

  const auto no_header = dir.file("no_header.txt");
  write_text(no_header, "1,0,1,0\n");
  CHECK_THROWS_AS(parse_embeddings(no_header), ParseError);

  const auto dup = dir.file("dup.txt");
  write_text(dup, "# dim=1\n1,0,1\n1,0,2\n");
  CHECK_THROWS_AS(parse_embeddings(dup), ParseError);
}

TEST_CASE("group_detections aligns embeddings by frame and row order") {
  TempDir dir;
  const auto dets_path = dir.file("dets.txt");
  write_text(dets_path,
             "1,-1,0,0,10,10,0.9,-1,-1,-1\n"
             "1,-1,50,0,10,10,0.8,-1,-1,-1\n"
             "2,-1,1,0,10,10,0.7,-1,-1,-1\n");
  const auto embs_path = dir.file("embs.txt");
  write_text(embs_path, "# dim=2\n1,0,1,0\n1,1,0,1\n2,0,0.7071,0.7071\n");

  const auto table = parse_embeddings(embs_path);
  const auto grouped = group_detections(parse_mot(dets_path), &table);
  REQUIRE(grouped.size() == 2);
  REQUIRE(grouped.at(1).size() == 2);
  CHECK((*grouped.at(1)[0].embedding)(0) == doctest::Approx(1.0));
  CHECK((*grouped.at(1)[1].embedding)(1) == doctest::Approx(1.0));
  CHECK(grouped.at(2)[0].embedding.has_value());
  CHECK(grouped.at(1)[0].score == 0.9);
}

TEST_CASE("tracker config files override defaults and reject junk") {
  TempDir dir;
  const auto path = dir.file("tracker.cfg");
  write_text(path,
             "# comment\n"
             "s_init = 0.5\n"
             "s_high=0.3\n"
             "use_calibration = true\n"
             "epsilon = 0.2\n");
  const TrackerParams p = parse_tracker_config(path);
  CHECK(p.s_init == 0.5);
  CHECK(p.s_high == 0.3);
  CHECK(p.s_low == 0.05);  // untouched default
  CHECK(p.use_calibration);
  CHECK(p.calibration_epsilon == 0.2);

  const auto unknown = dir.file("unknown.cfg");
  write_text(unknown, "wibble = 3\n");
  CHECK_THROWS_AS(parse_tracker_config(unknown), InvalidConfig);

  const auto invalid = dir.file("invalid.cfg");
  write_text(invalid, "s_low = 0.9\n");
  CHECK_THROWS_AS(parse_tracker_config(invalid), InvalidConfig);
}

TEST_CASE("scenario config files parse occluder lists") {
  TempDir dir;
  const auto path = dir.file("scenario.cfg");
  write_text(path,
             "num_agents = 3\n"
             "num_frames = 20\n"
             "seed = 42\n"
             "occluder = 10,20,30,40\n"
             "occluder = 50,60,70,80\n");
  const ScenarioConfig cfg = parse_scenario_config(path);
  CHECK(cfg.num_agents == 3);
  CHECK(cfg.num_frames == 20);
  CHECK(cfg.seed == 42);
  REQUIRE(cfg.occluders.size() == 2);
  CHECK(cfg.occluders[1].x == 50.0);

  const auto bad = dir.file("bad.cfg");
  write_text(bad, "occluder = 1,2,3\n");
  CHECK_THROWS_AS(parse_scenario_config(bad), ParseError);
}

TEST_CASE("png round-trips images and masks") {
  TempDir dir;
  Image img(17, 9);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c)
        img.at(x, y, c) = static_cast<std::uint8_t>((x * 31 + y * 7 + c) % 256);
  const auto img_path = dir.file("img.png");
  write_png(img, img_path);
  const Image back = read_png(img_path);
  REQUIRE(back.width == 17);
  REQUIRE(back.height == 9);
  CHECK(back.data == img.data);

  OcclusionMask mask(17, 9, 1);
  mask.at(3, 4) = 0;
  mask.at(10, 2) = 0;
  const auto mask_path = dir.file("mask.png");
  write_mask_png(mask, mask_path);
  const OcclusionMask mask_back = read_mask_png(mask_path);
  CHECK(mask_back.data == mask.data);

  CHECK_THROWS_AS(read_png(dir.file("nope.png")), ParseError);
}
