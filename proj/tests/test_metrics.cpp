#include <doctest.h>

#include <vector>

#include "occtrack/errors.hpp"
#include "occtrack/metrics.hpp"
#include "occtrack/rng.hpp"

using namespace occtrack;

namespace {

// A straight-line trajectory of `frames` boxes for one id.
std::vector<TrackRecord> line_track(int id, int frames, double x0, double y0,
                                    double step = 10.0, int class_id = 0) {
  std::vector<TrackRecord> rows;
  for (int f = 1; f <= frames; ++f) {
    rows.push_back({f, id, BBox{x0 + step * (f - 1), y0, 8, 8}, 1.0, class_id});
  }
  return rows;
}

std::vector<TrackRecord> concat(std::initializer_list<std::vector<TrackRecord>> lists) {
  std::vector<TrackRecord> out;
  for (const auto& l : lists) out.insert(out.end(), l.begin(), l.end());
  return out;
}

}  // namespace

TEST_CASE("perfect tracking scores MOTA 1 and IDF1 1") {
  const auto gt = concat({line_track(1, 10, 0, 0), line_track(2, 10, 0, 100)});
  const auto report = evaluate(gt, gt, 0.5);
  CHECK(report.mota == doctest::Approx(1.0));
  CHECK(report.idf1 == doctest::Approx(1.0));
  CHECK(report.fp == 0);
  CHECK(report.fn == 0);
  CHECK(report.ids == 0);
  CHECK(report.gt_total == 20);
  CHECK(report.mt == 2);
  CHECK(report.ml == 0);
}

TEST_CASE("empty predictions score MOTA 0 with FN = GT") {
  const auto gt = line_track(1, 7, 0, 0);
  const auto report = evaluate(gt, {}, 0.5);
  CHECK(report.mota == doctest::Approx(0.0));
  CHECK(report.fn == 7);
  CHECK(report.fp == 0);
  CHECK(report.idf1 == doctest::Approx(0.0));
  CHECK(report.ml == 1);
  CHECK(report.mt == 0);
}

TEST_CASE("an id split over a 4-frame trajectory costs one switch") {
  const auto gt = line_track(7, 4, 0, 0);
  std::vector<TrackRecord> pred;
  for (int f = 1; f <= 4; ++f) {
    pred.push_back({f, f <= 2 ? 1 : 2, gt[f - 1].bbox, 1.0, 0});
  }
  const auto report = evaluate(gt, pred, 0.5);
  CHECK(report.ids == 1);
  CHECK(report.fp == 0);
  CHECK(report.fn == 0);
  CHECK(report.mota == doctest::Approx(0.75));
  // IDTP = 2 under the best global id pairing; IDF1 = 2*2/(2*2+2+2).
  CHECK(report.idf1 == doctest::Approx(0.5));
  CHECK(idf1(gt, pred, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("evaluate requires ground truth") {
  CHECK_THROWS_AS(evaluate({}, line_track(1, 3, 0, 0), 0.5), EmptyGroundTruth);
  CHECK_THROWS_AS(idf1({}, line_track(1, 3, 0, 0), 0.5), EmptyGroundTruth);
}

TEST_CASE("one spurious far-away prediction costs exactly one FP") {
  const auto gt = concat({line_track(1, 10, 0, 0), line_track(2, 10, 0, 100)});
  auto pred = gt;
  pred.push_back({5, 99, BBox{5000, 5000, 8, 8}, 1.0, 0});
  const auto report = evaluate(gt, pred, 0.5);
  CHECK(report.fp == 1);
  CHECK(report.fn == 0);
  CHECK(report.ids == 0);
  CHECK(report.mota == doctest::Approx(1.0 - 1.0 / 20.0));
}

TEST_CASE("the mota identity holds on random record sets") {
  Rng rng(401);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TrackRecord> gt, pred;
    const int gt_tracks = 1 + rng.uniform_int(4);
    const int frames = 1 + rng.uniform_int(15);
    for (int id = 1; id <= gt_tracks; ++id) {
      for (int f = 1; f <= frames; ++f) {
        if (rng.uniform() < 0.2) continue;  // holes in the gt span
        gt.push_back({f, id,
                      BBox{rng.uniform(0.0, 200.0), rng.uniform(0.0, 200.0),
                           5 + rng.uniform(0.0, 20.0), 5 + rng.uniform(0.0, 20.0)},
                      1.0, 0});
      }
    }
    if (gt.empty()) continue;
    for (const auto& g : gt) {
      if (rng.uniform() < 0.3) continue;  // misses
      TrackRecord p = g;
      p.id = 1 + rng.uniform_int(6);  // scrambled ids
      p.bbox.x += rng.gaussian(0.0, 4.0);
      p.bbox.y += rng.gaussian(0.0, 4.0);
      pred.push_back(p);
    }
    const auto report = evaluate(gt, pred, 0.5);
    CHECK(report.mota ==
          doctest::Approx(1.0 - static_cast<double>(report.fn + report.fp +
                                                    report.ids) /
                                    report.gt_total)
              .epsilon(1e-12));
    CHECK(report.idf1 >= 0.0);
    CHECK(report.idf1 <= 1.0);
  }
}

TEST_CASE("idf1 is invariant under bijective relabeling of prediction ids") {
  Rng rng(409);
  const auto gt = concat({line_track(1, 8, 0, 0), line_track(2, 8, 0, 50),
                          line_track(3, 8, 0, 120)});
  std::vector<TrackRecord> pred = gt;
  // ids -> ids + 100 with a swap
  for (auto& p : pred) {
    p.id = p.id == 1 ? 102 : (p.id == 2 ? 101 : 103);
  }
  CHECK(idf1(gt, pred, 0.5) == doctest::Approx(idf1(gt, gt, 0.5)));
  const auto report = evaluate(gt, pred, 0.5);
  CHECK(report.ids == 0);
  CHECK(report.mota == doctest::Approx(1.0));
}

TEST_CASE("continuity preference stops flip-flopping between equal overlaps") {
  // Two gt boxes side by side, two steady predictions covering them: the
  // frame-to-frame correspondence must stay put, so no switches accrue.
  std::vector<TrackRecord> gt, pred;
  for (int f = 1; f <= 6; ++f) {
    gt.push_back({f, 1, BBox{0, 0, 10, 10}, 1.0, 0});
    gt.push_back({f, 2, BBox{6, 0, 10, 10}, 1.0, 0});
    pred.push_back({f, 11, BBox{0.5, 0, 10, 10}, 1.0, 0});
    pred.push_back({f, 12, BBox{6.5, 0, 10, 10}, 1.0, 0});
  }
  const auto report = evaluate(gt, pred, 0.3);
  CHECK(report.ids == 0);
  CHECK(report.fn == 0);
  CHECK(report.fp == 0);
}

TEST_CASE("classes are evaluated independently and pooled by gt weight") {
  const auto gt = concat({line_track(1, 10, 0, 0, 10.0, /*class=*/0),
                          line_track(2, 5, 0, 100, 10.0, /*class=*/3)});
  // class 0 tracked perfectly; class 3 completely missed
  const auto pred = line_track(1, 10, 0, 0, 10.0, 0);
  const auto report = evaluate(gt, pred, 0.5);
  CHECK(report.gt_total == 15);
  CHECK(report.fn == 5);
  CHECK(report.mota == doctest::Approx(1.0 - 5.0 / 15.0));
  REQUIRE(report.per_class.count(0) == 1);
  REQUIRE(report.per_class.count(3) == 1);
  CHECK(report.per_class.at(0).mota == doctest::Approx(1.0));
  CHECK(report.per_class.at(3).mota == doctest::Approx(0.0));
  CHECK(report.per_class.at(3).fn == 5);
}

TEST_CASE("mostly-tracked and mostly-lost follow the 80/20 span rule") {
  const auto gt = line_track(1, 10, 0, 0);
  std::vector<TrackRecord> pred;
  for (int f = 1; f <= 8; ++f) pred.push_back({f, 5, gt[f - 1].bbox, 1.0, 0});
  auto report = evaluate(gt, pred, 0.5);
  CHECK(report.mt == 1);  // 8/10 = 0.8 tracked
  CHECK(report.ml == 0);

  pred.resize(2);  // 2/10 = 0.2 -> mostly lost
  report = evaluate(gt, pred, 0.5);
  CHECK(report.mt == 0);
  CHECK(report.ml == 1);
}
