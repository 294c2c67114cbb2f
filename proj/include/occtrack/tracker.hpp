#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "occtrack/geometry.hpp"
#include "occtrack/motion.hpp"
#include "occtrack/records.hpp"

namespace occtrack {

/// Detector output for one frame: box, confidence, class and an optional
/// unit-norm appearance embedding.
struct Detection {
  BBox bbox;
  double score{0.0};
  int class_id{0};
  std::optional<Eigen::VectorXd> embedding;
};

enum class TrackStatus { Tentative, Active, Lost, Removed };

/// A box the track actually observed (creation or matched update).
struct TrackObservation {
  int frame{0};
  BBox bbox;
  double score{0.0};
};

struct Track {
  int track_id{0};
  TrackStatus status{TrackStatus::Tentative};
  KalmanState kstate;
  std::optional<Eigen::VectorXd> embedding;  // EMA-smoothed, unit norm
  int class_id{0};
  int frames_since_update{0};
  int hits{1};
  int last_frame{0};
  bool confirmed{false};  // ever reached Active
  std::vector<TrackObservation> history;
};

struct TrackerParams {
  double s_init{0.35};  ///< minimum score to start a new track
  double s_high{0.25};  ///< high/low score split
  double s_low{0.05};   ///< detections below this are discarded
  double gate_embedding{0.4};
  double gate_iou_high{0.8};
  double gate_iou_low{0.5};
  int max_age{30};  ///< frames a Lost track stays eligible for re-matching
  double ema_momentum{0.9};
  bool use_embeddings{true};
  bool use_calibration{false};
  double calibration_epsilon{0.1};
  double calibration_alpha{0.5};

  /// Throws InvalidConfig when thresholds are out of order or out of range.
  void validate() const;
};

/// Per-step association counts, mostly for logging and tests.
struct StepStats {
  int matched_embedding{0};
  int matched_iou_high{0};
  int matched_iou_low{0};
  int new_tracks{0};
  int removed_tracks{0};
};

/// Two-stage tracking-by-detection state machine. Detections are split by
/// score; high-score ones are associated first by appearance (cosine), then
/// by box overlap; low-score ones are offered to the remaining previously
/// active tracks. Unmatched tracks decay Tentative -> Removed and
/// Active -> Lost -> Removed; unmatched high-score detections above s_init
/// seed new tracks. Association is run independently per class.
///
/// One instance owns one sequence's state; distinct sequences want distinct
/// instances.
class Tracker {
 public:
  explicit Tracker(TrackerParams params = {});

  /// Advances to `frame` (must be strictly increasing) with that frame's
  /// detections. Throws NonMonotonicFrame otherwise.
  StepStats step(const std::vector<Detection>& detections, int frame);

  /// All observations of every confirmed track, sorted by (frame, id).
  std::vector<TrackRecord> flush() const;

  const std::vector<Track>& tracks() const { return live_; }
  const TrackerParams& params() const { return params_; }

  /// Splits detections into high (score >= s_high) and low
  /// (s_low <= score < s_high); the rest are dropped.
  static std::pair<std::vector<Detection>, std::vector<Detection>>
  partition_detections(const std::vector<Detection>& detections,
                       const TrackerParams& params);

 private:
  TrackerParams params_;
  std::vector<Track> live_;
  std::vector<Track> finished_;  // removed after confirmation; kept for flush
  int next_id_{1};
  int last_frame_{0};
  bool started_{false};
};

}  // namespace occtrack
