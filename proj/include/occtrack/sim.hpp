#pragma once

#include <cstdint>
#include <vector>

#include "occtrack/records.hpp"
#include "occtrack/tracker.hpp"

namespace occtrack {

/// Synthetic scenario: constant-velocity agents bouncing in a rectangular
/// arena, observed through box noise, occluder-triggered detection drops,
/// score dampening and embedding corruption.
struct ScenarioConfig {
  int num_agents{10};
  int num_frames{300};
  double arena_width{640.0};
  double arena_height{480.0};
  double agent_width{48.0};
  double agent_height{48.0};
  double speed_max{5.0};       ///< per-frame center displacement bound
  double sigma_box{1.5};       ///< Gaussian noise on box coordinates, pixels
  double drop_prob{0.5};       ///< chance an occluded detection is dropped
  double occlusion_score{0.15};///< score of surviving occluded detections
  int embedding_dim{64};
  double sigma_embedding{0.08};///< Gaussian noise on embeddings before renorm
  std::vector<BBox> occluders;
  std::uint64_t seed{1};

  void validate() const;  ///< throws InvalidConfig
};

struct Scenario {
  std::vector<TrackRecord> ground_truth;            // sorted by (frame, id)
  std::vector<std::vector<Detection>> detections;   // index = frame - 1
};

/// Occlusion trigger: a ground-truth box overlapping an occluder with
/// IoU above this counts as occluded.
inline constexpr double kOcclusionIou = 0.3;

/// Deterministic given cfg.seed. Agent identities are 1-based; frames run
/// 1..num_frames. Agent prototype embeddings are resampled until all
/// pairwise cosine similarities (occluder prototype included) stay below 0.5.
Scenario generate(const ScenarioConfig& cfg);

}  // namespace occtrack
