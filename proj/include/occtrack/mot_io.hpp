#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "occtrack/records.hpp"
#include "occtrack/sim.hpp"
#include "occtrack/tracker.hpp"

namespace occtrack {

/// Reads MOT-format rows:
///   frame,id,bb_left,bb_top,bb_width,bb_height,conf[,class[,visibility]]
/// Frames are 1-based in the file and kept as-is on the records. A class
/// field of -1 (result files) maps to class 0. Throws ParseError with the
/// offending line number, or NonPositiveBox for degenerate boxes.
std::vector<TrackRecord> parse_mot(const std::string& path);

/// Writes records sorted by (frame, id) in the result-file layout
/// `frame,id,left,top,width,height,score,-1,-1,-1`, one trailing newline.
/// The sort is stable so same-key rows keep their input order (embedding
/// sidecars index detections by row order within a frame).
void write_mot(const std::vector<TrackRecord>& records, const std::string& path);

/// Ground-truth layout: `frame,id,left,top,width,height,1,class,1`.
void write_mot_gt(const std::vector<TrackRecord>& records,
                  const std::string& path);

/// Embedding sidecar: header `# dim=<d>`, rows `frame,det_index,v0,...,v{d-1}`
/// with det_index matching the order of that frame's detection rows (0-based).
/// Vectors are normalized on load.
struct EmbeddingTable {
  int dim{0};
  std::map<std::pair<int, int>, Eigen::VectorXd> vectors;  // (frame, det idx)
};

EmbeddingTable parse_embeddings(const std::string& path);
void write_embeddings(const EmbeddingTable& table, const std::string& path);

/// Flat key=value config overlays ('#' comments allowed). Unknown keys throw
/// InvalidConfig; values are validated after applying.
TrackerParams parse_tracker_config(const std::string& path,
                                   TrackerParams base = {});
ScenarioConfig parse_scenario_config(const std::string& path,
                                     ScenarioConfig base = {});

/// Detections grouped per frame with embeddings attached from the sidecar,
/// ready to feed the tracker. Keys are the file's 1-based frame numbers.
std::map<int, std::vector<Detection>> group_detections(
    const std::vector<TrackRecord>& rows, const EmbeddingTable* embeddings);

}  // namespace occtrack
