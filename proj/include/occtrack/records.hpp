#pragma once

#include "occtrack/geometry.hpp"

namespace occtrack {

/// One row of a MOT-format file: an identity-stamped box on a frame.
/// Frames carry the file convention (1-based).
struct TrackRecord {
  int frame{0};
  int id{0};
  BBox bbox;
  double score{1.0};
  int class_id{0};
};

}  // namespace occtrack
