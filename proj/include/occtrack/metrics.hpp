#pragma once

#include <map>
#include <vector>

#include "occtrack/records.hpp"

namespace occtrack {

/// CLEAR + identity aggregates. mota satisfies
/// mota == 1 - (fn + fp + ids) / gt_total exactly.
struct MetricsReport {
  double mota{0.0};
  double idf1{0.0};
  long long fp{0};
  long long fn{0};
  long long ids{0};
  int mt{0};
  int ml{0};
  long long gt_total{0};
  std::map<int, MetricsReport> per_class;  // empty inside per-class entries
};

/// CLEAR evaluation at the given IoU threshold: per-frame Hungarian matching
/// with continuity preference for the previous frame's correspondence,
/// accumulated per class and pooled. MT/ML use the 80%/20% span conventions.
/// Throws EmptyGroundTruth when gt is empty.
MetricsReport evaluate(const std::vector<TrackRecord>& gt,
                       const std::vector<TrackRecord>& pred,
                       double iou_threshold = 0.5);

/// Identity F1: global one-to-one matching of GT ids to prediction ids that
/// maximizes per-frame id-true-positives, pooled over classes.
double idf1(const std::vector<TrackRecord>& gt,
            const std::vector<TrackRecord>& pred, double iou_threshold = 0.5);

}  // namespace occtrack
