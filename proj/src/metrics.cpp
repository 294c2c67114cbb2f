#include "occtrack/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "occtrack/assignment.hpp"
#include "occtrack/errors.hpp"

namespace occtrack {

namespace {

using FrameMap = std::map<int, std::vector<TrackRecord>>;

struct ClassTotals {
  long long fp = 0, fn = 0, ids = 0, gt_total = 0;
  int mt = 0, ml = 0;
  long long idtp = 0, gt_rows = 0, pred_rows = 0;
};

FrameMap by_frame(const std::vector<TrackRecord>& records, int class_id) {
  FrameMap out;
  for (const auto& r : records) {
    if (r.class_id == class_id) out[r.frame].push_back(r);
  }
  return out;
}

// Per-frame CLEAR accumulation for one class. Correspondences from the
// previous frame are kept while they still overlap enough; the rest are
// matched by Hungarian on IoU distance gated at the threshold.
ClassTotals accumulate_class(const FrameMap& gt_frames,
                             const FrameMap& pred_frames,
                             double iou_threshold) {
  ClassTotals totals;
  const double gate = 1.0 - iou_threshold;

  std::set<int> frames;
  for (const auto& [f, _] : gt_frames) frames.insert(f);
  for (const auto& [f, _] : pred_frames) frames.insert(f);

  std::map<int, int> last_match;       // gt id -> most recent matched pred id
  std::map<int, int> span_frames;      // gt id -> frames present
  std::map<int, int> matched_frames;   // gt id -> frames matched
  std::map<std::pair<int, int>, long long> overlap;  // (gt id, pred id) -> frames

  static const std::vector<TrackRecord> kNone;
  for (int frame : frames) {
    auto git = gt_frames.find(frame);
    auto pit = pred_frames.find(frame);
    const auto& gts = git == gt_frames.end() ? kNone : git->second;
    const auto& preds = pit == pred_frames.end() ? kNone : pit->second;

    totals.gt_total += static_cast<long long>(gts.size());
    totals.gt_rows += static_cast<long long>(gts.size());
    totals.pred_rows += static_cast<long long>(preds.size());
    for (const auto& g : gts) span_frames[g.id] += 1;

    // Identity-overlap counts feed the global IDF1 matching.
    for (const auto& g : gts) {
      for (const auto& p : preds) {
        if (iou(g.bbox, p.bbox) >= iou_threshold) overlap[{g.id, p.id}] += 1;
      }
    }

    std::vector<char> gt_done(gts.size(), 0), pred_done(preds.size(), 0);
    std::size_t matched = 0;

    // Continuity: keep last frame's correspondence while it still holds.
    for (std::size_t i = 0; i < gts.size(); ++i) {
      auto lm = last_match.find(gts[i].id);
      if (lm == last_match.end()) continue;
      for (std::size_t j = 0; j < preds.size(); ++j) {
        if (pred_done[j] || preds[j].id != lm->second) continue;
        if (iou(gts[i].bbox, preds[j].bbox) >= iou_threshold) {
          gt_done[i] = 1;
          pred_done[j] = 1;
          matched_frames[gts[i].id] += 1;
          ++matched;
        }
        break;
      }
    }

    std::vector<int> free_gt, free_pred;
    for (std::size_t i = 0; i < gts.size(); ++i)
      if (!gt_done[i]) free_gt.push_back(static_cast<int>(i));
    for (std::size_t j = 0; j < preds.size(); ++j)
      if (!pred_done[j]) free_pred.push_back(static_cast<int>(j));

    if (!free_gt.empty() && !free_pred.empty()) {
      CostMatrix costs(static_cast<int>(free_gt.size()),
                       static_cast<int>(free_pred.size()));
      for (int r = 0; r < costs.rows; ++r)
        for (int c = 0; c < costs.cols; ++c)
          costs.at(r, c) =
              iou_distance(gts[free_gt[r]].bbox, preds[free_pred[c]].bbox);

      for (const auto& [r, c] : hungarian(costs, gate).matches) {
        const TrackRecord& g = gts[free_gt[r]];
        const TrackRecord& p = preds[free_pred[c]];
        auto lm = last_match.find(g.id);
        if (lm != last_match.end() && lm->second != p.id) totals.ids += 1;
        last_match[g.id] = p.id;
        matched_frames[g.id] += 1;
        ++matched;
      }
    }

    totals.fn += static_cast<long long>(gts.size()) - matched;
    totals.fp += static_cast<long long>(preds.size()) - matched;
  }

  for (const auto& [gt_id, span] : span_frames) {
    const double ratio = static_cast<double>(matched_frames[gt_id]) / span;
    if (ratio >= 0.8) totals.mt += 1;
    if (ratio <= 0.2) totals.ml += 1;
  }

  // Global identity matching: maximize total overlapping frames across a
  // one-to-one pairing of GT ids with prediction ids.
  std::set<int> gt_ids, pred_ids;
  for (const auto& [key, _] : overlap) {
    gt_ids.insert(key.first);
    pred_ids.insert(key.second);
  }
  if (!gt_ids.empty() && !pred_ids.empty()) {
    const std::vector<int> gl(gt_ids.begin(), gt_ids.end());
    const std::vector<int> pl(pred_ids.begin(), pred_ids.end());
    long long max_overlap = 0;
    for (const auto& [_, count] : overlap)
      max_overlap = std::max(max_overlap, count);

    CostMatrix costs(static_cast<int>(gl.size()), static_cast<int>(pl.size()),
                     static_cast<double>(max_overlap));
    for (int r = 0; r < costs.rows; ++r) {
      for (int c = 0; c < costs.cols; ++c) {
        auto it = overlap.find({gl[r], pl[c]});
        if (it != overlap.end())
          costs.at(r, c) = static_cast<double>(max_overlap - it->second);
      }
    }
    for (const auto& [r, c] : hungarian(costs, kGatedCost).matches) {
      auto it = overlap.find({gl[r], pl[c]});
      if (it != overlap.end()) totals.idtp += it->second;
    }
  }
  return totals;
}

MetricsReport to_report(const ClassTotals& t) {
  MetricsReport r;
  r.fp = t.fp;
  r.fn = t.fn;
  r.ids = t.ids;
  r.mt = t.mt;
  r.ml = t.ml;
  r.gt_total = t.gt_total;
  r.mota = t.gt_total > 0
               ? 1.0 - static_cast<double>(t.fn + t.fp + t.ids) / t.gt_total
               : 0.0;
  const long long denom = t.gt_rows + t.pred_rows;
  r.idf1 = denom > 0 ? 2.0 * static_cast<double>(t.idtp) / denom : 0.0;
  return r;
}

std::set<int> class_ids(const std::vector<TrackRecord>& a,
                        const std::vector<TrackRecord>& b) {
  std::set<int> ids;
  for (const auto& r : a) ids.insert(r.class_id);
  for (const auto& r : b) ids.insert(r.class_id);
  return ids;
}

}  // namespace

MetricsReport evaluate(const std::vector<TrackRecord>& gt,
                       const std::vector<TrackRecord>& pred,
                       double iou_threshold) {
  if (gt.empty()) throw EmptyGroundTruth("evaluate: ground truth is empty");

  ClassTotals pooled;
  MetricsReport report;
  for (int cid : class_ids(gt, pred)) {
    const ClassTotals t = accumulate_class(by_frame(gt, cid),
                                           by_frame(pred, cid), iou_threshold);
    report.per_class[cid] = to_report(t);
    pooled.fp += t.fp;
    pooled.fn += t.fn;
    pooled.ids += t.ids;
    pooled.gt_total += t.gt_total;
    pooled.mt += t.mt;
    pooled.ml += t.ml;
    pooled.idtp += t.idtp;
    pooled.gt_rows += t.gt_rows;
    pooled.pred_rows += t.pred_rows;
  }

  auto per_class = std::move(report.per_class);
  report = to_report(pooled);
  report.per_class = std::move(per_class);
  return report;
}

double idf1(const std::vector<TrackRecord>& gt,
            const std::vector<TrackRecord>& pred, double iou_threshold) {
  return evaluate(gt, pred, iou_threshold).idf1;
}

}  // namespace occtrack
