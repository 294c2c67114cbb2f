#include "occtrack/tracker.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "occtrack/assignment.hpp"
#include "occtrack/errors.hpp"
#include "occtrack/transport.hpp"

namespace occtrack {

void TrackerParams::validate() const {
  // s_low == s_high leaves the low band empty, which disables stage 2.
  if (!(0.0 <= s_low && s_low <= s_high && s_high <= 1.0) || s_init < s_high) {
    throw InvalidConfig("tracker params: need 0 <= s_low <= s_high <= 1 and s_init >= s_high");
  }
  if (gate_embedding <= 0.0 || gate_iou_high <= 0.0 || gate_iou_low <= 0.0) {
    throw InvalidConfig("tracker params: gates must be positive");
  }
  if (max_age < 0) throw InvalidConfig("tracker params: max_age must be >= 0");
  if (ema_momentum < 0.0 || ema_momentum > 1.0) {
    throw InvalidConfig("tracker params: ema_momentum must lie in [0, 1]");
  }
  if (calibration_epsilon <= 0.0 || calibration_alpha < 0.0 ||
      calibration_alpha > 1.0) {
    throw InvalidConfig("tracker params: bad calibration settings");
  }
}

namespace {

std::optional<BBox> current_bbox(const Track& t) {
  try {
    return state_to_bbox(t.kstate);
  } catch (const DegenerateState&) {
    return std::nullopt;
  }
}

Eigen::VectorXd ema_embedding(const Eigen::VectorXd& previous,
                              const Eigen::VectorXd& incoming,
                              double momentum) {
  Eigen::VectorXd e = momentum * previous + (1.0 - momentum) * incoming;
  const double norm = e.norm();
  return norm > 1e-12 ? Eigen::VectorXd(e / norm) : incoming;
}

}  // namespace

Tracker::Tracker(TrackerParams params) : params_(params) { params_.validate(); }

std::pair<std::vector<Detection>, std::vector<Detection>>
Tracker::partition_detections(const std::vector<Detection>& detections,
                              const TrackerParams& params) {
  std::vector<Detection> high, low;
  for (const auto& d : detections) {
    if (d.score >= params.s_high) {
      high.push_back(d);
    } else if (d.score >= params.s_low) {
      low.push_back(d);
    }
  }
  return {std::move(high), std::move(low)};
}

StepStats Tracker::step(const std::vector<Detection>& detections, int frame) {
  if (started_ && frame <= last_frame_) {
    throw NonMonotonicFrame("step: frame index must strictly increase");
  }
  started_ = true;
  last_frame_ = frame;

  StepStats stats;

  // Predict every live track into this frame. New tracks created below sit
  // past n_before and take no part in this frame's association.
  const std::size_t n_before = live_.size();
  std::vector<char> was_active(n_before, 0);
  for (std::size_t i = 0; i < n_before; ++i) {
    was_active[i] = live_[i].status == TrackStatus::Active;
    live_[i].kstate = kf_predict(live_[i].kstate);
    live_[i].frames_since_update += 1;
  }

  auto [high, low] = partition_detections(detections, params_);

  std::set<int> classes;
  for (const auto& t : live_) classes.insert(t.class_id);
  for (const auto& d : high) classes.insert(d.class_id);
  for (const auto& d : low) classes.insert(d.class_id);

  std::vector<char> track_matched(n_before, 0);
  std::vector<int> matched_det(n_before, -1);  // index into high/low pools

  for (int cls : classes) {
    std::vector<int> pool;  // stage-1 candidates: every live track of cls
    for (std::size_t i = 0; i < n_before; ++i) {
      if (live_[i].class_id == cls) pool.push_back(static_cast<int>(i));
    }
    std::vector<int> high_idx, low_idx;
    for (std::size_t j = 0; j < high.size(); ++j) {
      if (high[j].class_id == cls) high_idx.push_back(static_cast<int>(j));
    }
    for (std::size_t j = 0; j < low.size(); ++j) {
      if (low[j].class_id == cls) low_idx.push_back(static_cast<int>(j));
    }

    std::vector<char> det_taken(high_idx.size(), 0);

    // Stage 1a: appearance association on high-score detections.
    if (params_.use_embeddings && !pool.empty() && !high_idx.empty()) {
      std::vector<int> emb_tracks, emb_dets;
      for (int i : pool)
        if (live_[i].embedding) emb_tracks.push_back(i);
      for (std::size_t j = 0; j < high_idx.size(); ++j)
        if (high[high_idx[j]].embedding) emb_dets.push_back(static_cast<int>(j));

      CostMatrix costs(static_cast<int>(pool.size()),
                       static_cast<int>(high_idx.size()), kGatedCost);
      if (!emb_tracks.empty() && !emb_dets.empty()) {
        const Eigen::Index dim = live_[emb_tracks[0]].embedding->size();
        EmbeddingSet source(emb_tracks.size(), dim);
        for (std::size_t r = 0; r < emb_tracks.size(); ++r) {
          if (live_[emb_tracks[r]].embedding->size() != dim) {
            throw DimensionMismatch("step: embedding dimensions differ");
          }
          source.row(r) = *live_[emb_tracks[r]].embedding;
        }
        EmbeddingSet target(emb_dets.size(), dim);
        for (std::size_t r = 0; r < emb_dets.size(); ++r) {
          if (high[high_idx[emb_dets[r]]].embedding->size() != dim) {
            throw DimensionMismatch("step: embedding dimensions differ");
          }
          target.row(r) = *high[high_idx[emb_dets[r]]].embedding;
        }

        if (params_.use_calibration) {
          auto [cal_source, cal_target] = calibrate_embeddings(
              source, target, params_.calibration_epsilon,
              params_.calibration_alpha);
          source = std::move(cal_source);
          target = std::move(cal_target);
        }

        std::map<int, int> pool_pos;
        for (std::size_t p = 0; p < pool.size(); ++p) pool_pos[pool[p]] = static_cast<int>(p);
        for (std::size_t r = 0; r < emb_tracks.size(); ++r) {
          for (std::size_t c = 0; c < emb_dets.size(); ++c) {
            costs.at(pool_pos[emb_tracks[r]], emb_dets[c]) = cosine_distance(
                source.row(static_cast<Eigen::Index>(r)).transpose(),
                target.row(static_cast<Eigen::Index>(c)).transpose());
          }
        }
      }

      const AssignmentResult res = hungarian(costs, params_.gate_embedding);
      for (const auto& [r, c] : res.matches) {
        track_matched[pool[r]] = 1;
        matched_det[pool[r]] = high_idx[c];
        det_taken[c] = 1;
        stats.matched_embedding += 1;
      }
    }

    // Stage 1b: box association for the leftovers of stage 1a.
    {
      std::vector<int> rem_tracks, rem_dets;
      for (int i : pool)
        if (!track_matched[i]) rem_tracks.push_back(i);
      for (std::size_t j = 0; j < high_idx.size(); ++j)
        if (!det_taken[j]) rem_dets.push_back(static_cast<int>(j));

      if (!rem_tracks.empty() && !rem_dets.empty()) {
        CostMatrix costs(static_cast<int>(rem_tracks.size()),
                         static_cast<int>(rem_dets.size()), kGatedCost);
        for (std::size_t r = 0; r < rem_tracks.size(); ++r) {
          const auto box = current_bbox(live_[rem_tracks[r]]);
          if (!box) continue;
          for (std::size_t c = 0; c < rem_dets.size(); ++c) {
            costs.at(static_cast<int>(r), static_cast<int>(c)) =
                iou_distance(*box, high[high_idx[rem_dets[c]]].bbox);
          }
        }
        const AssignmentResult res = hungarian(costs, params_.gate_iou_high);
        for (const auto& [r, c] : res.matches) {
          track_matched[rem_tracks[r]] = 1;
          matched_det[rem_tracks[r]] = high_idx[rem_dets[c]];
          det_taken[rem_dets[c]] = 1;
          stats.matched_iou_high += 1;
        }
      }
    }

    // Stage 2: low-score detections against the still-unmatched tracks that
    // entered the frame Active.
    {
      std::vector<int> rem_tracks;
      for (int i : pool)
        if (!track_matched[i] && was_active[i]) rem_tracks.push_back(i);

      if (!rem_tracks.empty() && !low_idx.empty()) {
        CostMatrix costs(static_cast<int>(rem_tracks.size()),
                         static_cast<int>(low_idx.size()), kGatedCost);
        for (std::size_t r = 0; r < rem_tracks.size(); ++r) {
          const auto box = current_bbox(live_[rem_tracks[r]]);
          if (!box) continue;
          for (std::size_t c = 0; c < low_idx.size(); ++c) {
            costs.at(static_cast<int>(r), static_cast<int>(c)) =
                iou_distance(*box, low[low_idx[c]].bbox);
          }
        }
        const AssignmentResult res = hungarian(costs, params_.gate_iou_low);
        for (const auto& [r, c] : res.matches) {
          track_matched[rem_tracks[r]] = 1;
          // Low-pool indices are offset past the high pool.
          matched_det[rem_tracks[r]] =
              static_cast<int>(high.size()) + low_idx[c];
          stats.matched_iou_low += 1;
        }
      }
    }

    // New tracks from unmatched high-score detections.
    for (std::size_t j = 0; j < high_idx.size(); ++j) {
      if (det_taken[j]) continue;
      const Detection& d = high[high_idx[j]];
      if (d.score < params_.s_init) continue;
      Track t;
      t.track_id = next_id_++;
      t.status = TrackStatus::Tentative;
      t.kstate = kf_initiate(d.bbox);
      t.embedding = d.embedding;
      t.class_id = d.class_id;
      t.frames_since_update = 0;
      t.hits = 1;
      t.last_frame = frame;
      t.history.push_back({frame, d.bbox, d.score});
      live_.push_back(std::move(t));
      stats.new_tracks += 1;
    }
  }

  // Commit matches and lifecycle transitions (new tracks sit past the
  // original range and are already settled).
  for (std::size_t i = 0; i < n_before; ++i) {
    Track& t = live_[i];
    if (track_matched[i]) {
      const int det_idx = matched_det[i];
      const Detection& d = det_idx < static_cast<int>(high.size())
                               ? high[det_idx]
                               : low[det_idx - static_cast<int>(high.size())];
      t.kstate = kf_update(t.kstate, d.bbox);
      if (d.embedding) {
        t.embedding = t.embedding ? ema_embedding(*t.embedding, *d.embedding,
                                                  params_.ema_momentum)
                                  : *d.embedding;
      }
      t.status = TrackStatus::Active;
      t.confirmed = true;
      t.frames_since_update = 0;
      t.hits += 1;
      t.last_frame = frame;
      const auto box = current_bbox(t);
      t.history.push_back({frame, box ? *box : d.bbox, d.score});
    } else {
      if (t.status == TrackStatus::Tentative) {
        t.status = TrackStatus::Removed;  // one miss kills an unconfirmed track
      } else {
        t.status = TrackStatus::Lost;
        if (t.frames_since_update > params_.max_age) {
          t.status = TrackStatus::Removed;
        }
      }
    }
  }

  // Archive confirmed removals; drop the rest.
  for (auto& t : live_) {
    if (t.status == TrackStatus::Removed) {
      stats.removed_tracks += 1;
      if (t.confirmed) finished_.push_back(std::move(t));
    }
  }
  std::erase_if(live_,
                [](const Track& t) { return t.status == TrackStatus::Removed; });

  return stats;
}

std::vector<TrackRecord> Tracker::flush() const {
  std::vector<TrackRecord> rows;
  auto emit = [&rows](const Track& t) {
    if (!t.confirmed) return;
    for (const auto& obs : t.history) {
      rows.push_back({obs.frame, t.track_id, obs.bbox, obs.score, t.class_id});
    }
  };
  for (const auto& t : finished_) emit(t);
  for (const auto& t : live_) emit(t);
  std::sort(rows.begin(), rows.end(), [](const TrackRecord& a, const TrackRecord& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
  });
  return rows;
}

}  // namespace occtrack
