#include "occtrack/sim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "occtrack/errors.hpp"
#include "occtrack/rng.hpp"

namespace occtrack {

void ScenarioConfig::validate() const {
  if (num_agents <= 0 || num_frames <= 0) {
    throw InvalidConfig("scenario: need positive agent and frame counts");
  }
  if (arena_width <= agent_width || arena_height <= agent_height ||
      agent_width <= 0.0 || agent_height <= 0.0) {
    throw InvalidConfig("scenario: agents must fit inside the arena");
  }
  if (drop_prob < 0.0 || drop_prob > 1.0 || occlusion_score < 0.0 ||
      occlusion_score > 1.0) {
    throw InvalidConfig("scenario: probabilities must lie in [0, 1]");
  }
  if (embedding_dim <= 0 || sigma_box < 0.0 || sigma_embedding < 0.0 ||
      speed_max < 0.0) {
    throw InvalidConfig("scenario: bad noise or speed settings");
  }
  for (const auto& occ : occluders) {
    if (!occ.valid()) throw InvalidConfig("scenario: invalid occluder box");
  }
}

namespace {

Eigen::VectorXd random_unit(Rng& rng, int dim) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.gaussian(0.0, 1.0);
  const double n = v.norm();
  return n > 0.0 ? Eigen::VectorXd(v / n) : random_unit(rng, dim);
}

// Agent prototypes plus one occluder prototype, all pairwise dissimilar.
std::vector<Eigen::VectorXd> sample_prototypes(Rng& rng, int count, int dim) {
  constexpr int kMaxRounds = 1000;
  for (int round = 0; round < kMaxRounds; ++round) {
    std::vector<Eigen::VectorXd> protos;
    protos.reserve(count);
    for (int i = 0; i < count; ++i) protos.push_back(random_unit(rng, dim));
    bool ok = true;
    for (int i = 0; i < count && ok; ++i)
      for (int j = i + 1; j < count && ok; ++j)
        ok = protos[i].dot(protos[j]) < 0.5;
    if (ok) return protos;
  }
  throw InvalidConfig("scenario: embedding dim too small for distinct prototypes");
}

struct AgentState {
  double cx, cy, vx, vy;
};

// One reflective Euler step; velocity flips where the box would leave the
// arena.
void advance(AgentState& a, const ScenarioConfig& cfg) {
  const double half_w = 0.5 * cfg.agent_width;
  const double half_h = 0.5 * cfg.agent_height;
  a.cx += a.vx;
  a.cy += a.vy;
  if (a.cx < half_w) {
    a.cx = 2.0 * half_w - a.cx;
    a.vx = -a.vx;
  } else if (a.cx > cfg.arena_width - half_w) {
    a.cx = 2.0 * (cfg.arena_width - half_w) - a.cx;
    a.vx = -a.vx;
  }
  if (a.cy < half_h) {
    a.cy = 2.0 * half_h - a.cy;
    a.vy = -a.vy;
  } else if (a.cy > cfg.arena_height - half_h) {
    a.cy = 2.0 * (cfg.arena_height - half_h) - a.cy;
    a.vy = -a.vy;
  }
}

}  // namespace

Scenario generate(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  const auto protos =
      sample_prototypes(rng, cfg.num_agents + 1, cfg.embedding_dim);
  const Eigen::VectorXd& occluder_proto = protos.back();

  std::vector<AgentState> agents(cfg.num_agents);
  for (auto& a : agents) {
    a.cx = rng.uniform(0.5 * cfg.agent_width,
                       cfg.arena_width - 0.5 * cfg.agent_width);
    a.cy = rng.uniform(0.5 * cfg.agent_height,
                       cfg.arena_height - 0.5 * cfg.agent_height);
    const double speed = rng.uniform(0.4 * cfg.speed_max, cfg.speed_max);
    const double heading = rng.uniform(0.0, 2.0 * M_PI);
    a.vx = speed * std::cos(heading);
    a.vy = speed * std::sin(heading);
  }

  Scenario out;
  out.detections.resize(cfg.num_frames);

  for (int frame = 1; frame <= cfg.num_frames; ++frame) {
    for (int i = 0; i < cfg.num_agents; ++i) {
      if (frame > 1) advance(agents[i], cfg);
      const AgentState& a = agents[i];
      const BBox gt_box{a.cx - 0.5 * cfg.agent_width,
                        a.cy - 0.5 * cfg.agent_height, cfg.agent_width,
                        cfg.agent_height};
      out.ground_truth.push_back({frame, i + 1, gt_box, 1.0, 0});

      bool occluded = false;
      for (const auto& occ : cfg.occluders) {
        if (iou(gt_box, occ) > kOcclusionIou) {
          occluded = true;
          break;
        }
      }

      if (occluded && rng.uniform() < cfg.drop_prob) continue;

      Detection det;
      det.bbox = BBox{gt_box.x + rng.gaussian(0.0, cfg.sigma_box),
                      gt_box.y + rng.gaussian(0.0, cfg.sigma_box),
                      std::max(1.0, gt_box.w + rng.gaussian(0.0, cfg.sigma_box)),
                      std::max(1.0, gt_box.h + rng.gaussian(0.0, cfg.sigma_box))};
      det.score = occluded ? cfg.occlusion_score : 1.0;
      det.class_id = 0;

      Eigen::VectorXd e = occluded
                              ? Eigen::VectorXd(0.5 * protos[i] +
                                                0.5 * occluder_proto)
                              : protos[i];
      for (int d = 0; d < cfg.embedding_dim; ++d) {
        e(d) += rng.gaussian(0.0, cfg.sigma_embedding);
      }
      const double n = e.norm();
      det.embedding = n > 0.0 ? Eigen::VectorXd(e / n) : protos[i];

      out.detections[frame - 1].push_back(std::move(det));
    }
  }
  return out;
}

}  // namespace occtrack
