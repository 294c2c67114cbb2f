// occtrack command-line front end: track / eval / simulate / augment / losses.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "occtrack/errors.hpp"
#include "occtrack/geometry.hpp"
#include "occtrack/losses.hpp"
#include "occtrack/metrics.hpp"
#include "occtrack/mot_io.hpp"
#include "occtrack/occlusion.hpp"
#include "occtrack/png_io.hpp"
#include "occtrack/rng.hpp"
#include "occtrack/sim.hpp"
#include "occtrack/tracker.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace occtrack;

namespace {

struct TrackArgs {
  std::string dets, embs, config, out;
};
struct EvalArgs {
  std::string gt, pred, out;
  double iou = 0.5;
};
struct SimulateArgs {
  std::string config, out_dir;
};
struct AugmentArgs {
  std::string image, boxes, out_image, out_mask;
  double tau = 0.1;
  double ratio = 0.5;
  std::uint64_t seed = 1;
};
struct LossesArgs {
  std::string input;
};

int run_track(const TrackArgs& args) {
  TrackerParams params;
  if (!args.config.empty()) params = parse_tracker_config(args.config);

  const auto rows = parse_mot(args.dets);
  EmbeddingTable table;
  const EmbeddingTable* table_ptr = nullptr;
  if (!args.embs.empty()) {
    table = parse_embeddings(args.embs);
    table_ptr = &table;
  }
  const auto by_frame = group_detections(rows, table_ptr);
  const int last_frame = by_frame.empty() ? 0 : by_frame.rbegin()->first;

  Tracker tracker(params);
  static const std::vector<Detection> kNone;
  const auto t0 = std::chrono::steady_clock::now();
  for (int frame = 1; frame <= last_frame; ++frame) {
    auto it = by_frame.find(frame);
    tracker.step(it == by_frame.end() ? kNone : it->second, frame);
  }
  const auto t1 = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(t1 - t0).count();

  write_mot(tracker.flush(), args.out);
  std::cout << "frames: " << last_frame << "  wall: " << seconds
            << " s  fps: " << (seconds > 0 ? last_frame / seconds : 0.0)
            << "\n";
  return 0;
}

json report_to_json(const MetricsReport& r) {
  json j{{"mota", r.mota}, {"idf1", r.idf1},         {"fp", r.fp},
         {"fn", r.fn},     {"ids", r.ids},           {"mt", r.mt},
         {"ml", r.ml},     {"gt_total", r.gt_total}};
  json per_class = json::object();
  for (const auto& [cid, sub] : r.per_class) {
    per_class[std::to_string(cid)] = report_to_json(sub);
  }
  j["per_class"] = per_class;
  return j;
}

int run_eval(const EvalArgs& args) {
  const auto gt = parse_mot(args.gt);
  const auto pred = parse_mot(args.pred);
  const MetricsReport report = evaluate(gt, pred, args.iou);

  if (!args.out.empty()) {
    std::ofstream out(args.out);
    if (!out) throw ParseError(args.out, 0, "cannot open file for writing");
    out << report_to_json(report).dump(2) << "\n";
  }

  auto line = [](const std::string& k, const std::string& v) {
    std::cout << "  " << k << std::string(12 - k.size(), ' ') << v << "\n";
  };
  std::cout << "tracking evaluation\n";
  line("MOTA", std::to_string(report.mota));
  line("IDF1", std::to_string(report.idf1));
  line("FP", std::to_string(report.fp));
  line("FN", std::to_string(report.fn));
  line("IDs", std::to_string(report.ids));
  line("MT", std::to_string(report.mt));
  line("ML", std::to_string(report.ml));
  line("GT", std::to_string(report.gt_total));
  return 0;
}

int run_simulate(const SimulateArgs& args) {
  ScenarioConfig cfg;
  if (!args.config.empty()) cfg = parse_scenario_config(args.config);
  const Scenario scenario = generate(cfg);

  fs::create_directories(args.out_dir);
  const fs::path dir(args.out_dir);
  write_mot_gt(scenario.ground_truth, (dir / "gt.txt").string());

  std::vector<TrackRecord> det_rows;
  EmbeddingTable table;
  table.dim = cfg.embedding_dim;
  for (std::size_t f = 0; f < scenario.detections.size(); ++f) {
    const int frame = static_cast<int>(f) + 1;
    int index = 0;
    for (const auto& d : scenario.detections[f]) {
      det_rows.push_back({frame, -1, d.bbox, d.score, d.class_id});
      if (d.embedding) table.vectors[{frame, index}] = *d.embedding;
      ++index;
    }
  }
  write_mot(det_rows, (dir / "dets.txt").string());
  write_embeddings(table, (dir / "embs.txt").string());
  std::cout << "wrote " << (dir / "gt.txt").string() << ", dets.txt, embs.txt\n";
  return 0;
}

std::vector<BBox> parse_boxes_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<BBox> boxes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find('#') != std::string::npos) line = line.substr(0, line.find('#'));
    std::stringstream ss(line);
    std::string field;
    std::vector<double> vals;
    while (std::getline(ss, field, ',')) {
      if (field.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        vals.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw ParseError(path, line_no, "expected a number, got '" + field + "'");
      }
    }
    if (vals.empty()) continue;
    if (vals.size() != 4) throw ParseError(path, line_no, "expected x,y,w,h");
    const BBox b{vals[0], vals[1], vals[2], vals[3]};
    if (!b.valid()) {
      throw NonPositiveBox(path + ":" + std::to_string(line_no) +
                           ": box width/height must be positive");
    }
    boxes.push_back(b);
  }
  return boxes;
}

int run_augment(const AugmentArgs& args) {
  const Image img = read_png(args.image);
  const auto boxes = parse_boxes_file(args.boxes);
  Rng rng(args.seed);
  const auto [out, mask] = random_erase(img, boxes, args.tau, args.ratio, rng);
  write_png(out, args.out_image);
  write_mask_png(mask, args.out_mask);
  std::cout << "erased " << mask.zero_count() << " px over " << boxes.size()
            << " boxes\n";
  return 0;
}

// losses input: one record per line --
//   bce <logit> <label 0|1>
//   reid <true class index> <p0> <p1> ... <p{K-1}>
//   box <pred x,y,w,h> <gt x,y,w,h>
int run_losses(const LossesArgs& args) {
  std::ifstream in(args.input);
  if (!in) throw ParseError(args.input, 0, "cannot open file");

  LogitBatch batch;
  std::vector<std::vector<double>> reid_rows;
  std::vector<int> reid_labels;
  double l_reg = 0.0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::stringstream ss(line);
    std::string kind;
    if (!(ss >> kind) || kind[0] == '#') continue;
    if (kind == "bce") {
      double logit;
      int label;
      if (!(ss >> logit >> label)) {
        throw ParseError(args.input, line_no, "bce wants <logit> <label>");
      }
      batch.logits.push_back(logit);
      batch.labels.push_back(label);
    } else if (kind == "reid") {
      int label;
      if (!(ss >> label)) {
        throw ParseError(args.input, line_no, "reid wants <label> <p...>");
      }
      std::vector<double> probs;
      double p;
      while (ss >> p) probs.push_back(p);
      if (probs.empty()) {
        throw ParseError(args.input, line_no, "reid wants <label> <p...>");
      }
      reid_rows.push_back(std::move(probs));
      reid_labels.push_back(label);
    } else if (kind == "box") {
      std::string a, b;
      if (!(ss >> a >> b)) {
        throw ParseError(args.input, line_no, "box wants two x,y,w,h tuples");
      }
      auto parse4 = [&](const std::string& s) {
        std::stringstream cs(s);
        std::string f;
        std::vector<double> v;
        while (std::getline(cs, f, ',')) v.push_back(std::stod(f));
        if (v.size() != 4) {
          throw ParseError(args.input, line_no, "box wants x,y,w,h");
        }
        return BBox{v[0], v[1], v[2], v[3]};
      };
      l_reg += ciou_loss(parse4(a), parse4(b));
    } else {
      throw ParseError(args.input, line_no, "unknown record '" + kind + "'");
    }
  }

  double l_reid = 0.0;
  if (!reid_rows.empty()) {
    const std::size_t k = reid_rows[0].size();
    Eigen::MatrixXd probs(reid_rows.size(), k);
    for (std::size_t i = 0; i < reid_rows.size(); ++i) {
      if (reid_rows[i].size() != k) {
        throw InvalidConfig("losses: reid rows must share one class count");
      }
      for (std::size_t j = 0; j < k; ++j) probs(i, j) = reid_rows[i][j];
    }
    l_reid = reid_ce_loss({probs, reid_labels});
  }
  const double l_cls = bce_loss(batch);

  json out{{"l_cls", l_cls},
           {"l_reg", l_reg},
           {"l_reid", l_reid},
           {"l_total", total_loss(l_cls, l_reg, l_reid)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occtrack: occlusion-aware multi-object tracking toolkit"};
  app.require_subcommand(1);

  TrackArgs track_args;
  auto* track = app.add_subcommand(
      "track",
      "Run the two-stage tracker over a detection file.\n"
      "Score threshold defaults: s_init=0.35, s_high=0.25, s_low=0.05.");
  track->add_option("--dets", track_args.dets, "MOT-format detection file")
      ->required();
  track->add_option("--embs", track_args.embs,
                    "embedding sidecar ('# dim=<d>' header)");
  track->add_option(
      "--config", track_args.config,
      "key=value overrides: s_init (default 0.35), s_high (0.25), s_low "
      "(0.05), gate_embedding (0.4), gate_iou_high (0.8), gate_iou_low (0.5), "
      "max_age (30), ema_momentum (0.9), use_embeddings (1), use_calibration "
      "(0), epsilon (0.1), alpha (0.5)");
  track->add_option("--out", track_args.out, "tracking result file")->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "CLEAR metrics for a tracking result");
  eval->add_option("--gt", eval_args.gt, "ground-truth MOT file")->required();
  eval->add_option("--pred", eval_args.pred, "prediction MOT file")->required();
  eval->add_option("--iou", eval_args.iou, "match threshold")
      ->capture_default_str();
  eval->add_option("--out", eval_args.out, "JSON report path");

  SimulateArgs sim_args;
  auto* simulate =
      app.add_subcommand("simulate", "Generate a synthetic tracking scenario");
  simulate->add_option("--config", sim_args.config, "scenario key=value file");
  simulate->add_option("--out-dir", sim_args.out_dir,
                       "directory for gt.txt, dets.txt, embs.txt")
      ->required();

  AugmentArgs aug_args;
  auto* augment = app.add_subcommand(
      "augment", "Occlusion augmentation: erase box strips with background");
  augment->add_option("--image", aug_args.image, "input PNG")->required();
  augment->add_option("--boxes", aug_args.boxes, "x,y,w,h lines")->required();
  augment->add_option("--tau", aug_args.tau, "crop/box IoU bound")
      ->capture_default_str();
  augment->add_option("--ratio", aug_args.ratio, "fraction of boxes to erase")
      ->capture_default_str();
  augment->add_option("--seed", aug_args.seed, "rng seed")->capture_default_str();
  augment->add_option("--out-image", aug_args.out_image, "augmented PNG")
      ->required();
  augment->add_option("--out-mask", aug_args.out_mask, "visibility mask PNG")
      ->required();

  LossesArgs loss_args;
  auto* losses =
      app.add_subcommand("losses", "Evaluate loss kernels on a sample file");
  losses->add_option("--input", loss_args.input, "sample file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // --help exits 0; any usage problem exits 1
  }

  try {
    if (track->parsed()) return run_track(track_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    if (augment->parsed()) return run_augment(aug_args);
    if (losses->parsed()) return run_losses(loss_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
