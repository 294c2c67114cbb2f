#include "occtrack/mot_io.hpp"
#include <cmath>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "occtrack/errors.hpp"

namespace occtrack {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  return fields;
}

double to_double(const std::string& s, const std::string& path, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path, line, "expected a number, got '" + s + "'");
  }
}

int to_int(const std::string& s, const std::string& path, int line) {
  const double v = to_double(s, path, line);
  return static_cast<int>(v);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path, 0, "cannot open file for writing");
  return out;
}

}  // namespace

std::vector<TrackRecord> parse_mot(const std::string& path) {
  auto in = open_input(path);
  std::vector<TrackRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() < 7) {
      throw ParseError(path, line_no, "expected at least 7 comma-separated fields");
    }
    TrackRecord r;
    r.frame = to_int(fields[0], path, line_no);
    r.id = to_int(fields[1], path, line_no);
    r.bbox = BBox{to_double(fields[2], path, line_no),
                  to_double(fields[3], path, line_no),
                  to_double(fields[4], path, line_no),
                  to_double(fields[5], path, line_no)};
    r.score = to_double(fields[6], path, line_no);
    if (fields.size() >= 8) {
      const int cls = to_int(fields[7], path, line_no);
      r.class_id = cls < 0 ? 0 : cls;
    }
    if (r.frame < 1) throw ParseError(path, line_no, "frame numbers are 1-based");
    if (!(r.bbox.w > 0.0) || !(r.bbox.h > 0.0)) {
      throw NonPositiveBox(path + ":" + std::to_string(line_no) +
                           ": box width/height must be positive");
    }
    records.push_back(r);
  }
  return records;
}

namespace {

std::vector<TrackRecord> sorted_by_frame_id(const std::vector<TrackRecord>& records) {
  std::vector<TrackRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TrackRecord& a, const TrackRecord& b) {
                     return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
                   });
  return sorted;
}

}  // namespace

void write_mot(const std::vector<TrackRecord>& records, const std::string& path) {
  auto out = open_output(path);
  char buf[192];
  for (const auto& r : sorted_by_frame_id(records)) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.4f,%.4f,%.4f,%.4f,%.4f,-1,-1,-1\n",
                  r.frame, r.id, r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h,
                  r.score);
    out << buf;
  }
}

void write_mot_gt(const std::vector<TrackRecord>& records,
                  const std::string& path) {
  auto out = open_output(path);
  char buf[192];
  for (const auto& r : sorted_by_frame_id(records)) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.4f,%.4f,%.4f,%.4f,%d,%d,%d\n",
                  r.frame, r.id, r.bbox.x, r.bbox.y, r.bbox.w, r.bbox.h,
                  static_cast<int>(std::lround(r.score)), r.class_id, 1);
    out << buf;
  }
}

EmbeddingTable parse_embeddings(const std::string& path) {
  auto in = open_input(path);
  EmbeddingTable table;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line.rfind("# dim=", 0) != 0) {
        throw ParseError(path, line_no, "expected header '# dim=<d>'");
      }
      table.dim = to_int(line.substr(6), path, line_no);
      if (table.dim <= 0) throw ParseError(path, line_no, "dim must be positive");
      header_seen = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (static_cast<int>(fields.size()) != table.dim + 2) {
      throw ParseError(path, line_no,
                       "expected " + std::to_string(table.dim + 2) + " fields");
    }
    const int frame = to_int(fields[0], path, line_no);
    const int det = to_int(fields[1], path, line_no);
    Eigen::VectorXd v(table.dim);
    for (int i = 0; i < table.dim; ++i) {
      v(i) = to_double(fields[i + 2], path, line_no);
    }
    const double norm = v.norm();
    if (norm <= 0.0) throw ParseError(path, line_no, "zero-norm embedding");
    if (!table.vectors.emplace(std::make_pair(frame, det), v / norm).second) {
      throw ParseError(path, line_no, "duplicate (frame, det_index) row");
    }
  }
  if (!header_seen) throw ParseError(path, 0, "missing '# dim=<d>' header");
  return table;
}

void write_embeddings(const EmbeddingTable& table, const std::string& path) {
  auto out = open_output(path);
  out << "# dim=" << table.dim << "\n";
  char buf[64];
  for (const auto& [key, vec] : table.vectors) {
    out << key.first << "," << key.second;
    for (Eigen::Index i = 0; i < vec.size(); ++i) {
      std::snprintf(buf, sizeof(buf), ",%.10g", vec(i));
      out << buf;
    }
    out << "\n";
  }
}

std::map<int, std::vector<Detection>> group_detections(
    const std::vector<TrackRecord>& rows, const EmbeddingTable* embeddings) {
  std::map<int, std::vector<Detection>> by_frame;
  for (const auto& r : rows) {
    auto& list = by_frame[r.frame];
    Detection d;
    d.bbox = r.bbox;
    d.score = r.score;
    d.class_id = r.class_id;
    if (embeddings) {
      auto it = embeddings->vectors.find(
          {r.frame, static_cast<int>(list.size())});
      if (it != embeddings->vectors.end()) d.embedding = it->second;
    }
    list.push_back(std::move(d));
  }
  return by_frame;
}

namespace {

// Shared key=value reader; passes each pair to apply(), which returns false
// for unknown keys.
template <typename Apply>
void read_config(const std::string& path, Apply&& apply) {
  auto in = open_input(path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path, line_no, "expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!apply(key, value, line_no)) {
      throw InvalidConfig(path + ":" + std::to_string(line_no) +
                          ": unknown key '" + key + "'");
    }
  }
}

bool to_bool(const std::string& v, const std::string& path, int line) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw ParseError(path, line, "expected a boolean, got '" + v + "'");
}

}  // namespace

TrackerParams parse_tracker_config(const std::string& path, TrackerParams base) {
  read_config(path, [&](const std::string& k, const std::string& v, int line) {
    if (k == "s_init") base.s_init = to_double(v, path, line);
    else if (k == "s_high") base.s_high = to_double(v, path, line);
    else if (k == "s_low") base.s_low = to_double(v, path, line);
    else if (k == "gate_embedding") base.gate_embedding = to_double(v, path, line);
    else if (k == "gate_iou_high") base.gate_iou_high = to_double(v, path, line);
    else if (k == "gate_iou_low") base.gate_iou_low = to_double(v, path, line);
    else if (k == "max_age") base.max_age = to_int(v, path, line);
    else if (k == "ema_momentum") base.ema_momentum = to_double(v, path, line);
    else if (k == "use_embeddings") base.use_embeddings = to_bool(v, path, line);
    else if (k == "use_calibration") base.use_calibration = to_bool(v, path, line);
    else if (k == "epsilon") base.calibration_epsilon = to_double(v, path, line);
    else if (k == "alpha") base.calibration_alpha = to_double(v, path, line);
    else return false;
    return true;
  });
  base.validate();
  return base;
}

ScenarioConfig parse_scenario_config(const std::string& path,
                                     ScenarioConfig base) {
  bool occluders_reset = false;
  read_config(path, [&](const std::string& k, const std::string& v, int line) {
    if (k == "num_agents") base.num_agents = to_int(v, path, line);
    else if (k == "num_frames") base.num_frames = to_int(v, path, line);
    else if (k == "arena_width") base.arena_width = to_double(v, path, line);
    else if (k == "arena_height") base.arena_height = to_double(v, path, line);
    else if (k == "agent_width") base.agent_width = to_double(v, path, line);
    else if (k == "agent_height") base.agent_height = to_double(v, path, line);
    else if (k == "speed_max") base.speed_max = to_double(v, path, line);
    else if (k == "sigma_box") base.sigma_box = to_double(v, path, line);
    else if (k == "drop_prob") base.drop_prob = to_double(v, path, line);
    else if (k == "occlusion_score") base.occlusion_score = to_double(v, path, line);
    else if (k == "embedding_dim") base.embedding_dim = to_int(v, path, line);
    else if (k == "sigma_embedding") base.sigma_embedding = to_double(v, path, line);
    else if (k == "seed") base.seed = static_cast<std::uint64_t>(to_double(v, path, line));
    else if (k == "occluder") {
      const auto fields = split_csv(v);
      if (fields.size() != 4) {
        throw ParseError(path, line, "occluder wants x,y,w,h");
      }
      if (!occluders_reset) {  // file occluders replace the baseline list
        base.occluders.clear();
        occluders_reset = true;
      }
      base.occluders.push_back(BBox{to_double(fields[0], path, line),
                                    to_double(fields[1], path, line),
                                    to_double(fields[2], path, line),
                                    to_double(fields[3], path, line)});
    } else {
      return false;
    }
    return true;
  });
  base.validate();
  return base;
}

}  // namespace occtrack
