#include "vipdist/annotations.hpp"

#include <fstream>
#include <json.hpp>

#include "vipdist/error.hpp"

namespace vipdist::annotations {

using json = nlohmann::ordered_json;

std::string object_key(const AnnotatedDetection& det, std::size_t index) {
  const auto& d = det.detection;
  return d.object_id.empty() ? d.class_label + "#" + std::to_string(index) : d.object_id;
}

FrameAnnotation parse_frame(const std::string& line) {
  FrameAnnotation f;
  try {
    const json j = json::parse(line);
    const auto& id = j.at("frame_id");
    f.frame_id = id.is_string() ? id.get<std::string>() : id.dump();
    f.timestamp_s = j.value("timestamp_s", 0.0);
    if (j.contains("depth_map") && !j["depth_map"].is_null())
      f.depth_map_path = j["depth_map"].get<std::string>();
    if (j.contains("scene")) f.scene = j["scene"].get<std::string>();
    if (j.contains("vip_id")) f.vip_id = j["vip_id"].get<std::string>();
    for (const auto& d : j.value("detections", json::array())) {
      const auto box = d.at("bbox").get<std::vector<double>>();
      const auto res = d.value("resolution", std::vector<int>{1280, 720});
      if (box.size() != 4 || res.size() != 2)
        fail(ErrorCode::format, "bbox needs 4 values and resolution 2");
      AnnotatedDetection ad{
          geometry::Detection{
              geometry::BoundingBox::make(box[0], box[1], box[2], box[3], res[0], res[1]),
              d.at("class").get<std::string>(), d.value("confidence", 1.0),
              d.value("is_vip", false), d.value("object_id", std::string{})},
          std::nullopt};
      if (d.contains("instance")) ad.instance = d["instance"].get<std::size_t>();
      ad.detection.validate();
      f.detections.push_back(std::move(ad));
    }
    if (j.contains("ground_truth"))
      for (const auto& [key, value] : j["ground_truth"].items()) f.ground_truth[key] = value.get<double>();
  } catch (const json::exception& e) {
    fail(ErrorCode::format, std::string("malformed frame: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorCode::format, e.what());
  }
  return f;
}

std::string dump_frame(const FrameAnnotation& f) {
  json j;
  j["frame_id"] = f.frame_id;
  j["timestamp_s"] = f.timestamp_s;
  if (f.depth_map_path) j["depth_map"] = *f.depth_map_path;
  if (f.scene) j["scene"] = *f.scene;
  if (f.vip_id) j["vip_id"] = *f.vip_id;
  json dets = json::array();
  for (const auto& ad : f.detections) {
    const auto& d = ad.detection;
    json dj;
    if (!d.object_id.empty()) dj["object_id"] = d.object_id;
    dj["class"] = d.class_label;
    dj["bbox"] = {d.bbox.x_min(), d.bbox.y_min(), d.bbox.x_max(), d.bbox.y_max()};
    dj["resolution"] = {d.bbox.resolution_w(), d.bbox.resolution_h()};
    dj["confidence"] = d.confidence;
    dj["is_vip"] = d.is_vip;
    if (ad.instance) dj["instance"] = *ad.instance;
    dets.push_back(dj);
  }
  j["detections"] = dets;
  if (!f.ground_truth.empty()) {
    json gt = json::object();
    for (const auto& [k, v] : f.ground_truth) gt[k] = v;
    j["ground_truth"] = gt;
  }
  return j.dump();
}

std::vector<FrameAnnotation> read_stream(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::missing_data, "cannot read " + path.string());
  std::vector<FrameAnnotation> frames;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      frames.push_back(parse_frame(line));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (frames.size() > 1 && frames.back().timestamp_s < frames[frames.size() - 2].timestamp_s)
      fail(ErrorCode::format, path.string() + ":" + std::to_string(lineno) +
                                  ": timestamps must be non-decreasing");
  }
  return frames;
}

}  // namespace vipdist::annotations
