#pragma once

// JSONL frame streams: one frame per line.
//
//   {"frame_id": "17", "timestamp_s": 0.566, "depth_map": "maps/000017.neod",
//    "scene": "AM_Simple", "vip_id": "P1",
//    "detections": [{"object_id": "vip", "class": "vest", "bbox": [x0, y0, x1, y1],
//                    "resolution": [1280, 720], "confidence": 0.93, "is_vip": true,
//                    "instance": 0}],
//    "ground_truth": {"vip": 3.0}}
//
// depth_map paths are relative to the stream file's directory.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vipdist/geometry.hpp"

namespace vipdist::annotations {

struct AnnotatedDetection {
  geometry::Detection detection;
  std::optional<std::size_t> instance;  // index into the class's measured heights
};

struct FrameAnnotation {
  std::string frame_id;
  double timestamp_s = 0.0;
  std::vector<AnnotatedDetection> detections;
  std::optional<std::string> depth_map_path;
  std::map<std::string, double> ground_truth;  // object id -> meters
  std::optional<std::string> scene;
  std::optional<std::string> vip_id;
};

FrameAnnotation parse_frame(const std::string& line);
std::string dump_frame(const FrameAnnotation& frame);

/// Reads a stream, checking that timestamps never decrease. Errors carry the
/// file name and line number.
std::vector<FrameAnnotation> read_stream(const std::filesystem::path& path);

/// Object id of a detection: its explicit id, else "<class>#<index>".
std::string object_key(const AnnotatedDetection& det, std::size_t index);

}  // namespace vipdist::annotations
