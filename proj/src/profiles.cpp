#include "vipdist/profiles.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "vipdist/error.hpp"

namespace vipdist::profiles {

using json = nlohmann::ordered_json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::format, std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorCode::format, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::format, std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

std::string finish(const json& j) { return j.dump(2) + "\n"; }

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
  const auto text = read_text(path);
  try {
    return fn(text);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace

depth::DepthCoefficients DepthProfile::coefficients() const {
  const double scale = unit == "cm" ? 0.01 : 1.0;
  depth::DepthCoefficients c;
  c.m = m * scale;
  c.s = s * scale;
  c.fitted_pair = pair;
  c.validate();
  return c;
}

std::string dump_camera(const geometry::CameraIntrinsics& camera) {
  json j;
  j["version"] = kFormatVersion;
  j["focal_length_px"] = camera.focal_length_px;
  j["image_w"] = camera.image_width_px;
  j["image_h"] = camera.image_height_px;
  if (camera.fov_deg) j["fov_deg"] = *camera.fov_deg;
  return finish(j);
}

geometry::CameraIntrinsics parse_camera(const std::string& text) {
  const json j = parse_json(text);
  geometry::CameraIntrinsics c;
  c.focal_length_px = get<double>(j, "focal_length_px");
  c.image_width_px = get<int>(j, "image_w");
  c.image_height_px = get<int>(j, "image_h");
  if (j.contains("fov_deg")) c.fov_deg = get<double>(j, "fov_deg");
  try {
    c.validate();
  } catch (const Error& e) {
    fail(ErrorCode::format, e.what());
  }
  return c;
}

std::string dump_heights(const geometry::HeightTable& table) {
  json j = json::object();
  for (const auto& [label, entry] : table.entries()) {
    json e;
    e["expected_m"] = entry.expected_m;
    e["actual_m"] = entry.actual_m;
    j[label] = e;
  }
  return finish(j);
}

geometry::HeightTable parse_heights(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) fail(ErrorCode::format, "height table must be a JSON object");
  geometry::HeightTable table;
  for (const auto& [label, e] : j.items()) {
    try {
      table.set(label, {get<double>(e, "expected_m"),
                        get_or<std::vector<double>>(e, "actual_m", {})});
    } catch (const Error& err) {
      fail(ErrorCode::format, err.what());
    }
  }
  return table;
}

std::string dump_regression(const regression::RegressionModel& model) {
  json j;
  j["version"] = kFormatVersion;
  j["vip_id"] = model.vip_id;
  j["mode"] = model.mode == regression::FeatureMode::three_feature ? "three" : "two";
  j["a"] = model.a;
  j["b"] = model.b;
  j["c"] = model.c;
  return finish(j);
}

regression::RegressionModel parse_regression(const std::string& text) {
  const json j = parse_json(text);
  regression::RegressionModel m;
  m.vip_id = get_or<std::string>(j, "vip_id", "");
  const auto mode = get_or<std::string>(j, "mode", "three");
  if (mode == "three")
    m.mode = regression::FeatureMode::three_feature;
  else if (mode == "two")
    m.mode = regression::FeatureMode::two_feature;
  else
    fail(ErrorCode::format, "regression mode must be 'three' or 'two'");
  m.a = get<double>(j, "a");
  m.b = get<double>(j, "b");
  m.c = get_or<double>(j, "c", 0.0);
  try {
    m.validate();
  } catch (const Error& e) {
    fail(ErrorCode::format, e.what());
  }
  return m;
}

std::string dump_depth(const DepthProfile& p) {
  json j;
  j["version"] = kFormatVersion;
  j["vip_id"] = p.vip_id;
  j["m"] = p.m;
  j["s"] = p.s;
  j["unit"] = p.unit;
  if (p.pair) j["pair"] = json::array({p.pair->first, p.pair->second});
  j["lt_percentile"] = p.lt_percentile;
  j["smooth_window"] = p.smooth_window;
  if (!p.samples.empty()) {
    json samples = json::array();
    for (const auto& s : p.samples) samples.push_back(json::array({s.normalized_score, s.true_distance_m}));
    j["samples"] = samples;
  }
  return finish(j);
}

DepthProfile parse_depth(const std::string& text) {
  const json j = parse_json(text);
  DepthProfile p;
  p.vip_id = get_or<std::string>(j, "vip_id", "");
  p.m = get<double>(j, "m");
  p.s = get<double>(j, "s");
  p.unit = get_or<std::string>(j, "unit", "m");
  if (p.unit != "m" && p.unit != "cm") fail(ErrorCode::format, "depth profile unit must be 'm' or 'cm'");
  if (j.contains("pair")) {
    const auto pair = get<std::vector<double>>(j, "pair");
    if (pair.size() != 2) fail(ErrorCode::format, "depth profile pair needs two distances");
    p.pair = std::make_pair(pair[0], pair[1]);
  }
  p.lt_percentile = get_or<double>(j, "lt_percentile", 10.0);
  p.smooth_window = get_or<std::size_t>(j, "smooth_window", 5);
  if (j.contains("samples")) {
    for (const auto& s : get<std::vector<std::vector<double>>>(j, "samples")) {
      if (s.size() != 2) fail(ErrorCode::format, "depth profile samples are [score, distance_m] pairs");
      p.samples.push_back({s[0], s[1]});
    }
  }
  try {
    (void)p.coefficients();
  } catch (const Error& e) {
    fail(ErrorCode::format, e.what());
  }
  return p;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::missing_data, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::missing_data, "cannot write " + path.string());
    out << text;
    if (!out) fail(ErrorCode::missing_data, "failed writing " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

geometry::CameraIntrinsics load_camera(const std::filesystem::path& path) {
  return with_path(path, parse_camera);
}
geometry::HeightTable load_heights(const std::filesystem::path& path) {
  return with_path(path, parse_heights);
}
regression::RegressionModel load_regression(const std::filesystem::path& path) {
  return with_path(path, parse_regression);
}
DepthProfile load_depth(const std::filesystem::path& path) { return with_path(path, parse_depth); }

}  // namespace vipdist::profiles
