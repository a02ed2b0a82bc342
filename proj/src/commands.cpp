#include "vipdist/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "vipdist/annotations.hpp"
#include "vipdist/depth_map.hpp"
#include "vipdist/eval.hpp"
#include "vipdist/neo_pipeline.hpp"
#include "vipdist/profiles.hpp"
#include "vipdist/regression.hpp"
#include "vipdist/synth.hpp"

namespace vipdist::cli {

using json = nlohmann::ordered_json;

namespace {

// Runs `body`, reporting library errors on `err` and mapping them to exit codes.
template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error [io]: " << e.what() << '\n';
    return 4;
  }
}

template <typename T>
T field(const json& j, const char* key, T fallback) {
  try {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
  } catch (const json::exception&) {
    fail(ErrorCode::format, std::string("field '") + key + "' has the wrong type");
  }
}

synth::DepthLawSpec parse_law(const json& j) {
  synth::DepthLawSpec law;
  law.m_true = field(j, "m", 1.0);
  law.s_true = field(j, "s", 0.0);
  law.noise_sigma = field(j, "noise_sigma", 0.0);
  law.orientation = law.m_true > 0 ? synth::ScoreOrientation::low_near : synth::ScoreOrientation::high_near;
  return law;
}

geometry::CameraIntrinsics camera_or_default(const std::optional<fs::path>& path) {
  if (path) return profiles::load_camera(*path);
  geometry::CameraIntrinsics c;
  c.fov_deg = 82.6;
  return c;
}

geometry::HeightTable heights_or_default(const std::optional<fs::path>& path) {
  return path ? profiles::load_heights(*path) : geometry::HeightTable::defaults();
}

const annotations::AnnotatedDetection* find_vip(const annotations::FrameAnnotation& f,
                                                std::size_t* index = nullptr) {
  const annotations::AnnotatedDetection* vip = nullptr;
  for (std::size_t i = 0; i < f.detections.size(); ++i) {
    if (!f.detections[i].detection.is_vip) continue;
    if (vip) return nullptr;
    vip = &f.detections[i];
    if (index) *index = i;
  }
  return vip;
}

fs::path resolve(const fs::path& stream, const std::string& rel) {
  const fs::path p(rel);
  return p.is_absolute() ? p : stream.parent_path() / p;
}

}  // namespace

EstimatorKind parse_estimator(const std::string& name) {
  if (name == "regression") return EstimatorKind::regression;
  if (name == "geometric") return EstimatorKind::geometric;
  if (name == "geometric_star") return EstimatorKind::geometric_star;
  if (name == "neo") return EstimatorKind::neo;
  if (name == "neo_norc") return EstimatorKind::neo_norc;
  fail(ErrorCode::format, "unknown estimator '" + name + "'");
}

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::regression: return "regression";
    case EstimatorKind::geometric: return "geometric";
    case EstimatorKind::geometric_star: return "geometric_star";
    case EstimatorKind::neo: return "neo";
    case EstimatorKind::neo_norc: return "neo_norc";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    json scene;
    try {
      scene = json::parse(profiles::read_text(args.scene));
    } catch (const json::exception& e) {
      fail(ErrorCode::format, args.scene.string() + ": " + e.what());
    }

    geometry::CameraIntrinsics camera;
    if (scene.contains("camera")) camera = profiles::parse_camera(scene["camera"].dump());
    const geometry::DronePose pose{field(scene, "drone_height_m", 1.5)};
    synth::SynthOptions options;
    const auto res = field(scene, "depth_resolution", std::vector<int>{1024, 320});
    if (res.size() != 2) fail(ErrorCode::format, "depth_resolution needs two values");
    options.depth_width = res[0];
    options.depth_height = res[1];
    options.background_distance_m = field(scene, "background_distance_m", 50.0);
    options.out_of_frame =
        field<std::string>(scene, "out_of_frame", "reject") == "clip" ? synth::OutOfFrame::clip
                                                                     : synth::OutOfFrame::reject;
    const double fps = field(scene, "fps", 30.0);
    if (!(fps > 0)) fail(ErrorCode::format, "fps must be positive");
    const auto pre_law = parse_law(scene.value("law", json::object()));
    std::optional<synth::DepthLawSpec> post_law;
    double switch_time = INFINITY;
    if (scene.contains("drift")) {
      post_law = parse_law(scene["drift"].value("law", json::object()));
      switch_time = field(scene["drift"], "switch_time_s", 0.0);
    }

    std::vector<synth::SceneObject> objects;
    std::vector<std::optional<std::size_t>> instances;
    for (const auto& o : scene.value("objects", json::array())) {
      synth::SceneObject obj;
      obj.class_label = field<std::string>(o, "class", "object");
      obj.object_id = field<std::string>(o, "object_id", "");
      obj.height_m = field(o, "height_m", 1.0);
      obj.width_m = field(o, "width_m", 0.0);
      obj.distance_m = field(o, "distance_m", 3.0);
      obj.lateral_offset_m = field(o, "lateral_m", 0.0);
      obj.elevation_m = field(o, "elevation_m", 0.0);
      obj.is_vip = field(o, "is_vip", false);
      obj.shape.near_fraction = field(o, "near_fraction", 1.0);
      obj.shape.far_extra_m = field(o, "far_extra_m", 0.0);
      obj.validate();
      objects.push_back(obj);
      instances.push_back(o.contains("instance") ? std::optional(o["instance"].get<std::size_t>())
                                                 : std::nullopt);
    }

    // Either a fixed duration or consecutive segments with a given VIP distance.
    struct Segment {
      std::optional<double> vip_distance;
      std::size_t frames;
    };
    std::vector<Segment> segments;
    if (scene.contains("vip_segments")) {
      for (const auto& s : scene["vip_segments"])
        segments.push_back({field(s, "distance_m", 3.0), field<std::size_t>(s, "frames", 1)});
    } else {
      segments.push_back(
          {std::nullopt, static_cast<std::size_t>(std::llround(field(scene, "duration_s", 1.0) * fps))});
    }

    const fs::path tmp = args.out_dir.string() + ".partial";
    fs::remove_all(tmp);
    fs::create_directories(tmp / "maps");
    std::ostringstream stream;
    std::size_t index = 0;
    try {
      for (const auto& seg : segments) {
        for (std::size_t k = 0; k < seg.frames; ++k, ++index) {
          auto objs = objects;
          if (seg.vip_distance)
            for (auto& o : objs)
              if (o.is_vip) o.distance_m = *seg.vip_distance;
          const double t = static_cast<double>(index) / fps;
          const auto& law = post_law && t >= switch_time ? *post_law : pre_law;
          auto frame = synth::synth_frame(objs, camera, pose, law, synth::frame_seed(args.seed, index),
                                          options);
          char name[32];
          std::snprintf(name, sizeof name, "maps/%06zu.neod", index);
          depth::write_neod(tmp / name, frame.depth_map);

          annotations::FrameAnnotation ann;
          ann.frame_id = std::to_string(index);
          ann.timestamp_s = t;
          ann.depth_map_path = name;
          for (std::size_t i = 0; i < frame.detections.size(); ++i)
            ann.detections.push_back({frame.detections[i], instances[i]});
          ann.ground_truth = frame.truth_m;
          stream << annotations::dump_frame(ann) << '\n';
        }
      }
      profiles::write_text_atomic(tmp / "frames.jsonl", stream.str());
    } catch (...) {
      fs::remove_all(tmp);
      throw;
    }
    fs::remove_all(args.out_dir);
    fs::rename(tmp, args.out_dir);
    out << "{\"frames\": " << index << ", \"out_dir\": \"" << args.out_dir.string() << "\"}\n";
    return 0;
  });
}

// ---------------------------------------------------------------------------
// calibrate

namespace {

int calibrate_regression(const CalibrateArgs& args, const std::vector<annotations::FrameAnnotation>& frames,
                         std::ostream& out) {
  const auto camera = camera_or_default(args.camera);
  std::vector<regression::LabeledFrame> labeled;
  for (const auto& f : frames) {
    std::size_t idx = 0;
    const auto* vip = find_vip(f, &idx);
    if (!vip) continue;
    auto gt = f.ground_truth.find(annotations::object_key(*vip, idx));
    if (gt == f.ground_truth.end()) continue;
    labeled.push_back({regression::RegressionFeatures::from_bbox(vip->detection.bbox, camera.image_width_px,
                                                                 camera.image_height_px),
                       gt->second});
  }
  if (args.mode != "three" && args.mode != "two") fail(ErrorCode::format, "mode must be 'three' or 'two'");
  const auto mode = args.mode == "three" ? regression::FeatureMode::three_feature
                                         : regression::FeatureMode::two_feature;
  regression::FitDiagnostics diag;
  const auto model = regression::fit_regression(labeled, mode, args.vip_id, &diag);
  profiles::write_text_atomic(args.out_profile, profiles::dump_regression(model));
  json echo;
  echo["subject"] = "regression";
  echo["a"] = model.a;
  echo["b"] = model.b;
  echo["c"] = model.c;
  echo["residual_norm"] = diag.residual_norm;
  echo["samples"] = diag.samples;
  out << echo.dump() << '\n';
  return 0;
}

geometry::FocalEstimate focal_from_frames(const std::vector<annotations::FrameAnnotation>& frames,
                                          const geometry::HeightTable& heights, int* res_w, int* res_h) {
  std::vector<geometry::FocalSample> samples;
  for (const auto& f : frames) {
    for (std::size_t i = 0; i < f.detections.size(); ++i) {
      const auto& ad = f.detections[i];
      auto gt = f.ground_truth.find(annotations::object_key(ad, i));
      if (gt == f.ground_truth.end() || !heights.contains(ad.detection.class_label)) continue;
      const double h = ad.instance ? heights.actual(ad.detection.class_label, *ad.instance)
                                   : heights.expected(ad.detection.class_label);
      samples.push_back({ad.detection.bbox, h, gt->second});
      if (res_w) *res_w = ad.detection.bbox.resolution_w();
      if (res_h) *res_h = ad.detection.bbox.resolution_h();
    }
  }
  return geometry::estimate_focal_length(samples);
}

int calibrate_focal(const CalibrateArgs& args, const std::vector<annotations::FrameAnnotation>& frames,
                    std::ostream& out) {
  int w = 1280, h = 720;
  const auto est = focal_from_frames(frames, heights_or_default(args.heights), &w, &h);
  geometry::CameraIntrinsics camera;
  camera.focal_length_px = est.median;
  camera.image_width_px = w;
  camera.image_height_px = h;
  profiles::write_text_atomic(args.out_profile, profiles::dump_camera(camera));
  json echo;
  echo["subject"] = "focal";
  echo["q1"] = est.q1;
  echo["median"] = est.median;
  echo["q3"] = est.q3;
  echo["samples"] = est.samples;
  out << echo.dump() << '\n';
  return 0;
}

int calibrate_depth(const CalibrateArgs& args, const std::vector<annotations::FrameAnnotation>& frames,
                    std::ostream& out) {
  std::map<double, std::vector<double>> videos;
  std::vector<depth::CalibrationSample> all;
  for (const auto& f : frames) {
    std::size_t idx = 0;
    const auto* vip = find_vip(f, &idx);
    if (!vip || !f.depth_map_path) continue;
    auto gt = f.ground_truth.find(annotations::object_key(*vip, idx));
    if (gt == f.ground_truth.end()) continue;
    const auto map = depth::read_neod(resolve(args.input, *f.depth_map_path));
    const auto box = geometry::scale_bbox(vip->detection.bbox, map.width(), map.height());
    const double score = depth::normalize_region(map, box, args.method);
    videos[gt->second].push_back(score);
    all.push_back({score, gt->second});
  }
  if (videos.size() < 2)
    fail(ErrorCode::singular_fit, "depth calibration needs VIP frames at two or more distances");

  std::vector<depth::DistancePair> candidates = args.pairs;
  if (candidates.empty()) {
    for (const auto& p : depth::default_candidate_pairs())
      if (videos.contains(p.first) && videos.contains(p.second)) candidates.push_back(p);
    if (candidates.empty() && videos.size() == 2)
      candidates.push_back({videos.begin()->first, std::next(videos.begin())->first});
  }
  const auto selection = depth::select_calibration_pair(videos, candidates, all);

  profiles::DepthProfile profile;
  profile.vip_id = args.vip_id;
  profile.unit = args.unit;
  const double scale = args.unit == "cm" ? 100.0 : 1.0;
  profile.m = selection.best.coeffs.m * scale;
  profile.s = selection.best.coeffs.s * scale;
  profile.pair = selection.best.pair;
  profile.lt_percentile = args.method.lt_percentile;
  profile.smooth_window = args.smooth_window;
  double residual = 0.0;
  for (const auto& s : all) {
    if (s.true_distance_m != selection.best.pair.first && s.true_distance_m != selection.best.pair.second)
      continue;
    profile.samples.push_back(s);
    const double r = s.true_distance_m - depth::estimate_distance_depth(s.normalized_score,
                                                                        selection.best.coeffs).distance_m;
    residual += r * r;
  }
  profiles::write_text_atomic(args.out_profile, profiles::dump_depth(profile));

  json echo;
  echo["subject"] = "depth";
  echo["pair"] = {selection.best.pair.first, selection.best.pair.second};
  echo["m"] = selection.best.coeffs.m;
  echo["s"] = selection.best.coeffs.s;
  echo["residual_norm"] = std::sqrt(residual);
  echo["samples"] = profile.samples.size();
  json ranking = json::array();
  for (const auto& e : selection.evaluated)
    ranking.push_back({{"pair", {e.pair.first, e.pair.second}},
                       {"abs_median_error_sum", e.abs_median_error_sum},
                       {"signed_median_error_sum", e.signed_median_error_sum}});
  echo["candidates"] = ranking;
  out << echo.dump() << '\n';
  return 0;
}

}  // namespace

int cmd_calibrate(const CalibrateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.unit != "m" && args.unit != "cm") fail(ErrorCode::format, "unit must be 'm' or 'cm'");
    const auto frames = annotations::read_stream(args.input);
    try {
      if (args.subject == "regression") return calibrate_regression(args, frames, out);
      if (args.subject == "focal") return calibrate_focal(args, frames, out);
      if (args.subject == "depth") return calibrate_depth(args, frames, out);
    } catch (const Error& e) {
      throw Error(e.code(), args.input.string() + ": " + e.what());
    }
    fail(ErrorCode::format, "unknown calibration subject '" + args.subject + "'");
  });
}

// ---------------------------------------------------------------------------
// estimate

int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto frames = annotations::read_stream(args.input);
    const auto camera = camera_or_default(args.camera);
    const bool neo = args.estimator == EstimatorKind::neo || args.estimator == EstimatorKind::neo_norc;

    std::optional<geometry::HeightTable> heights;
    if (args.estimator == EstimatorKind::geometric || args.estimator == EstimatorKind::geometric_star)
      heights = heights_or_default(args.heights);

    std::optional<regression::RegressionModel> reg;
    const bool needs_reg = args.estimator == EstimatorKind::regression ||
                           (args.estimator == EstimatorKind::neo && args.vip_truth == VipTruthSource::regression);
    if (needs_reg) {
      if (!args.regression_profile)
        fail(ErrorCode::missing_data, "this estimator needs --regression <profile>");
      reg = profiles::load_regression(*args.regression_profile);
    }

    std::optional<depth::NeoPipeline> pipeline;
    if (neo) {
      if (!args.depth_profile) fail(ErrorCode::missing_data, "neo estimators need --depth-profile");
      const auto profile = profiles::load_depth(*args.depth_profile);
      depth::PipelineOptions opts;
      opts.method.kind = args.norm_kind.value_or(depth::NormalizationKind::low_threshold);
      opts.method.lt_percentile = args.lt_percentile.value_or(profile.lt_percentile);
      opts.smooth_window = args.smooth_window.value_or(profile.smooth_window);
      opts.recalibrate = args.estimator == EstimatorKind::neo;
      opts.seed = args.seed;
      if (opts.recalibrate && profile.samples.size() < 2)
        fail(ErrorCode::missing_data,
             "depth profile has no offline calibration samples; recalibration needs them (use neo_norc)");
      pipeline.emplace(profile.coefficients(), opts, args.recal, profile.samples);
    }

    std::set<std::string> warned;
    auto warn_once = [&](const std::string& msg) {
      if (warned.insert(msg).second) err << "warning: " << msg << '\n';
    };

    std::ostringstream result;
    for (const auto& f : frames) {
      if (reg && f.vip_id && !reg->vip_id.empty() && *f.vip_id != reg->vip_id)
        warn_once("regression profile '" + reg->vip_id + "' applied to VIP '" + *f.vip_id + "'");

      json line;
      line["frame_id"] = f.frame_id;
      line["timestamp_s"] = f.timestamp_s;
      line["estimator"] = to_string(args.estimator);
      json objects = json::array();

      auto regression_vip = [&]() -> std::optional<Estimate> {
        const auto* vip = find_vip(f);
        if (!vip || !reg) return std::nullopt;
        return regression::predict_distance(
            *reg, regression::RegressionFeatures::from_bbox(vip->detection.bbox, camera.image_width_px,
                                                            camera.image_height_px));
      };

      if (!neo) {
        for (std::size_t i = 0; i < f.detections.size(); ++i) {
          const auto& ad = f.detections[i];
          const auto& det = ad.detection;
          json o;
          o["object"] = annotations::object_key(ad, i);
          o["class"] = det.class_label;
          json flags = json::array();
          std::optional<Estimate> est;
          if (args.estimator == EstimatorKind::regression) {
            if (!det.is_vip) continue;
            est = regression_vip();
          } else {
            const bool star = args.estimator == EstimatorKind::geometric_star;
            if (!heights->contains(det.class_label)) {
              flags.push_back("no_height");
            } else if (star && !ad.instance) {
              flags.push_back("no_actual_height");
            } else {
              const double h = star ? heights->actual(det.class_label, *ad.instance)
                                    : heights->expected(det.class_label);
              est = Estimate{geometry::estimate_distance_geometric(det.bbox, h, camera), false};
            }
          }
          if (est && est->out_of_domain) flags.push_back("out_of_domain");
          o["distance_m"] = est ? json(est->distance_m) : json(nullptr);
          o["flags"] = flags;
          objects.push_back(o);
        }
        line["objects"] = objects;
        result << line.dump() << '\n';
        continue;
      }

      // Depth-based estimators.
      if (!f.depth_map_path) {
        result << json{{"frame_id", f.frame_id}, {"error", "missing_depth_map"}}.dump() << '\n';
        continue;
      }
      const auto map_path = resolve(args.input, *f.depth_map_path);
      if (!fs::exists(map_path)) {
        result << json{{"frame_id", f.frame_id},
                       {"error", "missing_depth_map"},
                       {"message", map_path.string()}}
                      .dump()
               << '\n';
        continue;
      }
      const auto map = depth::read_neod(map_path);  // corrupt maps abort the run

      depth::Frame frame{f.frame_id, f.timestamp_s, {}, &map};
      for (std::size_t i = 0; i < f.detections.size(); ++i) {
        auto det = f.detections[i].detection;
        det.object_id = annotations::object_key(f.detections[i], i);
        frame.detections.push_back(std::move(det));
      }
      std::optional<Estimate> trusted;
      if (args.estimator == EstimatorKind::neo) {
        if (args.vip_truth == VipTruthSource::regression) {
          trusted = regression_vip();
        } else {
          std::size_t idx = 0;
          if (const auto* vip = find_vip(f, &idx)) {
            auto gt = f.ground_truth.find(annotations::object_key(*vip, idx));
            if (gt != f.ground_truth.end()) trusted = Estimate{gt->second, !(gt->second > 0)};
          }
        }
      }
      const auto step = pipeline->step(frame, trusted);
      for (const auto& w : step.warnings) warn_once(w);
      if (step.recalibration) {
        json ev;
        ev["event"] = "recalibration";
        ev["frame_id"] = f.frame_id;
        ev["timestamp_s"] = f.timestamp_s;
        ev["m"] = step.recalibration->coeffs.m;
        ev["s"] = step.recalibration->coeffs.s;
        ev["n_original"] = step.recalibration->n_original;
        ev["n_new"] = step.recalibration->n_new;
        result << ev.dump() << '\n';
      }
      for (const auto& o : step.objects) {
        json oj;
        oj["object"] = o.object_id;
        oj["class"] = o.class_label;
        oj["distance_m"] = o.estimate.distance_m;
        oj["flags"] = o.estimate.out_of_domain ? json::array({"out_of_domain"}) : json::array();
        objects.push_back(oj);
      }
      line["objects"] = objects;
      line["coeffs"] = {{"m", step.coeffs.m},
                        {"s", step.coeffs.s},
                        {"provenance", std::string(depth::to_string(step.coeffs.provenance))}};
      result << line.dump() << '\n';
    }
    profiles::write_text_atomic(args.output, result.str());
    out << "{\"frames\": " << frames.size() << ", \"output\": \"" << args.output.string() << "\"}\n";
    return 0;
  });
}

// ---------------------------------------------------------------------------
// evaluate

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto truth_frames = annotations::read_stream(args.truth);
    std::map<std::string, const annotations::FrameAnnotation*> truth;
    for (const auto& f : truth_frames) truth[f.frame_id] = &f;

    std::ifstream in(args.estimates);
    if (!in) fail(ErrorCode::missing_data, "cannot read " + args.estimates.string());

    std::vector<eval::ErrorRecord> records;
    std::vector<std::string> methods;
    std::size_t missing_frame = 0, missing_object = 0, no_estimate = 0;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        fail(ErrorCode::format, args.estimates.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
      if (j.contains("event") || j.contains("error") || !j.contains("objects")) continue;
      const auto frame_id = j.at("frame_id").get<std::string>();
      auto tf = truth.find(frame_id);
      if (tf == truth.end()) {
        ++missing_frame;
        continue;
      }
      const std::string method = j.value("estimator", std::string("unknown"));
      for (const auto& o : j["objects"]) {
        if (o["distance_m"].is_null()) {
          ++no_estimate;
          continue;
        }
        auto gt = tf->second->ground_truth.find(o.at("object").get<std::string>());
        if (gt == tf->second->ground_truth.end()) {
          ++missing_object;
          continue;
        }
        records.emplace_back(frame_id, o.at("class").get<std::string>(), gt->second,
                             o["distance_m"].get<double>());
        methods.push_back(method);
      }
    }
    if (missing_frame || missing_object)
      err << "join: " << missing_frame << " frames and " << missing_object
          << " objects without ground truth\n";
    if (records.empty()) fail(ErrorCode::missing_data, "no estimates could be joined with ground truth");

    std::vector<std::pair<std::string, eval::MetricsSummary>> rows;
    rows.emplace_back("all", eval::summarize(records));
    std::map<std::string, std::vector<eval::ErrorRecord>> by_class, by_method;
    for (std::size_t i = 0; i < records.size(); ++i) {
      by_class[records[i].class_label()].push_back(records[i]);
      by_method[methods[i]].push_back(records[i]);
    }
    for (const auto& [name, recs] : by_class) rows.emplace_back("class:" + name, eval::summarize(recs));
    for (const auto& [name, recs] : by_method) rows.emplace_back("method:" + name, eval::summarize(recs));

    const fs::path tmp = args.out_dir.string() + ".partial";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    auto write = [&](const std::string& name, auto&& fn) {
      std::ostringstream s;
      fn(s);
      profiles::write_text_atomic(tmp / name, s.str());
    };
    write("records.csv", [&](std::ostream& s) { eval::write_records_csv(s, records); });
    write("summary.csv", [&](std::ostream& s) { eval::write_summary_csv(s, rows); });
    write("quadrants.csv", [&](std::ostream& s) {
      eval::write_quadrant_csv(s, eval::quadrant_matrix(records, args.policy.near_threshold_m));
    });
    for (const auto& [name, recs] : by_class)
      write("quadrants_" + name + ".csv", [&](std::ostream& s) {
        eval::write_quadrant_csv(s, eval::quadrant_matrix(recs, args.policy.near_threshold_m));
      });
    fs::remove_all(args.out_dir);
    fs::rename(tmp, args.out_dir);

    json echo;
    echo["records"] = records.size();
    echo["unmatched_frames"] = missing_frame;
    echo["unmatched_objects"] = missing_object;
    echo["without_estimate"] = no_estimate;
    echo["out_dir"] = args.out_dir.string();
    out << echo.dump() << '\n';
    return 0;
  });
}

// ---------------------------------------------------------------------------
// focal

int cmd_focal(const FocalArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto frames = annotations::read_stream(args.input);
    const auto est = focal_from_frames(frames, heights_or_default(args.heights), nullptr, nullptr);
    json echo;
    echo["q1"] = est.q1;
    echo["median"] = est.median;
    echo["q3"] = est.q3;
    echo["samples"] = est.samples;
    out << echo.dump() << '\n';
    return 0;
  });
}

}  // namespace vipdist::cli
