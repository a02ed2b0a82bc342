#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace vipdist::depth {

/// Relative per-pixel depth scores for one frame, row-major, top row first.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height, std::vector<float> scores);
  DepthMap(int width, int height, float fill);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  float at(int x, int y) const noexcept {
    return scores_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  float& at(int x, int y) noexcept {
    return scores_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  std::span<const float> scores() const noexcept { return scores_; }

  bool operator==(const DepthMap&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> scores_;
};

// NEOD file layout (little-endian):
//   "NEOD" | u32 width | u32 height | width*height f32 scores, row-major.
inline constexpr char kNeodMagic[4] = {'N', 'E', 'O', 'D'};

std::vector<std::uint8_t> encode_neod(const DepthMap& map);
/// Throws ErrorCode::bad_magic or ErrorCode::truncated for damaged input and
/// ErrorCode::format for trailing bytes or non-finite scores.
DepthMap decode_neod(std::span<const std::uint8_t> bytes);

void write_neod(const std::filesystem::path& path, const DepthMap& map);
DepthMap read_neod(const std::filesystem::path& path);

}  // namespace vipdist::depth
