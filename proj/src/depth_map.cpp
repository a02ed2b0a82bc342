#include "vipdist/depth_map.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "vipdist/error.hpp"

namespace vipdist::depth {

namespace {

constexpr std::size_t kHeaderSize = 12;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

void check_scores(std::span<const float> scores) {
  for (float v : scores)
    if (!std::isfinite(v)) fail(ErrorCode::format, "depth map contains a non-finite score");
}

}  // namespace

DepthMap::DepthMap(int width, int height, std::vector<float> scores)
    : width_(width), height_(height), scores_(std::move(scores)) {
  if (width <= 0 || height <= 0) fail(ErrorCode::domain, "depth map dimensions must be positive");
  if (scores_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    fail(ErrorCode::domain, "depth map score count does not match its dimensions");
  check_scores(scores_);
}

DepthMap::DepthMap(int width, int height, float fill)
    : DepthMap(width, height,
               std::vector<float>(static_cast<std::size_t>(std::max(width, 0)) *
                                      static_cast<std::size_t>(std::max(height, 0)),
                                  fill)) {}

std::vector<std::uint8_t> encode_neod(const DepthMap& map) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + map.scores().size() * 4);
  out.insert(out.end(), std::begin(kNeodMagic), std::end(kNeodMagic));
  put_u32(out, static_cast<std::uint32_t>(map.width()));
  put_u32(out, static_cast<std::uint32_t>(map.height()));
  for (float v : map.scores()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

DepthMap decode_neod(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kNeodMagic, 4) != 0)
    fail(ErrorCode::bad_magic, "not a NEOD depth map (bad magic)");
  if (bytes.size() < kHeaderSize) fail(ErrorCode::truncated, "NEOD header truncated");
  const std::uint32_t w = get_u32(bytes.data() + 4);
  const std::uint32_t h = get_u32(bytes.data() + 8);
  if (w == 0 || h == 0 || w > 0x7fffffffu || h > 0x7fffffffu)
    fail(ErrorCode::format, "NEOD dimensions out of range");
  const std::uint64_t count = std::uint64_t(w) * h;
  const std::uint64_t expected = kHeaderSize + count * 4;
  if (bytes.size() < expected)
    fail(ErrorCode::truncated, "NEOD payload truncated: expected " + std::to_string(expected) +
                                   " bytes, got " + std::to_string(bytes.size()));
  if (bytes.size() > expected) fail(ErrorCode::format, "NEOD file has trailing bytes");

  std::vector<float> scores(static_cast<std::size_t>(count));
  const std::uint8_t* p = bytes.data() + kHeaderSize;
  for (std::size_t i = 0; i < scores.size(); ++i, p += 4)
    scores[i] = std::bit_cast<float>(get_u32(p));
  return DepthMap(static_cast<int>(w), static_cast<int>(h), std::move(scores));
}

void write_neod(const std::filesystem::path& path, const DepthMap& map) {
  const auto bytes = encode_neod(map);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::missing_data, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::missing_data, "failed writing " + path.string());
}

DepthMap read_neod(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::missing_data, "depth map not found: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_neod(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace vipdist::depth
