#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fusionbench/core/error.hpp"

namespace fusionbench {

/// Row-major 8-bit raster with `Channels` interleaved samples per pixel.
/// Dimensions are strictly positive and the buffer always holds exactly
/// width * height * Channels samples.
template <int Channels>
class Image {
  static_assert(Channels == 1 || Channels == 3, "gray or RGB only");

 public:
  static constexpr int kChannels = Channels;

  Image(int width, int height, std::uint8_t fill = 0) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(sample_count(), fill);
  }

  Image(int width, int height, std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != sample_count()) {
      throw Error(ErrorCode::InvalidImage,
                  "buffer holds " + std::to_string(data_.size()) + " samples, expected " +
                      std::to_string(sample_count()));
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::size_t sample_count() const noexcept { return pixel_count() * Channels; }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  std::uint8_t at(int x, int y, int c = 0) const noexcept {
    return data_[index(x, y, c)];
  }
  std::uint8_t& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }

  bool same_size(int w, int h) const noexcept { return width_ == w && height_ == h; }
  template <int C>
  bool same_size(const Image<C>& other) const noexcept {
    return same_size(other.width(), other.height());
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  static void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
      throw Error(ErrorCode::InvalidImage, "non-positive dimensions " + std::to_string(width) +
                                               "x" + std::to_string(height));
    }
  }

  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               Channels +
           static_cast<std::size_t>(c);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

using GrayImage = Image<1>;
using ColorImage = Image<3>;

/// BT.601 luma, round half up. Integer arithmetic keeps R=G=B inputs exact.
inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  const unsigned weighted = 299u * r + 587u * g + 114u * b;
  return static_cast<std::uint8_t>((weighted + 500u) / 1000u);
}

inline GrayImage to_grayscale(const ColorImage& img) {
  GrayImage out(img.width(), img.height());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    dst[i] = luma(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
  }
  return out;
}

inline GrayImage to_grayscale(const GrayImage& img) { return img; }

inline ColorImage to_color(const GrayImage& img) {
  ColorImage out(img.width(), img.height());
  auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
  }
  return out;
}

inline ColorImage to_color(const ColorImage& img) { return img; }

/// Throws DimensionMismatch unless every image has the size of the first.
template <int C0, int... Cs>
void require_same_size(std::string_view what, const Image<C0>& first, const Image<Cs>&... rest) {
  const bool ok = (first.same_size(rest) && ...);
  if (!ok) {
    std::string sizes;
    auto append = [&sizes](int w, int h) {
      if (!sizes.empty()) sizes += " vs ";
      sizes += std::to_string(w) + "x" + std::to_string(h);
    };
    append(first.width(), first.height());
    (append(rest.width(), rest.height()), ...);
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": " + sizes);
  }
}

}  // namespace fusionbench
