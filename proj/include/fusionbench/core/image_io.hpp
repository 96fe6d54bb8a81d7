#pragma once

// PNG/JPEG decoding and PNG encoding. Requires linking libpng and libjpeg.

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <variant>
#include <vector>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>

#include "fusionbench/core/error.hpp"
#include "fusionbench/core/image.hpp"

namespace fusionbench {

using AnyImage = std::variant<GrayImage, ColorImage>;

enum class ImageFormat { Png, Jpeg };

struct ImageInfo {
  ImageFormat format;
  int width;
  int height;
  int channels;  // 1 or 3 after decoding
};

namespace detail {

inline std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::MissingFile, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline ImageFormat sniff_format(const std::vector<unsigned char>& bytes,
                                const std::filesystem::path& path) {
  static constexpr unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSig, 8) == 0) return ImageFormat::Png;
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
    return ImageFormat::Jpeg;
  }
  throw Error(ErrorCode::UnsupportedFormat, path.string() + " is neither PNG nor JPEG");
}

struct PngImageGuard {
  png_image image{};
  PngImageGuard() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImageGuard() { png_image_free(&image); }
  PngImageGuard(const PngImageGuard&) = delete;
  PngImageGuard& operator=(const PngImageGuard&) = delete;
};

inline void png_begin(PngImageGuard& guard, const std::vector<unsigned char>& bytes,
                      const std::filesystem::path& path) {
  if (png_image_begin_read_from_memory(&guard.image, bytes.data(), bytes.size()) == 0) {
    throw Error(ErrorCode::CorruptData, path.string() + ": " + guard.image.message);
  }
}

inline AnyImage decode_png(const std::vector<unsigned char>& bytes,
                           const std::filesystem::path& path) {
  PngImageGuard guard;
  png_begin(guard, bytes, path);
  const bool color = (guard.image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  guard.image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int width = static_cast<int>(guard.image.width);
  const int height = static_cast<int>(guard.image.height);
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(guard.image));
  if (png_image_finish_read(&guard.image, nullptr, buffer.data(), 0, nullptr) == 0) {
    throw Error(ErrorCode::CorruptData, path.string() + ": " + guard.image.message);
  }
  if (color) return ColorImage(width, height, std::move(buffer));
  return GrayImage(width, height, std::move(buffer));
}

// libjpeg reports fatal errors through a callback that must not return; the
// decoder below longjmps back to its own frame, which only holds trivially
// destructible state between setjmp and the jump.
struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  bool warned;
  char message[JMSG_LENGTH_MAX];
};

extern "C" {
inline void fusionbench_jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, mgr->message);
  std::longjmp(mgr->jump, 1);
}

inline void fusionbench_jpeg_emit_message(j_common_ptr cinfo, int level) {
  // Negative levels are warnings such as "premature end of data"; treat
  // them as corruption rather than silently decoding a padded image.
  if (level < 0) {
    auto* mgr = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    if (!mgr->warned) (*cinfo->err->format_message)(cinfo, mgr->message);
    mgr->warned = true;
  }
}
}

struct JpegDecodeResult {
  int width = 0;
  int height = 0;
  int channels = 0;
  bool failed = false;
  bool unsupported = false;
  std::string message;
  std::vector<std::uint8_t> pixels;
};

inline void decode_jpeg_into(const std::vector<unsigned char>& bytes, bool header_only,
                             JpegDecodeResult* result) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = fusionbench_jpeg_error_exit;
  err.base.emit_message = fusionbench_jpeg_emit_message;
  err.warned = false;
  err.message[0] = '\0';
  if (setjmp(err.jump) != 0) {
    jpeg_destroy_decompress(&cinfo);
    result->failed = true;
    result->message = err.message;
    return;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.jpeg_color_space == JCS_CMYK || cinfo.jpeg_color_space == JCS_YCCK) {
    jpeg_destroy_decompress(&cinfo);
    result->unsupported = true;
    result->message = "CMYK JPEG";
    return;
  }
  const bool gray = cinfo.num_components == 1;
  cinfo.out_color_space = gray ? JCS_GRAYSCALE : JCS_RGB;
  result->width = static_cast<int>(cinfo.image_width);
  result->height = static_cast<int>(cinfo.image_height);
  result->channels = gray ? 1 : 3;
  if (header_only) {
    jpeg_destroy_decompress(&cinfo);
    return;
  }
  jpeg_start_decompress(&cinfo);
  const std::size_t stride = static_cast<std::size_t>(cinfo.output_width) *
                             static_cast<std::size_t>(cinfo.output_components);
  result->pixels.resize(stride * cinfo.output_height);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = result->pixels.data() + stride * cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  if (err.warned) {
    result->failed = true;
    result->message = err.message;
  }
}

inline JpegDecodeResult run_jpeg(const std::vector<unsigned char>& bytes,
                                 const std::filesystem::path& path, bool header_only) {
  JpegDecodeResult result;
  decode_jpeg_into(bytes, header_only, &result);
  if (result.unsupported) {
    throw Error(ErrorCode::UnsupportedFormat, path.string() + ": " + result.message);
  }
  if (result.failed) throw Error(ErrorCode::CorruptData, path.string() + ": " + result.message);
  return result;
}

inline AnyImage decode_jpeg(const std::vector<unsigned char>& bytes,
                            const std::filesystem::path& path) {
  JpegDecodeResult r = run_jpeg(bytes, path, false);
  if (r.channels == 1) return GrayImage(r.width, r.height, std::move(r.pixels));
  return ColorImage(r.width, r.height, std::move(r.pixels));
}

}  // namespace detail

/// Decodes a PNG or JPEG file. Single-channel files yield a GrayImage, all
/// others (RGB, palette, gray+alpha composited) a ColorImage or GrayImage
/// according to whether the source carries color.
inline AnyImage load_image(const std::filesystem::path& path) {
  const auto bytes = detail::read_file_bytes(path);
  switch (detail::sniff_format(bytes, path)) {
    case ImageFormat::Png: return detail::decode_png(bytes, path);
    case ImageFormat::Jpeg: return detail::decode_jpeg(bytes, path);
  }
  throw Error(ErrorCode::UnsupportedFormat, path.string());
}

/// Header-only probe, no pixel decoding.
inline ImageInfo read_image_info(const std::filesystem::path& path) {
  const auto bytes = detail::read_file_bytes(path);
  const ImageFormat format = detail::sniff_format(bytes, path);
  if (format == ImageFormat::Png) {
    detail::PngImageGuard guard;
    detail::png_begin(guard, bytes, path);
    const int channels = (guard.image.format & PNG_FORMAT_FLAG_COLOR) ? 3 : 1;
    return {format, static_cast<int>(guard.image.width), static_cast<int>(guard.image.height),
            channels};
  }
  const auto r = detail::run_jpeg(bytes, path, true);
  return {format, r.width, r.height, r.channels};
}

inline GrayImage load_gray(const std::filesystem::path& path) {
  return std::visit([](const auto& img) { return to_grayscale(img); }, load_image(path));
}

inline ColorImage load_color(const std::filesystem::path& path) {
  return std::visit([](const auto& img) { return to_color(img); }, load_image(path));
}

template <int C>
void save_png(const Image<C>& img, const std::filesystem::path& path) {
  detail::PngImageGuard guard;
  guard.image.width = static_cast<png_uint_32>(img.width());
  guard.image.height = static_cast<png_uint_32>(img.height());
  guard.image.format = C == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  if (png_image_write_to_file(&guard.image, path.c_str(), 0, img.data().data(), 0, nullptr) ==
      0) {
    throw Error(ErrorCode::IoFailure, path.string() + ": " + guard.image.message);
  }
}

inline void save_png(const AnyImage& img, const std::filesystem::path& path) {
  std::visit([&path](const auto& i) { save_png(i, path); }, img);
}

}  // namespace fusionbench
