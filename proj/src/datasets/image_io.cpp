#include "ttl/datasets/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <vector>

#include "ttl/core/error.hpp"

namespace ttl {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

torch::Tensor read_png(const std::filesystem::path& path, int channels) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::IoFailure, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::IoFailure, "cannot decode PNG " + path.string());
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  png_set_strip_16(png);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  const int src_c = png_get_channels(png, info);
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(w) * h * src_c);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = buf.data() + static_cast<std::size_t>(y) * w * src_c;
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);

  auto hwc = torch::from_blob(buf.data(), {h, w, src_c}, torch::kUInt8).to(torch::kFloat32);
  auto chw = hwc.permute({2, 0, 1}).contiguous().div(127.5).sub(1.0);
  if (src_c == channels) return chw;
  if (src_c == 1) return chw.expand({channels, h, w}).contiguous();
  if (channels == 1) return chw.mean(0, true);
  throw Error(ErrorCode::ShapeMismatch, path.string() + ": cannot map " + std::to_string(src_c) + " channels to " +
                                            std::to_string(channels));
}

void write_png(const std::filesystem::path& path, const torch::Tensor& chw) {
  if (chw.dim() != 3 || (chw.size(0) != 1 && chw.size(0) != 3))
    throw Error(ErrorCode::ShapeMismatch, "write_png expects 1 or 3 channel C x H x W");
  const int c = static_cast<int>(chw.size(0));
  const int h = static_cast<int>(chw.size(1));
  const int w = static_cast<int>(chw.size(2));
  auto hwc = chw.detach()
                 .to(torch::kFloat32)
                 .clamp(-1.0, 1.0)
                 .add(1.0)
                 .mul(127.5)
                 .round()
                 .to(torch::kUInt8)
                 .permute({1, 2, 0})
                 .contiguous();

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw Error(ErrorCode::IoFailure, "cannot create " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoFailure, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoFailure, "cannot encode PNG " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, w, h, 8, c == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  auto* base = hwc.data_ptr<std::uint8_t>();
  for (int y = 0; y < h; ++y) png_write_row(png, base + static_cast<std::size_t>(y) * w * c);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace ttl
