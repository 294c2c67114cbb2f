#include "occtrack/png_io.hpp"

#include <png.h>

#include <cstring>
#include <vector>

#include "occtrack/errors.hpp"

namespace occtrack {

Image read_png(const std::string& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw ParseError(path, 0, png.message);
  }
  png.format = PNG_FORMAT_RGB;

  Image img(static_cast<int>(png.width), static_cast<int>(png.height));
  if (!png_image_finish_read(&png, nullptr, img.data.data(), 0, nullptr)) {
    png_image_free(&png);
    throw ParseError(path, 0, png.message);
  }
  return img;
}

void write_png(const Image& img, const std::string& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width);
  png.height = static_cast<png_uint_32>(img.height);
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, img.data.data(), 0,
                               nullptr)) {
    throw ParseError(path, 0, png.message);
  }
}

void write_mask_png(const OcclusionMask& mask, const std::string& path) {
  std::vector<std::uint8_t> gray(mask.data.size());
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    gray[i] = mask.data[i] ? 255 : 0;
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(mask.width);
  png.height = static_cast<png_uint_32>(mask.height);
  png.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.c_str(), 0, gray.data(), 0,
                               nullptr)) {
    throw ParseError(path, 0, png.message);
  }
}

OcclusionMask read_mask_png(const std::string& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw ParseError(path, 0, png.message);
  }
  png.format = PNG_FORMAT_GRAY;

  std::vector<std::uint8_t> gray(static_cast<std::size_t>(png.width) *
                                 png.height);
  if (!png_image_finish_read(&png, nullptr, gray.data(), 0, nullptr)) {
    png_image_free(&png);
    throw ParseError(path, 0, png.message);
  }
  OcclusionMask mask(static_cast<int>(png.width), static_cast<int>(png.height));
  for (std::size_t i = 0; i < gray.size(); ++i) {
    mask.data[i] = gray[i] >= 128 ? 1 : 0;
  }
  return mask;
}

}  // namespace occtrack
