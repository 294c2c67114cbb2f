#pragma once

#include <string>

#include "occtrack/occlusion.hpp"

namespace occtrack {

/// Reads any PNG as 8-bit RGB. Throws ParseError on decode failure.
Image read_png(const std::string& path);

/// Writes an RGB image.
void write_png(const Image& img, const std::string& path);

/// Writes a mask as single-channel PNG: 0 = occluded, 255 = visible.
void write_mask_png(const OcclusionMask& mask, const std::string& path);

/// Reads a single-channel (or gray-converted) PNG back into a binary mask;
/// pixels >= 128 count as visible.
OcclusionMask read_mask_png(const std::string& path);

}  // namespace occtrack
