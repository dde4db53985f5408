#pragma once

#include <string>

#include "tonetk/color.hpp"

namespace tonetk {

// 8-bit channels map to [0,1] by v/255 on read; writes round and clamp.
// Format is picked by extension: .png (libpng) or .ppm (binary P6 fallback).
RgbImage read_image(const std::string& path);
void write_image(const RgbImage& img, const std::string& path);

RgbImage read_png(const std::string& path);
void write_png(const RgbImage& img, const std::string& path);
RgbImage read_ppm(const std::string& path);
void write_ppm(const RgbImage& img, const std::string& path);

} // namespace tonetk
