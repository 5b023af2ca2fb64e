#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mrecon/tensor.hpp"

namespace mrecon::png {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, top row first
};

void write(const std::filesystem::path& path, const GrayImage& img);
GrayImage read(const std::filesystem::path& path);

// Display normalization: value / scale clamped to [0, 1], then * 255 rounded.
// Magnitude of frame t; rows are y, columns x.
GrayImage frame_image(const DenseTensor& x, std::size_t t, double scale);
// |ref - rec| / scale mapped linearly from [0, range] to [0, 255].
GrayImage error_image(const DenseTensor& ref, const DenseTensor& rec, std::size_t t, double scale,
                      double range);
// y-t profile at image column `column`: rows are y, columns t.
GrayImage yt_image(const DenseTensor& x, std::size_t column, double scale);
GrayImage yt_error_image(const DenseTensor& ref, const DenseTensor& rec, std::size_t column,
                         double scale, double range);

// Minimal line plot of y against x (connected points, light frame).
GrayImage line_plot(const std::vector<double>& xs, const std::vector<double>& ys,
                    std::size_t width = 320, std::size_t height = 240);

}  // namespace mrecon::png
