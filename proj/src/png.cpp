#include "mrecon/png.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

#include "mrecon/io.hpp"

namespace mrecon::png {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

std::uint8_t to_byte(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

void write_png_file(const std::filesystem::path& path, const GrayImage& img) {
  File f(std::fopen(path.string().c_str(), "wb"));
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng write failed for '" + path.string() + "'");
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height),
               8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t r = 0; r < img.height; ++r)
    png_write_row(png, const_cast<png_bytep>(img.pixels.data() + r * img.width));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write(const std::filesystem::path& path, const GrayImage& img) {
  if (img.width == 0 || img.height == 0 || img.pixels.size() != img.width * img.height)
    throw std::invalid_argument("png: image shape mismatch");
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  write_png_file(tmp, img);
  std::filesystem::rename(tmp, path);
}

GrayImage read(const std::filesystem::path& path) {
  File f(std::fopen(path.string().c_str(), "rb"));
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng read failed for '" + path.string() + "'");
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY || png_get_bit_depth(png, info) != 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("png: only 8-bit grayscale is supported");
  }
  GrayImage img;
  img.width = png_get_image_width(png, info);
  img.height = png_get_image_height(png, info);
  img.pixels.resize(img.width * img.height);
  for (std::size_t r = 0; r < img.height; ++r) png_read_row(png, img.pixels.data() + r * img.width, nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

namespace {

void check_frame(const DenseTensor& x, std::size_t t) {
  if (x.ndim() != 3 || t >= x.dim(2)) throw std::out_of_range("png: frame index out of range");
}

void check_column(const DenseTensor& x, std::size_t column) {
  if (x.ndim() != 3 || column >= x.dim(0)) throw std::out_of_range("png: column out of range");
}

}  // namespace

GrayImage frame_image(const DenseTensor& x, std::size_t t, double scale) {
  check_frame(x, t);
  GrayImage img{x.dim(0), x.dim(1), {}};
  img.pixels.resize(img.width * img.height);
  for (std::size_t j = 0; j < img.height; ++j)
    for (std::size_t i = 0; i < img.width; ++i)
      img.pixels[i + img.width * j] = to_byte(std::abs(x(i, j, t)) / scale);
  return img;
}

GrayImage error_image(const DenseTensor& ref, const DenseTensor& rec, std::size_t t, double scale,
                      double range) {
  check_frame(ref, t);
  require_same_dims(ref, rec, "error_image");
  GrayImage img{ref.dim(0), ref.dim(1), {}};
  img.pixels.resize(img.width * img.height);
  for (std::size_t j = 0; j < img.height; ++j)
    for (std::size_t i = 0; i < img.width; ++i) {
      const double e = std::abs(std::abs(ref(i, j, t)) - std::abs(rec(i, j, t))) / scale;
      img.pixels[i + img.width * j] = to_byte(e / range);
    }
  return img;
}

GrayImage yt_image(const DenseTensor& x, std::size_t column, double scale) {
  check_column(x, column);
  GrayImage img{x.dim(2), x.dim(1), {}};
  img.pixels.resize(img.width * img.height);
  for (std::size_t j = 0; j < img.height; ++j)
    for (std::size_t t = 0; t < img.width; ++t)
      img.pixels[t + img.width * j] = to_byte(std::abs(x(column, j, t)) / scale);
  return img;
}

GrayImage yt_error_image(const DenseTensor& ref, const DenseTensor& rec, std::size_t column,
                         double scale, double range) {
  check_column(ref, column);
  require_same_dims(ref, rec, "yt_error_image");
  GrayImage img{ref.dim(2), ref.dim(1), {}};
  img.pixels.resize(img.width * img.height);
  for (std::size_t j = 0; j < img.height; ++j)
    for (std::size_t t = 0; t < img.width; ++t) {
      const double e = std::abs(std::abs(ref(column, j, t)) - std::abs(rec(column, j, t))) / scale;
      img.pixels[t + img.width * j] = to_byte(e / range);
    }
  return img;
}

GrayImage line_plot(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t width,
                    std::size_t height) {
  if (xs.size() != ys.size()) throw std::invalid_argument("line_plot: size mismatch");
  GrayImage img{width, height, std::vector<std::uint8_t>(width * height, 255)};
  const std::size_t margin = 16;
  auto put = [&](long px, long py, std::uint8_t v) {
    if (px >= 0 && py >= 0 && px < static_cast<long>(width) && py < static_cast<long>(height))
      img.pixels[static_cast<std::size_t>(px) + width * static_cast<std::size_t>(py)] = v;
  };
  for (std::size_t i = margin; i < width - margin; ++i) {
    put(static_cast<long>(i), static_cast<long>(margin), 200);
    put(static_cast<long>(i), static_cast<long>(height - margin), 200);
  }
  for (std::size_t j = margin; j <= height - margin; ++j) {
    put(static_cast<long>(margin), static_cast<long>(j), 200);
    put(static_cast<long>(width - margin), static_cast<long>(j), 200);
  }
  std::vector<double> fy;
  for (double y : ys)
    if (std::isfinite(y)) fy.push_back(y);
  if (xs.empty() || fy.empty()) return img;
  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymin, ymax] = std::minmax_element(fy.begin(), fy.end());
  const double xr = *xmax > *xmin ? *xmax - *xmin : 1.0;
  const double yr = *ymax > *ymin ? *ymax - *ymin : 1.0;
  const double w = static_cast<double>(width - 2 * margin - 8);
  const double h = static_cast<double>(height - 2 * margin - 8);
  auto to_px = [&](std::size_t k) {
    const double x = static_cast<double>(margin + 4) + (xs[k] - *xmin) / xr * w;
    const double y = static_cast<double>(height - margin - 4) -
                     (std::isfinite(ys[k]) ? (ys[k] - *ymin) / yr : 1.0) * h;
    return std::pair{x, y};
  };
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const auto [x0, y0] = to_px(k);
    for (long dy = -2; dy <= 2; ++dy)
      for (long dx = -2; dx <= 2; ++dx) put(std::lround(x0) + dx, std::lround(y0) + dy, 0);
    if (k + 1 < xs.size()) {
      const auto [x1, y1] = to_px(k + 1);
      const int steps = static_cast<int>(std::max(std::abs(x1 - x0), std::abs(y1 - y0))) + 1;
      for (int s = 0; s <= steps; ++s) {
        const double a = static_cast<double>(s) / steps;
        put(std::lround(x0 + a * (x1 - x0)), std::lround(y0 + a * (y1 - y0)), 60);
      }
    }
  }
  return img;
}

}  // namespace mrecon::png
