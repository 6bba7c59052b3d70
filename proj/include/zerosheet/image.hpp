#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace zerosheet {

/// Real-valued 2D pixel grid stored row-major: sample (x, y) lives at
/// y * width + x. Width runs along x (the u variable of the z-transform),
/// height along y (the v variable).
class Image {
 public:
  Image(std::size_t width, std::size_t height, double fill = 0.0);
  Image(std::size_t width, std::size_t height, std::vector<double> samples);

  /// Rows are y, entries within a row are x: {{g(0,0), g(1,0)}, {g(0,1), ...}}.
  static Image from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }

  double operator()(std::size_t x, std::size_t y) const { return samples_[y * width_ + x]; }
  double& operator()(std::size_t x, std::size_t y) { return samples_[y * width_ + x]; }

  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }

  double sum() const noexcept;
  double max_abs() const noexcept;
  Image scaled(double factor) const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> samples_;
};

/// Full linear convolution: (f.w + h.w - 1) x (f.h + h.h - 1).
Image convolve(const Image& f, const Image& h);

Image transpose(const Image& img);

double max_abs_difference(const Image& a, const Image& b);

/// Deterministic test image with integer pixels in [0, 255].
///
/// Uses the 64-bit LCG state' = state * 6364136223846793005 + 1442695040888963407
/// (Knuth's MMIX constants), seeded with state = seed ^ 0x9E3779B97F4A7C15 and
/// stepped once at construction. Each pixel steps the state again and takes
/// (state >> 33) % 256, scanning rows in order.
Image synth_image(std::size_t width, std::size_t height, std::uint64_t seed);

/// Deterministic blur with entries k / 256, k in [1, 256], drawn from the
/// same generator as synth_image. Dyadic entries keep f * h exact in double
/// precision for integer images.
Image synth_blur(std::size_t width, std::size_t height, std::uint64_t seed);

}  // namespace zerosheet
