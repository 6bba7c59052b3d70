#include "zerosheet/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace zerosheet {

namespace {

void check_dims(std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) {
    throw std::invalid_argument("image dimensions must be positive, got " + std::to_string(width) +
                                "x" + std::to_string(height));
  }
}

class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed ^ 0x9E3779B97F4A7C15ULL) { next(); }

  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

 private:
  std::uint64_t state_;
};

}  // namespace

Image::Image(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  if (!std::isfinite(fill)) throw std::invalid_argument("image fill value is not finite");
  samples_.assign(width * height, fill);
}

Image::Image(std::size_t width, std::size_t height, std::vector<double> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  check_dims(width, height);
  if (samples_.size() != width * height) {
    throw std::invalid_argument("image sample count " + std::to_string(samples_.size()) +
                                " does not match " + std::to_string(width) + "x" +
                                std::to_string(height));
  }
  for (double s : samples_) {
    if (!std::isfinite(s)) throw std::invalid_argument("image contains a non-finite sample");
  }
}

Image Image::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t height = rows.size();
  const std::size_t width = height == 0 ? 0 : rows.begin()->size();
  std::vector<double> samples;
  samples.reserve(width * height);
  for (const auto& row : rows) {
    if (row.size() != width) throw std::invalid_argument("ragged rows in Image::from_rows");
    samples.insert(samples.end(), row.begin(), row.end());
  }
  return Image(width, height, std::move(samples));
}

double Image::sum() const noexcept {
  double total = 0.0;
  for (double s : samples_) total += s;
  return total;
}

double Image::max_abs() const noexcept {
  double m = 0.0;
  for (double s : samples_) m = std::max(m, std::abs(s));
  return m;
}

Image Image::scaled(double factor) const {
  Image out = *this;
  for (double& s : out.samples_) s *= factor;
  return out;
}

Image convolve(const Image& f, const Image& h) {
  const std::size_t out_w = f.width() + h.width() - 1;
  const std::size_t out_h = f.height() + h.height() - 1;
  std::vector<double> out(out_w * out_h, 0.0);
  for (std::size_t b = 0; b < h.height(); ++b) {
    for (std::size_t a = 0; a < h.width(); ++a) {
      const double w = h(a, b);
      if (w == 0.0) continue;
      for (std::size_t y = 0; y < f.height(); ++y) {
        double* dst = &out[(y + b) * out_w + a];
        const double* src = &f.samples()[y * f.width()];
        for (std::size_t x = 0; x < f.width(); ++x) dst[x] += w * src[x];
      }
    }
  }
  return Image(out_w, out_h, std::move(out));
}

Image transpose(const Image& img) {
  Image out(img.height(), img.width());
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) out(y, x) = img(x, y);
  }
  return out;
}

double max_abs_difference(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument("max_abs_difference: image sizes differ");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.samples()[i] - b.samples()[i]));
  }
  return m;
}

Image synth_image(std::size_t width, std::size_t height, std::uint64_t seed) {
  check_dims(width, height);
  Lcg64 rng(seed);
  std::vector<double> samples(width * height);
  for (double& s : samples) s = static_cast<double>((rng.next() >> 33) % 256);
  return Image(width, height, std::move(samples));
}

Image synth_blur(std::size_t width, std::size_t height, std::uint64_t seed) {
  check_dims(width, height);
  Lcg64 rng(seed);
  std::vector<double> samples(width * height);
  for (double& s : samples) s = static_cast<double>((rng.next() >> 33) % 256 + 1) / 256.0;
  return Image(width, height, std::move(samples));
}

}  // namespace zerosheet
