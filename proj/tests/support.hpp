#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "zerosheet/image.hpp"
#include "zerosheet/zpoly.hpp"

namespace testsupport {

using zerosheet::cplx;
using zerosheet::Image;

inline Image random_image(std::size_t w, std::size_t h, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  Image img(w, h);
  for (double& s : img.samples()) s = d(rng);
  return img;
}

// Positive blur with unit sum.
inline Image random_blur(std::size_t w, std::size_t h, std::mt19937_64& rng) {
  Image b = random_image(w, h, rng, 0.05, 1.0);
  return b.scaled(1.0 / b.sum());
}

inline cplx random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 2.0 * 3.14159265358979323846);
  return std::polar(1.0, d(rng));
}

inline cplx random_in_disc(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> d(-radius, radius);
  return {d(rng), d(rng)};
}

// Direct double sum, independent of the BivariatePoly machinery.
inline cplx direct_ztransform(const Image& img, cplx u, cplx v) {
  cplx acc = 0.0;
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) acc += img(x, y) * std::pow(u, double(x)) * std::pow(v, double(y));
  }
  return acc / double(img.width() * img.height());
}

// Repeated multiplication by (v - gamma), ascending coefficients.
inline std::vector<cplx> product_expansion(const std::vector<cplx>& gammas) {
  std::vector<cplx> c{1.0};
  for (cplx g : gammas) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= g * c[i];
    }
    c = std::move(next);
  }
  return c;
}

// e_k by summing products over all k-subsets.
inline cplx brute_elementary(const std::vector<cplx>& gammas, std::size_t k) {
  const std::size_t n = gammas.size();
  cplx total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (std::size_t(__builtin_popcountll(mask)) != k) continue;
    cplx prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) prod *= gammas[i];
    }
    total += prod;
  }
  return total;
}

inline double horner_abs(const std::vector<cplx>& a, cplx z) {
  cplx acc = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
  return std::abs(acc);
}

// The three-blur protocol on a 40x40 synthetic image.
struct Protocol {
  Image original = zerosheet::synth_image(40, 40, 7);
  std::vector<Image> blurs{zerosheet::synth_blur(2, 2, 8), zerosheet::synth_blur(2, 3, 9),
                           zerosheet::synth_blur(3, 3, 10)};
  Image convolved() const {
    Image g = original;
    for (const Image& b : blurs) g = zerosheet::convolve(g, b);
    return g;
  }
};

inline Image unit_sum(const Image& img) { return img.scaled(1.0 / img.sum()); }

}  // namespace testsupport
