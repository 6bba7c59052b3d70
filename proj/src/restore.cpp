#include "zerosheet/restore.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace zerosheet {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer make_buffer(std::size_t count) {
  auto* raw = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count));
  if (!raw) throw std::bad_alloc();
  return FftwBuffer(raw);
}

void transform(fftw_complex* data, std::size_t width, std::size_t height, int sign) {
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

void check_shapes(const Image& g, const Image& h) {
  if (h.width() > g.width() || h.height() > g.height()) {
    throw std::invalid_argument("blur is larger than the image");
  }
}

struct Spectrum {
  FftwBuffer values;
  double ratio;  // min|H| / max|H|
};

Spectrum blur_spectrum(const Image& h, std::size_t w, std::size_t ht) {
  const std::size_t count = w * ht;
  auto hs = make_buffer(count);
  for (std::size_t i = 0; i < count; ++i) {
    hs[i][0] = 0.0;
    hs[i][1] = 0.0;
  }
  for (std::size_t y = 0; y < h.height(); ++y) {
    for (std::size_t x = 0; x < h.width(); ++x) hs[y * w + x][0] = h(x, y);
  }
  transform(hs.get(), w, ht, FFTW_FORWARD);
  double min_h = std::numeric_limits<double>::infinity(), max_h = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double mag = std::hypot(hs[i][0], hs[i][1]);
    min_h = std::min(min_h, mag);
    max_h = std::max(max_h, mag);
  }
  return {std::move(hs), min_h / max_h};
}

double forward_residual(const Image& f, const Image& h, const Image& g) {
  const double scale = g.max_abs();
  const double diff = max_abs_difference(convolve(f, h), g);
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

RestorationResult spectral_restore(const Image& g, const Image& h) {
  check_shapes(g, h);
  if (h.max_abs() == 0.0) throw DegenerateBlur("blur is identically zero");
  const std::size_t w = g.width(), ht = g.height(), count = w * ht;

  const Spectrum spectrum = blur_spectrum(h, w, ht);
  const double ratio = spectrum.ratio;
  if (!(ratio >= kMinSpectrumRatio)) {
    throw DivisionUnstable("blur spectrum nearly vanishes on the DFT grid (min/max = " + std::to_string(ratio) +
                           "); use least-squares restoration");
  }

  auto gs = make_buffer(count);
  for (std::size_t i = 0; i < count; ++i) {
    gs[i][0] = g.samples()[i];
    gs[i][1] = 0.0;
  }
  transform(gs.get(), w, ht, FFTW_FORWARD);
  const auto& hs = spectrum.values;
  for (std::size_t i = 0; i < count; ++i) {
    const std::complex<double> q = std::complex<double>(gs[i][0], gs[i][1]) / std::complex<double>(hs[i][0], hs[i][1]);
    gs[i][0] = q.real();
    gs[i][1] = q.imag();
  }
  transform(gs.get(), w, ht, FFTW_BACKWARD);

  const std::size_t fw = w - h.width() + 1, fh = ht - h.height() + 1;
  Image f(fw, fh);
  const double norm = 1.0 / static_cast<double>(count);
  for (std::size_t y = 0; y < fh; ++y) {
    for (std::size_t x = 0; x < fw; ++x) f(x, y) = gs[y * w + x][0] * norm;
  }

  RestorationResult result{f, RestoreMethod::kSpectral, 0.0, ratio};
  result.forward_residual = forward_residual(result.image, h, g);
  return result;
}

RestorationResult least_squares_restore(const Image& g, const Image& h) {
  check_shapes(g, h);
  if (h.max_abs() == 0.0) throw DegenerateBlur("blur is identically zero");
  const std::size_t gw = g.width();
  const std::size_t fw = gw - h.width() + 1, fh = g.height() - h.height() + 1;

  using SpMat = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(fw * fh * h.size());
  for (std::size_t fy = 0; fy < fh; ++fy) {
    for (std::size_t fx = 0; fx < fw; ++fx) {
      const auto col = static_cast<Eigen::Index>(fy * fw + fx);
      for (std::size_t b = 0; b < h.height(); ++b) {
        for (std::size_t a = 0; a < h.width(); ++a) {
          if (h(a, b) == 0.0) continue;
          triplets.emplace_back(static_cast<Eigen::Index>((fy + b) * gw + fx + a), col, h(a, b));
        }
      }
    }
  }
  SpMat op(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(fw * fh));
  op.setFromTriplets(triplets.begin(), triplets.end());
  const SpMat normal = SpMat(op.transpose()) * op;

  Eigen::SimplicialLDLT<SpMat> solver(normal);
  if (solver.info() != Eigen::Success || (solver.vectorD().array() <= 0.0).any()) {
    throw DegenerateBlur("normal equations of the convolution operator are singular");
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(g.samples().data(), static_cast<Eigen::Index>(g.size()));
  Eigen::VectorXd f = solver.solve(op.transpose() * rhs);
  // Refinement recovers accuracy lost to squaring the condition number.
  for (int iter = 0; iter < 3; ++iter) {
    const Eigen::VectorXd residual = rhs - op * f;
    f += solver.solve(op.transpose() * residual);
  }
  if (!f.allFinite()) throw DegenerateBlur("least-squares solve produced non-finite values");

  RestorationResult result{Image(fw, fh, std::vector<double>(f.data(), f.data() + f.size())),
                           RestoreMethod::kLeastSquares, 0.0, blur_spectrum(h, gw, g.height()).ratio};
  result.forward_residual = forward_residual(result.image, h, g);
  return result;
}

Removal remove_blur(const Image& g, const SearchConfig& cfg, Execution exec) {
  const auto start = std::chrono::steady_clock::now();
  SearchReport report = search_blur(ztransform(g), cfg, exec);
  const BlurCandidate* best = report.best_candidate();
  if (!best) throw NoBlurFound(std::move(report));
  BlurCandidate blur = *best;

  RestorationResult restored;
  try {
    restored = spectral_restore(g, blur.h);
  } catch (const DivisionUnstable&) {
    restored = least_squares_restore(g, blur.h);
  }
  const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
  return Removal{std::move(blur), std::move(restored), std::move(report), elapsed.count()};
}

}  // namespace zerosheet
