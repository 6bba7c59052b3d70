#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zerosheet/error.hpp"
#include "zerosheet/image.hpp"
#include "zerosheet/search.hpp"

namespace zerosheet {

enum class RestoreMethod { kSpectral, kLeastSquares };

struct RestorationResult {
  Image image{1, 1};                // (M - m + 1) x (N - n + 1)
  RestoreMethod method = RestoreMethod::kSpectral;
  double forward_residual = 0.0;    // max|f * h - g| / max|g|
  double min_h_on_grid = 0.0;       // min|H| / max|H| over the DFT grid
};

/// Ratio below which spectral division is refused.
inline constexpr double kMinSpectrumRatio = 1e-9;

/// F = G / H on the M x N DFT grid, inverse transform, crop. Throws
/// DivisionUnstable when min|H| / max|H| < kMinSpectrumRatio.
RestorationResult spectral_restore(const Image& g, const Image& h);

/// argmin_f ||f * h - g||_2 through the normal equations of the sparse
/// convolution operator, with iterative refinement. Throws DegenerateBlur
/// for a zero blur.
RestorationResult least_squares_restore(const Image& g, const Image& h);

/// No candidate passed the acceptance test; the full search report rides along.
class NoBlurFound : public Error {
 public:
  explicit NoBlurFound(SearchReport report)
      : Error("no blur of the requested size was found"), report_(std::move(report)) {}
  const SearchReport& report() const noexcept { return report_; }

 private:
  SearchReport report_;
};

struct Removal {
  BlurCandidate blur;
  RestorationResult restoration;
  SearchReport report;
  double wall_time_ms = 0.0;
};

/// search_blur on ztransform(g), then spectral_restore with automatic
/// fallback to least_squares_restore. Throws NoBlurFound.
Removal remove_blur(const Image& g, const SearchConfig& cfg, Execution exec = Execution::kParallel);

struct BlurSize {
  std::size_t m = 0;
  std::size_t n = 0;
  friend bool operator==(const BlurSize&, const BlurSize&) = default;
};

struct PipelineResult {
  std::vector<Removal> stages;
  std::optional<std::size_t> failed_stage;  // 0-based
  std::string failure;
  std::optional<SearchReport> failed_report;  // set when the failed stage ran a search

  bool complete() const noexcept { return !failed_stage; }
};

/// Removes the given blur sizes one after another, each stage consuming the
/// previous restored image. Stops at the first stage that fails.
PipelineResult pipeline(const Image& g, const std::vector<BlurSize>& sizes, const SearchConfig& cfg,
                        Execution exec = Execution::kParallel);

}  // namespace zerosheet
