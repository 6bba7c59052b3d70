#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "zerosheet/error.hpp"
#include "zerosheet/search.hpp"

namespace zerosheet {

namespace {

constexpr int kMaxReplacements = 8;

bool in_open_unit(double t) { return t > 0.0 && t < 1.0; }

bool usable(const BivariatePoly& poly, cplx u, std::size_t expected_degree, const RootOptions& opts) {
  try {
    const UniPoly slice = slice_in_v(poly, u);
    if (slice.effective_degree() != expected_degree) return false;
    find_roots(slice, opts);
    return true;
  } catch (const DegenerateSlice&) {
    return false;
  } catch (const RootFindingFailure&) {
    return false;
  }
}

}  // namespace

void SearchConfig::validate() const {
  if (blur_m < 1 || blur_n < 1) throw std::invalid_argument("blur dimensions must be positive");
  if (search_n() < 2) {
    throw AxisError(axis == Axis::kV ? "blur height 1 has no roots in v; search along u (axis U)"
                                     : "blur width 1 has no roots in u; search along v (axis V)");
  }
  if (!(phase_step > 0.0 && phase_step < std::numbers::pi / 8)) {
    throw std::invalid_argument("phase_step must lie in (0, pi/8)");
  }
  if (!(sample_spacing >= 0.0) || !std::isfinite(sample_spacing) || !std::isfinite(base_phase)) {
    throw std::invalid_argument("sample_spacing and base_phase must be finite, spacing >= 0");
  }
  if (!in_open_unit(tol_null) || !in_open_unit(tol_real) || !in_open_unit(tol_track_ratio) ||
      !in_open_unit(roots.tol_root)) {
    throw std::invalid_argument("tolerances must lie in (0, 1)");
  }
  if (max_combinations == 0) throw std::invalid_argument("max_combinations must be positive");
  if (max_halvings < 0) throw std::invalid_argument("max_halvings must be non-negative");
}

std::size_t compute_q(std::size_t m, std::size_t n) {
  if (n < 2) throw AxisError("n = " + std::to_string(n) + " has no roots along this axis; transpose the search");
  if (m < 1) throw std::invalid_argument("m must be positive");
  const std::size_t num = m * n;
  const std::size_t den = n - 1;
  return (num + den - 1) / den;
}

std::vector<SamplePoint> choose_sample_points(std::size_t q, const SearchConfig& cfg, const BivariatePoly& poly) {
  if (q < 2) throw std::invalid_argument("need at least two sample points");
  const double spacing = cfg.sample_spacing > 0.0 ? cfg.sample_spacing : 2.0 * std::numbers::pi / static_cast<double>(q);
  const std::size_t degree = poly.generic_degree_v();
  if (degree == 0) throw SamplingFailure("polynomial has no v dependence; no roots to sample");

  std::vector<SamplePoint> points;
  points.reserve(q);
  for (std::size_t j = 0; j < q; ++j) {
    double phase = cfg.base_phase + static_cast<double>(j) * spacing;
    if (!points.empty() && phase <= points.back().phase) phase = points.back().phase + cfg.phase_step;
    bool found = false;
    for (int attempt = 0; attempt <= kMaxReplacements; ++attempt) {
      const cplx u = std::polar(1.0, phase);
      if (usable(poly, u, degree, cfg.roots)) {
        points.push_back({j + 1, phase, u});
        found = true;
        break;
      }
      phase += cfg.phase_step;
    }
    if (!found) {
      throw SamplingFailure("no non-degenerate sample point near phase " +
                            std::to_string(cfg.base_phase + static_cast<double>(j) * spacing));
    }
  }
  return points;
}

}  // namespace zerosheet
