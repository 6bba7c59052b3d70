#include "zerosheet/search_kernels.hpp"

#include <exception>

#include "zerosheet/error.hpp"

namespace zerosheet::kernels {

PathNode solve_node(const BivariatePoly& poly, double phase, std::size_t expected_degree, const RootOptions& opts) {
  try {
    RootSlice slice = solve_slice(poly, std::polar(1.0, phase), opts);
    if (slice.count() != expected_degree) return std::nullopt;
    return slice;
  } catch (const DegenerateSlice&) {
    return std::nullopt;
  } catch (const RootFindingFailure&) {
    return std::nullopt;
  }
}

std::vector<PathNode> solve_path_serial(const BivariatePoly& poly, std::span<const double> phases,
                                        std::size_t expected_degree, const RootOptions& opts) {
  std::vector<PathNode> nodes(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) nodes[i] = solve_node(poly, phases[i], expected_degree, opts);
  return nodes;
}

std::vector<PathNode> solve_path_omp(const BivariatePoly& poly, std::span<const double> phases,
                                     std::size_t expected_degree, const RootOptions& opts) {
  std::vector<PathNode> nodes(phases.size());
  const auto count = static_cast<std::ptrdiff_t>(phases.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < count; ++i) nodes[i] = solve_node(poly, phases[i], expected_degree, opts);
  return nodes;
}

BlurCandidate evaluate_track(const SheetTrack& track, std::span<const SamplePoint> points, std::size_t m,
                             std::size_t n, const SearchConfig& cfg) {
  const NullspaceResult ns = nullspace_min(build_system(track, points, m, n));
  BlurCandidate cand;
  try {
    cand = extract_blur(ns, m, n, points.size(), cfg);
  } catch (const DegenerateCandidate&) {
    cand.h = Image(m, n, 0.0);
    cand.p.assign(points.size(), cplx{});
    cand.sigma_min = ns.sigma_min;
    cand.sigma_second = ns.sigma_second;
    cand.sigma_gap = ns.sigma_second > 0.0 ? ns.sigma_min / ns.sigma_second : 1.0;
    cand.degenerate = true;
  }
  cand.combination = track.combination;
  return cand;
}

std::vector<BlurCandidate> evaluate_tracks_serial(std::span<const SheetTrack> tracks,
                                                  std::span<const SamplePoint> points, std::size_t m,
                                                  std::size_t n, const SearchConfig& cfg) {
  std::vector<BlurCandidate> out;
  out.reserve(tracks.size());
  for (const SheetTrack& t : tracks) out.push_back(evaluate_track(t, points, m, n, cfg));
  return out;
}

std::vector<BlurCandidate> evaluate_tracks_omp(std::span<const SheetTrack> tracks,
                                               std::span<const SamplePoint> points, std::size_t m, std::size_t n,
                                               const SearchConfig& cfg) {
  std::vector<BlurCandidate> out(tracks.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(tracks.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[i] = evaluate_track(tracks[i], points, m, n, cfg);
    } catch (...) {
#pragma omp critical(zerosheet_track_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace zerosheet::kernels
