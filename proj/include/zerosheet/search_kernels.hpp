#pragma once

// Data-parallel inner loops of the search. Each kernel has a serial
// reference and an OpenMP variant; both produce bit-identical output
// because every element is a pure function of its own inputs.

#include <optional>
#include <span>
#include <vector>

#include "zerosheet/search.hpp"

namespace zerosheet::kernels {

/// Root slice at one continuation phase; empty if the slice is degenerate
/// or does not have `expected_degree` roots.
using PathNode = std::optional<RootSlice>;

PathNode solve_node(const BivariatePoly& poly, double phase, std::size_t expected_degree, const RootOptions& opts);

std::vector<PathNode> solve_path_serial(const BivariatePoly& poly, std::span<const double> phases,
                                        std::size_t expected_degree, const RootOptions& opts);
std::vector<PathNode> solve_path_omp(const BivariatePoly& poly, std::span<const double> phases,
                                     std::size_t expected_degree, const RootOptions& opts);

/// build_system -> nullspace_min -> extract_blur for one track. A vanishing
/// h block yields a candidate flagged `degenerate` instead of an exception.
BlurCandidate evaluate_track(const SheetTrack& track, std::span<const SamplePoint> points, std::size_t m,
                             std::size_t n, const SearchConfig& cfg);

std::vector<BlurCandidate> evaluate_tracks_serial(std::span<const SheetTrack> tracks,
                                                  std::span<const SamplePoint> points, std::size_t m,
                                                  std::size_t n, const SearchConfig& cfg);
std::vector<BlurCandidate> evaluate_tracks_omp(std::span<const SheetTrack> tracks,
                                               std::span<const SamplePoint> points, std::size_t m, std::size_t n,
                                               const SearchConfig& cfg);

}  // namespace zerosheet::kernels
