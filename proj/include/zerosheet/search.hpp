#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "zerosheet/image.hpp"
#include "zerosheet/roots.hpp"
#include "zerosheet/zpoly.hpp"

namespace zerosheet {

enum class Axis { kV, kU };

enum class Execution { kSerial, kParallel };

/// Blur hypothesis and numerical knobs of the zero-sheet search.
///
/// blur_m x blur_n is always given in image orientation (width x height).
/// With axis = kU the search runs on the u roots instead, which is how
/// single-row blurs (blur_n = 1) are found.
struct SearchConfig {
  std::size_t blur_m = 2;
  std::size_t blur_n = 2;
  double base_phase = 0.3;
  /// Continuation step used to carry roots from one sample point to the next.
  double phase_step = 0.01;
  /// Phase distance between consecutive sample points; 0 spreads the q
  /// points evenly around the unit circle (2 pi / q).
  double sample_spacing = 0.0;
  double tol_null = 1e-6;
  double tol_real = 1e-6;
  double tol_track_ratio = 0.5;
  std::size_t max_combinations = 1'000'000;
  int max_halvings = 8;
  Axis axis = Axis::kV;
  bool early_stop = false;
  RootOptions roots;

  /// Throws std::invalid_argument (or AxisError for a rootless axis).
  void validate() const;

  /// (m, n) as seen by the v-root search after any axis swap.
  std::size_t search_m() const noexcept { return axis == Axis::kV ? blur_m : blur_n; }
  std::size_t search_n() const noexcept { return axis == Axis::kV ? blur_n : blur_m; }
};

struct SamplePoint {
  std::size_t index = 0;  // 1-based j
  double phase = 0.0;
  cplx value{};           // exp(i phase)
};

/// n - 1 hypothesized blur roots followed from the base point to every
/// other sample point.
struct SheetTrack {
  std::vector<std::size_t> combination;          // indices into the base slice roots
  std::vector<std::vector<cplx>> per_point_roots;  // q entries of n - 1 roots
  std::vector<double> tracking_margins;           // worst d_best/d_second per segment
  int level = 0;                                  // number of phase_step halvings used
};

struct NullspaceResult {
  double sigma_min = 0.0;
  double sigma_second = 0.0;
  Eigen::VectorXcd xi;
};

struct BlurCandidate {
  Image h{1, 1};
  std::vector<cplx> p;
  double sigma_min = 0.0;
  double sigma_second = 0.0;
  double sigma_gap = 1.0;
  double realness = 0.0;
  std::vector<std::size_t> combination;
  bool accepted = false;
  bool zero_sum = false;     // normalized to max|h| = 1 instead of sum h = 1
  bool degenerate = false;   // h block vanished; h left at zero
};

struct SearchReport {
  SearchConfig config;
  std::size_t q = 0;
  std::vector<SamplePoint> points;
  std::size_t root_count = 0;            // N' at the base point
  std::size_t combinations_total = 0;    // C(N', n - 1), saturated
  std::size_t combinations_evaluated = 0;
  std::size_t tracking_failures = 0;
  bool truncated = false;
  int max_level_used = 0;
  std::vector<BlurCandidate> candidates;  // lexicographic combination order
  std::optional<std::size_t> best;        // index into candidates

  const BlurCandidate* best_candidate() const { return best ? &candidates[*best] : nullptr; }
};

/// q = ceil(m n / (n - 1)). Throws AxisError for n < 2.
std::size_t compute_q(std::size_t m, std::size_t n);

/// q distinct unit-circle points starting at base_phase. A point whose
/// slice of `poly` is degenerate (zero, root failure, or degree below the
/// generic v-degree) is advanced by phase_step, at most 8 times.
std::vector<SamplePoint> choose_sample_points(std::size_t q, const SearchConfig& cfg, const BivariatePoly& poly);

struct TrackStep {
  std::vector<std::size_t> indices;  // into next.roots, in selected order
  double worst_ratio = 0.0;
};

/// Nearest-neighbour correspondence of the selected roots of `prev` in
/// `next`, injective and guarded by d_best / d_second <= tol_ratio.
/// Distances are measured from `predicted[k]` when given (one per selected
/// root), otherwise from the selected roots themselves.
TrackStep track_roots(const RootSlice& prev, const RootSlice& next, std::span<const std::size_t> selected,
                      double tol_ratio, std::span<const cplx> predicted = {});

/// Lexicographic k-subsets of {0, ..., n - 1}.
class Combinations {
 public:
  Combinations(std::size_t n, std::size_t k);
  /// Writes the next subset into `out`; false when exhausted.
  bool next(std::vector<std::size_t>& out);
  /// C(n, k), saturating at SIZE_MAX.
  static std::size_t count(std::size_t n, std::size_t k);

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::size_t> current_;
  bool started_ = false;
  bool done_ = false;
};

struct CombinationList {
  std::vector<std::vector<std::size_t>> sets;
  bool truncated = false;
};

CombinationList enumerate_combinations(std::size_t n_prime, std::size_t k, std::size_t cap);

/// Homogeneous (q n) x (m n + q) system in [h(0,0) .. h(m-1,n-1), p_1 .. p_q]
/// with h column index y * m + x and row index j * n + y:
///   sum_x h(x, y) u_j^x - p_j c_y(j) = 0.
Eigen::MatrixXcd build_system(const SheetTrack& track, std::span<const SamplePoint> points, std::size_t m,
                              std::size_t n);

/// Two smallest singular values and the right singular vector of the smallest.
NullspaceResult nullspace_min(const Eigen::MatrixXcd& a);

/// Phase-fixes xi, projects h to its real part, normalizes sum h = 1 and
/// applies the acceptance test. Throws DegenerateCandidate for a zero h block.
BlurCandidate extract_blur(const NullspaceResult& ns, std::size_t m, std::size_t n, std::size_t q,
                           const SearchConfig& cfg);

/// Full search for an m x n blur factor of `poly`. Candidates are reported in
/// lexicographic order regardless of `exec`.
SearchReport search_blur(const BivariatePoly& poly, const SearchConfig& cfg,
                         Execution exec = Execution::kParallel);

}  // namespace zerosheet
