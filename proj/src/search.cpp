#include <algorithm>
#include <cmath>
#include <map>

#include <spdlog/spdlog.h>

#include "zerosheet/error.hpp"
#include "zerosheet/search.hpp"
#include "zerosheet/search_kernels.hpp"

namespace zerosheet {

namespace {

constexpr std::size_t kEarlyStopBlock = 64;

// Where one base root ends up at every sample point.
struct RootTrajectory {
  bool ok = false;
  int depth = 0;                      // deepest halving used on any step
  std::vector<std::size_t> at_point;  // index into the sample slice roots, per point
  std::vector<double> segment_ratio;  // worst ambiguity ratio per segment
};

// Continuation paths between consecutive sample points. Segment j is cut
// into coarse steps of at most phase_step; a step whose match is ambiguous
// is halved locally, up to max_halvings times. Slices live on a dyadic
// grid of the finest step and are solved once.
class SheetPaths {
 public:
  SheetPaths(const BivariatePoly& poly, const SearchConfig& cfg, std::span<const SamplePoint> points,
             std::vector<RootSlice> sample_slices, Execution exec)
      : poly_(poly), cfg_(cfg), points_(points), sample_slices_(std::move(sample_slices)), exec_(exec) {
    const std::size_t fine = std::size_t{1} << cfg_.max_halvings;
    std::vector<double> phases;
    std::vector<std::pair<std::size_t, std::size_t>> keys;
    for (std::size_t j = 0; j + 1 < points_.size(); ++j) {
      const double span = points_[j + 1].phase - points_[j].phase;
      const auto coarse = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / cfg_.phase_step - 1e-9)));
      ticks_.push_back(coarse * fine);
      for (std::size_t s = 1; s < coarse; ++s) {
        keys.emplace_back(j, s * fine);
        phases.push_back(phase_at(j, s * fine));
      }
    }
    const std::size_t degree = sample_slices_.front().count();
    std::vector<kernels::PathNode> nodes = exec_ == Execution::kParallel
                                               ? kernels::solve_path_omp(poly_, phases, degree, cfg_.roots)
                                               : kernels::solve_path_serial(poly_, phases, degree, cfg_.roots);
    for (std::size_t i = 0; i < keys.size(); ++i) cache_.emplace(keys[i], std::move(nodes[i]));
    spdlog::debug("search: {} coarse path slices", phases.size());
  }

  const std::vector<RootSlice>& sample_slices() const { return sample_slices_; }

  const RootTrajectory& trajectory(std::size_t root) {
    auto it = trajectories_.find(root);
    if (it == trajectories_.end()) it = trajectories_.emplace(root, follow(root)).first;
    return it->second;
  }

  std::size_t refined_slices() const { return refined_; }

 private:
  struct Cursor {
    std::size_t idx;
    std::optional<cplx> last;  // previous position, for the secant predictor
    double last_dphase = 0.0;
    double worst = 0.0;
    int depth = 0;
  };

  double phase_at(std::size_t j, std::size_t tick) const {
    const double span = points_[j + 1].phase - points_[j].phase;
    return points_[j].phase + span * static_cast<double>(tick) / static_cast<double>(ticks_[j]);
  }

  const RootSlice* node(std::size_t j, std::size_t tick) {
    if (tick == 0) return &sample_slices_[j];
    if (tick == ticks_[j]) return &sample_slices_[j + 1];
    auto it = cache_.find({j, tick});
    if (it == cache_.end()) {
      ++refined_;
      it = cache_.emplace(std::pair{j, tick}, kernels::solve_node(poly_, phase_at(j, tick),
                                                                  sample_slices_.front().count(), cfg_.roots))
               .first;
    }
    return it->second ? &*it->second : nullptr;
  }

  // Carries the cursor from tick a to tick b of segment j, halving on ambiguity.
  bool advance(std::size_t j, std::size_t a, std::size_t b, int depth, Cursor& c) {
    const RootSlice* prev = node(j, a);
    const RootSlice* next = node(j, b);
    if (prev && next) {
      const double dphase = phase_at(j, b) - phase_at(j, a);
      const cplx here = prev->roots[c.idx];
      const cplx predicted = c.last ? here + (here - *c.last) * (dphase / c.last_dphase) : here;
      try {
        const std::size_t sel[] = {c.idx};
        const cplx pred[] = {predicted};
        const TrackStep st = track_roots(*prev, *next, sel, cfg_.tol_track_ratio, pred);
        c.idx = st.indices.front();
        c.worst = std::max(c.worst, st.worst_ratio);
        c.depth = std::max(c.depth, depth);
        c.last = here;
        c.last_dphase = dphase;
        return true;
      } catch (const TrackingError&) {
      }
    }
    if (b - a < 2 || depth == cfg_.max_halvings) return false;
    const std::size_t mid = a + (b - a) / 2;
    return advance(j, a, mid, depth + 1, c) && advance(j, mid, b, depth + 1, c);
  }

  RootTrajectory follow(std::size_t root) {
    RootTrajectory t;
    t.at_point.push_back(root);
    Cursor c{root, std::nullopt};
    const std::size_t coarse_ticks = std::size_t{1} << cfg_.max_halvings;
    for (std::size_t j = 0; j + 1 < points_.size(); ++j) {
      c.worst = 0.0;
      for (std::size_t a = 0; a < ticks_[j]; a += coarse_ticks) {
        if (!advance(j, a, a + coarse_ticks, 0, c)) return t;
      }
      t.at_point.push_back(c.idx);
      t.segment_ratio.push_back(c.worst);
    }
    t.ok = true;
    t.depth = c.depth;
    return t;
  }

  const BivariatePoly& poly_;
  const SearchConfig& cfg_;
  std::span<const SamplePoint> points_;
  std::vector<RootSlice> sample_slices_;
  Execution exec_;
  std::vector<std::size_t> ticks_;  // finest-grid ticks per segment
  std::map<std::pair<std::size_t, std::size_t>, kernels::PathNode> cache_;
  std::map<std::size_t, RootTrajectory> trajectories_;
  std::size_t refined_ = 0;
};

std::optional<SheetTrack> resolve_track(SheetPaths& paths, const std::vector<std::size_t>& combination) {
  const auto& slices = paths.sample_slices();
  const std::size_t q = slices.size();
  std::vector<const RootTrajectory*> traj;
  for (std::size_t r : combination) {
    traj.push_back(&paths.trajectory(r));
    if (!traj.back()->ok) return std::nullopt;
  }
  // Injectivity at every sample point; roots that merge stay merged.
  for (std::size_t j = 1; j < q; ++j) {
    for (std::size_t a = 0; a < traj.size(); ++a) {
      for (std::size_t b = a + 1; b < traj.size(); ++b) {
        if (traj[a]->at_point[j] == traj[b]->at_point[j]) return std::nullopt;
      }
    }
  }

  SheetTrack track;
  track.combination = combination;
  track.per_point_roots.resize(q);
  track.tracking_margins.assign(q - 1, 0.0);
  for (const RootTrajectory* t : traj) {
    track.level = std::max(track.level, t->depth);
    for (std::size_t j = 0; j < q; ++j) track.per_point_roots[j].push_back(slices[j].roots[t->at_point[j]]);
    for (std::size_t j = 0; j + 1 < q; ++j) {
      track.tracking_margins[j] = std::max(track.tracking_margins[j], t->segment_ratio[j]);
    }
  }
  return track;
}

}  // namespace

SearchReport search_blur(const BivariatePoly& poly, const SearchConfig& cfg, Execution exec) {
  cfg.validate();
  const BivariatePoly work = (cfg.axis == Axis::kV ? poly : poly.swapped()).normalized();
  const std::size_t m = cfg.search_m();
  const std::size_t n = cfg.search_n();

  SearchReport report;
  report.config = cfg;
  report.q = compute_q(m, n);
  report.points = choose_sample_points(report.q, cfg, work);

  std::vector<RootSlice> sample_slices;
  sample_slices.reserve(report.q);
  for (const SamplePoint& pt : report.points) sample_slices.push_back(solve_slice(work, pt.value, cfg.roots));
  report.root_count = sample_slices.front().count();

  const std::size_t k = n - 1;
  if (k > report.root_count) return report;
  report.combinations_total = Combinations::count(report.root_count, k);
  spdlog::debug("search: {}x{} blur, q = {}, N' = {}, {} combinations", cfg.blur_m, cfg.blur_n, report.q,
                report.root_count, report.combinations_total);

  SheetPaths paths(work, cfg, report.points, std::move(sample_slices), exec);
  Combinations gen(report.root_count, k);
  std::vector<std::size_t> combination;
  std::vector<SheetTrack> pending;
  std::size_t enumerated = 0;

  auto flush = [&]() {
    auto evaluated = exec == Execution::kParallel
                         ? kernels::evaluate_tracks_omp(pending, report.points, m, n, cfg)
                         : kernels::evaluate_tracks_serial(pending, report.points, m, n, cfg);
    report.combinations_evaluated += evaluated.size();
    for (BlurCandidate& c : evaluated) report.candidates.push_back(std::move(c));
    pending.clear();
  };
  auto any_accepted = [&]() {
    return std::any_of(report.candidates.begin(), report.candidates.end(),
                       [](const BlurCandidate& c) { return c.accepted; });
  };

  while (gen.next(combination)) {
    if (enumerated == cfg.max_combinations) {
      report.truncated = true;
      break;
    }
    ++enumerated;
    auto track = resolve_track(paths, combination);
    if (!track) {
      ++report.tracking_failures;
      continue;
    }
    report.max_level_used = std::max(report.max_level_used, track->level);
    pending.push_back(std::move(*track));
    if (cfg.early_stop && pending.size() == kEarlyStopBlock) {
      flush();
      if (any_accepted()) break;
    }
  }
  if (!pending.empty()) flush();

  if (cfg.early_stop) {
    auto first = std::find_if(report.candidates.begin(), report.candidates.end(),
                              [](const BlurCandidate& c) { return c.accepted; });
    if (first != report.candidates.end()) {
      report.combinations_evaluated = static_cast<std::size_t>(first - report.candidates.begin()) + 1;
      report.candidates.erase(first + 1, report.candidates.end());
    }
  }

  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    BlurCandidate& c = report.candidates[i];
    if (cfg.axis == Axis::kU) c.h = transpose(c.h);
    if (c.accepted && (!report.best || c.sigma_gap < report.candidates[*report.best].sigma_gap)) report.best = i;
  }
  spdlog::debug("search: evaluated {}, tracking failures {}, accepted {}", report.combinations_evaluated,
                report.tracking_failures, report.best ? "yes" : "no");
  return report;
}

}  // namespace zerosheet
