#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "zerosheet/error.hpp"
#include "zerosheet/search.hpp"

namespace zerosheet {

TrackStep track_roots(const RootSlice& prev, const RootSlice& next, std::span<const std::size_t> selected,
                      double tol_ratio, std::span<const cplx> predicted) {
  using Kind = TrackingError::Kind;
  if (prev.count() != next.count()) {
    throw TrackingError(Kind::kCountMismatch, "root counts differ between slices (" + std::to_string(prev.count()) +
                                                  " vs " + std::to_string(next.count()) + ")");
  }
  if (!predicted.empty() && predicted.size() != selected.size()) {
    throw std::invalid_argument("one predicted position per selected root");
  }
  TrackStep step;
  step.indices.reserve(selected.size());
  for (std::size_t k = 0; k < selected.size(); ++k) {
    const std::size_t s = selected[k];
    if (s >= prev.count()) throw std::out_of_range("selected root index out of range");
    const cplx from = predicted.empty() ? prev.roots[s] : predicted[k];
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < next.count(); ++i) {
      const double d = std::abs(next.roots[i] - from);
      if (d < best) {
        second = best;
        best = d;
        best_index = i;
      } else if (d < second) {
        second = d;
      }
    }
    // A lone root is unambiguous; an exact hit has ratio 0.
    const double ratio = std::isinf(second) || best == 0.0 ? 0.0 : best / second;
    if (ratio > tol_ratio) {
      throw TrackingError(Kind::kAmbiguous, "ambiguous continuation of root " + std::to_string(s) + " (ratio " +
                                                std::to_string(ratio) + ")");
    }
    if (std::find(step.indices.begin(), step.indices.end(), best_index) != step.indices.end()) {
      throw TrackingError(Kind::kCollision, "two tracked roots map to root " + std::to_string(best_index));
    }
    step.indices.push_back(best_index);
    step.worst_ratio = std::max(step.worst_ratio, ratio);
  }
  return step;
}

Combinations::Combinations(std::size_t n, std::size_t k) : n_(n), k_(k) {
  if (k < 1 || k > n) throw std::invalid_argument("combination size must satisfy 1 <= k <= n");
}

bool Combinations::next(std::vector<std::size_t>& out) {
  if (done_) return false;
  if (!started_) {
    current_.resize(k_);
    for (std::size_t i = 0; i < k_; ++i) current_[i] = i;
    started_ = true;
  } else {
    std::size_t i = k_;
    while (i > 0 && current_[i - 1] == n_ - k_ + (i - 1)) --i;
    if (i == 0) {
      done_ = true;
      return false;
    }
    ++current_[i - 1];
    for (std::size_t j = i; j < k_; ++j) current_[j] = current_[j - 1] + 1;
  }
  out = current_;
  return true;
}

std::size_t Combinations::count(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step
    const std::size_t factor = n - k + i;
    if (result > kMax / factor) return kMax;
    result = result * factor / i;
  }
  return result;
}

CombinationList enumerate_combinations(std::size_t n_prime, std::size_t k, std::size_t cap) {
  CombinationList list;
  Combinations gen(n_prime, k);
  std::vector<std::size_t> set;
  while (gen.next(set)) {
    if (list.sets.size() == cap) {
      list.truncated = true;
      break;
    }
    list.sets.push_back(set);
  }
  return list;
}

}  // namespace zerosheet
