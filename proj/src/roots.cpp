#include "zerosheet/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "zerosheet/error.hpp"

namespace zerosheet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Evaluation {
  cplx newton;       // p(z) / p'(z)
  double residual;   // |p(z)| in the frame used (direct or reversed)
  double bound;      // rounding-error bound for that evaluation
};

// Horner evaluation of p, p' and the error bound. For |z| > 1 the reversed
// polynomial r(w) = w^d p(1/w) is evaluated at w = 1/z instead.
Evaluation evaluate(std::span<const cplx> a, cplx z) {
  const std::size_t d = a.size() - 1;
  if (std::abs(z) <= 1.0) {
    cplx p = a[d], dp{};
    double bound = std::abs(a[d]);
    const double az = std::abs(z);
    for (std::size_t k = d; k-- > 0;) {
      dp = dp * z + p;
      p = p * z + a[k];
      bound = bound * az + std::abs(a[k]);
    }
    const cplx newton = dp == cplx{} ? cplx(std::numeric_limits<double>::infinity()) : p / dp;
    return {newton, std::abs(p), bound};
  }
  const cplx w = 1.0 / z;
  const double aw = std::abs(w);
  cplx r = a[0], dr{};
  double bound = std::abs(a[0]);
  for (std::size_t k = 1; k <= d; ++k) {
    dr = dr * w + r;
    r = r * w + a[k];
    bound = bound * aw + std::abs(a[k]);
  }
  // p/p' = z r / (d r - w r')
  const cplx denom = static_cast<double>(d) * r - w * dr;
  const cplx newton = denom == cplx{} ? cplx(std::numeric_limits<double>::infinity()) : z * r / denom;
  return {newton, std::abs(r), bound};
}

// Initial estimates from the upper convex hull of (k, log|a_k|).
std::vector<cplx> newton_polygon_start(std::span<const cplx> a) {
  const std::size_t d = a.size() - 1;
  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k <= d; ++k) {
    if (a[k] == cplx{}) continue;
    const double lk = std::log(std::abs(a[k]));
    while (hull.size() >= 2) {
      const std::size_t i = hull[hull.size() - 2], j = hull.back();
      const double li = std::log(std::abs(a[i])), lj = std::log(std::abs(a[j]));
      // drop j if it lies on or below the segment i -> k
      if ((lj - li) * static_cast<double>(k - i) <= (lk - li) * static_cast<double>(j - i)) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }

  std::vector<cplx> z;
  z.reserve(d);
  constexpr double kOffset = 0.7;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const std::size_t lo = hull[e], hi = hull[e + 1];
    const std::size_t count = hi - lo;
    const double radius = std::pow(std::abs(a[lo]) / std::abs(a[hi]), 1.0 / static_cast<double>(count));
    for (std::size_t j = 0; j < count; ++j) {
      const double angle = two_pi * static_cast<double>(j) / static_cast<double>(count) +
                           two_pi * static_cast<double>(lo) / static_cast<double>(d) + kOffset;
      z.push_back(std::polar(radius, angle));
    }
  }
  return z;
}

std::vector<cplx> companion_start(std::span<const cplx> a) {
  const Eigen::Index d = static_cast<Eigen::Index>(a.size()) - 1;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -a[i] / a[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<cplx> z(solver.eigenvalues().data(), solver.eigenvalues().data() + d);
  return z;
}

// Gauss-Seidel Aberth sweeps. Returns true when every root met the
// rounding-level stopping test.
bool aberth(std::span<const cplx> a, std::vector<cplx>& z, int max_iterations) {
  const std::size_t d = z.size();
  std::vector<bool> done(d, false);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool all_done = true;
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i]) continue;
      const Evaluation ev = evaluate(a, z[i]);
      if (ev.residual <= 4.0 * kEps * ev.bound) {
        done[i] = true;
        continue;
      }
      all_done = false;
      cplx step;
      if (!std::isfinite(ev.newton.real()) || !std::isfinite(ev.newton.imag())) {
        step = cplx(1e-3 * (1.0 + std::abs(z[i])), 0.0);
      } else {
        cplx repulsion{};
        for (std::size_t j = 0; j < d; ++j) {
          if (j != i) repulsion += 1.0 / (z[i] - z[j]);
        }
        step = ev.newton / (1.0 - ev.newton * repulsion);
      }
      z[i] -= step;
      if (std::abs(step) <= kEps * std::abs(z[i])) done[i] = true;
    }
    if (all_done) return true;
  }
  return std::all_of(done.begin(), done.end(), [](bool b) { return b; });
}

void newton_polish(const UniPoly& p, cplx& z) {
  double best = scaled_residual(p, z);
  for (int k = 0; k < 8 && best > 0.0; ++k) {
    const Evaluation ev = evaluate(p.coeffs(), z);
    if (!std::isfinite(ev.newton.real()) || !std::isfinite(ev.newton.imag())) return;
    const cplx candidate = z - ev.newton;
    const double r = scaled_residual(p, candidate);
    if (!(r < best)) return;
    best = r;
    z = candidate;
  }
}

}  // namespace

double scaled_residual(const UniPoly& p, cplx z) {
  const auto a = p.coeffs();
  const double scale = p.max_abs_coeff();
  if (std::abs(z) <= 1.0) return std::abs(p(z)) / scale;
  const cplx w = 1.0 / z;
  cplx r{};
  for (const cplx& c : a) r = r * w + c;
  return std::abs(r) / scale;
}

RootSlice find_roots(const UniPoly& p, const RootOptions& opts) {
  const auto a = p.coeffs();
  const std::size_t d = p.effective_degree();
  if (d == 0) throw RootFindingFailure("slice has degree 0, no roots to find", {a.begin(), a.end()});

  // Exact zero roots are split off; the rest is solved on the deflated coefficients.
  std::size_t zeros = 0;
  while (a[zeros] == cplx{}) ++zeros;
  const auto rest = a.subspan(zeros);
  std::vector<cplx> z;
  if (rest.size() == 2) {
    z = {-rest[0] / rest[1]};
  } else if (rest.size() > 2) {
    z = newton_polygon_start(rest);
    if (!aberth(rest, z, opts.max_iterations)) {
      z = companion_start(rest);
      aberth(rest, z, opts.max_iterations);
    }
  }
  for (cplx& root : z) newton_polish(p, root);
  z.insert(z.end(), zeros, cplx{});

  std::sort(z.begin(), z.end(), [](const cplx& l, const cplx& r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });

  RootSlice slice;
  slice.leading_coeff = p.leading();
  slice.residuals.reserve(d);
  for (const cplx& root : z) {
    const double r = scaled_residual(p, root);
    if (!(r <= opts.tol_root)) {
      throw RootFindingFailure("root finder did not converge at degree " + std::to_string(d) +
                                   " (residual " + std::to_string(r) + ")",
                               {a.begin(), a.end()});
    }
    slice.residuals.push_back(r);
  }
  for (std::size_t i = 0; i < d && !slice.clustered; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (std::abs(z[i] - z[j]) < opts.cluster_tol) {
        slice.clustered = true;
        break;
      }
    }
  }
  slice.roots = std::move(z);
  return slice;
}

RootSlice solve_slice(const BivariatePoly& poly, cplx u, const RootOptions& opts) {
  RootSlice slice = find_roots(slice_in_v(poly, u), opts);
  slice.sample_point = u;
  return slice;
}

}  // namespace zerosheet
