#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "zerosheet/error.hpp"
#include "zerosheet/search.hpp"

namespace zerosheet {

Eigen::MatrixXcd build_system(const SheetTrack& track, std::span<const SamplePoint> points, std::size_t m,
                              std::size_t n) {
  const std::size_t q = points.size();
  if (track.per_point_roots.size() != q) throw std::invalid_argument("track does not span every sample point");
  const auto rows = static_cast<Eigen::Index>(q * n);
  const auto cols = static_cast<Eigen::Index>(m * n + q);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(rows, cols);
  for (std::size_t j = 0; j < q; ++j) {
    const auto& gammas = track.per_point_roots[j];
    if (gammas.size() != n - 1) throw std::invalid_argument("track must hold n - 1 roots per point");
    const std::vector<cplx> c = elementary_symmetric_coeffs(gammas);
    for (std::size_t y = 0; y < n; ++y) {
      const auto row = static_cast<Eigen::Index>(j * n + y);
      cplx power = 1.0;
      for (std::size_t x = 0; x < m; ++x) {
        a(row, static_cast<Eigen::Index>(y * m + x)) = power;
        power *= points[j].value;
      }
      a(row, static_cast<Eigen::Index>(m * n + j)) = -c[y];
    }
  }
  return a;
}

NullspaceResult nullspace_min(const Eigen::MatrixXcd& a) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  if (cols < 2 || rows < cols - 1) {
    throw LinearAlgebraError("nullspace_min needs at least cols - 1 rows and two columns");
  }
  if (!a.allFinite()) throw LinearAlgebraError("system matrix has non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!s.allFinite()) throw LinearAlgebraError("singular value decomposition failed");

  NullspaceResult out;
  if (rows >= cols) {
    out.sigma_min = s(cols - 1);
    out.sigma_second = s(cols - 2);
  } else {
    // One column more than rows: the nullspace is at least one-dimensional.
    out.sigma_min = 0.0;
    out.sigma_second = s(rows - 1);
  }
  out.xi = svd.matrixV().col(cols - 1);
  return out;
}

BlurCandidate extract_blur(const NullspaceResult& ns, std::size_t m, std::size_t n, std::size_t q,
                           const SearchConfig& cfg) {
  const std::size_t mn = m * n;
  if (static_cast<std::size_t>(ns.xi.size()) != mn + q) throw std::invalid_argument("xi has the wrong length");

  std::size_t lead = 0;
  double lead_abs = 0.0;
  for (std::size_t i = 0; i < mn; ++i) {
    const double mag = std::abs(ns.xi(static_cast<Eigen::Index>(i)));
    if (mag > lead_abs) {
      lead_abs = mag;
      lead = i;
    }
  }
  if (lead_abs == 0.0) throw DegenerateCandidate("h block of the null vector is zero");

  const cplx phase = std::conj(ns.xi(static_cast<Eigen::Index>(lead))) / lead_abs;
  std::vector<cplx> rotated(mn + q);
  for (std::size_t i = 0; i < mn + q; ++i) rotated[i] = ns.xi(static_cast<Eigen::Index>(i)) * phase;

  double max_re = 0.0, max_im = 0.0, sum = 0.0, max_h = 0.0;
  std::vector<double> h(mn);
  for (std::size_t i = 0; i < mn; ++i) {
    h[i] = rotated[i].real();
    max_re = std::max(max_re, std::abs(rotated[i].real()));
    max_im = std::max(max_im, std::abs(rotated[i].imag()));
    max_h = std::max(max_h, std::abs(h[i]));
    sum += h[i];
  }

  BlurCandidate cand;
  cand.realness = max_im / max_re;
  double scale = sum;
  if (std::abs(sum) < 1e-9 * max_h) {
    scale = max_h;
    cand.zero_sum = true;
  }
  for (double& v : h) v /= scale;
  cand.h = Image(m, n, std::move(h));
  cand.p.resize(q);
  for (std::size_t j = 0; j < q; ++j) cand.p[j] = rotated[mn + j] / scale;

  cand.sigma_min = ns.sigma_min;
  cand.sigma_second = ns.sigma_second;
  cand.sigma_gap = ns.sigma_second > 0.0 ? ns.sigma_min / ns.sigma_second : 1.0;
  cand.accepted = ns.sigma_second > 0.0 && cand.sigma_gap <= cfg.tol_null && cand.realness <= cfg.tol_real;
  return cand;
}

}  // namespace zerosheet
