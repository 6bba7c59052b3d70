#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "zerosheet/image.hpp"

namespace zerosheet {

using cplx = std::complex<double>;

/// Relative threshold below which top slice coefficients count as zero.
inline constexpr double kTrimTol = 1e-12;

/// Bivariate polynomial sum_{x,y} c[x][y] u^x v^y.
///
/// The grid is kept separate from a scalar prefactor so that a z-transform
/// can retain its 1/(M N) factor while the raw grid stays an exact copy of
/// the pixels. coeff(x, y) = prefactor * grid(x, y).
class BivariatePoly {
 public:
  BivariatePoly(std::size_t size_u, std::size_t size_v, std::vector<cplx> grid, double prefactor = 1.0);

  std::size_t size_u() const noexcept { return size_u_; }
  std::size_t size_v() const noexcept { return size_v_; }
  std::size_t degree_u() const noexcept { return size_u_ - 1; }
  std::size_t degree_v() const noexcept { return size_v_ - 1; }
  double prefactor() const noexcept { return prefactor_; }

  const cplx& grid(std::size_t x, std::size_t y) const { return grid_[x * size_v_ + y]; }
  cplx coeff(std::size_t x, std::size_t y) const { return prefactor_ * grid(x, y); }

  /// Highest y with a nonzero grid entry: the v-degree of a generic slice.
  std::size_t generic_degree_v() const;

  /// Same polynomial up to a positive factor: grid / max|grid|, prefactor 1.
  BivariatePoly normalized() const;

  /// Exchanges the roles of u and v.
  BivariatePoly swapped() const;

 private:
  std::size_t size_u_;
  std::size_t size_v_;
  std::vector<cplx> grid_;  // x-major: grid_[x * size_v + y]
  double prefactor_;
};

/// Univariate polynomial, ascending coefficients, top coefficient nonzero.
class UniPoly {
 public:
  explicit UniPoly(std::vector<cplx> coeffs);

  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  std::size_t effective_degree() const noexcept { return coeffs_.size() - 1; }
  cplx leading() const noexcept { return coeffs_.back(); }
  double max_abs_coeff() const noexcept;

  cplx operator()(cplx v) const;

 private:
  std::vector<cplx> coeffs_;
};

/// z-transform of an image: grid = g(x, y), prefactor = 1 / (M N).
BivariatePoly ztransform(const Image& img);

/// a_y = sum_x c[x][y] u^x, top coefficients trimmed while
/// |a_y| <= trim_tol * max_y sum_x |c[x][y]| |u|^x. Throws DegenerateSlice
/// if nothing survives.
UniPoly slice_in_v(const BivariatePoly& poly, cplx u, double trim_tol = kTrimTol);

cplx eval(const BivariatePoly& poly, cplx u, cplx v);

/// Coefficients c_0..c_k of prod_i (v - gamma_i), ascending; c_k = 1.
std::vector<cplx> elementary_symmetric_coeffs(std::span<const cplx> gammas);

}  // namespace zerosheet
