#include "zerosheet/zpoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zerosheet/error.hpp"

namespace zerosheet {

BivariatePoly::BivariatePoly(std::size_t size_u, std::size_t size_v, std::vector<cplx> grid, double prefactor)
    : size_u_(size_u), size_v_(size_v), grid_(std::move(grid)), prefactor_(prefactor) {
  if (size_u == 0 || size_v == 0 || grid_.size() != size_u * size_v) {
    throw std::invalid_argument("BivariatePoly: grid does not match declared sizes");
  }
  if (!std::isfinite(prefactor)) throw std::invalid_argument("BivariatePoly: non-finite prefactor");
  for (const cplx& c : grid_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("BivariatePoly: non-finite coefficient");
    }
  }
}

std::size_t BivariatePoly::generic_degree_v() const {
  for (std::size_t y = size_v_; y-- > 0;) {
    for (std::size_t x = 0; x < size_u_; ++x) {
      if (grid(x, y) != cplx{}) return y;
    }
  }
  return 0;
}

BivariatePoly BivariatePoly::normalized() const {
  double scale = 0.0;
  for (const cplx& c : grid_) scale = std::max(scale, std::abs(c));
  std::vector<cplx> grid = grid_;
  if (scale > 0.0) {
    for (cplx& c : grid) c = cplx(c.real() / scale, c.imag() / scale);
  }
  return BivariatePoly(size_u_, size_v_, std::move(grid), 1.0);
}

BivariatePoly BivariatePoly::swapped() const {
  std::vector<cplx> grid(grid_.size());
  for (std::size_t x = 0; x < size_u_; ++x) {
    for (std::size_t y = 0; y < size_v_; ++y) grid[y * size_u_ + x] = this->grid(x, y);
  }
  return BivariatePoly(size_v_, size_u_, std::move(grid), prefactor_);
}

UniPoly::UniPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty() || coeffs_.back() == cplx{}) {
    throw std::invalid_argument("UniPoly: leading coefficient must be nonzero");
  }
}

double UniPoly::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

cplx UniPoly::operator()(cplx v) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * v + *it;
  return acc;
}

BivariatePoly ztransform(const Image& img) {
  const std::size_t m = img.width();
  const std::size_t n = img.height();
  std::vector<cplx> grid(m * n);
  for (std::size_t x = 0; x < m; ++x) {
    for (std::size_t y = 0; y < n; ++y) grid[x * n + y] = img(x, y);
  }
  return BivariatePoly(m, n, std::move(grid), 1.0 / static_cast<double>(m * n));
}

UniPoly slice_in_v(const BivariatePoly& poly, cplx u, double trim_tol) {
  const std::size_t nv = poly.size_v();
  std::vector<cplx> a(nv);
  const double abs_u = std::abs(u);
  double scale = 0.0;
  for (std::size_t y = 0; y < nv; ++y) {
    cplx acc{};
    double bound = 0.0;
    for (std::size_t x = poly.size_u(); x-- > 0;) {
      acc = acc * u + poly.grid(x, y);
      bound = bound * abs_u + std::abs(poly.grid(x, y));
    }
    a[y] = poly.prefactor() * acc;
    scale = std::max(scale, std::abs(poly.prefactor()) * bound);
  }
  const double threshold = trim_tol * scale;
  while (!a.empty() && std::abs(a.back()) <= threshold) a.pop_back();
  if (a.empty()) throw DegenerateSlice("slice polynomial vanishes at the sample point");
  return UniPoly(std::move(a));
}

cplx eval(const BivariatePoly& poly, cplx u, cplx v) {
  cplx outer{};
  for (std::size_t y = poly.size_v(); y-- > 0;) {
    cplx inner{};
    for (std::size_t x = poly.size_u(); x-- > 0;) inner = inner * u + poly.grid(x, y);
    outer = outer * v + inner;
  }
  return poly.prefactor() * outer;
}

std::vector<cplx> elementary_symmetric_coeffs(std::span<const cplx> gammas) {
  const std::size_t k = gammas.size();
  // e[j] accumulates the j-th elementary symmetric polynomial of the roots seen so far.
  std::vector<cplx> e(k + 1, cplx{});
  e[0] = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += gammas[i] * e[j - 1];
  }
  std::vector<cplx> c(k + 1);
  for (std::size_t y = 0; y <= k; ++y) {
    const std::size_t order = k - y;
    c[y] = (order % 2 == 0) ? e[order] : -e[order];
  }
  return c;
}

}  // namespace zerosheet
