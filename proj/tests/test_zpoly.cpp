#include <doctest.h>

#include <numbers>
#include <random>

#include "support.hpp"
#include "zerosheet/error.hpp"
#include "zerosheet/roots.hpp"
#include "zerosheet/zpoly.hpp"

using namespace zerosheet;

TEST_CASE("ztransform of a single impulse is constant") {
  BivariatePoly p = ztransform(Image::from_rows({{1, 0}, {0, 0}}));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 5; ++i) {
    cplx v = eval(p, testsupport::random_in_disc(rng, 2), testsupport::random_in_disc(rng, 2));
    CHECK(std::abs(v - 0.25) < 1e-15);
  }
}

TEST_CASE("ztransform of 2x2 ones factors as (1+u)(1+v)/4") {
  BivariatePoly p = ztransform(Image::from_rows({{1, 1}, {1, 1}}));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5; ++i) {
    cplx u = testsupport::random_in_disc(rng, 2), v = testsupport::random_in_disc(rng, 2);
    CHECK(std::abs(eval(p, u, v) - (1.0 + u) * (1.0 + v) / 4.0) < 1e-14);
  }
  CHECK(std::abs(eval(p, 1.0, 1.0) - 1.0) < 1e-15);
}

TEST_CASE("eval matches a direct double sum") {
  std::mt19937_64 rng(6);
  Image img = testsupport::random_image(5, 7, rng, -1, 1);
  BivariatePoly p = ztransform(img);
  for (int i = 0; i < 5; ++i) {
    cplx u = testsupport::random_in_disc(rng, 1.2), v = testsupport::random_in_disc(rng, 1.2);
    cplx want = testsupport::direct_ztransform(img, u, v);
    CHECK(std::abs(eval(p, u, v) - want) <= 1e-13 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("ztransform of a convolution is the scaled product") {
  std::mt19937_64 rng(7);
  Image f = testsupport::random_image(9, 6, rng);
  Image h = testsupport::random_image(3, 2, rng);
  Image g = convolve(f, h);
  const double scale = double(f.size()) * double(h.size()) / double(g.size());
  BivariatePoly G = ztransform(g), F = ztransform(f), H = ztransform(h);
  for (int i = 0; i < 5; ++i) {
    cplx u = testsupport::random_in_disc(rng, 1.5), v = testsupport::random_in_disc(rng, 1.5);
    cplx lhs = eval(G, u, v);
    cplx rhs = eval(F, u, v) * eval(H, u, v) * scale;
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("slice_in_v examples") {
  BivariatePoly ones = ztransform(Image::from_rows({{1, 1}, {1, 1}}));
  UniPoly at1 = slice_in_v(ones, 1.0);
  REQUIRE(at1.effective_degree() == 1);
  CHECK(std::abs(at1.coeffs()[0] - 0.5) < 1e-15);
  CHECK(std::abs(at1.coeffs()[1] - 0.5) < 1e-15);
  CHECK_THROWS_AS(slice_in_v(ones, -1.0), DegenerateSlice);
  CHECK_THROWS_AS(slice_in_v(ones, std::polar(1.0, std::numbers::pi)), DegenerateSlice);

  std::mt19937_64 rng(8);
  Image img = testsupport::random_image(4, 3, rng);
  BivariatePoly p = ztransform(img);
  UniPoly at0 = slice_in_v(p, 0.0);
  REQUIRE(at0.coeffs().size() == 3);
  for (std::size_t y = 0; y < 3; ++y) CHECK(at0.coeffs()[y] == p.coeff(0, y));
}

TEST_CASE("slice agrees with bivariate evaluation") {
  std::mt19937_64 rng(9);
  BivariatePoly p = ztransform(testsupport::random_image(6, 6, rng));
  cplx u = testsupport::random_unit(rng);
  UniPoly s = slice_in_v(p, u);
  for (int i = 0; i < 5; ++i) {
    cplx v = testsupport::random_in_disc(rng, 1.5);
    CHECK(std::abs(s(v) - eval(p, u, v)) < 1e-13);
  }
}

TEST_CASE("slice trims a vanishing top row") {
  // Last row of g is (1, -1): its slice coefficient 1 - u vanishes at u = 1.
  BivariatePoly p = ztransform(Image::from_rows({{1, 2}, {3, 4}, {1, -1}}));
  CHECK(slice_in_v(p, 1.0).effective_degree() == 1);
  CHECK(slice_in_v(p, -1.0).effective_degree() == 2);
}

TEST_CASE("normalized and swapped") {
  std::mt19937_64 rng(10);
  Image img = testsupport::random_image(4, 5, rng, -2, 2);
  BivariatePoly p = ztransform(img);
  BivariatePoly n = p.normalized();
  BivariatePoly s = p.swapped();
  CHECK(s.size_u() == 5);
  CHECK(s.size_v() == 4);
  cplx u = testsupport::random_in_disc(rng, 1), v = testsupport::random_in_disc(rng, 1);
  CHECK(std::abs(eval(s, v, u) - eval(p, u, v)) < 1e-14);
  cplx ratio = eval(n, u, v) / eval(p, u, v);
  CHECK(std::abs(ratio.imag()) < 1e-12);
  CHECK(ratio.real() > 0);
  CHECK(std::abs(ratio - eval(n, v, u) / eval(p, v, u)) < 1e-10 * std::abs(ratio));
}

TEST_CASE("elementary symmetric examples") {
  std::vector<cplx> one{2.0};
  auto c1 = elementary_symmetric_coeffs(one);
  CHECK(c1 == std::vector<cplx>{-2.0, 1.0});
  std::vector<cplx> two{2.0, 3.0};
  auto c2 = elementary_symmetric_coeffs(two);
  CHECK(c2 == std::vector<cplx>{6.0, -5.0, 1.0});
}

TEST_CASE("elementary symmetric coefficients match product expansion and subset sums") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cplx> g(1 + rng() % 8);
    for (cplx& z : g) z = testsupport::random_in_disc(rng, 1.5);
    auto c = elementary_symmetric_coeffs(g);
    auto want = testsupport::product_expansion(g);
    REQUIRE(c.size() == want.size());
    const std::size_t k = g.size();
    for (std::size_t y = 0; y <= k; ++y) {
      CHECK(std::abs(c[y] - want[y]) < 1e-12);
      const cplx e = testsupport::brute_elementary(g, k - y);
      CHECK(std::abs(c[y] - ((k - y) % 2 ? -e : e)) < 1e-12);
    }
  }
}

TEST_CASE("blur slice roots are a subset of image slice roots") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    Image f = testsupport::random_image(8, 8, rng);
    Image h = testsupport::random_blur(2, 3, rng);
    BivariatePoly G = ztransform(convolve(f, h)), H = ztransform(h);
    cplx u = testsupport::random_unit(rng);
    RootSlice gs = solve_slice(G, u), hs = solve_slice(H, u);
    for (cplx gamma : hs.roots) {
      double best = 1e9;
      for (cplx beta : gs.roots) best = std::min(best, std::abs(beta - gamma));
      CHECK(best < 1e-6);
    }
  }
}
