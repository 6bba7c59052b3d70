#pragma once

#include <vector>

#include "zerosheet/zpoly.hpp"

namespace zerosheet {

struct RootOptions {
  double tol_root = 1e-9;      // bound on the scaled residual of every root
  int max_iterations = 400;    // Aberth sweeps before falling back
  double cluster_tol = 1e-6;   // pairwise distance that flags a cluster
};

/// Roots in v of one slice G(u_j, v) = k_j prod_i (v - beta_i).
struct RootSlice {
  cplx sample_point{};
  cplx leading_coeff{};        // k_j
  std::vector<cplx> roots;     // sorted by real part, then imaginary part
  std::vector<double> residuals;
  bool clustered = false;

  std::size_t count() const noexcept { return roots.size(); }
};

/// |p(z)| / (max|a| * max(1, |z|)^d). For |z| > 1 this is the residual of
/// the reversed polynomial at 1/z, which keeps it meaningful off the unit disc.
double scaled_residual(const UniPoly& p, cplx z);

/// All effective_degree roots of p with multiplicity: Aberth-Ehrlich
/// simultaneous iteration seeded from the Newton polygon, then Newton
/// polishing. Throws RootFindingFailure if any residual stays above tol_root.
RootSlice find_roots(const UniPoly& p, const RootOptions& opts = {});

/// slice_in_v followed by find_roots, with sample_point filled in.
RootSlice solve_slice(const BivariatePoly& poly, cplx u, const RootOptions& opts = {});

}  // namespace zerosheet
