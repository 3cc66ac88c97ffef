#pragma once

#include "jostlab/grid.hpp"
#include "jostlab/types.hpp"

#include <span>
#include <vector>

namespace jostlab {

/// Composite trapezoid rule on a uniform grid.
double trapezoid(std::span<const double> f, double h);
cplx trapezoid(std::span<const cplx> f, double h);

/// Trapezoid inner product <f, g> = int f conj(g) dx.
cplx inner_product(std::span<const cplx> f, std::span<const cplx> g, double h);

/// int |f| dx by trapezoid.
double l1_norm(std::span<const cplx> f, double h);

/// int (1 + |x|)^k |f(x)| dx by trapezoid.
double weighted_l1_norm(std::span<const cplx> f, const SpatialGrid& grid, double k);

/// L^2 norm by trapezoid.
double l2_norm(std::span<const cplx> f, double h);

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre nodes and weights (Newton iteration on P_n).
GaussRule gauss_legendre(int n);

}  // namespace jostlab
