#pragma once

#include "jostlab/grid.hpp"
#include "jostlab/potential.hpp"
#include "jostlab/propagator.hpp"
#include "jostlab/types.hpp"

#include <span>
#include <vector>

namespace jostlab {

/// -d^2/dx^2 + V by the three-point stencil on the grid nodes, with
/// Dirichlet conditions one spacing outside each end.
struct DiscreteHamiltonian {
    SpatialGrid grid;
    RealArray diagonal;      ///< 2/h^2 + V(x_i)
    RealArray off_diagonal;  ///< -1/h^2, size n - 1

    /// Row-major dense copy, for small grids and tests.
    std::vector<double> dense() const;
};

DiscreteHamiltonian discretize(const SampledPotential& V);
DiscreteHamiltonian discretize(const PotentialSpec& spec, const SpatialGrid& grid);

/// Full eigendecomposition. Eigenvectors are normalized in the grid inner
/// product sum_i h v_i^2 = 1 and stored column-major (vector k starts at k*n).
struct SpectralDecomposition {
    SpatialGrid grid;
    RealArray eigenvalues;  ///< ascending
    RealArray eigenvectors;

    std::size_t size() const noexcept { return eigenvalues.size(); }
    std::span<const double> vector(std::size_t k) const {
        return {eigenvectors.data() + k * grid.size(), grid.size()};
    }
};

/// Throws NumericalError if LAPACK fails.
SpectralDecomposition decompose(const DiscreteHamiltonian& H);

/// Eigenvalues only (cheaper).
RealArray eigenvalues(const DiscreteHamiltonian& H);

inline constexpr double kBoundStateTolerance = 1e-8;

struct BoundStateSet {
    RealArray energies;
    std::vector<RealArray> vectors;  ///< grid-normalized

    std::size_t size() const noexcept { return energies.size(); }
};

/// Eigenpairs with E < -tol.
BoundStateSet bound_states(const SpectralDecomposition& D, double tol = kBoundStateTolerance);
BoundStateSet bound_states(const DiscreteHamiltonian& H, double tol = kBoundStateTolerance);

/// psi minus its components along the given bound states.
ComplexArray remove_bound_states(std::span<const cplx> psi, const BoundStateSet& bound, double h);

/// u = sum_k e^{i t E_k} <psi, v_k> v_k, excluding E_k < -tol when project_ac.
/// t = 0 is allowed and returns psi (projected when project_ac).
EvolutionResult evolve_exact(const SpectralDecomposition& D, std::span<const cplx> psi, double t, bool project_ac,
                             double tol = kBoundStateTolerance);

/// Several times sharing the expansion coefficients.
std::vector<EvolutionResult> evolve_exact(const SpectralDecomposition& D, std::span<const cplx> psi,
                                          std::span<const double> times, bool project_ac,
                                          double tol = kBoundStateTolerance);

}  // namespace jostlab
