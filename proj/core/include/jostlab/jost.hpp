#pragma once

#include "jostlab/potential.hpp"
#include "jostlab/types.hpp"

#include <cstddef>
#include <memory>

namespace jostlab {

namespace detail {
class JostMesh;
}

enum class JostScheme {
    /// Fourth-order Magnus transfer matrices on a mesh refined inside the
    /// support of V; exact plane-wave continuation outside it.
    magnus4,
    /// Second-order trapezoid discretization of the Volterra equation on the
    /// grid itself. Kept as an independent low-order cross-check.
    volterra_trapezoid,
};

struct JostOptions {
    JostScheme scheme = JostScheme::magnus4;
    double max_step = 0.005;  ///< largest Magnus step inside the support
    double tol_ode = 1e-6;    ///< accepted step-doubling error estimate
};

/// f_{+-}(x, lambda) = e^{+-i lambda x} m_{+-}(x, lambda) sampled on the grid.
struct JostSolution {
    Direction direction = Direction::plus;
    double lambda = 0.0;
    ComplexArray m;
    ComplexArray dm_dx;
    bool converged = false;
    int iterations = 0;          ///< integration steps taken
    double error_estimate = 0.0;  ///< step-doubling estimate at the far end; NaN for the trapezoid scheme

    /// f = e^{+-i lambda x} m at node i.
    cplx f(const SpatialGrid& grid, std::size_t i) const;
    /// f' at node i.
    cplx df(const SpatialGrid& grid, std::size_t i) const;
};

struct WronskianPair {
    double lambda = 0.0;
    cplx W;        ///< W[f_+(., lambda), f_-(., lambda)]
    cplx W_tilde;  ///< W[f_-(., lambda), f_+(., -lambda)]
};

/// Reusable solver for one sampled potential. Builds the integration meshes
/// once; each solve is O(n).
class JostSolver {
public:
    explicit JostSolver(const SampledPotential& V, JostOptions options = {});
    ~JostSolver();
    JostSolver(const JostSolver&);
    JostSolver& operator=(const JostSolver&);
    JostSolver(JostSolver&&) noexcept;
    JostSolver& operator=(JostSolver&&) noexcept;

    const SampledPotential& potential() const noexcept { return V_; }
    const JostOptions& options() const noexcept { return options_; }

    /// Never throws on non-convergence; inspect `converged`.
    JostSolution solve(double lambda, Direction direction) const;

    /// Throws NumericalError if any of the three solutions fails to converge.
    WronskianPair wronskians(double lambda) const;

private:
    JostSolution solve_magnus(double lambda, Direction direction) const;
    JostSolution solve_trapezoid(double lambda, Direction direction) const;

    SampledPotential V_;
    JostOptions options_;
    std::shared_ptr<const detail::JostMesh> fine_;
    std::shared_ptr<const detail::JostMesh> coarse_;
};

/// Solves for f_+ or f_-. Throws NumericalError when the error estimate
/// exceeds options.tol_ode.
JostSolution solve_jost(const SampledPotential& V, double lambda, Direction direction,
                        const JostOptions& options = {});

/// W and W~ at the node nearest 0.
WronskianPair wronskians(const SampledPotential& V, double lambda, const JostOptions& options = {});

/// W[f_+, f_-] at node i in modulated form
/// m_+ m_-' - m_+' m_- - 2 i lambda m_+ m_-, valid at every node.
cplx wronskian_at(const JostSolution& plus, const JostSolution& minus, std::size_t i);

/// W[f_-(., lambda), f_+(., -lambda)] at node i, from f_- and the f_+ solution at -lambda.
cplx wronskian_tilde_at(const SpatialGrid& grid, const JostSolution& minus, const JostSolution& plus_reflected,
                        std::size_t i);

}  // namespace jostlab
