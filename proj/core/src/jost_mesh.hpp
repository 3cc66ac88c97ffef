#pragma once

// Integration mesh for the Jost ODE  f'' = (V - lambda^2) f  on the effective
// support of V. Stations include every grid node inside the support, every
// breakpoint of V, and uniform substeps of at most `max_step` in between, so
// each step sees a smooth V.

#include "jostlab/potential.hpp"
#include "jostlab/types.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace jostlab::detail {

/// Real 2x2 transfer matrix acting on (f, f').
struct Mat2 {
    double m11, m12, m21, m22;
};

class JostMesh {
public:
    JostMesh(const SampledPotential& V, double max_step);

    /// No support: V is identically zero and f_{+-} are plane waves.
    bool free() const noexcept { return intervals_.empty(); }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    std::size_t steps() const noexcept { return intervals_.size(); }

    /// Grid nodes with lo <= x <= hi are [first_node, last_node]; empty when first_node > last_node.
    std::size_t first_node() const noexcept { return first_node_; }
    std::size_t last_node() const noexcept { return last_node_; }
    bool covers_nodes() const noexcept { return first_node_ <= last_node_; }

    /// Fourth-order Magnus step matrices exp(Omega_k) for the given lambda.
    /// They depend on lambda^2 only.
    void transfer_matrices(double lambda, std::vector<Mat2>& out) const;

    /// Propagates (f, f') from lo to hi. Writes values at covered grid nodes
    /// into f_out / df_out (indexed by grid node; either may be null).
    std::pair<cplx, cplx> sweep_forward(const std::vector<Mat2>& M, cplx f, cplx df, cplx* f_out,
                                        cplx* df_out) const;

    /// Propagates (f, f') from hi to lo with the inverse step matrices.
    std::pair<cplx, cplx> sweep_backward(const std::vector<Mat2>& M, cplx f, cplx df, cplx* f_out,
                                         cplx* df_out) const;

private:
    struct Interval {
        double h;
        double vbar;  // mean of V at the two Gauss points
        double a;     // sqrt(3)/12 h^2 (V1 - V2), the commutator term
    };

    double lo_ = 0.0;
    double hi_ = 0.0;
    std::vector<Interval> intervals_;
    std::vector<std::ptrdiff_t> node_at_station_;  // grid index or -1, size steps()+1
    std::size_t first_node_ = 1;
    std::size_t last_node_ = 0;
};

}  // namespace jostlab::detail
