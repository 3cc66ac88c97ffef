#pragma once

#include "jostlab/grid.hpp"
#include "jostlab/types.hpp"

#include <string>

namespace jostlab {

/// Initial data used by the evolution and verification runs.
struct InitialState {
    enum class Kind {
        gaussian,      ///< exp(-(x-c)^2 / (2 w^2))
        odd_gaussian,  ///< ((x-c)/w) exp(-(x-c)^2 / (2 w^2))
        lorentzian,    ///< 1 / (1 + ((x-c)/w)^2); heavy tail, fails the weighted-L^1 hypotheses
    };

    Kind kind = Kind::gaussian;
    double center = 0.0;
    double width = 1.0;

    static InitialState gaussian(double center = 0.0, double width = 1.0) {
        return {Kind::gaussian, center, width};
    }

    std::string kind_name() const;
    static Kind kind_from_name(const std::string& name);

    /// Samples the state at the grid nodes.
    ComplexArray sample(const SpatialGrid& grid) const;
};

}  // namespace jostlab
