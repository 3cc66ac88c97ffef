#include "jostlab/grid.hpp"

#include "jostlab/error.hpp"

#include <cmath>
#include <string>

namespace jostlab {

SpatialGrid::SpatialGrid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points), h_(0.0), matching_(0) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max)) {
        throw InvalidArgument("grid bounds must be finite");
    }
    if (!(x_min < 0.0 && 0.0 < x_max)) {
        throw InvalidArgument("grid must satisfy x_min < 0 < x_max (got [" + std::to_string(x_min) +
                              ", " + std::to_string(x_max) + "])");
    }
    if (n_points < 3) {
        throw InvalidArgument("grid needs at least 3 points");
    }
    h_ = (x_max - x_min) / static_cast<double>(n_points - 1);
    matching_ = nearest_index(0.0);
}

SpatialGrid SpatialGrid::desk_default() { return SpatialGrid(-40.0, 40.0, 4001); }

std::vector<double> SpatialGrid::nodes() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = x(i);
    return out;
}

std::size_t SpatialGrid::nearest_index(double x) const noexcept {
    const double s = std::round((x - x_min_) / h_);
    if (!(s > 0.0)) return 0;
    if (s >= static_cast<double>(n_ - 1)) return n_ - 1;
    return static_cast<std::size_t>(s);
}

SpatialGrid SpatialGrid::refined() const { return SpatialGrid(x_min_, x_max_, 2 * n_ - 1); }

}  // namespace jostlab
