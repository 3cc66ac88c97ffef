#pragma once

#include <cstddef>
#include <vector>

namespace jostlab {

/// Uniform grid on [x_min, x_max] with the origin strictly inside.
///
/// The node nearest x = 0 is the matching point used for Wronskians.
class SpatialGrid {
public:
    /// Throws InvalidArgument unless x_min < 0 < x_max and n_points >= 3.
    SpatialGrid(double x_min, double x_max, std::size_t n_points);

    /// Desk-scale default: [-40, 40] with 4001 nodes (h = 0.02).
    static SpatialGrid desk_default();

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }

    /// Node i, computed as x_min + i*h (no accumulated rounding).
    double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * h_; }
    std::vector<double> nodes() const;

    /// Index of the node nearest 0.
    std::size_t matching_index() const noexcept { return matching_; }

    /// Index of the node nearest x, clamped to the grid.
    std::size_t nearest_index(double x) const noexcept;

    /// Same bounds, twice the resolution (2n - 1 nodes); every old node is kept.
    SpatialGrid refined() const;

    bool operator==(const SpatialGrid& other) const noexcept {
        return x_min_ == other.x_min_ && x_max_ == other.x_max_ && n_ == other.n_;
    }

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double h_;
    std::size_t matching_;
};

}  // namespace jostlab
