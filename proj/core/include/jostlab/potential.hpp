#pragma once

#include "jostlab/grid.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace jostlab {

/// V = 0.
struct ZeroPotential {};

/// V = -depth on |x| < halfwidth, 0 outside. At |x| = halfwidth the value is
/// the mean of the one-sided limits, which keeps the trapezoid rule second order.
struct SquareWell {
    double depth = 1.0;
    double halfwidth = 1.0;
};

/// V = -n(n+1) sech^2 x. Reflectionless for integer n, with a zero-energy resonance.
struct PoschlTeller {
    int n = 1;
};

/// V = -depth * exp(-x^2 / (2 width^2)).
struct GaussianWell {
    double depth = 1.0;
    double width = 1.0;
};

/// Piecewise-linear interpolation of (x, v) pairs; V = 0 outside the table.
struct CustomTable {
    std::vector<double> x;
    std::vector<double> v;
};

/// Description of a real potential, independent of any grid.
class PotentialSpec {
public:
    using Kind = std::variant<ZeroPotential, SquareWell, PoschlTeller, GaussianWell, CustomTable>;

    PotentialSpec() = default;

    /// Validates parameters; throws InvalidArgument on non-positive depths,
    /// non-integer strengths, or an unsorted table.
    explicit PotentialSpec(Kind kind);

    static PotentialSpec zero() { return PotentialSpec(ZeroPotential{}); }
    static PotentialSpec square_well(double depth, double halfwidth) {
        return PotentialSpec(SquareWell{depth, halfwidth});
    }
    static PotentialSpec poschl_teller(int n) { return PotentialSpec(PoschlTeller{n}); }
    static PotentialSpec gaussian_well(double depth, double width) {
        return PotentialSpec(GaussianWell{depth, width});
    }
    static PotentialSpec custom_table(std::vector<double> x, std::vector<double> v) {
        return PotentialSpec(CustomTable{std::move(x), std::move(v)});
    }

    const Kind& kind() const noexcept { return kind_; }
    std::string kind_name() const;

    /// V(x). At a jump discontinuity returns the mean of the one-sided limits.
    double operator()(double x) const;

    /// Points where V or V' is discontinuous, sorted.
    std::vector<double> breakpoints() const;

    /// Interval outside of which |V| is below 1e-16 * max|V| (treated as zero
    /// by the Jost solver). Empty for V = 0.
    std::optional<std::pair<double, double>> effective_support() const;

    /// True when V vanishes exactly outside a bounded interval.
    bool compactly_supported() const;

    /// True when V(-x) = V(x).
    bool even() const;

    double max_abs() const;

private:
    Kind kind_{ZeroPotential{}};
};

/// Potential sampled on a grid, with weighted L^1 norms
/// ||<x>^sigma V||_1 for sigma = 0..4, <x> = (1 + x^2)^{1/2}.
class SampledPotential {
public:
    SampledPotential(PotentialSpec spec, SpatialGrid grid, std::vector<double> values,
                     std::array<double, 5> norms, bool compact_support);

    const PotentialSpec& spec() const noexcept { return spec_; }
    const SpatialGrid& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double value(std::size_t i) const { return values_[i]; }

    /// ||<x>^sigma V||_1 for integer sigma in [0, 4].
    double norm(int sigma) const { return norms_.at(static_cast<std::size_t>(sigma)); }
    const std::array<double, 5>& norms() const noexcept { return norms_; }

    /// Samples vanish identically outside a subinterval of the grid.
    bool compact_support() const noexcept { return compact_support_; }

    bool is_zero() const noexcept { return norms_[0] == 0.0; }

private:
    PotentialSpec spec_;
    SpatialGrid grid_;
    std::vector<double> values_;
    std::array<double, 5> norms_;
    bool compact_support_;
};

/// Samples `spec` at the grid nodes and computes the weighted norms by the
/// composite trapezoid rule. Throws InvalidArgument on a non-finite sample or
/// a custom table that does not cover the grid.
SampledPotential build_potential(const PotentialSpec& spec, const SpatialGrid& grid);

/// Trapezoid approximation of  int <x>^sigma |V(x)| dx.
double weighted_norm(const SampledPotential& V, double sigma);

/// I(rho) = int_{|x| > rho} |V(x)| dx, with the partial cells at +-rho
/// integrated against the linear interpolant. Non-increasing in rho.
double tail_mass(const SampledPotential& V, double rho);

}  // namespace jostlab
