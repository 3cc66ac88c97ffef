#include "jostlab/potential.hpp"

#include "jostlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jostlab {

namespace {

// Relative magnitude below which a smooth tail is dropped from the support.
constexpr double kSupportTolerance = 1e-16;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sech2(double x) {
    const double ax = std::abs(x);
    if (ax > 350.0) return 0.0;
    const double e = std::exp(-2.0 * ax);
    const double s = 2.0 * std::exp(-ax) / (1.0 + e);
    return s * s;
}

double table_value(const CustomTable& t, double x) {
    const auto& xs = t.x;
    const auto& vs = t.v;
    if (x < xs.front() || x > xs.back()) return 0.0;
    if (x == xs.front()) return 0.5 * vs.front();
    if (x == xs.back()) return 0.5 * vs.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs.begin());  // xs[k-1] <= x < xs[k]
    const double x0 = xs[k - 1];
    const double x1 = xs[k];
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * vs[k - 1] + w * vs[k];
}

void validate(const PotentialSpec::Kind& kind) {
    std::visit(overloaded{
                   [](const ZeroPotential&) {},
                   [](const SquareWell& p) {
                       if (!(p.depth > 0.0) || !(p.halfwidth > 0.0) || !std::isfinite(p.depth) ||
                           !std::isfinite(p.halfwidth)) {
                           throw InvalidArgument("square_well needs depth > 0 and halfwidth > 0");
                       }
                   },
                   [](const PoschlTeller& p) {
                       if (p.n < 1) throw InvalidArgument("poschl_teller strength must be a positive integer");
                   },
                   [](const GaussianWell& p) {
                       if (!(p.depth > 0.0) || !(p.width > 0.0) || !std::isfinite(p.depth) ||
                           !std::isfinite(p.width)) {
                           throw InvalidArgument("gaussian_well needs depth > 0 and width > 0");
                       }
                   },
                   [](const CustomTable& t) {
                       if (t.x.size() < 2 || t.x.size() != t.v.size()) {
                           throw InvalidArgument("custom_table needs >= 2 (x, value) pairs of equal length");
                       }
                       for (std::size_t i = 0; i < t.x.size(); ++i) {
                           if (!std::isfinite(t.x[i]) || !std::isfinite(t.v[i])) {
                               throw InvalidArgument("custom_table entries must be finite");
                           }
                           if (i > 0 && !(t.x[i] > t.x[i - 1])) {
                               throw InvalidArgument("custom_table x must be strictly increasing");
                           }
                       }
                   },
               },
               kind);
}

}  // namespace

PotentialSpec::PotentialSpec(Kind kind) : kind_(std::move(kind)) { validate(kind_); }

std::string PotentialSpec::kind_name() const {
    return std::visit(overloaded{
                          [](const ZeroPotential&) { return std::string("zero"); },
                          [](const SquareWell&) { return std::string("square_well"); },
                          [](const PoschlTeller&) { return std::string("poschl_teller"); },
                          [](const GaussianWell&) { return std::string("gaussian_well"); },
                          [](const CustomTable&) { return std::string("custom_table"); },
                      },
                      kind_);
}

double PotentialSpec::operator()(double x) const {
    return std::visit(overloaded{
                          [](const ZeroPotential&) { return 0.0; },
                          [x](const SquareWell& p) {
                              const double ax = std::abs(x);
                              if (ax < p.halfwidth) return -p.depth;
                              if (ax == p.halfwidth) return -0.5 * p.depth;
                              return 0.0;
                          },
                          [x](const PoschlTeller& p) {
                              return -static_cast<double>(p.n) * (p.n + 1) * sech2(x);
                          },
                          [x](const GaussianWell& p) {
                              const double u = x / p.width;
                              return -p.depth * std::exp(-0.5 * u * u);
                          },
                          [x](const CustomTable& t) { return table_value(t, x); },
                      },
                      kind_);
}

std::vector<double> PotentialSpec::breakpoints() const {
    return std::visit(overloaded{
                          [](const ZeroPotential&) { return std::vector<double>{}; },
                          [](const SquareWell& p) { return std::vector<double>{-p.halfwidth, p.halfwidth}; },
                          [](const PoschlTeller&) { return std::vector<double>{}; },
                          [](const GaussianWell&) { return std::vector<double>{}; },
                          [](const CustomTable& t) { return t.x; },
                      },
                      kind_);
}

std::optional<std::pair<double, double>> PotentialSpec::effective_support() const {
    using Support = std::optional<std::pair<double, double>>;
    return std::visit(
        overloaded{
            [](const ZeroPotential&) -> Support { return std::nullopt; },
            [](const SquareWell& p) -> Support { return std::pair{-p.halfwidth, p.halfwidth}; },
            [](const PoschlTeller&) -> Support {
                // sech^2 x < tol  <=>  cosh x > tol^{-1/2}
                const double r = std::acosh(1.0 / std::sqrt(kSupportTolerance));
                return std::pair{-r, r};
            },
            [](const GaussianWell& p) -> Support {
                const double r = p.width * std::sqrt(-2.0 * std::log(kSupportTolerance));
                return std::pair{-r, r};
            },
            [](const CustomTable& t) -> Support {
                std::size_t first = t.v.size();
                std::size_t last = 0;
                for (std::size_t i = 0; i < t.v.size(); ++i) {
                    if (t.v[i] != 0.0) {
                        first = std::min(first, i);
                        last = i;
                    }
                }
                if (first == t.v.size()) return std::nullopt;
                // The interpolant reaches zero one table node past the last nonzero value.
                const double lo = first > 0 ? t.x[first - 1] : t.x.front();
                const double hi = last + 1 < t.x.size() ? t.x[last + 1] : t.x.back();
                return std::pair{lo, hi};
            },
        },
        kind_);
}

bool PotentialSpec::compactly_supported() const {
    return !std::holds_alternative<PoschlTeller>(kind_) && !std::holds_alternative<GaussianWell>(kind_);
}

bool PotentialSpec::even() const {
    if (const auto* t = std::get_if<CustomTable>(&kind_)) {
        const std::size_t n = t->x.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(t->x[i] + t->x[n - 1 - i]) > 1e-12 || std::abs(t->v[i] - t->v[n - 1 - i]) > 1e-12) {
                return false;
            }
        }
    }
    return true;
}

double PotentialSpec::max_abs() const {
    return std::visit(overloaded{
                          [](const ZeroPotential&) { return 0.0; },
                          [](const SquareWell& p) { return p.depth; },
                          [](const PoschlTeller& p) { return static_cast<double>(p.n) * (p.n + 1); },
                          [](const GaussianWell& p) { return p.depth; },
                          [](const CustomTable& t) {
                              double m = 0.0;
                              for (double v : t.v) m = std::max(m, std::abs(v));
                              return m;
                          },
                      },
                      kind_);
}

SampledPotential::SampledPotential(PotentialSpec spec, SpatialGrid grid, std::vector<double> values,
                                   std::array<double, 5> norms, bool compact_support)
    : spec_(std::move(spec)),
      grid_(grid),
      values_(std::move(values)),
      norms_(norms),
      compact_support_(compact_support) {}

namespace {

double trapezoid_weighted(const SpatialGrid& grid, const std::vector<double>& values, double sigma) {
    const std::size_t n = grid.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        const double weight = sigma == 0.0 ? 1.0 : std::pow(1.0 + x * x, 0.5 * sigma);
        sum += w * weight * std::abs(values[i]);
    }
    return sum * grid.spacing();
}

}  // namespace

SampledPotential build_potential(const PotentialSpec& spec, const SpatialGrid& grid) {
    if (const auto* t = std::get_if<CustomTable>(&spec.kind())) {
        if (t->x.front() > grid.x_min() || t->x.back() < grid.x_max()) {
            throw InvalidArgument("custom_table does not cover the grid [" + std::to_string(grid.x_min()) +
                                  ", " + std::to_string(grid.x_max()) + "]");
        }
    }
    const std::size_t n = grid.size();
    const double snap = 1e-9 * grid.spacing();
    const std::vector<double> breaks = spec.breakpoints();

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = grid.x(i);
        // A node within rounding distance of a jump takes the jump's mean value.
        for (double b : breaks) {
            if (std::abs(x - b) <= snap) {
                x = b;
                break;
            }
        }
        const double v = spec(x);
        if (!std::isfinite(v)) {
            throw InvalidArgument("potential sample is not finite at x = " + std::to_string(x));
        }
        values[i] = v;
    }

    std::array<double, 5> norms{};
    for (int s = 0; s < 5; ++s) norms[static_cast<std::size_t>(s)] = trapezoid_weighted(grid, values, s);

    bool compact = false;
    if (values.front() == 0.0 && values.back() == 0.0) compact = true;

    return SampledPotential(spec, grid, std::move(values), norms, compact);
}

double weighted_norm(const SampledPotential& V, double sigma) {
    if (!std::isfinite(sigma)) throw InvalidArgument("weighted_norm: sigma must be finite");
    return trapezoid_weighted(V.grid(), V.values(), sigma);
}

double tail_mass(const SampledPotential& V, double rho) {
    if (!(rho >= 0.0)) throw InvalidArgument("tail_mass: rho must be >= 0");
    const SpatialGrid& g = V.grid();
    const auto& v = V.values();
    const std::size_t n = g.size();
    const double h = g.spacing();

    // int_{x >= a}^{x_max} |V| by trapezoid, partial first cell against the interpolant.
    auto right_integral = [&](double a) {
        if (a >= g.x_max()) return 0.0;
        if (a <= g.x_min()) a = g.x_min();
        const double s = (a - g.x_min()) / h;
        std::size_t k = static_cast<std::size_t>(std::floor(s));
        if (k >= n - 1) k = n - 2;
        const double frac = s - static_cast<double>(k);
        const double va = (1.0 - frac) * std::abs(v[k]) + frac * std::abs(v[k + 1]);
        double sum = 0.5 * (1.0 - frac) * h * (va + std::abs(v[k + 1]));
        for (std::size_t i = k + 1; i + 1 < n; ++i) sum += 0.5 * h * (std::abs(v[i]) + std::abs(v[i + 1]));
        return sum;
    };
    auto left_integral = [&](double b) {
        if (b <= g.x_min()) return 0.0;
        if (b >= g.x_max()) b = g.x_max();
        const double s = (b - g.x_min()) / h;
        std::size_t k = static_cast<std::size_t>(std::floor(s));
        if (k >= n - 1) k = n - 2;
        const double frac = s - static_cast<double>(k);
        const double vb = (1.0 - frac) * std::abs(v[k]) + frac * std::abs(v[k + 1]);
        double sum = 0.5 * frac * h * (std::abs(v[k]) + vb);
        for (std::size_t i = 0; i < k; ++i) sum += 0.5 * h * (std::abs(v[i]) + std::abs(v[i + 1]));
        return sum;
    };
    return left_integral(-rho) + right_integral(rho);
}

}  // namespace jostlab
