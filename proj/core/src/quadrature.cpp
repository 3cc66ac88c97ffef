#include "jostlab/quadrature.hpp"

#include "jostlab/error.hpp"

#include <cmath>

namespace jostlab {

double trapezoid(std::span<const double> f, double h) {
    if (f.empty()) return 0.0;
    double sum = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
    return f.size() == 1 ? 0.0 : sum * h;
}

cplx trapezoid(std::span<const cplx> f, double h) {
    if (f.size() < 2) return {};
    cplx sum = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
    return sum * h;
}

cplx inner_product(std::span<const cplx> f, std::span<const cplx> g, double h) {
    if (f.size() != g.size()) throw InvalidArgument("inner_product: size mismatch");
    const std::size_t n = f.size();
    if (n < 2) return {};
    cplx sum = 0.5 * (f[0] * std::conj(g[0]) + f[n - 1] * std::conj(g[n - 1]));
    for (std::size_t i = 1; i + 1 < n; ++i) sum += f[i] * std::conj(g[i]);
    return sum * h;
}

double l1_norm(std::span<const cplx> f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    double sum = 0.5 * (std::abs(f[0]) + std::abs(f[n - 1]));
    for (std::size_t i = 1; i + 1 < n; ++i) sum += std::abs(f[i]);
    return sum * h;
}

double weighted_l1_norm(std::span<const cplx> f, const SpatialGrid& grid, double k) {
    if (f.size() != grid.size()) throw InvalidArgument("weighted_l1_norm: size mismatch");
    const std::size_t n = f.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        sum += w * std::pow(1.0 + std::abs(grid.x(i)), k) * std::abs(f[i]);
    }
    return sum * grid.spacing();
}

double l2_norm(std::span<const cplx> f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    double sum = 0.5 * (std::norm(f[0]) + std::norm(f[n - 1]));
    for (std::size_t i = 1; i + 1 < n; ++i) sum += std::norm(f[i]);
    return std::sqrt(sum * h);
}

GaussRule gauss_legendre(int n) {
    if (n < 1) throw InvalidArgument("gauss_legendre: n must be >= 1");
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = x;
                p0 = 1.0;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace jostlab
