#include "jostlab/jost.hpp"

#include "jost_mesh.hpp"
#include "jostlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <limits>
#include <string>

namespace jostlab {

namespace {

constexpr cplx kI{0.0, 1.0};

// Continues (f, f') from station s to x with the free equation f'' = -lambda^2 f.
std::pair<cplx, cplx> free_continue(double lambda, double s, cplx f, cplx df, double x) {
    const double d = x - s;
    const double c = std::cos(lambda * d);
    const double sn = std::sin(lambda * d);
    const double sinc = lambda == 0.0 ? d : sn / lambda;
    return {f * c + df * sinc, -lambda * sn * f + df * c};
}

}  // namespace

cplx JostSolution::f(const SpatialGrid& grid, std::size_t i) const {
    const double sgn = direction == Direction::plus ? 1.0 : -1.0;
    return std::exp(kI * (sgn * lambda * grid.x(i))) * m[i];
}

cplx JostSolution::df(const SpatialGrid& grid, std::size_t i) const {
    const double sgn = direction == Direction::plus ? 1.0 : -1.0;
    return std::exp(kI * (sgn * lambda * grid.x(i))) * (dm_dx[i] + kI * (sgn * lambda) * m[i]);
}

JostSolver::JostSolver(const SampledPotential& V, JostOptions options) : V_(V), options_(options) {
    if (!(options_.tol_ode > 0.0)) throw InvalidArgument("tol_ode must be > 0");
    if (options_.scheme == JostScheme::magnus4) {
        fine_ = std::make_shared<detail::JostMesh>(V_, options_.max_step);
        coarse_ = std::make_shared<detail::JostMesh>(V_, 2.0 * options_.max_step);
    }
}

JostSolver::~JostSolver() = default;
JostSolver::JostSolver(const JostSolver&) = default;
JostSolver& JostSolver::operator=(const JostSolver&) = default;
JostSolver::JostSolver(JostSolver&&) noexcept = default;
JostSolver& JostSolver::operator=(JostSolver&&) noexcept = default;

JostSolution JostSolver::solve(double lambda, Direction direction) const {
    if (!std::isfinite(lambda)) throw InvalidArgument("Jost solve: lambda must be finite");
    return options_.scheme == JostScheme::magnus4 ? solve_magnus(lambda, direction)
                                                  : solve_trapezoid(lambda, direction);
}

JostSolution JostSolver::solve_magnus(double lambda, Direction direction) const {
    const SpatialGrid& grid = V_.grid();
    const std::size_t n = grid.size();
    JostSolution sol;
    sol.direction = direction;
    sol.lambda = lambda;
    sol.m.assign(n, cplx(1.0, 0.0));
    sol.dm_dx.assign(n, cplx(0.0, 0.0));

    const detail::JostMesh& mesh = *fine_;
    if (mesh.free()) {
        sol.converged = true;
        return sol;
    }

    std::vector<detail::Mat2> M;
    std::vector<detail::Mat2> Mc;
    mesh.transfer_matrices(lambda, M);
    coarse_->transfer_matrices(lambda, Mc);

    ComplexArray f(n);
    ComplexArray df(n);
    const bool plus = direction == Direction::plus;
    const double sgn = plus ? 1.0 : -1.0;
    std::pair<cplx, cplx> end;
    std::pair<cplx, cplx> end_coarse;
    if (plus) {
        const cplx f0 = std::exp(kI * (lambda * mesh.hi()));
        end = mesh.sweep_backward(M, f0, kI * lambda * f0, f.data(), df.data());
        end_coarse = coarse_->sweep_backward(Mc, f0, kI * lambda * f0, nullptr, nullptr);
    } else {
        const cplx f0 = std::exp(-kI * (lambda * mesh.lo()));
        end = mesh.sweep_forward(M, f0, -kI * lambda * f0, f.data(), df.data());
        end_coarse = coarse_->sweep_forward(Mc, f0, -kI * lambda * f0, nullptr, nullptr);
    }
    const double far = plus ? mesh.lo() : mesh.hi();

    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        const bool inside = mesh.covers_nodes() && i >= mesh.first_node() && i <= mesh.last_node();
        if (!inside) {
            const bool owning_side = plus ? x > mesh.hi() : x < mesh.lo();
            if (owning_side) continue;  // m = 1, m' = 0 exactly
            std::tie(f[i], df[i]) = free_continue(lambda, far, end.first, end.second, x);
        }
        const cplx phase = std::exp(-kI * (sgn * lambda * x));
        sol.m[i] = phase * f[i];
        sol.dm_dx[i] = phase * (df[i] - kI * (sgn * lambda) * f[i]);
    }

    // Magnus-4 error ratio between step h and 2h is 16.
    const double scale = std::max(1.0, std::abs(end.first));
    const double dscale = std::max(1.0, std::abs(lambda));
    const double diff = std::max(std::abs(end.first - end_coarse.first),
                                 std::abs(end.second - end_coarse.second) / dscale);
    sol.error_estimate = diff / 15.0 / scale;
    sol.iterations = static_cast<int>(mesh.steps());

    bool finite = std::isfinite(sol.error_estimate);
    for (std::size_t i = 0; i < n && finite; ++i) {
        finite = std::isfinite(sol.m[i].real()) && std::isfinite(sol.m[i].imag());
    }
    sol.converged = finite && sol.error_estimate <= options_.tol_ode;
    return sol;
}

// Trapezoid discretization of
//   m_+(x) = 1 + int_x^inf e^{i l (y-x)} sin(l (y-x))/l V(y) m_+(y) dy,
//   m_+'(x) = -int_x^inf e^{2 i l (y-x)} V(y) m_+(y) dy,
// with the kernel split into products of functions of x and of y so that
// the sweep is O(n). The mirrored equations give m_-.
JostSolution JostSolver::solve_trapezoid(double lambda, Direction direction) const {
    const SpatialGrid& grid = V_.grid();
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    const auto& v = V_.values();
    const double l = lambda;

    auto sinc = [l](double x) { return l == 0.0 ? x : std::sin(l * x) / l; };
    auto cosl = [l](double x) { return std::cos(l * x); };

    JostSolution sol;
    sol.direction = direction;
    sol.lambda = lambda;
    sol.m.assign(n, cplx(1.0, 0.0));
    sol.dm_dx.assign(n, cplx(0.0, 0.0));
    sol.iterations = static_cast<int>(n);
    sol.error_estimate = std::numeric_limits<double>::quiet_NaN();

    cplx P{0.0, 0.0};  // sum w e^{+-i l y} s(y) V m
    cplx Q{0.0, 0.0};  // sum w e^{+-i l y} c(y) V m
    cplx R{0.0, 0.0};  // sum w e^{+-2 i l y} V m

    if (direction == Direction::plus) {
        for (std::size_t k = n; k-- > 0;) {
            const double x = grid.x(k);
            if (k + 1 < n) {
                const cplx e = std::exp(-kI * (l * x));
                sol.m[k] = 1.0 + e * (cosl(x) * P - sinc(x) * Q);
                sol.dm_dx[k] = -(e * e) * R - 0.5 * h * v[k] * sol.m[k];
            }
            const double w = (k + 1 == n) ? 0.5 * h : h;
            const cplx vm = v[k] * sol.m[k];
            const cplx e = std::exp(kI * (l * x));
            P += w * e * sinc(x) * vm;
            Q += w * e * cosl(x) * vm;
            R += w * e * e * vm;
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            const double x = grid.x(k);
            if (k > 0) {
                const cplx e = std::exp(kI * (l * x));
                sol.m[k] = 1.0 + e * (sinc(x) * Q - cosl(x) * P);
                sol.dm_dx[k] = (e * e) * R + 0.5 * h * v[k] * sol.m[k];
            }
            const double w = k == 0 ? 0.5 * h : h;
            const cplx vm = v[k] * sol.m[k];
            const cplx e = std::exp(-kI * (l * x));
            P += w * e * sinc(x) * vm;
            Q += w * e * cosl(x) * vm;
            R += w * e * e * vm;
        }
    }

    bool finite = true;
    for (std::size_t i = 0; i < n && finite; ++i) {
        finite = std::isfinite(sol.m[i].real()) && std::isfinite(sol.m[i].imag()) &&
                 std::isfinite(sol.dm_dx[i].real()) && std::isfinite(sol.dm_dx[i].imag());
    }
    sol.converged = finite;
    return sol;
}

WronskianPair JostSolver::wronskians(double lambda) const {
    const JostSolution plus = solve(lambda, Direction::plus);
    const JostSolution minus = solve(lambda, Direction::minus);
    const JostSolution reflected = solve(-lambda, Direction::plus);
    for (const JostSolution* s : {&plus, &minus, &reflected}) {
        if (!s->converged) {
            throw NumericalError("Jost solution did not converge at lambda = " + std::to_string(s->lambda) +
                                 " (error estimate " + std::to_string(s->error_estimate) + ")");
        }
    }
    const std::size_t i = V_.grid().matching_index();
    return {lambda, wronskian_at(plus, minus, i), wronskian_tilde_at(V_.grid(), minus, reflected, i)};
}

JostSolution solve_jost(const SampledPotential& V, double lambda, Direction direction, const JostOptions& options) {
    JostSolution sol = JostSolver(V, options).solve(lambda, direction);
    if (!sol.converged) {
        throw NumericalError("Jost solution did not converge at lambda = " + std::to_string(lambda) +
                             " (error estimate " + std::to_string(sol.error_estimate) + ")");
    }
    return sol;
}

WronskianPair wronskians(const SampledPotential& V, double lambda, const JostOptions& options) {
    return JostSolver(V, options).wronskians(lambda);
}

cplx wronskian_at(const JostSolution& plus, const JostSolution& minus, std::size_t i) {
    const double l = plus.lambda;
    return plus.m[i] * minus.dm_dx[i] - plus.dm_dx[i] * minus.m[i] - 2.0 * kI * l * plus.m[i] * minus.m[i];
}

cplx wronskian_tilde_at(const SpatialGrid& grid, const JostSolution& minus, const JostSolution& plus_reflected,
                        std::size_t i) {
    // f_-(x, l) and f_+(x, -l) share the factor e^{-i l x}.
    const double l = minus.lambda;
    const cplx core = minus.m[i] * plus_reflected.dm_dx[i] - minus.dm_dx[i] * plus_reflected.m[i];
    return std::exp(-2.0 * kI * (l * grid.x(i))) * core;
}

}  // namespace jostlab
