#include "jostlab/oracle.hpp"

#include "jostlab/error.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

namespace jostlab {

std::vector<double> DiscreteHamiltonian::dense() const {
    const std::size_t n = diagonal.size();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m[i * n + i] = diagonal[i];
        if (i + 1 < n) {
            m[i * n + i + 1] = off_diagonal[i];
            m[(i + 1) * n + i] = off_diagonal[i];
        }
    }
    return m;
}

DiscreteHamiltonian discretize(const SampledPotential& V) {
    const SpatialGrid& g = V.grid();
    const std::size_t n = g.size();
    const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
    DiscreteHamiltonian H{g, RealArray(n), RealArray(n - 1, -inv_h2)};
    for (std::size_t i = 0; i < n; ++i) H.diagonal[i] = 2.0 * inv_h2 + V.value(i);
    return H;
}

DiscreteHamiltonian discretize(const PotentialSpec& spec, const SpatialGrid& grid) {
    return discretize(build_potential(spec, grid));
}

namespace {

RealArray run_stemr(const DiscreteHamiltonian& H, bool vectors, RealArray* z) {
    const auto n = static_cast<lapack_int>(H.diagonal.size());
    RealArray d = H.diagonal;
    RealArray e(H.diagonal.size(), 0.0);
    std::copy(H.off_diagonal.begin(), H.off_diagonal.end(), e.begin());
    RealArray w(H.diagonal.size());
    std::vector<lapack_int> isuppz(2 * H.diagonal.size());
    lapack_int m = 0;
    lapack_logical tryrac = 1;
    if (vectors) z->assign(H.diagonal.size() * H.diagonal.size(), 0.0);
    const lapack_int info =
        LAPACKE_dstemr(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, &m,
                       w.data(), vectors ? z->data() : nullptr, vectors ? n : 1, n, isuppz.data(), &tryrac);
    if (info != 0 || m != n) {
        throw NumericalError("tridiagonal eigensolver failed (info = " + std::to_string(info) + ")");
    }
    return w;
}

}  // namespace

SpectralDecomposition decompose(const DiscreteHamiltonian& H) {
    SpectralDecomposition D{H.grid, {}, {}};
    D.eigenvalues = run_stemr(H, true, &D.eigenvectors);
    const double scale = 1.0 / std::sqrt(H.grid.spacing());
    const std::size_t n = H.grid.size();
    for (std::size_t k = 0; k < n; ++k) {
        double* v = D.eigenvectors.data() + k * n;
        // Sign convention: first entry of largest magnitude is positive.
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (std::abs(v[i]) > std::abs(v[imax]) * (1.0 + 1e-12)) imax = i;
        }
        const double s = v[imax] < 0.0 ? -scale : scale;
        for (std::size_t i = 0; i < n; ++i) v[i] *= s;
    }
    return D;
}

RealArray eigenvalues(const DiscreteHamiltonian& H) { return run_stemr(H, false, nullptr); }

BoundStateSet bound_states(const SpectralDecomposition& D, double tol) {
    BoundStateSet b;
    for (std::size_t k = 0; k < D.size(); ++k) {
        if (D.eigenvalues[k] < -tol) {
            b.energies.push_back(D.eigenvalues[k]);
            const auto v = D.vector(k);
            b.vectors.emplace_back(v.begin(), v.end());
        }
    }
    return b;
}

BoundStateSet bound_states(const DiscreteHamiltonian& H, double tol) { return bound_states(decompose(H), tol); }

ComplexArray remove_bound_states(std::span<const cplx> psi, const BoundStateSet& bound, double h) {
    ComplexArray out(psi.begin(), psi.end());
    for (const RealArray& v : bound.vectors) {
        if (v.size() != psi.size()) throw InvalidArgument("bound state does not match the wave function grid");
        cplx c{0.0, 0.0};
        for (std::size_t i = 0; i < v.size(); ++i) c += v[i] * psi[i];
        c *= h;
        for (std::size_t i = 0; i < v.size(); ++i) out[i] -= c * v[i];
    }
    return out;
}

std::vector<EvolutionResult> evolve_exact(const SpectralDecomposition& D, std::span<const cplx> psi,
                                          std::span<const double> times, bool project_ac, double tol) {
    const std::size_t n = D.grid.size();
    if (psi.size() != n) throw InvalidArgument("wave function does not match the oracle grid");
    const double h = D.grid.spacing();

    ComplexArray coeff(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto v = D.vector(k);
        cplx c{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) c += v[i] * psi[i];
        coeff[k] = h * c;
    }

    std::vector<EvolutionResult> out;
    out.reserve(times.size());
    for (double t : times) {
        if (!std::isfinite(t)) throw InvalidArgument("evolve_exact: t must be finite");
        EvolutionResult r{t, D.grid, ComplexArray(n, cplx(0.0, 0.0)), EvolutionMethod::oracle, {}};
        for (std::size_t k = 0; k < n; ++k) {
            if (project_ac && D.eigenvalues[k] < -tol) continue;
            const cplx a = std::exp(cplx(0.0, t * D.eigenvalues[k])) * coeff[k];
            const auto v = D.vector(k);
            for (std::size_t i = 0; i < n; ++i) r.u[i] += a * v[i];
        }
        out.push_back(std::move(r));
    }
    return out;
}

EvolutionResult evolve_exact(const SpectralDecomposition& D, std::span<const cplx> psi, double t, bool project_ac,
                             double tol) {
    const double times[1] = {t};
    return std::move(evolve_exact(D, psi, times, project_ac, tol).front());
}

}  // namespace jostlab
