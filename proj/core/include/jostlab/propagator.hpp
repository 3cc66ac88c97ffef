#pragma once

#include "jostlab/grid.hpp"
#include "jostlab/jost.hpp"
#include "jostlab/potential.hpp"
#include "jostlab/scattering.hpp"
#include "jostlab/types.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jostlab {

/// Smooth even energy cutoff chi: 1 on [-lambda0, lambda0], 0 outside
/// [-2 lambda0, 2 lambda0], C-infinity in between.
class CutoffSpec {
public:
    explicit CutoffSpec(double lambda0);

    /// lambda0 = max(||V||_1, 1) when not given. Throws InvalidArgument if a
    /// given lambda0 is below ||V||_1.
    static CutoffSpec for_potential(const SampledPotential& V, std::optional<double> lambda0 = std::nullopt);

    double lambda0() const noexcept { return lambda0_; }
    double profile(double lambda) const noexcept;
    /// chi(lambda / 4).
    double tilde_profile(double lambda) const noexcept { return profile(0.25 * lambda); }
    /// Default spectral truncation max(8, 4 lambda0).
    double default_lambda_max() const noexcept;

private:
    double lambda0_;
};

enum class EvolutionMethod { closed_form, spectral, oracle };

std::string to_string(EvolutionMethod m);

struct EvolutionDiagnostics {
    std::size_t panels = 0;
    std::size_t nodes = 0;
    double lambda_max = 0.0;  ///< where the spectral integral actually stopped
    double est_error = 0.0;
};

struct EvolutionResult {
    double t = 0.0;
    SpatialGrid grid;
    ComplexArray u;
    EvolutionMethod method = EvolutionMethod::spectral;
    EvolutionDiagnostics diagnostics;
};

/// Times with |t| below this are rejected by the quadrature-based propagators.
inline constexpr double kMinimumTime = 0.1;

/// u = e^{-i t d^2/dx^2} psi by direct quadrature of the kernel
/// (-4 pi i t)^{-1/2} exp(-i (x - y)^2 / (4 t)).
EvolutionResult free_evolve(const SpatialGrid& grid, std::span<const cplx> psi, double t);

/// Closed form of the free evolution of exp(-x^2/2):
/// (1 - 2 i t)^{-1/2} exp(-x^2 / (2 (1 - 2 i t))).
EvolutionResult free_gaussian_exact(const SpatialGrid& grid, double t);

/// Outgoing resolvent (H - lambda^2 - i0)^{-1} for one lambda, built from the
/// Jost solutions: R(x, y) = f_+(max) f_-(min) / W.
class Resolvent {
public:
    /// Throws HypothesisError when the kernel is singular (W ~ 0 at lambda = 0).
    Resolvent(const SampledPotential& V, double lambda, const JostOptions& options = {});

    double lambda() const noexcept { return lambda_; }
    cplx wronskian() const noexcept { return W_; }
    const ComplexArray& f_plus() const noexcept { return f_plus_; }
    const ComplexArray& f_minus() const noexcept { return f_minus_; }

    /// R(x_i, x_j); symmetric in (i, j).
    cplx kernel(std::size_t i, std::size_t j) const;

    /// (R psi)(x_i) for every node, by cumulative trapezoid quadrature in y.
    ComplexArray apply(std::span<const cplx> psi) const;

    /// <R psi, phi> = int (R psi) conj(phi) dx.
    cplx quadratic_form(std::span<const cplx> psi, std::span<const cplx> phi) const;

private:
    SpatialGrid grid_;
    double lambda_;
    cplx W_;
    ComplexArray f_plus_;
    ComplexArray f_minus_;
};

/// R(x_i, x_j) for a single pair of nodes.
cplx resolvent_kernel(const SampledPotential& V, double lambda, std::size_t i, std::size_t j,
                      const JostOptions& options = {});

/// Free outgoing resolvent (i / (2 lambda)) int e^{i lambda |x - y|} psi(y) dy on the grid.
ComplexArray apply_free_resolvent(const SpatialGrid& grid, double lambda, std::span<const cplx> psi);

struct BornResult {
    cplx value;            ///< partial sum through order K
    double last_term = 0;  ///< |term K|
    std::vector<cplx> terms;
};

/// sum_{k=0}^{K} <R0 (-V R0)^k psi, phi>. Throws HypothesisError when
/// 2|lambda| < ||V||_1 unless allow_divergent is set.
BornResult born_resolvent(const SampledPotential& V, double lambda, std::span<const cplx> psi,
                          std::span<const cplx> phi, int K, bool allow_divergent = false);

/// Which part of the energy axis the spectral integral covers.
enum class SpectralWindow {
    full,
    low,   ///< weighted by chi(lambda)
    high,  ///< weighted by 1 - chi(lambda)
};

struct EvolveOptions {
    JostOptions jost;
    std::optional<double> lambda_max;      ///< defaults to cutoff.default_lambda_max()
    double phase_per_node = kPi / 8.0;     ///< phase advance budget per quadrature node
    int gauss_points = 10;                 ///< Gauss-Legendre points per panel
    double max_panel_width = 0.25;
    std::size_t max_nodes = 500000;
    double tail_tolerance = 1e-8;  ///< stop once max|integrand| < tail_tolerance * ||psi||_1 over a panel
    SpectralWindow window = SpectralWindow::full;
};

/// e^{itH} P_ac psi = int_0^Lambda e^{i t lambda^2} (2 lambda / pi) Im[R(lambda) psi] dlambda
/// (Im taken separately on the real and imaginary parts of psi).
EvolutionResult evolve_ac(const SampledPotential& V, std::span<const cplx> psi, double t, const CutoffSpec& cutoff,
                          const EvolveOptions& options = {});

/// Several times sharing one lambda quadrature sized for the largest |t|.
std::vector<EvolutionResult> evolve_ac(const SampledPotential& V, std::span<const cplx> psi,
                                       std::span<const double> times, const CutoffSpec& cutoff,
                                       const EvolveOptions& options = {});

/// (-4 pi i t)^{-1/2} <psi, f0> f0, principal branch. HypothesisError on a generic report.
ComplexArray resonance_leading_term(const ResonanceReport& report, std::span<const cplx> psi, double t);

}  // namespace jostlab
