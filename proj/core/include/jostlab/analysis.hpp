#pragma once

#include "jostlab/grid.hpp"
#include "jostlab/potential.hpp"
#include "jostlab/propagator.hpp"
#include "jostlab/scattering.hpp"
#include "jostlab/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace jostlab {

/// max_i (1 + |x_i|)^sigma |u(x_i)|.
double weighted_sup_norm(std::span<const cplx> u, const SpatialGrid& grid, double sigma);

/// Least-squares line through (log t, log norm).
struct DecayFit {
    RealArray t_samples;
    RealArray norms;
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

/// Needs >= 5 samples, all t and norms positive.
DecayFit fit_decay(std::span<const double> t_samples, std::span<const double> norms);

/// n points spaced evenly in log t on [a, b].
RealArray log_spaced(double a, double b, std::size_t n);

struct DecayRow {
    double t = 0.0;
    double norm = 0.0;
    double weight_sigma = 0.0;
    bool subtracted = false;
};

struct VerifyOptions {
    RealArray t_samples = log_spaced(10.0, 80.0, 12);
    double slope_tol = 0.15;
    double control_tol = 0.1;
    EvolveOptions evolve;
    ResonanceOptions resonance;
};

struct Verdict {
    int theorem = 0;
    DecayFit fit;          ///< the rate the theorem claims
    DecayFit control;      ///< unweighted (theorem 1) or unsubtracted (theorem 2)
    double target = -1.5;
    double tol = 0.15;
    double control_target = -0.5;
    double control_tol = 0.1;
    bool pass = false;
    bool control_pass = false;
    std::vector<DecayRow> rows;
    std::vector<std::string> warnings;
};

/// Non-resonant rate: sup (1+|x|)^{-1} |e^{itH} P_ac psi| ~ t^{-3/2}, with the
/// unweighted sup-norm (~ t^{-1/2}) as control. Throws HypothesisError for a
/// resonant V and NearResonanceError in the dead zone.
Verdict verify_transport(const SampledPotential& V, std::span<const cplx> psi, const CutoffSpec& cutoff,
                         const VerifyOptions& options = {});

/// Resonant rate: sup (1+|x|)^{-2} |e^{itH} P_ac psi - (-4 pi i t)^{-1/2} P0 psi| ~ t^{-3/2},
/// with the unsubtracted weighted norm (~ t^{-1/2}) as control. Throws
/// HypothesisError for a generic V.
Verdict verify_resonance(const SampledPotential& V, std::span<const cplx> psi, const CutoffSpec& cutoff,
                         const VerifyOptions& options = {});

/// Warns when int (1+|x|)^k |psi| looks divergent: the outer tenth of the
/// grid carries a noticeable share of the integral.
std::vector<std::string> weighted_l1_warnings(std::span<const cplx> psi, const SpatialGrid& grid, double k);

}  // namespace jostlab
