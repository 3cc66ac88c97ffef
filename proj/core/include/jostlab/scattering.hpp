#pragma once

#include "jostlab/jost.hpp"
#include "jostlab/potential.hpp"
#include "jostlab/types.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jostlab {

struct ScatteringRow {
    double lambda = 0.0;
    cplx W;
    cplx W_tilde;
    cplx alpha;  ///< W~ / (-2 i lambda)
    cplx beta;   ///< W / (-2 i lambda)
    cplx T;      ///< 1 / beta
    cplx R;      ///< alpha / beta
    double unitarity_defect = 0.0;  ///< | |beta|^2 - |alpha|^2 - 1 |
    bool flagged = false;           ///< unitarity_defect above tol_scatter
    bool failed = false;            ///< Jost solve failed; coefficients are NaN
    std::string error;
};

struct ScatteringTable {
    std::vector<ScatteringRow> rows;
    double tol_scatter = 1e-8;

    std::size_t failed_count() const;
    std::size_t flagged_count() const;
    /// Largest defect over rows that did not fail.
    double max_unitarity_defect() const;
};

struct ScatteringOptions {
    JostOptions jost;
    double tol_scatter = 1e-8;
};

/// One row per lambda (all lambda > 0, else InvalidArgument). A Jost failure
/// marks its row failed instead of aborting the table.
ScatteringTable scattering_table(const SampledPotential& V, std::span<const double> lambdas,
                                 const ScatteringOptions& options = {});

/// Coefficients from a Wronskian pair (lambda != 0).
ScatteringRow scattering_row(const WronskianPair& w, double tol_scatter = 1e-8);

enum class ZeroEnergyClass { generic, resonant, near_resonant };

std::string to_string(ZeroEnergyClass c);

struct ResonanceOptions {
    JostOptions jost;
    /// tol_res = tol_res_scale * (1 + ||<x> V||_1)
    double tol_res_scale = 1e-6;
};

/// W(0) and its three-valued classification: resonant if |W(0)| <= tol_res/10,
/// generic if |W(0)| >= 10 tol_res, near-resonant in between.
struct ZeroEnergyProbe {
    double W0 = 0.0;
    double tol_res = 0.0;
    ZeroEnergyClass classification = ZeroEnergyClass::generic;
};

ZeroEnergyProbe probe_zero_energy(const SampledPotential& V, const ResonanceOptions& options = {});

struct ResonanceReport {
    explicit ResonanceReport(const SpatialGrid& g) : grid(g) {}

    SpatialGrid grid;
    cplx W0;
    double tol_res = 0.0;
    ZeroEnergyClass classification = ZeroEnergyClass::generic;
    /// Resonant case only.
    std::optional<double> alpha0;
    std::optional<double> beta0;
    /// Bounded zero-energy solution with f0(+inf)^2 + f0(-inf)^2 = 2 and f0(x_max) > 0;
    /// empty in the generic case.
    RealArray f0;
    /// f0(x_max)^2 + f0(x_min)^2; NaN in the generic case.
    double norm_check = 0.0;
    /// f_-(x_max, 0) and f_+(x_min, 0); their product is 1 at a resonance.
    double c_plus = 0.0;
    double c_minus = 0.0;

    bool resonant() const noexcept { return classification == ZeroEnergyClass::resonant; }
};

/// Throws NearResonanceError when |W(0)| falls in the dead zone.
ResonanceReport detect_resonance(const SampledPotential& V, const ResonanceOptions& options = {});

/// <psi, f0> f0 by trapezoid quadrature. HypothesisError on a generic report.
ComplexArray project_resonance(std::span<const cplx> psi, const ResonanceReport& report);

/// <psi, f0> alone.
cplx resonance_overlap(std::span<const cplx> psi, const ResonanceReport& report);

/// A one-parameter family of potentials, e.g. square wells of varying depth.
using PotentialFamily = std::function<PotentialSpec(double)>;

struct DepthScanRow {
    double depth = 0.0;
    double W0 = 0.0;
    double tol_res = 0.0;
    ZeroEnergyClass classification = ZeroEnergyClass::generic;
};

std::vector<DepthScanRow> depth_scan(const PotentialFamily& family, const SpatialGrid& grid,
                                     std::span<const double> depths, const ResonanceOptions& options = {});

/// Bisects on the sign of W(0) between two depths where it differs.
/// Throws InvalidArgument if W(0) has the same sign at both ends.
double bisect_resonance(const PotentialFamily& family, const SpatialGrid& grid, double depth_lo, double depth_hi,
                        const ResonanceOptions& options = {}, double depth_tol = 1e-12);

}  // namespace jostlab
