#include "jostlab/scattering.hpp"

#include "jostlab/error.hpp"
#include "jostlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jostlab {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::size_t ScatteringTable::failed_count() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.failed; }));
}

std::size_t ScatteringTable::flagged_count() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.flagged; }));
}

double ScatteringTable::max_unitarity_defect() const {
    double m = 0.0;
    for (const auto& r : rows) {
        if (!r.failed) m = std::max(m, r.unitarity_defect);
    }
    return m;
}

ScatteringRow scattering_row(const WronskianPair& w, double tol_scatter) {
    if (w.lambda == 0.0) throw InvalidArgument("scattering coefficients need lambda != 0");
    ScatteringRow row;
    row.lambda = w.lambda;
    row.W = w.W;
    row.W_tilde = w.W_tilde;
    const cplx denom = -2.0 * kI * w.lambda;
    row.alpha = w.W_tilde / denom;
    row.beta = w.W / denom;
    if (row.beta == cplx(0.0, 0.0)) {
        throw NumericalError("W vanished at lambda = " + std::to_string(w.lambda));
    }
    row.T = 1.0 / row.beta;
    row.R = row.alpha / row.beta;
    row.unitarity_defect = std::abs(std::norm(row.beta) - std::norm(row.alpha) - 1.0);
    row.flagged = !(row.unitarity_defect <= tol_scatter);
    return row;
}

ScatteringTable scattering_table(const SampledPotential& V, std::span<const double> lambdas,
                                 const ScatteringOptions& options) {
    for (double l : lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) throw InvalidArgument("scattering_table: every lambda must be > 0");
    }
    const JostSolver solver(V, options.jost);
    ScatteringTable table;
    table.tol_scatter = options.tol_scatter;
    table.rows.reserve(lambdas.size());
    for (double l : lambdas) {
        try {
            table.rows.push_back(scattering_row(solver.wronskians(l), options.tol_scatter));
        } catch (const NumericalError& e) {
            ScatteringRow row;
            row.lambda = l;
            row.W = row.W_tilde = row.alpha = row.beta = row.T = row.R = cplx(kNaN, kNaN);
            row.unitarity_defect = kNaN;
            row.failed = true;
            row.error = e.what();
            table.rows.push_back(row);
        }
    }
    return table;
}

std::string to_string(ZeroEnergyClass c) {
    switch (c) {
        case ZeroEnergyClass::generic: return "generic";
        case ZeroEnergyClass::resonant: return "resonant";
        case ZeroEnergyClass::near_resonant: return "near_resonant";
    }
    return "unknown";
}

namespace {

struct ZeroEnergyData {
    JostSolution plus;
    JostSolution minus;
    ZeroEnergyProbe probe;
};

ZeroEnergyData zero_energy(const SampledPotential& V, const ResonanceOptions& options) {
    if (!(options.tol_res_scale > 0.0)) throw InvalidArgument("tol_res must be > 0");
    const JostSolver solver(V, options.jost);
    ZeroEnergyData d{solver.solve(0.0, Direction::plus), solver.solve(0.0, Direction::minus), {}};
    if (!d.plus.converged || !d.minus.converged) {
        throw NumericalError("zero-energy Jost solution did not converge");
    }
    d.probe.W0 = wronskian_at(d.plus, d.minus, V.grid().matching_index()).real();
    d.probe.tol_res = options.tol_res_scale * (1.0 + V.norm(1));
    const double a = std::abs(d.probe.W0);
    if (a <= 0.1 * d.probe.tol_res) {
        d.probe.classification = ZeroEnergyClass::resonant;
    } else if (a < 10.0 * d.probe.tol_res) {
        d.probe.classification = ZeroEnergyClass::near_resonant;
    } else {
        d.probe.classification = ZeroEnergyClass::generic;
    }
    return d;
}

}  // namespace

ZeroEnergyProbe probe_zero_energy(const SampledPotential& V, const ResonanceOptions& options) {
    return zero_energy(V, options).probe;
}

ResonanceReport detect_resonance(const SampledPotential& V, const ResonanceOptions& options) {
    const ZeroEnergyData d = zero_energy(V, options);
    if (d.probe.classification == ZeroEnergyClass::near_resonant) {
        throw NearResonanceError("zero energy is near-resonant: |W(0)| = " + std::to_string(std::abs(d.probe.W0)) +
                                     " lies within a factor 10 of tol_res = " + std::to_string(d.probe.tol_res),
                                 std::abs(d.probe.W0));
    }

    const SpatialGrid& grid = V.grid();
    ResonanceReport report(grid);
    report.W0 = cplx(d.probe.W0, 0.0);
    report.tol_res = d.probe.tol_res;
    report.classification = d.probe.classification;
    const std::size_t n = grid.size();
    report.c_plus = d.minus.m[n - 1].real();
    report.c_minus = d.plus.m[0].real();

    if (!report.resonant()) {
        report.norm_check = kNaN;
        return report;
    }

    const double cp = report.c_plus;
    report.beta0 = 0.5 * (cp + report.c_minus);
    report.alpha0 = 0.5 * (cp - report.c_minus);
    const double sign = cp >= 0.0 ? 1.0 : -1.0;
    const double scale = sign * std::sqrt(2.0 / (1.0 + cp * cp));
    report.f0.resize(n);
    for (std::size_t i = 0; i < n; ++i) report.f0[i] = scale * d.minus.m[i].real();
    report.norm_check = report.f0[n - 1] * report.f0[n - 1] + report.f0[0] * report.f0[0];
    return report;
}

cplx resonance_overlap(std::span<const cplx> psi, const ResonanceReport& report) {
    if (!report.resonant()) throw HypothesisError("projection onto f0 needs a resonant report");
    if (psi.size() != report.f0.size()) throw InvalidArgument("psi does not match the report grid");
    ComplexArray f0(report.f0.begin(), report.f0.end());
    return inner_product(psi, f0, report.grid.spacing());
}

ComplexArray project_resonance(std::span<const cplx> psi, const ResonanceReport& report) {
    const cplx c = resonance_overlap(psi, report);
    ComplexArray out(report.f0.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * report.f0[i];
    return out;
}

std::vector<DepthScanRow> depth_scan(const PotentialFamily& family, const SpatialGrid& grid,
                                     std::span<const double> depths, const ResonanceOptions& options) {
    std::vector<DepthScanRow> rows;
    rows.reserve(depths.size());
    for (double depth : depths) {
        const ZeroEnergyProbe p = probe_zero_energy(build_potential(family(depth), grid), options);
        rows.push_back({depth, p.W0, p.tol_res, p.classification});
    }
    return rows;
}

double bisect_resonance(const PotentialFamily& family, const SpatialGrid& grid, double depth_lo, double depth_hi,
                        const ResonanceOptions& options, double depth_tol) {
    auto w0 = [&](double d) { return probe_zero_energy(build_potential(family(d), grid), options).W0; };
    double a = depth_lo;
    double b = depth_hi;
    double fa = w0(a);
    const double fb = w0(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        throw InvalidArgument("bisect_resonance: W(0) has the same sign at both depths");
    }
    for (int it = 0; it < 200 && b - a > depth_tol; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = w0(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace jostlab
