#include "jostlab/analysis.hpp"

#include "jostlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jostlab {

double weighted_sup_norm(std::span<const cplx> u, const SpatialGrid& grid, double sigma) {
    if (u.size() != grid.size()) throw InvalidArgument("weighted_sup_norm: array does not match the grid");
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double w = sigma == 0.0 ? 1.0 : std::pow(1.0 + std::abs(grid.x(i)), sigma);
        m = std::max(m, w * std::abs(u[i]));
    }
    return m;
}

DecayFit fit_decay(std::span<const double> t_samples, std::span<const double> norms) {
    if (t_samples.size() != norms.size()) throw InvalidArgument("fit_decay: sample counts differ");
    if (t_samples.size() < 5) throw InvalidArgument("fit_decay: need at least 5 samples");
    const std::size_t n = t_samples.size();
    RealArray lx(n);
    RealArray ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(t_samples[i] > 0.0)) throw InvalidArgument("fit_decay: times must be positive");
        if (!(norms[i] > 0.0) || !std::isfinite(norms[i])) {
            throw InvalidArgument("fit_decay: norms must be positive and finite");
        }
        lx[i] = std::log(t_samples[i]);
        ly[i] = std::log(norms[i]);
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw InvalidArgument("fit_decay: times must not all be equal");

    DecayFit fit;
    fit.t_samples.assign(t_samples.begin(), t_samples.end());
    fit.norms.assign(norms.begin(), norms.end());
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ssr += r * r;
    }
    fit.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    return fit;
}

RealArray log_spaced(double a, double b, std::size_t n) {
    if (!(a > 0.0) || !(b > a) || n < 2) throw InvalidArgument("log_spaced needs 0 < a < b and n >= 2");
    RealArray out(n);
    const double la = std::log(a);
    const double lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.front() = a;
    out.back() = b;
    return out;
}

std::vector<std::string> weighted_l1_warnings(std::span<const cplx> psi, const SpatialGrid& grid, double k) {
    const double X = std::max(std::abs(grid.x_min()), std::abs(grid.x_max()));
    double total = 0.0;
    double outer = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = grid.x(i);
        const double v = std::pow(1.0 + std::abs(x), k) * std::abs(psi[i]);
        total += v;
        if (std::abs(x) > 0.9 * X) outer += v;
    }
    std::vector<std::string> warnings;
    if (total > 0.0 && outer > 1e-3 * total) {
        std::ostringstream os;
        os << "int (1+|x|)^" << k << " |psi| dx may be infinite: the outer tenth of the grid carries "
           << 100.0 * outer / total << "% of it";
        warnings.push_back(os.str());
    }
    return warnings;
}

namespace {

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

void check_times(const VerifyOptions& o) {
    if (o.t_samples.size() < 5) throw InvalidArgument("verification needs at least 5 time samples");
    if (!(o.slope_tol > 0.0) || !(o.control_tol > 0.0)) throw InvalidArgument("slope tolerances must be > 0");
}

}  // namespace

Verdict verify_transport(const SampledPotential& V, std::span<const cplx> psi, const CutoffSpec& cutoff,
                         const VerifyOptions& options) {
    check_times(options);
    const ResonanceReport report = detect_resonance(V, options.resonance);
    if (report.resonant()) {
        throw HypothesisError("zero energy is a resonance (|W(0)| = " + std::to_string(std::abs(report.W0)) +
                              "); the non-resonant rate does not apply");
    }
    if (!std::isfinite(V.norm(3))) throw HypothesisError("||<x>^3 V||_1 is not finite");

    const SpatialGrid& grid = V.grid();
    Verdict v;
    v.theorem = 1;
    v.tol = options.slope_tol;
    v.control_tol = options.control_tol;
    v.warnings = weighted_l1_warnings(psi, grid, 1.0);

    const auto results = evolve_ac(V, psi, options.t_samples, cutoff, options.evolve);
    RealArray weighted;
    RealArray plain;
    for (const auto& r : results) {
        weighted.push_back(weighted_sup_norm(r.u, grid, -1.0));
        plain.push_back(weighted_sup_norm(r.u, grid, 0.0));
        v.rows.push_back({r.t, weighted.back(), -1.0, false});
    }
    for (std::size_t i = 0; i < results.size(); ++i) v.rows.push_back({results[i].t, plain[i], 0.0, false});
    v.fit = fit_decay(options.t_samples, weighted);
    v.control = fit_decay(options.t_samples, plain);
    v.pass = within(v.fit.slope, v.target, v.tol);
    v.control_pass = within(v.control.slope, v.control_target, v.control_tol);
    return v;
}

Verdict verify_resonance(const SampledPotential& V, std::span<const cplx> psi, const CutoffSpec& cutoff,
                         const VerifyOptions& options) {
    check_times(options);
    const ResonanceReport report = detect_resonance(V, options.resonance);
    if (!report.resonant()) {
        throw HypothesisError("zero energy is not a resonance (|W(0)| = " + std::to_string(std::abs(report.W0)) +
                              "); the resonant rate does not apply");
    }
    if (!std::isfinite(V.norm(4))) throw HypothesisError("||<x>^4 V||_1 is not finite");

    const SpatialGrid& grid = V.grid();
    Verdict v;
    v.theorem = 2;
    v.tol = options.slope_tol;
    v.control_tol = options.control_tol;
    v.warnings = weighted_l1_warnings(psi, grid, 2.0);

    const auto results = evolve_ac(V, psi, options.t_samples, cutoff, options.evolve);
    RealArray subtracted;
    RealArray plain;
    for (const auto& r : results) {
        const ComplexArray lead = resonance_leading_term(report, psi, r.t);
        ComplexArray rem(r.u.size());
        for (std::size_t i = 0; i < rem.size(); ++i) rem[i] = r.u[i] - lead[i];
        subtracted.push_back(weighted_sup_norm(rem, grid, -2.0));
        plain.push_back(weighted_sup_norm(r.u, grid, -2.0));
        v.rows.push_back({r.t, subtracted.back(), -2.0, true});
    }
    for (std::size_t i = 0; i < results.size(); ++i) v.rows.push_back({results[i].t, plain[i], -2.0, false});
    v.fit = fit_decay(options.t_samples, subtracted);
    v.control = fit_decay(options.t_samples, plain);
    v.pass = within(v.fit.slope, v.target, v.tol);
    v.control_pass = within(v.control.slope, v.control_target, v.control_tol);
    return v;
}

}  // namespace jostlab
