#include "jostlab/propagator.hpp"

#include "jost_mesh.hpp"
#include "jostlab/error.hpp"
#include "jostlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jostlab {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_time(double t) {
    if (!std::isfinite(t) || std::abs(t) < kMinimumTime) {
        throw InvalidArgument("|t| must be >= " + std::to_string(kMinimumTime) + " (got " + std::to_string(t) + ")");
    }
}

void check_size(std::span<const cplx> psi, const SpatialGrid& grid) {
    if (psi.size() != grid.size()) {
        throw InvalidArgument("wave function has " + std::to_string(psi.size()) + " samples, grid has " +
                              std::to_string(grid.size()));
    }
}

// Smooth step building block exp(-1/s) for s > 0.
double bump_piece(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// e^{i lambda x_i} on the whole grid by recurrence, re-anchored every 64 nodes.
void plane_wave(const SpatialGrid& grid, double lambda, ComplexArray& E) {
    const std::size_t n = grid.size();
    E.resize(n);
    const cplx step = std::exp(kI * (lambda * grid.spacing()));
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) {
            E[i] = std::exp(kI * (lambda * grid.x(i)));
        } else {
            E[i] = E[i - 1] * step;
        }
    }
}

// (R psi)_i = (f+_i int_{x_0}^{x_i} f- psi + f-_i int_{x_i}^{x_end} f+ psi) / W,
// both integrals by cumulative trapezoid, restricted to the support of psi.
void apply_jost_resolvent(std::span<const cplx> fp, std::span<const cplx> fm, cplx W, std::span<const cplx> psi,
                          std::size_t lo, std::size_t hi, double h, ComplexArray& out, ComplexArray& scratch) {
    const std::size_t n = psi.size();
    out.resize(n);
    scratch.assign(n, cplx(0.0, 0.0));
    // scratch_i = int_{x_0}^{x_i} f- psi
    cplx acc{0.0, 0.0};
    cplx prev = fm[lo] * psi[lo];
    for (std::size_t i = lo + 1; i <= hi; ++i) {
        const cplx cur = fm[i] * psi[i];
        acc += 0.5 * h * (prev + cur);
        scratch[i] = acc;
        prev = cur;
    }
    for (std::size_t i = hi + 1; i < n; ++i) scratch[i] = acc;

    const cplx invW = 1.0 / W;
    cplx bcc{0.0, 0.0};
    prev = fp[hi] * psi[hi];
    for (std::size_t i = n; i-- > 0;) {
        if (i < hi && i >= lo) {
            const cplx cur = fp[i] * psi[i];
            bcc += 0.5 * h * (prev + cur);
            prev = cur;
        }
        out[i] = (fp[i] * scratch[i] + fm[i] * bcc) * invW;
    }
}

// Index range holding the nonzero samples of psi plus one neighbour on each side, so the
// trapezoid keeps the panels that touch the support; empty if psi == 0.
bool support_range(std::span<const cplx> psi, std::size_t& lo, std::size_t& hi) {
    lo = psi.size();
    hi = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (psi[i] != cplx(0.0, 0.0)) {
            lo = std::min(lo, i);
            hi = i;
        }
    }
    if (lo > hi) return false;
    if (lo > 0) --lo;
    if (hi + 1 < psi.size()) ++hi;
    return true;
}

}  // namespace

CutoffSpec::CutoffSpec(double lambda0) : lambda0_(lambda0) {
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) throw InvalidArgument("cutoff lambda0 must be > 0");
}

CutoffSpec CutoffSpec::for_potential(const SampledPotential& V, std::optional<double> lambda0) {
    const double l1 = V.norm(0);
    if (!lambda0) return CutoffSpec(std::max(l1, 1.0));
    if (*lambda0 < l1) {
        throw InvalidArgument("cutoff lambda0 = " + std::to_string(*lambda0) + " is below ||V||_1 = " +
                              std::to_string(l1));
    }
    return CutoffSpec(*lambda0);
}

double CutoffSpec::profile(double lambda) const noexcept {
    const double a = std::abs(lambda);
    if (a <= lambda0_) return 1.0;
    if (a >= 2.0 * lambda0_) return 0.0;
    const double u = (a - lambda0_) / lambda0_;
    const double g1 = bump_piece(1.0 - u);
    const double g0 = bump_piece(u);
    return g1 / (g1 + g0);
}

double CutoffSpec::default_lambda_max() const noexcept { return std::max(8.0, 4.0 * lambda0_); }

std::string to_string(EvolutionMethod m) {
    switch (m) {
        case EvolutionMethod::closed_form: return "closed_form";
        case EvolutionMethod::spectral: return "spectral";
        case EvolutionMethod::oracle: return "oracle";
    }
    return "unknown";
}

EvolutionResult free_evolve(const SpatialGrid& grid, std::span<const cplx> psi, double t) {
    check_time(t);
    check_size(psi, grid);
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    const cplx pref = 1.0 / std::sqrt(cplx(0.0, -4.0 * kPi * t));

    // The kernel depends on i - j only.
    ComplexArray K(2 * n - 1);
    for (std::size_t d = 0; d < 2 * n - 1; ++d) {
        const double z = (static_cast<double>(d) - static_cast<double>(n - 1)) * h;
        K[d] = std::exp(-kI * (z * z / (4.0 * t)));
    }
    std::vector<std::size_t> nz;
    ComplexArray wpsi;
    for (std::size_t j = 0; j < n; ++j) {
        if (psi[j] == cplx(0.0, 0.0)) continue;
        const double w = (j == 0 || j + 1 == n) ? 0.5 * h : h;
        nz.push_back(j);
        wpsi.push_back(w * psi[j]);
    }

    EvolutionResult r{t, grid, ComplexArray(n, cplx(0.0, 0.0)), EvolutionMethod::closed_form, {}};
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < nz.size(); ++k) acc += K[i + (n - 1) - nz[k]] * wpsi[k];
        r.u[i] = pref * acc;
    }
    return r;
}

EvolutionResult free_gaussian_exact(const SpatialGrid& grid, double t) {
    const std::size_t n = grid.size();
    const cplx s = 1.0 - 2.0 * kI * t;
    const cplx pref = 1.0 / std::sqrt(s);
    EvolutionResult r{t, grid, ComplexArray(n), EvolutionMethod::closed_form, {}};
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        r.u[i] = pref * std::exp(-x * x / (2.0 * s));
    }
    return r;
}

Resolvent::Resolvent(const SampledPotential& V, double lambda, const JostOptions& options)
    : grid_(V.grid()), lambda_(lambda) {
    const JostSolver solver(V, options);
    const JostSolution plus = solver.solve(lambda, Direction::plus);
    const JostSolution minus = solver.solve(lambda, Direction::minus);
    if (!plus.converged || !minus.converged) {
        throw NumericalError("Jost solution did not converge at lambda = " + std::to_string(lambda));
    }
    W_ = wronskian_at(plus, minus, grid_.matching_index());
    if (lambda == 0.0) {
        const double tol_res = 1e-6 * (1.0 + V.norm(1));
        if (std::abs(W_) < 10.0 * tol_res) {
            throw HypothesisError("resolvent kernel is singular at lambda = 0: zero energy is (near-)resonant");
        }
    }
    const std::size_t n = grid_.size();
    f_plus_.resize(n);
    f_minus_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        f_plus_[i] = plus.f(grid_, i);
        f_minus_[i] = minus.f(grid_, i);
    }
}

cplx Resolvent::kernel(std::size_t i, std::size_t j) const {
    if (i >= f_plus_.size() || j >= f_plus_.size()) throw InvalidArgument("resolvent kernel: node out of range");
    const std::size_t hi = std::max(i, j);
    const std::size_t lo = std::min(i, j);
    return f_plus_[hi] * f_minus_[lo] / W_;
}

ComplexArray Resolvent::apply(std::span<const cplx> psi) const {
    check_size(psi, grid_);
    ComplexArray out(psi.size(), cplx(0.0, 0.0));
    std::size_t lo = 0;
    std::size_t hi = 0;
    if (!support_range(psi, lo, hi)) return out;
    ComplexArray scratch;
    apply_jost_resolvent(f_plus_, f_minus_, W_, psi, lo, hi, grid_.spacing(), out, scratch);
    return out;
}

cplx Resolvent::quadratic_form(std::span<const cplx> psi, std::span<const cplx> phi) const {
    check_size(phi, grid_);
    return inner_product(apply(psi), phi, grid_.spacing());
}

cplx resolvent_kernel(const SampledPotential& V, double lambda, std::size_t i, std::size_t j,
                      const JostOptions& options) {
    return Resolvent(V, lambda, options).kernel(i, j);
}

ComplexArray apply_free_resolvent(const SpatialGrid& grid, double lambda, std::span<const cplx> psi) {
    if (lambda == 0.0 || !std::isfinite(lambda)) throw InvalidArgument("free resolvent needs finite lambda != 0");
    check_size(psi, grid);
    ComplexArray out(psi.size(), cplx(0.0, 0.0));
    std::size_t lo = 0;
    std::size_t hi = 0;
    if (!support_range(psi, lo, hi)) return out;
    ComplexArray E;
    plane_wave(grid, lambda, E);
    ComplexArray Ec(E.size());
    for (std::size_t i = 0; i < E.size(); ++i) Ec[i] = std::conj(E[i]);
    ComplexArray scratch;
    apply_jost_resolvent(E, Ec, -2.0 * kI * lambda, psi, lo, hi, grid.spacing(), out, scratch);
    return out;
}

BornResult born_resolvent(const SampledPotential& V, double lambda, std::span<const cplx> psi,
                          std::span<const cplx> phi, int K, bool allow_divergent) {
    if (K < 0) throw InvalidArgument("Born order K must be >= 0");
    const SpatialGrid& grid = V.grid();
    check_size(psi, grid);
    check_size(phi, grid);
    if (!allow_divergent && 2.0 * std::abs(lambda) < V.norm(0)) {
        throw HypothesisError("Born series convergence needs 2|lambda| >= ||V||_1 (2|lambda| = " +
                              std::to_string(2.0 * std::abs(lambda)) + ", ||V||_1 = " + std::to_string(V.norm(0)) +
                              ")");
    }
    const double h = grid.spacing();
    const auto& v = V.values();
    BornResult r;
    ComplexArray g = apply_free_resolvent(grid, lambda, psi);
    r.terms.push_back(inner_product(g, phi, h));
    ComplexArray vg(g.size());
    for (int k = 1; k <= K; ++k) {
        for (std::size_t i = 0; i < g.size(); ++i) vg[i] = -v[i] * g[i];
        g = apply_free_resolvent(grid, lambda, vg);
        r.terms.push_back(inner_product(g, phi, h));
    }
    r.value = cplx(0.0, 0.0);
    for (const cplx& term : r.terms) r.value += term;
    r.last_term = std::abs(r.terms.back());
    return r;
}

namespace {

// Spectral density rho(x, lambda) = (2 lambda / pi) Im[R(lambda) psi] for real psi,
// extended by linearity to complex psi, evaluated with the Magnus Jost mesh.
class SpectralDensity {
public:
    SpectralDensity(const SampledPotential& V, std::span<const cplx> psi, double max_step)
        : grid_(V.grid()), mesh_(V, max_step) {
        const std::size_t n = grid_.size();
        psi_r_.resize(n);
        psi_i_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            psi_r_[i] = psi[i].real();
            psi_i_[i] = psi[i].imag();
            has_imag_ = has_imag_ || psi[i].imag() != 0.0;
        }
        support_range(psi, lo_, hi_);
    }

    void evaluate(double lambda, ComplexArray& rho) {
        const std::size_t n = grid_.size();
        fill_jost(lambda);
        rho.assign(n, cplx(0.0, 0.0));
        const double c = 2.0 * lambda / kPi;
        apply_jost_resolvent(fp_, fm_, W_, psi_r_, lo_, hi_, grid_.spacing(), rpsi_, scratch_);
        for (std::size_t i = 0; i < n; ++i) rho[i] = c * rpsi_[i].imag();
        if (has_imag_) {
            apply_jost_resolvent(fp_, fm_, W_, psi_i_, lo_, hi_, grid_.spacing(), rpsi_, scratch_);
            for (std::size_t i = 0; i < n; ++i) rho[i] += kI * (c * rpsi_[i].imag());
        }
    }

private:
    void fill_jost(double lambda) {
        const std::size_t n = grid_.size();
        plane_wave(grid_, lambda, E_);
        fp_.resize(n);
        fm_.resize(n);
        if (mesh_.free()) {
            for (std::size_t i = 0; i < n; ++i) {
                fp_[i] = E_[i];
                fm_[i] = std::conj(E_[i]);
            }
            W_ = -2.0 * kI * lambda;
            return;
        }
        mesh_.transfer_matrices(lambda, M_);
        const double lo = mesh_.lo();
        const double hi = mesh_.hi();
        const cplx ilam = kI * lambda;

        const cplx p0 = std::exp(ilam * hi);
        const auto [f_lo, df_lo] = mesh_.sweep_backward(M_, p0, ilam * p0, fp_.data(), nullptr);
        const cplx m0 = std::exp(-ilam * lo);
        const auto [g_hi, dg_hi] = mesh_.sweep_forward(M_, m0, -ilam * m0, fm_.data(), nullptr);
        W_ = f_lo * (-ilam * m0) - df_lo * m0;

        // f = A e^{i lambda x} + B e^{-i lambda x} outside the support
        const cplx e_lo = std::exp(ilam * lo);
        const cplx e_hi = std::exp(ilam * hi);
        const cplx Ap = (ilam * f_lo + df_lo) / (2.0 * ilam) / e_lo;
        const cplx Bp = (ilam * f_lo - df_lo) / (2.0 * ilam) * e_lo;
        const cplx Am = (ilam * g_hi + dg_hi) / (2.0 * ilam) / e_hi;
        const cplx Bm = (ilam * g_hi - dg_hi) / (2.0 * ilam) * e_hi;

        const bool covered = mesh_.covers_nodes();
        for (std::size_t i = 0; i < n; ++i) {
            if (covered && i >= mesh_.first_node() && i <= mesh_.last_node()) continue;
            const double x = grid_.x(i);
            if (x < lo) {
                fp_[i] = Ap * E_[i] + Bp * std::conj(E_[i]);
                fm_[i] = std::conj(E_[i]);
            } else {
                fp_[i] = E_[i];
                fm_[i] = Am * E_[i] + Bm * std::conj(E_[i]);
            }
        }
    }

    SpatialGrid grid_;
    detail::JostMesh mesh_;
    ComplexArray psi_r_;  // real part of psi, as complex samples
    ComplexArray psi_i_;
    bool has_imag_ = false;
    std::size_t lo_ = 0;
    std::size_t hi_ = 0;
    std::vector<detail::Mat2> M_;
    ComplexArray E_;
    ComplexArray fp_;
    ComplexArray fm_;
    ComplexArray rpsi_;
    ComplexArray scratch_;
    cplx W_;
};

struct Panel {
    double a;
    double b;
};

// Panels on [0, Lambda] such that the phase 2 T lambda + c of the integrand,
// evaluated at the right end, advances at most `budget` per node.
std::vector<Panel> phase_panels(double T, double c, double Lambda, const EvolveOptions& o) {
    const double K = o.phase_per_node * o.gauss_points;
    std::vector<Panel> panels;
    double a = 0.0;
    while (a < Lambda) {
        // Largest H with H * (2 T (a + H) + c) <= K.
        const double p = 2.0 * T * a + c;
        const double H0 = (-p + std::sqrt(p * p + 8.0 * T * K)) / (4.0 * T);
        const double H = std::min({H0, o.max_panel_width, Lambda - a});
        const double b = Lambda - (a + H) < 1e-12 * Lambda ? Lambda : a + H;
        panels.push_back({a, b});
        a = b;
        if (panels.size() * static_cast<std::size_t>(o.gauss_points) > o.max_nodes) break;
    }
    return panels;
}

}  // namespace

std::vector<EvolutionResult> evolve_ac(const SampledPotential& V, std::span<const cplx> psi,
                                       std::span<const double> times, const CutoffSpec& cutoff,
                                       const EvolveOptions& options) {
    const SpatialGrid& grid = V.grid();
    check_size(psi, grid);
    if (times.empty()) throw InvalidArgument("evolve_ac: no times given");
    for (double t : times) check_time(t);
    if (options.gauss_points < 2 || !(options.phase_per_node > 0.0) || !(options.max_panel_width > 0.0)) {
        throw InvalidArgument("evolve_ac: invalid quadrature options");
    }
    double Lambda = options.lambda_max.value_or(cutoff.default_lambda_max());
    if (!(Lambda > 0.0) || !std::isfinite(Lambda)) throw InvalidArgument("lambda_max must be > 0");
    if (options.window == SpectralWindow::low) Lambda = std::min(Lambda, 2.0 * cutoff.lambda0());

    const std::size_t n = grid.size();
    std::vector<EvolutionResult> out;
    out.reserve(times.size());
    for (double t : times) out.push_back({t, grid, ComplexArray(n, cplx(0.0, 0.0)), EvolutionMethod::spectral, {}});

    std::size_t lo = 0;
    std::size_t hi = 0;
    if (!support_range(psi, lo, hi)) return out;

    double T = 0.0;
    for (double t : times) T = std::max(T, std::abs(t));
    const double X = std::max(std::abs(grid.x_min()), std::abs(grid.x_max()));
    const double Y = std::max(std::abs(grid.x(lo)), std::abs(grid.x(hi)));
    const std::vector<Panel> panels = phase_panels(T, X + Y, Lambda, options);
    const std::size_t needed = panels.size() * static_cast<std::size_t>(options.gauss_points);
    if (needed > options.max_nodes || panels.empty() || panels.back().b < Lambda) {
        throw NumericalError("spectral quadrature needs more than " + std::to_string(options.max_nodes) +
                             " lambda nodes to resolve |t| = " + std::to_string(T) + " up to lambda_max = " +
                             std::to_string(Lambda));
    }

    // The Magnus mesh must resolve the largest lambda used.
    {
        const JostSolution probe = JostSolver(V, options.jost).solve(Lambda, Direction::plus);
        if (!probe.converged) {
            throw NumericalError("Jost solution did not converge at lambda_max = " + std::to_string(Lambda));
        }
    }

    const double l1 = l1_norm(psi, grid.spacing());
    const GaussRule rule = gauss_legendre(options.gauss_points);
    SpectralDensity density(V, psi, options.jost.max_step);
    ComplexArray rho;

    std::size_t panels_used = 0;
    double last_lambda = 0.0;
    double last_sup = 0.0;
    for (const Panel& p : panels) {
        const double mid = 0.5 * (p.a + p.b);
        const double half = 0.5 * (p.b - p.a);
        double panel_sup = 0.0;
        for (int q = 0; q < options.gauss_points; ++q) {
            const double lambda = mid + half * rule.nodes[static_cast<std::size_t>(q)];
            double w = half * rule.weights[static_cast<std::size_t>(q)];
            if (options.window == SpectralWindow::low) w *= cutoff.profile(lambda);
            if (options.window == SpectralWindow::high) w *= 1.0 - cutoff.profile(lambda);
            density.evaluate(lambda, rho);
            double sup = 0.0;
            for (const cplx& r : rho) sup = std::max(sup, std::abs(r));
            panel_sup = std::max(panel_sup, sup);
            last_lambda = lambda;
            last_sup = sup;
            if (w == 0.0) continue;
            for (std::size_t k = 0; k < out.size(); ++k) {
                const double t = out[k].t;
                const cplx phase = w * std::exp(kI * (t * lambda * lambda));
                ComplexArray& u = out[k].u;
                for (std::size_t i = 0; i < n; ++i) u[i] += phase * rho[i];
            }
        }
        ++panels_used;
        if (p.b >= 1.0 && panel_sup < options.tail_tolerance * l1) break;
    }

    for (auto& r : out) {
        r.diagnostics.panels = panels_used;
        r.diagnostics.nodes = panels_used * static_cast<std::size_t>(options.gauss_points);
        r.diagnostics.lambda_max = panels_used == panels.size() ? Lambda : panels[panels_used - 1].b;
        r.diagnostics.est_error = last_sup / (2.0 * std::abs(r.t) * std::max(last_lambda, 1.0));
    }
    return out;
}

EvolutionResult evolve_ac(const SampledPotential& V, std::span<const cplx> psi, double t, const CutoffSpec& cutoff,
                          const EvolveOptions& options) {
    const double times[1] = {t};
    return std::move(evolve_ac(V, psi, times, cutoff, options).front());
}

ComplexArray resonance_leading_term(const ResonanceReport& report, std::span<const cplx> psi, double t) {
    if (!std::isfinite(t) || t == 0.0) throw InvalidArgument("resonance_leading_term needs t != 0");
    const cplx c = resonance_overlap(psi, report) / std::sqrt(cplx(0.0, -4.0 * kPi * t));
    ComplexArray out(report.f0.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * report.f0[i];
    return out;
}

}  // namespace jostlab
