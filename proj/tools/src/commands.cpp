#include "commands.hpp"

#include "run_config.hpp"

#include "jostlab/analysis.hpp"
#include "jostlab/error.hpp"
#include "jostlab/io.hpp"
#include "jostlab/oracle.hpp"
#include "jostlab/potential.hpp"
#include "jostlab/propagator.hpp"
#include "jostlab/quadrature.hpp"
#include "jostlab/scattering.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace jostlab::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::string input;
    double t = 0.0;
    int theorem = 0;
    bool oracle = false;
    bool scan = false;
    double lambda_max = 0.0;
    bool t_given = false;
    bool out_given = false;
    bool lambda_max_given = false;
};

ojson json_number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidArgument("cannot write '" + path.string() + "'");
    os << text;
}

template <class Writer>
void write_csv(const fs::path& path, Writer&& writer) {
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    writer(ss);
    write_text(path, ss.str());
}

RunConfig resolve_config(const Flags& f) {
    RunConfig c = load_run_config(f.config);
    if (f.out_given) c.output_dir = f.out;
    if (f.lambda_max_given) c.lambda_max = f.lambda_max;
    return c;
}

fs::path prepare_output(const RunConfig& c) {
    const fs::path dir(c.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InvalidArgument("cannot create output directory '" + dir.string() + "': " + ec.message());
    write_text(dir / "config.json", run_config_to_json(c));
    return dir;
}

JostOptions jost_options(const RunConfig& c) {
    JostOptions o;
    o.tol_ode = c.tolerances.tol_ode;
    return o;
}

ResonanceOptions resonance_options(const RunConfig& c) {
    ResonanceOptions o;
    o.jost = jost_options(c);
    o.tol_res_scale = c.tolerances.tol_res;
    return o;
}

EvolveOptions evolve_options(const RunConfig& c) {
    EvolveOptions o;
    o.jost = jost_options(c);
    o.lambda_max = c.lambda_max;
    return o;
}

int cmd_scatter(const Flags& f, std::ostream& out) {
    const RunConfig c = resolve_config(f);
    const fs::path dir = prepare_output(c);
    const SampledPotential V = build_potential(c.potential, c.grid);
    ScatteringOptions opts;
    opts.jost = jost_options(c);
    opts.tol_scatter = c.tolerances.tol_scatter;
    const ScatteringTable table = scattering_table(V, c.lambda_grid, opts);
    write_csv(dir / "scattering.csv", [&](std::ostream& os) { write_scattering_csv(os, table); });

    out << "rows " << table.rows.size() << '\n'
        << "failed " << table.failed_count() << '\n'
        << "flagged " << table.flagged_count() << '\n'
        << "max_unitarity_defect " << format_double(table.max_unitarity_defect()) << '\n'
        << "tol_scatter " << format_double(table.tol_scatter) << '\n';
    for (const auto& r : table.rows) {
        if (r.failed) out << "failed lambda=" << format_double(r.lambda) << ": " << r.error << '\n';
    }
    return table.failed_count() > 0 ? kExitNumerical : kExitOk;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

int cmd_depth_scan(const RunConfig& c, const fs::path& dir, std::ostream& out) {
    const double halfwidth = c.depth_scan.halfwidth;
    const PotentialFamily family = [halfwidth](double depth) { return PotentialSpec::square_well(depth, halfwidth); };
    const ResonanceOptions opts = resonance_options(c);
    const auto depths = linspace(c.depth_scan.min, c.depth_scan.max, c.depth_scan.count);
    const auto rows = depth_scan(family, c.grid, depths, opts);
    write_csv(dir / "depth_scan.csv", [&](std::ostream& os) { write_depth_scan_csv(os, rows); });

    const SpatialGrid fine = c.grid.refined();
    ojson brackets = ojson::array();
    bool stable = true;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        if ((rows[i].W0 > 0.0) == (rows[i + 1].W0 > 0.0)) continue;
        const double d = bisect_resonance(family, c.grid, rows[i].depth, rows[i + 1].depth, opts);
        const double d_fine = bisect_resonance(family, fine, rows[i].depth, rows[i + 1].depth, opts);
        const ZeroEnergyProbe at = probe_zero_energy(build_potential(family(d), c.grid), opts);
        const ZeroEnergyProbe at_fine = probe_zero_energy(build_potential(family(d), fine), opts);
        const bool neighbours_generic = rows[i].classification == ZeroEnergyClass::generic &&
                                        rows[i + 1].classification == ZeroEnergyClass::generic;
        const bool same = at.classification == at_fine.classification;
        stable = stable && same;
        out << "bracket [" << format_double(rows[i].depth) << ", " << format_double(rows[i + 1].depth)
            << "] resonant_depth " << format_double(d) << " refined_grid " << format_double(d_fine) << " class "
            << to_string(at.classification) << " refined_class " << to_string(at_fine.classification) << '\n';
        brackets.push_back({{"depth_lo", rows[i].depth},
                            {"depth_hi", rows[i + 1].depth},
                            {"resonant_depth", d},
                            {"resonant_depth_refined_grid", d_fine},
                            {"abs_W0", std::abs(at.W0)},
                            {"tol_res", at.tol_res},
                            {"classification", to_string(at.classification)},
                            {"classification_refined_grid", to_string(at_fine.classification)},
                            {"neighbours_generic", neighbours_generic}});
    }
    ojson j;
    j["family"] = "square_well";
    j["halfwidth"] = halfwidth;
    j["brackets"] = brackets;
    j["stable_under_refinement"] = stable;
    write_text(dir / "depth_scan.json", j.dump(2) + "\n");
    out << "brackets " << brackets.size() << '\n' << "stable_under_refinement " << (stable ? "true" : "false") << '\n';
    return kExitOk;
}

int cmd_resonance(const Flags& f, std::ostream& out) {
    const RunConfig c = resolve_config(f);
    const fs::path dir = prepare_output(c);
    if (f.scan) return cmd_depth_scan(c, dir, out);

    const SampledPotential V = build_potential(c.potential, c.grid);
    const ResonanceOptions opts = resonance_options(c);
    try {
        const ResonanceReport report = detect_resonance(V, opts);
        const std::string json = resonance_json(report);
        write_text(dir / "resonance.json", json);
        out << json;
        return kExitOk;
    } catch (const NearResonanceError&) {
        const ZeroEnergyProbe p = probe_zero_energy(V, opts);
        ResonanceReport report(c.grid);
        report.W0 = cplx(p.W0, 0.0);
        report.tol_res = p.tol_res;
        report.classification = p.classification;
        report.norm_check = std::nan("");
        report.c_plus = std::nan("");
        report.c_minus = std::nan("");
        const std::string json = resonance_json(report);
        write_text(dir / "resonance.json", json);
        out << json;
        throw;
    }
}

/// Largest |a - b| over the nodes the two grids share.
double shared_node_sup(const EvolutionResult& a, const EvolutionResult& b) {
    const double snap = 1e-9 * std::min(a.grid.spacing(), b.grid.spacing());
    double sup = 0.0;
    std::size_t shared = 0;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        const double x = a.grid.x(i);
        if (x < b.grid.x_min() - snap || x > b.grid.x_max() + snap) continue;
        const std::size_t j = b.grid.nearest_index(x);
        if (std::abs(b.grid.x(j) - x) > snap) continue;
        sup = std::max(sup, std::abs(a.u[i] - b.u[j]));
        ++shared;
    }
    if (shared == 0) throw InvalidArgument("the oracle grid shares no nodes with the run grid");
    return sup;
}

int cmd_evolve(const Flags& f, std::ostream& out) {
    RunConfig c = resolve_config(f);
    if (f.t_given) c.t = f.t;
    if (!c.t) throw InvalidArgument("evolve needs a time: pass --t or set 't' in the config");
    if (!std::isfinite(*c.t) || std::abs(*c.t) < kMinimumTime) {
        throw InvalidArgument("|t| must be at least " + format_double(kMinimumTime) + ", got " + format_double(*c.t));
    }
    const double t = *c.t;
    const fs::path dir = prepare_output(c);
    const SampledPotential V = build_potential(c.potential, c.grid);
    const ComplexArray psi = c.initial_state.sample(c.grid);
    const CutoffSpec cutoff = CutoffSpec::for_potential(V, c.lambda0);
    const EvolutionResult r = evolve_ac(V, psi, t, cutoff, evolve_options(c));
    write_csv(dir / "evolution.csv", [&](std::ostream& os) { write_evolution_csv(os, r); });
    write_text(dir / "evolution_diagnostics.json", evolution_diagnostics_json(r));
    out << "t " << format_double(t) << '\n'
        << "panels " << r.diagnostics.panels << '\n'
        << "nodes " << r.diagnostics.nodes << '\n'
        << "lambda_max " << format_double(r.diagnostics.lambda_max) << '\n';

    if (f.oracle) {
        // Default: same spacing, padded by half the run width on each side.
        const std::size_t pad = (c.grid.size() - 1) / 2;
        const double h = c.grid.spacing();
        const SpatialGrid og = c.oracle_grid.value_or(
            SpatialGrid(c.grid.x(0) - static_cast<double>(pad) * h, c.grid.x(c.grid.size() - 1) + static_cast<double>(pad) * h,
                        c.grid.size() + 2 * pad));
        const SpectralDecomposition D = decompose(discretize(c.potential, og));
        const ComplexArray psi_o = c.initial_state.sample(og);
        const EvolutionResult exact = evolve_exact(D, psi_o, t, true);
        const double sup = shared_node_sup(r, exact);
        const double l1 = l1_norm(psi, c.grid.spacing());
        ojson j;
        j["t"] = t;
        j["oracle_grid"] = {{"x_min", og.x_min()}, {"x_max", og.x_max()}, {"n_points", og.size()}};
        j["bound_states_removed"] = bound_states(D).size();
        j["sup_difference"] = json_number(sup);
        j["psi_l1_norm"] = json_number(l1);
        j["relative_sup_difference"] = json_number(sup / l1);
        write_text(dir / "oracle.json", j.dump(2) + "\n");
        out << "oracle_sup_difference " << format_double(sup) << '\n';
    }
    return kExitOk;
}

int cmd_verify(const Flags& f, std::ostream& out) {
    const RunConfig c = resolve_config(f);
    const fs::path dir = prepare_output(c);
    const SampledPotential V = build_potential(c.potential, c.grid);
    const ComplexArray psi = c.initial_state.sample(c.grid);
    const CutoffSpec cutoff = CutoffSpec::for_potential(V, c.lambda0);
    VerifyOptions opts;
    opts.t_samples = c.t_samples;
    opts.slope_tol = c.tolerances.slope_tol;
    opts.control_tol = c.tolerances.control_tol;
    opts.evolve = evolve_options(c);
    opts.resonance = resonance_options(c);
    const Verdict v = f.theorem == 1 ? verify_transport(V, psi, cutoff, opts) : verify_resonance(V, psi, cutoff, opts);
    write_csv(dir / "decay.csv", [&](std::ostream& os) { write_decay_csv(os, v.rows); });
    write_text(dir / "verdict.json", verdict_json(v));
    out << "theorem " << v.theorem << '\n'
        << "slope " << format_double(v.fit.slope) << " target " << format_double(v.target) << " tol "
        << format_double(v.tol) << ' ' << (v.pass ? "PASS" : "FAIL") << '\n'
        << "control_slope " << format_double(v.control.slope) << " target " << format_double(v.control_target)
        << " tol " << format_double(v.control_tol) << ' ' << (v.control_pass ? "PASS" : "FAIL") << '\n';
    for (const auto& w : v.warnings) out << "warning: " << w << '\n';
    return v.pass && v.control_pass ? kExitOk : kExitNumerical;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& s, std::size_t line_no) {
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    double v = 0.0;
    if (!(is >> v) || !(is >> std::ws).eof()) {
        throw InvalidArgument("decay CSV line " + std::to_string(line_no) + ": '" + s + "' is not a number");
    }
    return v;
}

int cmd_decay_fit(const Flags& f, std::ostream& out) {
    std::ifstream in(f.input, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read '" + f.input + "'");
    std::string line;
    if (!std::getline(in, line) || line != "t,norm,weight_sigma,subtracted") {
        throw InvalidArgument("decay CSV must start with the header t,norm,weight_sigma,subtracted");
    }
    struct Series {
        double sigma;
        bool subtracted;
        RealArray t;
        RealArray norm;
    };
    std::vector<Series> series;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 4) throw InvalidArgument("decay CSV line " + std::to_string(line_no) + ": need 4 fields");
        if (cells[3] != "true" && cells[3] != "false") {
            throw InvalidArgument("decay CSV line " + std::to_string(line_no) + ": subtracted must be true or false");
        }
        const double sigma = parse_cell(cells[2], line_no);
        const bool sub = cells[3] == "true";
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const Series& s) { return s.sigma == sigma && s.subtracted == sub; });
        if (it == series.end()) {
            series.push_back({sigma, sub, {}, {}});
            it = series.end() - 1;
        }
        it->t.push_back(parse_cell(cells[0], line_no));
        it->norm.push_back(parse_cell(cells[1], line_no));
    }
    if (series.empty()) throw InvalidArgument("decay CSV has no data rows");

    ojson fits = ojson::array();
    for (const auto& s : series) {
        const DecayFit fit = fit_decay(s.t, s.norm);
        out << "weight_sigma " << format_double(s.sigma) << " subtracted " << (s.subtracted ? "true" : "false")
            << " samples " << s.t.size() << " slope " << format_double(fit.slope) << " stderr "
            << format_double(fit.slope_stderr) << '\n';
        fits.push_back({{"weight_sigma", s.sigma},
                        {"subtracted", s.subtracted},
                        {"samples", s.t.size()},
                        {"slope", json_number(fit.slope)},
                        {"stderr", json_number(fit.slope_stderr)},
                        {"intercept", json_number(fit.intercept)}});
    }
    if (f.out_given) {
        const fs::path dir(f.out);
        fs::create_directories(dir);
        write_text(dir / "decay_fit.json", fits.dump(2) + "\n");
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Jost-function scattering, spectral propagation and dispersive decay checks", "jostlab"};
    app.require_subcommand(1);
    Flags f;

    auto add_config = [&](CLI::App* sc) {
        sc->add_option("--config", f.config, "run configuration (JSON)")->required();
        sc->add_option("--out", f.out, "output directory (overrides output_dir)");
    };
    auto add_lambda_max = [&](CLI::App* sc) {
        sc->add_option("--lambda-max", f.lambda_max, "spectral truncation")->check(CLI::PositiveNumber);
    };

    CLI::App* scatter = app.add_subcommand("scatter", "scattering table over the lambda grid");
    add_config(scatter);

    CLI::App* resonance = app.add_subcommand("resonance", "zero-energy classification");
    add_config(resonance);
    resonance->add_flag("--scan", f.scan, "square-well depth scan with bisection");

    CLI::App* evolve = app.add_subcommand("evolve", "spectral evolution at one time");
    add_config(evolve);
    evolve->add_option("--t", f.t, "time");
    evolve->add_flag("--oracle", f.oracle, "compare with the finite-difference eigenbasis");
    add_lambda_max(evolve);

    CLI::App* verify = app.add_subcommand("verify", "decay-rate verification");
    add_config(verify);
    verify->add_option("--theorem", f.theorem, "1: non-resonant, 2: resonant")
        ->required()
        ->check(CLI::IsMember({1, 2}));
    add_lambda_max(verify);

    CLI::App* decay = app.add_subcommand("decay-fit", "refit the slopes in a decay CSV");
    decay->add_option("--input", f.input, "decay CSV")->required();
    decay->add_option("--out", f.out, "write decay_fit.json here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* active = app.get_subcommands().front();
    auto given = [active](const char* name) {
        const CLI::Option* o = active->get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
    };
    f.out_given = given("--out");
    f.t_given = given("--t");
    f.lambda_max_given = given("--lambda-max");

    try {
        if (active == scatter) return cmd_scatter(f, out);
        if (active == resonance) return cmd_resonance(f, out);
        if (active == evolve) return cmd_evolve(f, out);
        if (active == verify) return cmd_verify(f, out);
        return cmd_decay_fit(f, out);
    } catch (const NearResonanceError& e) {
        err << "near-resonant: " << e.what() << '\n';
        return kExitHypothesis;
    } catch (const HypothesisError& e) {
        err << "hypothesis: " << e.what() << '\n';
        return kExitHypothesis;
    } catch (const NumericalError& e) {
        err << "numerical: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace jostlab::cli
