#include "jostlab/io.hpp"

#include "jostlab/error.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <variant>

namespace jostlab {

using ojson = nlohmann::ordered_json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

double number(const ojson& params, const char* key) {
    if (!params.contains(key)) throw InvalidArgument(std::string("potential params: missing '") + key + "'");
    const ojson& v = params.at(key);
    if (!v.is_number()) throw InvalidArgument(std::string("potential params: '") + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> numbers(const ojson& params, const char* key) {
    if (!params.contains(key) || !params.at(key).is_array()) {
        throw InvalidArgument(std::string("potential params: '") + key + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& v : params.at(key)) {
        if (!v.is_number()) throw InvalidArgument(std::string("potential params: '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

PotentialSpec potential_from(const ojson& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw InvalidArgument("potential must be an object with a string 'kind'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    const ojson params = j.contains("params") ? j.at("params") : ojson::object();
    if (!params.is_object()) throw InvalidArgument("potential 'params' must be an object");
    if (kind == "zero") return PotentialSpec::zero();
    if (kind == "square_well") return PotentialSpec::square_well(number(params, "depth"), number(params, "halfwidth"));
    if (kind == "gaussian_well") return PotentialSpec::gaussian_well(number(params, "depth"), number(params, "width"));
    if (kind == "poschl_teller") {
        const double n = number(params, "n");
        if (n != std::floor(n) || n < 1 || n > 1000) {
            throw InvalidArgument("poschl_teller 'n' must be a positive integer");
        }
        return PotentialSpec::poschl_teller(static_cast<int>(n));
    }
    if (kind == "custom_table") return PotentialSpec::custom_table(numbers(params, "x"), numbers(params, "v"));
    throw InvalidArgument("unknown potential kind '" + kind + "'");
}

ojson potential_json(const PotentialSpec& spec) {
    ojson j;
    j["kind"] = spec.kind_name();
    ojson params = ojson::object();
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, SquareWell>) {
                params["depth"] = k.depth;
                params["halfwidth"] = k.halfwidth;
            } else if constexpr (std::is_same_v<K, PoschlTeller>) {
                params["n"] = k.n;
            } else if constexpr (std::is_same_v<K, GaussianWell>) {
                params["depth"] = k.depth;
                params["width"] = k.width;
            } else if constexpr (std::is_same_v<K, CustomTable>) {
                params["x"] = k.x;
                params["v"] = k.v;
            }
        },
        spec.kind());
    j["params"] = params;
    return j;
}

// NaN and infinities have no JSON literal.
ojson json_number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace

PotentialSpec potential_from_json(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        throw InvalidArgument(std::string("potential JSON: ") + e.what());
    }
    return potential_from(j);
}

std::string potential_to_json(const PotentialSpec& spec) { return potential_json(spec).dump(); }

void write_scattering_csv(std::ostream& os, const ScatteringTable& table) {
    os << "lambda,re_W,im_W,re_Wt,im_Wt,re_T,im_T,re_R,im_R,unitarity_defect\n";
    for (const auto& r : table.rows) {
        os << format_double(r.lambda) << ',' << format_double(r.W.real()) << ',' << format_double(r.W.imag()) << ','
           << format_double(r.W_tilde.real()) << ',' << format_double(r.W_tilde.imag()) << ','
           << format_double(r.T.real()) << ',' << format_double(r.T.imag()) << ',' << format_double(r.R.real())
           << ',' << format_double(r.R.imag()) << ',' << format_double(r.unitarity_defect) << '\n';
    }
}

void write_evolution_csv(std::ostream& os, const EvolutionResult& r) {
    os << "x,re_u,im_u\n";
    for (std::size_t i = 0; i < r.u.size(); ++i) {
        os << format_double(r.grid.x(i)) << ',' << format_double(r.u[i].real()) << ','
           << format_double(r.u[i].imag()) << '\n';
    }
}

std::string evolution_diagnostics_json(const EvolutionResult& r) {
    ojson j;
    j["t"] = r.t;
    j["method"] = to_string(r.method);
    j["panels"] = r.diagnostics.panels;
    j["est_error"] = json_number(r.diagnostics.est_error);
    j["nodes"] = r.diagnostics.nodes;
    j["lambda_max"] = r.diagnostics.lambda_max;
    return j.dump(2) + "\n";
}

void write_decay_csv(std::ostream& os, const std::vector<DecayRow>& rows) {
    os << "t,norm,weight_sigma,subtracted\n";
    for (const auto& r : rows) {
        os << format_double(r.t) << ',' << format_double(r.norm) << ',' << format_double(r.weight_sigma) << ','
           << (r.subtracted ? "true" : "false") << '\n';
    }
}

std::string verdict_json(const Verdict& v) {
    ojson j;
    j["theorem"] = v.theorem;
    j["slope"] = json_number(v.fit.slope);
    j["stderr"] = json_number(v.fit.slope_stderr);
    j["target"] = v.target;
    j["tol"] = v.tol;
    j["pass"] = v.pass;
    j["control_slope"] = json_number(v.control.slope);
    j["control_stderr"] = json_number(v.control.slope_stderr);
    j["control_target"] = v.control_target;
    j["control_tol"] = v.control_tol;
    j["control_pass"] = v.control_pass;
    j["warnings"] = v.warnings;
    return j.dump(2) + "\n";
}

std::string resonance_json(const ResonanceReport& r) {
    ojson j;
    j["classification"] = to_string(r.classification);
    j["W0"] = json_number(r.W0.real());
    j["abs_W0"] = json_number(std::abs(r.W0));
    j["tol_res"] = r.tol_res;
    j["norm_check"] = json_number(r.norm_check);
    j["alpha0"] = r.alpha0 ? json_number(*r.alpha0) : ojson(nullptr);
    j["beta0"] = r.beta0 ? json_number(*r.beta0) : ojson(nullptr);
    j["c_plus"] = json_number(r.c_plus);
    j["c_minus"] = json_number(r.c_minus);
    return j.dump(2) + "\n";
}

void write_depth_scan_csv(std::ostream& os, const std::vector<DepthScanRow>& rows) {
    os << "depth,W0,abs_W0,tol_res,classification\n";
    for (const auto& r : rows) {
        os << format_double(r.depth) << ',' << format_double(r.W0) << ',' << format_double(std::abs(r.W0)) << ','
           << format_double(r.tol_res) << ',' << to_string(r.classification) << '\n';
    }
}

}  // namespace jostlab
