#include "jostlab/error.hpp"
#include "jostlab/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#if JOSTLAB_HAVE_CLI
#include "commands.hpp"
#include "run_config.hpp"
#endif

using namespace jostlab;
namespace fs = std::filesystem;

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(-2.5), "-2.5");
    EXPECT_EQ(format_double(3.0), "3");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-300, 300);
    for (int k = 0; k < 200; ++k) {
        const double v = std::ldexp(mant(rng), ex(rng));
        EXPECT_EQ(std::stod(format_double(v)), v) << format_double(v);
    }
}

TEST(PotentialJson, RoundTripAllKinds) {
    const std::vector<PotentialSpec> specs{
        PotentialSpec::zero(), PotentialSpec::square_well(1.5, 0.75), PotentialSpec::poschl_teller(2),
        PotentialSpec::gaussian_well(1.0, 2.0),
        PotentialSpec::custom_table({-50.0, 0.0, 50.0}, {0.0, -1.0, 0.0})};
    for (const auto& s : specs) {
        const std::string j = potential_to_json(s);
        const PotentialSpec back = potential_from_json(j);
        EXPECT_EQ(potential_to_json(back), j);
        for (double x : {-3.0, -0.5, 0.0, 0.3, 2.0}) EXPECT_EQ(back(x), s(x)) << j;
    }
}

TEST(PotentialJson, Rejections) {
    EXPECT_THROW(potential_from_json(R"({"kind": "cubic"})"), InvalidArgument);
    EXPECT_THROW(potential_from_json(R"({"kind": "square_well", "params": {"depth": 1}})"), InvalidArgument);
    EXPECT_THROW(potential_from_json("{not json"), InvalidArgument);
    EXPECT_THROW(potential_from_json(R"({"kind": "poschl_teller", "params": {"n": 0}})"), InvalidArgument);
}

TEST(Csv, Headers) {
    std::ostringstream a;
    write_scattering_csv(a, ScatteringTable{});
    EXPECT_EQ(a.str(), "lambda,re_W,im_W,re_Wt,im_Wt,re_T,im_T,re_R,im_R,unitarity_defect\n");
    std::ostringstream b;
    write_decay_csv(b, {DecayRow{10.0, 0.5, -1.0, false}});
    EXPECT_EQ(b.str(), "t,norm,weight_sigma,subtracted\n10,0.5,-1,false\n");
    std::ostringstream c;
    write_depth_scan_csv(c, {});
    EXPECT_EQ(c.str().substr(0, 5), "depth");
}

#if JOSTLAB_HAVE_CLI

using cli::parse_run_config;
using cli::RunConfig;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "jostlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("jostlab_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

    std::string write(const std::string& name, const std::string& text) const {
        const fs::path p = path_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Value following "key " on its own output line.
double field(const std::string& out, const std::string& key) {
    std::istringstream is(out);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind(key + " ", 0) == 0) return std::stod(line.substr(key.size() + 1));
    }
    ADD_FAILURE() << "no '" << key << "' in output:\n" << out;
    return std::nan("");
}

const char* kSquareWell = R"({"kind": "square_well", "params": {"depth": 1.0, "halfwidth": 1.0}})";

std::string config(const std::string& potential, const std::string& extra = "") {
    return std::string("{\"potential\": ") + potential + (extra.empty() ? "" : ", " + extra) + "}";
}

}  // namespace

TEST(RunConfig, Defaults) {
    const RunConfig c = parse_run_config(R"({"potential": {"kind": "zero"}})");
    EXPECT_EQ(c.grid.size(), 4001u);
    EXPECT_DOUBLE_EQ(c.grid.x_min(), -40.0);
    EXPECT_EQ(c.lambda_grid.size(), 60u);
    EXPECT_DOUBLE_EQ(c.lambda_grid.front(), 0.05);
    EXPECT_DOUBLE_EQ(c.lambda_grid.back(), 10.0);
    EXPECT_EQ(c.t_samples.size(), 12u);
    EXPECT_DOUBLE_EQ(c.t_samples.front(), 10.0);
    EXPECT_FALSE(c.t.has_value());
    EXPECT_FALSE(c.lambda0.has_value());
    EXPECT_DOUBLE_EQ(c.tolerances.tol_scatter, 1e-8);
    EXPECT_DOUBLE_EQ(c.tolerances.slope_tol, 0.15);
    EXPECT_EQ(c.initial_state.kind, InitialState::Kind::gaussian);
}

TEST(RunConfig, ExplicitValues) {
    const RunConfig c = parse_run_config(config(
        kSquareWell,
        R"("grid": {"x_min": -10, "x_max": 10, "n_points": 201}, "lambda_grid": {"min": 0.1, "max": 10, "count": 3, "spacing": "log"},
           "t": 4, "t_samples": [1, 2, 3, 4, 5], "cutoff": {"lambda0": 3}, "tolerances": {"tol_ode": 1e-8},
           "initial_state": {"kind": "odd_gaussian", "center": 0.5, "width": 2})"));
    EXPECT_EQ(c.grid.size(), 201u);
    ASSERT_EQ(c.lambda_grid.size(), 3u);
    EXPECT_NEAR(c.lambda_grid[1], 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(*c.t, 4.0);
    EXPECT_EQ(c.t_samples.size(), 5u);
    EXPECT_DOUBLE_EQ(*c.lambda0, 3.0);
    EXPECT_DOUBLE_EQ(c.tolerances.tol_ode, 1e-8);
    EXPECT_DOUBLE_EQ(c.tolerances.tol_res, 1e-6);
    EXPECT_EQ(c.initial_state.kind, InitialState::Kind::odd_gaussian);
    EXPECT_DOUBLE_EQ(c.initial_state.width, 2.0);
}

TEST(RunConfig, Rejections) {
    EXPECT_THROW(parse_run_config("{"), InvalidArgument);
    EXPECT_THROW(parse_run_config("{}"), InvalidArgument);
    EXPECT_THROW(parse_run_config(config(kSquareWell, R"("colour": 1)")), InvalidArgument);
    EXPECT_THROW(parse_run_config(config(kSquareWell, R"("grid": {"x_min": -1, "x_max": 1, "n": 3})")), InvalidArgument);
    EXPECT_THROW(parse_run_config(config(kSquareWell, R"("lambda_grid": [1, -2])")), InvalidArgument);
    EXPECT_THROW(parse_run_config(config(kSquareWell, R"("initial_state": {"kind": "triangle"})")), InvalidArgument);
    EXPECT_THROW(cli::load_run_config("/nonexistent/jostlab.json"), InvalidArgument);
}

TEST(RunConfig, ResolvedJsonRoundTrips) {
    const RunConfig c = parse_run_config(config(kSquareWell, R"("t": 5, "lambda_max": 12)"));
    const std::string j = cli::run_config_to_json(c);
    EXPECT_EQ(cli::run_config_to_json(parse_run_config(j)), j);
}

TEST(RunConfig, ShippedConfigsLoad) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(JOSTLAB_CONFIG_DIR)) {
        if (e.path().extension() != ".json") continue;
        EXPECT_NO_THROW(cli::load_run_config(e.path().string())) << e.path();
        ++n;
    }
    EXPECT_GE(n, 5u);
}

TEST(Cli, HelpAndUsage) {
    EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
    EXPECT_EQ(run({}).code, cli::kExitUsage);
    EXPECT_EQ(run({"scatter"}).code, cli::kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
}

TEST(Cli, ScatterFreeHasNoReflection) {
    TempDir d;
    const std::string cfg = d.write("c.json", config(R"({"kind": "zero"})"));
    const CliRun r = run({"scatter", "--config", cfg, "--out", d.path().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(field(r.out, "rows"), 60.0);
    std::ifstream in(d.path() / "scattering.csv");
    std::string line;
    std::getline(in, line);
    std::size_t n = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
        ASSERT_EQ(cells.size(), 10u);
        EXPECT_EQ(std::stod(cells[7]), 0.0);
        EXPECT_EQ(std::stod(cells[8]), 0.0);
        ++n;
    }
    EXPECT_EQ(n, 60u);
    EXPECT_TRUE(fs::exists(d.path() / "config.json"));
}

TEST(Cli, ScatterSquareWellUnitary) {
    TempDir d;
    const std::string cfg = d.write("c.json", config(kSquareWell));
    const CliRun r = run({"scatter", "--config", cfg, "--out", d.path().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LE(field(r.out, "max_unitarity_defect"), 1e-8);
    EXPECT_EQ(field(r.out, "failed"), 0.0);
}

TEST(Cli, ScatterIsReproducible) {
    TempDir d;
    const std::string cfg = d.write("c.json", config(kSquareWell));
    ASSERT_EQ(run({"scatter", "--config", cfg, "--out", (d.path() / "a").string()}).code, 0);
    ASSERT_EQ(run({"scatter", "--config", cfg, "--out", (d.path() / "b").string()}).code, 0);
    const std::string a = slurp(d.path() / "a" / "scattering.csv");
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, slurp(d.path() / "b" / "scattering.csv"));
}

TEST(Cli, BadConfigIsUsageError) {
    TempDir d;
    const std::string bad = d.write("bad.json", "{\"potential\": ");
    EXPECT_EQ(run({"scatter", "--config", bad, "--out", d.path().string()}).code, cli::kExitUsage);
    EXPECT_EQ(run({"scatter", "--config", (d.path() / "missing.json").string()}).code, cli::kExitUsage);
    const std::string unknown = d.write("u.json", config(kSquareWell, R"("speed": 3)"));
    EXPECT_EQ(run({"scatter", "--config", unknown, "--out", d.path().string()}).code, cli::kExitUsage);
}

TEST(Cli, ResonanceClassification) {
    TempDir d;
    const CliRun free = run({"resonance", "--config", d.write("z.json", config(R"({"kind": "zero"})")), "--out",
                          (d.path() / "z").string()});
    EXPECT_EQ(free.code, 0) << free.err;
    EXPECT_NE(free.out.find("\"resonant\""), std::string::npos) << free.out;
    EXPECT_TRUE(fs::exists(d.path() / "z" / "resonance.json"));

    const CliRun sw = run({"resonance", "--config", d.write("s.json", config(kSquareWell)), "--out",
                        (d.path() / "s").string()});
    EXPECT_EQ(sw.code, 0) << sw.err;
    EXPECT_NE(sw.out.find("\"generic\""), std::string::npos) << sw.out;

    const CliRun near = run({"resonance", "--config",
                          d.write("n.json", config(R"({"kind": "square_well", "params": {"depth": 2.4674, "halfwidth": 1.0}})")),
                          "--out", (d.path() / "n").string()});
    EXPECT_EQ(near.code, cli::kExitHypothesis);
    EXPECT_NE(near.err.find("near-resonant"), std::string::npos) << near.err;
}

TEST(Cli, ResonanceScanFindsQuarterPiSquared) {
    TempDir d;
    const std::string cfg =
        d.write("c.json", config(R"({"kind": "zero"})", R"("depth_scan": {"min": 1, "max": 4, "count": 13, "halfwidth": 1})"));
    const CliRun r = run({"resonance", "--scan", "--config", cfg, "--out", d.path().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(field(r.out, "brackets"), 1.0);
    EXPECT_NE(r.out.find("stable_under_refinement true"), std::string::npos) << r.out;
    const auto pos = r.out.find("resonant_depth ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_NEAR(std::stod(r.out.substr(pos + 15)), kPi * kPi / 4.0, 1e-8);
    EXPECT_TRUE(fs::exists(d.path() / "depth_scan.csv"));
    EXPECT_TRUE(fs::exists(d.path() / "depth_scan.json"));
}

TEST(Cli, EvolveRejectsShortTime) {
    TempDir d;
    const std::string cfg = d.write("c.json", config(kSquareWell));
    EXPECT_EQ(run({"evolve", "--config", cfg, "--t", "0", "--out", d.path().string()}).code, cli::kExitUsage);
    EXPECT_EQ(run({"evolve", "--config", cfg, "--out", d.path().string()}).code, cli::kExitUsage);
}

TEST(Cli, EvolveAgreesWithOracle) {
    TempDir d;
    const CliRun a = run({"evolve", "--config", d.write("z.json", config(R"({"kind": "zero"})")), "--t", "2", "--oracle",
                       "--out", (d.path() / "z").string()});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_LE(field(a.out, "oracle_sup_difference"), 2e-3);
    EXPECT_TRUE(fs::exists(d.path() / "z" / "evolution.csv"));
    EXPECT_TRUE(fs::exists(d.path() / "z" / "evolution_diagnostics.json"));
    EXPECT_TRUE(fs::exists(d.path() / "z" / "oracle.json"));

    const CliRun b = run({"evolve", "--config", d.write("s.json", config(kSquareWell, R"("t": 5)")), "--oracle", "--out",
                       (d.path() / "s").string()});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_LE(field(b.out, "oracle_sup_difference"), 1e-3);
    EXPECT_GT(field(b.out, "panels"), 0.0);
}

TEST(Cli, VerifyExitCodesAndDecayFit) {
    TempDir d;
    const std::string zero = d.write("z.json", config(R"({"kind": "zero"})"));
    const CliRun t1 = run({"verify", "--theorem", "1", "--config", zero, "--out", (d.path() / "t1").string()});
    EXPECT_EQ(t1.code, cli::kExitHypothesis);

    const CliRun t2 = run({"verify", "--theorem", "2", "--config", zero, "--out", (d.path() / "t2").string()});
    ASSERT_EQ(t2.code, 0) << t2.out << t2.err;
    EXPECT_NEAR(field(t2.out, "slope"), -1.5, 0.15);
    EXPECT_NEAR(field(t2.out, "control_slope"), -0.5, 0.1);
    const fs::path csv = d.path() / "t2" / "decay.csv";
    ASSERT_TRUE(fs::exists(csv));
    EXPECT_TRUE(fs::exists(d.path() / "t2" / "verdict.json"));

    const CliRun fit = run({"decay-fit", "--input", csv.string(), "--out", (d.path() / "fit").string()});
    ASSERT_EQ(fit.code, 0) << fit.err;
    std::istringstream is(fit.out);
    std::string line;
    std::vector<double> slopes;
    while (std::getline(is, line)) {
        const auto p = line.find(" slope ");
        if (p != std::string::npos) slopes.push_back(std::stod(line.substr(p + 7)));
    }
    ASSERT_EQ(slopes.size(), 2u);
    EXPECT_NEAR(slopes[0], field(t2.out, "slope"), 1e-12);
    EXPECT_NEAR(slopes[1], field(t2.out, "control_slope"), 1e-12);
    EXPECT_TRUE(fs::exists(d.path() / "fit" / "decay_fit.json"));

    const std::string bad = d.write("bad.csv", "t,norm\n1,2\n");
    EXPECT_EQ(run({"decay-fit", "--input", bad}).code, cli::kExitUsage);
    EXPECT_EQ(run({"verify", "--theorem", "3", "--config", zero}).code, cli::kExitUsage);
}

#endif
