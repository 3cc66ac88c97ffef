#pragma once

#include "jostlab/grid.hpp"
#include "jostlab/potential.hpp"
#include "jostlab/wavefunction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jostlab::cli {

struct Tolerances {
    double tol_ode = 1e-6;
    double tol_res = 1e-6;
    double tol_scatter = 1e-8;
    double slope_tol = 0.15;
    double control_tol = 0.1;
};

struct DepthScanConfig {
    double min = 1.0;
    double max = 12.0;
    std::size_t count = 45;
    double halfwidth = 1.0;
};

/// Everything a run needs; a run is reproducible from this alone.
struct RunConfig {
    PotentialSpec potential;
    SpatialGrid grid = SpatialGrid::desk_default();
    std::vector<double> lambda_grid;
    InitialState initial_state;
    std::optional<double> t;
    std::vector<double> t_samples;
    Tolerances tolerances;
    std::optional<double> lambda0;
    std::optional<double> lambda_max;
    std::string output_dir = "out";
    DepthScanConfig depth_scan;
    std::optional<SpatialGrid> oracle_grid;
};

/// Throws InvalidArgument on malformed JSON, unknown keys or bad values.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Fully resolved config, defaults filled in.
std::string run_config_to_json(const RunConfig& config);

}  // namespace jostlab::cli
