#pragma once

#include "jostlab/analysis.hpp"
#include "jostlab/potential.hpp"
#include "jostlab/propagator.hpp"
#include "jostlab/scattering.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace jostlab {

/// Shortest decimal that round-trips, '.' separator, locale independent.
std::string format_double(double v);

/// {"kind": "...", "params": {...}}. Throws InvalidArgument on unknown kinds
/// or missing parameters.
PotentialSpec potential_from_json(const std::string& text);
std::string potential_to_json(const PotentialSpec& spec);

/// lambda, re_W, im_W, re_Wt, im_Wt, re_T, im_T, re_R, im_R, unitarity_defect
void write_scattering_csv(std::ostream& os, const ScatteringTable& table);

/// x, re_u, im_u
void write_evolution_csv(std::ostream& os, const EvolutionResult& r);

/// {t, method, panels, est_error} plus nodes and lambda_max.
std::string evolution_diagnostics_json(const EvolutionResult& r);

/// t, norm, weight_sigma, subtracted
void write_decay_csv(std::ostream& os, const std::vector<DecayRow>& rows);

/// {theorem, slope, stderr, target, tol, pass, ...}
std::string verdict_json(const Verdict& v);

std::string resonance_json(const ResonanceReport& r);

/// depth, W0, abs_W0, tol_res, classification
void write_depth_scan_csv(std::ostream& os, const std::vector<DepthScanRow>& rows);

}  // namespace jostlab
