#include "jostlab/error.hpp"
#include "jostlab/jost.hpp"
#include "jostlab/scattering.hpp"
#include "jostlab/wavefunction.hpp"

#include "closed_forms.hpp"
#include "ode_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace jostlab;

namespace {

SampledPotential desk(const PotentialSpec& spec) { return build_potential(spec, SpatialGrid::desk_default()); }

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

// Closed-form amplitudes of the depth-1, halfwidth-1 well at lambda = 0.8, frozen.
const cplx kSquareWellT08(0.591899397691243, 0.76343367888115);
const cplx kSquareWellR08(-0.204294271949773, 0.158391828738887);

}  // namespace

TEST(Scattering, FreeCoefficients) {
    const auto V = desk(PotentialSpec::zero());
    const std::vector<double> lambdas{0.5, 1.0, 2.0};
    const ScatteringTable t = scattering_table(V, lambdas);
    ASSERT_EQ(t.rows.size(), 3u);
    for (const auto& r : t.rows) {
        EXPECT_EQ(std::abs(r.alpha), 0.0);
        EXPECT_NEAR(std::abs(r.beta - 1.0), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(r.T - 1.0), 0.0, 1e-15);
        EXPECT_EQ(std::abs(r.R), 0.0);
        EXPECT_FALSE(r.flagged);
        EXPECT_FALSE(r.failed);
    }
}

TEST(Scattering, SquareWellMatchesClosedForm) {
    const auto a = oracle::square_well_amplitudes(1.0, 1.0, 0.8);
    EXPECT_NEAR(std::abs(a.T - kSquareWellT08), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(a.R - kSquareWellR08), 0.0, 1e-13);

    const auto V = desk(PotentialSpec::square_well(1.0, 1.0));
    const ScatteringTable t = scattering_table(V, std::vector<double>{0.8});
    const auto& r = t.rows.front();
    EXPECT_NEAR(std::norm(r.beta) - std::norm(r.alpha), 1.0, 1e-8);
    EXPECT_LE(std::abs(r.T - kSquareWellT08), 1e-6);
    EXPECT_LE(std::abs(r.R - kSquareWellR08), 1e-6);
}

TEST(Scattering, SquareWellClosedFormAcrossEnergies) {
    const auto V = desk(PotentialSpec::square_well(2.0, 1.5));
    const auto lambdas = linspace(0.05, 8.0, 23);
    const ScatteringTable t = scattering_table(V, lambdas);
    for (const auto& r : t.rows) {
        const auto a = oracle::square_well_amplitudes(2.0, 1.5, r.lambda);
        EXPECT_LE(std::abs(r.T - a.T), 1e-6) << r.lambda;
        EXPECT_LE(std::abs(r.R - a.R), 1e-6) << r.lambda;
    }
}

TEST(Scattering, PoschlTellerReflectionless) {
    const auto spec = PotentialSpec::poschl_teller(1);
    const auto V = desk(spec);
    const ScatteringTable t = scattering_table(V, std::vector<double>{1.0});
    const auto& r = t.rows.front();
    EXPECT_LE(std::abs(r.R), 1e-6);
    EXPECT_LE(std::abs(r.alpha), 1e-6);
    EXPECT_NEAR(std::abs(r.T), 1.0, 1e-6);

    const SpatialGrid& g = V.grid();
    const auto p = oracle::rk4_jost([&](double x) { return spec(x); }, 1.0, g.x_min(), g.spacing(), g.size(), false);
    const auto m = oracle::rk4_jost([&](double x) { return spec(x); }, 1.0, g.x_min(), g.spacing(), g.size(), true);
    const std::size_t k = g.matching_index();
    const cplx T_oracle = cplx(0.0, -2.0) / oracle::wronskian(p.f[k], p.df[k], m.f[k], m.df[k]);
    EXPECT_LE(std::abs(r.T - T_oracle), 1e-6);
    // Exact transmission of -2 sech^2 x.
    const cplx T_exact = (1.0 + cplx(0.0, 1.0)) / (1.0 - cplx(0.0, 1.0));
    EXPECT_LE(std::abs(r.T - T_exact), 1e-6);
}

TEST(ScatteringProperty, UnitarityOnEveryRow) {
    const auto lambdas = linspace(0.05, 10.0, 60);
    for (const auto& spec : {PotentialSpec::square_well(1.0, 1.0), PotentialSpec::poschl_teller(2),
                             PotentialSpec::gaussian_well(3.0, 0.6)}) {
        const ScatteringTable t = scattering_table(desk(spec), lambdas);
        EXPECT_EQ(t.failed_count(), 0u);
        EXPECT_EQ(t.flagged_count(), 0u);
        EXPECT_LE(t.max_unitarity_defect(), 1e-8) << spec.kind_name();
        for (const auto& r : t.rows) EXPECT_GT(std::abs(r.beta), 0.0);
    }
}

TEST(ScatteringProperty, ConjugateSymmetryOfAlphaBeta) {
    for (const auto& spec : {PotentialSpec::square_well(1.0, 1.0), PotentialSpec::gaussian_well(1.0, 2.0)}) {
        const auto V = desk(spec);
        for (double lambda : {0.05, 0.7, 3.0, 9.5}) {
            const ScatteringRow a = scattering_row(wronskians(V, lambda));
            const ScatteringRow b = scattering_row(wronskians(V, -lambda));
            EXPECT_LE(std::abs(b.beta - std::conj(a.beta)), 1e-10) << spec.kind_name() << " " << lambda;
            EXPECT_LE(std::abs(b.alpha - std::conj(a.alpha)), 1e-10) << spec.kind_name() << " " << lambda;
        }
    }
}

TEST(ScatteringProperty, ZeroEnergyReflectionOfGenericPotentials) {
    const auto table = PotentialSpec::custom_table({-50.0, -2.0, -0.5, 0.5, 2.0, 50.0}, {0.0, 0.0, -1.2, -0.4, 0.0, 0.0});
    for (const auto& spec : {PotentialSpec::square_well(1.0, 1.0), PotentialSpec::gaussian_well(1.0, 1.0), table,
                             PotentialSpec::square_well(5.0, 0.5)}) {
        const auto V = desk(spec);
        ASSERT_EQ(probe_zero_energy(V).classification, ZeroEnergyClass::generic) << spec.kind_name();
        const ScatteringTable t = scattering_table(V, std::vector<double>{1e-3});
        EXPECT_LE(std::abs(t.rows.front().R + 1.0), 0.05) << spec.kind_name();
    }
}

TEST(Scattering, RejectsNonPositiveLambda) {
    const auto V = desk(PotentialSpec::square_well(1.0, 1.0));
    EXPECT_THROW(scattering_table(V, std::vector<double>{0.5, 0.0}), InvalidArgument);
    EXPECT_THROW(scattering_table(V, std::vector<double>{-1.0}), InvalidArgument);
}

TEST(Scattering, FailedRowsAreMarkedNotThrown) {
    const auto V = desk(PotentialSpec::square_well(4.0, 1.0));
    ScatteringOptions o;
    o.jost.tol_ode = 1e-30;
    const ScatteringTable t = scattering_table(V, std::vector<double>{1.0, 2.0}, o);
    EXPECT_EQ(t.failed_count(), 2u);
    for (const auto& r : t.rows) {
        EXPECT_TRUE(r.failed);
        EXPECT_TRUE(std::isnan(r.T.real()));
        EXPECT_FALSE(r.error.empty());
    }
}

TEST(Resonance, FreeCaseIsResonant) {
    const auto V = desk(PotentialSpec::zero());
    const ResonanceReport r = detect_resonance(V);
    EXPECT_TRUE(r.resonant());
    EXPECT_DOUBLE_EQ(r.norm_check, 2.0);
    ASSERT_EQ(r.f0.size(), V.grid().size());
    for (double v : r.f0) EXPECT_DOUBLE_EQ(v, 1.0);
    EXPECT_DOUBLE_EQ(*r.beta0, 1.0);
    EXPECT_DOUBLE_EQ(*r.alpha0, 0.0);
}

TEST(Resonance, SquareWellIsGeneric) {
    const auto V = desk(PotentialSpec::square_well(1.0, 1.0));
    const ResonanceReport r = detect_resonance(V);
    EXPECT_EQ(r.classification, ZeroEnergyClass::generic);
    EXPECT_GT(std::abs(r.W0), 10.0 * r.tol_res);
    EXPECT_TRUE(r.f0.empty());
    EXPECT_TRUE(std::isnan(r.norm_check));
    EXPECT_FALSE(r.alpha0.has_value());
    // Zero-energy shooting: W(0) = -sqrt(d) sin(2 sqrt(d) a) for the well.
    EXPECT_NEAR(r.W0.real(), -std::sin(2.0), 1e-8);
    EXPECT_NEAR(r.tol_res, 1e-6 * (1.0 + V.norm(1)), 1e-18);
}

TEST(Resonance, PoschlTellerProfileIsTanh) {
    const auto V = desk(PotentialSpec::poschl_teller(1));
    const ResonanceReport r = detect_resonance(V);
    ASSERT_TRUE(r.resonant());
    EXPECT_NEAR(r.norm_check, 2.0, 1e-4);
    const SpatialGrid& g = V.grid();
    double sup = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) sup = std::max(sup, std::abs(r.f0[i] - std::tanh(g.x(i))));
    EXPECT_LE(sup, 1e-6);
    EXPECT_GT(r.f0.back(), 0.0);
}

TEST(ResonanceProperty, ResonantIdentities) {
    const SpatialGrid g = SpatialGrid::desk_default();
    const double d = oracle::square_well_resonant_depth(1, 1.0);
    for (const auto& spec : {PotentialSpec::zero(), PotentialSpec::poschl_teller(1), PotentialSpec::poschl_teller(2),
                             PotentialSpec::square_well(d, 1.0)}) {
        const auto V = build_potential(spec, g);
        const ResonanceReport r = detect_resonance(V);
        ASSERT_TRUE(r.resonant()) << spec.kind_name();
        EXPECT_EQ(r.W0.imag(), 0.0);
        const double a = *r.alpha0;
        const double b = *r.beta0;
        EXPECT_NEAR(a * a + 1.0, b * b, 1e-6) << spec.kind_name();
        EXPECT_NEAR(r.norm_check, 2.0, 1e-4) << spec.kind_name();

        // f_-(x, 0) is a multiple of f0 with |f_-| = sqrt((1 + (a + b)^2) / 2) |f0|.
        const JostSolution fm = solve_jost(V, 0.0, Direction::minus);
        const double scale = std::sqrt(0.5 * (1.0 + (a + b) * (a + b)));
        const double sign = (a + b) >= 0.0 ? 1.0 : -1.0;
        double sup = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) sup = std::max(sup, std::abs(fm.m[i].real() - sign * scale * r.f0[i]));
        EXPECT_LE(sup, 1e-6) << spec.kind_name();
    }
}

TEST(Resonance, NearResonantDepthThrows) {
    const auto V = desk(PotentialSpec::square_well(2.4674, 1.0));
    const ZeroEnergyProbe p = probe_zero_energy(V);
    EXPECT_EQ(p.classification, ZeroEnergyClass::near_resonant);
    try {
        detect_resonance(V);
        FAIL() << "expected NearResonanceError";
    } catch (const NearResonanceError& e) {
        EXPECT_NEAR(e.w0_abs(), std::abs(p.W0), 1e-18);
    }
}

TEST(Resonance, ProjectionOfGaussianOntoConstant) {
    const auto V = desk(PotentialSpec::zero());
    const ResonanceReport r = detect_resonance(V);
    const auto psi = InitialState::gaussian().sample(V.grid());
    const ComplexArray p = project_resonance(psi, r);
    for (const cplx& v : p) EXPECT_NEAR(std::abs(v - std::sqrt(2.0 * kPi)), 0.0, 1e-12);

    const auto odd = InitialState{InitialState::Kind::odd_gaussian, 0.0, 1.0}.sample(V.grid());
    for (const cplx& v : project_resonance(odd, r)) EXPECT_LE(std::abs(v), 1e-14);
}

TEST(Resonance, ProjectionNeedsResonantReport) {
    const auto V = desk(PotentialSpec::square_well(1.0, 1.0));
    const ResonanceReport r = detect_resonance(V);
    const auto psi = InitialState::gaussian().sample(V.grid());
    EXPECT_THROW(project_resonance(psi, r), HypothesisError);
}

TEST(Resonance, DepthScanBracketsFirstResonance) {
    const SpatialGrid g = SpatialGrid::desk_default();
    const PotentialFamily family = [](double d) { return PotentialSpec::square_well(d, 1.0); };
    const auto depths = linspace(1.0, 4.0, 13);
    const auto rows = depth_scan(family, g, depths);
    std::size_t sign_changes = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        EXPECT_EQ(rows[i].classification, ZeroEnergyClass::generic);
        if ((rows[i].W0 > 0.0) != (rows[i + 1].W0 > 0.0)) {
            ++sign_changes;
            const double d = bisect_resonance(family, g, rows[i].depth, rows[i + 1].depth);
            EXPECT_NEAR(d, oracle::square_well_resonant_depth(1, 1.0), 1e-9);
            EXPECT_EQ(probe_zero_energy(build_potential(family(d), g)).classification, ZeroEnergyClass::resonant);
            const double d_fine = bisect_resonance(family, g.refined(), rows[i].depth, rows[i + 1].depth);
            EXPECT_NEAR(d_fine, d, 1e-9);
        }
    }
    EXPECT_EQ(sign_changes, 1u);
    EXPECT_THROW(bisect_resonance(family, g, 1.0, 2.0), InvalidArgument);
}
