#include <gtest/gtest.h>

#include <cmath>

#include "nsv/core.hpp"
#include "nsv/oracles.hpp"

using namespace nsv;

TEST(ValidateParams, NormalizedConstantsAccepted) {
    PhysParams p{1.0, 2.0, 1.0, 1.0, 0.0, 1.0, 1.0};
    EXPECT_NO_THROW(validate_params(p));
}

TEST(ValidateParams, GammaOneRejected) {
    PhysParams p;
    p.gamma = 1.0;
    try {
        validate_params(p);
        FAIL() << "expected InvalidParameter";
    } catch (const InvalidParameter& e) {
        EXPECT_EQ(e.name(), "gamma");
        EXPECT_EQ(e.value(), 1.0);
        EXPECT_EQ(e.constraint(), ">1");
        EXPECT_NE(std::string(e.what()).find("gamma must exceed 1"), std::string::npos);
    }
}

TEST(ValidateParams, Mu0ZeroRejected) {
    PhysParams p;
    p.mu0 = 0.0;
    try {
        validate_params(p);
        FAIL() << "expected InvalidParameter";
    } catch (const InvalidParameter& e) {
        EXPECT_EQ(e.name(), "mu0");
        EXPECT_EQ(e.constraint(), ">0");
    }
}

TEST(ValidateParams, NonFiniteRejected) {
    PhysParams p;
    p.kappa = std::nan("");
    EXPECT_THROW(validate_params(p), InvalidParameter);
}

TEST(ValidateDomain, Limits) {
    EXPECT_THROW(validate_domain(DomainSpec{Torus{1.0}, 7}), InvalidParameter);
    EXPECT_THROW(validate_domain(DomainSpec{Torus{0.0}, 16}), InvalidParameter);
    EXPECT_THROW(validate_domain(DomainSpec{Line{1.0, 1.0}, 16}), Error);
    EXPECT_NO_THROW(validate_domain(DomainSpec{Line{-1.0, 2.0}, 16}));
}

TEST(Scenario, Mu1ZeroOnlyForOracleTests) {
    Scenario s;
    s.params.mu1 = 0.0;
    EXPECT_THROW(validate_scenario(s), InvalidParameter);
    s.init.oracle_test = true;
    EXPECT_NO_THROW(validate_scenario(s));
}

TEST(Scenario, InitialSupportMustFitVelocityBound) {
    Scenario s;
    s.init.f.profile = KineticProfile::Box;
    s.init.f.v_lo = -2.0;
    s.init.f.v_hi = 2.0;
    s.v_support = 1.0;
    EXPECT_THROW(validate_scenario(s), InvalidParameter);
}

TEST(BuildInitial, UniformRecipeWithoutParticles) {
    Scenario s;
    s.domain = DomainSpec{Torus{1.0}, 16};
    auto [fluid, cloud] = build_initial(s);
    ASSERT_EQ(fluid.rho.size(), 16u);
    for (int i = 0; i < 16; ++i) {
        EXPECT_EQ(fluid.rho[i], 1.0);
        EXPECT_EQ(fluid.u[i], 0.0);
    }
    EXPECT_TRUE(cloud.empty());
}

TEST(BuildInitial, NegativeDensityRejected) {
    Scenario s;
    s.init.rho = FieldRecipe{Profile::Constant, -1.0};
    try {
        build_initial(s);
        FAIL() << "expected NonPositiveInitialDensity";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonPositiveInitialDensity);
    }
}

TEST(BuildInitial, EmptyLatticeRejected) {
    Scenario s;
    s.init.f.profile = KineticProfile::Box;
    s.init.f.level = 1.0;
    s.init.f.x_lo = 2.0;  // outside the unit torus
    s.init.f.x_hi = 3.0;
    try {
        build_initial(s);
        FAIL() << "expected EmptyCloud";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyCloud);
    }
}

namespace {

// Box [0,1] x [-0.5, 0.5] at unit level sampled on a lattice over |v| <= 0.7.
double box_lattice_mass(int cells, int v_cells) {
    Scenario s;
    s.domain = DomainSpec{Torus{1.0}, cells};
    s.init.f.profile = KineticProfile::Box;
    s.init.f.level = 1.0;
    s.init.f.v_lo = -0.5;
    s.init.f.v_hi = 0.5;
    s.v_support = 0.7;
    s.v_cells = v_cells;
    s.particles_per_cell = 1;
    auto [fluid, cloud] = build_initial(s);
    double m = 0.0;
    for (double w : cloud.w) m += w;
    return m;
}

} // namespace

TEST(BuildInitial, BoxMassMatchesFineQuadrature) {
    Scenario s;
    s.domain = DomainSpec{Torus{1.0}, 16};
    s.init.f.profile = KineticProfile::Box;
    s.init.f.level = 1.0;
    s.init.f.v_lo = -0.5;
    s.init.f.v_hi = 0.5;
    s.v_support = 0.7;
    EXPECT_NEAR(oracles::recipe_integrals(s, 4000).kinetic_mass, 1.0, 1e-3);
    // aligned lattice edges give the exact mass
    EXPECT_NEAR(box_lattice_mass(16, 7), 1.0, 1e-12);
    // otherwise the error is at most one velocity cell of the box edge
    for (int vc : {9, 11, 19, 23, 47}) {
        const double dv = 1.4 / vc;
        EXPECT_LE(std::abs(box_lattice_mass(32, vc) - 1.0), dv) << vc;
    }
}

TEST(BuildInitial, MassNormalisedRecipeHitsTargetMass) {
    Scenario s;
    s.domain = DomainSpec{Torus{1.0}, 32};
    s.init.f.profile = KineticProfile::Box;
    s.init.f.mass = 1.0;
    s.init.f.v_lo = -1.0;
    s.init.f.v_hi = 1.0;
    s.v_support = 1.0;
    s.v_cells = 32;
    auto [fluid, cloud] = build_initial(s);
    double m = 0.0;
    for (double w : cloud.w) m += w;
    EXPECT_NEAR(m, 1.0, 1e-12);
}

TEST(BuildInitial, JitterIsReproducible) {
    Scenario s;
    s.domain = DomainSpec{Torus{1.0}, 16};
    s.init.f.profile = KineticProfile::Box;
    s.init.f.mass = 1.0;
    s.init.jitter = 0.5;
    s.seed = 42;
    auto a = build_initial(s).second;
    auto b = build_initial(s).second;
    EXPECT_EQ(a.x, b.x);
    for (double x : a.x) {
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
}

TEST(ParticleCloud, AmplitudeStoredAsLogarithm) {
    ParticleCloud c;
    c.push_back(0.1, 0.2, 0.3, 2.5);
    EXPECT_NEAR(c.amp(0), 2.5, 1e-15);
}
