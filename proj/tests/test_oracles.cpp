#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nsv/oracles.hpp"

using namespace nsv;

namespace {

constexpr double kPi = std::numbers::pi;

/// Classical RK4 for dV/dt = kappa rho (u - V) and d(ln a)/dt = kappa rho.
std::pair<double, double> rk4_drag(double rho, double u, double v0, double kappa, double t, double dt) {
    auto f = [&](double v) { return kappa * rho * (u - v); };
    double v = v0, la = 0.0;
    const int steps = static_cast<int>(std::lround(t / dt));
    for (int k = 0; k < steps; ++k) {
        double k1 = f(v), k2 = f(v + 0.5 * dt * k1), k3 = f(v + 0.5 * dt * k2), k4 = f(v + dt * k3);
        v += dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
        la += dt * kappa * rho;
    }
    return {v, std::exp(la)};
}

} // namespace

TEST(DragClosedForm, InitialCondition) {
    auto s = oracles::drag_ode_closed_form(1.7, 0.3, -0.4, 2.0, 0.0);
    EXPECT_DOUBLE_EQ(s.velocity, -0.4);
    EXPECT_EQ(s.amp_factor, 1.0);
}

TEST(DragClosedForm, EquilibriumVelocityIsFixed) {
    auto s = oracles::drag_ode_closed_form(1.5, 0.25, 0.25, 0.8, 2.0);
    EXPECT_DOUBLE_EQ(s.velocity, 0.25);
    EXPECT_NEAR(s.amp_factor, std::exp(0.8 * 1.5 * 2.0), 1e-12);
}

TEST(DragClosedForm, MatchesRk4) {
    auto s = oracles::drag_ode_closed_form(2.0, 0.0, 1.0, 1.0, 1.0);
    EXPECT_NEAR(s.velocity, 0.1353353, 1e-7);
    auto [v, a] = rk4_drag(2.0, 0.0, 1.0, 1.0, 1.0, 1e-5);
    EXPECT_NEAR(s.velocity, v, 1e-12);
    EXPECT_NEAR(s.amp_factor, a, 1e-9);
}

TEST(DragClosedForm, RejectsNonPositiveDensity) {
    EXPECT_THROW(oracles::drag_ode_closed_form(0.0, 0.0, 1.0, 1.0, 1.0), InvalidParameter);
}

TEST(ManufacturedFluid, ConstantCaseHasZeroForcing) {
    auto ms = oracles::manufactured_fluid("constant", PhysParams{});
    for (double x : {0.0, 0.3, 0.77})
        for (double t : {0.0, 1.0}) {
            auto [sr, sm] = ms.forcing(x, t);
            EXPECT_EQ(sr, 0.0);
            EXPECT_EQ(sm, 0.0);
        }
}

TEST(ManufacturedFluid, DensityStaysInBand) {
    auto ms = oracles::manufactured_fluid("traveling-wave", PhysParams{});
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 20; ++j) {
            double r = ms.rho(i / 200.0, 0.37 * j);
            EXPECT_GE(r, 1.5);
            EXPECT_LE(r, 2.5);
        }
}

TEST(ManufacturedFluid, ForcingMatchesFiniteDifferenceResidual) {
    // independent check: evaluate the PDE residual of (rho*, u*) with centred
    // finite differences in x and t
    PhysParams p;
    p.A = 1.3;
    p.gamma = 1.4;
    p.mu0 = 0.7;
    p.mu1 = 1.1;
    p.beta = 1.5;
    auto ms = oracles::manufactured_fluid("traveling-wave", p);
    const double h = 1e-4;
    auto P = [&](double r) { return p.A * std::pow(r, p.gamma); };
    auto mu = [&](double r) { return p.mu0 + p.mu1 * std::pow(r, p.beta); };
    auto flux_m = [&](double x, double t) {
        double r = ms.rho(x, t), u = ms.u(x, t);
        return r * u * u + P(r);
    };
    auto visc = [&](double x, double t) {
        double ux = (ms.u(x + h, t) - ms.u(x - h, t)) / (2 * h);
        return mu(ms.rho(x, t)) * ux;
    };
    for (double x : {0.1, 0.45, 0.8})
        for (double t : {0.0, 0.3, 1.2}) {
            auto m = [&](double xx, double tt) { return ms.rho(xx, tt) * ms.u(xx, tt); };
            double rho_t = (ms.rho(x, t + h) - ms.rho(x, t - h)) / (2 * h);
            double mflux_x = (m(x + h, t) - m(x - h, t)) / (2 * h);
            double m_t = (m(x, t + h) - m(x, t - h)) / (2 * h);
            double f_x = (flux_m(x + h, t) - flux_m(x - h, t)) / (2 * h);
            double v_x = (visc(x + h, t) - visc(x - h, t)) / (2 * h);
            auto [sr, sm] = ms.forcing(x, t);
            EXPECT_NEAR(sr, rho_t + mflux_x, 1e-6);
            EXPECT_NEAR(sm, m_t + f_x - v_x, 1e-4);
        }
}

TEST(ManufacturedFluid, UnknownCase) {
    try {
        oracles::manufactured_fluid("vortex", PhysParams{});
        FAIL() << "expected UnknownCase";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownCase);
    }
}

TEST(FineQuadrature, ConstantIsExact) {
    EXPECT_NEAR(oracles::fine_quadrature([](double) { return 3.0; }, -1.0, 2.0, 7), 9.0, 1e-14);
    EXPECT_NEAR(oracles::fine_quadrature([](double, double) { return 2.0; }, 0.0, 1.0, -1.0, 1.0, 5, 3),
                4.0, 1e-14);
}

TEST(FineQuadrature, SineSquaredOverFullPeriod) {
    double v = oracles::fine_quadrature([](double x) { return std::pow(std::sin(2 * kPi * x), 2); },
                                        0.0, 1.0, 64);
    EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(FineQuadrature, FiveThirdsIntegralsAreResolutionIndependent) {
    auto us = [](int n) {
        double mom = oracles::fine_quadrature([](double) { return 2.0 * 1.0; }, 0.0, 1.0, n);
        double mass = oracles::fine_quadrature([](double) { return 2.0; }, 0.0, 1.0, n);
        return (mom + 1.0 * 3.0) / (mass + 1.0);
    };
    EXPECT_NEAR(us(4096), us(8192), 1e-8);
    EXPECT_NEAR(us(4096), 5.0 / 3.0, 1e-12);
}

TEST(RecipeIntegrals, RelaxationPresetLikeRecipe) {
    Scenario s;
    s.domain = DomainSpec{Torus{1.0}, 64};
    s.init.rho = FieldRecipe{Profile::Sine, 1.0, 0.3};
    s.init.u = FieldRecipe{Profile::Sine, 0.0, 0.5};
    s.init.f.profile = KineticProfile::Smooth;
    s.init.f.mass = 0.5;
    s.init.f.half_width = 0.8;
    s.v_support = 1.0;
    auto r = oracles::recipe_integrals(s, 800);
    EXPECT_NEAR(r.fluid_mass, 1.0, 1e-12);
    EXPECT_NEAR(r.fluid_momentum, 0.3 * 0.5 / 2.0, 1e-12);
    EXPECT_NEAR(r.kinetic_mass, 0.5, 1e-5);
    EXPECT_NEAR(r.kinetic_momentum, 0.0, 1e-12);
}
