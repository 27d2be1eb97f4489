#pragma once

// Quick oracle-backed property checks, run by `nsv verify`.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "nsv/core.hpp"
#include "nsv/coupling.hpp"
#include "nsv/diagnostics.hpp"
#include "nsv/fluid.hpp"
#include "nsv/kinetic.hpp"
#include "nsv/mesh.hpp"
#include "nsv/oracles.hpp"

namespace nsv {

struct PropertyResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
};

namespace detail {

inline PropertyResult check(std::string name, double value, double tol) {
    return {std::move(name), std::isfinite(value) && value <= tol, value, tol};
}

inline double push_error_vs_closed_form(double dt) {
    DomainSpec d{Torus{1.0}, 16};
    Grid1D g(d);
    PhysParams p;
    p.kappa = 1.0;
    const double rho_bar = 1.5, u_bar = 0.3, v0 = -0.7;
    FluidState s{Field(g.n, rho_bar), Field(g.n, u_bar), 0.0};
    ParticleCloud c;
    c.push_back(0.2, v0, 1.0, 1.0);
    const int steps = static_cast<int>(std::lround(1.0 / dt));
    for (int k = 0; k < steps; ++k) push_particles_into(c, c, s, g, p, dt);
    auto exact = oracles::drag_ode_closed_form(rho_bar, u_bar, v0, p.kappa, 1.0);
    return std::abs(c.v[0] - exact.velocity);
}

} // namespace detail

inline std::vector<PropertyResult> run_verification() {
    std::vector<PropertyResult> out;
    constexpr double pi = std::numbers::pi;

    out.push_back(detail::check("push matches closed-form drag ODE at t=1 (dt=1e-3)",
                                detail::push_error_vs_closed_form(1e-3), 1e-6));

    {
        double e1 = detail::push_error_vs_closed_form(0.02);
        double e2 = detail::push_error_vs_closed_form(0.01);
        out.push_back(detail::check("push error ratio under dt halving is near 4",
                                    std::abs(e1 / e2 - 4.0), 0.5));
    }

    {
        Grid1D g(DomainSpec{Torus{1.0}, 128});
        Field h(g.n);
        for (int i = 0; i < g.n; ++i) h[i] = std::exp(std::sin(2 * pi * g.centers[i]));
        const double mean_h = integrate(g, h);
        for (double& v : h) v -= mean_h;
        Field I = nonlocal_I(g, h);
        out.push_back(detail::check("nonlocal I has zero mean", std::abs(integrate(g, I)), 1e-12));
        Field dI = ddx_central(g, I);
        double err = 0.0;
        for (int i = 0; i < g.n; ++i) err = std::max(err, std::abs(dI[i] - h[i]));
        out.push_back(detail::check("d/dx of I(h) recovers zero-mean h", err, 2e-2));
    }

    {
        const int n = 17;
        Field lo(n, -1.0), di(n, 4.0), up(n, -1.5), rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = std::cos(0.3 * i);
        Field x = solve_tridiagonal(lo, di, up, rhs, true);
        double r = 0.0;
        for (int i = 0; i < n; ++i) {
            double ax = lo[i] * x[(i + n - 1) % n] + di[i] * x[i] + up[i] * x[(i + 1) % n];
            r = std::max(r, std::abs(ax - rhs[i]));
        }
        out.push_back(detail::check("cyclic tridiagonal residual", r, 1e-13));
    }

    {
        Grid1D g(DomainSpec{Torus{1.0}, 32});
        ParticleCloud c;
        for (int k = 0; k < 200; ++k) c.push_back(std::fmod(0.37 * k + 0.011, 1.0), std::sin(k), 0.01 + 0.001 * (k % 7), 1.0);
        Moments m = deposit_moments(c, g);
        out.push_back(detail::check("deposition preserves total weight",
                                    std::abs(integrate(g, m.n) - kinetic_mass(c)), 1e-13));
        out.push_back(detail::check("deposition preserves total momentum",
                                    std::abs(integrate(g, m.nw) - kinetic_momentum(c)), 1e-13));
    }

    {
        PhysParams p;
        p.gamma = 1.4;
        p.beta = 1.0;
        auto ms = oracles::manufactured_fluid("constant", p);
        Grid1D g(DomainSpec{Torus{1.0}, 32});
        FluidState s{Field(g.n, ms.rho(0, 0)), Field(g.n, ms.u(0, 0)), 0.0};
        FluidState s1 = fluid_step(s, zero_moments(g.n), 0.5 * cfl_dt(s, g, p), g, p);
        double err = 0.0;
        for (int i = 0; i < g.n; ++i)
            err = std::max({err, std::abs(s1.rho[i] - 2.0), std::abs(s1.u[i] - 0.5)});
        out.push_back(detail::check("constant state is preserved by the fluid step", err, 1e-13));
    }

    {
        std::vector<std::pair<double, double>> series;
        for (int k = 0; k <= 20; ++k) series.emplace_back(k, 3.0 * std::exp(-0.7 * k));
        auto fit = fit_decay(series, {0.0, 20.0});
        out.push_back(detail::check("fit_decay recovers a known rate", std::abs(fit.rate - 0.7), 1e-12));
    }

    {
        Grid1D g(DomainSpec{Torus{1.0}, 16});
        ParticleCloud c;
        for (int k = 0; k < 10; ++k) c.push_back(0.1 * k, 0.05 * k, 0.1, 1.0);
        out.push_back(detail::check("Q vanishes for identical clouds", q_divergence(c, c, g), 0.0));
    }

    return out;
}

} // namespace nsv
