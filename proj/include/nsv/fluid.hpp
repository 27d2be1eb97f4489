#pragma once

// One time step of the compressible Navier-Stokes subsystem with a drag
// source from frozen kinetic moments (n, nw).
//
// Convection and pressure are explicit; viscosity and drag are implicit.
// Time integration is the two-stage L-stable IMEX Runge-Kutta scheme of
// Ascher, Ruuth and Spiteri, ARS(2,2,2), so every stage costs one
// (cyclic) tridiagonal solve for the velocity.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nsv/core.hpp"
#include "nsv/error.hpp"
#include "nsv/mesh.hpp"

namespace nsv {

inline double pressure(double rho, const PhysParams& p) {
    if (!(rho > 0.0)) throw Error(ErrorKind::NonPositiveDensity, "pressure needs rho > 0");
    return p.A * std::pow(rho, p.gamma);
}

inline Field pressure(std::span<const double> rho, const PhysParams& p) {
    Field out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = pressure(rho[i], p);
    return out;
}

inline double viscosity(double rho, const PhysParams& p) {
    if (!(rho > 0.0)) throw Error(ErrorKind::NonPositiveDensity, "viscosity needs rho > 0");
    return p.mu0 + p.mu1 * std::pow(rho, p.beta);
}

inline Field viscosity(std::span<const double> rho, const PhysParams& p) {
    Field out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = viscosity(rho[i], p);
    return out;
}

inline double sound_speed(double rho, const PhysParams& p) {
    return std::sqrt(p.A * p.gamma * std::pow(rho, p.gamma - 1.0));
}

/// Largest dt with |u| + c <= dx / dt everywhere (CFL number one).
inline double advective_limit(const FluidState& s, const Grid1D& g, const PhysParams& p) {
    double vmax = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        vmax = std::max(vmax, std::abs(s.u[i]) + sound_speed(s.rho[i], p));
    return g.dx / vmax;
}

inline constexpr double kCflNumber = 0.5;

inline double cfl_dt(const FluidState& s, const Grid1D& g, const PhysParams& p) {
    return kCflNumber * advective_limit(s, g, p);
}

/// Source terms (s_rho, s_m) added to the continuity and momentum equations.
using FluidForcing = std::function<std::pair<double, double>(double x, double t)>;

/// Kinetic moments deposited on the grid.
struct Moments {
    Field n;
    Field nw;
};

namespace detail {

// Cell values with two ghost cells per side. On the line the ghosts hold the
// far-field state (rho_tilde, 0).
struct GhostView {
    std::span<const double> f;
    double ghost;
    bool periodic;
    int n;

    double operator[](int i) const {
        if (periodic) return f[((i % n) + n) % n];
        return (i < 0 || i >= n) ? ghost : f[i];
    }
};

inline void check_density(std::span<const double> rho, const char* where) {
    for (std::size_t i = 0; i < rho.size(); ++i)
        if (!(rho[i] > 0.0))
            throw Error(ErrorKind::NonPositiveDensity,
                        std::string(where) + ": rho[" + std::to_string(i) +
                            "] = " + nsv::detail::fmt_value(rho[i]));
}

/// Explicit part: d rho/dt = -(rho u)_x + s_rho,
/// d(rho u)/dt = -(rho u^2)_x - P_x + s_m.
/// Face fluxes use second-order upwind-biased (Fromm) reconstruction with the
/// averaged face velocity; the pressure gradient is central. On the line the
/// two truncation faces carry no convective flux.
inline void explicit_rates(const Grid1D& g, const PhysParams& p, std::span<const double> rho,
                           std::span<const double> u, double t, const FluidForcing* forcing,
                           Field& drho, Field& dm) {
    const int n = g.n;
    const bool per = g.periodic();
    GhostView R{rho, p.rho_tilde, per, n};
    GhostView U{u, 0.0, per, n};

    Field mass_flux(n + 1), mom_flux(n + 1);
    for (int k = 0; k <= n; ++k) {
        if (!per && (k == 0 || k == n)) {
            mass_flux[k] = 0.0;
            mom_flux[k] = 0.0;
            continue;
        }
        if (per && k == n) {
            mass_flux[n] = mass_flux[0];
            mom_flux[n] = mom_flux[0];
            continue;
        }
        const int l = k - 1, r = k;
        const double a = 0.5 * (U[l] + U[r]);
        double rf, uf;
        if (a >= 0.0) {
            rf = R[l] + 0.25 * (R[r] - R[l - 1]);
            uf = U[l] + 0.25 * (U[r] - U[l - 1]);
        } else {
            rf = R[r] - 0.25 * (R[r + 1] - R[l]);
            uf = U[r] - 0.25 * (U[r + 1] - U[l]);
        }
        mass_flux[k] = a * rf;
        mom_flux[k] = mass_flux[k] * uf;
    }

    Field pr(n + 2);
    for (int i = -1; i <= n; ++i) pr[i + 1] = p.A * std::pow(R[i], p.gamma);

    drho.assign(n, 0.0);
    dm.assign(n, 0.0);
    const double inv_dx = 1.0 / g.dx;
    for (int i = 0; i < n; ++i) {
        drho[i] = -(mass_flux[i + 1] - mass_flux[i]) * inv_dx;
        dm[i] = -(mom_flux[i + 1] - mom_flux[i]) * inv_dx - (pr[i + 2] - pr[i]) * 0.5 * inv_dx;
    }
    if (forcing) {
        for (int i = 0; i < n; ++i) {
            auto [sr, sm] = (*forcing)(g.centers[i], t);
            drho[i] += sr;
            dm[i] += sm;
        }
    }
}

/// Face viscosities mu_{k-1/2}, k = 0..n, from cell densities (ghosts on the line).
inline Field face_viscosity(const Grid1D& g, const PhysParams& p, std::span<const double> rho) {
    const int n = g.n;
    GhostView R{rho, p.rho_tilde, g.periodic(), n};
    Field mu_face(n + 1);
    for (int k = 0; k <= n; ++k) {
        double ml = p.mu0 + p.mu1 * std::pow(R[k - 1], p.beta);
        double mr = p.mu0 + p.mu1 * std::pow(R[k], p.beta);
        mu_face[k] = 0.5 * (ml + mr);
    }
    return mu_face;
}

/// Implicit part: (mu(rho) u_x)_x - kappa rho (n u - nw).
inline Field implicit_rate(const Grid1D& g, const PhysParams& p, std::span<const double> rho,
                           std::span<const double> u, const Moments& mom) {
    const int n = g.n;
    Field mu_face = face_viscosity(g, p, rho);
    GhostView U{u, 0.0, g.periodic(), n};
    const double inv_dx2 = 1.0 / (g.dx * g.dx);
    Field out(n);
    for (int i = 0; i < n; ++i) {
        double visc = (mu_face[i + 1] * (U[i + 1] - U[i]) - mu_face[i] * (U[i] - U[i - 1])) * inv_dx2;
        out[i] = visc - p.kappa * rho[i] * (mom.n[i] * u[i] - mom.nw[i]);
    }
    return out;
}

/// Solves mass[i] u[i] - h * implicit_rate(rho, u)[i] = rhs[i] for u.
inline Field implicit_solve(const Grid1D& g, const PhysParams& p, std::span<const double> rho,
                            std::span<const double> mass, const Moments& mom,
                            std::span<const double> rhs, double h) {
    const int n = g.n;
    Field mu_face = face_viscosity(g, p, rho);
    const double c = h / (g.dx * g.dx);
    Field lower(n), diag(n), upper(n), b(n);
    for (int i = 0; i < n; ++i) {
        const double drag = h * p.kappa * rho[i];
        lower[i] = -c * mu_face[i];
        upper[i] = -c * mu_face[i + 1];
        diag[i] = mass[i] + c * (mu_face[i] + mu_face[i + 1]) + drag * mom.n[i];
        b[i] = rhs[i] + drag * mom.nw[i];
    }
    if (!g.periodic()) {
        // Dirichlet u = 0 in the ghost cells.
        lower[0] = 0.0;
        upper[n - 1] = 0.0;
    }
    return solve_tridiagonal(lower, diag, upper, b, g.periodic());
}

} // namespace detail

inline Moments zero_moments(int n) { return Moments{Field(n, 0.0), Field(n, 0.0)}; }

/// Advances (rho, u) by dt with the kinetic moments held fixed.
/// Mass is conserved exactly on the torus; fluid momentum changes only by the
/// discrete drag exchange.
inline FluidState fluid_step(const FluidState& state, const Moments& mom, double dt,
                             const Grid1D& g, const PhysParams& p,
                             const FluidForcing* forcing = nullptr) {
    const int n = g.n;
    detail::check_density(state.rho, "fluid_step input");
    if (!(dt > 0.0)) throw InvalidParameter("dt", dt, ">0");
    const double limit = advective_limit(state, g, p);
    if (dt > limit * (1.0 + 1e-12))
        throw Error(ErrorKind::CFLViolation, "dt = " + detail::fmt_value(dt) +
                                                 " exceeds advective limit " +
                                                 detail::fmt_value(limit));

    constexpr double gam = 1.0 - 0.70710678118654752440; // 1 - 1/sqrt(2)
    constexpr double del = 1.0 - 1.0 / (2.0 * gam);

    const Field& rho0 = state.rho;
    const Field& u0 = state.u;
    Field m0(n);
    for (int i = 0; i < n; ++i) m0[i] = rho0[i] * u0[i];

    // Stage 1 is the initial state.
    Field er1, em1;
    detail::explicit_rates(g, p, rho0, u0, state.t, forcing, er1, em1);

    // Stage 2 at t + gam dt.
    Field rho2(n), rhs2(n);
    for (int i = 0; i < n; ++i) {
        rho2[i] = rho0[i] + dt * gam * er1[i];
        rhs2[i] = m0[i] + dt * gam * em1[i];
    }
    detail::check_density(rho2, "fluid_step stage");
    Field u2 = detail::implicit_solve(g, p, rho2, rho2, mom, rhs2, dt * gam);

    Field er2, em2;
    detail::explicit_rates(g, p, rho2, u2, state.t + gam * dt, forcing, er2, em2);
    Field l2 = detail::implicit_rate(g, p, rho2, u2, mom);

    // Stage 3 at t + dt, stiffly accurate: it is the new state.
    FluidState out;
    out.rho.resize(n);
    Field rhs3(n);
    for (int i = 0; i < n; ++i) {
        out.rho[i] = rho0[i] + dt * (del * er1[i] + (1.0 - del) * er2[i]);
        rhs3[i] = m0[i] + dt * (del * em1[i] + (1.0 - del) * em2[i]) + dt * (1.0 - gam) * l2[i];
    }
    detail::check_density(out.rho, "fluid_step");
    out.u = detail::implicit_solve(g, p, out.rho, out.rho, mom, rhs3, dt * gam);
    out.t = state.t + dt;
    return out;
}

inline FluidState fluid_step(const FluidState& state, std::span<const double> n,
                             std::span<const double> nw, double dt, const Grid1D& g,
                             const PhysParams& p, const FluidForcing* forcing = nullptr) {
    Moments m{Field(n.begin(), n.end()), Field(nw.begin(), nw.end())};
    return fluid_step(state, m, dt, g, p, forcing);
}

} // namespace nsv
