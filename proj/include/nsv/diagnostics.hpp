#pragma once

// Analytic functionals evaluated on state snapshots: conserved totals, the
// energy/dissipation pair, the relative entropy about the equilibrium
// (rho_bar, u_s, n delta(v - u_s)), W1 upper bound, effective velocities,
// the two-trajectory divergence Q, and exponential decay-rate fits.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "nsv/core.hpp"
#include "nsv/error.hpp"
#include "nsv/fluid.hpp"
#include "nsv/kinetic.hpp"
#include "nsv/mesh.hpp"
#include "nsv/system_state.hpp"

namespace nsv {

/// One time sample of every monitored functional.
struct DiagnosticsRecord {
    double t = 0;
    double mass_fluid = 0;
    double mass_kinetic = 0;
    double momentum_total = 0;
    double energy = 0;
    double dissipation = 0;
    double rel_entropy = 0;
    double w1_upper = 0;
    double support_radius = 0;
    double rho_min = 0;
    double rho_max = 0;
    double u_dev_l2 = 0;
    double rho_dev_c0 = 0;
    double sup_abs_U = 0;
    double sup_abs_W = 0;
    double max_amp = 0;
    double pressure_l1 = 0;
    double m1 = 0;
    double m2 = 0;
    double theta_min = 0;
    double theta_max = 0;
};

/// CSV column order (schema version 1).
inline constexpr int kCsvSchemaVersion = 1;
inline constexpr std::array<std::string_view, 21> kRecordColumns = {
    "t",          "mass_fluid",     "mass_kinetic", "momentum_total", "energy",
    "dissipation", "rel_entropy",   "w1_upper",     "support_radius", "rho_min",
    "rho_max",    "u_dev_l2",       "rho_dev_c0",   "sup_abs_U",      "sup_abs_W",
    "max_amp",    "pressure_l1",    "m1",           "m2",             "theta_min",
    "theta_max"};

inline std::array<double, 21> record_values(const DiagnosticsRecord& r) {
    return {r.t,          r.mass_fluid, r.mass_kinetic, r.momentum_total, r.energy,
            r.dissipation, r.rel_entropy, r.w1_upper,   r.support_radius, r.rho_min,
            r.rho_max,    r.u_dev_l2,   r.rho_dev_c0,   r.sup_abs_U,      r.sup_abs_W,
            r.max_amp,    r.pressure_l1, r.m1,          r.m2,             r.theta_min,
            r.theta_max};
}

// ---------------------------------------------------------------------------

/// Equilibrium constants fixed by the conserved totals of the initial data.
struct Equilibrium {
    double u_s = 0;
    double rho_bar = 0;
    double mass_fluid = 0;
    double mass_kinetic = 0;
};

inline Equilibrium equilibrium_velocity(const SystemState& sys, const Grid1D& g) {
    if (!g.periodic())
        throw Error(ErrorKind::DomainMismatch, "equilibrium velocity is defined on the torus");
    const auto& f = sys.fluid;
    Field m(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) m[i] = f.rho[i] * f.u[i];
    Equilibrium eq;
    eq.mass_fluid = integrate(g, f.rho);
    eq.mass_kinetic = kinetic_mass(sys.cloud);
    const double total = eq.mass_fluid + eq.mass_kinetic;
    if (!(total > 0.0)) throw Error(ErrorKind::ZeroTotalMass, "total mass vanishes");
    eq.u_s = (integrate(g, m) + kinetic_momentum(sys.cloud)) / total;
    eq.rho_bar = eq.mass_fluid / g.length();
    return eq;
}

/// A (rho^g - r^g - g r^(g-1) (rho - r)) / (g - 1), clamped at zero.
inline double pi_gamma(double rho, double ref, const PhysParams& p) {
    const double g = p.gamma;
    const double rg = std::pow(ref, g);
    double val = (std::pow(rho, g) - rg - g * (rg / ref) * (rho - ref)) * p.A / (g - 1.0);
    return val < 0.0 ? 0.0 : val;
}

namespace detail {

/// sum over faces of mu_face ((u_r - u_l)/dx)^2 dx, matching the viscous
/// operator of the solver (ghost u = 0 on the line).
inline double viscous_dissipation(const SystemState& sys, const Grid1D& g, const PhysParams& p) {
    const int n = g.n;
    Field mu_face = face_viscosity(g, p, sys.fluid.rho);
    GhostView U{sys.fluid.u, 0.0, g.periodic(), n};
    const int last = g.periodic() ? n - 1 : n;
    double s = 0.0;
    for (int k = 0; k <= last; ++k) {
        double du = (U[k] - U[k - 1]) / g.dx;
        s += mu_face[k] * du * du;
    }
    return s * g.dx;
}

inline double drag_dissipation(const SystemState& sys, const Grid1D& g, const PhysParams& p) {
    const auto& c = sys.cloud;
    const double inv_dx = 1.0 / g.dx;
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        auto st = locate(g, inv_dx, c.x[k]);
        const auto& rho = sys.fluid.rho;
        const auto& u = sys.fluid.u;
        double r = rho[st.i0] + st.frac * (rho[st.i1] - rho[st.i0]);
        double uu = u[st.i0] + st.frac * (u[st.i1] - u[st.i0]);
        double rel = uu - c.v[k];
        s += c.w[k] * r * rel * rel;
    }
    return p.kappa * s;
}

} // namespace detail

struct EnergyDissipation {
    double energy = 0;
    double dissipation = 0;
};

/// Torus: E = int (rho u^2/2 + A rho^g/(g-1)) + sum w v^2/2.
/// Line:  the pressure part is replaced by int Pi_gamma(rho | rho_tilde).
/// D = int mu(rho) u_x^2 + kappa sum w rho(X) (u(X) - v)^2.
inline EnergyDissipation energy_and_dissipation(const SystemState& sys, const Grid1D& g,
                                                const PhysParams& p) {
    const auto& f = sys.fluid;
    double fluid = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double internal = g.periodic() ? p.A * std::pow(f.rho[i], p.gamma) / (p.gamma - 1.0)
                                       : pi_gamma(f.rho[i], p.rho_tilde, p);
        fluid += 0.5 * f.rho[i] * f.u[i] * f.u[i] + internal;
    }
    double kin = 0.0;
    for (std::size_t k = 0; k < sys.cloud.size(); ++k)
        kin += 0.5 * sys.cloud.w[k] * sys.cloud.v[k] * sys.cloud.v[k];
    EnergyDissipation ed;
    ed.energy = fluid * g.dx + kin;
    ed.dissipation = detail::viscous_dissipation(sys, g, p) + detail::drag_dissipation(sys, g, p);
    return ed;
}

inline double fluid_momentum_mean(const SystemState& sys, const Grid1D& g, double fluid_mass) {
    Field m(sys.fluid.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = sys.fluid.rho[i] * sys.fluid.u[i];
    return integrate(g, m) / fluid_mass;
}

inline double kinetic_mean_velocity(const ParticleCloud& c) {
    double mk = kinetic_mass(c);
    return mk > 0.0 ? kinetic_momentum(c) / mk : 0.0;
}

/// Relative entropy about the equilibrium:
///   int (rho |u - m1|^2 / 2 + Pi_gamma(rho | rho_bar)) + sum w |v - m2|^2 / 2
///   + M_f M_k / (2 (M_f + M_k)) |m2 - m1|^2,
/// with M_f = rho_bar L the fluid mass and M_k the kinetic mass.
inline double relative_entropy(const SystemState& sys, const Grid1D& g, const PhysParams& p,
                               double /*u_s*/, double rho_bar) {
    if (!g.periodic())
        throw Error(ErrorKind::DomainMismatch, "relative entropy is defined on the torus");
    const double mf = rho_bar * g.length();
    const double m1 = fluid_momentum_mean(sys, g, mf);
    double fluid = 0.0;
    for (std::size_t i = 0; i < sys.fluid.size(); ++i) {
        double du = sys.fluid.u[i] - m1;
        fluid += 0.5 * sys.fluid.rho[i] * du * du + pi_gamma(sys.fluid.rho[i], rho_bar, p);
    }
    double e = fluid * g.dx;
    const double mk = kinetic_mass(sys.cloud);
    if (mk > 0.0) {
        const double m2 = kinetic_momentum(sys.cloud) / mk;
        double kin = 0.0;
        for (std::size_t k = 0; k < sys.cloud.size(); ++k) {
            double dv = sys.cloud.v[k] - m2;
            kin += 0.5 * sys.cloud.w[k] * dv * dv;
        }
        e += kin + mf * mk / (2.0 * (mf + mk)) * (m2 - m1) * (m2 - m1);
    }
    return e;
}

/// sum w |v - u_s|: the test-function bound on W1(f, n delta(v - u_s)).
inline double w1_upper(const ParticleCloud& c, double u_s) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c.w[k] * std::abs(c.v[k] - u_s);
    return s;
}

struct EffectiveVelocities {
    double sup_u_plus_I = 0; ///< sup |u + I(n)|
    double sup_U = 0;        ///< sup |u + I(n) + mu(rho) rho_x / rho^2|
    double sup_W = 0;        ///< sup |u + mu(rho) rho_x / rho^2|
};

/// On the line the primitive of n from x_min stands in for I(n).
inline EffectiveVelocities effective_velocities(const SystemState& sys, const Grid1D& g,
                                                const PhysParams& p, const Moments& mom) {
    const auto& f = sys.fluid;
    Field nI = g.periodic() ? nonlocal_I(g, mom.n) : cumulative_moment(mom.n, g);
    Field rx = ddx_central(g, f.rho);
    EffectiveVelocities ev;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double bd = viscosity(f.rho[i], p) * rx[i] / (f.rho[i] * f.rho[i]);
        double ui = f.u[i] + nI[i];
        ev.sup_u_plus_I = std::max(ev.sup_u_plus_I, std::abs(ui));
        ev.sup_U = std::max(ev.sup_U, std::abs(ui + bd));
        ev.sup_W = std::max(ev.sup_W, std::abs(f.u[i] + bd));
    }
    return ev;
}

inline EffectiveVelocities effective_velocities(const SystemState& sys, const Grid1D& g,
                                                const PhysParams& p) {
    return effective_velocities(sys, g, p, deposit_moments(sys.cloud, g));
}

/// Q = 1/2 sum w (|xA - xB|^2 + |vA - vB|^2) for index-paired clouds; torus
/// position differences use the minimal image.
inline double q_divergence(const ParticleCloud& a, const ParticleCloud& b, const Grid1D& g) {
    if (a.size() != b.size())
        throw Error(ErrorKind::CloudMismatch, std::to_string(a.size()) + " vs " +
                                                  std::to_string(b.size()) + " particles");
    const double L = g.length();
    double q = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double dx = a.x[k] - b.x[k];
        if (g.periodic()) dx -= L * std::round(dx / L);
        double dv = a.v[k] - b.v[k];
        q += a.w[k] * (dx * dx + dv * dv);
    }
    return 0.5 * q;
}

// ---------------------------------------------------------------------------

struct DecayFit {
    std::string metric;
    double t_start = 0;
    double t_end = 0;
    double rate = 0;      ///< minus the slope of ln(value) against t
    double r_squared = 0;
    int n_samples = 0;
};

/// Least-squares line through (t, ln value) for samples inside the window.
/// Values <= 1e-300 are excluded.
inline DecayFit fit_decay(std::span<const std::pair<double, double>> series,
                          std::pair<double, double> window, std::string metric = "") {
    constexpr int kMinSamples = 5;
    int in_window = 0;
    std::vector<std::pair<double, double>> pts;
    for (auto [t, v] : series) {
        if (t < window.first || t > window.second) continue;
        ++in_window;
        if (v > 1e-300 && std::isfinite(v)) pts.emplace_back(t, std::log(v));
    }
    if (in_window < kMinSamples)
        throw Error(ErrorKind::InsufficientSamples,
                    std::to_string(in_window) + " samples in window");
    if (static_cast<int>(pts.size()) < kMinSamples)
        throw Error(ErrorKind::NonPositiveValues,
                    "only " + std::to_string(pts.size()) + " positive samples in window");
    const double n = static_cast<double>(pts.size());
    double mt = 0, my = 0;
    for (auto [t, y] : pts) {
        mt += t;
        my += y;
    }
    mt /= n;
    my /= n;
    double stt = 0, sty = 0, syy = 0;
    for (auto [t, y] : pts) {
        stt += (t - mt) * (t - mt);
        sty += (t - mt) * (y - my);
        syy += (y - my) * (y - my);
    }
    DecayFit fit;
    fit.metric = std::move(metric);
    fit.t_start = window.first;
    fit.t_end = window.second;
    fit.n_samples = static_cast<int>(pts.size());
    const double slope = stt > 0 ? sty / stt : 0.0;
    fit.rate = -slope;
    if (syy <= 1e-30 * std::max(1.0, my * my * n)) {
        fit.r_squared = 1.0;
    } else {
        double ssres = 0;
        for (auto [t, y] : pts) {
            double r = y - (my + slope * (t - mt));
            ssres += r * r;
        }
        fit.r_squared = std::clamp(1.0 - ssres / syy, 0.0, 1.0);
    }
    return fit;
}

// ---------------------------------------------------------------------------

/// Run-wide reference values used when evaluating records.
struct References {
    bool torus = true;
    double u_s = 0;          ///< centre for velocity deviations (0 on the line)
    double rho_bar = 1;      ///< equilibrium density (rho_tilde on the line)
    double mass_fluid0 = 0;  ///< initial fluid mass
    double jensen_bound = 0; ///< A M^g / L^(g-1)
};

inline References make_references(const SystemState& initial, const Grid1D& g,
                                  const PhysParams& p) {
    References r;
    r.torus = g.periodic();
    r.mass_fluid0 = integrate(g, initial.fluid.rho);
    if (r.torus) {
        Equilibrium eq = equilibrium_velocity(initial, g);
        r.u_s = eq.u_s;
        r.rho_bar = eq.rho_bar;
        r.jensen_bound = p.A * std::pow(r.mass_fluid0, p.gamma) / std::pow(g.length(), p.gamma - 1.0);
    } else {
        r.u_s = 0.0;
        r.rho_bar = p.rho_tilde;
        r.jensen_bound = 0.0;
    }
    return r;
}

inline DiagnosticsRecord make_record(const SystemState& sys, const Grid1D& g,
                                     const PhysParams& p, const References& ref) {
    const auto& f = sys.fluid;
    const auto& c = sys.cloud;
    DiagnosticsRecord r;
    r.t = sys.t();
    r.mass_fluid = integrate(g, f.rho);
    r.mass_kinetic = kinetic_mass(c);
    Field m(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) m[i] = f.rho[i] * f.u[i];
    const double fluid_mom = integrate(g, m);
    r.momentum_total = fluid_mom + kinetic_momentum(c);

    auto ed = energy_and_dissipation(sys, g, p);
    r.energy = ed.energy;
    r.dissipation = ed.dissipation;
    r.rel_entropy = ref.torus ? relative_entropy(sys, g, p, ref.u_s, ref.rho_bar) : ed.energy;
    r.w1_upper = w1_upper(c, ref.u_s);
    r.support_radius = support_radius(c, ref.u_s);

    auto [mn, mx] = std::minmax_element(f.rho.begin(), f.rho.end());
    r.rho_min = *mn;
    r.rho_max = *mx;
    double dev2 = 0.0, dev_c0 = 0.0, pl1 = 0.0;
    double th_min = 1e300, th_max = -1e300;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double du = f.u[i] - ref.u_s;
        dev2 += du * du;
        dev_c0 = std::max(dev_c0, std::abs(f.rho[i] - ref.rho_bar));
        pl1 += p.A * std::pow(f.rho[i], p.gamma);
        double th = theta(f.rho[i], p);
        th_min = std::min(th_min, th);
        th_max = std::max(th_max, th);
    }
    r.u_dev_l2 = std::sqrt(dev2 * g.dx);
    r.rho_dev_c0 = dev_c0;
    r.pressure_l1 = pl1 * g.dx;
    r.theta_min = th_min;
    r.theta_max = th_max;

    auto ev = effective_velocities(sys, g, p, deposit_moments(c, g));
    r.sup_abs_U = ev.sup_U;
    r.sup_abs_W = ev.sup_W;
    r.max_amp = max_amplitude(c);
    r.m1 = fluid_mom / ref.mass_fluid0;
    r.m2 = kinetic_mean_velocity(c);
    return r;
}

} // namespace nsv
