#pragma once

// Domain types shared by every module: physical constants, the computational
// domain, the fluid and particle states, and the scenario description that
// reproduces a run.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nsv/error.hpp"

namespace nsv {

/// Closure constants: P(rho) = A rho^gamma, mu(rho) = mu0 + mu1 rho^beta,
/// drag F = kappa rho (u - v). rho_tilde is the far-field density (line only).
struct PhysParams {
    double A = 1.0;
    double gamma = 2.0;
    double mu0 = 1.0;
    double mu1 = 1.0;
    double beta = 0.0;
    double kappa = 1.0;
    double rho_tilde = 1.0;
};

inline void validate_params(const PhysParams& p) {
    auto finite = [](const char* name, double v) {
        if (!std::isfinite(v)) throw InvalidParameter(name, v, "finite");
    };
    finite("A", p.A);
    finite("gamma", p.gamma);
    finite("mu0", p.mu0);
    finite("mu1", p.mu1);
    finite("beta", p.beta);
    finite("kappa", p.kappa);
    finite("rho_tilde", p.rho_tilde);
    if (!(p.A > 0)) throw InvalidParameter("A", p.A, ">0");
    if (!(p.gamma > 1)) throw InvalidParameter("gamma", p.gamma, ">1");
    if (!(p.mu0 > 0)) throw InvalidParameter("mu0", p.mu0, ">0");
    if (!(p.mu1 >= 0)) throw InvalidParameter("mu1", p.mu1, ">=0");
    if (!(p.beta >= 0)) throw InvalidParameter("beta", p.beta, ">=0");
    if (!(p.kappa > 0)) throw InvalidParameter("kappa", p.kappa, ">0");
    if (!(p.rho_tilde > 0)) throw InvalidParameter("rho_tilde", p.rho_tilde, ">0");
}

struct Torus {
    double length = 1.0;
};

struct Line {
    double x_min = -1.0;
    double x_max = 1.0;
};

struct DomainSpec {
    std::variant<Torus, Line> kind = Torus{};
    int cells = 64;

    bool is_torus() const { return std::holds_alternative<Torus>(kind); }
    double x_min() const { return is_torus() ? 0.0 : std::get<Line>(kind).x_min; }
    double x_max() const {
        return is_torus() ? std::get<Torus>(kind).length : std::get<Line>(kind).x_max;
    }
    double length() const { return x_max() - x_min(); }
    double dx() const { return length() / cells; }
};

inline void validate_domain(const DomainSpec& d) {
    if (d.cells < 8) throw InvalidParameter("cells", d.cells, ">=8");
    if (d.is_torus()) {
        double L = std::get<Torus>(d.kind).length;
        if (!(L > 0) || !std::isfinite(L)) throw InvalidParameter("length", L, ">0");
    } else {
        const auto& l = std::get<Line>(d.kind);
        if (!std::isfinite(l.x_min) || !std::isfinite(l.x_max) || !(l.x_min < l.x_max))
            throw Error(ErrorKind::InvalidDomain, "line interval must satisfy x_min < x_max");
    }
}

/// Cell-centred density and velocity; rho[i] > 0 everywhere.
struct FluidState {
    std::vector<double> rho;
    std::vector<double> u;
    double t = 0.0;

    std::size_t size() const { return rho.size(); }
};

/// Weighted Lagrangian sample of f(x, v, t). Weights carry the measure
/// f dv dx and never change; the amplitude follows f along characteristics
/// and is stored as its logarithm because it grows like exp(kappa int rho).
struct ParticleCloud {
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> w;
    std::vector<double> log_amp;
    double t = 0.0;

    std::size_t size() const { return x.size(); }
    bool empty() const { return x.empty(); }
    double amp(std::size_t i) const { return std::exp(log_amp[i]); }

    void reserve(std::size_t n) {
        x.reserve(n);
        v.reserve(n);
        w.reserve(n);
        log_amp.reserve(n);
    }
    void push_back(double xp, double vp, double wp, double ampp) {
        x.push_back(xp);
        v.push_back(vp);
        w.push_back(wp);
        log_amp.push_back(std::log(ampp));
    }
};

// ---------------------------------------------------------------------------
// Initial-data recipes
// ---------------------------------------------------------------------------

enum class Profile { Constant, Sine, Bump };

/// base + amp * sin(2 pi k (x - x_min) / L)  (Sine)
/// base + amp * exp(-((x - center) / width)^2)  (Bump)
struct FieldRecipe {
    Profile profile = Profile::Constant;
    double base = 1.0;
    double amp = 0.0;
    int wavenumber = 1;
    double center = 0.0;
    double width = 1.0;

    double operator()(double x, const DomainSpec& d) const {
        switch (profile) {
        case Profile::Constant: return base;
        case Profile::Sine:
            return base + amp * std::sin(2.0 * std::numbers::pi * wavenumber *
                                         (x - d.x_min()) / d.length());
        case Profile::Bump: {
            double z = (x - center) / width;
            return base + amp * std::exp(-z * z);
        }
        }
        return base;
    }
};

enum class KineticProfile { None, Box, TwoStream, Smooth };

/// f0(x, v). When `mass` > 0 the level is chosen so that the exact integral
/// of f0 equals `mass`; otherwise `level` is used as given.
///   Box:       level on [x_lo, x_hi] x [v_lo, v_hi]
///   TwoStream: level on [x_lo, x_hi] x (|v - vb| <= hw  or  |v + vb| <= hw)
///   Smooth:    level (1 + mod sin(2 pi (x - x_min)/L)) cos^2(pi (v - vc) / (2 hw))
///              for |v - vc| <= hw, over the whole domain
struct KineticRecipe {
    KineticProfile profile = KineticProfile::None;
    double mass = 0.0;
    double level = 1.0;
    double x_lo = -1e300;
    double x_hi = 1e300;
    double v_lo = -0.5;
    double v_hi = 0.5;
    double beam_velocity = 0.5;
    double half_width = 0.25;
    double v_center = 0.0;
    double modulation = 0.0;

    double clipped_x_lo(const DomainSpec& d) const { return std::max(x_lo, d.x_min()); }
    double clipped_x_hi(const DomainSpec& d) const { return std::min(x_hi, d.x_max()); }

    /// Exact integral of the profile with level = 1.
    double unit_integral(const DomainSpec& d) const {
        double lx = std::max(0.0, clipped_x_hi(d) - clipped_x_lo(d));
        switch (profile) {
        case KineticProfile::None: return 0.0;
        case KineticProfile::Box: return lx * std::max(0.0, v_hi - v_lo);
        case KineticProfile::TwoStream: return lx * 4.0 * half_width;
        case KineticProfile::Smooth: return d.length() * half_width;
        }
        return 0.0;
    }

    double effective_level(const DomainSpec& d) const {
        if (mass > 0.0) {
            double unit = unit_integral(d);
            return unit > 0.0 ? mass / unit : 0.0;
        }
        return level;
    }

    /// Largest |v| where f0 may be nonzero.
    double velocity_extent() const {
        switch (profile) {
        case KineticProfile::None: return 0.0;
        case KineticProfile::Box: return std::max(std::abs(v_lo), std::abs(v_hi));
        case KineticProfile::TwoStream: return std::abs(beam_velocity) + half_width;
        case KineticProfile::Smooth: return std::abs(v_center) + half_width;
        }
        return 0.0;
    }

    double operator()(double x, double v, const DomainSpec& d, double lvl) const {
        switch (profile) {
        case KineticProfile::None: return 0.0;
        case KineticProfile::Box:
            if (x < clipped_x_lo(d) || x > clipped_x_hi(d)) return 0.0;
            return (v >= v_lo && v <= v_hi) ? lvl : 0.0;
        case KineticProfile::TwoStream:
            if (x < clipped_x_lo(d) || x > clipped_x_hi(d)) return 0.0;
            return (std::abs(v - beam_velocity) <= half_width ||
                    std::abs(v + beam_velocity) <= half_width)
                       ? lvl
                       : 0.0;
        case KineticProfile::Smooth: {
            double dv = v - v_center;
            if (std::abs(dv) > half_width) return 0.0;
            double c = std::cos(std::numbers::pi * dv / (2.0 * half_width));
            double sx = std::sin(2.0 * std::numbers::pi * (x - d.x_min()) / d.length());
            return lvl * (1.0 + modulation * sx) * c * c;
        }
        }
        return 0.0;
    }
};

struct InitRecipe {
    FieldRecipe rho{Profile::Constant, 1.0};
    FieldRecipe u{Profile::Constant, 0.0};
    KineticRecipe f;
    /// Cells of the particle lattice; 0 means "same as the grid". Lets runs
    /// at different grid resolutions share one particle lattice.
    int lattice_cells = 0;
    /// Uniform position jitter in units of the lattice spacing (uses seed).
    double jitter = 0.0;
    /// Name of a manufactured forcing case ("" for none).
    std::string manufactured;
    /// Permits mu1 = 0, reserved for oracle comparisons.
    bool oracle_test = false;
};

enum class CouplingMode { Strang, Picard };

struct Scenario {
    std::string name = "custom";
    DomainSpec domain;
    PhysParams params;
    InitRecipe init;
    int particles_per_cell = 16;
    int v_cells = 32;
    double v_support = 1.0;
    /// Fixed time step; 0 selects dt_cfl_fraction * cfl_dt(initial state).
    double dt = 0.0;
    double dt_cfl_fraction = 0.5;
    double t_end = 1.0;
    CouplingMode coupling = CouplingMode::Strang;
    double picard_tol = 1e-10;
    int picard_max_iter = 20;
    int output_every = 10;
    std::uint64_t seed = 0;
};

inline void validate_scenario(const Scenario& s) {
    validate_domain(s.domain);
    validate_params(s.params);
    if (s.params.mu1 == 0.0 && !s.init.oracle_test)
        throw InvalidParameter("mu1", 0.0, ">0");
    if (!(s.dt >= 0) || !std::isfinite(s.dt)) throw InvalidParameter("dt", s.dt, ">0");
    if (s.dt == 0.0 && !(s.dt_cfl_fraction > 0))
        throw InvalidParameter("dt_cfl_fraction", s.dt_cfl_fraction, ">0");
    if (!(s.t_end >= 0) || !std::isfinite(s.t_end))
        throw InvalidParameter("t_end", s.t_end, ">=0");
    if (!(s.v_support > 0)) throw InvalidParameter("v_support", s.v_support, ">0");
    if (s.particles_per_cell < 1)
        throw InvalidParameter("particles_per_cell", s.particles_per_cell, ">0");
    if (s.v_cells < 1) throw InvalidParameter("v_cells", s.v_cells, ">0");
    if (s.output_every < 1) throw InvalidParameter("output_every", s.output_every, ">0");
    if (!(s.picard_tol > 0)) throw InvalidParameter("picard_tol", s.picard_tol, ">0");
    if (s.picard_max_iter < 1)
        throw InvalidParameter("picard_max_iter", s.picard_max_iter, ">0");
    if (s.init.lattice_cells < 0)
        throw InvalidParameter("init.lattice_cells", s.init.lattice_cells, ">=0");
    if (s.init.f.velocity_extent() > s.v_support)
        throw InvalidParameter("v_support", s.v_support,
                               ">=" + detail::fmt_value(s.init.f.velocity_extent()));
}

/// Samples the recipe: fluid fields at cell centres, particles on a regular
/// (x, v) lattice with w = f0 dx dv and amp = f0; zero-weight points dropped.
inline std::pair<FluidState, ParticleCloud> build_initial(const Scenario& s) {
    validate_scenario(s);
    const DomainSpec& d = s.domain;
    const int n = d.cells;
    const double dx = d.dx();

    FluidState fluid;
    fluid.rho.resize(n);
    fluid.u.resize(n);
    for (int i = 0; i < n; ++i) {
        double xc = d.x_min() + (i + 0.5) * dx;
        fluid.rho[i] = s.init.rho(xc, d);
        fluid.u[i] = s.init.u(xc, d);
        if (!(fluid.rho[i] > 0.0) || !std::isfinite(fluid.rho[i]))
            throw Error(ErrorKind::NonPositiveInitialDensity,
                        "rho0 = " + detail::fmt_value(fluid.rho[i]) + " at x = " +
                            detail::fmt_value(xc));
        if (!std::isfinite(fluid.u[i]))
            throw Error(ErrorKind::InvalidParameter, "u0 not finite");
    }

    ParticleCloud cloud;
    const KineticRecipe& f = s.init.f;
    if (f.profile == KineticProfile::None) return {std::move(fluid), std::move(cloud)};

    const int lattice = s.init.lattice_cells > 0 ? s.init.lattice_cells : n;
    const long nx = static_cast<long>(lattice) * s.particles_per_cell;
    const int nv = s.v_cells;
    const double hx = d.length() / static_cast<double>(nx);
    const double hv = 2.0 * s.v_support / nv;
    const double lvl = f.effective_level(d);

    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);

    cloud.reserve(static_cast<std::size_t>(nx) * nv);
    for (long j = 0; j < nx; ++j) {
        double xp = d.x_min() + (j + 0.5) * hx;
        for (int k = 0; k < nv; ++k) {
            double vp = -s.v_support + (k + 0.5) * hv;
            double f0 = f(xp, vp, d, lvl);
            if (!(f0 > 0.0)) continue;
            double xj = xp;
            if (s.init.jitter > 0.0) {
                xj += s.init.jitter * hx * jitter(rng);
                if (d.is_torus()) {
                    if (xj < d.x_min()) xj += d.length();
                    if (xj >= d.x_max()) xj -= d.length();
                }
            }
            cloud.push_back(xj, vp, f0 * hx * hv, f0);
        }
    }
    if (cloud.empty())
        throw Error(ErrorKind::EmptyCloud, "every lattice weight vanished for a kinetic recipe");
    return {std::move(fluid), std::move(cloud)};
}

} // namespace nsv
