#pragma once

// Lagrangian transport of the particle cloud along the characteristics
//   dX/ds = V,  dV/ds = kappa rho(X) (u(X) - V),
// amplitude transport d(ln f)/ds = kappa rho(X), cloud-in-cell deposition of
// the moments n = int f dv and nw = int v f dv, and support tracking.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "nsv/core.hpp"
#include "nsv/error.hpp"
#include "nsv/fluid.hpp"
#include "nsv/mesh.hpp"

namespace nsv {

namespace detail {

/// Linear-interpolation stencil: value = (1 - frac) f[i0] + frac f[i1].
struct Stencil {
    int i0;
    int i1;
    double frac;
};

inline Stencil locate(const Grid1D& g, double inv_dx, double x) {
    const int n = g.n;
    double s = (x - g.x_min()) * inv_dx - 0.5;
    if (g.periodic()) {
        // Shift by n so truncation is a floor for positions within one period
        // of the domain; farther positions take the slow path.
        double sh = s + n;
        if (!(sh >= 0.0 && sh < 3.0 * n)) {
            double fl = std::floor(s);
            long long i0 = static_cast<long long>(fl) % n;
            if (i0 < 0) i0 += n;
            int i = static_cast<int>(i0);
            return {i, i + 1 == n ? 0 : i + 1, s - fl};
        }
        int i = static_cast<int>(sh);
        double frac = sh - i;
        i -= n;
        if (i < 0) i += n;
        else if (i >= n) i -= n;
        return {i, i + 1 == n ? 0 : i + 1, frac};
    }
    if (!(s > 0.0)) return {0, 0, 0.0};
    if (s >= n - 1) return {n - 1, n - 1, 0.0};
    int i0 = static_cast<int>(s);
    return {i0, i0 + 1, s - i0};
}

inline double wrap_position(const Grid1D& g, double x) {
    if (!g.periodic()) return x;
    const double L = g.length();
    const double x0 = g.x_min();
    if (x < x0 || x >= x0 + L) {
        x = x0 + std::fmod(x - x0, L);
        if (x < x0) x += L;
        if (x >= x0 + L) x -= L;
    }
    return x;
}

} // namespace detail

/// Piecewise-linear interpolation between bracketing cell centres. Periodic on
/// the torus; on the line, clamped to the edge values and OutOfDomain beyond
/// the two ghost cells.
inline double sample_field_at(std::span<const double> field, const Grid1D& g, double x) {
    if (!g.periodic() && (x < g.x_min() - 2.0 * g.dx || x > g.x_max() + 2.0 * g.dx))
        throw Error(ErrorKind::OutOfDomain, "x = " + detail::fmt_value(x));
    auto st = detail::locate(g, 1.0 / g.dx, detail::wrap_position(g, x));
    return (1.0 - st.frac) * field[st.i0] + st.frac * field[st.i1];
}

namespace detail {

/// Per-cell interpolation table: value at cell fraction s is a + s * da.
struct LerpCell {
    double r, dr, u, du;
};

inline std::vector<LerpCell> lerp_table(const FluidState& state, const Grid1D& g) {
    const int n = g.n;
    std::vector<LerpCell> t(n);
    for (int i = 0; i < n; ++i) {
        const int j = i + 1 < n ? i + 1 : (g.periodic() ? 0 : i);
        t[i] = {state.rho[i], state.rho[j] - state.rho[i], state.u[i], state.u[j] - state.u[i]};
    }
    return t;
}

} // namespace detail

/// One RK2 (midpoint) step of the characteristic ODE in frozen fields,
/// written into `out` (which may alias `in`). Weights are copied unchanged;
/// ln(amp) grows by kappa rho(X_mid) dt.
inline void push_particles_into(const ParticleCloud& in, ParticleCloud& out,
                                const FluidState& state, const Grid1D& g, const PhysParams& p,
                                double dt) {
    using detail::LerpCell, detail::Stencil, detail::locate, detail::wrap_position;
    const std::size_t np = in.size();
    if (&in != &out) {
        out.x.resize(np);
        out.v.resize(np);
        out.log_amp.resize(np);
        out.w = in.w;
    }
    const auto table = detail::lerp_table(state, g);
    const LerpCell* tab = table.data();
    const double inv_dx = 1.0 / g.dx;
    const double kdt = p.kappa * dt;
    const double hdt = 0.5 * dt;
    const double* xs = in.x.data();
    const double* vs = in.v.data();
    const double* la = in.log_amp.data();
    double* xo = out.x.data();
    double* vo = out.v.data();
    double* lo = out.log_amp.data();
    for (std::size_t k = 0; k < np; ++k) {
        const double x = xs[k];
        const double v = vs[k];
        const Stencil s1 = locate(g, inv_dx, x);
        const LerpCell& c1 = tab[s1.i0];
        const double r1 = c1.r + s1.frac * c1.dr;
        const double u1 = c1.u + s1.frac * c1.du;
        const double xm = x + hdt * v;
        const double vm = v + 0.5 * kdt * r1 * (u1 - v);
        const Stencil s2 = locate(g, inv_dx, xm);
        const LerpCell& c2 = tab[s2.i0];
        const double r2 = c2.r + s2.frac * c2.dr;
        const double u2 = c2.u + s2.frac * c2.du;
        xo[k] = wrap_position(g, x + dt * vm);
        vo[k] = v + kdt * r2 * (u2 - vm);
        lo[k] = la[k] + kdt * r2;
    }
    out.t = in.t + dt;
}

inline ParticleCloud push_particles(ParticleCloud cloud, const FluidState& state,
                                    const Grid1D& g, const PhysParams& p, double dt) {
    push_particles_into(cloud, cloud, state, g, p, dt);
    return cloud;
}

/// Cloud-in-cell deposition with the unit hat of width 2 dx. The total
/// weight and weighted velocity are preserved exactly (up to round-off).
inline Moments deposit_moments(const ParticleCloud& cloud, const Grid1D& g) {
    Moments m{Field(g.n, 0.0), Field(g.n, 0.0)};
    const double inv_dx = 1.0 / g.dx;
    const std::size_t np = cloud.size();
    for (std::size_t k = 0; k < np; ++k) {
        const auto st = detail::locate(g, inv_dx, cloud.x[k]);
        const double w = cloud.w[k];
        const double v = cloud.v[k];
        const double wb = st.frac * w;
        const double wa = w - wb;
        m.n[st.i0] += wa;
        m.nw[st.i0] += wa * v;
        m.n[st.i1] += wb;
        m.nw[st.i1] += wb * v;
    }
    for (int i = 0; i < g.n; ++i) {
        m.n[i] *= inv_dx;
        m.nw[i] *= inv_dx;
    }
    return m;
}

/// max |v_p - center| over particles with positive weight; 0 when empty.
inline double support_radius(const ParticleCloud& cloud, double center) {
    double r = 0.0;
    for (std::size_t k = 0; k < cloud.size(); ++k)
        if (cloud.w[k] > 0.0) r = std::max(r, std::abs(cloud.v[k] - center));
    return r;
}

/// Running integral of n from x_min through the right face of each cell
/// (line mode); the last entry is the total.
inline Field cumulative_moment(std::span<const double> n, const Grid1D& g) {
    if (g.periodic())
        throw Error(ErrorKind::DomainMismatch, "cumulative_moment is defined on the line only");
    Field c(g.n);
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i) {
        acc += n[i] * g.dx;
        c[i] = acc;
    }
    return c;
}

inline double max_amplitude(const ParticleCloud& cloud) {
    double m = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t k = 0; k < cloud.size(); ++k) {
        if (cloud.w[k] > 0.0) {
            m = std::max(m, cloud.log_amp[k]);
            any = true;
        }
    }
    return any ? std::exp(m) : 0.0;
}

inline double kinetic_mass(const ParticleCloud& cloud) {
    double s = 0.0;
    for (double w : cloud.w) s += w;
    return s;
}

inline double kinetic_momentum(const ParticleCloud& cloud) {
    double s = 0.0;
    for (std::size_t k = 0; k < cloud.size(); ++k) s += cloud.w[k] * cloud.v[k];
    return s;
}

} // namespace nsv
