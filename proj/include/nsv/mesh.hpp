#pragma once

// Discrete calculus on the uniform 1D grid.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "nsv/core.hpp"
#include "nsv/error.hpp"

namespace nsv {

using Field = std::vector<double>;

struct Grid1D {
    DomainSpec domain;
    int n = 0;
    double dx = 0.0;
    std::vector<double> centers;

    Grid1D() = default;
    explicit Grid1D(const DomainSpec& d) : domain(d), n(d.cells), dx(d.dx()) {
        validate_domain(d);
        centers.resize(n);
        for (int i = 0; i < n; ++i) centers[i] = d.x_min() + (i + 0.5) * dx;
    }

    bool periodic() const { return domain.is_torus(); }
    double x_min() const { return domain.x_min(); }
    double x_max() const { return domain.x_max(); }
    double length() const { return domain.length(); }

    int wrap(int i) const { return ((i % n) + n) % n; }
};

/// Midpoint rule: sum g_i dx.
inline double integrate(const Grid1D& g, std::span<const double> f) {
    double s = 0.0;
    for (double v : f) s += v;
    return s * g.dx;
}

inline Field ddx_central(const Grid1D& g, std::span<const double> f) {
    const int n = g.n;
    Field out(n);
    const double inv2 = 0.5 / g.dx;
    if (g.periodic()) {
        for (int i = 0; i < n; ++i) out[i] = (f[g.wrap(i + 1)] - f[g.wrap(i - 1)]) * inv2;
    } else {
        for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2;
        out[0] = (f[1] - f[0]) / g.dx;
        out[n - 1] = (f[n - 1] - f[n - 2]) / g.dx;
    }
    return out;
}

/// First-order derivative biased against the wind: backward where wind >= 0.
inline Field ddx_upwind(const Grid1D& g, std::span<const double> f,
                        std::span<const double> wind) {
    const int n = g.n;
    Field out(n);
    for (int i = 0; i < n; ++i) {
        bool backward = wind[i] >= 0.0;
        int a, b;
        if (g.periodic()) {
            a = backward ? g.wrap(i - 1) : i;
            b = backward ? i : g.wrap(i + 1);
        } else {
            if (backward && i == 0) backward = false;
            if (!backward && i == n - 1) backward = true;
            a = backward ? i - 1 : i;
            b = backward ? i : i + 1;
        }
        out[i] = (f[b] - f[a]) / g.dx;
    }
    return out;
}

/// Cumulative midpoint integral from the left edge to each cell centre.
inline Field cumulative_midpoint(const Grid1D& g, std::span<const double> f) {
    Field c(g.n);
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i) {
        c[i] = acc + 0.5 * f[i] * g.dx;
        acc += f[i] * g.dx;
    }
    return c;
}

/// I(g)(x) = int_0^x g - (1/L) int_0^L int_0^y g, discretised at cell
/// centres. Output has exactly zero grid mean up to round-off.
inline Field nonlocal_I(const Grid1D& g, std::span<const double> f) {
    if (!g.periodic())
        throw Error(ErrorKind::DomainMismatch, "nonlocal_I is defined on the torus only");
    Field c = cumulative_midpoint(g, f);
    double mean = 0.0;
    for (double v : c) mean += v;
    mean /= g.n;
    for (double& v : c) v -= mean;
    return c;
}

/// theta(rho) = int_1^rho mu(s)/s ds.
inline double theta(double rho, const PhysParams& p) {
    if (!(rho > 0.0)) throw Error(ErrorKind::NonPositiveDensity, "theta needs rho > 0");
    double lr = std::log(rho);
    if (p.beta == 0.0) return (p.mu0 + p.mu1) * lr;
    return p.mu0 * lr + p.mu1 * std::expm1(p.beta * lr) / p.beta;
}

inline Field theta(std::span<const double> rho, const PhysParams& p) {
    Field out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = theta(rho[i], p);
    return out;
}

namespace detail {
inline Field thomas(std::span<const double> a, std::span<const double> b,
                    std::span<const double> c, std::span<const double> d, double tiny) {
    const std::size_t n = b.size();
    Field cp(n), dp(n), x(n);
    double piv = b[0];
    if (std::abs(piv) < tiny) throw Error(ErrorKind::SingularSystem, "zero pivot in row 0");
    cp[0] = c[0] / piv;
    dp[0] = d[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = b[i] - a[i] * cp[i - 1];
        if (std::abs(piv) < tiny)
            throw Error(ErrorKind::SingularSystem, "zero pivot in row " + std::to_string(i));
        cp[i] = c[i] / piv;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / piv;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
}
} // namespace detail

/// Solves lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// In cyclic mode lower[0] couples to x[n-1] and upper[n-1] to x[0]; the wrap
/// is removed by a Sherman-Morrison rank-one correction.
inline Field solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                               std::span<const double> upper, std::span<const double> rhs,
                               bool cyclic) {
    const std::size_t n = diag.size();
    double dmax = 0.0;
    for (double v : diag) dmax = std::max(dmax, std::abs(v));
    const double tiny = 1e-14 * dmax;
    if (dmax == 0.0) throw Error(ErrorKind::SingularSystem, "all-zero diagonal");
    if (!cyclic || n < 3) return detail::thomas(lower, diag, upper, rhs, tiny);

    const double alpha = upper[n - 1]; // row n-1, column 0
    const double beta = lower[0];      // row 0, column n-1
    const double gam = -diag[0];
    Field bb(diag.begin(), diag.end());
    bb[0] = diag[0] - gam;
    bb[n - 1] = diag[n - 1] - alpha * beta / gam;
    Field y = detail::thomas(lower, bb, upper, rhs, tiny);
    Field uvec(n, 0.0);
    uvec[0] = gam;
    uvec[n - 1] = alpha;
    Field z = detail::thomas(lower, bb, upper, uvec, tiny);
    const double fact_num = y[0] + beta * y[n - 1] / gam;
    const double fact_den = 1.0 + z[0] + beta * z[n - 1] / gam;
    if (std::abs(fact_den) < 1e-300) throw Error(ErrorKind::SingularSystem, "cyclic correction");
    const double fact = fact_num / fact_den;
    for (std::size_t i = 0; i < n; ++i) y[i] -= fact * z[i];
    return y;
}

} // namespace nsv
