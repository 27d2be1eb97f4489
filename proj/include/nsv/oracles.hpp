#pragma once

// Independent reference solutions. Nothing here calls the solver modules:
// closed forms of the characteristic ODE, manufactured fluid solutions with
// hand-derived forcing, and fine trapezoid quadrature of recipe integrals.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>

#include "nsv/core.hpp"
#include "nsv/error.hpp"

namespace nsv::oracles {

struct DragSolution {
    double velocity;
    double amp_factor;
};

/// dV/dt = kappa rho_bar (u_bar - V), d(ln f)/dt = kappa rho_bar.
inline DragSolution drag_ode_closed_form(double rho_bar, double u_bar, double v0, double kappa,
                                         double t) {
    if (!(rho_bar > 0.0)) throw InvalidParameter("rho_bar", rho_bar, ">0");
    const double a = kappa * rho_bar * t;
    return {u_bar + (v0 - u_bar) * std::exp(-a), std::exp(a)};
}

/// Exact fields of a manufactured fluid solution and the source terms that
/// make them solve the forced continuity and momentum equations.
struct ManufacturedSolution {
    std::function<double(double x, double t)> rho;
    std::function<double(double x, double t)> u;
    /// (s_rho, s_m) at (x, t).
    std::function<std::pair<double, double>(double x, double t)> forcing;
};

/// Cases on the unit torus:
///   "traveling-wave": rho = 2 + sin(2 pi (x - t))/2,  u = sin(2 pi x) cos(t)/2
///   "constant":       rho = 2,  u = 1/2
///
/// With phi = 2 pi (x - t), k = 2 pi:
///   rho_t = -k b cos(phi),  rho_x = k b cos(phi)
///   u_t = -c sin(kx) sin t,  u_x = k c cos(kx) cos t,  u_xx = -k^2 c sin(kx) cos t
///   s_rho = rho_t + rho_x u + rho u_x
///   s_m   = rho_t u + rho u_t + rho_x u^2 + 2 rho u u_x + P'(rho) rho_x
///           - mu'(rho) rho_x u_x - mu(rho) u_xx
/// where P'(rho) = A g rho^(g-1), mu'(rho) = mu1 beta rho^(beta-1).
inline ManufacturedSolution manufactured_fluid(const std::string& case_id, const PhysParams& p) {
    constexpr double k = 2.0 * std::numbers::pi;
    if (case_id == "constant") {
        ManufacturedSolution s;
        s.rho = [](double, double) { return 2.0; };
        s.u = [](double, double) { return 0.5; };
        s.forcing = [](double, double) { return std::pair<double, double>{0.0, 0.0}; };
        return s;
    }
    if (case_id == "traveling-wave") {
        constexpr double a = 2.0, b = 0.5, c = 0.5;
        ManufacturedSolution s;
        s.rho = [=](double x, double t) { return a + b * std::sin(k * (x - t)); };
        s.u = [=](double x, double t) { return c * std::sin(k * x) * std::cos(t); };
        s.forcing = [=](double x, double t) {
            const double phi = k * (x - t);
            const double rho = a + b * std::sin(phi);
            const double rho_t = -k * b * std::cos(phi);
            const double rho_x = k * b * std::cos(phi);
            const double u = c * std::sin(k * x) * std::cos(t);
            const double u_t = -c * std::sin(k * x) * std::sin(t);
            const double u_x = k * c * std::cos(k * x) * std::cos(t);
            const double u_xx = -k * k * c * std::sin(k * x) * std::cos(t);
            const double dp = p.A * p.gamma * std::pow(rho, p.gamma - 1.0);
            const double mu = p.mu0 + p.mu1 * std::pow(rho, p.beta);
            const double dmu = p.beta == 0.0 ? 0.0 : p.mu1 * p.beta * std::pow(rho, p.beta - 1.0);
            const double s_rho = rho_t + rho_x * u + rho * u_x;
            const double s_m = rho_t * u + rho * u_t + rho_x * u * u + 2.0 * rho * u * u_x +
                               dp * rho_x - dmu * rho_x * u_x - mu * u_xx;
            return std::pair<double, double>{s_rho, s_m};
        };
        return s;
    }
    throw Error(ErrorKind::UnknownCase, "no manufactured case '" + case_id + "'");
}

/// Composite trapezoid rule on [a, b] with n intervals.
inline double fine_quadrature(const std::function<double(double)>& g, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = 0.5 * (g(a) + g(b));
    for (int i = 1; i < n; ++i) s += g(a + i * h);
    return s * h;
}

/// Tensor trapezoid rule on [xa, xb] x [va, vb] with nx x nv intervals.
inline double fine_quadrature(const std::function<double(double, double)>& g, double xa,
                              double xb, double va, double vb, int nx, int nv) {
    const double hx = (xb - xa) / nx;
    const double hv = (vb - va) / nv;
    double s = 0.0;
    for (int i = 0; i <= nx; ++i) {
        const double wx = (i == 0 || i == nx) ? 0.5 : 1.0;
        const double x = xa + i * hx;
        for (int j = 0; j <= nv; ++j) {
            const double wv = (j == 0 || j == nv) ? 0.5 : 1.0;
            s += wx * wv * g(x, va + j * hv);
        }
    }
    return s * hx * hv;
}

/// Reference integrals of a scenario's initial data.
struct RecipeIntegrals {
    double fluid_mass;
    double fluid_momentum;
    double kinetic_mass;
    double kinetic_momentum;
};

inline RecipeIntegrals recipe_integrals(const Scenario& s, int resolution) {
    const DomainSpec& d = s.domain;
    const double lvl = s.init.f.effective_level(d);
    RecipeIntegrals r{};
    r.fluid_mass = fine_quadrature([&](double x) { return s.init.rho(x, d); }, d.x_min(),
                                   d.x_max(), resolution);
    r.fluid_momentum = fine_quadrature(
        [&](double x) { return s.init.rho(x, d) * s.init.u(x, d); }, d.x_min(), d.x_max(),
        resolution);
    r.kinetic_mass = fine_quadrature(
        [&](double x, double v) { return s.init.f(x, v, d, lvl); }, d.x_min(), d.x_max(),
        -s.v_support, s.v_support, resolution, resolution);
    r.kinetic_momentum = fine_quadrature(
        [&](double x, double v) { return v * s.init.f(x, v, d, lvl); }, d.x_min(), d.x_max(),
        -s.v_support, s.v_support, resolution, resolution);
    return r;
}

} // namespace nsv::oracles
