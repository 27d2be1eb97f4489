#pragma once

// Advancing the coupled fluid-particle system: Strang splitting (default) and
// a Picard fixed-point iteration of the coupled step (validation mode), plus
// the run driver that streams diagnostic records.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>

#include "nsv/core.hpp"
#include "nsv/diagnostics.hpp"
#include "nsv/error.hpp"
#include "nsv/fluid.hpp"
#include "nsv/kinetic.hpp"
#include "nsv/mesh.hpp"
#include "nsv/oracles.hpp"
#include "nsv/system_state.hpp"

namespace nsv {

/// Half kinetic push in the fields at t, deposit, full fluid step with those
/// moments, half kinetic push in the fields at t + dt. Writes into `out`,
/// reusing its storage; `sys` is left untouched.
inline void step_strang_into(const SystemState& sys, SystemState& out, const Grid1D& g,
                             const PhysParams& p, double dt,
                             const FluidForcing* forcing = nullptr) {
    push_particles_into(sys.cloud, out.cloud, sys.fluid, g, p, 0.5 * dt);
    Moments mom = deposit_moments(out.cloud, g);
    out.fluid = fluid_step(sys.fluid, mom, dt, g, p, forcing);
    push_particles_into(out.cloud, out.cloud, out.fluid, g, p, 0.5 * dt);
    out.cloud.t = out.fluid.t;
    out.step_index = sys.step_index + 1;
}

inline SystemState step_strang(const SystemState& sys, const Grid1D& g, const PhysParams& p,
                               double dt, const FluidForcing* forcing = nullptr) {
    SystemState out;
    step_strang_into(sys, out, g, p, dt, forcing);
    return out;
}

struct PicardReport {
    int iterations = 0;
    double residual = 0.0;
};

namespace detail {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = std::abs(a[i] - b[i]);
        if (!(d <= m)) m = d; // propagates NaN
    }
    return m;
}

} // namespace detail

/// Fixed-point iteration of the coupled step. Iterate k holds (rho^k, u^k)
/// and the end-of-step cloud^k. One sweep:
///   rho^{k+1} from continuity transported by the time-centred (rho, u)^k,
///   u^{k+1} from the momentum equation linearised about rho^k, with
///     viscosity and drag implicit and moments averaged between cloud^n
///     and cloud^k,
///   cloud^{k+1} pushed through the fields at t and (rho^k, u^k).
/// The starting iterate is the Strang-free fluid predictor; convergence is
/// declared when max(|rho^{k+1} - rho^k|, |u^{k+1} - u^k|) < tol.
inline SystemState step_picard(const SystemState& sys, const Grid1D& g, const PhysParams& p,
                               double dt, double tol, int max_iter,
                               PicardReport* report = nullptr) {
    const int n = g.n;
    const FluidState& f0 = sys.fluid;
    const Moments mom0 = deposit_moments(sys.cloud, g);
    ParticleCloud mid;
    push_particles_into(sys.cloud, mid, f0, g, p, 0.5 * dt);
    Field m0(n);
    for (int i = 0; i < n; ++i) m0[i] = f0.rho[i] * f0.u[i];

    FluidState it;
    try {
        it = fluid_step(f0, mom0, dt, g, p);
    } catch (const Error&) {
        it = f0; // no usable predictor; start from the old state
        it.t = f0.t + dt;
    }
    ParticleCloud cloud_it;
    push_particles_into(mid, cloud_it, it, g, p, 0.5 * dt);

    ParticleCloud cloud_next;
    double residual = 0.0;
    for (int k = 1; k <= max_iter; ++k) {
        Moments mk = deposit_moments(cloud_it, g);
        Moments mhat{Field(n), Field(n)};
        FluidState centred;
        centred.rho.resize(n);
        centred.u.resize(n);
        for (int i = 0; i < n; ++i) {
            mhat.n[i] = 0.5 * (mom0.n[i] + mk.n[i]);
            mhat.nw[i] = 0.5 * (mom0.nw[i] + mk.nw[i]);
            centred.rho[i] = 0.5 * (f0.rho[i] + it.rho[i]);
            centred.u[i] = 0.5 * (f0.u[i] + it.u[i]);
        }

        Field er, em;
        detail::explicit_rates(g, p, centred.rho, centred.u, f0.t + 0.5 * dt, nullptr, er, em);
        FluidState next;
        next.rho.resize(n);
        Field rhs(n);
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            next.rho[i] = f0.rho[i] + dt * er[i];
            rhs[i] = m0[i] + dt * em[i];
            if (!(next.rho[i] > 0.0) || !std::isfinite(next.rho[i])) ok = false;
        }
        if (!ok) throw PicardDiverged(k, std::numeric_limits<double>::infinity());
        next.u = detail::implicit_solve(g, p, centred.rho, next.rho, mhat, rhs, dt);
        next.t = f0.t + dt;

        push_particles_into(mid, cloud_next, it, g, p, 0.5 * dt);

        residual = std::max(detail::max_abs_diff(next.rho, it.rho),
                            detail::max_abs_diff(next.u, it.u));
        it = std::move(next);
        std::swap(cloud_it, cloud_next);
        if (!std::isfinite(residual)) throw PicardDiverged(k, residual);
        if (residual < tol) {
            if (report) *report = {k, residual};
            cloud_it.t = it.t;
            return SystemState{std::move(it), std::move(cloud_it), sys.step_index + 1};
        }
    }
    throw PicardDiverged(max_iter, residual);
}

// ---------------------------------------------------------------------------

using RecordSink = std::function<void(const DiagnosticsRecord&)>;

/// The fixed step of a scenario: its explicit dt, or the configured fraction
/// of the advective (CFL) limit dx / max(|u| + c) of the initial state.
inline double resolve_dt(const Scenario& s, const FluidState& initial, const Grid1D& g) {
    if (s.dt > 0.0) return s.dt;
    return s.dt_cfl_fraction * advective_limit(initial, g, s.params);
}

inline std::optional<FluidForcing> scenario_forcing(const Scenario& s) {
    if (s.init.manufactured.empty()) return std::nullopt;
    return oracles::manufactured_fluid(s.init.manufactured, s.params).forcing;
}

inline bool all_finite(const FluidState& f) {
    for (double v : f.rho) if (!std::isfinite(v)) return false;
    for (double v : f.u) if (!std::isfinite(v)) return false;
    return true;
}

inline bool all_finite(const SystemState& s) {
    if (!all_finite(s.fluid)) return false;
    for (double v : s.cloud.x) if (!std::isfinite(v)) return false;
    for (double v : s.cloud.v) if (!std::isfinite(v)) return false;
    return true;
}

struct RunInfo {
    double dt = 0.0;
    long steps = 0;
    int max_picard_iterations = 0;
    References refs;
};

/// Builds the initial state and advances it to t_end with a fixed step (the
/// last step is shortened to land on t_end). A record is emitted at step 0,
/// every output_every steps and at t_end. On error the last good record is
/// flushed before the exception propagates.
///
/// Strang mode keeps the cloud at half steps: the closing half push of one
/// step and the opening half push of the next use the same fluid fields and
/// are taken as one push of the combined length. Output steps synchronise a
/// copy of the cloud with a half push, so the trajectory does not depend on
/// output_every.
inline SystemState run(const Scenario& scenario, const RecordSink& sink, RunInfo* info = nullptr) {
    auto [fluid0, cloud0] = build_initial(scenario);
    const Grid1D g(scenario.domain);
    const PhysParams& p = scenario.params;
    SystemState sys{std::move(fluid0), std::move(cloud0), 0};
    const References refs = make_references(sys, g, p);
    const double dt = resolve_dt(scenario, sys.fluid, g);
    const auto forcing = scenario_forcing(scenario);
    const FluidForcing* fptr = forcing ? &*forcing : nullptr;
    RunInfo local;
    local.dt = dt;
    local.refs = refs;

    const double t_end = scenario.t_end;
    const double t_tol = 1e-12 * std::max(1.0, t_end);
    auto step_size = [&](double t) {
        double h = std::min(dt, t_end - t);
        if (t_end - t - h < 1e-9 * dt) h = t_end - t;
        return h;
    };

    sink(make_record(sys, g, p, refs));
    long last_emitted = 0;
    SystemState next;
    ParticleCloud half;      // Strang: cloud at t + h/2 once `staggered`
    bool staggered = false;  // sys.cloud is stale while the cloud lives in `half`
    try {
        while (sys.t() < t_end - t_tol) {
            const double h = step_size(sys.t());
            if (scenario.coupling == CouplingMode::Strang) {
                if (!staggered) push_particles_into(sys.cloud, half, sys.fluid, g, p, 0.5 * h);
                staggered = true;
                Moments mom = deposit_moments(half, g);
                next.fluid = fluid_step(sys.fluid, mom, h, g, p, fptr);
                next.step_index = sys.step_index + 1;
                std::swap(sys.fluid, next.fluid);
                sys.step_index = next.step_index;
            } else {
                const double limit = advective_limit(sys.fluid, g, p);
                if (h > limit * (1.0 + 1e-12))
                    throw Error(ErrorKind::CFLViolation,
                                "dt = " + detail::fmt_value(h) + " exceeds advective limit " +
                                    detail::fmt_value(limit));
                PicardReport rep;
                next = step_picard(sys, g, p, h, scenario.picard_tol, scenario.picard_max_iter, &rep);
                local.max_picard_iterations = std::max(local.max_picard_iterations, rep.iterations);
                if (!all_finite(next.fluid))
                    throw Error(ErrorKind::BlowUpDetected,
                                "non-finite state at step " + std::to_string(next.step_index));
                std::swap(sys, next);
            }
            if (!all_finite(sys.fluid))
                throw Error(ErrorKind::BlowUpDetected,
                            "non-finite state at step " + std::to_string(sys.step_index));
            ++local.steps;
            const bool final = sys.t() >= t_end - t_tol;
            const bool emit = sys.step_index % scenario.output_every == 0 || final;
            if (staggered && emit) {
                push_particles_into(half, sys.cloud, sys.fluid, g, p, 0.5 * h);
                sys.cloud.t = sys.fluid.t;
            }
            if (staggered && !final) {
                const double h_next = step_size(sys.t());
                push_particles_into(half, half, sys.fluid, g, p, 0.5 * (h + h_next));
            }
            if (emit) {
                if (!all_finite(sys))
                    throw Error(ErrorKind::BlowUpDetected,
                                "non-finite state at step " + std::to_string(sys.step_index));
                sink(make_record(sys, g, p, refs));
                last_emitted = sys.step_index;
            }
        }
    } catch (...) {
        // A staggered Strang state has no synchronised cloud; its last good
        // record is the one already emitted.
        if (!staggered && last_emitted != sys.step_index && all_finite(sys))
            sink(make_record(sys, g, p, refs));
        if (info) *info = local;
        throw;
    }
    if (info) *info = local;
    return sys;
}

} // namespace nsv
