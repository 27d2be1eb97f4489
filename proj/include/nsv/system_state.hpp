#pragma once

#include "nsv/core.hpp"

namespace nsv {

/// The coupled triple (rho, u, f) at one instant; fluid.t == cloud.t.
struct SystemState {
    FluidState fluid;
    ParticleCloud cloud;
    long step_index = 0;

    double t() const { return fluid.t; }
};

} // namespace nsv
