#pragma once

#include "nsv/config.hpp"
#include "nsv/core.hpp"
#include "nsv/coupling.hpp"
#include "nsv/csv.hpp"
#include "nsv/diagnostics.hpp"
#include "nsv/error.hpp"
#include "nsv/fluid.hpp"
#include "nsv/kinetic.hpp"
#include "nsv/mesh.hpp"
#include "nsv/oracles.hpp"
#include "nsv/system_state.hpp"
#include "nsv/verify.hpp"
