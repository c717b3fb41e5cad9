#pragma once

// Umbrella header: the whole library in one include.

#include "vhsim/errors.hpp"     // IWYU pragma: export
#include "vhsim/topsis.hpp"     // IWYU pragma: export
#include "vhsim/network.hpp"    // IWYU pragma: export
#include "vhsim/handover.hpp"   // IWYU pragma: export
#include "vhsim/sim.hpp"        // IWYU pragma: export
#include "vhsim/scenario_io.hpp"  // IWYU pragma: export
#include "vhsim/report.hpp"     // IWYU pragma: export
