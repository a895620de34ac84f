#pragma once

#include "fmo/integrator.hpp"
#include "fmo/model.hpp"

namespace fmo {

// Dispatches on config.theory. The oracle path drops its factorization report.
Trajectory simulate(const RunConfig& config, const SiteNetwork& h, const DecoherenceSpec& rates);

} // namespace fmo
