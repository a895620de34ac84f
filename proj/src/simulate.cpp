#include "fmo/simulate.hpp"

#include "fmo/lindblad_oracle.hpp"
#include "fmo/meanfield.hpp"
#include "fmo/semiclassical.hpp"

namespace fmo {

Trajectory simulate(const RunConfig& config, const SiteNetwork& h, const DecoherenceSpec& rates) {
    switch (config.theory) {
    case Theory::semiclassical: return simulate_semiclassical(config, h, rates);
    case Theory::meanfield: return simulate_meanfield(config, h, rates);
    case Theory::oracle: return simulate_oracle(config, h, rates).trajectory;
    }
    throw DomainError("simulate: unknown theory");
}

} // namespace fmo
