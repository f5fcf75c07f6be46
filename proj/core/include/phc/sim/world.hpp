#ifndef PHC_SIM_WORLD_HPP
#define PHC_SIM_WORLD_HPP

#include "phc/sim/config.hpp"
#include "phc/sim/metrics.hpp"

namespace phc::sim {

/// Deterministic multi-agent run over real issuer / wallet /
/// relying-party code. No crypto is mocked; every account registration
/// is a full challenge -> presentation -> verification round trip.
Metrics run(const SimConfig& config);

/// Scenario wrappers: same engine, metrics emphasis per scenario.
Metrics scenario_sockpuppet(const SimConfig& config);
Metrics scenario_bot_suspension(const SimConfig& config);
Metrics scenario_delegation(const SimConfig& config);

}  // namespace phc::sim

#endif
