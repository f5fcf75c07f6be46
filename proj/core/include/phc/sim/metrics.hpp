#ifndef PHC_SIM_METRICS_HPP
#define PHC_SIM_METRICS_HPP

#include <map>
#include <string>
#include <vector>

#include "phc/event_log.hpp"

namespace phc::sim {

struct StepPoint {
  uint32_t epoch = 0;
  uint32_t step = 0;
  uint32_t attacker_active_accounts = 0;
  uint32_t honest_active_accounts = 0;
  uint64_t abusive_actions_total = 0;
};

struct ServiceMetrics {
  std::string service_id;
  /// active accounts per honest person at horizon end -> person count
  std::map<uint32_t, uint32_t> honest_accounts_histogram;
  uint32_t attacker_accounts_created = 0;
  uint32_t attacker_max_concurrent = 0;
  uint32_t attacker_active_at_end = 0;
  uint32_t suspensions = 0;
  uint32_t false_suspensions = 0;
  uint32_t replay_attempts_rejected = 0;
};

struct Metrics {
  Json config_echo;
  std::vector<ServiceMetrics> services;
  std::vector<StepPoint> timeseries;

  // sockpuppet scenario
  double ungated_attacker_share = 0.0;
  double gated_attacker_share = 0.0;

  // delegation scenario
  uint64_t delegation_abuse_count = 0;
  uint64_t delegations_issued = 0;
  uint64_t delegations_invalidated = 0;
  uint32_t unverified_agents = 0;

  uint64_t abusive_actions_total = 0;

  Json to_json() const;
  /// step,epoch,attacker_active,honest_active,abusive_actions
  std::string timeseries_csv() const;
};

}  // namespace phc::sim

#endif
