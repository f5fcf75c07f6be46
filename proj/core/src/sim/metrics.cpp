#include "phc/sim/metrics.hpp"

#include <sstream>

namespace phc::sim {

Json Metrics::to_json() const {
  Json services_j = Json::array();
  for (const auto& s : services) {
    Json hist = Json::object();
    for (const auto& [accounts, people] : s.honest_accounts_histogram) {
      hist[std::to_string(accounts)] = people;
    }
    services_j.push_back(
        Json{{"service_id", s.service_id},
             {"honest_accounts_histogram", hist},
             {"attacker_accounts_created", s.attacker_accounts_created},
             {"attacker_max_concurrent", s.attacker_max_concurrent},
             {"attacker_active_at_end", s.attacker_active_at_end},
             {"suspensions", s.suspensions},
             {"false_suspensions", s.false_suspensions},
             {"replay_attempts_rejected", s.replay_attempts_rejected}});
  }
  Json series = Json::array();
  for (const auto& pt : timeseries) {
    series.push_back(Json{{"epoch", pt.epoch},
                          {"step", pt.step},
                          {"attacker_active", pt.attacker_active_accounts},
                          {"honest_active", pt.honest_active_accounts},
                          {"abusive_actions", pt.abusive_actions_total}});
  }
  return Json{{"config", config_echo},
              {"services", services_j},
              {"timeseries", series},
              {"ungated_attacker_share", ungated_attacker_share},
              {"gated_attacker_share", gated_attacker_share},
              {"delegation_abuse_count", delegation_abuse_count},
              {"delegations_issued", delegations_issued},
              {"delegations_invalidated", delegations_invalidated},
              {"unverified_agents", unverified_agents},
              {"abusive_actions_total", abusive_actions_total}};
}

std::string Metrics::timeseries_csv() const {
  std::ostringstream out;
  out << "epoch,step,attacker_active,honest_active,abusive_actions\n";
  for (const auto& pt : timeseries) {
    out << pt.epoch << ',' << pt.step << ',' << pt.attacker_active_accounts
        << ',' << pt.honest_active_accounts << ',' << pt.abusive_actions_total
        << '\n';
  }
  return out.str();
}

}  // namespace phc::sim
