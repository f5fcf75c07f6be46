#ifndef PHC_SIM_CONFIG_HPP
#define PHC_SIM_CONFIG_HPP

#include <string>
#include <vector>

#include "phc/event_log.hpp"

namespace phc::sim {

/// Credential-availability regime of the whole ecosystem.
enum class Regime { unlimited, single_issuer, bounded };

std::string regime_to_string(Regime r);
Regime regime_from_string(std::string_view s);

/// Deliberately broken context derivations for mutation runs of the
/// linkage experiment. shared_ctx drops the service identity from the
/// pseudonym context; tag_reuse derives one global tag per credential.
enum class Mutation { none, shared_ctx, tag_reuse };

std::string mutation_to_string(Mutation m);
Mutation mutation_from_string(std::string_view s);

struct IssuerSpec {
  bool enforce_limit = true;
};

struct ServiceSpec {
  std::vector<uint32_t> accepted_issuers;  // indices into SimConfig::issuers
  uint32_t account_limit = 1;              // verified accounts per credential
  double catch_probability = 1.0;          // per abusive action
};

/// The paper's named threat behaviors, togglable per run.
struct AttackerStrategy {
  bool multi_issuer = true;
  bool revocation_churn = false;   // revoke + re-enroll after suspension
  bool challenge_replay = false;   // attempt to reuse consumed nonces
  uint32_t purchased_per_epoch = 0;  // credential market supply per attacker
  uint32_t sybil_budget = 0;  // enrollments/epoch at non-enforcing issuers
};

struct SimConfig {
  uint64_t seed = 0;
  uint32_t n_people = 10;
  uint32_t n_attackers = 1;
  std::vector<IssuerSpec> issuers = {IssuerSpec{}};
  std::vector<ServiceSpec> services = {ServiceSpec{{0}, 1, 1.0}};
  Regime regime = Regime::single_issuer;
  uint32_t epochs = 1;
  uint32_t steps_per_epoch = 1;
  std::string params_preset = "test-256";
  uint32_t cohort_capacity = 64;
  AttackerStrategy strategy;
  Mutation mutation = Mutation::none;

  // scenario knobs
  bool abuse_enabled = false;       // attackers violate rules each step
  uint32_t bot_multiplier = 10;     // unverified personas per attacker
  uint32_t delegations_per_person = 0;
  uint32_t abusive_agents_per_attacker = 0;
  uint32_t unverified_agents = 0;   // tracked, never asserted

  /// Enforce the structural invariants (regime vs issuer list shape).
  void validate() const;

  Json to_json() const;
  static SimConfig from_json(const Json& j);
};

}  // namespace phc::sim

#endif
