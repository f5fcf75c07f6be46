#include "phc/sim/world.hpp"

#include <algorithm>
#include <optional>

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/relying_party.hpp"

namespace phc::sim {

namespace {

constexpr std::string_view kScope = "account-registration";

struct Agent {
  std::string root_id;
  bool attacker = false;
  // issuer index -> live credential (attackers may also hold sybil or
  // purchased credentials, kept separately)
  std::map<uint32_t, Credential> creds;
  std::vector<Credential> extra_creds;  // sybil + purchased, with issuer idx
  std::vector<uint32_t> extra_issuers;
  std::set<uint32_t> churned_issuers_this_epoch;
};

struct Account {
  uint32_t service = 0;
  uint32_t issuer = 0;
  std::string tag_hex;
  size_t owner = 0;  // index into agents (harness bookkeeping only)
  bool attacker = false;
  bool active = true;
};

class World {
 public:
  explicit World(SimConfig config) : cfg_(std::move(config)) {
    cfg_.validate();
    auto preset = params_by_name(cfg_.params_preset);
    if (!preset) {
      throw std::invalid_argument("unknown params preset: " +
                                  cfg_.params_preset);
    }
    params_ = *preset;
    rng_ = Drbg(cfg_.seed);
  }

  Metrics run() {
    setup();
    for (uint32_t epoch = 1; epoch <= cfg_.epochs; ++epoch) {
      if (epoch > 1) rollover();
      enroll_all(epoch == 1);
      install_rings();
      if (epoch > 1) reverify_accounts();
      register_accounts();
      for (uint32_t step = 1; step <= cfg_.steps_per_epoch; ++step) {
        if (cfg_.abuse_enabled) abuse_step();
        if (cfg_.strategy.challenge_replay && step == 1) replay_probe();
        record_point(epoch, step);
      }
    }
    if (cfg_.delegations_per_person > 0) delegation_phase();
    return finalize();
  }

 private:
  // ---- setup ----------------------------------------------------------------

  void setup() {
    metrics_.services.resize(cfg_.services.size());
    for (uint32_t i = 0; i < cfg_.issuers.size(); ++i) {
      IssuerOptions opts;
      opts.cohort_capacity = cfg_.cohort_capacity;
      opts.enforce_one_per_person = cfg_.issuers[i].enforce_limit;
      issuers_.push_back(Issuer::create("issuer-" + std::to_string(i), params_,
                                        rng_.fork("issuer").u64(), opts));
    }
    for (uint32_t s = 0; s < cfg_.services.size(); ++s) {
      ServiceConfig sc;
      sc.service_id = "svc-" + std::to_string(s);
      sc.account_limit = cfg_.services[s].account_limit;
      sc.scopes = {std::string(kScope)};
      for (uint32_t idx : cfg_.services[s].accepted_issuers) {
        sc.accepted_issuers.push_back(
            AcceptedIssuer{issuers_[idx].id(), issuers_[idx].public_key()});
      }
      services_.push_back(
          RelyingParty::create(std::move(sc), params_, rng_.fork("svc").u64()));
    }
    for (uint32_t i = 0; i < cfg_.n_people; ++i) {
      agents_.push_back(Agent{"person-" + std::to_string(i), false, {}, {}, {}, {}});
    }
    for (uint32_t j = 0; j < cfg_.n_attackers; ++j) {
      agents_.push_back(
          Agent{"attacker-" + std::to_string(j), true, {}, {}, {}, {}});
    }
    agent_rng_ = rng_.fork("agents");
    roll_rng_ = rng_.fork("rolls");
  }

  Credential fresh_credential(uint32_t issuer_idx, const std::string& root_id,
                              std::optional<std::string> ticket = {}) {
    auto [kp, recovery] = create_identity(params_, agent_rng_);
    EnrollmentRequest req;
    req.root_id = root_id;
    req.y = kp.y;
    req.recovery_hash = sha256(recovery);
    req.reenroll_ticket = std::move(ticket);
    EnrollmentReceipt receipt = issuers_[issuer_idx].enroll(req);
    Credential cred;
    cred.issuer_id = issuers_[issuer_idx].id();
    cred.params_name = params_.name;
    cred.epoch = receipt.epoch;
    cred.keypair = kp;
    cred.cohort_index = receipt.cohort_index;
    cred.position = receipt.position;
    cred.recovery_code = recovery;
    return cred;
  }

  void reenroll_same_key(uint32_t issuer_idx, Agent& agent) {
    Credential& cred = agent.creds.at(issuer_idx);
    EnrollmentRequest req;
    req.root_id = agent.root_id;
    req.y = cred.keypair.y;
    req.recovery_hash = sha256(cred.recovery_code);
    EnrollmentReceipt receipt = issuers_[issuer_idx].enroll(req);
    cred.epoch = receipt.epoch;
    cred.cohort_index = receipt.cohort_index;
    cred.position = receipt.position;
  }

  void enroll_all(bool first_epoch) {
    for (size_t a = 0; a < agents_.size(); ++a) {
      Agent& agent = agents_[a];
      for (uint32_t i = 0; i < issuers_.size(); ++i) {
        if (agent.attacker && !cfg_.strategy.multi_issuer && i != 0) continue;
        bool unenforced = !cfg_.issuers[i].enforce_limit;
        if (agent.attacker && unenforced && cfg_.strategy.sybil_budget > 0) {
          // Broken check: the same root identifier enrolls repeatedly.
          for (uint32_t b = 0; b < cfg_.strategy.sybil_budget; ++b) {
            agent.extra_creds.push_back(fresh_credential(i, agent.root_id));
            agent.extra_issuers.push_back(i);
          }
          continue;
        }
        if (first_epoch) {
          agent.creds.emplace(i, fresh_credential(i, agent.root_id));
        } else {
          reenroll_same_key(i, agent);
        }
      }
      agent.churned_issuers_this_epoch.clear();
    }
  }

  void rollover() {
    for (auto& issuer : issuers_) issuer.advance_epoch();
    for (size_t a = 0; a < agents_.size(); ++a) {
      agents_[a].extra_creds.clear();
      agents_[a].extra_issuers.clear();
    }
  }

  void install_rings() {
    for (uint32_t s = 0; s < services_.size(); ++s) {
      for (uint32_t idx : cfg_.services[s].accepted_issuers) {
        services_[s].install_ring(issuers_[idx].current_ring());
      }
    }
  }

  // ---- account lifecycle ----------------------------------------------------

  uint32_t issuer_index_by_id(const std::string& issuer_id) const {
    for (uint32_t i = 0; i < issuers_.size(); ++i) {
      if (issuers_[i].id() == issuer_id) return i;
    }
    throw std::logic_error("unknown issuer id in sim");
  }

  bool service_accepts(uint32_t service, uint32_t issuer_idx) const {
    const auto& accepted = cfg_.services[service].accepted_issuers;
    return std::find(accepted.begin(), accepted.end(), issuer_idx) !=
           accepted.end();
  }

  std::string tag_hex_for(const Credential& cred, uint32_t service) const {
    PresentationContext ctx;
    ctx.issuer_id = cred.issuer_id;
    ctx.service_id = services_[service].config().service_id;
    ctx.scope = std::string(kScope);
    return int_to_hex(pseudonym_tag(params_, cred, ctx).v, params_.p_bytes());
  }

  /// Full wire-faithful registration: challenge, presentation, verify,
  /// register. Returns the tag hex on success, nullopt on a domain
  /// rejection (limit, suspension, stale...).
  std::optional<std::string> try_register(uint32_t service,
                                          const Credential& cred,
                                          size_t owner) {
    RelyingParty& rp = services_[service];
    Bytes challenge = rp.issue_challenge();
    PresentationContext ctx{cred.issuer_id, rp.config().service_id,
                            std::string(kScope), challenge};
    uint32_t issuer_idx = issuer_index_by_id(cred.issuer_id);
    try {
      Presentation pres = create_presentation(
          params_, cred, issuers_[issuer_idx].current_ring(), ctx, agent_rng_);
      GroupElement tag = rp.verify_presentation(pres, kScope, challenge);
      rp.register_account(cred.issuer_id, tag);
      std::string tag_hex_str = int_to_hex(tag.v, params_.p_bytes());
      accounts_.push_back(Account{service, issuer_idx, tag_hex_str, owner,
                                  agents_[owner].attacker, true});
      if (agents_[owner].attacker) {
        metrics_.services[service].attacker_accounts_created += 1;
      }
      return tag_hex_str;
    } catch (const PhcError&) {
      return std::nullopt;
    }
  }

  void register_accounts() {
    for (size_t a = 0; a < agents_.size(); ++a) {
      Agent& agent = agents_[a];
      for (uint32_t s = 0; s < services_.size(); ++s) {
        if (!agent.attacker) {
          if (has_active_account(a, s)) continue;
          // one verified account per honest person per service
          for (const auto& [issuer_idx, cred] : agent.creds) {
            if (!service_accepts(s, issuer_idx)) continue;
            if (try_register(s, cred, a)) break;
          }
          continue;
        }
        // attackers farm every credential up to each limit
        for (const auto& [issuer_idx, cred] : agent.creds) {
          if (!service_accepts(s, issuer_idx)) continue;
          while (try_register(s, cred, a)) {
          }
        }
        for (size_t e = 0; e < agent.extra_creds.size(); ++e) {
          if (!service_accepts(s, agent.extra_issuers[e])) continue;
          while (try_register(s, agent.extra_creds[e], a)) {
          }
        }
      }
    }
    update_concurrency_peaks();
  }

  bool has_active_account(size_t owner, uint32_t service) const {
    for (const auto& acct : accounts_) {
      if (acct.active && acct.owner == owner && acct.service == service) {
        return true;
      }
    }
    return false;
  }

  /// Epoch rollover: every surviving account must re-verify with a
  /// fresh presentation under the same pseudonym.
  void reverify_accounts() {
    for (auto& acct : accounts_) {
      if (!acct.active) continue;
      Agent& owner = agents_[acct.owner];
      auto it = owner.creds.find(acct.issuer);
      if (it == owner.creds.end()) {
        acct.active = false;
        continue;
      }
      const Credential& cred = it->second;
      if (tag_hex_for(cred, acct.service) != acct.tag_hex) {
        acct.active = false;  // key rotated; pseudonym gone
        continue;
      }
      auto entry = services_[acct.service].ledger_entry(
          cred.issuer_id, GroupElement{hex_to_int(acct.tag_hex)});
      if (entry && entry->suspended) {
        acct.active = false;
        continue;
      }
      RelyingParty& rp = services_[acct.service];
      Bytes challenge = rp.issue_challenge();
      PresentationContext ctx{cred.issuer_id, rp.config().service_id,
                              std::string(kScope), challenge};
      try {
        Presentation pres = create_presentation(
            params_, cred, issuers_[acct.issuer].current_ring(), ctx,
            agent_rng_);
        GroupElement tag = rp.verify_presentation(pres, kScope, challenge);
        if (int_to_hex(tag.v, params_.p_bytes()) != acct.tag_hex) {
          acct.active = false;
        }
      } catch (const PhcError&) {
        acct.active = false;
      }
    }
  }

  // ---- abuse & suspension -----------------------------------------------------

  bool roll(double probability) {
    if (probability >= 1.0) return true;
    if (probability <= 0.0) return false;
    double draw =
        static_cast<double>(roll_rng_.u64()) / 18446744073709551616.0;
    return draw < probability;
  }

  void abuse_step() {
    for (auto& acct : accounts_) {
      if (!acct.active || !acct.attacker) continue;
      metrics_.abusive_actions_total += 1;
      if (roll(cfg_.services[acct.service].catch_probability)) {
        suspend_tag(acct.service, acct.issuer, acct.tag_hex, acct.attacker);
      }
    }
    if (cfg_.strategy.revocation_churn) churn_suspended();
    update_concurrency_peaks();
  }

  void suspend_tag(uint32_t service, uint32_t issuer_idx,
                   const std::string& tag_hex_str, bool owner_is_attacker) {
    RelyingParty& rp = services_[service];
    GroupElement tag{hex_to_int(tag_hex_str)};
    auto entry = rp.ledger_entry(issuers_[issuer_idx].id(), tag);
    if (entry && entry->suspended) return;  // already down
    rp.suspend(issuers_[issuer_idx].id(), tag);
    metrics_.services[service].suspensions += 1;
    if (!owner_is_attacker) metrics_.services[service].false_suspensions += 1;
    for (auto& acct : accounts_) {
      if (acct.service == service && acct.issuer == issuer_idx &&
          acct.tag_hex == tag_hex_str) {
        acct.active = false;
      }
    }
  }

  /// Suspension-evading churn: burn the recovery code, take the one
  /// re-enroll ticket, come back with a fresh key. At most once per
  /// issuer per epoch (the issuer enforces that); replacement accounts
  /// go only where the old pseudonym was suspended.
  void churn_suspended() {
    for (size_t a = 0; a < agents_.size(); ++a) {
      Agent& agent = agents_[a];
      if (!agent.attacker) continue;
      for (auto& [issuer_idx, cred] : agent.creds) {
        if (agent.churned_issuers_this_epoch.count(issuer_idx) > 0) continue;
        if (!cfg_.issuers[issuer_idx].enforce_limit) continue;
        std::vector<uint32_t> suspended_at;
        for (uint32_t s = 0; s < services_.size(); ++s) {
          if (!service_accepts(s, issuer_idx)) continue;
          auto entry = services_[s].ledger_entry(
              cred.issuer_id, GroupElement{hex_to_int(tag_hex_for(cred, s))});
          if (entry && entry->suspended) suspended_at.push_back(s);
        }
        if (suspended_at.empty()) continue;
        std::string ticket;
        try {
          ticket = issuers_[issuer_idx].revoke(cred.recovery_code);
        } catch (const PhcError&) {
          continue;  // already revoked this epoch
        }
        Credential replacement;
        try {
          replacement = fresh_credential(issuer_idx, agent.root_id, ticket);
        } catch (const PhcError&) {
          agent.churned_issuers_this_epoch.insert(issuer_idx);
          continue;  // ticket redemption refused (revoke-once cap)
        }
        cred = replacement;
        agent.churned_issuers_this_epoch.insert(issuer_idx);
        install_rings();  // ring changed under everyone
        for (uint32_t s : suspended_at) {
          while (try_register(s, cred, a)) {
          }
        }
      }
    }
  }

  void replay_probe() {
    // Attackers re-submit an already-consumed nonce; the ledger must
    // reject every attempt.
    for (size_t a = 0; a < agents_.size(); ++a) {
      Agent& agent = agents_[a];
      if (!agent.attacker || agent.creds.empty()) continue;
      uint32_t issuer_idx = agent.creds.begin()->first;
      const Credential& cred = agent.creds.begin()->second;
      for (uint32_t s = 0; s < services_.size(); ++s) {
        if (!service_accepts(s, issuer_idx)) continue;
        RelyingParty& rp = services_[s];
        Bytes challenge = rp.issue_challenge();
        PresentationContext ctx{cred.issuer_id, rp.config().service_id,
                                std::string(kScope), challenge};
        try {
          Presentation pres = create_presentation(
              params_, cred, issuers_[issuer_idx].current_ring(), ctx,
              agent_rng_);
          rp.verify_presentation(pres, kScope, challenge);  // burns the nonce
          rp.verify_presentation(pres, kScope, challenge);  // replay attempt
        } catch (const PhcError& e) {
          if (e.code() == Err::replayed_challenge) {
            metrics_.services[s].replay_attempts_rejected += 1;
          }
        }
      }
    }
  }

  // ---- delegation ---------------------------------------------------------------

  void delegation_phase() {
    // Delegations always run against service 0.
    RelyingParty& rp = services_[0];
    for (size_t a = 0; a < agents_.size(); ++a) {
      Agent& agent = agents_[a];
      if (agent.creds.empty()) continue;
      uint32_t issuer_idx = agent.creds.begin()->first;
      if (!service_accepts(0, issuer_idx)) continue;
      const Credential& cred = agent.creds.at(issuer_idx);
      std::string tag_hex_str = tag_hex_for(cred, 0);
      auto entry = rp.ledger_entry(cred.issuer_id,
                                   GroupElement{hex_to_int(tag_hex_str)});
      if (!entry) continue;  // principal never registered
      PresentationContext ctx{cred.issuer_id, rp.config().service_id,
                              std::string(kScope), {}};
      std::vector<DelegationAttestation> atts;
      for (uint32_t d = 0; d < cfg_.delegations_per_person; ++d) {
        KeyPair agent_kp = keygen(params_, agent_rng_);
        atts.push_back(create_delegation(params_, cred, ctx, agent_kp.y,
                                         "delegated-task", /*expiry=*/1u << 30,
                                         agent_rng_));
      }
      uint64_t valid_before = 0;
      for (const auto& att : atts) {
        try {
          if (rp.check_delegation(att, /*now=*/1)) {
            metrics_.delegations_issued += 1;
            valid_before += 1;
          }
        } catch (const PhcError&) {
        }
      }
      if (agent.attacker && cfg_.abusive_agents_per_attacker > 0) {
        // One rogue agent triggers principal suspension; all of the
        // principal's delegations must die with it.
        metrics_.delegation_abuse_count += cfg_.abusive_agents_per_attacker;
        suspend_tag(0, issuer_idx, tag_hex_str, true);
        for (const auto& att : atts) {
          try {
            rp.check_delegation(att, /*now=*/1);
          } catch (const PhcError& e) {
            if (e.code() == Err::suspended_principal) {
              metrics_.delegations_invalidated += 1;
            }
          }
        }
      }
    }
    metrics_.unverified_agents = cfg_.unverified_agents;
  }

  // ---- metrics -----------------------------------------------------------------

  void update_concurrency_peaks() {
    for (uint32_t s = 0; s < services_.size(); ++s) {
      uint32_t active = 0;
      for (const auto& acct : accounts_) {
        if (acct.active && acct.attacker && acct.service == s) active += 1;
      }
      metrics_.services[s].attacker_max_concurrent =
          std::max(metrics_.services[s].attacker_max_concurrent, active);
    }
  }

  void record_point(uint32_t epoch, uint32_t step) {
    StepPoint pt;
    pt.epoch = epoch;
    pt.step = step;
    for (const auto& acct : accounts_) {
      if (!acct.active) continue;
      if (acct.attacker) {
        pt.attacker_active_accounts += 1;
      } else {
        pt.honest_active_accounts += 1;
      }
    }
    pt.abusive_actions_total = metrics_.abusive_actions_total;
    metrics_.timeseries.push_back(pt);
  }

  Metrics finalize() {
    for (uint32_t s = 0; s < services_.size(); ++s) {
      ServiceMetrics& sm = metrics_.services[s];
      sm.service_id = services_[s].config().service_id;
      std::map<size_t, uint32_t> per_person;
      uint32_t attacker_active = 0;
      for (const auto& acct : accounts_) {
        if (!acct.active || acct.service != s) continue;
        if (acct.attacker) {
          attacker_active += 1;
        } else {
          per_person[acct.owner] += 1;
        }
      }
      sm.attacker_active_at_end = attacker_active;
      for (size_t a = 0; a < agents_.size(); ++a) {
        if (agents_[a].attacker) continue;
        sm.honest_accounts_histogram[per_person.count(a) ? per_person[a] : 0] +=
            1;
      }
    }

    uint64_t attacker_active = 0, honest_active = 0;
    for (const auto& acct : accounts_) {
      if (!acct.active) continue;
      (acct.attacker ? attacker_active : honest_active) += 1;
    }
    double gated_total = static_cast<double>(attacker_active + honest_active);
    metrics_.gated_attacker_share =
        gated_total > 0 ? static_cast<double>(attacker_active) / gated_total
                        : 0.0;
    double bots =
        static_cast<double>(cfg_.n_attackers) * cfg_.bot_multiplier;
    metrics_.ungated_attacker_share =
        (bots + cfg_.n_people) > 0 ? bots / (bots + cfg_.n_people) : 0.0;

    metrics_.config_echo = cfg_.to_json();
    return std::move(metrics_);
  }

  SimConfig cfg_;
  GroupParams params_;
  Drbg rng_{0};
  Drbg agent_rng_{0};
  Drbg roll_rng_{0};
  std::vector<Issuer> issuers_;
  std::vector<RelyingParty> services_;
  std::vector<Agent> agents_;
  std::vector<Account> accounts_;
  Metrics metrics_;
};

}  // namespace

Metrics run(const SimConfig& config) {
  World world(config);
  return world.run();
}

Metrics scenario_sockpuppet(const SimConfig& config) {
  SimConfig c = config;
  c.abuse_enabled = false;
  return run(c);
}

Metrics scenario_bot_suspension(const SimConfig& config) {
  SimConfig c = config;
  c.abuse_enabled = true;
  return run(c);
}

Metrics scenario_delegation(const SimConfig& config) {
  SimConfig c = config;
  if (c.delegations_per_person == 0) c.delegations_per_person = 1;
  return run(c);
}

}  // namespace phc::sim
