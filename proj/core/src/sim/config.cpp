#include "phc/sim/config.hpp"

#include <stdexcept>

namespace phc::sim {

std::string regime_to_string(Regime r) {
  switch (r) {
    case Regime::unlimited: return "unlimited";
    case Regime::single_issuer: return "single-issuer";
    case Regime::bounded: return "bounded";
  }
  return "bounded";
}

Regime regime_from_string(std::string_view s) {
  if (s == "unlimited") return Regime::unlimited;
  if (s == "single-issuer") return Regime::single_issuer;
  if (s == "bounded") return Regime::bounded;
  throw std::invalid_argument("unknown regime: " + std::string(s));
}

std::string mutation_to_string(Mutation m) {
  switch (m) {
    case Mutation::none: return "none";
    case Mutation::shared_ctx: return "shared-ctx";
    case Mutation::tag_reuse: return "tag-reuse";
  }
  return "none";
}

Mutation mutation_from_string(std::string_view s) {
  if (s == "none") return Mutation::none;
  if (s == "shared-ctx") return Mutation::shared_ctx;
  if (s == "tag-reuse") return Mutation::tag_reuse;
  throw std::invalid_argument("unknown mutation: " + std::string(s));
}

void SimConfig::validate() const {
  if (issuers.empty()) {
    throw std::invalid_argument("at least one issuer required");
  }
  if (services.empty()) {
    throw std::invalid_argument("at least one service required");
  }
  bool any_unenforced = false;
  for (const auto& i : issuers) any_unenforced |= !i.enforce_limit;
  switch (regime) {
    case Regime::unlimited:
      if (!any_unenforced) {
        throw std::invalid_argument(
            "unlimited regime requires an issuer with enforcement off");
      }
      break;
    case Regime::single_issuer:
      if (issuers.size() != 1 || any_unenforced) {
        throw std::invalid_argument(
            "single-issuer regime requires exactly one enforcing issuer");
      }
      break;
    case Regime::bounded:
      if (any_unenforced || issuers.size() < 2) {
        throw std::invalid_argument(
            "bounded regime requires two or more enforcing issuers");
      }
      break;
  }
  for (const auto& s : services) {
    if (s.accepted_issuers.empty()) {
      throw std::invalid_argument("service accepts no issuer");
    }
    if (s.account_limit < 1) {
      throw std::invalid_argument("account limit must be >= 1");
    }
    for (uint32_t idx : s.accepted_issuers) {
      if (idx >= issuers.size()) {
        throw std::invalid_argument("service accepts unknown issuer index");
      }
    }
    if (s.catch_probability < 0.0 || s.catch_probability > 1.0) {
      throw std::invalid_argument("catch probability out of [0,1]");
    }
  }
  if (epochs < 1 || steps_per_epoch < 1) {
    throw std::invalid_argument("horizon must be at least 1x1");
  }
  if (cohort_capacity < 1) {
    throw std::invalid_argument("cohort capacity must be >= 1");
  }
}

Json SimConfig::to_json() const {
  Json issuers_j = Json::array();
  for (const auto& i : issuers) {
    issuers_j.push_back(Json{{"enforce_limit", i.enforce_limit}});
  }
  Json services_j = Json::array();
  for (const auto& s : services) {
    Json accepted = Json::array();
    for (uint32_t idx : s.accepted_issuers) accepted.push_back(idx);
    services_j.push_back(Json{{"accepted_issuers", accepted},
                              {"account_limit", s.account_limit},
                              {"catch_probability", s.catch_probability}});
  }
  return Json{
      {"seed", seed},
      {"n_people", n_people},
      {"n_attackers", n_attackers},
      {"issuers", issuers_j},
      {"services", services_j},
      {"regime", regime_to_string(regime)},
      {"epochs", epochs},
      {"steps_per_epoch", steps_per_epoch},
      {"params", params_preset},
      {"cohort_capacity", cohort_capacity},
      {"strategy",
       Json{{"multi_issuer", strategy.multi_issuer},
            {"revocation_churn", strategy.revocation_churn},
            {"challenge_replay", strategy.challenge_replay},
            {"purchased_per_epoch", strategy.purchased_per_epoch},
            {"sybil_budget", strategy.sybil_budget}}},
      {"mutation", mutation_to_string(mutation)},
      {"abuse_enabled", abuse_enabled},
      {"bot_multiplier", bot_multiplier},
      {"delegations_per_person", delegations_per_person},
      {"abusive_agents_per_attacker", abusive_agents_per_attacker},
      {"unverified_agents", unverified_agents}};
}

SimConfig SimConfig::from_json(const Json& j) {
  SimConfig c;
  c.seed = j.value("seed", static_cast<uint64_t>(0));
  c.n_people = j.value("n_people", 10u);
  c.n_attackers = j.value("n_attackers", 1u);
  if (j.contains("issuers")) {
    c.issuers.clear();
    for (const auto& ij : j.at("issuers")) {
      c.issuers.push_back(IssuerSpec{ij.value("enforce_limit", true)});
    }
  }
  if (j.contains("services")) {
    c.services.clear();
    for (const auto& sj : j.at("services")) {
      ServiceSpec spec;
      spec.accepted_issuers.clear();
      if (sj.contains("accepted_issuers")) {
        for (const auto& a : sj.at("accepted_issuers")) {
          spec.accepted_issuers.push_back(a.get<uint32_t>());
        }
      }
      spec.account_limit = sj.value("account_limit", 1u);
      spec.catch_probability = sj.value("catch_probability", 1.0);
      c.services.push_back(std::move(spec));
    }
  }
  c.regime = regime_from_string(j.value("regime", "single-issuer"));
  c.epochs = j.value("epochs", 1u);
  c.steps_per_epoch = j.value("steps_per_epoch", 1u);
  c.params_preset = j.value("params", "test-256");
  c.cohort_capacity = j.value("cohort_capacity", 64u);
  if (j.contains("strategy")) {
    const Json& st = j.at("strategy");
    c.strategy.multi_issuer = st.value("multi_issuer", true);
    c.strategy.revocation_churn = st.value("revocation_churn", false);
    c.strategy.challenge_replay = st.value("challenge_replay", false);
    c.strategy.purchased_per_epoch = st.value("purchased_per_epoch", 0u);
    c.strategy.sybil_budget = st.value("sybil_budget", 0u);
  }
  c.mutation = mutation_from_string(j.value("mutation", "none"));
  c.abuse_enabled = j.value("abuse_enabled", false);
  c.bot_multiplier = j.value("bot_multiplier", 10u);
  c.delegations_per_person = j.value("delegations_per_person", 0u);
  c.abusive_agents_per_attacker = j.value("abusive_agents_per_attacker", 0u);
  c.unverified_agents = j.value("unverified_agents", 0u);
  c.validate();
  return c;
}

}  // namespace phc::sim
