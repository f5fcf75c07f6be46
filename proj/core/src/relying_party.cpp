#include "phc/relying_party.hpp"

#include <algorithm>

#include "phc/encode.hpp"
#include "phc/errors.hpp"

namespace phc {

RelyingParty RelyingParty::create(ServiceConfig config, GroupParams params,
                                  uint64_t rng_seed) {
  RelyingParty rp;
  rp.init(std::move(config), std::move(params), rng_seed);
  return rp;
}

void RelyingParty::init(ServiceConfig config, GroupParams params,
                        uint64_t rng_seed) {
  if (config.accepted_issuers.empty()) {
    throw std::invalid_argument("service must accept at least one issuer");
  }
  if (config.account_limit < 1) {
    throw std::invalid_argument("account limit must be >= 1");
  }
  config_ = std::move(config);
  params_ = std::move(params);
  rng_ = Drbg(rng_seed);

  Json issuers = Json::array();
  for (const auto& ai : config_.accepted_issuers) {
    issuers.push_back(Json{{"issuer_id", ai.issuer_id},
                           {"pub", int_to_hex(ai.pub.v, params_.p_bytes())}});
  }
  Json scopes = Json::array();
  for (const auto& s : config_.scopes) scopes.push_back(s);
  creation_event_ = Json{{"kind", "service-init"},
                         {"service_id", config_.service_id},
                         {"params", params_.name},
                         {"p", int_to_hex(params_.p, params_.p_bytes())},
                         {"g", int_to_hex(params_.g, params_.p_bytes())},
                         {"seed", rng_seed},
                         {"account_limit", config_.account_limit},
                         {"accepted_issuers", issuers},
                         {"scopes", scopes}};
}

RelyingParty RelyingParty::replay(const std::vector<Json>& events) {
  if (events.empty() || events.front().value("kind", "") != "service-init") {
    throw PhcError(Err::log_corrupt, "service log must start with service-init");
  }
  const Json& init_ev = events.front();
  GroupParams params;
  if (auto preset = params_by_name(init_ev.value("params", ""))) {
    params = *preset;
  } else {
    params.name = init_ev.value("params", "");
    params.p = hex_to_int(init_ev.at("p").get<std::string>());
    params.q = (params.p - 1) / 2;
    params.g = hex_to_int(init_ev.at("g").get<std::string>());
  }
  ServiceConfig config;
  config.service_id = init_ev.at("service_id").get<std::string>();
  config.account_limit = init_ev.at("account_limit").get<uint32_t>();
  config.scopes.clear();
  for (const auto& s : init_ev.at("scopes")) {
    config.scopes.push_back(s.get<std::string>());
  }
  for (const auto& ai : init_ev.at("accepted_issuers")) {
    config.accepted_issuers.push_back(
        AcceptedIssuer{ai.at("issuer_id").get<std::string>(),
                       GroupElement{hex_to_int(ai.at("pub").get<std::string>())}});
  }

  RelyingParty rp;
  rp.init(std::move(config), std::move(params),
          init_ev.at("seed").get<uint64_t>());

  for (size_t i = 1; i < events.size(); ++i) {
    const Json& ev = events[i];
    const std::string kind = ev.value("kind", "");
    try {
      if (kind == "challenge") {
        Bytes nonce = rp.apply_challenge();
        if (hex_encode(nonce) != ev.at("nonce").get<std::string>()) {
          throw PhcError(Err::log_corrupt,
                         "challenge replay diverged from the log");
        }
      } else if (kind == "consume") {
        rp.apply_consume(hex_decode(ev.at("nonce").get<std::string>()));
      } else if (kind == "register") {
        std::string account = rp.apply_register(
            ev.at("issuer_id").get<std::string>(),
            ev.at("tag").get<std::string>());
        if (account != ev.at("account").get<std::string>()) {
          throw PhcError(Err::log_corrupt,
                         "register replay diverged from the log");
        }
      } else if (kind == "suspend") {
        rp.apply_suspend(ev.at("issuer_id").get<std::string>(),
                         ev.at("tag").get<std::string>());
      } else {
        throw PhcError(Err::log_corrupt, "unknown service event: " + kind);
      }
    } catch (const Json::exception&) {
      throw PhcError(Err::log_corrupt,
                     "service event " + std::to_string(i) + " missing fields");
    }
  }
  return rp;
}

void RelyingParty::emit(std::vector<Json> events) {
  if (sink_) sink_(events);
}

const AcceptedIssuer* RelyingParty::find_issuer(
    std::string_view issuer_id) const {
  for (const auto& ai : config_.accepted_issuers) {
    if (ai.issuer_id == issuer_id) return &ai;
  }
  return nullptr;
}

std::string RelyingParty::tag_hex(const GroupElement& tag) const {
  return int_to_hex(tag.v, params_.p_bytes());
}

// ---- operations ------------------------------------------------------------

Bytes RelyingParty::issue_challenge() {
  std::lock_guard<std::mutex> lock(*mu_);
  Bytes nonce = apply_challenge();
  emit({Json{{"kind", "challenge"}, {"nonce", hex_encode(nonce)}}});
  return nonce;
}

Bytes RelyingParty::apply_challenge() {
  Bytes nonce = rng_.bytes(16);
  issued_nonces_.insert(nonce);
  return nonce;
}

void RelyingParty::install_ring(const EpochRing& ring) {
  std::lock_guard<std::mutex> lock(*mu_);
  const AcceptedIssuer* issuer = find_issuer(ring.issuer_id);
  if (!issuer) {
    throw PhcError(Err::unknown_issuer,
                   "ring from non-accepted issuer " + ring.issuer_id);
  }
  if (!verify_ring(params_, issuer->pub, ring)) {
    throw PhcError(Err::bad_ring_snapshot,
                   "snapshot signature does not verify under the pinned key");
  }
  rings_[ring.issuer_id] = ring;
}

GroupElement RelyingParty::verify_presentation(const Presentation& pres,
                                               std::string_view scope,
                                               ByteView challenge) {
  std::lock_guard<std::mutex> lock(*mu_);
  if (!find_issuer(pres.issuer_id)) {
    throw PhcError(Err::unknown_issuer,
                   "presentation from non-accepted issuer " + pres.issuer_id);
  }
  auto ring_it = rings_.find(pres.issuer_id);
  if (ring_it == rings_.end() || ring_it->second.epoch != pres.epoch) {
    throw PhcError(Err::stale_epoch,
                   "presentation epoch does not match the current ring");
  }
  if (std::find(config_.scopes.begin(), config_.scopes.end(), scope) ==
      config_.scopes.end()) {
    throw PhcError(Err::malformed_request,
                   "scope not offered by this service");
  }

  Bytes nonce(challenge.begin(), challenge.end());
  if (issued_nonces_.count(nonce) == 0 || consumed_nonces_.count(nonce) > 0) {
    throw PhcError(Err::replayed_challenge,
                   "challenge nonce unknown or already used");
  }
  // One shot per nonce, whatever the proof outcome.
  apply_consume(nonce);
  emit({Json{{"kind", "consume"}, {"nonce", hex_encode(nonce)}}});

  const EpochRing& ring = ring_it->second;
  if (pres.cohort_index >= ring.cohorts.size()) {
    throw PhcError(Err::invalid_proof, "presentation names a missing cohort");
  }
  Bytes ctx_bytes = presentation_context_bytes(pres.issuer_id,
                                               config_.service_id, scope);
  Bytes message =
      presentation_message_bytes(config_.service_id, scope, challenge);
  LsagResult result;
  try {
    result = lsag_verify(params_, ring.cohorts[pres.cohort_index], ctx_bytes,
                         message, pres.sig);
  } catch (const PhcError& e) {
    throw PhcError(Err::bad_ring_signature, e.what());
  }
  if (!result.valid) {
    throw PhcError(Err::invalid_proof, "ring signature chain does not close");
  }
  return result.tag;
}

void RelyingParty::apply_consume(const Bytes& nonce) {
  consumed_nonces_.insert(nonce);
}

std::string RelyingParty::register_account(const std::string& issuer_id,
                                           const GroupElement& tag) {
  std::lock_guard<std::mutex> lock(*mu_);
  std::string tag_str = tag_hex(tag);
  auto key = std::make_pair(issuer_id, tag_str);
  auto it = ledger_.find(key);
  if (it != ledger_.end()) {
    if (it->second.suspended) {
      throw PhcError(Err::suspended_credential,
                     "credential pseudonym is suspended at this service");
    }
    if (it->second.account_count >= config_.account_limit) {
      throw PhcError(Err::limit_reached,
                     "credential has reached its verified-account limit");
    }
  }
  std::string account = apply_register(issuer_id, tag_str);
  emit({Json{{"kind", "register"},
             {"issuer_id", issuer_id},
             {"tag", tag_str},
             {"account", account}}});
  return account;
}

std::string RelyingParty::apply_register(const std::string& issuer_id,
                                         const std::string& tag_hex_str) {
  LedgerEntry& entry = ledger_[std::make_pair(issuer_id, tag_hex_str)];
  entry.account_count += 1;
  account_seq_ += 1;
  return "a-" + std::to_string(account_seq_);
}

void RelyingParty::suspend(const std::string& issuer_id,
                           const GroupElement& tag) {
  std::lock_guard<std::mutex> lock(*mu_);
  std::string tag_str = tag_hex(tag);
  apply_suspend(issuer_id, tag_str);
  emit({Json{{"kind", "suspend"}, {"issuer_id", issuer_id}, {"tag", tag_str}}});
}

void RelyingParty::apply_suspend(const std::string& issuer_id,
                                 const std::string& tag_hex_str) {
  // Creates the entry if absent so the suspension is durable either way.
  ledger_[std::make_pair(issuer_id, tag_hex_str)].suspended = true;
}

bool RelyingParty::check_delegation(const DelegationAttestation& att,
                                    uint64_t now) const {
  std::lock_guard<std::mutex> lock(*mu_);
  auto it = ledger_.find(std::make_pair(att.issuer_id, tag_hex(att.tag)));
  if (it == ledger_.end()) {
    throw PhcError(Err::unknown_principal,
                   "no pseudonym ledger entry for the principal");
  }
  if (it->second.suspended) {
    throw PhcError(Err::suspended_principal,
                   "principal pseudonym is suspended; delegations are void");
  }
  if (att.expiry < now) return false;
  if (!is_subgroup_element(params_, att.tag.v) ||
      !is_subgroup_element(params_, att.agent_pub.v)) {
    return false;
  }
  Bytes ctx_bytes = presentation_context_bytes(
      att.issuer_id, config_.service_id, att.pseudonym_scope);
  GroupElement h = lsag_context_base(params_, ctx_bytes);
  Bytes message =
      delegation_message_bytes(params_, att.agent_pub, att.scope, att.expiry);
  return schnorr_verify(params_, h, att.tag, message, att.sig);
}

std::optional<LedgerEntry> RelyingParty::ledger_entry(
    const std::string& issuer_id, const GroupElement& tag) const {
  std::lock_guard<std::mutex> lock(*mu_);
  auto it = ledger_.find(std::make_pair(issuer_id, tag_hex(tag)));
  if (it == ledger_.end()) return std::nullopt;
  return it->second;
}

std::optional<uint64_t> RelyingParty::current_epoch(
    const std::string& issuer_id) const {
  std::lock_guard<std::mutex> lock(*mu_);
  auto it = rings_.find(issuer_id);
  if (it == rings_.end()) return std::nullopt;
  return it->second.epoch;
}

Json RelyingParty::state_dump() const {
  std::lock_guard<std::mutex> lock(*mu_);
  Json dump;
  dump["service_id"] = config_.service_id;
  Json ledger = Json::array();
  for (const auto& [key, entry] : ledger_) {
    ledger.push_back(Json{{"issuer_id", key.first},
                          {"tag", key.second},
                          {"accounts", entry.account_count},
                          {"suspended", entry.suspended}});
  }
  dump["ledger"] = ledger;
  Json issued = Json::array();
  for (const auto& n : issued_nonces_) issued.push_back(hex_encode(n));
  dump["issued_nonces"] = issued;
  Json consumed = Json::array();
  for (const auto& n : consumed_nonces_) consumed.push_back(hex_encode(n));
  dump["consumed_nonces"] = consumed;
  return dump;
}

}  // namespace phc
