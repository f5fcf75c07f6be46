#include "phc/issuer.hpp"

#include <algorithm>

#include "phc/encode.hpp"
#include "phc/errors.hpp"

namespace phc {

size_t EpochRing::total_keys() const {
  size_t n = 0;
  for (const auto& c : cohorts) n += c.size();
  return n;
}

std::optional<std::pair<uint32_t, uint32_t>> EpochRing::find(
    const GroupElement& y) const {
  for (uint32_t ci = 0; ci < cohorts.size(); ++ci) {
    const auto& cohort = cohorts[ci];
    for (uint32_t pi = 0; pi < cohort.size(); ++pi) {
      if (cohort[pi].v == y.v) return std::make_pair(ci, pi);
    }
  }
  return std::nullopt;
}

Bytes ring_signing_bytes(const GroupParams& params, const EpochRing& ring) {
  Encoder enc;
  enc.str(ring.issuer_id);
  enc.u64(ring.epoch);
  enc.count(static_cast<uint32_t>(ring.cohorts.size()));
  for (const auto& cohort : ring.cohorts) {
    enc.count(static_cast<uint32_t>(cohort.size()));
    for (const auto& y : cohort) enc.integer(y.v, params.p_bytes());
  }
  return enc.take();
}

bool verify_ring(const GroupParams& params, const GroupElement& issuer_pub,
                 const EpochRing& ring) {
  return schnorr_verify(params, GroupElement{params.g}, issuer_pub,
                        ring_signing_bytes(params, ring), ring.snapshot_sig);
}

namespace {
Bytes digest_to_bytes(const Digest& d) {
  return Bytes(d.begin(), d.end());
}
}  // namespace

// ---- lifecycle -----------------------------------------------------------

Issuer Issuer::create(std::string issuer_id, GroupParams params,
                      uint64_t rng_seed, IssuerOptions opts) {
  Issuer issuer;
  issuer.init(std::move(issuer_id), std::move(params), rng_seed, opts);
  return issuer;
}

void Issuer::init(std::string issuer_id, GroupParams params, uint64_t rng_seed,
                  IssuerOptions opts) {
  if (opts.cohort_capacity == 0) {
    throw std::invalid_argument("cohort capacity must be >= 1");
  }
  issuer_id_ = std::move(issuer_id);
  params_ = std::move(params);
  opts_ = opts;
  rng_ = Drbg(rng_seed);
  dedup_salt_ = rng_.bytes(32);
  signing_ = keygen(params_, rng_);
  creation_event_ = Json{{"kind", "issuer-init"},
                         {"issuer_id", issuer_id_},
                         {"params", params_.name},
                         {"p", int_to_hex(params_.p, params_.p_bytes())},
                         {"g", int_to_hex(params_.g, params_.p_bytes())},
                         {"seed", rng_seed},
                         {"cohort_capacity", opts_.cohort_capacity},
                         {"enforce_limit", opts_.enforce_one_per_person}};
  apply_advance();  // opens epoch 1
}

Issuer Issuer::replay(const std::vector<Json>& events) {
  if (events.empty() || events.front().value("kind", "") != "issuer-init") {
    throw PhcError(Err::log_corrupt, "issuer log must start with issuer-init");
  }
  const Json& init_ev = events.front();
  auto params = params_by_name(init_ev.value("params", ""));
  GroupParams p;
  if (params) {
    p = *params;
  } else {
    p.name = init_ev.value("params", "");
    p.p = hex_to_int(init_ev.at("p").get<std::string>());
    p.q = (p.p - 1) / 2;
    p.g = hex_to_int(init_ev.at("g").get<std::string>());
  }
  IssuerOptions opts;
  opts.cohort_capacity = init_ev.value("cohort_capacity", 64u);
  opts.enforce_one_per_person = init_ev.value("enforce_limit", true);

  Issuer issuer;
  issuer.init(init_ev.at("issuer_id").get<std::string>(), std::move(p),
              init_ev.at("seed").get<uint64_t>(), opts);

  for (size_t i = 1; i < events.size(); ++i) {
    const Json& ev = events[i];
    const std::string kind = ev.value("kind", "");
    try {
      if (kind == "dedup-mark") {
        Digest d{};
        Bytes raw = hex_decode(ev.at("digest").get<std::string>());
        if (raw.size() != d.size()) throw PhcError(Err::log_corrupt);
        std::copy(raw.begin(), raw.end(), d.begin());
        issuer.apply_dedup_mark(d, ev.value("ticket", ""));
      } else if (kind == "ring-append") {
        GroupElement y{hex_to_int(ev.at("y").get<std::string>())};
        Digest rh{};
        Bytes raw = hex_decode(ev.at("recovery_hash").get<std::string>());
        if (raw.size() != rh.size()) throw PhcError(Err::log_corrupt);
        std::copy(raw.begin(), raw.end(), rh.begin());
        issuer.apply_ring_append(y, rh);
      } else if (kind == "revoke") {
        Digest rh{};
        Bytes raw = hex_decode(ev.at("recovery_hash").get<std::string>());
        if (raw.size() != rh.size()) throw PhcError(Err::log_corrupt);
        std::copy(raw.begin(), raw.end(), rh.begin());
        issuer.apply_revoke(rh);
      } else if (kind == "advance-epoch") {
        issuer.apply_advance();
      } else {
        throw PhcError(Err::log_corrupt, "unknown issuer event: " + kind);
      }
    } catch (const Json::exception&) {
      throw PhcError(Err::log_corrupt,
                     "issuer event " + std::to_string(i) + " missing fields");
    }
  }
  return issuer;
}

void Issuer::emit(std::vector<Json> events) {
  if (sink_) sink_(events);
}

// ---- operations -----------------------------------------------------------

EnrollmentReceipt Issuer::enroll(const EnrollmentRequest& req) {
  std::lock_guard<std::mutex> lock(*mu_);
  if (!is_subgroup_element(params_, req.y.v)) {
    throw PhcError(Err::malformed_request,
                   "enrollment key is not a valid group element");
  }
  const EpochRing& ring = rings_.at(current_epoch_);
  if (ring.find(req.y)) {
    throw PhcError(Err::duplicate_key,
                   "public key already present in the current ring");
  }

  Bytes digest_input = dedup_salt_;
  Bytes root = to_bytes(req.root_id);
  digest_input.insert(digest_input.end(), root.begin(), root.end());
  Digest d = sha256(digest_input);
  Bytes dkey = digest_to_bytes(d);

  std::string consumed_ticket;
  if (opts_.enforce_one_per_person && dedup_set_.count(dkey) > 0) {
    if (!req.reenroll_ticket) {
      throw PhcError(Err::duplicate_enrollment,
                     "person has already received a credential this epoch");
    }
    if (reenroll_tickets_.count(*req.reenroll_ticket) == 0) {
      throw PhcError(Err::invalid_ticket, "unknown or spent re-enroll ticket");
    }
    if (revoked_once_.count(dkey) > 0) {
      throw PhcError(Err::already_revoked_this_epoch,
                     "re-enrollment after revocation is limited to once per epoch");
    }
    consumed_ticket = *req.reenroll_ticket;
  }

  apply_dedup_mark(d, consumed_ticket);
  EnrollmentReceipt receipt = apply_ring_append(req.y, req.recovery_hash);

  // Two separate records: the dedup side never shares a line with the key.
  emit({Json{{"kind", "dedup-mark"},
             {"digest", hex_encode(dkey)},
             {"ticket", consumed_ticket}},
        Json{{"kind", "ring-append"},
             {"y", int_to_hex(req.y.v, params_.p_bytes())},
             {"recovery_hash", hex_encode(req.recovery_hash)}}});
  return receipt;
}

void Issuer::apply_dedup_mark(const Digest& digest, const std::string& ticket) {
  Bytes dkey = digest_to_bytes(digest);
  if (!ticket.empty()) {
    reenroll_tickets_.erase(ticket);
    revoked_once_.insert(dkey);
  }
  dedup_set_.insert(dkey);
}

EnrollmentReceipt Issuer::apply_ring_append(const GroupElement& y,
                                            const Digest& recovery_hash) {
  EpochRing& ring = rings_.at(current_epoch_);
  // least-full cohort, first on ties; new cohort when all at capacity
  uint32_t target = 0;
  bool found = false;
  for (uint32_t i = 0; i < ring.cohorts.size(); ++i) {
    if (ring.cohorts[i].size() >= opts_.cohort_capacity) continue;
    if (!found || ring.cohorts[i].size() < ring.cohorts[target].size()) {
      target = i;
      found = true;
    }
  }
  if (!found) {
    ring.cohorts.emplace_back();
    target = static_cast<uint32_t>(ring.cohorts.size() - 1);
  }
  ring.cohorts[target].push_back(y);
  recovery_bindings_[digest_to_bytes(recovery_hash)] = y;
  resign_current_ring();
  return EnrollmentReceipt{
      current_epoch_, target,
      static_cast<uint32_t>(ring.cohorts[target].size() - 1)};
}

uint64_t Issuer::advance_epoch() {
  std::lock_guard<std::mutex> lock(*mu_);
  apply_advance();
  emit({Json{{"kind", "advance-epoch"}, {"epoch", current_epoch_}}});
  return current_epoch_;
}

void Issuer::apply_advance() {
  current_epoch_ += 1;
  dedup_set_.clear();
  revoked_once_.clear();
  recovery_bindings_.clear();
  reenroll_tickets_.clear();
  EpochRing ring;
  ring.issuer_id = issuer_id_;
  ring.epoch = current_epoch_;
  rings_[current_epoch_] = std::move(ring);
  resign_current_ring();
}

std::string Issuer::revoke(ByteView recovery_code) {
  std::lock_guard<std::mutex> lock(*mu_);
  Digest rh = sha256(recovery_code);
  if (recovery_bindings_.count(digest_to_bytes(rh)) == 0) {
    throw PhcError(Err::unknown_recovery_code,
                   "no active credential bound to this recovery code");
  }
  std::string ticket = apply_revoke(rh);
  emit({Json{{"kind", "revoke"}, {"recovery_hash", hex_encode(rh)}}});
  return ticket;
}

std::string Issuer::apply_revoke(const Digest& recovery_hash) {
  Bytes key = digest_to_bytes(recovery_hash);
  auto it = recovery_bindings_.find(key);
  if (it == recovery_bindings_.end()) {
    throw PhcError(Err::log_corrupt, "revoke event without binding");
  }
  GroupElement y = it->second;
  recovery_bindings_.erase(it);
  EpochRing& ring = rings_.at(current_epoch_);
  for (auto& cohort : ring.cohorts) {
    auto pos = std::find_if(cohort.begin(), cohort.end(),
                            [&](const GroupElement& e) { return e.v == y.v; });
    if (pos != cohort.end()) {
      cohort.erase(pos);
      break;
    }
  }
  std::string ticket = hex_encode(rng_.bytes(16));
  reenroll_tickets_.insert(ticket);
  resign_current_ring();
  return ticket;
}

void Issuer::resign_current_ring() {
  EpochRing& ring = rings_.at(current_epoch_);
  ring.snapshot_sig = schnorr_sign(params_, GroupElement{params_.g}, signing_.x,
                                   ring_signing_bytes(params_, ring), rng_);
}

EpochRing Issuer::ring(uint64_t epoch) const {
  std::lock_guard<std::mutex> lock(*mu_);
  auto it = rings_.find(epoch);
  if (it == rings_.end()) {
    throw PhcError(Err::unknown_epoch,
                   "no ring for epoch " + std::to_string(epoch));
  }
  return it->second;
}

EpochRing Issuer::current_ring() const {
  std::lock_guard<std::mutex> lock(*mu_);
  return rings_.at(current_epoch_);
}

Json Issuer::state_dump() const {
  std::lock_guard<std::mutex> lock(*mu_);
  Json dump;
  dump["issuer_id"] = issuer_id_;
  dump["epoch"] = current_epoch_;
  Json dedup = Json::array();
  for (const auto& d : dedup_set_) dedup.push_back(hex_encode(d));
  dump["dedup_set"] = dedup;
  Json revoked = Json::array();
  for (const auto& d : revoked_once_) revoked.push_back(hex_encode(d));
  dump["revoked_once_set"] = revoked;
  Json bindings = Json::object();
  for (const auto& [rh, y] : recovery_bindings_) {
    bindings[hex_encode(rh)] = int_to_hex(y.v, params_.p_bytes());
  }
  dump["recovery_bindings"] = bindings;
  Json tickets = Json::array();
  for (const auto& t : reenroll_tickets_) tickets.push_back(t);
  dump["reenroll_tickets"] = tickets;
  Json cohorts = Json::array();
  for (const auto& cohort : rings_.at(current_epoch_).cohorts) {
    Json c = Json::array();
    for (const auto& y : cohort) c.push_back(int_to_hex(y.v, params_.p_bytes()));
    cohorts.push_back(c);
  }
  dump["ring"] = cohorts;
  return dump;
}

}  // namespace phc
