#include "phc/wallet.hpp"

#include <fstream>

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/event_log.hpp"

namespace phc {

std::pair<KeyPair, Bytes> create_identity(const GroupParams& params, Drbg& rng) {
  KeyPair kp = keygen(params, rng);
  Bytes recovery_code = rng.bytes(16);
  return {kp, recovery_code};
}

Bytes presentation_context_bytes(std::string_view issuer_id,
                                 std::string_view service_id,
                                 std::string_view scope) {
  Encoder enc;
  enc.str(issuer_id).str(service_id).str(scope);
  return enc.take();
}

Bytes presentation_message_bytes(std::string_view service_id,
                                 std::string_view scope, ByteView challenge) {
  Encoder enc;
  enc.str(service_id).str(scope).bytes(challenge);
  return enc.take();
}

Bytes delegation_message_bytes(const GroupParams& params,
                               const GroupElement& agent_pub,
                               std::string_view scope, uint64_t expiry) {
  Encoder enc;
  enc.integer(agent_pub.v, params.p_bytes()).str(scope).u64(expiry);
  return enc.take();
}

Presentation create_presentation(const GroupParams& params,
                                 const Credential& cred, const EpochRing& ring,
                                 const PresentationContext& ctx, Drbg& rng) {
  if (cred.epoch != ring.epoch) {
    throw PhcError(Err::stale_ring, "credential epoch " +
                                        std::to_string(cred.epoch) +
                                        " vs ring epoch " +
                                        std::to_string(ring.epoch));
  }
  if (cred.cohort_index >= ring.cohorts.size()) {
    throw PhcError(Err::key_not_in_ring, "recorded cohort does not exist");
  }
  const auto& cohort = ring.cohorts[cred.cohort_index];
  // Position may have shifted if earlier members were revoked.
  size_t position = cohort.size();
  if (cred.position < cohort.size() &&
      cohort[cred.position].v == cred.keypair.y.v) {
    position = cred.position;
  } else {
    for (size_t i = 0; i < cohort.size(); ++i) {
      if (cohort[i].v == cred.keypair.y.v) {
        position = i;
        break;
      }
    }
  }
  if (position == cohort.size()) {
    throw PhcError(Err::key_not_in_ring,
                   "credential key absent from its cohort");
  }

  Bytes ctx_bytes = presentation_context_bytes(cred.issuer_id, ctx.service_id,
                                               ctx.scope);
  Bytes message =
      presentation_message_bytes(ctx.service_id, ctx.scope, ctx.challenge);
  RingSignature sig = lsag_sign(params, cohort, position, cred.keypair.x,
                                ctx_bytes, message, rng);
  return Presentation{cred.issuer_id, ring.epoch, cred.cohort_index,
                      std::move(sig)};
}

GroupElement pseudonym_tag(const GroupParams& params, const Credential& cred,
                           const PresentationContext& ctx) {
  Bytes ctx_bytes = presentation_context_bytes(cred.issuer_id, ctx.service_id,
                                               ctx.scope);
  GroupElement h = lsag_context_base(params, ctx_bytes);
  return pow_e(params, h, cred.keypair.x);
}

DelegationAttestation create_delegation(const GroupParams& params,
                                        const Credential& cred,
                                        const PresentationContext& ctx,
                                        const GroupElement& agent_pub,
                                        std::string scope, uint64_t expiry,
                                        Drbg& rng) {
  Bytes ctx_bytes = presentation_context_bytes(cred.issuer_id, ctx.service_id,
                                               ctx.scope);
  GroupElement h = lsag_context_base(params, ctx_bytes);
  GroupElement tag = pow_e(params, h, cred.keypair.x);
  Bytes message = delegation_message_bytes(params, agent_pub, scope, expiry);
  SchnorrSignature sig = schnorr_sign(params, h, cred.keypair.x, message, rng);
  return DelegationAttestation{cred.issuer_id, ctx.scope, tag,    agent_pub,
                               std::move(scope), expiry,  sig};
}

// ---- credential file ---------------------------------------------------------

void save_credential(const Credential& cred, const std::filesystem::path& path) {
  auto params = params_by_name(cred.params_name);
  if (!params) {
    throw PhcError(Err::malformed_file,
                   "cannot save credential with unnamed parameter set");
  }
  Json doc{{"version", 1},
           {"issuer_id", cred.issuer_id},
           {"params", cred.params_name},
           {"epoch", cred.epoch},
           {"cohort", cred.cohort_index},
           {"position", cred.position},
           {"x_hex", int_to_hex(cred.keypair.x.v, params->q_bytes())},
           {"y_hex", int_to_hex(cred.keypair.y.v, params->p_bytes())},
           {"recovery_code_hex", hex_encode(cred.recovery_code)}};
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  out << doc.dump(2) << "\n";
  if (!out) {
    throw PhcError(Err::internal_error,
                   "cannot write credential file: " + path.string());
  }
}

Credential load_credential(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw PhcError(Err::malformed_file,
                   "cannot open credential file: " + path.string());
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw PhcError(Err::malformed_file, "credential file is not JSON");
  }
  if (doc.value("version", 0) != 1) {
    throw PhcError(Err::unsupported_version,
                   "unsupported credential file version");
  }
  try {
    Credential cred;
    cred.issuer_id = doc.at("issuer_id").get<std::string>();
    cred.params_name = doc.at("params").get<std::string>();
    auto params = params_by_name(cred.params_name);
    if (!params) {
      throw PhcError(Err::malformed_file, "unknown parameter set name");
    }
    cred.epoch = doc.at("epoch").get<uint64_t>();
    cred.cohort_index = doc.at("cohort").get<uint32_t>();
    cred.position = doc.at("position").get<uint32_t>();
    mpz_class x = hex_to_int(doc.at("x_hex").get<std::string>());
    cred.keypair = keypair_from_secret(*params, x);
    mpz_class y = hex_to_int(doc.at("y_hex").get<std::string>());
    if (cred.keypair.y.v != y) {
      throw PhcError(Err::malformed_file,
                     "stored public key does not match the secret");
    }
    cred.recovery_code =
        hex_decode(doc.at("recovery_code_hex").get<std::string>());
    return cred;
  } catch (const Json::exception& e) {
    throw PhcError(Err::malformed_file,
                   std::string("credential file missing fields: ") + e.what());
  }
}

}  // namespace phc
