#ifndef PHC_WALLET_HPP
#define PHC_WALLET_HPP

#include <filesystem>
#include <string>

#include "phc/issuer.hpp"
#include "phc/lsag.hpp"
#include "phc/schnorr.hpp"

namespace phc {

/// Holder-side credential: the secret key, where its public half sits in
/// the issuer's ring, and the recovery code that can revoke it.
struct Credential {
  std::string issuer_id;
  std::string params_name;
  uint64_t epoch = 0;
  KeyPair keypair;
  uint32_t cohort_index = 0;
  uint32_t position = 0;
  Bytes recovery_code;
};

/// Everything that scopes a presentation. The pseudonym tag is derived
/// from (issuer_id, service_id, scope) only; the challenge is bound into
/// the signed message instead, so the tag stays stable per service while
/// each presentation stays replay-proof.
struct PresentationContext {
  std::string issuer_id;
  std::string service_id;
  std::string scope;
  Bytes challenge;
};

struct Presentation {
  std::string issuer_id;
  uint64_t epoch = 0;
  uint32_t cohort_index = 0;
  RingSignature sig;
};

/// Holder-signed statement that agent_pub may act under the holder's
/// service pseudonym for `scope` until `expiry`. Signed with the
/// credential secret against the context base, public key = the tag, so
/// it proves pseudonym control without touching the credential key.
struct DelegationAttestation {
  std::string issuer_id;
  std::string pseudonym_scope;
  GroupElement tag;
  GroupElement agent_pub;
  std::string scope;
  uint64_t expiry = 0;
  SchnorrSignature sig;
};

/// Fresh keypair plus a 16-byte recovery code.
std::pair<KeyPair, Bytes> create_identity(const GroupParams& params, Drbg& rng);

/// Canonical context string: (issuer_id, service_id, scope). No epoch,
/// no challenge.
Bytes presentation_context_bytes(std::string_view issuer_id,
                                 std::string_view service_id,
                                 std::string_view scope);

/// Canonical signed message: (service_id, scope, challenge).
Bytes presentation_message_bytes(std::string_view service_id,
                                 std::string_view scope, ByteView challenge);

/// Canonical delegation message: (agent_pub, scope, expiry).
Bytes delegation_message_bytes(const GroupParams& params,
                               const GroupElement& agent_pub,
                               std::string_view scope, uint64_t expiry);

/// Sign over the holder's cohort of `ring`. Throws stale-ring on an
/// epoch mismatch and key-not-in-ring when the key is absent from the
/// recorded cohort (position may have shifted after revocations; it is
/// re-resolved here).
Presentation create_presentation(const GroupParams& params,
                                 const Credential& cred, const EpochRing& ring,
                                 const PresentationContext& ctx, Drbg& rng);

/// The pseudonym tag this credential produces in this context.
GroupElement pseudonym_tag(const GroupParams& params, const Credential& cred,
                           const PresentationContext& ctx);

DelegationAttestation create_delegation(const GroupParams& params,
                                        const Credential& cred,
                                        const PresentationContext& ctx,
                                        const GroupElement& agent_pub,
                                        std::string scope, uint64_t expiry,
                                        Drbg& rng);

/// Credential file: single JSON object, version 1, hex fields.
void save_credential(const Credential& cred, const std::filesystem::path& path);
Credential load_credential(const std::filesystem::path& path);

}  // namespace phc

#endif
