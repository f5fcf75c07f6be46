#ifndef PHC_WIRE_HPP
#define PHC_WIRE_HPP

#include <string>

#include "phc/errors.hpp"
#include "phc/event_log.hpp"
#include "phc/issuer.hpp"
#include "phc/relying_party.hpp"
#include "phc/wallet.hpp"

namespace phc::wire {

inline constexpr int kProtocolVersion = 1;

/// Envelope carried by every request and response body:
///   {"v": 1, "kind": "<kind>", "body": { ... }}
Json envelope(std::string_view kind, Json body);

/// Validate version and shape; returns (kind, body).
/// Throws malformed-request / unsupported-version.
std::pair<std::string, Json> open_envelope(const Json& doc);
std::pair<std::string, Json> open_envelope_text(const std::string& text);

Json error_body(const PhcError& e);

// ---- domain objects <-> JSON bodies -----------------------------------------
// Hex fields are lowercase and fixed-width. from_* functions validate
// ranges and subgroup membership before anything touches domain logic.

Json params_to_json(const GroupParams& params);
GroupParams params_from_json(const Json& j);

Json ring_to_json(const GroupParams& params, const EpochRing& ring);
EpochRing ring_from_json(const GroupParams& params, const Json& j);

Json presentation_to_json(const GroupParams& params, const Presentation& p);
Presentation presentation_from_json(const GroupParams& params, const Json& j);

Json attestation_to_json(const GroupParams& params,
                         const DelegationAttestation& att);
DelegationAttestation attestation_from_json(const GroupParams& params,
                                            const Json& j);

Json enrollment_to_json(const GroupParams& params, const EnrollmentRequest& req);
EnrollmentRequest enrollment_from_json(const GroupParams& params, const Json& j);

}  // namespace phc::wire

#endif
