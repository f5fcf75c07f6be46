#ifndef PHC_ERRORS_HPP
#define PHC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace phc {

/// Every failure surfaced by the protocol carries one of these codes.
/// The string form is frozen on the wire (docs/protocol.md) and the
/// exit-code form is what the CLI returns.
enum class Err {
  // crypto_core
  generation_timeout,
  malformed_signature,
  duplicate_ring_member,
  invalid_index,
  key_mismatch,
  internal_error,
  // issuance
  duplicate_enrollment,
  duplicate_key,
  invalid_ticket,
  unknown_recovery_code,
  already_revoked_this_epoch,
  unknown_epoch,
  // wallet
  stale_ring,
  key_not_in_ring,
  malformed_file,
  unsupported_version,
  // relying party
  unknown_issuer,
  stale_epoch,
  bad_ring_signature,
  replayed_challenge,
  invalid_proof,
  limit_reached,
  suspended_credential,
  unknown_principal,
  suspended_principal,
  bad_ring_snapshot,
  // net / persistence
  malformed_request,
  log_corrupt,
  // simulator
  toy_params_rejected,
};

/// Stable kebab-case identifier, e.g. "duplicate-enrollment".
std::string_view err_code(Err e);

/// Distinct nonzero process exit code per error class.
int err_exit_code(Err e);

/// Inverse of err_code; throws std::invalid_argument for unknown strings.
Err err_from_code(std::string_view code);

class PhcError : public std::runtime_error {
 public:
  PhcError(Err code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  explicit PhcError(Err code)
      : std::runtime_error(std::string(err_code(code))), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

}  // namespace phc

#endif
