#include "phc/errors.hpp"

#include <array>
#include <utility>

namespace phc {

namespace {

struct ErrEntry {
  Err err;
  std::string_view code;
  int exit_code;
};

// Exit codes group by module: 1x crypto, 2x issuance, 3x wallet,
// 4x relying party, 5x net, 6x sim.
constexpr std::array kTable{
    ErrEntry{Err::generation_timeout, "generation-timeout", 10},
    ErrEntry{Err::malformed_signature, "malformed-signature", 11},
    ErrEntry{Err::duplicate_ring_member, "duplicate-ring-member", 12},
    ErrEntry{Err::invalid_index, "invalid-index", 13},
    ErrEntry{Err::key_mismatch, "key-mismatch", 14},
    ErrEntry{Err::internal_error, "internal-error", 19},
    ErrEntry{Err::duplicate_enrollment, "duplicate-enrollment", 20},
    ErrEntry{Err::duplicate_key, "duplicate-key", 21},
    ErrEntry{Err::invalid_ticket, "invalid-ticket", 22},
    ErrEntry{Err::unknown_recovery_code, "unknown-recovery-code", 23},
    ErrEntry{Err::already_revoked_this_epoch, "already-revoked-this-epoch", 24},
    ErrEntry{Err::unknown_epoch, "unknown-epoch", 25},
    ErrEntry{Err::stale_ring, "stale-ring", 30},
    ErrEntry{Err::key_not_in_ring, "key-not-in-ring", 31},
    ErrEntry{Err::malformed_file, "malformed-file", 32},
    ErrEntry{Err::unsupported_version, "unsupported-version", 33},
    ErrEntry{Err::unknown_issuer, "unknown-issuer", 40},
    ErrEntry{Err::stale_epoch, "stale-epoch", 41},
    ErrEntry{Err::bad_ring_signature, "bad-ring-signature", 42},
    ErrEntry{Err::replayed_challenge, "replayed-challenge", 43},
    ErrEntry{Err::invalid_proof, "invalid-proof", 44},
    ErrEntry{Err::limit_reached, "limit-reached", 45},
    ErrEntry{Err::suspended_credential, "suspended-credential", 46},
    ErrEntry{Err::unknown_principal, "unknown-principal", 47},
    ErrEntry{Err::suspended_principal, "suspended-principal", 48},
    ErrEntry{Err::bad_ring_snapshot, "bad-ring-snapshot", 49},
    ErrEntry{Err::malformed_request, "malformed-request", 50},
    ErrEntry{Err::log_corrupt, "log-corrupt", 51},
    ErrEntry{Err::toy_params_rejected, "toy-params-rejected", 60},
};

}  // namespace

std::string_view err_code(Err e) {
  for (const auto& entry : kTable) {
    if (entry.err == e) return entry.code;
  }
  return "internal-error";
}

int err_exit_code(Err e) {
  for (const auto& entry : kTable) {
    if (entry.err == e) return entry.exit_code;
  }
  return 19;
}

Err err_from_code(std::string_view code) {
  for (const auto& entry : kTable) {
    if (entry.code == code) return entry.err;
  }
  throw std::invalid_argument("unknown error code: " + std::string(code));
}

}  // namespace phc
