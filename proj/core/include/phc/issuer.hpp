#ifndef PHC_ISSUER_HPP
#define PHC_ISSUER_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "phc/event_log.hpp"
#include "phc/group.hpp"
#include "phc/schnorr.hpp"
#include "phc/sha256.hpp"

namespace phc {

/// Signed snapshot of every valid credential key for one epoch,
/// partitioned into bounded cohorts. The cohort is the anonymity set a
/// presentation signs over.
struct EpochRing {
  std::string issuer_id;
  uint64_t epoch = 0;
  std::vector<std::vector<GroupElement>> cohorts;
  SchnorrSignature snapshot_sig;

  size_t total_keys() const;
  /// (cohort, position) of a key, if present anywhere in the ring.
  std::optional<std::pair<uint32_t, uint32_t>> find(const GroupElement& y) const;
};

/// Canonical bytes the snapshot signature covers.
Bytes ring_signing_bytes(const GroupParams& params, const EpochRing& ring);

bool verify_ring(const GroupParams& params, const GroupElement& issuer_pub,
                 const EpochRing& ring);

struct EnrollmentRequest {
  std::string root_id;  // opaque verified identifier from the root of trust
  GroupElement y;
  Digest recovery_hash{};
  std::optional<std::string> reenroll_ticket;
};

struct EnrollmentReceipt {
  uint64_t epoch = 0;
  uint32_t cohort_index = 0;
  uint32_t position = 0;
};

struct IssuerOptions {
  uint32_t cohort_capacity = 64;
  /// Dedup enforcement. Off models an issuer with no working
  /// one-per-person check (the simulator's "unlimited" regime).
  bool enforce_one_per_person = true;
};

/// Issuer-side state machine. Every mutation appends events to the sink;
/// replaying those events against replay() reconstructs the state
/// bit-exactly, including the internal randomness stream.
///
/// Persisted state never contains a raw root identifier, and no single
/// event links a dedup digest to a credential key.
class Issuer {
 public:
  static Issuer create(std::string issuer_id, GroupParams params,
                       uint64_t rng_seed, IssuerOptions opts = {});
  static Issuer replay(const std::vector<Json>& events);

  /// The init event; hosts write it as the first log line.
  const Json& creation_event() const { return creation_event_; }

  using EventSink = std::function<void(const std::vector<Json>&)>;
  void set_event_sink(EventSink sink) { sink_ = std::move(sink); }

  EnrollmentReceipt enroll(const EnrollmentRequest& req);
  uint64_t advance_epoch();
  /// Returns a one-time re-enrollment ticket.
  std::string revoke(ByteView recovery_code);

  /// Snapshot copies, safe to read while mutations proceed.
  EpochRing ring(uint64_t epoch) const;
  EpochRing current_ring() const;
  uint64_t current_epoch() const { return current_epoch_; }

  const std::string& id() const { return issuer_id_; }
  const GroupParams& params() const { return params_; }
  GroupElement public_key() const { return signing_.y; }
  const IssuerOptions& options() const { return opts_; }

  /// Serialized issuer-private state (for hygiene scans in tests).
  Json state_dump() const;

 private:
  Issuer() = default;
  void init(std::string issuer_id, GroupParams params, uint64_t rng_seed,
            IssuerOptions opts);
  void apply_dedup_mark(const Digest& digest, const std::string& ticket);
  EnrollmentReceipt apply_ring_append(const GroupElement& y,
                                      const Digest& recovery_hash);
  std::string apply_revoke(const Digest& recovery_hash);
  void apply_advance();
  void resign_current_ring();
  void emit(std::vector<Json> events);

  std::string issuer_id_;
  GroupParams params_;
  IssuerOptions opts_;
  Drbg rng_{0};
  KeyPair signing_;
  Bytes dedup_salt_;
  uint64_t current_epoch_ = 0;
  std::map<uint64_t, EpochRing> rings_;
  std::set<Bytes> dedup_set_;
  std::set<Bytes> revoked_once_;
  std::map<Bytes, GroupElement> recovery_bindings_;
  std::set<std::string> reenroll_tickets_;
  Json creation_event_;
  EventSink sink_;
  mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
};

}  // namespace phc

#endif
