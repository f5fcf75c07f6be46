#ifndef PHC_RELYING_PARTY_HPP
#define PHC_RELYING_PARTY_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "phc/event_log.hpp"
#include "phc/issuer.hpp"
#include "phc/wallet.hpp"

namespace phc {

struct AcceptedIssuer {
  std::string issuer_id;
  GroupElement pub;  // pinned snapshot-signing key
};

struct ServiceConfig {
  std::string service_id;
  std::vector<AcceptedIssuer> accepted_issuers;
  uint32_t account_limit = 1;  // verified accounts per credential (k)
  std::vector<std::string> scopes = {"account-registration"};
};

struct LedgerEntry {
  uint32_t account_count = 0;
  bool suspended = false;
};

/// Service-provider core. The persisted ledger holds pseudonym tags,
/// counters, and nonces only — never a holder public key. Ring snapshots
/// are transient inputs re-installed from the issuer after a restart.
class RelyingParty {
 public:
  static RelyingParty create(ServiceConfig config, GroupParams params,
                             uint64_t rng_seed);
  /// Rebuild ledger state from persisted events. Ring snapshots must be
  /// re-installed afterwards.
  static RelyingParty replay(const std::vector<Json>& events);

  const Json& creation_event() const { return creation_event_; }

  using EventSink = std::function<void(const std::vector<Json>&)>;
  void set_event_sink(EventSink sink) { sink_ = std::move(sink); }

  /// Fresh 16-byte nonce, recorded until consumed.
  Bytes issue_challenge();

  /// Verify the snapshot signature against the pinned issuer key and
  /// adopt the ring as that issuer's current one.
  void install_ring(const EpochRing& ring);

  /// Full presentation check; consumes the challenge. Returns the
  /// pseudonym tag and nothing else.
  GroupElement verify_presentation(const Presentation& pres,
                                   std::string_view scope, ByteView challenge);

  /// Count one verified account against the tag's limit.
  std::string register_account(const std::string& issuer_id,
                               const GroupElement& tag);

  void suspend(const std::string& issuer_id, const GroupElement& tag);

  /// True iff the attestation verifies under the principal's pseudonym
  /// and has not expired. Throws unknown-principal / suspended-principal.
  bool check_delegation(const DelegationAttestation& att, uint64_t now) const;

  const ServiceConfig& config() const { return config_; }
  const GroupParams& params() const { return params_; }
  std::optional<LedgerEntry> ledger_entry(const std::string& issuer_id,
                                          const GroupElement& tag) const;
  std::optional<uint64_t> current_epoch(const std::string& issuer_id) const;

  /// Serialized ledger (for hygiene scans in tests).
  Json state_dump() const;

 private:
  RelyingParty() = default;
  void init(ServiceConfig config, GroupParams params, uint64_t rng_seed);
  Bytes apply_challenge();
  void apply_consume(const Bytes& nonce);
  std::string apply_register(const std::string& issuer_id,
                             const std::string& tag_hex);
  void apply_suspend(const std::string& issuer_id, const std::string& tag_hex);
  void emit(std::vector<Json> events);
  const AcceptedIssuer* find_issuer(std::string_view issuer_id) const;
  std::string tag_hex(const GroupElement& tag) const;

  ServiceConfig config_;
  GroupParams params_;
  Drbg rng_{0};
  std::map<std::pair<std::string, std::string>, LedgerEntry> ledger_;
  std::set<Bytes> issued_nonces_;
  std::set<Bytes> consumed_nonces_;
  uint64_t account_seq_ = 0;
  std::map<std::string, EpochRing> rings_;  // issuer_id -> current ring
  Json creation_event_;
  EventSink sink_;
  mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
};

}  // namespace phc

#endif
