#ifndef PHC_NET_CLIENT_HPP
#define PHC_NET_CLIENT_HPP

#include <httplib.h>

#include <string>

#include "phc/issuer.hpp"
#include "phc/relying_party.hpp"
#include "phc/wallet.hpp"

namespace phc::net {

/// Thin HTTP clients. Error envelopes come back as the PhcError they
/// encode, so callers see the same exceptions as in-process use.

struct IssuerKeyInfo {
  std::string issuer_id;
  GroupParams params;
  GroupElement pub;
  uint64_t epoch = 0;
};

class IssuerClient {
 public:
  IssuerClient(std::string host, int port);

  IssuerKeyInfo issuer_key();
  EnrollmentReceipt enroll(const GroupParams& params,
                           const EnrollmentRequest& req);
  std::string revoke(ByteView recovery_code);
  EpochRing ring(const GroupParams& params, uint64_t epoch);
  uint64_t advance_epoch();

 private:
  httplib::Client cli_;
};

struct ChallengeInfo {
  Bytes nonce;
  std::string service_id;
};

class ServiceClient {
 public:
  ServiceClient(std::string host, int port);

  ChallengeInfo challenge();
  std::string register_account(const GroupParams& params,
                               const Presentation& pres,
                               const std::string& scope, ByteView challenge);
  void suspend(const GroupParams& params, const std::string& issuer_id,
               const GroupElement& tag);
  bool verify_delegation(const GroupParams& params,
                         const DelegationAttestation& att);
  void install_ring(const GroupParams& params, const EpochRing& ring);

 private:
  httplib::Client cli_;
};

}  // namespace phc::net

#endif
