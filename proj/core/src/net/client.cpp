#include "phc/net/client.hpp"

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/wire.hpp"

namespace phc::net {

namespace {

Json expect(const httplib::Result& result, std::string_view kind) {
  if (!result) {
    throw PhcError(Err::internal_error, "connection failed");
  }
  auto [got_kind, body] = wire::open_envelope_text(result->body);
  if (got_kind == "error") {
    throw PhcError(err_from_code(body.value("code", "internal-error")),
                   body.value("message", ""));
  }
  if (got_kind != kind) {
    throw PhcError(Err::malformed_request,
                   "unexpected response kind: " + got_kind);
  }
  return body;
}

}  // namespace

IssuerClient::IssuerClient(std::string host, int port)
    : cli_(std::move(host), port) {
  cli_.set_read_timeout(30, 0);
}

IssuerKeyInfo IssuerClient::issuer_key() {
  Json body = expect(cli_.Get("/issuer-key"), "issuer-key");
  IssuerKeyInfo info;
  info.issuer_id = body.at("issuer_id").get<std::string>();
  info.params = wire::params_from_json(body.at("params"));
  info.pub = GroupElement{hex_to_int(body.at("y").get<std::string>())};
  info.epoch = body.at("epoch").get<uint64_t>();
  return info;
}

EnrollmentReceipt IssuerClient::enroll(const GroupParams& params,
                                       const EnrollmentRequest& req) {
  Json envelope =
      wire::envelope("enroll", wire::enrollment_to_json(params, req));
  Json body = expect(cli_.Post("/enroll", envelope.dump(), "application/json"),
                     "enroll-receipt");
  return EnrollmentReceipt{body.at("epoch").get<uint64_t>(),
                           body.at("cohort_index").get<uint32_t>(),
                           body.at("position").get<uint32_t>()};
}

std::string IssuerClient::revoke(ByteView recovery_code) {
  Json envelope = wire::envelope(
      "revoke", Json{{"recovery_code", hex_encode(recovery_code)}});
  Json body = expect(cli_.Post("/revoke", envelope.dump(), "application/json"),
                     "revoke-receipt");
  return body.at("reenroll_ticket").get<std::string>();
}

EpochRing IssuerClient::ring(const GroupParams& params, uint64_t epoch) {
  Json body =
      expect(cli_.Get("/ring/" + std::to_string(epoch)), "ring");
  return wire::ring_from_json(params, body);
}

uint64_t IssuerClient::advance_epoch() {
  Json body = expect(cli_.Post("/admin/advance-epoch", "", "application/json"),
                     "epoch");
  return body.at("epoch").get<uint64_t>();
}

ServiceClient::ServiceClient(std::string host, int port)
    : cli_(std::move(host), port) {
  cli_.set_read_timeout(30, 0);
}

ChallengeInfo ServiceClient::challenge() {
  Json body = expect(cli_.Get("/challenge"), "challenge");
  return ChallengeInfo{hex_decode(body.at("nonce").get<std::string>()),
                       body.at("service_id").get<std::string>()};
}

std::string ServiceClient::register_account(const GroupParams& params,
                                            const Presentation& pres,
                                            const std::string& scope,
                                            ByteView challenge) {
  Json envelope = wire::envelope(
      "register",
      Json{{"presentation", wire::presentation_to_json(params, pres)},
           {"scope", scope},
           {"challenge", hex_encode(challenge)}});
  Json body = expect(cli_.Post("/register", envelope.dump(), "application/json"),
                     "account");
  return body.at("account_id").get<std::string>();
}

void ServiceClient::suspend(const GroupParams& params,
                            const std::string& issuer_id,
                            const GroupElement& tag) {
  Json envelope = wire::envelope(
      "suspend", Json{{"issuer_id", issuer_id},
                      {"tag", int_to_hex(tag.v, params.p_bytes())}});
  expect(cli_.Post("/suspend", envelope.dump(), "application/json"), "ok");
}

bool ServiceClient::verify_delegation(const GroupParams& params,
                                      const DelegationAttestation& att) {
  Json envelope = wire::envelope(
      "delegation-verify",
      Json{{"attestation", wire::attestation_to_json(params, att)}});
  Json body = expect(
      cli_.Post("/delegation/verify", envelope.dump(), "application/json"),
      "delegation-result");
  return body.at("valid").get<bool>();
}

void ServiceClient::install_ring(const GroupParams& params,
                                 const EpochRing& ring) {
  Json envelope =
      wire::envelope("install-ring", wire::ring_to_json(params, ring));
  expect(cli_.Post("/admin/install-ring", envelope.dump(), "application/json"),
         "ok");
}

}  // namespace phc::net
