#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/event_log.hpp"
#include "phc/net/client.hpp"
#include "phc/net/issuer_server.hpp"
#include "phc/net/service_server.hpp"
#include "phc/wire.hpp"

using namespace phc;

namespace {

/// In-process HTTP host bound to an ephemeral loopback port.
struct TestServer {
  httplib::Server srv;
  int port = 0;
  std::thread thread;

  void start() {
    port = srv.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { srv.listen_after_bind(); });
    srv.wait_until_ready();
  }

  ~TestServer() {
    srv.stop();
    if (thread.joinable()) thread.join();
  }
};

struct NetFixture {
  GroupParams params = test256_params();
  Issuer issuer = Issuer::create("iss-net", test256_params(), 900);
  RelyingParty rp = make_rp(issuer);
  TestServer issuer_srv;
  TestServer service_srv;
  uint64_t fake_now = 100;

  static RelyingParty make_rp(const Issuer& issuer) {
    ServiceConfig config;
    config.service_id = "svc-net";
    config.account_limit = 1;
    config.accepted_issuers = {
        AcceptedIssuer{issuer.id(), issuer.public_key()}};
    return RelyingParty::create(config, issuer.params(), 901);
  }

  NetFixture() {
    net::attach_issuer_routes(issuer_srv.srv, issuer);
    net::ServiceServerOptions opts;
    opts.now = [this] { return fake_now; };
    net::attach_service_routes(service_srv.srv, rp, opts);
    issuer_srv.start();
    service_srv.start();
    rp.install_ring(issuer.current_ring());
  }
};

Credential enroll_via_wire(NetFixture& fx, const std::string& root, Drbg& rng) {
  net::IssuerClient cli("127.0.0.1", fx.issuer_srv.port);
  auto info = cli.issuer_key();
  auto [kp, recovery] = create_identity(info.params, rng);
  EnrollmentRequest req{root, kp.y, sha256(recovery), {}};
  EnrollmentReceipt receipt = cli.enroll(info.params, req);
  return Credential{info.issuer_id, info.params.name, receipt.epoch,
                    kp,             receipt.cohort_index, receipt.position,
                    recovery};
}

}  // namespace

TEST_CASE("full wallet-to-service flow over loopback HTTP") {
  NetFixture fx;
  Drbg rng(1);
  Credential cred = enroll_via_wire(fx, "alice", rng);
  fx.rp.install_ring(fx.issuer.current_ring());

  net::IssuerClient issuer_cli("127.0.0.1", fx.issuer_srv.port);
  net::ServiceClient svc_cli("127.0.0.1", fx.service_srv.port);

  EpochRing ring = issuer_cli.ring(fx.params, cred.epoch);
  CHECK(verify_ring(fx.params, fx.issuer.public_key(), ring));

  auto ch = svc_cli.challenge();
  CHECK(ch.nonce.size() == 16);
  CHECK(ch.service_id == "svc-net");

  PresentationContext ctx{cred.issuer_id, ch.service_id,
                          "account-registration", ch.nonce};
  Presentation pres = create_presentation(fx.params, cred, ring, ctx, rng);
  std::string account =
      svc_cli.register_account(fx.params, pres, "account-registration",
                               ch.nonce);
  CHECK(account == "a-1");

  // replaying the consumed challenge is refused with the frozen code
  try {
    svc_cli.register_account(fx.params, pres, "account-registration", ch.nonce);
    FAIL("expected replayed-challenge");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::replayed_challenge);
  }

  // duplicate enrollment surfaces the issuer-side code over the wire
  try {
    enroll_via_wire(fx, "alice", rng);
    FAIL("expected duplicate-enrollment");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::duplicate_enrollment);
  }
}

TEST_CASE("suspension and delegation over the wire") {
  NetFixture fx;
  Drbg rng(2);
  Credential cred = enroll_via_wire(fx, "bob", rng);
  fx.rp.install_ring(fx.issuer.current_ring());

  net::IssuerClient issuer_cli("127.0.0.1", fx.issuer_srv.port);
  net::ServiceClient svc_cli("127.0.0.1", fx.service_srv.port);
  EpochRing ring = issuer_cli.ring(fx.params, cred.epoch);

  auto ch = svc_cli.challenge();
  PresentationContext ctx{cred.issuer_id, ch.service_id,
                          "account-registration", ch.nonce};
  Presentation pres = create_presentation(fx.params, cred, ring, ctx, rng);
  svc_cli.register_account(fx.params, pres, "account-registration", ch.nonce);

  GroupElement tag = pseudonym_tag(fx.params, cred, ctx);
  KeyPair agent = keygen(fx.params, rng);
  DelegationAttestation att = create_delegation(
      fx.params, cred, ctx, agent.y, "agent-task", /*expiry=*/200, rng);
  CHECK(svc_cli.verify_delegation(fx.params, att));

  fx.fake_now = 300;  // expired now
  CHECK_FALSE(svc_cli.verify_delegation(fx.params, att));
  fx.fake_now = 100;

  svc_cli.suspend(fx.params, cred.issuer_id, tag);
  auto ch2 = svc_cli.challenge();
  PresentationContext ctx2{cred.issuer_id, ch2.service_id,
                           "account-registration", ch2.nonce};
  Presentation pres2 = create_presentation(fx.params, cred, ring, ctx2, rng);
  try {
    svc_cli.register_account(fx.params, pres2, "account-registration",
                             ch2.nonce);
    FAIL("expected suspended-credential");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::suspended_credential);
  }
  try {
    svc_cli.verify_delegation(fx.params, att);
    FAIL("expected suspended-principal");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::suspended_principal);
  }
}

TEST_CASE("protocol hygiene on raw wire bytes") {
  NetFixture fx;
  httplib::Client issuer_raw("127.0.0.1", fx.issuer_srv.port);
  httplib::Client service_raw("127.0.0.1", fx.service_srv.port);

  // malformed hex
  Json bad = wire::envelope("enroll", Json{{"root_id", "x"},
                                           {"y", "zz-not-hex"},
                                           {"recovery_hash", "00"}});
  auto res = issuer_raw.Post("/enroll", bad.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  auto [kind, body] = wire::open_envelope_text(res->body);
  CHECK(kind == "error");
  CHECK(body.at("code") == "malformed-request");

  // unknown envelope version
  Json v2 = Json{{"v", 2}, {"kind", "enroll"}, {"body", Json::object()}};
  res = issuer_raw.Post("/enroll", v2.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(wire::open_envelope_text(res->body).second.at("code") ==
        "unsupported-version");

  // not JSON at all
  res = issuer_raw.Post("/enroll", "definitely not json", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);

  // unknown epoch is a 404 with the frozen code
  res = issuer_raw.Get("/ring/99");
  REQUIRE(res);
  CHECK(res->status == 404);
  CHECK(wire::open_envelope_text(res->body).second.at("code") ==
        "unknown-epoch");

  // missing fields on the service side
  res = service_raw.Post("/register",
                         wire::envelope("register", Json::object()).dump(),
                         "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
}

TEST_CASE("issuer responses never leak tags; service responses never leak keys") {
  NetFixture fx;
  Drbg rng(3);
  std::vector<std::string> issuer_bodies, service_bodies;

  net::IssuerClient issuer_cli("127.0.0.1", fx.issuer_srv.port);
  httplib::Client issuer_raw("127.0.0.1", fx.issuer_srv.port);
  httplib::Client service_raw("127.0.0.1", fx.service_srv.port);

  Credential cred = enroll_via_wire(fx, "carol", rng);
  fx.rp.install_ring(fx.issuer.current_ring());
  issuer_bodies.push_back(issuer_raw.Get("/issuer-key")->body);
  issuer_bodies.push_back(issuer_raw.Get("/ring/1")->body);

  auto ch_res = service_raw.Get("/challenge");
  service_bodies.push_back(ch_res->body);
  Json ch_body = wire::open_envelope_text(ch_res->body).second;
  Bytes nonce = hex_decode(ch_body.at("nonce").get<std::string>());

  PresentationContext ctx{cred.issuer_id, "svc-net", "account-registration",
                          nonce};
  Presentation pres = create_presentation(
      fx.params, cred, issuer_cli.ring(fx.params, cred.epoch), ctx, rng);
  Json reg = wire::envelope(
      "register", Json{{"presentation",
                        wire::presentation_to_json(fx.params, pres)},
                       {"scope", "account-registration"},
                       {"challenge", hex_encode(nonce)}});
  service_bodies.push_back(
      service_raw.Post("/register", reg.dump(), "application/json")->body);

  std::string tag_hex =
      int_to_hex(pseudonym_tag(fx.params, cred, ctx).v, fx.params.p_bytes());
  std::string y_hex = int_to_hex(cred.keypair.y.v, fx.params.p_bytes());

  for (const auto& body : issuer_bodies) {
    CHECK(body.find(tag_hex) == std::string::npos);
  }
  for (const auto& body : service_bodies) {
    CHECK(body.find(y_hex) == std::string::npos);
  }
}

TEST_CASE("wire serializations round-trip randomized instances") {
  GroupParams params = test256_params();
  Drbg rng(4);
  Issuer issuer = Issuer::create("iss-x", params, 55);
  for (int i = 0; i < 10; ++i) {
    auto [kp, recovery] = create_identity(params, rng);
    EnrollmentRequest req{"r-" + std::to_string(i), kp.y, sha256(recovery), {}};
    issuer.enroll(req);
  }

  EpochRing ring = issuer.current_ring();
  EpochRing ring2 =
      wire::ring_from_json(params, wire::ring_to_json(params, ring));
  CHECK(ring_signing_bytes(params, ring2) == ring_signing_bytes(params, ring));
  CHECK(ring2.snapshot_sig == ring.snapshot_sig);

  auto [kp, recovery] = create_identity(params, rng);
  EnrollmentRequest req{"alice", kp.y, sha256(recovery),
                        std::string("ticket-hex")};
  EnrollmentRequest req2 =
      wire::enrollment_from_json(params, wire::enrollment_to_json(params, req));
  CHECK(req2.root_id == req.root_id);
  CHECK(req2.y == req.y);
  CHECK(req2.recovery_hash == req.recovery_hash);
  CHECK(req2.reenroll_ticket == req.reenroll_ticket);

  // params round trip including a generated (non-preset) set
  Drbg prng(5);
  GroupParams generated = generate_params(16, prng);
  GroupParams back = wire::params_from_json(wire::params_to_json(generated));
  CHECK(back.p == generated.p);
  CHECK(back.q == generated.q);
  CHECK(back.g == generated.g);
}

TEST_CASE("event log survives round trips and flags corruption") {
  auto dir = std::filesystem::temp_directory_path() / "phc-log-test";
  std::filesystem::create_directories(dir);
  auto path = dir / "events.log";
  std::filesystem::remove(path);

  {
    EventLog log(path);
    log.append(Json{{"kind", "a"}, {"n", 1}});
    log.append_batch({Json{{"kind", "b"}}, Json{{"kind", "c"}}});
  }
  auto events = EventLog::read_all(path);
  REQUIRE(events.size() == 3);
  CHECK(events[0].at("kind") == "a");
  CHECK(events[2].at("kind") == "c");

  CHECK(EventLog::read_all(dir / "absent.log").empty());

  std::ofstream(path, std::ios::app) << "{broken json\n";
  try {
    EventLog::read_all(path);
    FAIL("expected log-corrupt");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::log_corrupt);
  }
  std::filesystem::remove_all(dir);
}
