#include <doctest.h>

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/relying_party.hpp"
#include "phc/wallet.hpp"

using namespace phc;

namespace {

struct Fixture {
  GroupParams params = test256_params();
  Drbg rng{100};
  Issuer issuer = Issuer::create("iss-a", test256_params(), 200);
  std::vector<Credential> creds;

  Credential enroll(const std::string& root) {
    auto [kp, recovery] = create_identity(params, rng);
    EnrollmentRequest req{root, kp.y, sha256(recovery), {}};
    EnrollmentReceipt receipt = issuer.enroll(req);
    Credential cred{issuer.id(), params.name, receipt.epoch, kp,
                    receipt.cohort_index, receipt.position, recovery};
    creds.push_back(cred);
    return cred;
  }

  RelyingParty service(const std::string& id, uint32_t k) {
    ServiceConfig config;
    config.service_id = id;
    config.account_limit = k;
    config.accepted_issuers = {
        AcceptedIssuer{issuer.id(), issuer.public_key()}};
    RelyingParty rp = RelyingParty::create(config, params, 300);
    rp.install_ring(issuer.current_ring());
    return rp;
  }

  Presentation present(const Credential& cred, RelyingParty& rp,
                       ByteView challenge,
                       const std::string& scope = "account-registration") {
    PresentationContext ctx{cred.issuer_id, rp.config().service_id, scope,
                            Bytes(challenge.begin(), challenge.end())};
    return create_presentation(params, cred, issuer.current_ring(), ctx, rng);
  }
};

}  // namespace

TEST_CASE("challenges are fresh, sixteen bytes, one-shot") {
  Fixture fx;
  fx.enroll("alice");
  RelyingParty rp = fx.service("svc", 1);
  Bytes c1 = rp.issue_challenge();
  Bytes c2 = rp.issue_challenge();
  CHECK(c1.size() == 16);
  CHECK(c1 != c2);

  Presentation pres = fx.present(fx.creds[0], rp, c1);
  CHECK_NOTHROW(rp.verify_presentation(pres, "account-registration", c1));
  // same nonce again: burnt
  Presentation pres2 = fx.present(fx.creds[0], rp, c1);
  try {
    rp.verify_presentation(pres2, "account-registration", c1);
    FAIL("expected replayed-challenge");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::replayed_challenge);
  }
  // a nonce the service never issued
  Bytes alien(16, 9);
  try {
    rp.verify_presentation(fx.present(fx.creds[0], rp, alien),
                           "account-registration", alien);
    FAIL("expected replayed-challenge");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::replayed_challenge);
  }
}

TEST_CASE("verification rejects foreign issuers and stale epochs") {
  Fixture fx;
  Credential alice = fx.enroll("alice");
  RelyingParty rp = fx.service("svc", 1);

  Bytes c = rp.issue_challenge();
  Presentation pres = fx.present(alice, rp, c);
  Presentation foreign = pres;
  foreign.issuer_id = "unknown-issuer";
  try {
    rp.verify_presentation(foreign, "account-registration", c);
    FAIL("expected unknown-issuer");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::unknown_issuer);
  }

  // yesterday's epoch after an advance
  fx.issuer.advance_epoch();
  rp.install_ring(fx.issuer.current_ring());
  try {
    rp.verify_presentation(pres, "account-registration", c);
    FAIL("expected stale-epoch");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::stale_epoch);
  }
}

TEST_CASE("tampered proofs split into invalid-proof and bad-ring-signature") {
  Fixture fx;
  Credential alice = fx.enroll("alice");
  fx.enroll("bob");
  RelyingParty rp = fx.service("svc", 1);

  Bytes c = rp.issue_challenge();
  Presentation pres = fx.present(alice, rp, c);
  pres.sig.c1.v = (pres.sig.c1.v + 1) % fx.params.q;  // break the chain
  try {
    rp.verify_presentation(pres, "account-registration", c);
    FAIL("expected invalid-proof");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::invalid_proof);
  }

  Bytes c2 = rp.issue_challenge();
  Presentation pres2 = fx.present(alice, rp, c2);
  pres2.sig.s.pop_back();  // structurally broken
  try {
    rp.verify_presentation(pres2, "account-registration", c2);
    FAIL("expected bad-ring-signature");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::bad_ring_signature);
  }

  Bytes c3 = rp.issue_challenge();
  Presentation pres3 = fx.present(alice, rp, c3);
  pres3.cohort_index = 7;  // no such cohort
  try {
    rp.verify_presentation(pres3, "account-registration", c3);
    FAIL("expected invalid-proof");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::invalid_proof);
  }
}

TEST_CASE("account limits: k=1 and k=3") {
  Fixture fx;
  Credential alice = fx.enroll("alice");
  Credential bob = fx.enroll("bob");

  RelyingParty one = fx.service("svc-one", 1);
  Bytes c = one.issue_challenge();
  GroupElement tag =
      one.verify_presentation(fx.present(alice, one, c),
                              "account-registration", c);
  CHECK(one.register_account(fx.issuer.id(), tag) == "a-1");
  try {
    one.register_account(fx.issuer.id(), tag);
    FAIL("expected limit-reached");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::limit_reached);
  }

  RelyingParty three = fx.service("svc-three", 3);
  Bytes c2 = three.issue_challenge();
  GroupElement tag3 =
      three.verify_presentation(fx.present(alice, three, c2),
                                "account-registration", c2);
  for (int i = 0; i < 3; ++i) {
    CHECK_NOTHROW(three.register_account(fx.issuer.id(), tag3));
  }
  try {
    three.register_account(fx.issuer.id(), tag3);
    FAIL("expected limit-reached");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::limit_reached);
  }

  // distinct credentials have independent counters
  Bytes c3 = three.issue_challenge();
  GroupElement bob_tag =
      three.verify_presentation(fx.present(bob, three, c3),
                                "account-registration", c3);
  CHECK_FALSE(tags_link(tag3, bob_tag));
  CHECK_NOTHROW(three.register_account(fx.issuer.id(), bob_tag));
}

TEST_CASE("suspension blocks registration, survives epochs, is idempotent") {
  Fixture fx;
  Credential alice = fx.enroll("alice");
  RelyingParty rp = fx.service("svc", 2);

  Bytes c = rp.issue_challenge();
  GroupElement tag = rp.verify_presentation(fx.present(alice, rp, c),
                                            "account-registration", c);
  rp.register_account(fx.issuer.id(), tag);
  rp.suspend(fx.issuer.id(), tag);
  try {
    rp.register_account(fx.issuer.id(), tag);
    FAIL("expected suspended-credential");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::suspended_credential);
  }

  // suspending an unseen tag creates a suspended entry
  GroupElement unseen{powmod(fx.params.g, 12345, fx.params.p)};
  rp.suspend(fx.issuer.id(), unseen);
  auto entry = rp.ledger_entry(fx.issuer.id(), unseen);
  REQUIRE(entry.has_value());
  CHECK(entry->suspended);

  // epoch rollover with the same key: same tag, still suspended
  fx.issuer.advance_epoch();
  EnrollmentRequest req{"alice", alice.keypair.y,
                        sha256(alice.recovery_code), {}};
  EnrollmentReceipt receipt = fx.issuer.enroll(req);
  alice.epoch = receipt.epoch;
  alice.cohort_index = receipt.cohort_index;
  alice.position = receipt.position;
  rp.install_ring(fx.issuer.current_ring());
  Bytes c2 = rp.issue_challenge();
  GroupElement tag2 = rp.verify_presentation(fx.present(alice, rp, c2),
                                             "account-registration", c2);
  CHECK(tags_link(tag, tag2));
  try {
    rp.register_account(fx.issuer.id(), tag2);
    FAIL("expected suspended-credential");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::suspended_credential);
  }
}

TEST_CASE("delegation checks require a live principal") {
  Fixture fx;
  Credential alice = fx.enroll("alice");
  RelyingParty rp = fx.service("svc", 1);
  Bytes c = rp.issue_challenge();
  GroupElement tag = rp.verify_presentation(fx.present(alice, rp, c),
                                            "account-registration", c);
  rp.register_account(fx.issuer.id(), tag);

  KeyPair agent = keygen(fx.params, fx.rng);
  PresentationContext ctx{fx.issuer.id(), "svc", "account-registration", {}};
  DelegationAttestation att = create_delegation(fx.params, alice, ctx, agent.y,
                                                "task", 100, fx.rng);
  CHECK(rp.check_delegation(att, 50));

  DelegationAttestation stranger = att;
  stranger.tag = GroupElement{powmod(fx.params.g, 777, fx.params.p)};
  try {
    rp.check_delegation(stranger, 50);
    FAIL("expected unknown-principal");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::unknown_principal);
  }

  rp.suspend(fx.issuer.id(), tag);
  try {
    rp.check_delegation(att, 50);
    FAIL("expected suspended-principal");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::suspended_principal);
  }
}

TEST_CASE("service state holds tags and nonces, never enrolled keys") {
  Fixture fx;
  Credential alice = fx.enroll("alice");
  Credential bob = fx.enroll("bob");
  RelyingParty rp = fx.service("svc", 1);
  for (const Credential* cred : {&alice, &bob}) {
    Bytes c = rp.issue_challenge();
    GroupElement tag = rp.verify_presentation(fx.present(*cred, rp, c),
                                              "account-registration", c);
    rp.register_account(fx.issuer.id(), tag);
  }
  std::string state = rp.state_dump().dump();
  for (const auto& cred : fx.creds) {
    CHECK(state.find(int_to_hex(cred.keypair.y.v, fx.params.p_bytes())) ==
          std::string::npos);
  }
}

TEST_CASE("ledger replay reconstructs state and catches divergence") {
  Fixture fx;
  Credential alice = fx.enroll("alice");
  RelyingParty rp = fx.service("svc", 2);

  std::vector<Json> log;
  log.push_back(rp.creation_event());
  rp.set_event_sink([&log](const std::vector<Json>& evs) {
    log.insert(log.end(), evs.begin(), evs.end());
  });

  Bytes c = rp.issue_challenge();
  GroupElement tag = rp.verify_presentation(fx.present(alice, rp, c),
                                            "account-registration", c);
  rp.register_account(fx.issuer.id(), tag);
  rp.suspend(fx.issuer.id(), tag);

  RelyingParty replayed = RelyingParty::replay(log);
  CHECK(replayed.state_dump().dump() == rp.state_dump().dump());

  // future nonces agree (internal randomness replayed to the same point)
  CHECK(replayed.issue_challenge() == rp.issue_challenge());

  // a corrupted line is flagged, not silently absorbed
  std::vector<Json> bad = log;
  for (auto& ev : bad) {
    if (ev.value("kind", "") == "challenge") {
      ev["nonce"] = std::string(32, 'f');
      break;
    }
  }
  try {
    RelyingParty::replay(bad);
    FAIL("expected log-corrupt");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::log_corrupt);
  }
}

TEST_CASE("ring installs demand an accepted issuer and a valid snapshot") {
  Fixture fx;
  fx.enroll("alice");
  RelyingParty rp = fx.service("svc", 1);

  EpochRing ring = fx.issuer.current_ring();
  ring.issuer_id = "somebody-else";
  try {
    rp.install_ring(ring);
    FAIL("expected unknown-issuer");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::unknown_issuer);
  }

  EpochRing doctored = fx.issuer.current_ring();
  Drbg other(9);
  doctored.cohorts[0][0] = keygen(fx.params, other).y;
  try {
    rp.install_ring(doctored);
    FAIL("expected bad-ring-snapshot");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::bad_ring_snapshot);
  }
}
