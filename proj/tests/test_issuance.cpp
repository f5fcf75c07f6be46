#include <doctest.h>

#include <map>

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/issuer.hpp"
#include "phc/wallet.hpp"
#include "phc/wire.hpp"

using namespace phc;

namespace {

struct Enrolled {
  KeyPair kp;
  Bytes recovery;
  EnrollmentReceipt receipt;
};

Enrolled enroll_person(Issuer& issuer, const std::string& root_id, Drbg& rng,
                       std::optional<std::string> ticket = {}) {
  auto [kp, recovery] = create_identity(issuer.params(), rng);
  EnrollmentRequest req;
  req.root_id = root_id;
  req.y = kp.y;
  req.recovery_hash = sha256(recovery);
  req.reenroll_ticket = std::move(ticket);
  EnrollmentReceipt receipt = issuer.enroll(req);
  return Enrolled{kp, recovery, receipt};
}

}  // namespace

TEST_CASE("fresh enrollment grows the ring; duplicates are refused") {
  Drbg rng(1);
  Issuer issuer = Issuer::create("iss-a", test256_params(), 100);
  CHECK(issuer.current_ring().total_keys() == 0);

  Enrolled alice = enroll_person(issuer, "alice-root", rng);
  CHECK(alice.receipt.epoch == 1);
  CHECK(issuer.current_ring().total_keys() == 1);
  CHECK(issuer.current_ring().find(alice.kp.y).has_value());

  // same person again
  try {
    enroll_person(issuer, "alice-root", rng);
    FAIL("expected duplicate-enrollment");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::duplicate_enrollment);
  }

  // same key again under another root
  EnrollmentRequest req;
  req.root_id = "mallory-root";
  req.y = alice.kp.y;
  req.recovery_hash = sha256(to_bytes("whatever"));
  try {
    issuer.enroll(req);
    FAIL("expected duplicate-key");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::duplicate_key);
  }
}

TEST_CASE("one person may enroll at two distinct issuers") {
  Drbg rng(2);
  Issuer a = Issuer::create("iss-a", test256_params(), 1);
  Issuer b = Issuer::create("iss-b", test256_params(), 2);
  CHECK_NOTHROW(enroll_person(a, "carol-root", rng));
  CHECK_NOTHROW(enroll_person(b, "carol-root", rng));
}

TEST_CASE("epoch advance resets dedup and opens an empty ring") {
  Drbg rng(3);
  Issuer issuer = Issuer::create("iss-a", test256_params(), 101);
  Enrolled alice = enroll_person(issuer, "alice-root", rng);
  CHECK(issuer.advance_epoch() == 2);
  CHECK(issuer.current_ring().total_keys() == 0);
  // prior ring retained read-only
  CHECK(issuer.ring(1).total_keys() == 1);

  // the holder may resubmit the same key after expiry
  EnrollmentRequest req;
  req.root_id = "alice-root";
  req.y = alice.kp.y;
  req.recovery_hash = sha256(alice.recovery);
  CHECK_NOTHROW(issuer.enroll(req));
  CHECK(issuer.current_ring().find(alice.kp.y).has_value());

  CHECK_THROWS_AS(issuer.ring(99), PhcError);
}

TEST_CASE("revocation removes the key and grants one ticket") {
  Drbg rng(4);
  Issuer issuer = Issuer::create("iss-a", test256_params(), 102);
  Enrolled alice = enroll_person(issuer, "alice-root", rng);
  Enrolled bob = enroll_person(issuer, "bob-root", rng);

  std::string ticket = issuer.revoke(alice.recovery);
  CHECK_FALSE(issuer.current_ring().find(alice.kp.y).has_value());
  CHECK(issuer.current_ring().find(bob.kp.y).has_value());
  CHECK(verify_ring(issuer.params(), issuer.public_key(),
                    issuer.current_ring()));

  // unknown code
  try {
    issuer.revoke(to_bytes("not a real code"));
    FAIL("expected unknown-recovery-code");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::unknown_recovery_code);
  }

  // re-enroll with the ticket
  Enrolled alice2 = enroll_person(issuer, "alice-root", rng, ticket);
  CHECK(issuer.current_ring().find(alice2.kp.y).has_value());

  // without a ticket it would have been refused; with a spent one too
  try {
    enroll_person(issuer, "alice-root", rng, ticket);
    FAIL("expected invalid-ticket");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::invalid_ticket);
  }

  // second revocation cycle in the same epoch stops at redemption
  std::string ticket2 = issuer.revoke(alice2.recovery);
  try {
    enroll_person(issuer, "alice-root", rng, ticket2);
    FAIL("expected already-revoked-this-epoch");
  } catch (const PhcError& e) {
    CHECK(e.code() == Err::already_revoked_this_epoch);
  }

  // next epoch clears the cap
  issuer.advance_epoch();
  CHECK_NOTHROW(enroll_person(issuer, "alice-root", rng));
}

TEST_CASE("published rings verify; tampering breaks them; empty ring is fine") {
  Drbg rng(5);
  Issuer issuer = Issuer::create("iss-a", test256_params(), 103);
  CHECK(verify_ring(issuer.params(), issuer.public_key(),
                    issuer.current_ring()));  // zero cohorts
  for (int i = 0; i < 5; ++i) {
    enroll_person(issuer, "root-" + std::to_string(i), rng);
  }
  EpochRing ring = issuer.current_ring();
  CHECK(verify_ring(issuer.params(), issuer.public_key(), ring));

  EpochRing tampered = ring;
  Drbg other(6);
  tampered.cohorts[0][0] = keygen(issuer.params(), other).y;
  CHECK_FALSE(verify_ring(issuer.params(), issuer.public_key(), tampered));

  EpochRing renumbered = ring;
  renumbered.epoch += 1;
  CHECK_FALSE(
      verify_ring(issuer.params(), issuer.public_key(), renumbered));
}

TEST_CASE("cohorts fill to capacity and placement favors the least full") {
  Drbg rng(7);
  IssuerOptions opts;
  opts.cohort_capacity = 4;
  Issuer issuer = Issuer::create("iss-a", test256_params(), 104, opts);
  std::map<std::string, Enrolled> people;
  for (int i = 0; i < 9; ++i) {
    std::string root = "root-" + std::to_string(i);
    people.emplace(root, enroll_person(issuer, root, rng));
  }
  EpochRing ring = issuer.current_ring();
  REQUIRE(ring.cohorts.size() == 3);
  CHECK(ring.cohorts[0].size() == 4);
  CHECK(ring.cohorts[1].size() == 4);
  CHECK(ring.cohorts[2].size() == 1);

  // free a slot in cohort 0; it becomes least-full alongside cohort 2
  issuer.revoke(people.at("root-0").recovery);
  Enrolled lateness = enroll_person(issuer, "root-9", rng);
  CHECK(lateness.receipt.cohort_index == 0);
}

TEST_CASE("persisted issuer state is clean of root ids and key linkage") {
  Drbg rng(8);
  Issuer issuer = Issuer::create("iss-a", test256_params(), 105);
  std::vector<Json> log;
  log.push_back(issuer.creation_event());
  issuer.set_event_sink([&log](const std::vector<Json>& evs) {
    log.insert(log.end(), evs.begin(), evs.end());
  });

  std::vector<std::string> roots = {"alice-ssn-hash", "bob-passport-42",
                                    "carol-wot-key"};
  std::map<std::string, Enrolled> people;
  for (const auto& r : roots) people.emplace(r, enroll_person(issuer, r, rng));
  issuer.revoke(people.at("bob-passport-42").recovery);

  std::string all_lines;
  for (const auto& ev : log) all_lines += ev.dump() + "\n";
  std::string state = issuer.state_dump().dump();

  for (const auto& r : roots) {
    CHECK(all_lines.find(r) == std::string::npos);
    CHECK(state.find(r) == std::string::npos);
  }
  // no single record carries both a dedup digest and a credential key
  for (const auto& ev : log) {
    bool has_digest = ev.contains("digest");
    bool has_key = ev.contains("y");
    CHECK_FALSE((has_digest && has_key));
  }
}

TEST_CASE("event replay reconstructs issuer state bit-exactly") {
  Drbg rng(9);
  Issuer issuer = Issuer::create("iss-a", test256_params(), 106);
  std::vector<Json> log;
  log.push_back(issuer.creation_event());
  issuer.set_event_sink([&log](const std::vector<Json>& evs) {
    log.insert(log.end(), evs.begin(), evs.end());
  });

  Enrolled alice = enroll_person(issuer, "alice", rng);
  Enrolled bob = enroll_person(issuer, "bob", rng);
  std::string ticket = issuer.revoke(alice.recovery);
  enroll_person(issuer, "alice", rng, ticket);
  issuer.advance_epoch();
  enroll_person(issuer, "dora", rng);

  Issuer replayed = Issuer::replay(log);
  CHECK(replayed.state_dump().dump() == issuer.state_dump().dump());
  CHECK(wire::ring_to_json(issuer.params(), replayed.current_ring()).dump() ==
        wire::ring_to_json(issuer.params(), issuer.current_ring()).dump());
  CHECK(replayed.current_epoch() == issuer.current_epoch());

  // future operations agree too (same internal randomness position)
  Drbg ra(77), rb(77);
  Enrolled via_orig = enroll_person(issuer, "erin", ra);
  Enrolled via_replay = enroll_person(replayed, "erin", rb);
  CHECK(via_orig.receipt.cohort_index == via_replay.receipt.cohort_index);
  CHECK(via_orig.receipt.position == via_replay.receipt.position);
  CHECK(wire::ring_to_json(issuer.params(), replayed.current_ring()).dump() ==
        wire::ring_to_json(issuer.params(), issuer.current_ring()).dump());
}

TEST_CASE("randomized interleaving never exceeds the per-person cap") {
  Drbg rng(10);
  Drbg scheduler(11);
  Issuer issuer = Issuer::create("iss-a", test256_params(), 107);

  constexpr int kPeople = 12;
  struct PersonState {
    std::optional<Enrolled> active;
    std::optional<std::string> ticket;
    int enrollments_this_epoch = 0;
    int ticket_redemptions_this_epoch = 0;
  };
  std::vector<PersonState> people(kPeople);

  for (int op = 0; op < 800; ++op) {
    size_t who = static_cast<size_t>(scheduler.below(kPeople).get_ui());
    PersonState& p = people[who];
    std::string root = "root-" + std::to_string(who);
    int action = static_cast<int>(scheduler.below(20).get_ui());
    if (action == 0) {
      issuer.advance_epoch();
      for (auto& q : people) {
        q.active.reset();
        q.ticket.reset();
        q.enrollments_this_epoch = 0;
        q.ticket_redemptions_this_epoch = 0;
      }
      continue;
    }
    if (action < 12) {  // try to enroll
      std::optional<std::string> ticket = p.ticket;
      try {
        Enrolled e = enroll_person(issuer, root, rng, ticket);
        p.active = e;
        p.enrollments_this_epoch += 1;
        if (ticket) {
          p.ticket.reset();
          p.ticket_redemptions_this_epoch += 1;
        }
      } catch (const PhcError&) {
      }
    } else {  // try to revoke
      if (p.active) {
        try {
          p.ticket = issuer.revoke(p.active->recovery);
          p.active.reset();
        } catch (const PhcError&) {
        }
      }
    }
    for (const auto& q : people) {
      CHECK(q.enrollments_this_epoch <= 1 + q.ticket_redemptions_this_epoch);
      CHECK(q.ticket_redemptions_this_epoch <= 1);
    }
  }
}
