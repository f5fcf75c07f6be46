#include <doctest.h>

#include "phc/hashing.hpp"
#include "phc/schnorr.hpp"

using namespace phc;

TEST_CASE("sign/verify round trip over the generator base") {
  GroupParams params = test256_params();
  Drbg rng(2);
  KeyPair kp = keygen(params, rng);
  Bytes msg = to_bytes("snapshot bytes");
  SchnorrSignature sig =
      schnorr_sign(params, GroupElement{params.g}, kp.x, msg, rng);
  CHECK(schnorr_verify(params, GroupElement{params.g}, kp.y, msg, sig));
  CHECK_FALSE(
      schnorr_verify(params, GroupElement{params.g}, kp.y, to_bytes("x"), sig));
}

TEST_CASE("toy oracle: x=3 verifies under pub=18") {
  GroupParams toy = toy23_params();
  Drbg rng(5);
  KeyPair kp = keypair_from_secret(toy, 3);
  CHECK(kp.y.v == 18);
  Bytes msg = to_bytes("m");
  SchnorrSignature sig = schnorr_sign(toy, GroupElement{toy.g}, kp.x, msg, rng);
  CHECK(schnorr_verify(toy, GroupElement{toy.g}, GroupElement{18}, msg, sig));
}

TEST_CASE("wrong public key fails across random keys") {
  GroupParams params = test256_params();
  Drbg rng(7);
  Bytes msg = to_bytes("m");
  for (int i = 0; i < 50; ++i) {
    KeyPair kp = keygen(params, rng);
    KeyPair other = keygen(params, rng);
    SchnorrSignature sig =
        schnorr_sign(params, GroupElement{params.g}, kp.x, msg, rng);
    CHECK(schnorr_verify(params, GroupElement{params.g}, kp.y, msg, sig));
    CHECK_FALSE(schnorr_verify(params, GroupElement{params.g}, other.y, msg, sig));
  }
}

TEST_CASE("parameterized base: context element as base, tag as public key") {
  GroupParams params = test256_params();
  Drbg rng(11);
  KeyPair kp = keygen(params, rng);
  GroupElement h = hash_to_group("PHC/ctx", {to_bytes("svc")}, params);
  GroupElement tag = pow_e(params, h, kp.x);
  Bytes msg = to_bytes("delegation payload");
  SchnorrSignature sig = schnorr_sign(params, h, kp.x, msg, rng);
  CHECK(schnorr_verify(params, h, tag, msg, sig));
  // same signature under the generator base must not verify
  CHECK_FALSE(schnorr_verify(params, GroupElement{params.g}, tag, msg, sig));
}

TEST_CASE("1000 random forgery attempts fail at 256-bit parameters") {
  GroupParams params = test256_params();
  Drbg rng(13);
  KeyPair kp = keygen(params, rng);
  Bytes msg = to_bytes("target message");
  int accepted = 0;
  for (int i = 0; i < 1000; ++i) {
    SchnorrSignature forged{Scalar{rng.below(params.q)},
                            Scalar{rng.below(params.q)}};
    if (schnorr_verify(params, GroupElement{params.g}, kp.y, msg, forged)) {
      accepted += 1;
    }
  }
  CHECK(accepted == 0);
}

TEST_CASE("out-of-range signature parts are rejected") {
  GroupParams params = test256_params();
  Drbg rng(17);
  KeyPair kp = keygen(params, rng);
  Bytes msg = to_bytes("m");
  SchnorrSignature sig =
      schnorr_sign(params, GroupElement{params.g}, kp.x, msg, rng);
  SchnorrSignature big_c = sig;
  big_c.c.v = params.q;
  CHECK_FALSE(schnorr_verify(params, GroupElement{params.g}, kp.y, msg, big_c));
  SchnorrSignature big_s = sig;
  big_s.s.v = params.q + 5;
  CHECK_FALSE(schnorr_verify(params, GroupElement{params.g}, kp.y, msg, big_s));
}
