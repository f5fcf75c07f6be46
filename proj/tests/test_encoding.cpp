#include <doctest.h>

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/hashing.hpp"
#include "phc/rng.hpp"
#include "support/oracles.hpp"

using namespace phc;

TEST_CASE("hex round trip, strictness") {
  Bytes b = {0x00, 0xde, 0xad, 0xbe, 0xef, 0xff};
  CHECK(hex_encode(b) == "00deadbeefff");
  CHECK(hex_decode("00deadbeefff") == b);
  CHECK(hex_decode("00DEADBEEFFF") == b);
  CHECK_THROWS_AS(hex_decode("abc"), PhcError);   // odd length
  CHECK_THROWS_AS(hex_decode("zz"), PhcError);    // bad digit
}

TEST_CASE("fixed-width big-endian integers") {
  CHECK(int_to_fixed_be(0, 4) == Bytes{0, 0, 0, 0});
  CHECK(int_to_fixed_be(0x0102, 4) == Bytes{0, 0, 1, 2});
  CHECK(be_to_int(Bytes{1, 0}) == 256);
  CHECK_THROWS_AS(int_to_fixed_be(256, 1), std::invalid_argument);
  CHECK(int_to_hex(255, 2) == "00ff");
  CHECK(hex_to_int("00ff") == 255);
}

TEST_CASE("encoder layout matches the reference byte layout") {
  Encoder enc;
  enc.str("ab").u64(7).count(2).bytes(Bytes{9}).integer(255, 2);
  Bytes got = enc.take();

  std::vector<uint8_t> want;
  oracles::ref_push_field(want, {'a', 'b'});
  oracles::ref_push_field(want, {0, 0, 0, 0, 0, 0, 0, 7});
  oracles::ref_push_u32(want, 2);
  oracles::ref_push_field(want, {9});
  oracles::ref_push_field(want, {0, 255});
  CHECK(got == Bytes(want.begin(), want.end()));
}

TEST_CASE("hash_to_scalar is deterministic, in range, equal to the reference") {
  GroupParams params = test256_params();
  auto a = hash_to_scalar("PHC/test", {to_bytes("a"), to_bytes("b")}, params);
  auto b = hash_to_scalar("PHC/test", {to_bytes("a"), to_bytes("b")}, params);
  CHECK(a == b);
  CHECK(a.v >= 0);
  CHECK(a.v < params.q);

  // ["a","b"] and ["ab"] are distinct inputs by construction
  auto c = hash_to_scalar("PHC/test", {to_bytes("ab")}, params);
  CHECK(a.v != c.v);

  // independent reimplementation agrees on both
  CHECK(a.v == oracles::ref_hash_to_scalar("PHC/test", {{'a'}, {'b'}}, params.q));
  CHECK(c.v == oracles::ref_hash_to_scalar("PHC/test", {{'a', 'b'}}, params.q));
  CHECK_THROWS_AS(hash_to_scalar("", {}, params), std::invalid_argument);
}

TEST_CASE("hash_to_group squares into the subgroup") {
  GroupParams toy = toy23_params();
  CHECK(detail::square_into_subgroup(5, toy) == 2);  // 25 mod 23

  for (auto params : {toy23_params(), test256_params()}) {
    for (int i = 0; i < 20; ++i) {
      GroupElement h = hash_to_group(
          "PHC/ctx", {to_bytes("ctx-" + std::to_string(i))}, params);
      CHECK(h.v != 0);
      CHECK(h.v != 1);
      CHECK(powmod(h.v, params.q, params.p) == 1);
    }
  }
}

TEST_CASE("context base has a discrete log nobody derived") {
  // In toy-23 the exhaustive oracle can find e with g^e = h, but h must
  // not equal g^hash_to_scalar(same inputs) - the construction never
  // exponentiates g.
  GroupParams toy = toy23_params();
  int mismatches = 0;
  for (int i = 0; i < 30; ++i) {
    std::string label = "ctx-" + std::to_string(i);
    GroupElement h = hash_to_group("PHC/ctx", {to_bytes(label)}, toy);
    auto e = oracles::exhaustive_dlog(toy.g, h.v, toy.p, toy.q);
    REQUIRE(e.has_value());  // h is in <g>, the dlog exists
    Scalar s = hash_to_scalar("PHC/ctx", {to_bytes(label)}, toy);
    if (h.v != powmod(toy.g, s.v, toy.p)) mismatches += 1;
  }
  CHECK(mismatches > 20);  // tiny group, a few chance collisions allowed
}

TEST_CASE("drbg determinism and fork independence") {
  Drbg a(42), b(42);
  CHECK(a.bytes(33) == b.bytes(33));
  CHECK(a.u64() == b.u64());

  Drbg parent(7);
  Drbg c1 = parent.fork("one");
  Drbg c2 = parent.fork("two");
  CHECK(c1.bytes(16) != c2.bytes(16));

  Drbg d(9);
  for (int i = 0; i < 100; ++i) {
    mpz_class v = d.below(1000);
    CHECK(v >= 0);
    CHECK(v < 1000);
  }
  for (int i = 0; i < 100; ++i) {
    CHECK(d.nonzero_below(3) >= 1);
    CHECK(d.nonzero_below(3) < 3);
  }
  CHECK_THROWS_AS(d.below(0), std::invalid_argument);
}
