#include "phc/schnorr.hpp"

#include "phc/encode.hpp"

namespace phc {

namespace {

Scalar challenge(const GroupParams& params, const GroupElement& base,
                 const GroupElement& pub, const mpz_class& commitment,
                 ByteView message) {
  size_t w = params.p_bytes();
  return hash_to_scalar(
      "PHC/schnorr",
      {int_to_fixed_be(base.v, w), int_to_fixed_be(pub.v, w),
       int_to_fixed_be(commitment, w), Bytes(message.begin(), message.end())},
      params);
}

}  // namespace

SchnorrSignature schnorr_sign(const GroupParams& params, const GroupElement& base,
                              const Scalar& x, ByteView message, Drbg& rng) {
  mpz_class k = rng.nonzero_below(params.q);
  mpz_class commitment = powmod(base.v, k, params.p);
  Scalar c = challenge(params, base,
                       GroupElement{powmod(base.v, x.v, params.p)}, commitment,
                       message);
  mpz_class s = submod(k, x.v * c.v % params.q, params.q);
  return SchnorrSignature{c, Scalar{s}};
}

bool schnorr_verify(const GroupParams& params, const GroupElement& base,
                    const GroupElement& pub, ByteView message,
                    const SchnorrSignature& sig) {
  if (sig.c.v < 0 || sig.c.v >= params.q) return false;
  if (sig.s.v < 0 || sig.s.v >= params.q) return false;
  if (!element_in_range(params, base.v) || !element_in_range(params, pub.v)) {
    return false;
  }
  // base^s * pub^c = base^(k - xc) * base^(xc) = base^k
  mpz_class commitment = mulmod(powmod(base.v, sig.s.v, params.p),
                                powmod(pub.v, sig.c.v, params.p), params.p);
  return challenge(params, base, pub, commitment, message) == sig.c;
}

}  // namespace phc
