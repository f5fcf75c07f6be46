#ifndef PHC_SCHNORR_HPP
#define PHC_SCHNORR_HPP

#include "phc/group.hpp"
#include "phc/hashing.hpp"

namespace phc {

/// Fiat-Shamir Schnorr over a caller-chosen base. base=g signs issuer
/// ring snapshots; base=h (a context element) with pub=tag attests
/// delegations.
struct SchnorrSignature {
  Scalar c;
  Scalar s;
  bool operator==(const SchnorrSignature& o) const {
    return c == o.c && s == o.s;
  }
};

SchnorrSignature schnorr_sign(const GroupParams& params, const GroupElement& base,
                              const Scalar& x, ByteView message, Drbg& rng);

bool schnorr_verify(const GroupParams& params, const GroupElement& base,
                    const GroupElement& pub, ByteView message,
                    const SchnorrSignature& sig);

}  // namespace phc

#endif
