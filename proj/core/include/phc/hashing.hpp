#ifndef PHC_HASHING_HPP
#define PHC_HASHING_HPP

#include <string_view>
#include <vector>

#include "phc/group.hpp"

namespace phc {

/// SHA-256 over the canonical encoding of (domain, parts), reduced mod q.
/// Input layout: field(domain) || count(n) || field(part_0) || ...
Scalar hash_to_scalar(std::string_view domain, const std::vector<Bytes>& parts,
                      const GroupParams& params);

/// Deterministic subgroup element with unknown discrete log:
/// u_i = SHA256(canonical || u32be(i)) mod p, h = u_i^2 mod p, retrying
/// while h is 0 or 1. Squaring lands in the order-q subgroup of a
/// safe-prime group.
GroupElement hash_to_group(std::string_view domain,
                           const std::vector<Bytes>& parts,
                           const GroupParams& params);

namespace detail {
/// The squaring step of hash_to_group, split out so tests can drive a
/// chosen u directly.
mpz_class square_into_subgroup(const mpz_class& u, const GroupParams& params);
}  // namespace detail

}  // namespace phc

#endif
