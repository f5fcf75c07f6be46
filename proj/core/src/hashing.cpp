#include "phc/hashing.hpp"

#include <stdexcept>

#include "phc/encode.hpp"
#include "phc/errors.hpp"
#include "phc/sha256.hpp"

namespace phc {

namespace {

Bytes canonical_input(std::string_view domain, const std::vector<Bytes>& parts) {
  if (domain.empty()) {
    throw std::invalid_argument("hash domain must be nonempty");
  }
  Encoder enc;
  enc.str(domain);
  enc.count(static_cast<uint32_t>(parts.size()));
  for (const auto& part : parts) enc.bytes(part);
  return enc.take();
}

}  // namespace

Scalar hash_to_scalar(std::string_view domain, const std::vector<Bytes>& parts,
                      const GroupParams& params) {
  Digest d = sha256(canonical_input(domain, parts));
  mpz_class v = be_to_int(ByteView(d.data(), d.size()));
  return make_scalar(params, v);
}

namespace detail {

mpz_class square_into_subgroup(const mpz_class& u, const GroupParams& params) {
  return mulmod(u, u, params.p);
}

}  // namespace detail

GroupElement hash_to_group(std::string_view domain,
                           const std::vector<Bytes>& parts,
                           const GroupParams& params) {
  Bytes base_input = canonical_input(domain, parts);
  for (uint32_t counter = 0; counter < 256; ++counter) {
    Bytes attempt = base_input;
    append_u32be(attempt, counter);
    Digest d = sha256(attempt);
    mpz_class u = be_to_int(ByteView(d.data(), d.size())) % params.p;
    mpz_class h = detail::square_into_subgroup(u, params);
    if (h != 0 && h != 1) return GroupElement{h};
  }
  throw PhcError(Err::internal_error, "hash_to_group: retry cap exhausted");
}

}  // namespace phc
