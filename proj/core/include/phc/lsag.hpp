#ifndef PHC_LSAG_HPP
#define PHC_LSAG_HPP

#include <vector>

#include "phc/group.hpp"
#include "phc/hashing.hpp"

namespace phc {

/// Linkable ring signature (LSAG). The tag h^x is a stable pseudonym for
/// the signing key within one context and is unlinkable across contexts.
struct RingSignature {
  Scalar c1;              // chain seed
  std::vector<Scalar> s;  // one response per ring member
  GroupElement tag;       // context-scoped pseudonym
};

struct LsagResult {
  bool valid;
  GroupElement tag;
};

/// Context base for a presentation context string.
GroupElement lsag_context_base(const GroupParams& params, ByteView ctx);

/// Sign `message` as ring member `signer_index` holding secret x for
/// ring[signer_index]. Throws invalid-index, key-mismatch,
/// duplicate-ring-member.
RingSignature lsag_sign(const GroupParams& params,
                        const std::vector<GroupElement>& ring,
                        size_t signer_index, const Scalar& x, ByteView ctx,
                        ByteView message, Drbg& rng);

/// Recompute the challenge chain. Throws malformed-signature for
/// structural defects (wrong s length, out-of-range values, tag outside
/// the subgroup) and duplicate-ring-member for a bad ring. The returned
/// tag is the caller's pseudonym for this context; nothing identifies
/// which member signed.
LsagResult lsag_verify(const GroupParams& params,
                       const std::vector<GroupElement>& ring, ByteView ctx,
                       ByteView message, const RingSignature& sig);

/// Pseudonym equality: two presentations come from the same credential
/// in the same context iff their tags are equal.
bool tags_link(const GroupElement& a, const GroupElement& b);

}  // namespace phc

#endif
