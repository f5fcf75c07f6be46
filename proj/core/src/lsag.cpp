#include "phc/lsag.hpp"

#include <optional>
#include <set>

#include "phc/encode.hpp"
#include "phc/errors.hpp"

namespace phc {

namespace {

constexpr std::string_view kCtxDomain = "PHC/ctx";
constexpr std::string_view kChainDomain = "PHC/chain";

// Exponentiation strategy for one base reused across a ring: below the
// break-even ring size a plain powm wins; above it a window table does.
class BasePow {
 public:
  BasePow(const mpz_class& base, const GroupParams& params, size_t expected_uses)
      : base_(base), p_(params.p) {
    size_t qbits = mpz_sizeinbase(params.q.get_mpz_t(), 2);
    if (expected_uses >= 8 && qbits >= 128) {
      table_.emplace(base, params.p, static_cast<unsigned>(qbits), 4);
    }
  }

  mpz_class pow(const mpz_class& e) const {
    if (table_) return table_->pow(e);
    return powmod(base_, e, p_);
  }

 private:
  mpz_class base_;
  mpz_class p_;
  std::optional<FixedBase> table_;
};

Bytes ring_bytes(const GroupParams& params,
                 const std::vector<GroupElement>& ring) {
  Bytes out;
  append_u32be(out, static_cast<uint32_t>(ring.size()));
  size_t w = params.p_bytes();
  for (const auto& y : ring) {
    Bytes fixed = int_to_fixed_be(y.v, w);
    out.insert(out.end(), fixed.begin(), fixed.end());
  }
  return out;
}

Scalar chain_step(const GroupParams& params, const Bytes& ring_part,
                  const GroupElement& tag, ByteView message, const mpz_class& z,
                  const mpz_class& z_link) {
  size_t w = params.p_bytes();
  return hash_to_scalar(kChainDomain,
                        {ring_part, int_to_fixed_be(tag.v, w),
                         Bytes(message.begin(), message.end()),
                         int_to_fixed_be(z, w), int_to_fixed_be(z_link, w)},
                        params);
}

void check_ring(const GroupParams& params,
                const std::vector<GroupElement>& ring) {
  if (ring.empty()) {
    throw PhcError(Err::malformed_signature, "empty ring");
  }
  std::set<mpz_class> seen;
  for (const auto& y : ring) {
    if (!element_in_range(params, y.v)) {
      throw PhcError(Err::malformed_signature, "ring member out of range");
    }
    if (!seen.insert(y.v).second) {
      throw PhcError(Err::duplicate_ring_member,
                     "ring contains a duplicate public key");
    }
  }
}

}  // namespace

GroupElement lsag_context_base(const GroupParams& params, ByteView ctx) {
  return hash_to_group(kCtxDomain, {Bytes(ctx.begin(), ctx.end())}, params);
}

RingSignature lsag_sign(const GroupParams& params,
                        const std::vector<GroupElement>& ring,
                        size_t signer_index, const Scalar& x, ByteView ctx,
                        ByteView message, Drbg& rng) {
  check_ring(params, ring);
  size_t n = ring.size();
  if (signer_index >= n) {
    throw PhcError(Err::invalid_index, "signer index out of range");
  }
  if (pow_g(params, x).v != ring[signer_index].v) {
    throw PhcError(Err::key_mismatch, "secret does not match ring slot");
  }

  GroupElement h = lsag_context_base(params, ctx);
  GroupElement tag = pow_e(params, h, x);
  Bytes ring_part = ring_bytes(params, ring);

  auto g_table = generator_table(params);
  BasePow h_pow(h.v, params, n);

  std::vector<Scalar> s(n, Scalar{0});
  std::vector<Scalar> c(n, Scalar{0});

  mpz_class u = rng.nonzero_below(params.q);
  c[(signer_index + 1) % n] =
      chain_step(params, ring_part, tag, message, g_table->pow(u), h_pow.pow(u));

  // Walk the ring from the slot after the signer back around to it.
  for (size_t step = 1; step < n; ++step) {
    size_t i = (signer_index + step) % n;
    s[i] = Scalar{rng.below(params.q)};
    mpz_class z =
        mulmod(g_table->pow(s[i].v), powmod(ring[i].v, c[i].v, params.p), params.p);
    mpz_class z_link =
        mulmod(h_pow.pow(s[i].v), powmod(tag.v, c[i].v, params.p), params.p);
    c[(i + 1) % n] = chain_step(params, ring_part, tag, message, z, z_link);
  }

  // Close the chain: g^s * y^c = g^u at the signer's slot.
  s[signer_index] =
      Scalar{submod(u, x.v * c[signer_index].v % params.q, params.q)};

  return RingSignature{c[0], std::move(s), tag};
}

LsagResult lsag_verify(const GroupParams& params,
                       const std::vector<GroupElement>& ring, ByteView ctx,
                       ByteView message, const RingSignature& sig) {
  check_ring(params, ring);
  size_t n = ring.size();
  if (sig.s.size() != n) {
    throw PhcError(Err::malformed_signature, "response count != ring size");
  }
  if (sig.c1.v < 0 || sig.c1.v >= params.q) {
    throw PhcError(Err::malformed_signature, "chain seed out of range");
  }
  for (const auto& si : sig.s) {
    if (si.v < 0 || si.v >= params.q) {
      throw PhcError(Err::malformed_signature, "response out of range");
    }
  }
  if (!is_subgroup_element(params, sig.tag.v)) {
    throw PhcError(Err::malformed_signature, "tag is not a subgroup element");
  }

  GroupElement h = lsag_context_base(params, ctx);
  Bytes ring_part = ring_bytes(params, ring);

  auto g_table = generator_table(params);
  BasePow h_pow(h.v, params, n);

  // Uniform recurrence over every slot; nothing depends on which one signed.
  Scalar c = sig.c1;
  for (size_t i = 0; i < n; ++i) {
    mpz_class z = mulmod(g_table->pow(sig.s[i].v),
                         powmod(ring[i].v, c.v, params.p), params.p);
    mpz_class z_link = mulmod(h_pow.pow(sig.s[i].v),
                              powmod(sig.tag.v, c.v, params.p), params.p);
    c = chain_step(params, ring_part, sig.tag, message, z, z_link);
  }

  return LsagResult{c == sig.c1, sig.tag};
}

bool tags_link(const GroupElement& a, const GroupElement& b) {
  return a.v == b.v;
}

}  // namespace phc
