#ifndef PHC_GROUP_HPP
#define PHC_GROUP_HPP

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phc/bytes.hpp"
#include "phc/rng.hpp"

namespace phc {

/// Prime-order subgroup of Z_p* for a safe prime p = 2q + 1.
/// g = 4 is a quadratic residue, so it generates the order-q subgroup.
struct GroupParams {
  mpz_class p;
  mpz_class q;
  mpz_class g;
  std::string name;

  size_t p_bytes() const;
  size_t q_bytes() const;
  size_t p_bits() const;

  bool operator==(const GroupParams& o) const {
    return p == o.p && q == o.q && g == o.g;
  }
};

/// Exponent in [0, q-1]. Construct through make_scalar so reduction is
/// never skipped.
struct Scalar {
  mpz_class v;
  bool operator==(const Scalar& o) const { return v == o.v; }
};

/// Member of the order-q subgroup, value in [2, p-1].
struct GroupElement {
  mpz_class v;
  bool operator==(const GroupElement& o) const { return v == o.v; }
};

struct KeyPair {
  Scalar x;        // secret, in [1, q-1]
  GroupElement y;  // g^x mod p
};

Scalar make_scalar(const GroupParams& params, const mpz_class& v);

/// Full membership check: value in [2, p-1] and value^q = 1 (mod p).
bool is_subgroup_element(const GroupParams& params, const mpz_class& v);

/// Cheap structural check only (range); no exponentiation.
bool element_in_range(const GroupParams& params, const mpz_class& v);

// ---- modular arithmetic helpers -----------------------------------------

mpz_class powmod(const mpz_class& base, const mpz_class& exp, const mpz_class& mod);
mpz_class mulmod(const mpz_class& a, const mpz_class& b, const mpz_class& mod);
/// a - b mod q, result in [0, q).
mpz_class submod(const mpz_class& a, const mpz_class& b, const mpz_class& q);

/// g^e using the per-params cached fixed-base table.
GroupElement pow_g(const GroupParams& params, const Scalar& e);

/// base^e for an arbitrary subgroup element.
GroupElement pow_e(const GroupParams& params, const GroupElement& base, const Scalar& e);

// ---- fixed-base window tables --------------------------------------------

/// Precomputed window table for repeated exponentiation of one base.
/// pow() costs one modular multiply per nonzero w-bit digit of the
/// exponent and no squarings.
class FixedBase {
 public:
  FixedBase(const mpz_class& base, const mpz_class& mod, unsigned exp_bits,
            unsigned window);
  mpz_class pow(const mpz_class& e) const;
  const mpz_class& base() const { return base_; }

 private:
  mpz_class base_;
  mpz_class mod_;
  unsigned window_;
  std::vector<std::vector<mpz_class>> table_;
};

/// Process-wide cache of the generator table for a parameter set.
/// Lookup is keyed by (p, g); thread-safe.
std::shared_ptr<const FixedBase> generator_table(const GroupParams& params);

// ---- key generation -------------------------------------------------------

KeyPair keygen(const GroupParams& params, Drbg& rng);

/// Build a keypair from a caller-chosen secret. Throws key-mismatch if
/// x is outside [1, q-1].
KeyPair keypair_from_secret(const GroupParams& params, const mpz_class& x);

// ---- parameter sets --------------------------------------------------------

/// p=23, q=11, g=4. Small enough for exhaustive discrete-log oracles.
GroupParams toy23_params();

/// Frozen 256-bit safe prime; the workhorse for property tests.
GroupParams test256_params();

/// RFC 3526 group 14 modulus (2048-bit) with g=4.
GroupParams modp2048_params();

/// Preset by name ("toy-23", "test-256", "modp-2048").
std::optional<GroupParams> params_by_name(std::string_view name);

/// Deterministic safe-prime search. bit_length >= 16 and even. Throws
/// generation-timeout when max_attempts candidates are exhausted.
GroupParams generate_params(unsigned bit_length, Drbg& rng,
                            uint64_t max_attempts = 1u << 20);

/// Re-verify all GroupParams invariants (primality with error < 2^-80,
/// p = 2q+1, generator order).
bool check_params(const GroupParams& params);

}  // namespace phc

#endif
