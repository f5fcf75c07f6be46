#include "phc/group.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "phc/encode.hpp"
#include "phc/errors.hpp"

namespace phc {

size_t GroupParams::p_bytes() const {
  return (mpz_sizeinbase(p.get_mpz_t(), 2) + 7) / 8;
}

size_t GroupParams::q_bytes() const {
  return (mpz_sizeinbase(q.get_mpz_t(), 2) + 7) / 8;
}

size_t GroupParams::p_bits() const {
  return mpz_sizeinbase(p.get_mpz_t(), 2);
}

Scalar make_scalar(const GroupParams& params, const mpz_class& v) {
  mpz_class r = v % params.q;
  if (r < 0) r += params.q;
  return Scalar{r};
}

bool element_in_range(const GroupParams& params, const mpz_class& v) {
  return v >= 2 && v < params.p;
}

bool is_subgroup_element(const GroupParams& params, const mpz_class& v) {
  if (!element_in_range(params, v)) return false;
  return powmod(v, params.q, params.p) == 1;
}

mpz_class powmod(const mpz_class& base, const mpz_class& exp,
                 const mpz_class& mod) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return r;
}

mpz_class mulmod(const mpz_class& a, const mpz_class& b, const mpz_class& mod) {
  mpz_class r = a * b;
  r %= mod;
  return r;
}

mpz_class submod(const mpz_class& a, const mpz_class& b, const mpz_class& q) {
  mpz_class r = (a - b) % q;
  if (r < 0) r += q;
  return r;
}

GroupElement pow_g(const GroupParams& params, const Scalar& e) {
  return GroupElement{generator_table(params)->pow(e.v)};
}

GroupElement pow_e(const GroupParams& params, const GroupElement& base,
                   const Scalar& e) {
  return GroupElement{powmod(base.v, e.v, params.p)};
}

// ---- FixedBase --------------------------------------------------------------

FixedBase::FixedBase(const mpz_class& base, const mpz_class& mod,
                     unsigned exp_bits, unsigned window)
    : base_(base), mod_(mod), window_(window) {
  unsigned nwin = (exp_bits + window - 1) / window;
  unsigned span = (1u << window) - 1;
  table_.resize(nwin);
  mpz_class cur = base % mod;
  for (unsigned i = 0; i < nwin; ++i) {
    auto& row = table_[i];
    row.resize(span);
    row[0] = cur;
    for (unsigned j = 1; j < span; ++j) row[j] = mulmod(row[j - 1], cur, mod);
    cur = mulmod(row[span - 1], cur, mod);  // base^(2^(window*(i+1)))
  }
}

mpz_class FixedBase::pow(const mpz_class& e) const {
  if (e < 0) throw std::invalid_argument("FixedBase::pow: negative exponent");
  if (mpz_sizeinbase(e.get_mpz_t(), 2) > table_.size() * window_ && e != 0) {
    throw std::invalid_argument("FixedBase::pow: exponent too wide for table");
  }
  mpz_class r = 1;
  for (size_t i = 0; i < table_.size(); ++i) {
    unsigned long digit = 0;
    for (unsigned b = 0; b < window_; ++b) {
      if (mpz_tstbit(e.get_mpz_t(), i * window_ + b)) digit |= 1ul << b;
    }
    if (digit != 0) r = mulmod(r, table_[i][digit - 1], mod_);
  }
  return r;
}

std::shared_ptr<const FixedBase> generator_table(const GroupParams& params) {
  struct Key {
    mpz_class p, g;
    bool operator<(const Key& o) const {
      int c = cmp(p, o.p);
      if (c != 0) return c < 0;
      return cmp(g, o.g) < 0;
    }
  };
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const FixedBase>> cache;

  Key key{params.p, params.g};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  unsigned qbits =
      static_cast<unsigned>(mpz_sizeinbase(params.q.get_mpz_t(), 2));
  // window 6 keeps the table a few MB at 2048 bits; tiny below that
  auto table = std::make_shared<const FixedBase>(params.g, params.p, qbits, 6);
  cache.emplace(key, table);
  return table;
}

// ---- key generation ----------------------------------------------------------

KeyPair keygen(const GroupParams& params, Drbg& rng) {
  mpz_class x = rng.nonzero_below(params.q);
  return KeyPair{Scalar{x}, pow_g(params, Scalar{x})};
}

KeyPair keypair_from_secret(const GroupParams& params, const mpz_class& x) {
  if (x < 1 || x >= params.q) {
    throw PhcError(Err::key_mismatch, "secret key must lie in [1, q-1]");
  }
  return KeyPair{Scalar{x}, pow_g(params, Scalar{x})};
}

// ---- parameter sets ------------------------------------------------------------

GroupParams toy23_params() {
  return GroupParams{23, 11, 4, "toy-23"};
}

GroupParams test256_params() {
  GroupParams params;
  params.p = mpz_class(
      "a00f6a16c0867e8c7b941e7d6b5dda15bad39d7e28967d5f7541a84ae39f4feb", 16);
  params.q = (params.p - 1) / 2;
  params.g = 4;
  params.name = "test-256";
  return params;
}

GroupParams modp2048_params() {
  // RFC 3526, group 14. The standard generator is 2; we use 4 = 2^2 so the
  // generator lands in the prime-order subgroup of quadratic residues.
  GroupParams params;
  params.p = mpz_class(
      "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
      "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
      "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
      "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
      "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
      "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
      "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
      "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF",
      16);
  params.q = (params.p - 1) / 2;
  params.g = 4;
  params.name = "modp-2048";
  return params;
}

std::optional<GroupParams> params_by_name(std::string_view name) {
  if (name == "toy-23") return toy23_params();
  if (name == "test-256") return test256_params();
  if (name == "modp-2048") return modp2048_params();
  return std::nullopt;
}

namespace {
// 2^-80 error: each Miller-Rabin round contributes at most 1/4.
constexpr int kPrimalityReps = 40;

bool probably_prime(const mpz_class& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), kPrimalityReps) != 0;
}
}  // namespace

GroupParams generate_params(unsigned bit_length, Drbg& rng,
                            uint64_t max_attempts) {
  if (bit_length < 16 || bit_length % 2 != 0) {
    throw std::invalid_argument(
        "generate_params: bit_length must be >= 16 and even");
  }
  for (uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    // q gets bit_length-1 bits so p = 2q+1 has exactly bit_length.
    size_t qbits = bit_length - 1;
    mpz_class q = rng.below(mpz_class(1) << qbits);
    mpz_setbit(q.get_mpz_t(), qbits - 1);
    mpz_setbit(q.get_mpz_t(), 0);
    if (!probably_prime(q)) continue;
    mpz_class p = 2 * q + 1;
    if (!probably_prime(p)) continue;
    GroupParams params{p, q, 4, "generated-" + std::to_string(bit_length)};
    if (params.g == params.p - 1 || params.g == 1) continue;  // tiny p edge
    return params;
  }
  throw PhcError(Err::generation_timeout,
                 "no safe prime found within the attempt budget");
}

bool check_params(const GroupParams& params) {
  if (params.p <= 3 || params.q <= 1) return false;
  if (params.p != 2 * params.q + 1) return false;
  if (!probably_prime(params.p) || !probably_prime(params.q)) return false;
  if (params.g <= 1 || params.g >= params.p) return false;
  if (powmod(params.g, params.q, params.p) != 1) return false;
  return true;
}

}  // namespace phc
