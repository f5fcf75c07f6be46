#include "phc/rng.hpp"

#include <stdexcept>

#include "phc/encode.hpp"
#include "phc/sha256.hpp"

namespace phc {

Drbg::Drbg(uint64_t seed) {
  append_u64be(seed_, seed);
}

Drbg::Drbg(ByteView seed) : seed_(seed.begin(), seed.end()) {}

void Drbg::refill() {
  Bytes block = seed_;
  append_u64be(block, counter_++);
  Digest d = sha256(block);
  buffer_.assign(d.begin(), d.end());
  pos_ = 0;
}

uint8_t Drbg::byte() {
  if (pos_ >= buffer_.size()) refill();
  return buffer_[pos_++];
}

Bytes Drbg::bytes(size_t n) {
  Bytes out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(byte());
  return out;
}

uint64_t Drbg::u64() {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | byte();
  return v;
}

mpz_class Drbg::below(const mpz_class& bound) {
  if (bound <= 0) throw std::invalid_argument("Drbg::below: bound must be > 0");
  size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  size_t nbytes = (bits + 7) / 8;
  unsigned top_mask =
      bits % 8 == 0 ? 0xff : static_cast<unsigned>((1u << (bits % 8)) - 1);
  // Rejection sampling keeps the draw uniform.
  for (;;) {
    Bytes draw = bytes(nbytes);
    draw[0] &= static_cast<uint8_t>(top_mask);
    mpz_class v = be_to_int(draw);
    if (v < bound) return v;
  }
}

mpz_class Drbg::nonzero_below(const mpz_class& bound) {
  return below(bound - 1) + 1;
}

Drbg Drbg::fork(std::string_view label) {
  Bytes child = seed_;
  Bytes tag = to_bytes(label);
  append_u64be(child, counter_);
  child.insert(child.end(), tag.begin(), tag.end());
  Digest d = sha256(child);
  counter_++;  // advancing keeps successive forks independent
  return Drbg(ByteView(d.data(), d.size()));
}

}  // namespace phc
