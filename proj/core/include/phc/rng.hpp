#ifndef PHC_RNG_HPP
#define PHC_RNG_HPP

#include <gmpxx.h>

#include <cstdint>

#include "phc/bytes.hpp"

namespace phc {

/// Deterministic byte stream: block i = SHA-256(seed || i), i a 64-bit
/// big-endian counter. Every random choice in the system flows through
/// one of these, so a seed pins an entire run.
///
/// An instance is used by at most one in-flight operation (not
/// internally synchronized).
class Drbg {
 public:
  explicit Drbg(uint64_t seed);
  explicit Drbg(ByteView seed);

  uint8_t byte();
  Bytes bytes(size_t n);
  uint64_t u64();

  /// Uniform integer in [0, bound) by rejection sampling. bound > 0.
  mpz_class below(const mpz_class& bound);

  /// Uniform in [1, bound).
  mpz_class nonzero_below(const mpz_class& bound);

  /// Derive an independent child stream (label keeps siblings apart).
  Drbg fork(std::string_view label);

 private:
  Bytes seed_;
  uint64_t counter_ = 0;
  Bytes buffer_;
  size_t pos_ = 0;
  void refill();
};

}  // namespace phc

#endif
