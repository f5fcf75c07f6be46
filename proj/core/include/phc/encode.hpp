#ifndef PHC_ENCODE_HPP
#define PHC_ENCODE_HPP

#include <gmpxx.h>

#include <string_view>

#include "phc/bytes.hpp"

namespace phc {

/// Canonical byte encoding used everywhere data is hashed or signed.
///
/// Layout rules:
///   field        := u32be(len) || payload
///   list prefix  := bare u32be(count)
///   integer      := fixed-width big-endian, width chosen by the caller
///                   (p-width for group elements, q-width for scalars)
///   u64          := 8-byte big-endian payload
///
/// The wire encoding (JSON, hex) is independent of this; only hashes and
/// signatures consume canonical bytes.
class Encoder {
 public:
  Encoder& str(std::string_view s);
  Encoder& bytes(ByteView b);
  Encoder& u64(uint64_t v);
  Encoder& count(uint32_t n);
  /// Fixed-width big-endian integer field. Throws if v needs more bytes.
  Encoder& integer(const mpz_class& v, size_t width);

  const Bytes& view() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

/// Fixed-width big-endian bytes of a non-negative integer.
Bytes int_to_fixed_be(const mpz_class& v, size_t width);

/// Big-endian bytes to integer.
mpz_class be_to_int(ByteView b);

/// Lowercase fixed-width hex of a non-negative integer.
std::string int_to_hex(const mpz_class& v, size_t width);

/// Strict hex to integer (via hex_decode).
mpz_class hex_to_int(std::string_view hex);

}  // namespace phc

#endif
