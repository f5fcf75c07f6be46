#ifndef PHC_BYTES_HPP
#define PHC_BYTES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phc {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

Bytes to_bytes(std::string_view s);
std::string to_string(ByteView b);

/// Lowercase hex, two digits per byte.
std::string hex_encode(ByteView b);

/// Strict decode: even length, lowercase or uppercase digits only.
/// Throws PhcError(malformed_request) on bad input.
Bytes hex_decode(std::string_view hex);

void append_u32be(Bytes& out, uint32_t v);
void append_u64be(Bytes& out, uint64_t v);

}  // namespace phc

#endif
