#ifndef PHC_SHA256_HPP
#define PHC_SHA256_HPP

#include <array>

#include "phc/bytes.hpp"

namespace phc {

using Digest = std::array<uint8_t, 32>;

Digest sha256(ByteView data);

Bytes digest_bytes(const Digest& d);

}  // namespace phc

#endif
