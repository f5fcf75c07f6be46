#include "phc/encode.hpp"

#include <stdexcept>

#include "phc/errors.hpp"

namespace phc {

Encoder& Encoder::str(std::string_view s) {
  append_u32be(out_, static_cast<uint32_t>(s.size()));
  out_.insert(out_.end(), s.begin(), s.end());
  return *this;
}

Encoder& Encoder::bytes(ByteView b) {
  append_u32be(out_, static_cast<uint32_t>(b.size()));
  out_.insert(out_.end(), b.begin(), b.end());
  return *this;
}

Encoder& Encoder::u64(uint64_t v) {
  append_u32be(out_, 8);
  append_u64be(out_, v);
  return *this;
}

Encoder& Encoder::count(uint32_t n) {
  append_u32be(out_, n);
  return *this;
}

Encoder& Encoder::integer(const mpz_class& v, size_t width) {
  Bytes fixed = int_to_fixed_be(v, width);
  append_u32be(out_, static_cast<uint32_t>(width));
  out_.insert(out_.end(), fixed.begin(), fixed.end());
  return *this;
}

Bytes int_to_fixed_be(const mpz_class& v, size_t width) {
  if (v < 0) throw std::invalid_argument("int_to_fixed_be: negative value");
  size_t need = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  if (v == 0) need = 0;
  if (need > width) {
    throw std::invalid_argument("int_to_fixed_be: value wider than field");
  }
  Bytes out(width, 0);
  if (need > 0) {
    size_t written = 0;
    mpz_export(out.data() + (width - need), &written, 1, 1, 1, 0,
               v.get_mpz_t());
  }
  return out;
}

mpz_class be_to_int(ByteView b) {
  mpz_class v;
  if (!b.empty()) {
    mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
  }
  return v;
}

std::string int_to_hex(const mpz_class& v, size_t width) {
  return hex_encode(int_to_fixed_be(v, width));
}

mpz_class hex_to_int(std::string_view hex) {
  Bytes b = hex_decode(hex);
  return be_to_int(b);
}

}  // namespace phc
