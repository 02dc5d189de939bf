#include "make/serial.hpp"

#include <cstring>

namespace makekex {

void put_u8(Bytes& out, std::uint8_t v) { out.push_back(v); }

void put_u32be(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_mpz(Bytes& out, const mpz_class& v) {
  if (v < 0) throw SerialError("put_mpz: negative value");
  if (v == 0) {
    put_u32be(out, 0);
    return;
  }
  const std::size_t nbytes = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  put_u32be(out, static_cast<std::uint32_t>(nbytes));
  const std::size_t start = out.size();
  out.resize(start + nbytes);
  std::size_t written = 0;
  mpz_export(out.data() + start, &written, 1 /* big-endian word order */, 1, 0, 0,
             v.get_mpz_t());
  if (written != nbytes) throw SerialError("put_mpz: export size mismatch");
}

std::uint8_t ByteReader::get_u8() {
  if (remaining() < 1) throw SerialError("byte stream truncated");
  return data_[pos_++];
}

std::uint32_t ByteReader::get_u32be() {
  if (remaining() < 4) throw SerialError("byte stream truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

mpz_class ByteReader::get_mpz() {
  const std::uint32_t nbytes = get_u32be();
  if (remaining() < nbytes) throw SerialError("byte stream truncated");
  if (nbytes == 0) return 0;
  if (data_[pos_] == 0) throw SerialError("integer has a leading zero byte");
  mpz_class v;
  mpz_import(v.get_mpz_t(), nbytes, 1, 1, 0, 0, data_ + pos_);
  pos_ += nbytes;
  return v;
}

Bytes ByteReader::get_bytes(std::size_t n) {
  if (remaining() < n) throw SerialError("byte stream truncated");
  Bytes out(data_ + pos_, data_ + pos_ + n);
  pos_ += n;
  return out;
}

void ByteReader::expect_end() const {
  if (!done()) throw SerialError("trailing bytes after message");
}

std::string to_hex(const std::uint8_t* data, std::size_t size) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(size * 2);
  for (std::size_t i = 0; i < size; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xf]);
  }
  return out;
}

std::string to_hex(const Bytes& buf) { return to_hex(buf.data(), buf.size()); }

}  // namespace makekex
