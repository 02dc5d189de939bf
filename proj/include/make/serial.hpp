#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace makekex {

using Bytes = std::vector<std::uint8_t>;

// Thrown when a byte stream is truncated or violates the encoding.
class SerialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void put_u8(Bytes& out, std::uint8_t v);
void put_u32be(Bytes& out, std::uint32_t v);

// Non-negative big integer: 4-byte big-endian byte count, then that many
// magnitude bytes, big-endian, no leading zero byte.  Zero encodes as a
// zero count with no payload.
void put_mpz(Bytes& out, const mpz_class& v);

// Sequential reader over an immutable byte buffer.  Every getter throws
// SerialError instead of reading past the end.
class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}
  explicit ByteReader(const Bytes& buf) : ByteReader(buf.data(), buf.size()) {}

  std::uint8_t get_u8();
  std::uint32_t get_u32be();
  mpz_class get_mpz();
  Bytes get_bytes(std::size_t n);

  std::size_t remaining() const { return size_ - pos_; }
  bool done() const { return pos_ == size_; }

  // Require that the whole buffer has been consumed.
  void expect_end() const;

 private:
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

std::string to_hex(const std::uint8_t* data, std::size_t size);
std::string to_hex(const Bytes& buf);

}  // namespace makekex
