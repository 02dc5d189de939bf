#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "make/serial.hpp"

namespace makekex {

using Digest256 = std::array<std::uint8_t, 32>;

// SHA-256 of a byte buffer (OpenSSL EVP underneath).
Digest256 sha256(const std::uint8_t* data, std::size_t size);
Digest256 sha256(const Bytes& data);

std::string digest_hex(const Digest256& d);

}  // namespace makekex
