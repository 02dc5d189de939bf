#include "make/digest.hpp"

#include <stdexcept>

#include <openssl/evp.h>

namespace makekex {

Digest256 sha256(const std::uint8_t* data, std::size_t size) {
  Digest256 out{};
  unsigned int out_len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, data, size) == 1 &&
                  EVP_DigestFinal_ex(ctx, out.data(), &out_len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok || out_len != out.size()) throw std::runtime_error("SHA-256 failed");
  return out;
}

Digest256 sha256(const Bytes& data) { return sha256(data.data(), data.size()); }

std::string digest_hex(const Digest256& d) { return to_hex(d.data(), d.size()); }

}  // namespace makekex
