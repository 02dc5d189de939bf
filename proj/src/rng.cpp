#include "make/rng.hpp"

#include <stdexcept>
#include <vector>

namespace makekex {

mpz_class Rng::bits(std::size_t nbits) {
  if (nbits == 0) return 0;
  const std::size_t words = (nbits + 63) / 64;
  std::vector<std::uint64_t> buf(words);
  for (auto& w : buf) w = next_u64();
  // Drop excess high bits so the result is uniform in [0, 2^nbits).
  if (nbits % 64 != 0) buf[0] >>= 64 - (nbits % 64);
  mpz_class out;
  mpz_import(out.get_mpz_t(), words, 1 /* most significant word first */,
             sizeof(std::uint64_t), 0, 0, buf.data());
  return out;
}

mpz_class Rng::below(const mpz_class& bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::below: bound must be positive");
  if (bound == 1) return 0;
  const mpz_class max = bound - 1;
  const std::size_t nbits = mpz_sizeinbase(max.get_mpz_t(), 2);
  // Rejection sampling; acceptance probability is at least 1/2.
  for (;;) {
    mpz_class candidate = bits(nbits);
    if (candidate <= max) return candidate;
  }
}

std::uint64_t Rng::below_u64(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below_u64: bound must be positive");
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    const std::uint64_t candidate = next_u64() & mask;
    if (candidate < bound) return candidate;
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

Rng derive_rng(std::uint64_t base_seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(base_seed) ^ stream));
}

}  // namespace makekex
