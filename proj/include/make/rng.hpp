#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace makekex {

// Deterministic random source for the whole artifact.  Every sampling
// routine takes one of these explicitly, so a fixed seed reproduces
// parameters, exponents and attack instances bit for bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, 2^nbits).
  mpz_class bits(std::size_t nbits);

  // Uniform integer in [0, bound); bound must be positive.
  mpz_class below(const mpz_class& bound);

  // Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below_u64(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// Independent stream derived from (base_seed, stream).  Used to give each
// worker partition and each protocol role its own generator while keeping
// results independent of scheduling.
Rng derive_rng(std::uint64_t base_seed, std::uint64_t stream);

}  // namespace makekex
