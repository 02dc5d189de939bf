#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include <gmpxx.h>

#include "make/rng.hpp"

namespace makekex {

// Attempted division by a non-unit (zero) residue.
class NotInvertibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An element of Z_p in canonical form: 0 <= value < modulus.
// Binary operations require both operands to share the modulus.
struct Residue {
  mpz_class value;
  mpz_class modulus;

  bool operator==(const Residue& other) const {
    return value == other.value && modulus == other.modulus;
  }
};

// Canonicalize v into [0, p).  p must be >= 2.
Residue make_residue(mpz_class v, mpz_class p);

Residue mod_add(const Residue& a, const Residue& b);
Residue mod_sub(const Residue& a, const Residue& b);
Residue mod_mul(const Residue& a, const Residue& b);
Residue mod_neg(const Residue& a);

// Multiplicative inverse; throws NotInvertibleError for zero.
Residue mod_inv(const Residue& a);

// Left-to-right binary exponentiation built on mod_mul; e >= 0.
// Deliberately not GMP's powm: the benchmark compares this artifact's
// group law against plain modular exponentiation, so both sides must pay
// the same per-multiplication cost.
Residue mod_pow(const Residue& base, const mpz_class& e);

// Probabilistic primality: trial division by all primes below 2048, then
// `rounds` Miller-Rabin witnesses (base 2 first, remaining bases derived
// deterministically from x).  Requires x >= 2.
bool is_probable_prime(const mpz_class& x, int rounds = 40);

// A prime p = 2q + 1 with q prime.  Such p is always 3 mod 4 for odd q.
struct SafePrime {
  mpz_class p;
  mpz_class q;
  unsigned bit_length = 0;
};

// Search for a safe prime with exactly `bits` bits (bits >= 4).
SafePrime gen_safe_prime(unsigned bits, Rng& rng);

// Wrap a known safe prime, verifying p and (p-1)/2 are prime.
SafePrime safe_prime_from(const mpz_class& p);

// Euler criterion; zero counts as a (trivial) square.
bool is_quadratic_residue(const Residue& a);

// Square root modulo a prime p with p % 4 == 3; NotFound for non-residues.
std::optional<Residue> mod_sqrt(const Residue& a);

// Baby-step giant-step: least e < bound with g^e = h, if any.
// bound must fit a table of ~sqrt(bound) entries (capped at 2^40).
std::optional<mpz_class> discrete_log_bsgs(const Residue& g, const Residue& h,
                                           const mpz_class& bound);

// Thread-local count of scalar multiplications performed in Z_p (by
// mod_mul and by the matrix kernels).  Modular reductions are not
// counted; the benchmark reports them separately via timings.
std::uint64_t field_mul_count();
void reset_field_mul_count();
void add_field_muls(std::uint64_t n);

}  // namespace makekex
