#pragma once

#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "make/matrix.hpp"
#include "make/modmath.hpp"
#include "make/rng.hpp"
#include "make/serial.hpp"

namespace makekex {

// Public platform of one exchange: the prime, the plaintext matrix M and
// the acting pair (H1, H2).  Compliant parameters keep H1, H2 singular of
// rank dim-1 and M non-commuting with both.
struct PublicParams {
  SafePrime prime;
  unsigned dim = 0;
  MatrixZp m_mat;
  MatrixZp h1;
  MatrixZp h2;
};

// Conjugation data H = S^-1 * D * S kept by the generator so tests can
// re-check how an acting matrix was built.
struct ConjugationWitness {
  MatrixZp s;
  MatrixZp d;
};

// Sample H = S^-1 * D * S with D diagonal, d_11 = 0 and the remaining
// diagonal entries uniform over Z_p minus {0, 1, p-1} (no elements of
// multiplicative order <= 2), S uniform invertible.  H then has rank
// dim-1 and determinant zero.
std::pair<MatrixZp, ConjugationWitness> build_singular_conjugate(
    const SafePrime& prime, unsigned dim, Rng& rng);

// Full compliant parameter set; M is resampled until it commutes with
// neither H1 nor H2.
PublicParams gen_public_params(const SafePrime& prime, unsigned dim, Rng& rng);
PublicParams gen_public_params(unsigned bits, unsigned dim, Rng& rng);

// Deliberately non-compliant parameters with H1, H2, M all invertible and
// det(H1 * H2) of multiplicative order >= (p-1)/2: the setting in which
// the determinant-based exponent recovery applies.
PublicParams gen_adversarial_params(unsigned bits, unsigned dim, Rng& rng);
PublicParams gen_adversarial_params(const SafePrime& prime, unsigned dim, Rng& rng);

// All detected violations, empty for a compliant set.  Messages are
// stable strings such as "det(H1) != 0" or "M commutes with H2".
std::vector<std::string> validate_params(const PublicParams& params);

// Private exponent, uniform over [2^(L-1), 2^L) where L is the bit length
// of q = (p-1)/2.
struct PrivateExponent {
  mpz_class value;
};

PrivateExponent gen_private_exponent(const SafePrime& prime, Rng& rng);
bool exponent_in_range(const PrivateExponent& e, const SafePrime& prime);

// Built-in 2000-bit safe prime for benchmark-grade exchanges (generating
// a fresh one of this size would take hours).  Verified on first use.
const SafePrime& builtin_safe_prime();

// Canonical binary form: "MAKE" | 0x01 | dim(u8) | p | M | H1 | H2.
Bytes serialize_params(const PublicParams& params);
PublicParams parse_params(const Bytes& buf);

// Line-oriented text fixture form (decimal prime, hex entries), for
// files a person can read and diff.
std::string params_to_text(const PublicParams& params);
PublicParams params_from_text(const std::string& text);

}  // namespace makekex
