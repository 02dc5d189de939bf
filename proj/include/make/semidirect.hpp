#pragma once

#include <cstdint>

#include <gmpxx.h>

#include "make/matrix.hpp"

namespace makekex {

// Element of the semidirect product built from the additive semigroup of
// n x n matrices over Z_p and the multiplicative action of a matrix pair:
//
//   (X_u, (P_u, Q_u)) * (X_v, (P_v, Q_v))
//     = (P_v * X_u * Q_v + X_v, (P_u * P_v, Q_u * Q_v))
//
// All three components share dimension and modulus.
struct SemidirectElement {
  MatrixZp additive;
  MatrixZp pair_left;
  MatrixZp pair_right;
};

SemidirectElement sd_make(MatrixZp additive, MatrixZp pair_left,
                          MatrixZp pair_right);

SemidirectElement sd_mul(const SemidirectElement& u, const SemidirectElement& v);

// Square-and-multiply power; exponents start at 1 (there is no identity
// in the semigroup, so e = 0 is rejected).
SemidirectElement sd_pow(const SemidirectElement& base, const mpz_class& e);

// Reference evaluation of the additive component of (M, (H1, H2))^m by the
// linear recurrence A_1 = M, A_{k+1} = H1 * A_k * H2 + M.   O(m) products;
// used as an independent check of sd_pow and by the exhaustive attack.
MatrixZp naive_transcript(const MatrixZp& m_mat, const MatrixZp& h1,
                          const MatrixZp& h2, std::uint64_t m);

}  // namespace makekex
