#include "make/semidirect.hpp"

#include <stdexcept>
#include <utility>

namespace makekex {

SemidirectElement sd_make(MatrixZp additive, MatrixZp pair_left,
                          MatrixZp pair_right) {
  if (additive.dim() != pair_left.dim() || additive.dim() != pair_right.dim() ||
      additive.modulus() != pair_left.modulus() ||
      additive.modulus() != pair_right.modulus())
    throw std::invalid_argument("semidirect components must share shape and modulus");
  return SemidirectElement{std::move(additive), std::move(pair_left),
                           std::move(pair_right)};
}

SemidirectElement sd_mul(const SemidirectElement& u, const SemidirectElement& v) {
  MatrixZp additive =
      mat_add(mat_mul(mat_mul(v.pair_left, u.additive), v.pair_right), v.additive);
  return SemidirectElement{std::move(additive), mat_mul(u.pair_left, v.pair_left),
                           mat_mul(u.pair_right, v.pair_right)};
}

SemidirectElement sd_pow(const SemidirectElement& base, const mpz_class& e) {
  if (e < 1) throw std::invalid_argument("sd_pow: exponent must be >= 1");
  SemidirectElement acc = base;
  const std::size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = nbits - 1; i-- > 0;) {
    acc = sd_mul(acc, acc);
    if (mpz_tstbit(e.get_mpz_t(), i)) acc = sd_mul(acc, base);
  }
  return acc;
}

MatrixZp naive_transcript(const MatrixZp& m_mat, const MatrixZp& h1,
                          const MatrixZp& h2, std::uint64_t m) {
  if (m < 1) throw std::invalid_argument("naive_transcript: m must be >= 1");
  MatrixZp acc = m_mat;
  for (std::uint64_t k = 1; k < m; ++k)
    acc = mat_add(mat_mul(mat_mul(h1, acc), h2), m_mat);
  return acc;
}

}  // namespace makekex
