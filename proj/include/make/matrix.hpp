#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "make/modmath.hpp"
#include "make/rng.hpp"
#include "make/serial.hpp"

namespace makekex {

// Square matrix over Z_p, entries stored row-major in canonical form.
// Binary operations require equal dimension and modulus and throw
// std::invalid_argument otherwise.
class MatrixZp {
 public:
  MatrixZp(unsigned dim, mpz_class modulus);  // zero matrix
  static MatrixZp identity(unsigned dim, mpz_class modulus);
  static MatrixZp from_entries(unsigned dim, mpz_class modulus,
                               std::vector<mpz_class> row_major);

  unsigned dim() const { return dim_; }
  const mpz_class& modulus() const { return mod_; }

  const mpz_class& at(unsigned i, unsigned j) const;
  void set(unsigned i, unsigned j, mpz_class v);  // canonicalizes v
  Residue entry(unsigned i, unsigned j) const;

  bool operator==(const MatrixZp& other) const;
  bool is_zero() const;

  // Raw row-major access for kernels; no bounds checks.
  mpz_class* data() { return e_.data(); }
  const mpz_class* data() const { return e_.data(); }

 private:
  unsigned dim_;
  mpz_class mod_;
  std::vector<mpz_class> e_;
};

MatrixZp mat_add(const MatrixZp& x, const MatrixZp& y);
MatrixZp mat_sub(const MatrixZp& x, const MatrixZp& y);

// Product with one deferred reduction per output entry: dim^3 scalar
// multiplications (tallied via add_field_muls) and dim^2 reductions.
MatrixZp mat_mul(const MatrixZp& x, const MatrixZp& y);

MatrixZp mat_scalar(const Residue& c, const MatrixZp& x);

Residue mat_det(const MatrixZp& x);
unsigned mat_rank(const MatrixZp& x);

// Inverse via Gauss-Jordan; empty when the matrix is singular
// (equivalently, when mat_det is zero).
std::optional<MatrixZp> mat_inv(const MatrixZp& x);

// Square-and-multiply; e >= 0, with e = 0 giving the identity.
MatrixZp mat_pow(const MatrixZp& x, const mpz_class& e);

MatrixZp mat_random(unsigned dim, const mpz_class& modulus, Rng& rng);

bool commutes(const MatrixZp& x, const MatrixZp& y);

// Canonical byte form: dimension as u32be, then entries row-major with
// put_mpz.  The modulus travels separately (it is ambient context).
void put_matrix(Bytes& out, const MatrixZp& m);
MatrixZp get_matrix(ByteReader& in, const mpz_class& modulus,
                    unsigned expect_dim = 0);

}  // namespace makekex
