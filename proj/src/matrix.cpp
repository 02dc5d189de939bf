#include "make/matrix.hpp"

#include <stdexcept>
#include <utility>

namespace makekex {

namespace {

constexpr unsigned kMaxDim = 64;  // sanity bound for deserialization

void check_dim(unsigned dim) {
  if (dim == 0 || dim > kMaxDim)
    throw std::invalid_argument("matrix dimension out of range");
}

void check_compatible(const MatrixZp& x, const MatrixZp& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("matrix dimensions differ");
  if (x.modulus() != y.modulus()) throw std::invalid_argument("matrix moduli differ");
}

}  // namespace

MatrixZp::MatrixZp(unsigned dim, mpz_class modulus)
    : dim_(dim), mod_(std::move(modulus)), e_(std::size_t(dim) * dim, mpz_class(0)) {
  check_dim(dim_);
  if (mod_ < 2) throw std::invalid_argument("matrix modulus must be >= 2");
}

MatrixZp MatrixZp::identity(unsigned dim, mpz_class modulus) {
  MatrixZp m(dim, std::move(modulus));
  for (unsigned i = 0; i < dim; ++i) m.set(i, i, 1);
  return m;
}

MatrixZp MatrixZp::from_entries(unsigned dim, mpz_class modulus,
                                std::vector<mpz_class> row_major) {
  MatrixZp m(dim, std::move(modulus));
  if (row_major.size() != std::size_t(dim) * dim)
    throw std::invalid_argument("entry count does not match dimension");
  for (unsigned i = 0; i < dim; ++i)
    for (unsigned j = 0; j < dim; ++j)
      m.set(i, j, std::move(row_major[std::size_t(i) * dim + j]));
  return m;
}

const mpz_class& MatrixZp::at(unsigned i, unsigned j) const {
  if (i >= dim_ || j >= dim_) throw std::out_of_range("matrix index out of range");
  return e_[std::size_t(i) * dim_ + j];
}

void MatrixZp::set(unsigned i, unsigned j, mpz_class v) {
  if (i >= dim_ || j >= dim_) throw std::out_of_range("matrix index out of range");
  mpz_class& slot = e_[std::size_t(i) * dim_ + j];
  mpz_mod(slot.get_mpz_t(), v.get_mpz_t(), mod_.get_mpz_t());
}

Residue MatrixZp::entry(unsigned i, unsigned j) const {
  return Residue{at(i, j), mod_};
}

bool MatrixZp::operator==(const MatrixZp& other) const {
  return dim_ == other.dim_ && mod_ == other.mod_ && e_ == other.e_;
}

bool MatrixZp::is_zero() const {
  for (const auto& v : e_)
    if (v != 0) return false;
  return true;
}

MatrixZp mat_add(const MatrixZp& x, const MatrixZp& y) {
  check_compatible(x, y);
  const unsigned n = x.dim();
  MatrixZp out(n, x.modulus());
  const mpz_class* a = x.data();
  const mpz_class* b = y.data();
  mpz_class* c = out.data();
  for (std::size_t i = 0; i < std::size_t(n) * n; ++i) {
    c[i] = a[i] + b[i];
    if (c[i] >= x.modulus()) c[i] -= x.modulus();
  }
  return out;
}

MatrixZp mat_sub(const MatrixZp& x, const MatrixZp& y) {
  check_compatible(x, y);
  const unsigned n = x.dim();
  MatrixZp out(n, x.modulus());
  const mpz_class* a = x.data();
  const mpz_class* b = y.data();
  mpz_class* c = out.data();
  for (std::size_t i = 0; i < std::size_t(n) * n; ++i) {
    c[i] = a[i] - b[i];
    if (c[i] < 0) c[i] += x.modulus();
  }
  return out;
}

MatrixZp mat_mul(const MatrixZp& x, const MatrixZp& y) {
  check_compatible(x, y);
  const unsigned n = x.dim();
  MatrixZp out(n, x.modulus());
  const mpz_class* a = x.data();
  const mpz_class* b = y.data();
  mpz_class* c = out.data();
  mpz_class acc;
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) {
      // Accumulate the full inner product, then reduce once.
      acc = 0;
      for (unsigned k = 0; k < n; ++k)
        mpz_addmul(acc.get_mpz_t(), a[std::size_t(i) * n + k].get_mpz_t(),
                   b[std::size_t(k) * n + j].get_mpz_t());
      mpz_mod(c[std::size_t(i) * n + j].get_mpz_t(), acc.get_mpz_t(),
              x.modulus().get_mpz_t());
    }
  }
  add_field_muls(std::uint64_t(n) * n * n);
  return out;
}

MatrixZp mat_scalar(const Residue& c, const MatrixZp& x) {
  if (c.modulus != x.modulus())
    throw std::invalid_argument("scalar modulus differs from matrix modulus");
  const unsigned n = x.dim();
  MatrixZp out(n, x.modulus());
  const mpz_class* a = x.data();
  mpz_class* b = out.data();
  for (std::size_t i = 0; i < std::size_t(n) * n; ++i) {
    b[i] = a[i] * c.value;
    mpz_mod(b[i].get_mpz_t(), b[i].get_mpz_t(), x.modulus().get_mpz_t());
  }
  add_field_muls(std::uint64_t(n) * n);
  return out;
}

namespace {

// Forward elimination on a row-major scratch copy.  Returns the rank and,
// for square inputs, the determinant (product of pivots, sign-adjusted).
struct EliminationResult {
  unsigned rank = 0;
  mpz_class det;  // meaningful for square matrices only
};

EliminationResult eliminate(std::vector<mpz_class>& a, unsigned n,
                            const mpz_class& p) {
  EliminationResult res;
  res.det = 1;
  bool negate = false;
  unsigned row = 0;
  for (unsigned col = 0; col < n && row < n; ++col) {
    unsigned pivot = row;
    while (pivot < n && a[std::size_t(pivot) * n + col] == 0) ++pivot;
    if (pivot == n) continue;  // no pivot in this column
    if (pivot != row) {
      for (unsigned j = 0; j < n; ++j)
        std::swap(a[std::size_t(pivot) * n + j], a[std::size_t(row) * n + j]);
      negate = !negate;
    }
    const Residue pivot_val{a[std::size_t(row) * n + col], p};
    res.det = res.det * pivot_val.value % p;
    const Residue pivot_inv = mod_inv(pivot_val);
    for (unsigned r = row + 1; r < n; ++r) {
      mpz_class& lead = a[std::size_t(r) * n + col];
      if (lead == 0) continue;
      // factor = lead / pivot; row_r -= factor * row_row
      mpz_class factor = lead * pivot_inv.value % p;
      for (unsigned j = col; j < n; ++j) {
        mpz_class& cell = a[std::size_t(r) * n + j];
        cell -= factor * a[std::size_t(row) * n + j];
        mpz_mod(cell.get_mpz_t(), cell.get_mpz_t(), p.get_mpz_t());
      }
    }
    ++row;
  }
  res.rank = row;
  if (res.rank < n)
    res.det = 0;
  else if (negate && res.det != 0)
    res.det = p - res.det;
  return res;
}

}  // namespace

Residue mat_det(const MatrixZp& x) {
  std::vector<mpz_class> scratch(x.data(), x.data() + std::size_t(x.dim()) * x.dim());
  return make_residue(eliminate(scratch, x.dim(), x.modulus()).det, x.modulus());
}

unsigned mat_rank(const MatrixZp& x) {
  std::vector<mpz_class> scratch(x.data(), x.data() + std::size_t(x.dim()) * x.dim());
  return eliminate(scratch, x.dim(), x.modulus()).rank;
}

std::optional<MatrixZp> mat_inv(const MatrixZp& x) {
  const unsigned n = x.dim();
  const mpz_class& p = x.modulus();
  // Gauss-Jordan on the augmented matrix [x | I].
  std::vector<mpz_class> a(std::size_t(n) * 2 * n, mpz_class(0));
  const unsigned w = 2 * n;
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) a[std::size_t(i) * w + j] = x.at(i, j);
    a[std::size_t(i) * w + n + i] = 1;
  }
  for (unsigned col = 0; col < n; ++col) {
    unsigned pivot = col;
    while (pivot < n && a[std::size_t(pivot) * w + col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;  // singular
    if (pivot != col)
      for (unsigned j = 0; j < w; ++j)
        std::swap(a[std::size_t(pivot) * w + j], a[std::size_t(col) * w + j]);
    const Residue inv = mod_inv(Residue{a[std::size_t(col) * w + col], p});
    for (unsigned j = 0; j < w; ++j) {
      mpz_class& cell = a[std::size_t(col) * w + j];
      cell *= inv.value;
      mpz_mod(cell.get_mpz_t(), cell.get_mpz_t(), p.get_mpz_t());
    }
    for (unsigned r = 0; r < n; ++r) {
      if (r == col) continue;
      const mpz_class factor = a[std::size_t(r) * w + col];
      if (factor == 0) continue;
      for (unsigned j = 0; j < w; ++j) {
        mpz_class& cell = a[std::size_t(r) * w + j];
        cell -= factor * a[std::size_t(col) * w + j];
        mpz_mod(cell.get_mpz_t(), cell.get_mpz_t(), p.get_mpz_t());
      }
    }
  }
  MatrixZp out(n, p);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) out.set(i, j, a[std::size_t(i) * w + n + j]);
  return out;
}

MatrixZp mat_pow(const MatrixZp& x, const mpz_class& e) {
  if (e < 0) throw std::invalid_argument("mat_pow: negative exponent");
  MatrixZp acc = MatrixZp::identity(x.dim(), x.modulus());
  if (e == 0) return acc;
  const std::size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = nbits; i-- > 0;) {
    acc = mat_mul(acc, acc);
    if (mpz_tstbit(e.get_mpz_t(), i)) acc = mat_mul(acc, x);
  }
  return acc;
}

MatrixZp mat_random(unsigned dim, const mpz_class& modulus, Rng& rng) {
  MatrixZp out(dim, modulus);
  for (unsigned i = 0; i < dim; ++i)
    for (unsigned j = 0; j < dim; ++j) out.set(i, j, rng.below(modulus));
  return out;
}

bool commutes(const MatrixZp& x, const MatrixZp& y) {
  return mat_mul(x, y) == mat_mul(y, x);
}

void put_matrix(Bytes& out, const MatrixZp& m) {
  put_u32be(out, m.dim());
  for (unsigned i = 0; i < m.dim(); ++i)
    for (unsigned j = 0; j < m.dim(); ++j) put_mpz(out, m.at(i, j));
}

MatrixZp get_matrix(ByteReader& in, const mpz_class& modulus, unsigned expect_dim) {
  const std::uint32_t dim = in.get_u32be();
  if (dim == 0 || dim > kMaxDim) throw SerialError("matrix dimension out of range");
  if (expect_dim != 0 && dim != expect_dim)
    throw SerialError("matrix dimension does not match parameters");
  MatrixZp m(dim, modulus);
  for (unsigned i = 0; i < dim; ++i)
    for (unsigned j = 0; j < dim; ++j) {
      mpz_class v = in.get_mpz();
      if (v >= modulus) throw SerialError("matrix entry not reduced");
      m.set(i, j, std::move(v));
    }
  return m;
}

}  // namespace makekex
