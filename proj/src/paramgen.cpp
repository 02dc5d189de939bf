#include "make/paramgen.hpp"

#include <sstream>
#include <stdexcept>

namespace makekex {

namespace {

constexpr int kMaxResampleAttempts = 10000;
constexpr std::uint8_t kMagic[4] = {'M', 'A', 'K', 'E'};
constexpr std::uint8_t kFormatVersion = 0x01;

MatrixZp random_invertible(unsigned dim, const mpz_class& p, Rng& rng) {
  for (int i = 0; i < kMaxResampleAttempts; ++i) {
    MatrixZp m = mat_random(dim, p, rng);
    if (mat_det(m).value != 0) return m;
  }
  throw std::runtime_error("could not sample an invertible matrix");
}

}  // namespace

std::pair<MatrixZp, ConjugationWitness> build_singular_conjugate(
    const SafePrime& prime, unsigned dim, Rng& rng) {
  if (dim < 2) throw std::invalid_argument("need dim >= 2");
  if (prime.p < 5) throw std::invalid_argument("prime too small for sampling");
  const mpz_class& p = prime.p;

  MatrixZp d(dim, p);
  // d_11 = 0 makes H singular; the other diagonal entries avoid 0, 1 and
  // p-1 so no eigenvalue has multiplicative order <= 2.
  const mpz_class excluded_span = p - 3;  // |Z_p \ {0, 1, p-1}|
  for (unsigned i = 1; i < dim; ++i) {
    mpz_class v = 2 + rng.below(excluded_span);  // uniform over [2, p-2]
    d.set(i, i, std::move(v));
  }

  MatrixZp s = random_invertible(dim, p, rng);
  const MatrixZp s_inv = *mat_inv(s);
  MatrixZp h = mat_mul(mat_mul(s_inv, d), s);
  return {std::move(h), ConjugationWitness{std::move(s), std::move(d)}};
}

PublicParams gen_public_params(const SafePrime& prime, unsigned dim, Rng& rng) {
  if (dim < 2) throw std::invalid_argument("need dim >= 2");
  MatrixZp h1 = build_singular_conjugate(prime, dim, rng).first;
  MatrixZp h2 = build_singular_conjugate(prime, dim, rng).first;
  for (int i = 0; i < kMaxResampleAttempts; ++i) {
    MatrixZp m = mat_random(dim, prime.p, rng);
    if (!commutes(m, h1) && !commutes(m, h2))
      return PublicParams{prime, dim, std::move(m), std::move(h1), std::move(h2)};
  }
  throw std::runtime_error("could not sample a non-commuting M");
}

PublicParams gen_public_params(unsigned bits, unsigned dim, Rng& rng) {
  return gen_public_params(gen_safe_prime(bits, rng), dim, rng);
}

PublicParams gen_adversarial_params(const SafePrime& prime, unsigned dim, Rng& rng) {
  if (dim < 2) throw std::invalid_argument("need dim >= 2");
  const mpz_class& p = prime.p;
  MatrixZp h1 = random_invertible(dim, p, rng);
  MatrixZp h2(dim, p);
  // Keep d = det(H1 * H2) away from {1, p-1}: those are exactly the
  // elements of multiplicative order <= 2 and carry no exponent
  // information through d^m.
  for (int i = 0;; ++i) {
    if (i >= kMaxResampleAttempts)
      throw std::runtime_error("could not sample adversarial acting pair");
    h2 = random_invertible(dim, p, rng);
    const mpz_class d = mat_det(mat_mul(h1, h2)).value;
    if (d != 1 && d != p - 1) break;
  }
  for (int i = 0; i < kMaxResampleAttempts; ++i) {
    MatrixZp m = mat_random(dim, p, rng);
    if (mat_det(m).value == 0) continue;
    if (!commutes(m, h1) && !commutes(m, h2))
      return PublicParams{prime, dim, std::move(m), std::move(h1), std::move(h2)};
  }
  throw std::runtime_error("could not sample a non-commuting M");
}

PublicParams gen_adversarial_params(unsigned bits, unsigned dim, Rng& rng) {
  return gen_adversarial_params(gen_safe_prime(bits, rng), dim, rng);
}

std::vector<std::string> validate_params(const PublicParams& params) {
  std::vector<std::string> bad;
  const auto& sp = params.prime;

  if (sp.p < 5 || !is_probable_prime(sp.p)) bad.emplace_back("p is not prime");
  if (sp.q * 2 + 1 != sp.p || (sp.q >= 2 && !is_probable_prime(sp.q)))
    bad.emplace_back("p is not 2q+1 with q prime");
  if (mpz_fdiv_ui(sp.p.get_mpz_t(), 4) != 3) bad.emplace_back("p is not 3 mod 4");
  if (sp.bit_length != mpz_sizeinbase(sp.p.get_mpz_t(), 2))
    bad.emplace_back("stated bit length does not match p");

  if (params.dim < 2) {
    bad.emplace_back("dim < 2");
    return bad;
  }
  const auto shape_ok = [&](const MatrixZp& m) {
    return m.dim() == params.dim && m.modulus() == sp.p;
  };
  if (!shape_ok(params.m_mat) || !shape_ok(params.h1) || !shape_ok(params.h2)) {
    bad.emplace_back("matrix shape or modulus mismatch");
    return bad;
  }

  if (mat_det(params.h1).value != 0) bad.emplace_back("det(H1) != 0");
  if (mat_det(params.h2).value != 0) bad.emplace_back("det(H2) != 0");
  if (mat_rank(params.h1) != params.dim - 1) bad.emplace_back("rank(H1) != dim-1");
  if (mat_rank(params.h2) != params.dim - 1) bad.emplace_back("rank(H2) != dim-1");
  if (commutes(params.m_mat, params.h1)) bad.emplace_back("M commutes with H1");
  if (commutes(params.m_mat, params.h2)) bad.emplace_back("M commutes with H2");
  return bad;
}

PrivateExponent gen_private_exponent(const SafePrime& prime, Rng& rng) {
  const std::size_t len = mpz_sizeinbase(prime.q.get_mpz_t(), 2);
  mpz_class v = rng.bits(len - 1);
  mpz_setbit(v.get_mpz_t(), len - 1);  // value in [2^(L-1), 2^L)
  return PrivateExponent{std::move(v)};
}

bool exponent_in_range(const PrivateExponent& e, const SafePrime& prime) {
  const std::size_t len = mpz_sizeinbase(prime.q.get_mpz_t(), 2);
  return e.value >= 0 && mpz_sizeinbase(e.value.get_mpz_t(), 2) == len &&
         mpz_tstbit(e.value.get_mpz_t(), len - 1) == 1;
}

Bytes serialize_params(const PublicParams& params) {
  Bytes out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u8(out, kFormatVersion);
  put_u8(out, static_cast<std::uint8_t>(params.dim));
  put_mpz(out, params.prime.p);
  put_matrix(out, params.m_mat);
  put_matrix(out, params.h1);
  put_matrix(out, params.h2);
  return out;
}

PublicParams parse_params(const Bytes& buf) {
  ByteReader in(buf);
  for (std::uint8_t expected : kMagic)
    if (in.get_u8() != expected) throw SerialError("bad parameter magic");
  if (in.get_u8() != kFormatVersion) throw SerialError("unsupported format version");
  const unsigned dim = in.get_u8();
  if (dim < 2) throw SerialError("dim < 2");
  const mpz_class p = in.get_mpz();
  const SafePrime sp = safe_prime_from(p);
  MatrixZp m = get_matrix(in, p, dim);
  MatrixZp h1 = get_matrix(in, p, dim);
  MatrixZp h2 = get_matrix(in, p, dim);
  in.expect_end();
  return PublicParams{sp, dim, std::move(m), std::move(h1), std::move(h2)};
}

namespace {

void put_matrix_text(std::ostream& os, const char* name, const MatrixZp& m) {
  os << name << " =";
  for (unsigned i = 0; i < m.dim(); ++i)
    for (unsigned j = 0; j < m.dim(); ++j) os << ' ' << m.at(i, j).get_str(16);
  os << '\n';
}

MatrixZp parse_matrix_text(const std::string& line, const std::string& name,
                           unsigned dim, const mpz_class& p) {
  const auto eq = line.find('=');
  if (eq == std::string::npos || line.substr(0, eq).find(name) == std::string::npos)
    throw SerialError("expected line for " + name);
  std::istringstream entries(line.substr(eq + 1));
  MatrixZp m(dim, p);
  std::string tok;
  for (unsigned i = 0; i < dim; ++i)
    for (unsigned j = 0; j < dim; ++j) {
      if (!(entries >> tok)) throw SerialError("too few entries for " + name);
      mpz_class v;
      if (v.set_str(tok, 16) != 0) throw SerialError("bad entry in " + name);
      if (v < 0 || v >= p) throw SerialError("entry out of range in " + name);
      m.set(i, j, std::move(v));
    }
  std::string extra;
  if (entries >> extra) throw SerialError("too many entries for " + name);
  return m;
}

std::string next_content_line(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    return line.substr(start, end - start + 1);
  }
  throw SerialError("parameter text ended early");
}

}  // namespace

std::string params_to_text(const PublicParams& params) {
  std::ostringstream os;
  os << "make-params v1\n";
  os << "p = " << params.prime.p.get_str(10) << '\n';
  os << "dim = " << params.dim << '\n';
  put_matrix_text(os, "M", params.m_mat);
  put_matrix_text(os, "H1", params.h1);
  put_matrix_text(os, "H2", params.h2);
  return os.str();
}

PublicParams params_from_text(const std::string& text) {
  std::istringstream is(text);
  if (next_content_line(is) != "make-params v1")
    throw SerialError("missing make-params header");

  std::string line = next_content_line(is);
  if (line.rfind("p", 0) != 0 || line.find('=') == std::string::npos)
    throw SerialError("expected line for p");
  mpz_class p;
  if (p.set_str(line.substr(line.find('=') + 1), 10) != 0)
    throw SerialError("bad prime");

  line = next_content_line(is);
  if (line.rfind("dim", 0) != 0 || line.find('=') == std::string::npos)
    throw SerialError("expected line for dim");
  const long dim = std::stol(line.substr(line.find('=') + 1));
  if (dim < 2 || dim > 64) throw SerialError("dim out of range");

  const SafePrime sp = safe_prime_from(p);
  MatrixZp m = parse_matrix_text(next_content_line(is), "M", dim, p);
  MatrixZp h1 = parse_matrix_text(next_content_line(is), "H1", dim, p);
  MatrixZp h2 = parse_matrix_text(next_content_line(is), "H2", dim, p);
  return PublicParams{sp, static_cast<unsigned>(dim), std::move(m), std::move(h1),
                      std::move(h2)};
}

}  // namespace makekex
