#include "make/attacks.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

#include "make/semidirect.hpp"

namespace makekex {

const char* attack_status_name(AttackStatus s) {
  switch (s) {
    case AttackStatus::kRecovered: return "recovered";
    case AttackStatus::kNotFound: return "not-found";
    case AttackStatus::kInapplicable: return "inapplicable";
  }
  return "unknown";
}

namespace {

// Shared key once the exponent is known: K = H1^m * B * H2^m + A.
MatrixZp rebuild_key(const PublicParams& params, const mpz_class& exponent,
                     const MatrixZp& token, const MatrixZp& peer_token) {
  const MatrixZp h1m = mat_pow(params.h1, exponent);
  const MatrixZp h2m = mat_pow(params.h2, exponent);
  return mat_add(mat_mul(mat_mul(h1m, peer_token), h2m), token);
}

void maybe_fill_key(AttackOutcome& out, const PublicParams& params,
                    const MatrixZp& token, const std::optional<MatrixZp>& peer_token) {
  if (peer_token && out.exponent)
    out.key = rebuild_key(params, *out.exponent, token, *peer_token);
}

// Order of a unit modulo a safe prime: divides 2q, so one of {1, 2, q, 2q}.
mpz_class unit_order(const Residue& d, const SafePrime& prime) {
  if (d.value == 1) return 1;
  if (d.value == prime.p - 1) return 2;
  if (mod_pow(d, prime.q).value == 1) return prime.q;
  return 2 * prime.q;
}

}  // namespace

AttackOutcome brute_force_exponent(const PublicParams& params, const MatrixZp& token,
                                   std::uint64_t bound,
                                   const std::optional<MatrixZp>& peer_token) {
  AttackOutcome out;
  out.detail = "exhaustive token replay";
  MatrixZp acc = params.m_mat;  // A_1
  for (std::uint64_t m = 1; m <= bound; ++m) {
    ++out.work;
    if (acc == token) {
      out.status = AttackStatus::kRecovered;
      out.exponent = mpz_class(m);
      maybe_fill_key(out, params, token, peer_token);
      return out;
    }
    acc = mat_add(mat_mul(mat_mul(params.h1, acc), params.h2), params.m_mat);
  }
  out.status = AttackStatus::kNotFound;
  out.detail = "no exponent up to bound reproduces the token";
  return out;
}

AttackOutcome determinant_attack(const PublicParams& params, const MatrixZp& token,
                                 const std::optional<MatrixZp>& peer_token) {
  AttackOutcome out;
  const mpz_class& p = params.prime.p;

  const Residue d = mat_det(mat_mul(params.h1, params.h2));
  if (d.value == 0) {
    out.status = AttackStatus::kInapplicable;
    out.detail = "det(H1*H2) = 0: the acting pair is singular and the "
                 "determinant equation degenerates to 0 = 0";
    return out;
  }
  const Residue det_m = mat_det(params.m_mat);
  if (det_m.value == 0) {
    out.status = AttackStatus::kInapplicable;
    out.detail = "det(M) = 0: the determinant equation carries no exponent";
    return out;
  }

  // det(H1 A H2 + M - A) = det(H1 H2)^m * det(M).
  const MatrixZp stepped = mat_add(mat_mul(mat_mul(params.h1, token), params.h2),
                                   mat_sub(params.m_mat, token));
  const Residue target = mod_mul(mat_det(stepped), mod_inv(det_m));

  const mpz_class order = unit_order(d, params.prime);
  const auto base_exp = discrete_log_bsgs(d, target, order);
  if (!base_exp) {
    out.status = AttackStatus::kNotFound;
    out.detail = "target is outside the subgroup generated by det(H1*H2)";
    return out;
  }

  // The dlog is only determined modulo ord(d); walk the congruence class
  // and let token replay pick the right representative.
  const SemidirectElement base = sd_make(params.m_mat, params.h1, params.h2);
  const mpz_class max_exponent = p - 2;  // exponents live in [1, p-2]
  constexpr std::uint64_t kMaxCandidates = 1u << 16;
  for (mpz_class cand = *base_exp == 0 ? order : *base_exp; cand <= max_exponent;
       cand += order) {
    if (++out.work > kMaxCandidates) {
      out.status = AttackStatus::kNotFound;
      out.detail = "candidate budget exhausted (det(H1*H2) has tiny order)";
      return out;
    }
    if (sd_pow(base, cand).additive == token) {
      out.status = AttackStatus::kRecovered;
      out.exponent = cand;
      out.detail = "determinant dlog, order-" + order.get_str(10) + " stepping";
      maybe_fill_key(out, params, token, peer_token);
      return out;
    }
  }
  out.status = AttackStatus::kNotFound;
  out.detail = "no candidate in the congruence class reproduces the token";
  return out;
}

DlEmbedding build_dl_embedding(const SafePrime& prime, const Residue& g,
                               const Residue& target, Rng& rng) {
  const mpz_class& p = prime.p;
  if (g.modulus != p || target.modulus != p)
    throw std::invalid_argument("embedding operands must live modulo the given prime");
  if (p < 5) throw std::invalid_argument("prime too small for the 3x3 embedding");

  // Platform: M carries g in the corner, H1 = H2 = diag(h11, 1, 0).
  MatrixZp m_mat(3, p);
  m_mat.set(0, 0, g.value);
  m_mat.set(1, 1, rng.below(p));
  m_mat.set(1, 2, rng.below(p));
  m_mat.set(2, 2, rng.below(p));

  const Residue h11 = make_residue(2 + rng.below(p - 3), p);  // avoid 0, 1, p-1
  MatrixZp h(3, p);
  h.set(0, 0, h11.value);
  h.set(1, 1, 1);

  // Forged token: the discrete-log target sits where a genuine token's
  // corner would be; the rest mimics a genuine token's support.
  MatrixZp forged(3, p);
  forged.set(0, 0, target.value);
  forged.set(1, 1, rng.below(p));
  forged.set(1, 2, rng.below(p));
  forged.set(2, 2, rng.below(p));

  PublicParams params{prime, 3, std::move(m_mat), h, h};
  return DlEmbedding{std::move(params), std::move(forged), h11};
}

Residue embedding_corner(const Residue& g, const Residue& h11, const mpz_class& m) {
  if (m < 1) throw std::invalid_argument("embedding_corner: m must be >= 1");
  if (g.modulus != h11.modulus)
    throw std::invalid_argument("embedding_corner: moduli differ");
  const Residue ratio = mod_mul(h11, h11);
  if (ratio.value == 1) {
    // Degenerate geometric series: m equal terms.
    return mod_mul(g, make_residue(m, g.modulus));
  }
  // g * (ratio^m - 1) / (ratio - 1)
  const Residue numerator =
      mod_sub(mod_pow(ratio, m), make_residue(1, g.modulus));
  const Residue denominator = mod_sub(ratio, make_residue(1, g.modulus));
  return mod_mul(g, mod_mul(numerator, mod_inv(denominator)));
}

ExponentOracle make_transcript_oracle(std::uint64_t cap) {
  return [cap](const PublicParams& params,
               const MatrixZp& token) -> std::optional<mpz_class> {
    MatrixZp acc = params.m_mat;
    for (std::uint64_t m = 1; m <= cap; ++m) {
      if (acc == token) return mpz_class(m);
      acc = mat_add(mat_mul(mat_mul(params.h1, acc), params.h2), params.m_mat);
    }
    return std::nullopt;
  };
}

ExponentOracle make_corner_oracle(std::uint64_t cap) {
  return [cap](const PublicParams& params,
               const MatrixZp& token) -> std::optional<mpz_class> {
    MatrixZp acc = params.m_mat;
    for (std::uint64_t m = 1; m <= cap; ++m) {
      if (acc.at(0, 0) == token.at(0, 0)) return mpz_class(m);
      acc = mat_add(mat_mul(mat_mul(params.h1, acc), params.h2), params.m_mat);
    }
    return std::nullopt;
  };
}

AttackOutcome reduce_dlog_to_make(const SafePrime& prime, const Residue& g,
                                  const Residue& target, const ExponentOracle& oracle,
                                  Rng& rng) {
  AttackOutcome out;
  const mpz_class& p = prime.p;
  if (mpz_fdiv_ui(p.get_mpz_t(), 4) != 3)
    throw std::invalid_argument("reduction requires p = 3 mod 4");
  if (g.value == 0 || target.value == 0)
    throw std::invalid_argument("reduction needs a unit base and target");

  // r = 9/4 in Z_p; the quadratic relation k = (m-1)(m-2) = (m-3/2)^2 - r
  // guarantees (by the p = 4n+3 residue dichotomy) that one of the two
  // branch targets has the hoped-for form.
  const Residue r = mod_mul(make_residue(9, p), mod_inv(make_residue(4, p)));

  for (int branch = 0; branch < 2; ++branch) {
    const Residue branch_target =
        branch == 0 ? target
                    : mod_mul(mod_pow(g, r.value), mod_inv(target));  // g^r * y^-1
    DlEmbedding emb = build_dl_embedding(prime, g, branch_target, rng);
    const auto m = oracle(emb.params, emb.forged_token);
    ++out.work;
    if (!m) continue;

    // Map the oracle's m back through the printed quadratic relation and
    // accept only a candidate that actually explains the target.
    const Residue f = make_residue((*m - 1) * (*m - 2), p);
    const Residue k_field = branch == 0 ? f : mod_sub(r, f);
    for (const mpz_class& candidate :
         {k_field.value, mpz_class(k_field.value % (p - 1))}) {
      if (mod_pow(g, candidate).value == target.value) {
        out.status = AttackStatus::kRecovered;
        out.exponent = candidate;
        out.detail = branch == 0 ? "direct branch" : "reflected branch (g^(r-k))";
        return out;
      }
    }
  }
  out.status = AttackStatus::kNotFound;
  out.detail = "no oracle answer survived verification against g^k; the "
               "embedded corner is a geometric sum in h11, not a power of g, "
               "so the quadratic back-map does not apply";
  return out;
}

}  // namespace makekex
