#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "make/paramgen.hpp"
#include "make/protocol.hpp"

namespace makekex {

enum class AttackStatus {
  kRecovered,     // exponent found and verified by replaying the token
  kNotFound,      // search space exhausted without a verified hit
  kInapplicable,  // instance lacks the structure the attack needs
};

struct AttackOutcome {
  AttackStatus status = AttackStatus::kNotFound;
  std::optional<mpz_class> exponent;
  std::optional<MatrixZp> key;  // shared key, when a peer token was supplied
  std::uint64_t work = 0;       // candidates examined
  std::string detail;
};

const char* attack_status_name(AttackStatus s);

// Exhaustive search: walk the token recurrence A_1 = M,
// A_{k+1} = H1 A_k H2 + M and compare against the observed token for
// m = 1..bound.  Works on any parameters.  When the peer's token is
// supplied, the shared key is reconstructed as well.
AttackOutcome brute_force_exponent(const PublicParams& params, const MatrixZp& token,
                                   std::uint64_t bound,
                                   const std::optional<MatrixZp>& peer_token = {});

// Determinant-based exponent recovery.  Uses the identity
//   H1 * A * H2 + M - A = H1^m * M * H2^m,
// whose determinant is det(H1 H2)^m * det(M): a discrete-log instance in
// Z_p solved by baby-step giant-step.  Requires det(H1 H2) != 0 and
// det(M) != 0; compliant parameters (singular H's) make the attack
// inapplicable, which is reported rather than treated as failure.
// Candidates congruent modulo the order of det(H1 H2) are disambiguated
// by replaying the token.
AttackOutcome determinant_attack(const PublicParams& params, const MatrixZp& token,
                                 const std::optional<MatrixZp>& peer_token = {});

// ---- Embedding of plain discrete log into the matrix protocol ------

// 3x3 instance built from a discrete-log pair (g, target):
//   M = [[g,0,0],[0,*,*],[0,0,*]] with random starred entries,
//   H1 = H2 = diag(h11, 1, 0) with h11 random,
// and a forged token whose (1,1) entry is `target`, the other entries
// following the support pattern of a genuine token ((2,2), (2,3), (3,3)
// random; everything else zero).
struct DlEmbedding {
  PublicParams params;
  MatrixZp forged_token;
  Residue h11;
};

DlEmbedding build_dl_embedding(const SafePrime& prime, const Residue& g,
                               const Residue& target, Rng& rng);

// The true (1,1) entry of a genuine token for the embedding platform:
//   corner(A_m) = g * sum_{i=0}^{m-1} h11^(2i)
// (a geometric series, evaluated in closed form).  Note this is NOT of
// the form g^f(m): the additive transcript sums corner terms instead of
// multiplying them, so the corner does not carry a discrete-log relation
// in g.  The regression test pins this shape against the recurrence.
Residue embedding_corner(const Residue& g, const Residue& h11, const mpz_class& m);

// An exponent-recovery oracle: given an instance (params, token),
// return the private exponent if it can find one.
using ExponentOracle =
    std::function<std::optional<mpz_class>(const PublicParams&, const MatrixZp&)>;

// Oracle that replays the full token recurrence for m = 1..cap.
ExponentOracle make_transcript_oracle(std::uint64_t cap);

// Oracle that matches only the (1,1) entry of the token for m = 1..cap.
ExponentOracle make_corner_oracle(std::uint64_t cap);

// Reduction attempt from a discrete-log instance (g, g^k) to exponent
// recovery on the embedded matrix instance.  Follows the two-branch
// procedure with r = 9/4 in Z_p: first the forged corner is g^k itself,
// then g^r * (g^k)^-1; an oracle answer m is mapped back through the
// quadratic relation k = (m-1)(m-2) (respectively r minus it) and every
// candidate is verified against g^k before being reported.  Because the
// true corner is a geometric sum rather than a power of g (see
// embedding_corner), no sound oracle can make this verification succeed
// except by accident; the function then honestly reports NotFound.
AttackOutcome reduce_dlog_to_make(const SafePrime& prime, const Residue& g,
                                  const Residue& target, const ExponentOracle& oracle,
                                  Rng& rng);

}  // namespace makekex
