#include <doctest.h>

#include <string>

#include "make/attacks.hpp"
#include "make/semidirect.hpp"

using namespace makekex;

namespace {

// Token a victim with exponent m would publish.
MatrixZp victim_token(const PublicParams& params, const mpz_class& m) {
  return sd_pow(sd_make(params.m_mat, params.h1, params.h2), m).additive;
}

}  // namespace

TEST_CASE("exhaustive search recovers small exponents and the key") {
  Rng rng(41);
  const PublicParams params = gen_public_params(16, 2, rng);
  const ExchangeState alice = initiate(params, PrivateExponent{1000}, false);
  const ExchangeState bob = initiate(params, PrivateExponent{777}, false);
  const SharedKey honest = finalize(alice, bob.token);

  const AttackOutcome hit =
      brute_force_exponent(params, alice.token, 4096, bob.token);
  REQUIRE(hit.status == AttackStatus::kRecovered);
  CHECK(*hit.exponent == 1000);
  CHECK(hit.work == 1000);
  REQUIRE(hit.key.has_value());
  CHECK(*hit.key == honest.k);

  const AttackOutcome miss = brute_force_exponent(params, alice.token, 500);
  CHECK(miss.status == AttackStatus::kNotFound);
  CHECK_FALSE(miss.exponent.has_value());
  CHECK(miss.work == 500);
}

TEST_CASE("determinant identity holds along the token recurrence") {
  Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    const PublicParams params = gen_adversarial_params(16, 3, rng);
    const mpz_class m = 1 + mpz_class(rng.below_u64(400));
    const MatrixZp token = victim_token(params, m);
    const MatrixZp stepped =
        mat_add(mat_mul(mat_mul(params.h1, token), params.h2),
                mat_sub(params.m_mat, token));
    const Residue lhs = mat_det(stepped);
    const Residue rhs =
        mod_mul(mod_pow(mat_det(mat_mul(params.h1, params.h2)), m),
                mat_det(params.m_mat));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("determinant attack recovers exponents from invertible actions") {
  Rng rng(43);
  for (int t = 0; t < 6; ++t) {
    const PublicParams params = gen_adversarial_params(18, 3, rng);
    const mpz_class m = 2 + rng.below(params.prime.p - 4);
    const PrivateExponent n{2 + rng.below(params.prime.p - 4)};
    const MatrixZp token = victim_token(params, m);
    const ExchangeState peer = initiate(params, n, false);

    const AttackOutcome out = determinant_attack(params, token, peer.token);
    REQUIRE(out.status == AttackStatus::kRecovered);
    CHECK(*out.exponent == m);
    REQUIRE(out.key.has_value());
    // The recovered key must match what the victim would have derived.
    const SemidirectElement base =
        sd_make(params.m_mat, params.h1, params.h2);
    const SemidirectElement victim = sd_pow(base, m);
    const MatrixZp honest =
        mat_add(mat_mul(mat_mul(victim.pair_left, peer.token), victim.pair_right),
                victim.additive);
    CHECK(*out.key == honest);
  }
}

TEST_CASE("determinant attack walks the congruence class when det has small order") {
  // Hand-built instance mod 23: det(H1*H2) = 22 has order 2, so the
  // baby-step giant-step answer only pins the exponent's parity and the
  // attack must try 1, 3, 5, ... until the token replays.
  const SafePrime sp{23, 11, 5};
  const MatrixZp h1 = MatrixZp::from_entries(2, sp.p, {1, 1, 0, 1});
  const MatrixZp h2 = MatrixZp::from_entries(2, sp.p, {22, 0, 0, 1});
  const MatrixZp m_mat = MatrixZp::from_entries(2, sp.p, {1, 2, 3, 4});
  const PublicParams params{sp, 2, m_mat, h1, h2};
  REQUIRE(mat_det(mat_mul(h1, h2)).value == 22);

  const MatrixZp token = victim_token(params, 9);
  const AttackOutcome out = determinant_attack(params, token);
  REQUIRE(out.status == AttackStatus::kRecovered);
  CHECK(*out.exponent == 9);
  CHECK(out.work == 5);  // candidates 1, 3, 5, 7, 9
  CHECK(out.detail == "determinant dlog, order-2 stepping");
}

TEST_CASE("determinant attack declares itself inapplicable honestly") {
  Rng rng(44);
  SUBCASE("singular acting matrices") {
    const PublicParams params = gen_public_params(16, 3, rng);
    const MatrixZp token = victim_token(params, 12345);
    const AttackOutcome out = determinant_attack(params, token);
    CHECK(out.status == AttackStatus::kInapplicable);
    CHECK(out.detail.find("det(H1*H2) = 0") != std::string::npos);
  }
  SUBCASE("singular platform matrix") {
    const SafePrime sp{23, 11, 5};
    const MatrixZp h1 = MatrixZp::from_entries(2, sp.p, {1, 1, 0, 1});
    const MatrixZp h2 = MatrixZp::from_entries(2, sp.p, {2, 0, 0, 3});
    const MatrixZp m_mat = MatrixZp::from_entries(2, sp.p, {1, 1, 1, 1});
    const PublicParams params{sp, 2, m_mat, h1, h2};
    const MatrixZp token = victim_token(params, 7);
    const AttackOutcome out = determinant_attack(params, token);
    CHECK(out.status == AttackStatus::kInapplicable);
    CHECK(out.detail.find("det(M) = 0") != std::string::npos);
  }
}

TEST_CASE("discrete-log embedding has the advertised shape") {
  Rng rng(45);
  const SafePrime sp{2027, 1013, 11};
  const Residue g = make_residue(5, sp.p);
  const Residue target = make_residue(1234, sp.p);
  const DlEmbedding emb = build_dl_embedding(sp, g, target, rng);

  CHECK(emb.params.dim == 3);
  CHECK(emb.params.h1 == emb.params.h2);
  CHECK(emb.params.h1.at(0, 0) == emb.h11.value);
  CHECK(emb.params.h1.at(1, 1) == 1);
  CHECK(emb.params.h1.at(2, 2) == 0);
  for (unsigned i = 0; i < 3; ++i)
    for (unsigned j = 0; j < 3; ++j)
      if (i != j) CHECK(emb.params.h1.at(i, j) == 0);

  CHECK(emb.params.m_mat.at(0, 0) == g.value);
  CHECK(emb.forged_token.at(0, 0) == target.value);
  for (unsigned i = 0; i < 3; ++i)
    for (unsigned j = 0; j < 3; ++j) {
      const bool allowed =
          (i == 0 && j == 0) || (i == 1 && (j == 1 || j == 2)) || (i == 2 && j == 2);
      if (!allowed) {
        CHECK(emb.params.m_mat.at(i, j) == 0);
        CHECK(emb.forged_token.at(i, j) == 0);
      }
    }
}

TEST_CASE("the embedded corner follows the geometric sum, not a power of g") {
  Rng rng(46);
  for (const unsigned long pv : {11ul, 23ul, 2027ul}) {
    const mpz_class p = pv;
    const SafePrime sp = safe_prime_from(p);
    const Residue g = make_residue(2 + rng.below(p - 3), p);
    const Residue h11 = make_residue(2 + rng.below(p - 3), p);

    // Closed form against the literal token recurrence.
    MatrixZp m_mat(3, p);
    m_mat.set(0, 0, g.value);
    MatrixZp h(3, p);
    h.set(0, 0, h11.value);
    h.set(1, 1, 1);
    MatrixZp acc = m_mat;
    for (mpz_class m = 1; m <= 60; ++m) {
      CHECK(embedding_corner(g, h11, m).value == acc.at(0, 0));
      acc = mat_add(mat_mul(mat_mul(h, acc), h), m_mat);
    }

    // Neither claimed exponent law reproduces the corner.
    int mism_shifted = 0, mism_direct = 0, trials = 0;
    for (mpz_class m = 2; m <= 40; ++m) {
      ++trials;
      const Residue corner = embedding_corner(g, h11, m);
      if (corner != mod_pow(g, (m - 1) * (m - 2))) ++mism_shifted;
      if (corner != mod_pow(g, m * (m - 1))) ++mism_direct;
    }
    CHECK(mism_shifted > trials / 2);
    CHECK(mism_direct > trials / 2);
  }
}

TEST_CASE("corner closed form handles h11^2 = 1") {
  const mpz_class p = 23;
  const Residue g = make_residue(7, p);
  const Residue minus_one = make_residue(p - 1, p);
  // All even powers of h11 are 1, so the sum is m copies of g.
  CHECK(embedding_corner(g, minus_one, 5).value == (7 * 5) % 23);
  CHECK(embedding_corner(g, make_residue(1, p), 4).value == (7 * 4) % 23);
}

TEST_CASE("dlog reduction through the embedding fails verification") {
  Rng rng(47);
  const SafePrime sp{2027, 1013, 11};
  for (int t = 0; t < 5; ++t) {
    const Residue g = make_residue(2 + rng.below(sp.p - 3), sp.p);
    const mpz_class k = 1 + rng.below(sp.p - 2);
    const Residue target = mod_pow(g, k);

    const AttackOutcome via_transcript = reduce_dlog_to_make(
        sp, g, target, make_transcript_oracle(2200), rng);
    CHECK(via_transcript.status == AttackStatus::kNotFound);
    CHECK(via_transcript.work == 2);  // both branches attempted
    CHECK(via_transcript.detail.find("geometric sum") != std::string::npos);

    const AttackOutcome via_corner =
        reduce_dlog_to_make(sp, g, target, make_corner_oracle(2200), rng);
    CHECK(via_corner.status == AttackStatus::kNotFound);
  }
}

TEST_CASE("reduction rejects unusable inputs") {
  Rng rng(48);
  const SafePrime good{2027, 1013, 11};
  CHECK_THROWS_AS(reduce_dlog_to_make(good, make_residue(0, good.p),
                                      make_residue(3, good.p),
                                      make_transcript_oracle(10), rng),
                  std::invalid_argument);
  const SafePrime wrong_form{29, 14, 5};  // 29 = 1 mod 4
  CHECK_THROWS_AS(reduce_dlog_to_make(wrong_form, make_residue(2, wrong_form.p),
                                      make_residue(3, wrong_form.p),
                                      make_transcript_oracle(10), rng),
                  std::invalid_argument);
}
