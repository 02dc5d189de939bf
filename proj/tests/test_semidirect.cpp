#include <doctest.h>

#include "make/semidirect.hpp"

using namespace makekex;

namespace {

SemidirectElement random_element(const mpz_class& p, unsigned dim, Rng& rng) {
  return sd_make(mat_random(dim, p, rng), mat_random(dim, p, rng),
                 mat_random(dim, p, rng));
}

}  // namespace

TEST_CASE("component shape checks") {
  CHECK_THROWS_AS(sd_make(MatrixZp(2, 11), MatrixZp(3, 11), MatrixZp(2, 11)),
                  std::invalid_argument);
  CHECK_THROWS_AS(sd_make(MatrixZp(2, 11), MatrixZp(2, 13), MatrixZp(2, 11)),
                  std::invalid_argument);
}

TEST_CASE("frozen squaring of a small element mod 11") {
  const MatrixZp m = MatrixZp::from_entries(2, 11, {1, 2, 3, 4});
  const MatrixZp h1 = MatrixZp::from_entries(2, 11, {0, 1, 1, 0});
  const MatrixZp h2 = MatrixZp::from_entries(2, 11, {2, 0, 0, 3});
  const SemidirectElement x = sd_make(m, h1, h2);
  const SemidirectElement sq = sd_mul(x, x);
  // Additive part: H1*M*H2 + M = [[6,1],[2,6]] + [[1,2],[3,4]] = [[7,3],[5,10]].
  CHECK(sq.additive == MatrixZp::from_entries(2, 11, {7, 3, 5, 10}));
  CHECK(sq.pair_left == MatrixZp::identity(2, 11));  // H1 is an involution
  CHECK(sq.pair_right == MatrixZp::from_entries(2, 11, {4, 0, 0, 9}));
}

TEST_CASE("multiplication is associative over commuting acting pairs") {
  // The two-sided action only composes consistently when acting pairs
  // commute with each other, so elements live over the cyclic semigroup
  // of one generating pair; with arbitrary pairs the product would not
  // even be associative.
  Rng rng(11);
  const mpz_class p = 10007;
  for (int t = 0; t < 60; ++t) {
    const unsigned dim = t % 2 == 0 ? 2 : 3;
    const MatrixZp left_gen = mat_random(dim, p, rng);
    const MatrixZp right_gen = mat_random(dim, p, rng);
    auto element = [&]() {
      const mpz_class j = 1 + rng.below_u64(50);
      return sd_make(mat_random(dim, p, rng), mat_pow(left_gen, j),
                     mat_pow(right_gen, j));
    };
    const SemidirectElement a = element();
    const SemidirectElement b = element();
    const SemidirectElement c = element();
    const SemidirectElement left = sd_mul(sd_mul(a, b), c);
    const SemidirectElement right = sd_mul(a, sd_mul(b, c));
    CHECK(left.additive == right.additive);
    CHECK(left.pair_left == right.pair_left);
    CHECK(left.pair_right == right.pair_right);
  }
}

TEST_CASE("powers satisfy x^a * x^b = x^(a+b)") {
  Rng rng(12);
  const mpz_class p = 1019;
  for (int t = 0; t < 25; ++t) {
    const SemidirectElement x = random_element(p, 3, rng);
    const mpz_class a = 1 + rng.below(500);
    const mpz_class b = 1 + rng.below(500);
    const SemidirectElement lhs = sd_mul(sd_pow(x, a), sd_pow(x, b));
    const SemidirectElement rhs = sd_pow(x, a + b);
    CHECK(lhs.additive == rhs.additive);
    CHECK(lhs.pair_left == rhs.pair_left);
    CHECK(lhs.pair_right == rhs.pair_right);
  }
}

TEST_CASE("sd_pow against the linear recurrence") {
  Rng rng(13);
  const mpz_class p = 2027;
  for (int t = 0; t < 10; ++t) {
    const MatrixZp m = mat_random(3, p, rng);
    const MatrixZp h1 = mat_random(3, p, rng);
    const MatrixZp h2 = mat_random(3, p, rng);
    const SemidirectElement base = sd_make(m, h1, h2);
    for (std::uint64_t e : {1ull, 2ull, 3ull, 7ull, 64ull, 100ull}) {
      const SemidirectElement powed = sd_pow(base, e);
      CHECK(powed.additive == naive_transcript(m, h1, h2, e));
      CHECK(powed.pair_left == mat_pow(h1, e));
      CHECK(powed.pair_right == mat_pow(h2, e));
    }
  }
}

TEST_CASE("exponent floor is one") {
  Rng rng(14);
  const SemidirectElement x = random_element(101, 2, rng);
  CHECK_THROWS_AS(sd_pow(x, 0), std::invalid_argument);
  CHECK_THROWS_AS(sd_pow(x, -3), std::invalid_argument);
  CHECK_THROWS_AS(naive_transcript(x.additive, x.pair_left, x.pair_right, 0),
                  std::invalid_argument);

  const SemidirectElement one = sd_pow(x, 1);
  CHECK(one.additive == x.additive);
}
