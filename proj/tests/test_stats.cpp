#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "make/stats.hpp"

using namespace makekex;

TEST_CASE("bin boundaries: width 10 over [0, 101)") {
  const mpz_class width = 10;  // 101 / 10
  CHECK(bin_of(0, width, 10) == 0);
  CHECK(bin_of(9, width, 10) == 0);
  CHECK(bin_of(10, width, 10) == 1);
  CHECK(bin_of(99, width, 10) == 9);
  CHECK(bin_of(100, width, 10) == 9);  // remainder folds into the last bin
  CHECK_THROWS_AS(bin_of(5, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(bin_of(5, width, 0), std::invalid_argument);
}

TEST_CASE("chi-square accepts balanced counts and rejects a heavy skew") {
  Histogram flat;
  flat.bin_count = 10;
  flat.bin_width = 10;
  flat.range = 101;
  flat.trials = 1000;
  flat.counts = {98, 103, 101, 95, 106, 99, 97, 102, 104, 95};
  const ChiSquareResult ok = chi_square_uniform(flat);
  CHECK(ok.df == 9);
  CHECK(ok.critical == doctest::Approx(27.877));
  CHECK(ok.pass);

  Histogram skew = flat;
  skew.counts = {500, 56, 55, 56, 55, 56, 55, 56, 55, 56};
  const ChiSquareResult bad = chi_square_uniform(skew);
  CHECK_FALSE(bad.pass);
  CHECK(bad.statistic > bad.critical);
}

TEST_CASE("chi-square critical values: pinned and approximated") {
  // Approximation sanity at two table entries not special-cased:
  // df=4 -> 18.467, df=19 -> 43.820 (both at significance 0.001).  The
  // cube-root approximation is weakest at small df (about 1.4% high at
  // df=4), hence the looser tolerance there.
  Histogram h;
  h.bin_count = 5;
  h.bin_width = 20;
  h.range = 101;
  h.trials = 1000;
  h.counts = {200, 200, 200, 200, 200};
  const ChiSquareResult r4 = chi_square_uniform(h);
  CHECK(r4.df == 4);
  CHECK(r4.statistic == doctest::Approx(0.0));
  CHECK(r4.critical == doctest::Approx(18.467).epsilon(0.02));

  Histogram h19;
  h19.bin_count = 20;
  h19.bin_width = 5;
  h19.range = 101;
  h19.trials = 2000;
  h19.counts.assign(20, 100);
  const ChiSquareResult r19 = chi_square_uniform(h19);
  CHECK(r19.df == 19);
  CHECK(r19.critical == doctest::Approx(43.820).epsilon(0.01));
}

TEST_CASE("chi-square refuses undersampled histograms") {
  Histogram h;
  h.bin_count = 10;
  h.bin_width = 10;
  h.range = 101;
  h.trials = 40;  // expectation 4 < 5
  h.counts.assign(10, 4);
  CHECK_THROWS_AS(chi_square_uniform(h), std::invalid_argument);
}

TEST_CASE("key sampling is deterministic and thread-count independent") {
  Rng rng(51);
  const PublicParams params = gen_public_params(24, 2, rng);
  const auto serial = sample_keys(params, 48, 999, 16, 1);
  const auto threaded = sample_keys(params, 48, 999, 16, 3);
  REQUIRE(serial.size() == 48);
  CHECK(serial == threaded);
  const auto again = sample_keys(params, 48, 999, 16, 2);
  CHECK(serial == again);
  const auto other_seed = sample_keys(params, 48, 1000, 16, 1);
  CHECK_FALSE(serial == other_seed);
}

TEST_CASE("histograms cover every key exactly once") {
  Rng rng(52);
  const PublicParams params = gen_public_params(20, 2, rng);
  const auto keys = sample_keys(params, 200, 7, 16, 0);

  const Histogram h = entry_histogram(keys, 0, 0);
  CHECK(h.range == params.prime.p);
  CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t(0)) == 200);

  const PairHistogram ph = pair_histogram(keys, 0, 0, 1, 1);
  CHECK(ph.counts.size() == 100);
  CHECK(std::accumulate(ph.counts.begin(), ph.counts.end(), std::uint64_t(0)) == 200);

  const Histogram mh = mean_histogram(keys, MeanSelector::kAll);
  CHECK(std::accumulate(mh.counts.begin(), mh.counts.end(), std::uint64_t(0)) == 200);
}

TEST_CASE("field means: worked 2x2 example mod 11") {
  // Key [[1,3],[5,7]]: row-0 mean = 4/2 = 2, column-0 mean = 6/2 = 3,
  // all-entries mean = 16 * inv(4) = 5*3 = 4 (inv(2)=6, inv(4)=3 mod 11).
  const mpz_class p = 11;
  const std::vector<MatrixZp> keys{
      MatrixZp::from_entries(2, p, {1, 3, 5, 7})};

  const Histogram row = mean_histogram(keys, MeanSelector::kRow, 0, 11);
  CHECK(row.bin_width == 1);  // width 1: bin index equals the mean itself
  CHECK(row.counts[2] == 1);

  const Histogram col = mean_histogram(keys, MeanSelector::kColumn, 0, 11);
  CHECK(col.counts[3] == 1);

  const Histogram all = mean_histogram(keys, MeanSelector::kAll, 0, 11);
  CHECK(all.counts[4] == 1);

  CHECK_THROWS_AS(mean_histogram(keys, MeanSelector::kRow, 5, 11),
                  std::invalid_argument);
}

TEST_CASE("sampled keys look uniform per entry") {
  Rng rng(53);
  const PublicParams params = gen_public_params(32, 2, rng);
  const auto keys = sample_keys(params, 1200, 4242, 16, 0);
  const ChiSquareResult entry = chi_square_uniform(entry_histogram(keys, 0, 0));
  CHECK(entry.pass);
  const ChiSquareResult pair =
      chi_square_uniform(pair_histogram(keys, 0, 0, 1, 1));
  CHECK(pair.df == 99);
  CHECK(pair.critical == doctest::Approx(148.230));
  CHECK(pair.pass);
}

TEST_CASE("histogram CSV output") {
  Histogram h;
  h.bin_count = 3;
  h.bin_width = 3;
  h.range = 11;
  h.trials = 6;
  h.counts = {1, 2, 3};
  std::ostringstream os;
  write_histogram_csv(os, h);
  CHECK(os.str() == "bin,lo,hi,count\n0,0,3,1\n1,3,6,2\n2,6,11,3\n");

  PairHistogram ph;
  ph.bins = 2;
  ph.bin_width = 5;
  ph.range = 11;
  ph.trials = 4;
  ph.counts = {1, 0, 2, 1};
  std::ostringstream pos;
  write_pair_csv(pos, ph);
  CHECK(pos.str() == "bin1,bin2,count\n0,0,1\n0,1,0\n1,0,2\n1,1,1\n");
}
