#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <gmpxx.h>

#include "make/paramgen.hpp"

namespace makekex {

// Histogram of residues split into `bin_count` equal bins of width
// floor(p / bin_count); values past the last boundary land in the final
// bin (it absorbs the remainder of the range).
struct Histogram {
  unsigned bin_count = 0;
  mpz_class bin_width;
  mpz_class range;  // values lie in [0, range)
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;
};

// Joint histogram of two entry positions, bins x bins cells, row-major.
struct PairHistogram {
  unsigned bins = 0;
  mpz_class bin_width;
  mpz_class range;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;
};

unsigned bin_of(const mpz_class& value, const mpz_class& bin_width, unsigned bins);

// Shared keys from `trials` independent runs over fixed parameters with
// fresh exponents each run.  The work is split into `partitions` fixed
// slices, each with its own generator derived from (seed, slice), so the
// output is identical whatever the thread count.  Each slice's first run
// is cross-checked against a full two-party exchange.
std::vector<MatrixZp> sample_keys(const PublicParams& params, std::uint64_t trials,
                                  std::uint64_t seed, unsigned partitions = 16,
                                  unsigned threads = 0);

Histogram entry_histogram(const std::vector<MatrixZp>& keys, unsigned i, unsigned j,
                          unsigned bins = 10);

enum class MeanSelector { kRow, kColumn, kAll };

// Per-key mean of the selected entries, computed in the field (sum times
// the inverse of the entry count modulo p).
Histogram mean_histogram(const std::vector<MatrixZp>& keys, MeanSelector selector,
                         unsigned index = 0, unsigned bins = 10);

PairHistogram pair_histogram(const std::vector<MatrixZp>& keys, unsigned i1,
                             unsigned j1, unsigned i2, unsigned j2,
                             unsigned bins = 10);

struct ChiSquareResult {
  double statistic = 0.0;
  double critical = 0.0;
  unsigned df = 0;
  bool pass = false;
};

// Test against the uniform expectation at significance 0.001.  The
// critical values for 9 and 99 degrees of freedom are the table entries
// 27.877 and 148.230; other df use the Wilson-Hilferty approximation.
// Throws if any bin expects fewer than 5 observations.
ChiSquareResult chi_square_uniform(const Histogram& h);
ChiSquareResult chi_square_uniform(const PairHistogram& h);

void write_histogram_csv(std::ostream& os, const Histogram& h);
void write_pair_csv(std::ostream& os, const PairHistogram& h);

}  // namespace makekex
