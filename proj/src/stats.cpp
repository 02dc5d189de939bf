#include "make/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "make/protocol.hpp"
#include "make/semidirect.hpp"

namespace makekex {

unsigned bin_of(const mpz_class& value, const mpz_class& bin_width, unsigned bins) {
  if (bins == 0 || bin_width <= 0) throw std::invalid_argument("empty binning");
  mpz_class idx = value / bin_width;
  if (idx >= bins) return bins - 1;  // last bin absorbs the remainder
  return static_cast<unsigned>(idx.get_ui());
}

namespace {

void run_partition(const PublicParams& params, std::uint64_t seed,
                   std::uint64_t partition, std::uint64_t first, std::uint64_t last,
                   std::vector<MatrixZp>& out) {
  Rng rng = derive_rng(seed, partition);
  const SemidirectElement base = sd_make(params.m_mat, params.h1, params.h2);
  for (std::uint64_t t = first; t < last; ++t) {
    const PrivateExponent m = gen_private_exponent(params.prime, rng);
    const PrivateExponent n = gen_private_exponent(params.prime, rng);
    // The agreed key is the additive part of the (m+n)-th power; one
    // power instead of a simulated two-party run.
    MatrixZp k = sd_pow(base, m.value + n.value).additive;
    if (t == first) {
      // Keep the shortcut honest: replay this run as a real exchange.
      const ExchangeState alice = initiate(params, m, /*validate=*/false);
      const ExchangeState bob = initiate(params, n, /*validate=*/false);
      if (finalize(alice, bob.token).k != k || finalize(bob, alice.token).k != k)
        throw std::logic_error("sampled key disagrees with a full exchange");
    }
    out[t] = std::move(k);
  }
}

}  // namespace

std::vector<MatrixZp> sample_keys(const PublicParams& params, std::uint64_t trials,
                                  std::uint64_t seed, unsigned partitions,
                                  unsigned threads) {
  if (partitions == 0) throw std::invalid_argument("need at least one partition");
  if (threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : std::min(hw, partitions);
  }
  threads = std::min(threads, partitions);

  std::vector<MatrixZp> keys(trials, MatrixZp(params.dim, params.prime.p));

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&](unsigned tid) {
    try {
      for (std::uint64_t part = tid; part < partitions; part += threads) {
        const std::uint64_t first = trials * part / partitions;
        const std::uint64_t last = trials * (part + 1) / partitions;
        if (first < last) run_partition(params, seed, part, first, last, keys);
      }
    } catch (...) {
      std::scoped_lock lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned tid = 0; tid < threads; ++tid) pool.emplace_back(worker, tid);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return keys;
}

Histogram entry_histogram(const std::vector<MatrixZp>& keys, unsigned i, unsigned j,
                          unsigned bins) {
  if (keys.empty()) throw std::invalid_argument("no keys to tally");
  Histogram h;
  h.bin_count = bins;
  h.bin_width = keys.front().modulus() / bins;
  h.range = keys.front().modulus();
  h.trials = keys.size();
  h.counts.assign(bins, 0);
  for (const auto& k : keys) ++h.counts[bin_of(k.at(i, j), h.bin_width, bins)];
  return h;
}

Histogram mean_histogram(const std::vector<MatrixZp>& keys, MeanSelector selector,
                         unsigned index, unsigned bins) {
  if (keys.empty()) throw std::invalid_argument("no keys to tally");
  const unsigned dim = keys.front().dim();
  const mpz_class& p = keys.front().modulus();
  if (selector != MeanSelector::kAll && index >= dim)
    throw std::invalid_argument("selector index out of range");

  const unsigned count = selector == MeanSelector::kAll ? dim * dim : dim;
  const Residue inv_count = mod_inv(make_residue(count, p));

  Histogram h;
  h.bin_count = bins;
  h.bin_width = p / bins;
  h.range = p;
  h.trials = keys.size();
  h.counts.assign(bins, 0);
  for (const auto& k : keys) {
    mpz_class sum = 0;
    switch (selector) {
      case MeanSelector::kRow:
        for (unsigned j = 0; j < dim; ++j) sum += k.at(index, j);
        break;
      case MeanSelector::kColumn:
        for (unsigned i = 0; i < dim; ++i) sum += k.at(i, index);
        break;
      case MeanSelector::kAll:
        for (unsigned i = 0; i < dim; ++i)
          for (unsigned j = 0; j < dim; ++j) sum += k.at(i, j);
        break;
    }
    const Residue mean = mod_mul(make_residue(std::move(sum), p), inv_count);
    ++h.counts[bin_of(mean.value, h.bin_width, bins)];
  }
  return h;
}

PairHistogram pair_histogram(const std::vector<MatrixZp>& keys, unsigned i1,
                             unsigned j1, unsigned i2, unsigned j2, unsigned bins) {
  if (keys.empty()) throw std::invalid_argument("no keys to tally");
  PairHistogram h;
  h.bins = bins;
  h.bin_width = keys.front().modulus() / bins;
  h.range = keys.front().modulus();
  h.trials = keys.size();
  h.counts.assign(std::size_t(bins) * bins, 0);
  for (const auto& k : keys) {
    const unsigned b1 = bin_of(k.at(i1, j1), h.bin_width, bins);
    const unsigned b2 = bin_of(k.at(i2, j2), h.bin_width, bins);
    ++h.counts[std::size_t(b1) * bins + b2];
  }
  return h;
}

namespace {

double critical_value(unsigned df) {
  if (df == 9) return 27.877;    // table value, significance 0.001
  if (df == 99) return 148.230;  // table value, significance 0.001
  // Wilson-Hilferty approximation at the same significance.
  const double z = 3.090232;  // standard normal quantile for 0.999
  const double t = 2.0 / (9.0 * df);
  const double c = 1.0 - t + z * std::sqrt(t);
  return df * c * c * c;
}

ChiSquareResult chi_square(const std::vector<std::uint64_t>& counts,
                           std::uint64_t trials) {
  const std::size_t cells = counts.size();
  if (cells < 2) throw std::invalid_argument("need at least two cells");
  const double expected = static_cast<double>(trials) / cells;
  if (expected < 5.0)
    throw std::invalid_argument("undersampled: expected count below 5 per cell");
  ChiSquareResult res;
  for (std::uint64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    res.statistic += d * d / expected;
  }
  res.df = static_cast<unsigned>(cells - 1);
  res.critical = critical_value(res.df);
  res.pass = res.statistic < res.critical;
  return res;
}

}  // namespace

ChiSquareResult chi_square_uniform(const Histogram& h) {
  return chi_square(h.counts, h.trials);
}

ChiSquareResult chi_square_uniform(const PairHistogram& h) {
  return chi_square(h.counts, h.trials);
}

void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os << "bin,lo,hi,count\n";
  for (unsigned b = 0; b < h.bin_count; ++b) {
    const mpz_class lo = h.bin_width * b;
    const mpz_class hi =
        b + 1 == h.bin_count ? h.range : mpz_class(h.bin_width * (b + 1));
    os << b << ',' << lo.get_str(10) << ',' << hi.get_str(10) << ','
       << h.counts[b] << '\n';
  }
}

void write_pair_csv(std::ostream& os, const PairHistogram& h) {
  os << "bin1,bin2,count\n";
  for (unsigned a = 0; a < h.bins; ++a)
    for (unsigned b = 0; b < h.bins; ++b)
      os << a << ',' << b << ',' << h.counts[std::size_t(a) * h.bins + b] << '\n';
}

}  // namespace makekex
