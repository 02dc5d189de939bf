// make-kex: command-line front end for the matrix-action key exchange.
//
// Subcommands: gen, exchange, attack, stats, bench, serve, connect.
// Results are printed as key=value lines; everything that consumes
// randomness takes --seed and reproduces its output bit for bit.
//
// Exit codes: 0 success/agreement (also "attack inapplicable"),
//             1 protocol failure or key mismatch,
//             2 usage error,
//             3 attack did not find the exponent.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "make/attacks.hpp"
#include "make/netdemo.hpp"
#include "make/paramgen.hpp"
#include "make/protocol.hpp"
#include "make/stats.hpp"

namespace {

using namespace makekex;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void report(const std::string& key, const std::string& value) {
  std::cout << key << '=' << value << '\n';
}

void report_u64(const std::string& key, std::uint64_t value) {
  report(key, std::to_string(value));
}

void report_num(const std::string& key, double value) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << value;
  report(key, os.str());
}

struct ParamSource {
  std::string file;
  unsigned bits = 0;
  unsigned dim = 3;
  bool builtin = false;
  bool adversarial = false;
};

void add_param_source(CLI::App* cmd, ParamSource& src, unsigned default_bits) {
  src.bits = default_bits;
  cmd->add_option("--params", src.file, "parameter file (binary or text)");
  cmd->add_option("--bits", src.bits, "prime size for generated parameters");
  cmd->add_option("--dim", src.dim, "matrix dimension")->check(CLI::Range(2, 16));
  cmd->add_flag("--builtin-prime", src.builtin, "use the built-in 2000-bit prime");
  cmd->add_flag("--adversarial", src.adversarial,
                "generate invertible (non-compliant) acting matrices");
}

PublicParams load_params_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();
  if (data.rfind("MAKE", 0) == 0)
    return parse_params(Bytes(data.begin(), data.end()));
  return params_from_text(data);
}

PublicParams resolve_params(const ParamSource& src, Rng& rng) {
  if (!src.file.empty()) return load_params_file(src.file);
  if (src.builtin) {
    return src.adversarial ? gen_adversarial_params(builtin_safe_prime(), src.dim, rng)
                           : gen_public_params(builtin_safe_prime(), src.dim, rng);
  }
  return src.adversarial ? gen_adversarial_params(src.bits, src.dim, rng)
                         : gen_public_params(src.bits, src.dim, rng);
}

std::pair<std::string, std::uint16_t> split_host_port(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("address", "expected host:port, got " + addr);
  const std::string host = addr.substr(0, colon);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(addr.substr(colon + 1), &used);
    if (used != addr.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw CLI::ValidationError("address", "bad port in " + addr);
  }
  if (port < 0 || port > 65535)
    throw CLI::ValidationError("address", "port out of range");
  return {host.empty() ? "127.0.0.1" : host, static_cast<std::uint16_t>(port)};
}

int report_session(const SessionResult& res) {
  report("completed", res.completed ? "true" : "false");
  report("agreed", res.agreed ? "true" : "false");
  if (res.completed) report("key_digest", digest_hex(res.key_digest));
  std::uint64_t token_frames = 0;
  for (const auto& f : res.frames)
    if (decode_message(f.message).type == MsgType::kToken) ++token_frames;
  report_u64("frames", res.frames.size());
  report_u64("token_frames", token_frames);
  if (!res.error.empty()) report("error", res.error);
  return res.agreed ? 0 : 1;
}

// ---- gen ------------------------------------------------------------

int cmd_gen(const ParamSource& src, std::uint64_t seed, const std::string& out_path,
            bool text) {
  Rng rng = derive_rng(seed, 0);
  const auto start = Clock::now();
  const PublicParams params = resolve_params(src, rng);
  if (out_path.empty()) {
    // Bare text on stdout, pipeable straight into a fixture file.
    std::cout << params_to_text(params);
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  if (text) {
    out << params_to_text(params);
  } else {
    const Bytes buf = serialize_params(params);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  }
  report("p_bits", std::to_string(params.prime.bit_length));
  report("dim", std::to_string(params.dim));
  report("compliant", validate_params(params).empty() ? "true" : "false");
  report("out", out_path);
  report("format", text ? "text" : "binary");
  report_num("elapsed_ms", ms_since(start));
  return 0;
}

// ---- exchange -------------------------------------------------------

int cmd_exchange(const ParamSource& src, std::uint64_t seed) {
  Rng rng = derive_rng(seed, 0);
  const PublicParams params = resolve_params(src, rng);
  const auto start = Clock::now();
  const ExchangeResult res = run_exchange(params, rng);
  report("p_bits", std::to_string(params.prime.bit_length));
  report("dim", std::to_string(params.dim));
  report("agreed", res.agreed ? "true" : "false");
  report("key_digest", digest_hex(res.alice.derived));
  report_num("elapsed_ms", ms_since(start));
  return res.agreed ? 0 : 1;
}

// ---- attack ---------------------------------------------------------

int cmd_attack(const ParamSource& src, std::uint64_t seed, const std::string& method,
               std::uint64_t bound, std::uint64_t pinned_exponent,
               const std::string& oracle_kind) {
  Rng rng = derive_rng(seed, 0);

  if (method == "dlreduce") {
    // Build a discrete-log instance and try to solve it through the
    // matrix-instance embedding.
    const SafePrime prime =
        src.builtin ? builtin_safe_prime() : gen_safe_prime(src.bits, rng);
    const Residue g = make_residue(2 + rng.below(prime.p - 3), prime.p);
    const mpz_class k = 1 + rng.below(prime.p - 2);
    const Residue y = mod_pow(g, k);
    const std::uint64_t cap =
        prime.p.fits_ulong_p() ? mpz_get_ui(prime.p.get_mpz_t()) : bound;
    const ExponentOracle oracle =
        oracle_kind == "corner" ? make_corner_oracle(cap) : make_transcript_oracle(cap);
    const AttackOutcome out = reduce_dlog_to_make(prime, g, y, oracle, rng);
    report("method", method);
    report("oracle", oracle_kind);
    report("p", prime.p.get_str(10));
    report("k_actual", k.get_str(10));
    report("outcome", attack_status_name(out.status));
    if (out.exponent) {
      report("k_recovered", out.exponent->get_str(10));
      report("k_match", mod_pow(g, *out.exponent).value == y.value ? "true" : "false");
    }
    report_u64("work", out.work);
    report("detail", out.detail);
    return out.status == AttackStatus::kRecovered ? 0 : 3;
  }

  const PublicParams params = resolve_params(src, rng);

  // Victim instance: private exponent either pinned or random below p-1.
  mpz_class m;
  if (pinned_exponent > 0) {
    m = pinned_exponent;
  } else if (method == "brute") {
    m = 1 + rng.below(std::min(mpz_class(bound), mpz_class(params.prime.p - 2)));
  } else {
    m = 1 + rng.below(params.prime.p - 2);
  }
  const ExchangeState victim = initiate(params, PrivateExponent{m}, false);
  const ExchangeState peer =
      initiate(params, PrivateExponent{1 + rng.below(params.prime.p - 2)}, false);
  const SharedKey honest = finalize(victim, peer.token);

  const auto start = Clock::now();
  AttackOutcome out;
  if (method == "brute") {
    out = brute_force_exponent(params, victim.token, bound, peer.token);
  } else if (method == "det") {
    out = determinant_attack(params, victim.token, peer.token);
  } else {
    throw CLI::ValidationError("--method", "unknown method " + method);
  }

  report("method", method);
  report("p_bits", std::to_string(params.prime.bit_length));
  report("outcome", attack_status_name(out.status));
  report("m_actual", m.get_str(10));
  if (out.exponent) {
    report("m_recovered", out.exponent->get_str(10));
    report("m_match", *out.exponent == m ? "true" : "false");
  }
  if (out.key) report("key_match", *out.key == honest.k ? "true" : "false");
  report_u64("work", out.work);
  report("detail", out.detail);
  report_num("elapsed_ms", ms_since(start));
  if (out.status == AttackStatus::kNotFound) return 3;
  return 0;
}

// ---- stats ----------------------------------------------------------

int cmd_stats(const ParamSource& src, std::uint64_t seed, std::uint64_t trials,
              const std::string& csv_dir, unsigned threads) {
  Rng rng = derive_rng(seed, 0);
  const PublicParams params = resolve_params(src, rng);
  const auto start = Clock::now();
  const std::vector<MatrixZp> keys = sample_keys(params, trials, seed, 16, threads);
  report("p_bits", std::to_string(params.prime.bit_length));
  report_u64("trials", trials);

  const Histogram entry = entry_histogram(keys, 0, 0);
  const auto entry_chi = chi_square_uniform(entry);
  report_num("entry_0_0_chi2", entry_chi.statistic);
  report_num("entry_0_0_critical", entry_chi.critical);
  report("entry_0_0_pass", entry_chi.pass ? "true" : "false");

  const PairHistogram pair = pair_histogram(keys, 0, 0, 1, 1);
  const auto pair_chi = chi_square_uniform(pair);
  report_num("pair_chi2", pair_chi.statistic);
  report_num("pair_critical", pair_chi.critical);
  report("pair_pass", pair_chi.pass ? "true" : "false");

  const Histogram mean_col = mean_histogram(keys, MeanSelector::kColumn, 0);
  const auto mean_col_chi = chi_square_uniform(mean_col);
  report_num("mean_col0_chi2", mean_col_chi.statistic);
  report("mean_col0_uniform", mean_col_chi.pass ? "true" : "false");

  const Histogram mean_all = mean_histogram(keys, MeanSelector::kAll);
  const auto mean_all_chi = chi_square_uniform(mean_all);
  report_num("mean_all_chi2", mean_all_chi.statistic);
  report("mean_all_uniform", mean_all_chi.pass ? "true" : "false");

  if (!csv_dir.empty()) {
    std::filesystem::create_directories(csv_dir);
    const auto open_csv = [&](const std::string& name) {
      std::ofstream os(csv_dir + "/" + name);
      if (!os) throw std::runtime_error("cannot write " + csv_dir + "/" + name);
      return os;
    };
    auto os = open_csv("entry_0_0.csv");
    write_histogram_csv(os, entry);
    os = open_csv("pair_0_0_1_1.csv");
    write_pair_csv(os, pair);
    os = open_csv("mean_col0.csv");
    write_histogram_csv(os, mean_col);
    os = open_csv("mean_all.csv");
    write_histogram_csv(os, mean_all);
    report("csv_dir", csv_dir);
  }
  report_num("elapsed_ms", ms_since(start));
  return entry_chi.pass && pair_chi.pass ? 0 : 1;
}

// ---- bench ----------------------------------------------------------

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

int cmd_bench(const ParamSource& src, std::uint64_t seed, unsigned reps,
              unsigned dh_reps) {
  Rng rng = derive_rng(seed, 0);
  ParamSource effective = src;
  if (effective.bits == 0) effective.builtin = true;  // default: 2000-bit prime
  const PublicParams params = resolve_params(effective, rng);
  report("p_bits", std::to_string(params.prime.bit_length));
  report("dim", std::to_string(params.dim));

  // Cost of one squaring in the semidirect structure, in scalar
  // multiplications, measured rather than assumed.
  const SemidirectElement base = sd_make(params.m_mat, params.h1, params.h2);
  reset_field_mul_count();
  const SemidirectElement squared = sd_mul(base, base);
  (void)squared;
  const std::uint64_t muls_per_squaring = field_mul_count();
  reset_field_mul_count();
  report_u64("mul_per_semidirect_squaring", muls_per_squaring);
  report_u64("reference_min_slowdown", 24);

  std::vector<double> make_ms;
  for (unsigned i = 0; i < reps; ++i) {
    const auto start = Clock::now();
    const ExchangeResult res = run_exchange(params, rng);
    make_ms.push_back(ms_since(start));
    if (!res.agreed) throw std::runtime_error("benchmark exchange disagreed");
  }
  std::vector<double> dh_ms;
  for (unsigned i = 0; i < dh_reps; ++i) {
    const auto start = Clock::now();
    const DhResult res = classic_dh_exchange(params.prime, rng);
    dh_ms.push_back(ms_since(start));
    if (!res.agreed) throw std::runtime_error("baseline exchange disagreed");
  }
  const double make_med = median(make_ms);
  const double dh_med = median(dh_ms);
  report_num("make_exchange_ms", make_med);
  report_num("dh_exchange_ms", dh_med);
  report_num("slowdown_ratio", dh_med > 0 ? make_med / dh_med : 0.0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix-action key exchange toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // let subcommands accept the global --seed

  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "deterministic seed")->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "generate a parameter set");
  ParamSource gen_src;
  add_param_source(gen, gen_src, 256);
  std::string gen_out;
  bool gen_text = false;
  gen->add_option("--out", gen_out, "output file (stdout text if omitted)");
  gen->add_flag("--text", gen_text, "write the text fixture format");

  // exchange
  auto* exchange = app.add_subcommand("exchange", "run a local two-party exchange");
  ParamSource ex_src;
  add_param_source(exchange, ex_src, 256);

  // attack
  auto* attack = app.add_subcommand("attack", "run an attack demonstration");
  ParamSource at_src;
  add_param_source(attack, at_src, 18);
  std::string method;
  attack->add_option("--method", method, "brute | det | dlreduce")->required();
  std::uint64_t bound = 1u << 16;
  attack->add_option("--bound", bound, "search bound for brute force");
  std::uint64_t pinned_exponent = 0;
  attack->add_option("--exponent", pinned_exponent, "pin the victim exponent");
  std::string oracle_kind = "token";
  attack->add_option("--oracle", oracle_kind, "dlreduce oracle: token | corner");

  // stats
  auto* stats = app.add_subcommand("stats", "key-distribution statistics");
  ParamSource st_src;
  add_param_source(stats, st_src, 200);
  std::uint64_t trials = 10000;
  stats->add_option("--trials", trials, "number of exchanges to sample");
  std::string csv_dir;
  stats->add_option("--csv-dir", csv_dir, "directory for histogram CSV files");
  unsigned threads = 0;
  stats->add_option("--threads", threads, "worker threads (0 = auto)");

  // bench
  auto* bench = app.add_subcommand("bench", "compare against plain modular DH");
  ParamSource be_src;
  add_param_source(bench, be_src, 0);
  unsigned reps = 3;
  bench->add_option("--reps", reps, "matrix exchange repetitions");
  unsigned dh_reps = 5;
  bench->add_option("--dh-reps", dh_reps, "baseline repetitions");

  // serve / connect
  auto* serve = app.add_subcommand("serve", "serve one exchange over TCP");
  ParamSource sv_src;
  add_param_source(serve, sv_src, 64);
  std::string listen_addr = "127.0.0.1:0";
  serve->add_option("--listen", listen_addr, "host:port (port 0 = ephemeral)");
  int timeout_ms = 10000;
  serve->add_option("--timeout-ms", timeout_ms, "socket timeout");

  auto* connect = app.add_subcommand("connect", "connect to a serving peer");
  std::string remote_addr;
  connect->add_option("--remote", remote_addr, "host:port of the server")->required();
  connect->add_option("--timeout-ms", timeout_ms, "socket timeout");

  try {
    app.parse(argc, argv);

    if (gen->parsed()) return cmd_gen(gen_src, seed, gen_out, gen_text);
    if (exchange->parsed()) return cmd_exchange(ex_src, seed);
    if (attack->parsed())
      return cmd_attack(at_src, seed, method, bound, pinned_exponent, oracle_kind);
    if (stats->parsed()) return cmd_stats(st_src, seed, trials, csv_dir, threads);
    if (bench->parsed()) return cmd_bench(be_src, seed, reps, dh_reps);
    if (serve->parsed()) {
      const auto [host, port] = split_host_port(listen_addr);
      Rng rng = derive_rng(seed, 0);
      const PublicParams params = resolve_params(sv_src, rng);
      const SessionResult res = serve_once(
          host, port, params, rng,
          [](std::uint16_t bound_port) {
            std::cout << "listening=" << bound_port << std::endl;  // flush: peers wait
          },
          timeout_ms);
      return report_session(res);
    }
    if (connect->parsed()) {
      const auto [host, port] = split_host_port(remote_addr);
      Rng rng = derive_rng(seed, 0);
      const SessionResult res = connect_once(host, port, rng, timeout_ms);
      return report_session(res);
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version are success; bad usage is 2
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
