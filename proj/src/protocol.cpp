#include "make/protocol.hpp"

#include <stdexcept>
#include <utility>

namespace makekex {

Digest256 derive_key_bytes(const mpz_class& p, const MatrixZp& k) {
  Bytes material;
  put_mpz(material, p);
  put_matrix(material, k);
  return sha256(material);
}

ExchangeState initiate(const PublicParams& params, PrivateExponent secret,
                       bool validate) {
  if (validate) {
    const auto violations = validate_params(params);
    if (!violations.empty()) {
      std::string what = "invalid parameters:";
      for (const auto& v : violations) what += " [" + v + "]";
      throw std::invalid_argument(what);
    }
  }
  if (secret.value < 1) throw std::invalid_argument("private exponent must be >= 1");

  SemidirectElement base = sd_make(params.m_mat, params.h1, params.h2);
  SemidirectElement power = sd_pow(base, secret.value);
  MatrixZp token = power.additive;
  return ExchangeState{params, std::move(secret), std::move(power), std::move(token)};
}

SharedKey finalize(const ExchangeState& state, const MatrixZp& received_token) {
  if (received_token.dim() != state.params.dim ||
      received_token.modulus() != state.params.prime.p)
    throw std::invalid_argument("received token has the wrong shape or modulus");
  MatrixZp k = mat_add(
      mat_mul(mat_mul(state.power.pair_left, received_token), state.power.pair_right),
      state.power.additive);
  Digest256 derived = derive_key_bytes(state.params.prime.p, k);
  return SharedKey{std::move(k), derived};
}

ExchangeResult run_exchange(const PublicParams& params, Rng& rng) {
  const auto violations = validate_params(params);
  if (!violations.empty())
    throw std::invalid_argument("invalid parameters: " + violations.front());
  const PrivateExponent m = gen_private_exponent(params.prime, rng);
  const PrivateExponent n = gen_private_exponent(params.prime, rng);
  ExchangeState alice = initiate(params, m, /*validate=*/false);
  ExchangeState bob = initiate(params, n, /*validate=*/false);
  SharedKey key_a = finalize(alice, bob.token);
  SharedKey key_b = finalize(bob, alice.token);
  const bool agreed = key_a == key_b;
  return ExchangeResult{std::move(key_a), std::move(key_b), std::move(alice.token),
                        std::move(bob.token), agreed};
}

Residue dh_token(const Residue& g, const mpz_class& exponent) {
  return mod_pow(g, exponent);
}

DhResult classic_dh_exchange(const SafePrime& prime, Rng& rng) {
  // Random base away from {0, 1, p-1}; exponents drawn exactly like the
  // matrix protocol's so the benchmark compares like with like.
  const Residue g = make_residue(2 + rng.below(prime.p - 3), prime.p);
  const mpz_class a = gen_private_exponent(prime, rng).value;
  const mpz_class b = gen_private_exponent(prime, rng).value;
  const Residue token_a = dh_token(g, a);
  const Residue token_b = dh_token(g, b);
  const Residue shared_a = mod_pow(token_b, a);
  const Residue shared_b = mod_pow(token_a, b);
  const bool agreed = shared_a == shared_b;
  return DhResult{g, a, b, shared_a, shared_b, agreed};
}

namespace {

constexpr std::uint8_t kWireMagic[4] = {'M', 'A', 'K', 'E'};
constexpr std::uint8_t kWireVersion = 0x01;

}  // namespace

Bytes encode_message(const ProtocolMessage& msg) {
  Bytes out;
  out.insert(out.end(), kWireMagic, kWireMagic + 4);
  put_u8(out, kWireVersion);
  put_u8(out, static_cast<std::uint8_t>(msg.type));
  out.insert(out.end(), msg.payload.begin(), msg.payload.end());
  return out;
}

ProtocolMessage decode_message(const Bytes& buf) {
  ByteReader in(buf);
  for (std::uint8_t expected : kWireMagic)
    if (in.get_u8() != expected) throw SerialError("bad message magic");
  if (in.get_u8() != kWireVersion) throw SerialError("unsupported message version");
  const std::uint8_t type = in.get_u8();
  if (type > static_cast<std::uint8_t>(MsgType::kKeyConfirm))
    throw SerialError("unknown message type");
  return ProtocolMessage{static_cast<MsgType>(type), in.get_bytes(in.remaining())};
}

Bytes token_payload(const MatrixZp& token) {
  Bytes out;
  put_matrix(out, token);
  return out;
}

MatrixZp parse_token_payload(const Bytes& payload, const PublicParams& params) {
  ByteReader in(payload);
  MatrixZp m = get_matrix(in, params.prime.p, params.dim);
  in.expect_end();
  return m;
}

}  // namespace makekex
