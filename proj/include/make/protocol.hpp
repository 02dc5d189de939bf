#pragma once

#include <cstdint>

#include <gmpxx.h>

#include "make/digest.hpp"
#include "make/paramgen.hpp"
#include "make/semidirect.hpp"

namespace makekex {

// Shared secret: the raw matrix K plus a fixed-width byte form
// SHA-256(p || K) used for confirmation and as key material.
struct SharedKey {
  MatrixZp k;
  Digest256 derived;

  bool operator==(const SharedKey& other) const {
    return k == other.k && derived == other.derived;
  }
};

// One party's view after computing its own power of the platform element.
// power.pair_left and power.pair_right are the acting pair raised to the
// private exponent; token is what goes on the wire.
struct ExchangeState {
  PublicParams params;
  PrivateExponent secret;
  SemidirectElement power;
  MatrixZp token;
};

// SHA-256 over the serialized modulus and key matrix; what both sides
// compare during confirmation.
Digest256 derive_key_bytes(const mpz_class& p, const MatrixZp& k);

// Compute (M, (H1, H2))^secret.  With validate set, parameter violations
// raise std::invalid_argument before any secret-dependent work.
ExchangeState initiate(const PublicParams& params, PrivateExponent secret,
                       bool validate = true);

// Key derivation from the peer's token B:
//   K = pair_left * B * pair_right + own token.
// Both parties arrive at the additive part of the (m+n)-th power.
SharedKey finalize(const ExchangeState& state, const MatrixZp& received_token);

struct ExchangeResult {
  SharedKey alice;
  SharedKey bob;
  MatrixZp token_alice;
  MatrixZp token_bob;
  bool agreed = false;
};

// Full two-party exchange with exponents drawn from rng (initiator first).
ExchangeResult run_exchange(const PublicParams& params, Rng& rng);

// ---- Plain discrete-log baseline over the same prime ----------------

Residue dh_token(const Residue& g, const mpz_class& exponent);

struct DhResult {
  Residue generator;
  mpz_class exp_a;
  mpz_class exp_b;
  Residue shared_a;
  Residue shared_b;
  bool agreed = false;
};

DhResult classic_dh_exchange(const SafePrime& prime, Rng& rng);

// ---- Wire message container ----------------------------------------
// "MAKE" | version 0x01 | type | payload.  Length framing is the
// transport's concern (see netdemo).

enum class MsgType : std::uint8_t {
  kParamsOffer = 0x00,  // payload: serialized PublicParams
  kToken = 0x01,        // payload: one matrix
  kKeyConfirm = 0x02,   // payload: 32-byte key digest
};

struct ProtocolMessage {
  MsgType type;
  Bytes payload;
};

Bytes encode_message(const ProtocolMessage& msg);
ProtocolMessage decode_message(const Bytes& buf);

Bytes token_payload(const MatrixZp& token);
MatrixZp parse_token_payload(const Bytes& payload, const PublicParams& params);

}  // namespace makekex
