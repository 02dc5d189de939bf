#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "make/protocol.hpp"

namespace makekex {

// Transport failure or protocol violation on the demo connection.
class NetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CapturedFrame {
  bool outbound = false;
  Bytes message;  // encoded message, without the length prefix
};

// Length-framed message stream over a connected TCP socket: each frame is
// a u32be byte count followed by an encoded ProtocolMessage.  Owns the
// descriptor; records every frame that crosses it.
class FrameSocket {
 public:
  explicit FrameSocket(int fd);
  ~FrameSocket();
  FrameSocket(FrameSocket&& other) noexcept;
  FrameSocket& operator=(FrameSocket&& other) noexcept;
  FrameSocket(const FrameSocket&) = delete;
  FrameSocket& operator=(const FrameSocket&) = delete;

  void set_timeout(int timeout_ms);
  void send_message(const ProtocolMessage& msg);
  ProtocolMessage recv_message();

  std::vector<CapturedFrame> take_capture() { return std::move(capture_); }

 private:
  int fd_ = -1;
  std::vector<CapturedFrame> capture_;
};

// Connect to host:port; throws NetError on failure.
FrameSocket tcp_connect(const std::string& host, std::uint16_t port,
                        int timeout_ms = 10000);

struct SessionResult {
  bool completed = false;  // ran to the end without transport/protocol errors
  bool agreed = false;     // confirmation digests matched
  std::string error;       // empty on agreement
  Digest256 key_digest{};  // this side's derived key bytes
  std::vector<CapturedFrame> frames;
  std::uint16_t port = 0;  // server: port actually bound
};

// One server session: bind host:port (port 0 picks an ephemeral one,
// reported through on_listening before blocking in accept), serve a
// single peer, and report how the handshake ended.  Message order is
// enforced: offer, peer token, own token, peer confirm, own confirm.
SessionResult serve_once(const std::string& host, std::uint16_t port,
                         const PublicParams& params, Rng& rng,
                         const std::function<void(std::uint16_t)>& on_listening = {},
                         int timeout_ms = 10000);

// One client session against serve_once: receive and validate the offer,
// exchange tokens, exchange confirmations.
SessionResult connect_once(const std::string& host, std::uint16_t port, Rng& rng,
                           int timeout_ms = 10000);

}  // namespace makekex
