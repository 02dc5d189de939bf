#include "make/netdemo.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

namespace makekex {

namespace {

constexpr std::uint32_t kMaxFrameBytes = 4u << 20;

[[noreturn]] void throw_errno(const std::string& what) {
  throw NetError(what + ": " + std::strerror(errno));
}

void write_full(int fd, const std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    const ssize_t n = ::send(fd, data, size, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("send failed");
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

void read_full(int fd, std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    const ssize_t n = ::recv(fd, data, size, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EAGAIN || errno == EWOULDBLOCK) throw NetError("receive timed out");
      throw_errno("recv failed");
    }
    if (n == 0) throw NetError("peer closed the connection");
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw NetError("bad IPv4 address: " + host);
  return addr;
}

}  // namespace

FrameSocket::FrameSocket(int fd) : fd_(fd) {
  if (fd_ < 0) throw NetError("invalid socket descriptor");
}

FrameSocket::~FrameSocket() {
  if (fd_ >= 0) ::close(fd_);
}

FrameSocket::FrameSocket(FrameSocket&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), capture_(std::move(other.capture_)) {}

FrameSocket& FrameSocket::operator=(FrameSocket&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
    capture_ = std::move(other.capture_);
  }
  return *this;
}

void FrameSocket::set_timeout(int timeout_ms) {
  timeval tv{};
  tv.tv_sec = timeout_ms / 1000;
  tv.tv_usec = (timeout_ms % 1000) * 1000;
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  ::setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

void FrameSocket::send_message(const ProtocolMessage& msg) {
  const Bytes body = encode_message(msg);
  Bytes frame;
  put_u32be(frame, static_cast<std::uint32_t>(body.size()));
  frame.insert(frame.end(), body.begin(), body.end());
  write_full(fd_, frame.data(), frame.size());
  capture_.push_back(CapturedFrame{true, body});
}

ProtocolMessage FrameSocket::recv_message() {
  std::uint8_t len_buf[4];
  read_full(fd_, len_buf, sizeof(len_buf));
  const std::uint32_t len = (std::uint32_t(len_buf[0]) << 24) |
                            (std::uint32_t(len_buf[1]) << 16) |
                            (std::uint32_t(len_buf[2]) << 8) | len_buf[3];
  if (len < 6 || len > kMaxFrameBytes) throw NetError("invalid frame length");
  Bytes body(len);
  read_full(fd_, body.data(), body.size());
  ProtocolMessage msg = decode_message(body);  // SerialError on malformed bytes
  capture_.push_back(CapturedFrame{false, std::move(body)});
  return msg;
}

FrameSocket tcp_connect(const std::string& host, std::uint16_t port, int timeout_ms) {
  const sockaddr_in addr = make_addr(host, port);
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw_errno("socket failed");
  FrameSocket sock(fd);
  sock.set_timeout(timeout_ms);
  if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0)
    throw_errno("connect failed");
  return sock;
}

namespace {

ProtocolMessage expect_type(FrameSocket& sock, MsgType want) {
  ProtocolMessage msg = sock.recv_message();
  if (msg.type != want)
    throw NetError("out-of-order message: got type " +
                   std::to_string(static_cast<int>(msg.type)) + ", expected " +
                   std::to_string(static_cast<int>(want)));
  return msg;
}

Digest256 parse_confirm(const ProtocolMessage& msg) {
  if (msg.payload.size() != 32) throw NetError("confirmation payload must be 32 bytes");
  Digest256 d{};
  std::memcpy(d.data(), msg.payload.data(), d.size());
  return d;
}

SessionResult finish(SessionResult res, FrameSocket& sock, const SharedKey& key,
                     const Digest256& theirs) {
  res.completed = true;
  res.key_digest = key.derived;
  if (theirs == key.derived) {
    res.agreed = true;
  } else {
    res.error = "key confirmation mismatch";
  }
  res.frames = sock.take_capture();
  return res;
}

}  // namespace

SessionResult serve_once(const std::string& host, std::uint16_t port,
                         const PublicParams& params, Rng& rng,
                         const std::function<void(std::uint16_t)>& on_listening,
                         int timeout_ms) {
  SessionResult res;
  int listen_fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd < 0) throw_errno("socket failed");
  try {
    const int one = 1;
    ::setsockopt(listen_fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr = make_addr(host, port);
    if (::bind(listen_fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0)
      throw_errno("bind failed");
    socklen_t addr_len = sizeof(addr);
    if (::getsockname(listen_fd, reinterpret_cast<sockaddr*>(&addr), &addr_len) != 0)
      throw_errno("getsockname failed");
    res.port = ntohs(addr.sin_port);
    if (::listen(listen_fd, 1) != 0) throw_errno("listen failed");
    if (on_listening) on_listening(res.port);

    timeval tv{};
    tv.tv_sec = timeout_ms / 1000;
    tv.tv_usec = (timeout_ms % 1000) * 1000;
    ::setsockopt(listen_fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
    const int conn_fd = ::accept(listen_fd, nullptr, nullptr);
    if (conn_fd < 0) {
      if (errno == EAGAIN || errno == EWOULDBLOCK) throw NetError("accept timed out");
      throw_errno("accept failed");
    }
    ::close(listen_fd);
    listen_fd = -1;

    FrameSocket sock(conn_fd);
    sock.set_timeout(timeout_ms);
    try {
      sock.send_message(ProtocolMessage{MsgType::kParamsOffer,
                                        serialize_params(params)});
      const ProtocolMessage token_msg = expect_type(sock, MsgType::kToken);
      const MatrixZp peer_token = parse_token_payload(token_msg.payload, params);

      const ExchangeState state =
          initiate(params, gen_private_exponent(params.prime, rng),
                   /*validate=*/false);
      sock.send_message(ProtocolMessage{MsgType::kToken, token_payload(state.token)});

      const Digest256 theirs = parse_confirm(expect_type(sock, MsgType::kKeyConfirm));
      const SharedKey key = finalize(state, peer_token);
      sock.send_message(ProtocolMessage{
          MsgType::kKeyConfirm, Bytes(key.derived.begin(), key.derived.end())});
      return finish(std::move(res), sock, key, theirs);
    } catch (const std::exception& e) {
      res.error = e.what();
      res.frames = sock.take_capture();
      return res;
    }
  } catch (const std::exception& e) {
    if (listen_fd >= 0) ::close(listen_fd);
    if (res.error.empty()) res.error = e.what();
    return res;
  }
}

SessionResult connect_once(const std::string& host, std::uint16_t port, Rng& rng,
                           int timeout_ms) {
  SessionResult res;
  try {
    FrameSocket sock = tcp_connect(host, port, timeout_ms);
    try {
      const ProtocolMessage offer = expect_type(sock, MsgType::kParamsOffer);
      const PublicParams params = parse_params(offer.payload);
      const auto violations = validate_params(params);
      if (!violations.empty())
        throw NetError("offered parameters rejected: " + violations.front());

      const ExchangeState state =
          initiate(params, gen_private_exponent(params.prime, rng),
                   /*validate=*/false);
      sock.send_message(ProtocolMessage{MsgType::kToken, token_payload(state.token)});

      const ProtocolMessage token_msg = expect_type(sock, MsgType::kToken);
      const MatrixZp peer_token = parse_token_payload(token_msg.payload, params);

      const SharedKey key = finalize(state, peer_token);
      sock.send_message(ProtocolMessage{
          MsgType::kKeyConfirm, Bytes(key.derived.begin(), key.derived.end())});
      const Digest256 theirs = parse_confirm(expect_type(sock, MsgType::kKeyConfirm));
      return finish(std::move(res), sock, key, theirs);
    } catch (const std::exception& e) {
      res.error = e.what();
      res.frames = sock.take_capture();
      return res;
    }
  } catch (const std::exception& e) {
    if (res.error.empty()) res.error = e.what();
    return res;
  }
}

}  // namespace makekex
