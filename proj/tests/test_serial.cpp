#include <doctest.h>

#include "make/serial.hpp"

using namespace makekex;

TEST_CASE("u32 big-endian round trip and byte order") {
  Bytes buf;
  put_u32be(buf, 0x01020304u);
  CHECK(buf == Bytes{0x01, 0x02, 0x03, 0x04});
  ByteReader in(buf);
  CHECK(in.get_u32be() == 0x01020304u);
  CHECK(in.done());
}

TEST_CASE("big integer encoding is length-prefixed, minimal, big-endian") {
  Bytes buf;
  put_mpz(buf, mpz_class(0));
  // Zero: length 0, no payload.
  CHECK(buf == Bytes{0, 0, 0, 0});

  buf.clear();
  put_mpz(buf, mpz_class(0x1234));
  CHECK(buf == Bytes{0, 0, 0, 2, 0x12, 0x34});

  buf.clear();
  const mpz_class big("123456789012345678901234567890");
  put_mpz(buf, big);
  ByteReader in(buf);
  CHECK(in.get_mpz() == big);
  CHECK(in.done());
}

TEST_CASE("negative integers are rejected") {
  Bytes buf;
  CHECK_THROWS_AS(put_mpz(buf, mpz_class(-1)), SerialError);
}

TEST_CASE("reader rejects truncation, leading zeros and trailing bytes") {
  Bytes buf;
  put_mpz(buf, mpz_class(300));
  ByteReader short_in(buf.data(), buf.size() - 1);
  CHECK_THROWS_AS(short_in.get_mpz(), SerialError);

  // A leading zero byte breaks canonical form.
  Bytes padded{0, 0, 0, 2, 0x00, 0x05};
  ByteReader padded_in(padded);
  CHECK_THROWS_AS(padded_in.get_mpz(), SerialError);

  Bytes trailing{0x00};
  ByteReader trailing_in(trailing);
  CHECK_THROWS_AS(trailing_in.expect_end(), SerialError);
}

TEST_CASE("hex rendering") {
  const Bytes buf{0x00, 0xab, 0x10};
  CHECK(to_hex(buf) == "00ab10");
}
