#include "doctest.h"
#include "ritm/serial.hpp"

using namespace ritm;

TEST_CASE("canonical serial encoding") {
  CHECK(SerialNumber::from_u64(0).hex() == "00");
  CHECK(SerialNumber::from_u64(0x0305).hex() == "0305");
  CHECK(SerialNumber::from_u64(0xdeadbeef).hex() == "deadbeef");

  Bytes zero_led{0x00, 0x05};
  CHECK_FALSE(SerialNumber::from_bytes(zero_led).ok());
  CHECK_FALSE(SerialNumber::from_bytes({}).ok());
  Bytes too_long(21, 0x7f);
  CHECK_FALSE(SerialNumber::from_bytes(too_long).ok());
  Bytes max_len(20, 0x7f);
  CHECK(SerialNumber::from_bytes(max_len).ok());
}

TEST_CASE("ordering is lexicographic on canonical bytes") {
  auto s = [](std::initializer_list<uint8_t> b) {
    return SerialNumber::from_bytes(Bytes(b)).value();
  };
  CHECK(s({0x02}) < s({0x05}));
  CHECK(s({0x02}) < s({0x02, 0x00}));
  // Lexicographic, not numeric: 0x0105 sorts before 0x02.
  CHECK(s({0x01, 0x05}) < s({0x02}));
  CHECK(s({0x05}) == s({0x05}));
}
