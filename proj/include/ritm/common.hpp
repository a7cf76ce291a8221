#ifndef RITM_COMMON_HPP
#define RITM_COMMON_HPP

#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ritm {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;

// Minimal expected-type until std::expected (C++23) is available.
template <typename T, typename E>
class Expected {
 public:
  Expected(T value) : v_(std::move(value)) {}
  Expected(E error) : v_(std::move(error)) {}
  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }
  const T& value() const { return std::get<T>(v_); }
  T& value() { return std::get<T>(v_); }
  const E& error() const { return std::get<E>(v_); }

 private:
  std::variant<T, E> v_;
};

struct Unit {};

inline void put_u16(Bytes& out, uint16_t v) {
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v));
}

inline void put_u32(Bytes& out, uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}

inline void put_u64(Bytes& out, uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(uint8_t(v >> (8 * i)));
}

inline void put_u24(Bytes& out, uint32_t v) {
  out.push_back(uint8_t(v >> 16));
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v));
}

// Strict big-endian reader; every take checks bounds and latches failure.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  bool ok() const { return ok_; }
  size_t remaining() const { return data_.size() - pos_; }
  bool at_end() const { return pos_ == data_.size(); }

  uint8_t u8() { return take(1) ? data_[pos_ - 1] : 0; }

  uint16_t u16() {
    if (!take(2)) return 0;
    return uint16_t(data_[pos_ - 2]) << 8 | data_[pos_ - 1];
  }

  uint32_t u24() {
    if (!take(3)) return 0;
    return uint32_t(data_[pos_ - 3]) << 16 | uint32_t(data_[pos_ - 2]) << 8 |
           data_[pos_ - 1];
  }

  uint32_t u32() {
    uint32_t v = 0;
    if (!take(4)) return 0;
    for (size_t i = pos_ - 4; i < pos_; ++i) v = v << 8 | data_[i];
    return v;
  }

  uint64_t u64() {
    uint64_t v = 0;
    if (!take(8)) return 0;
    for (size_t i = pos_ - 8; i < pos_; ++i) v = v << 8 | data_[i];
    return v;
  }

  ByteSpan bytes(size_t n) {
    if (!take(n)) return {};
    return data_.subspan(pos_ - n, n);
  }

  template <size_t N>
  bool fill(std::array<uint8_t, N>& out) {
    if (!take(N)) return false;
    std::memcpy(out.data(), data_.data() + pos_ - N, N);
    return true;
  }

 private:
  bool take(size_t n) {
    if (!ok_ || data_.size() - pos_ < n) {
      ok_ = false;
      return false;
    }
    pos_ += n;
    return true;
  }

  ByteSpan data_;
  size_t pos_ = 0;
  bool ok_ = true;
};

std::string to_hex(ByteSpan data);
std::optional<Bytes> from_hex(const std::string& hex);

// Floor division for possibly-negative numerators (periods before t0).
inline int64_t floor_div(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace ritm

#endif
