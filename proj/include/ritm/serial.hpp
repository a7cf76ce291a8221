#ifndef RITM_SERIAL_HPP
#define RITM_SERIAL_HPP

#include <compare>

#include "ritm/common.hpp"

namespace ritm {

inline constexpr size_t kMaxSerialSize = 20;

enum class SerialError { Empty, TooLong, LeadingZero };

// Certificate serial number in canonical big-endian form: 1..20 bytes,
// no leading zero byte except the value zero itself ("00").
// Ordering is lexicographic on the canonical bytes, matching the
// dictionary's leaf sort order.
class SerialNumber {
 public:
  SerialNumber() : bytes_(1, 0) {}

  static Expected<SerialNumber, SerialError> from_bytes(ByteSpan raw);
  static SerialNumber from_u64(uint64_t value);

  const Bytes& bytes() const { return bytes_; }
  std::string hex() const { return to_hex(bytes_); }

  friend std::strong_ordering operator<=>(const SerialNumber& a, const SerialNumber& b) {
    int c = std::memcmp(a.bytes_.data(), b.bytes_.data(),
                        std::min(a.bytes_.size(), b.bytes_.size()));
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return a.bytes_.size() <=> b.bytes_.size();
  }
  friend bool operator==(const SerialNumber& a, const SerialNumber& b) {
    return a.bytes_ == b.bytes_;
  }

 private:
  explicit SerialNumber(Bytes b) : bytes_(std::move(b)) {}
  Bytes bytes_;
};

}  // namespace ritm

#endif
