#include "ritm/serial.hpp"

namespace ritm {

Expected<SerialNumber, SerialError> SerialNumber::from_bytes(ByteSpan raw) {
  if (raw.empty()) return SerialError::Empty;
  if (raw.size() > kMaxSerialSize) return SerialError::TooLong;
  if (raw.size() > 1 && raw[0] == 0) return SerialError::LeadingZero;
  return SerialNumber(Bytes(raw.begin(), raw.end()));
}

SerialNumber SerialNumber::from_u64(uint64_t value) {
  Bytes b;
  for (int i = 7; i >= 0; --i) {
    uint8_t byte = uint8_t(value >> (8 * i));
    if (!b.empty() || byte != 0) b.push_back(byte);
  }
  if (b.empty()) b.push_back(0);
  return SerialNumber(std::move(b));
}

}  // namespace ritm
