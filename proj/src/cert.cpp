#include "ritm/cert.hpp"

namespace ritm {

Bytes Certificate::signing_input() const {
  Bytes out;
  out.push_back(uint8_t(serial.bytes().size()));
  out.insert(out.end(), serial.bytes().begin(), serial.bytes().end());
  out.insert(out.end(), issuer.begin(), issuer.end());
  put_u16(out, uint16_t(subject.size()));
  out.insert(out.end(), subject.begin(), subject.end());
  put_u64(out, uint64_t(not_after));
  return out;
}

Bytes Certificate::to_bytes() const {
  Bytes out = signing_input();
  out.insert(out.end(), signature.begin(), signature.end());
  return out;
}

Expected<Certificate, ParseError> Certificate::from_bytes(ByteSpan raw) {
  ByteReader rd(raw);
  Certificate cert;
  uint8_t serial_len = rd.u8();
  if (!rd.ok() || serial_len == 0 || serial_len > kMaxSerialSize)
    return ParseError::Malformed;
  auto serial = SerialNumber::from_bytes(rd.bytes(serial_len));
  if (!rd.ok() || !serial.ok()) return ParseError::Malformed;
  cert.serial = serial.value();
  rd.fill(cert.issuer);
  uint16_t subject_len = rd.u16();
  ByteSpan subject = rd.bytes(subject_len);
  if (!rd.ok()) return ParseError::Malformed;
  cert.subject.assign(subject.begin(), subject.end());
  cert.not_after = int64_t(rd.u64());
  rd.fill(cert.signature);
  if (!rd.ok() || !rd.at_end()) return ParseError::Malformed;
  return cert;
}

Certificate make_certificate(const SecretKey& issuer_key, const SerialNumber& serial,
                             const CaId& issuer, const std::string& subject,
                             int64_t not_after) {
  Certificate cert;
  cert.serial = serial;
  cert.issuer = issuer;
  cert.subject = subject;
  cert.not_after = not_after;
  cert.signature = sign(issuer_key, cert.signing_input());
  return cert;
}

bool verify_certificate(const Certificate& cert, const PublicKey& issuer_key) {
  return verify_signature(issuer_key, cert.signing_input(), cert.signature);
}

}  // namespace ritm
