#ifndef RITM_CERT_HPP
#define RITM_CERT_HPP

#include "ritm/signed_root.hpp"

namespace ritm {

// Desk-scale certificate: length-prefixed fields signed by the issuer.
// serial_len(1) | serial | issuer_id(8) | subject_len(2) | subject
//   | not_after(8) | signature(64)
struct Certificate {
  SerialNumber serial;
  CaId issuer{};
  std::string subject;
  int64_t not_after = 0;
  Signature signature{};

  Bytes to_bytes() const;
  Bytes signing_input() const;
  static Expected<Certificate, ParseError> from_bytes(ByteSpan raw);
};

Certificate make_certificate(const SecretKey& issuer_key, const SerialNumber& serial,
                             const CaId& issuer, const std::string& subject,
                             int64_t not_after);

bool verify_certificate(const Certificate& cert, const PublicKey& issuer_key);

}  // namespace ritm

#endif
