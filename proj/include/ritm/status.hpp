#ifndef RITM_STATUS_HPP
#define RITM_STATUS_HPP

#include "ritm/signed_root.hpp"

namespace ritm {

// Proof + signed root + freshness statement, the unit shipped to clients.
struct RevocationStatus {
  MembershipProof proof;
  SignedRoot signed_root;
  FreshnessStatement freshness;

  // kind(1) | leaf_count(1) | leaves | path_count(1)
  //   | per path: len(2) | direction bitmap | digests
  //   | SignedRoot(128) | freshness(20)
  Bytes to_bytes() const;
  static Expected<RevocationStatus, ParseError> from_bytes(ByteSpan raw);
};

enum class ProveError { DictRootMismatch };

Expected<RevocationStatus, ProveError> prove_status(const Dictionary& dict,
                                                    const SerialNumber& s,
                                                    const SignedRoot& sr,
                                                    const FreshnessStatement& fs);

enum class InvalidReason { BadSignature, BadProof, StaleFreshness, MalformedStatus };

struct Verdict {
  enum class Kind { Revoked, NotRevoked, Invalid };
  Kind kind = Kind::Invalid;
  InvalidReason reason = InvalidReason::MalformedStatus;

  bool revoked() const { return kind == Kind::Revoked; }
  bool not_revoked() const { return kind == Kind::NotRevoked; }
  bool invalid() const { return kind == Kind::Invalid; }

  static Verdict make_revoked() { return {Kind::Revoked, InvalidReason::BadProof}; }
  static Verdict make_not_revoked() { return {Kind::NotRevoked, InvalidReason::BadProof}; }
  static Verdict make_invalid(InvalidReason r) { return {Kind::Invalid, r}; }
};

const char* to_string(Verdict::Kind kind);
const char* to_string(InvalidReason reason);

Verdict verify_status(const RevocationStatus& st, const SerialNumber& s,
                      const PublicKey& ca_key, int64_t now, uint32_t delta);

Verdict verify_status_bytes(ByteSpan raw, const SerialNumber& s, const PublicKey& ca_key,
                            int64_t now, uint32_t delta);

}  // namespace ritm

#endif
