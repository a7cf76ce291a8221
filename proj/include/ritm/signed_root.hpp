#ifndef RITM_SIGNED_ROOT_HPP
#define RITM_SIGNED_ROOT_HPP

#include "ritm/dictionary.hpp"

namespace ritm {

inline constexpr size_t kSignedRootSize = 8 + 20 + 8 + 20 + 8 + 64;  // 128
inline constexpr uint32_t kDefaultChainLength = 86400;
inline constexpr int64_t kClockSkewSlack = 60;  // future-timestamp tolerance, seconds

enum class ParseError { Malformed };

// CA commitment to one dictionary version: {root, n, H^m(v), time()} signed.
struct SignedRoot {
  CaId ca_id{};
  Digest root{};
  uint64_t n = 0;
  Digest anchor{};  // H^m(v)
  int64_t timestamp = 0;
  Signature signature{};

  Bytes signing_input() const;
  Bytes to_bytes() const;  // ca_id(8) | root(20) | n(8) | anchor(20) | timestamp(8) | sig(64)
  static Expected<SignedRoot, ParseError> from_bytes(ByteSpan raw);

  friend bool operator==(const SignedRoot&, const SignedRoot&) = default;
};

// CA-private chain seed backing a signed root's anchor.
struct HashChainSecret {
  Digest seed{};  // v
  uint32_t m = kDefaultChainLength;
  int64_t t0 = 0;
};

struct FreshnessStatement {
  Digest value{};  // H^{m-p}(v)

  friend bool operator==(const FreshnessStatement&, const FreshnessStatement&) = default;
};

struct SignedRootBundle {
  SignedRoot signed_root;
  HashChainSecret secret;
};

SignedRootBundle make_signed_root(const SecretKey& ca_key, const CaId& ca_id,
                                  const Digest& root, uint64_t n, int64_t now,
                                  uint32_t m, RandomSource& rng);

bool verify_signed_root(const SignedRoot& sr, const PublicKey& ca_key);

struct NeedNewRoot {};

// Fig-3 refresh: p = floor((now - t)/delta); H^{m-p}(v) while p < m.
std::variant<FreshnessStatement, NeedNewRoot> refresh(const HashChainSecret& secret,
                                                      const SignedRoot& sr, int64_t now,
                                                      uint32_t delta);

// True when `value` is the statement for the verifier's current or
// immediately preceding period, i.e. staleness in [0, 2*delta).
bool freshness_current(const FreshnessStatement& fs, const SignedRoot& sr, int64_t now,
                       uint32_t delta);

}  // namespace ritm

#endif
