#include "ritm/signed_root.hpp"

namespace ritm {

Bytes SignedRoot::signing_input() const {
  Bytes out;
  out.reserve(kSignedRootSize - kSignatureSize);
  out.insert(out.end(), ca_id.begin(), ca_id.end());
  out.insert(out.end(), root.begin(), root.end());
  put_u64(out, n);
  out.insert(out.end(), anchor.begin(), anchor.end());
  put_u64(out, uint64_t(timestamp));
  return out;
}

Bytes SignedRoot::to_bytes() const {
  Bytes out = signing_input();
  out.insert(out.end(), signature.begin(), signature.end());
  return out;
}

Expected<SignedRoot, ParseError> SignedRoot::from_bytes(ByteSpan raw) {
  if (raw.size() != kSignedRootSize) return ParseError::Malformed;
  ByteReader rd(raw);
  SignedRoot sr;
  rd.fill(sr.ca_id);
  rd.fill(sr.root);
  sr.n = rd.u64();
  rd.fill(sr.anchor);
  sr.timestamp = int64_t(rd.u64());
  rd.fill(sr.signature);
  if (!rd.ok() || !rd.at_end()) return ParseError::Malformed;
  return sr;
}

SignedRootBundle make_signed_root(const SecretKey& ca_key, const CaId& ca_id,
                                  const Digest& root, uint64_t n, int64_t now,
                                  uint32_t m, RandomSource& rng) {
  SignedRootBundle bundle;
  bundle.secret.seed = rng.digest();
  bundle.secret.m = m;
  bundle.secret.t0 = now;
  bundle.signed_root.ca_id = ca_id;
  bundle.signed_root.root = root;
  bundle.signed_root.n = n;
  bundle.signed_root.anchor = chain_evaluate(bundle.secret.seed, m);
  bundle.signed_root.timestamp = now;
  bundle.signed_root.signature = sign(ca_key, bundle.signed_root.signing_input());
  return bundle;
}

bool verify_signed_root(const SignedRoot& sr, const PublicKey& ca_key) {
  return verify_signature(ca_key, sr.signing_input(), sr.signature);
}

std::variant<FreshnessStatement, NeedNewRoot> refresh(const HashChainSecret& secret,
                                                      const SignedRoot& sr, int64_t now,
                                                      uint32_t delta) {
  int64_t p = floor_div(now - sr.timestamp, delta);
  if (p < 0) p = 0;
  if (uint64_t(p) >= secret.m) return NeedNewRoot{};
  return FreshnessStatement{chain_evaluate(secret.seed, secret.m - uint64_t(p))};
}

bool freshness_current(const FreshnessStatement& fs, const SignedRoot& sr, int64_t now,
                       uint32_t delta) {
  if (delta == 0) return false;
  if (sr.timestamp > now + kClockSkewSlack) return false;
  int64_t p_now = floor_div(now - sr.timestamp, delta);
  if (p_now < 0) return false;
  // Statements for periods beyond the longest supported chain cannot verify;
  // cap the work spent on hopelessly old roots.
  if (p_now > int64_t(kDefaultChainLength) * 2) return false;
  Digest walked = fs.value;
  if (p_now >= 1) {
    walked = chain_evaluate(walked, uint64_t(p_now) - 1);
    if (walked == sr.anchor) return true;  // previous period
    walked = chain_evaluate(walked, 1);
  } else {
    walked = chain_evaluate(walked, uint64_t(p_now));
  }
  return walked == sr.anchor;  // current period
}

}  // namespace ritm
