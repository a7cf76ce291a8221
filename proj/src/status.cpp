#include "ritm/status.hpp"

namespace ritm {

namespace {

constexpr size_t kMaxPathLen = 80;

void put_path(Bytes& out, const AuthPath& path) {
  put_u16(out, uint16_t(path.elements.size()));
  size_t bitmap_bytes = (path.elements.size() + 7) / 8;
  size_t base = out.size();
  out.insert(out.end(), bitmap_bytes, 0);
  for (size_t i = 0; i < path.elements.size(); ++i)
    if (path.elements[i].sibling_left) out[base + i / 8] |= uint8_t(0x80 >> (i % 8));
  for (const PathElement& e : path.elements)
    out.insert(out.end(), e.sibling.begin(), e.sibling.end());
}

bool read_path(ByteReader& rd, AuthPath& path) {
  uint16_t len = rd.u16();
  if (!rd.ok() || len > kMaxPathLen) return false;
  size_t bitmap_bytes = (len + 7) / 8;
  ByteSpan bitmap = rd.bytes(bitmap_bytes);
  if (!rd.ok()) return false;
  // Padding bits must be zero so every byte of the encoding is significant.
  for (size_t i = len; i < bitmap_bytes * 8; ++i)
    if (bitmap[i / 8] & (0x80 >> (i % 8))) return false;
  path.elements.resize(len);
  for (size_t i = 0; i < len; ++i) {
    path.elements[i].sibling_left = (bitmap[i / 8] & (0x80 >> (i % 8))) != 0;
    if (!rd.fill(path.elements[i].sibling)) return false;
  }
  return true;
}

bool read_leaf(ByteReader& rd, Leaf& leaf) {
  uint8_t len = rd.u8();
  if (!rd.ok() || len == 0 || len > kMaxSerialSize) return false;
  ByteSpan raw_serial = rd.bytes(len);
  if (!rd.ok()) return false;
  auto serial = SerialNumber::from_bytes(raw_serial);
  if (!serial.ok()) return false;
  leaf.serial = serial.value();
  leaf.index = rd.u64();
  return rd.ok();
}

}  // namespace

Bytes RevocationStatus::to_bytes() const {
  Bytes out;
  out.push_back(uint8_t(proof.kind));
  out.push_back(uint8_t(proof.leaves.size()));
  for (const Leaf& l : proof.leaves) {
    Bytes canon = l.canonical_bytes();
    out.insert(out.end(), canon.begin(), canon.end());
  }
  out.push_back(uint8_t(proof.paths.size()));
  for (const AuthPath& p : proof.paths) put_path(out, p);
  Bytes sr = signed_root.to_bytes();
  out.insert(out.end(), sr.begin(), sr.end());
  out.insert(out.end(), freshness.value.begin(), freshness.value.end());
  return out;
}

Expected<RevocationStatus, ParseError> RevocationStatus::from_bytes(ByteSpan raw) {
  ByteReader rd(raw);
  RevocationStatus st;
  uint8_t kind = rd.u8();
  if (!rd.ok() || kind > 1) return ParseError::Malformed;
  st.proof.kind = ProofKind(kind);
  uint8_t leaf_count = rd.u8();
  if (!rd.ok()) return ParseError::Malformed;
  if (st.proof.kind == ProofKind::Present ? leaf_count != 1 : leaf_count > 2)
    return ParseError::Malformed;
  st.proof.leaves.resize(leaf_count);
  for (Leaf& l : st.proof.leaves)
    if (!read_leaf(rd, l)) return ParseError::Malformed;
  uint8_t path_count = rd.u8();
  if (!rd.ok() || path_count != leaf_count) return ParseError::Malformed;
  st.proof.paths.resize(path_count);
  for (AuthPath& p : st.proof.paths)
    if (!read_path(rd, p)) return ParseError::Malformed;
  ByteSpan sr_raw = rd.bytes(kSignedRootSize);
  if (!rd.ok()) return ParseError::Malformed;
  auto sr = SignedRoot::from_bytes(sr_raw);
  if (!sr.ok()) return ParseError::Malformed;
  st.signed_root = sr.value();
  if (!rd.fill(st.freshness.value)) return ParseError::Malformed;
  if (!rd.at_end()) return ParseError::Malformed;
  return st;
}

Expected<RevocationStatus, ProveError> prove_status(const Dictionary& dict,
                                                    const SerialNumber& s,
                                                    const SignedRoot& sr,
                                                    const FreshnessStatement& fs) {
  if (dict.root() != sr.root || dict.size() != sr.n) return ProveError::DictRootMismatch;
  RevocationStatus st;
  st.proof = dict.prove(s);
  st.signed_root = sr;
  st.freshness = fs;
  return st;
}

const char* to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::Revoked: return "Revoked";
    case Verdict::Kind::NotRevoked: return "NotRevoked";
    case Verdict::Kind::Invalid: return "Invalid";
  }
  return "?";
}

const char* to_string(InvalidReason reason) {
  switch (reason) {
    case InvalidReason::BadSignature: return "BadSignature";
    case InvalidReason::BadProof: return "BadProof";
    case InvalidReason::StaleFreshness: return "StaleFreshness";
    case InvalidReason::MalformedStatus: return "MalformedStatus";
  }
  return "?";
}

namespace {

// Proof-shape checks against (root, n). Returns nullopt when the proof is
// sound; otherwise the reason.
std::optional<InvalidReason> check_proof(const MembershipProof& proof,
                                         const SerialNumber& s, const Digest& root,
                                         uint64_t n) {
  if (proof.leaves.size() != proof.paths.size()) return InvalidReason::MalformedStatus;
  if (proof.kind == ProofKind::Present) {
    if (proof.leaves.size() != 1) return InvalidReason::MalformedStatus;
    const Leaf& leaf = proof.leaves[0];
    if (!(leaf.serial == s)) return InvalidReason::BadProof;
    auto eval = evaluate_path(leaf_hash(leaf), proof.paths[0], n);
    if (!eval || eval->level_digests.back() != root) return InvalidReason::BadProof;
    return std::nullopt;
  }
  // Absent
  if (proof.leaves.size() > 2) return InvalidReason::MalformedStatus;
  if (proof.leaves.empty()) {
    if (n != 0) return InvalidReason::BadProof;
    return std::nullopt;
  }
  if (n == 0) return InvalidReason::BadProof;
  if (proof.leaves.size() == 1) {
    const Leaf& leaf = proof.leaves[0];
    auto eval = evaluate_path(leaf_hash(leaf), proof.paths[0], n);
    if (!eval || eval->level_digests.back() != root) return InvalidReason::BadProof;
    bool before_first = eval->position == 0 && s < leaf.serial;
    bool after_last = eval->position == n - 1 && leaf.serial < s;
    if (!before_first && !after_last) return InvalidReason::BadProof;
    return std::nullopt;
  }
  const Leaf& left = proof.leaves[0];
  const Leaf& right = proof.leaves[1];
  if (!(left.serial < s && s < right.serial)) return InvalidReason::BadProof;
  auto eval = evaluate_path(leaf_hash(left), proof.paths[0], n);
  if (!eval || eval->level_digests.back() != root) return InvalidReason::BadProof;
  uint64_t pos1 = eval->position;
  uint64_t pos2 = pos1 + 1;
  if (pos2 >= n) return InvalidReason::BadProof;
  // Fold the truncated right path up to the merge level and require it to
  // land on the left path's running digest there; adjacency (pos2 = pos1+1)
  // is thereby bound to the tree shape, not just claimed.
  auto counts = level_counts(n);
  uint64_t merge = merge_level(pos1);
  Digest acc = leaf_hash(right);
  uint64_t i = pos2;
  size_t e = 0;
  const AuthPath& second = proof.paths[1];
  for (uint64_t k = 0; k < merge; ++k) {
    if ((i ^ 1) < counts[k]) {
      if (e >= second.elements.size()) return InvalidReason::BadProof;
      const PathElement& elem = second.elements[e++];
      bool expect_left = (i & 1) != 0;
      if (elem.sibling_left != expect_left) return InvalidReason::BadProof;
      acc = expect_left ? node_hash(elem.sibling, acc) : node_hash(acc, elem.sibling);
    }
    i >>= 1;
  }
  if (e != second.elements.size()) return InvalidReason::BadProof;
  if (acc != eval->level_digests[merge]) return InvalidReason::BadProof;
  return std::nullopt;
}

}  // namespace

Verdict verify_status(const RevocationStatus& st, const SerialNumber& s,
                      const PublicKey& ca_key, int64_t now, uint32_t delta) {
  if (!verify_signed_root(st.signed_root, ca_key))
    return Verdict::make_invalid(InvalidReason::BadSignature);
  if (st.signed_root.timestamp > now + kClockSkewSlack)
    return Verdict::make_invalid(InvalidReason::StaleFreshness);
  if (auto reason = check_proof(st.proof, s, st.signed_root.root, st.signed_root.n))
    return Verdict::make_invalid(*reason);
  if (!freshness_current(st.freshness, st.signed_root, now, delta))
    return Verdict::make_invalid(InvalidReason::StaleFreshness);
  return st.proof.kind == ProofKind::Present ? Verdict::make_revoked()
                                             : Verdict::make_not_revoked();
}

Verdict verify_status_bytes(ByteSpan raw, const SerialNumber& s, const PublicKey& ca_key,
                            int64_t now, uint32_t delta) {
  auto st = RevocationStatus::from_bytes(raw);
  if (!st.ok()) return Verdict::make_invalid(InvalidReason::MalformedStatus);
  return verify_status(st.value(), s, ca_key, now, delta);
}

}  // namespace ritm
