#include "ritm/dictionary.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

namespace ritm {

CaId ca_id_from_u64(uint64_t v) {
  CaId id;
  for (int i = 7; i >= 0; --i) id[7 - i] = uint8_t(v >> (8 * i));
  return id;
}

std::string ca_id_hex(const CaId& id) { return to_hex(ByteSpan(id.data(), id.size())); }

std::optional<CaId> ca_id_from_hex(const std::string& hex) {
  auto raw = from_hex(hex);
  if (!raw || raw->size() != 8) return std::nullopt;
  CaId id;
  std::memcpy(id.data(), raw->data(), 8);
  return id;
}

Bytes Leaf::canonical_bytes() const {
  Bytes out;
  out.reserve(1 + serial.bytes().size() + 8);
  out.push_back(uint8_t(serial.bytes().size()));
  out.insert(out.end(), serial.bytes().begin(), serial.bytes().end());
  put_u64(out, index);
  return out;
}

Digest leaf_hash(const Leaf& leaf) {
  Bytes buf;
  buf.push_back(0x00);  // domain separation: leaf
  Bytes canon = leaf.canonical_bytes();
  buf.insert(buf.end(), canon.begin(), canon.end());
  return hash(buf);
}

Digest node_hash(const Digest& left, const Digest& right) {
  Bytes buf;
  buf.reserve(1 + 2 * kDigestSize);
  buf.push_back(0x01);  // domain separation: interior
  buf.insert(buf.end(), left.begin(), left.end());
  buf.insert(buf.end(), right.begin(), right.end());
  return hash(buf);
}

std::vector<uint64_t> level_counts(uint64_t n) {
  std::vector<uint64_t> counts{n};
  while (counts.back() > 1) counts.push_back((counts.back() + 1) / 2);
  return counts;
}

uint64_t merge_level(uint64_t pos) {
  uint64_t level = 1;
  while ((pos >> level) != ((pos + 1) >> level)) ++level;
  return level;
}

std::optional<PathEvaluation> evaluate_path(const Digest& leaf_digest,
                                            const AuthPath& path, uint64_t n) {
  if (n == 0) return std::nullopt;
  auto counts = level_counts(n);
  size_t levels = counts.size() - 1;

  // Top-down: replay the canonical shape to recover the position from the
  // direction bits. Promotion steps (odd trailing node) consume no element.
  uint64_t idx = 0;
  size_t next = path.elements.size();
  for (size_t k = levels; k-- > 0;) {
    bool two_children = 2 * idx + 1 < counts[k];
    if (!two_children) {
      idx = 2 * idx;
      continue;
    }
    if (next == 0) return std::nullopt;
    idx = 2 * idx + (path.elements[--next].sibling_left ? 1 : 0);
  }
  if (next != 0) return std::nullopt;  // leftover elements
  uint64_t pos = idx;
  if (pos >= n) return std::nullopt;

  // Bottom-up: fold digests, checking each direction against the parity the
  // derived position dictates.
  PathEvaluation eval;
  eval.position = pos;
  eval.level_digests.reserve(levels + 1);
  Digest acc = leaf_digest;
  eval.level_digests.push_back(acc);
  uint64_t i = pos;
  size_t e = 0;
  for (size_t k = 0; k < levels; ++k) {
    if ((i ^ 1) < counts[k]) {
      const PathElement& elem = path.elements[e++];
      bool expect_left = (i & 1) != 0;
      if (elem.sibling_left != expect_left) return std::nullopt;
      acc = expect_left ? node_hash(elem.sibling, acc) : node_hash(acc, elem.sibling);
    }
    eval.level_digests.push_back(acc);
    i >>= 1;
  }
  return eval;
}

struct Dictionary::Store {
  CaId ca_id{};
  std::vector<Leaf> leaves;                 // sorted by serial
  std::vector<std::vector<Digest>> levels;  // [0] leaf hashes .. [L] root
  Digest root{};

  void rebuild() {
    levels.clear();
    root = Digest{};
    if (leaves.empty()) return;
    std::vector<Digest> cur;
    cur.reserve(leaves.size());
    for (const Leaf& l : leaves) cur.push_back(leaf_hash(l));
    levels.push_back(cur);
    while (levels.back().size() > 1) {
      const auto& below = levels.back();
      std::vector<Digest> up;
      up.reserve((below.size() + 1) / 2);
      for (size_t i = 0; i + 1 < below.size(); i += 2)
        up.push_back(node_hash(below[i], below[i + 1]));
      if (below.size() % 2 == 1) up.push_back(below.back());
      levels.push_back(std::move(up));
    }
    root = levels.back()[0];
  }
};

Dictionary::Dictionary() : Dictionary(CaId{}) {}

Dictionary::Dictionary(CaId ca_id) {
  auto s = std::make_shared<Store>();
  s->ca_id = ca_id;
  store_ = std::move(s);
}

Dictionary::Dictionary(std::shared_ptr<const Store> store) : store_(std::move(store)) {}

const CaId& Dictionary::ca_id() const { return store_->ca_id; }
uint64_t Dictionary::size() const { return store_->leaves.size(); }
const Digest& Dictionary::root() const { return store_->root; }
const std::vector<Leaf>& Dictionary::sorted_leaves() const { return store_->leaves; }

std::vector<Leaf> Dictionary::leaves_in_insertion_order() const {
  std::vector<Leaf> out = store_->leaves;
  std::sort(out.begin(), out.end(),
            [](const Leaf& a, const Leaf& b) { return a.index < b.index; });
  return out;
}

std::optional<uint64_t> Dictionary::position_of(const SerialNumber& s) const {
  const auto& leaves = store_->leaves;
  auto it = std::lower_bound(leaves.begin(), leaves.end(), s,
                             [](const Leaf& l, const SerialNumber& v) { return l.serial < v; });
  if (it != leaves.end() && it->serial == s) return uint64_t(it - leaves.begin());
  return std::nullopt;
}

bool Dictionary::contains(const SerialNumber& s) const { return position_of(s).has_value(); }

Expected<Dictionary, InsertError> Dictionary::insert(
    std::span<const SerialNumber> serials) const {
  std::set<SerialNumber> batch;
  for (const SerialNumber& s : serials) {
    if (contains(s) || !batch.insert(s).second) return InsertError::DuplicateSerial;
  }
  auto next = std::make_shared<Store>();
  next->ca_id = store_->ca_id;
  next->leaves = store_->leaves;
  uint64_t index = next->leaves.size();
  next->leaves.reserve(next->leaves.size() + serials.size());
  for (const SerialNumber& s : serials) next->leaves.push_back(Leaf{s, ++index});
  std::sort(next->leaves.begin(), next->leaves.end(),
            [](const Leaf& a, const Leaf& b) { return a.serial < b.serial; });
  next->rebuild();
  return Dictionary(std::move(next));
}

AuthPath Dictionary::path_for_position(uint64_t pos) const {
  AuthPath path;
  const auto& levels = store_->levels;
  uint64_t i = pos;
  for (size_t k = 0; k + 1 < levels.size(); ++k) {
    uint64_t sib = i ^ 1;
    if (sib < levels[k].size())
      path.elements.push_back(PathElement{(i & 1) != 0, levels[k][sib]});
    i >>= 1;
  }
  return path;
}

MembershipProof Dictionary::prove(const SerialNumber& s) const {
  MembershipProof proof;
  const auto& leaves = store_->leaves;
  if (auto pos = position_of(s)) {
    proof.kind = ProofKind::Present;
    proof.leaves.push_back(leaves[*pos]);
    proof.paths.push_back(path_for_position(*pos));
    return proof;
  }
  proof.kind = ProofKind::Absent;
  if (leaves.empty()) return proof;
  auto it = std::lower_bound(leaves.begin(), leaves.end(), s,
                             [](const Leaf& l, const SerialNumber& v) { return l.serial < v; });
  uint64_t right = uint64_t(it - leaves.begin());
  if (right == 0) {
    proof.leaves.push_back(leaves[0]);
    proof.paths.push_back(path_for_position(0));
  } else if (right == leaves.size()) {
    proof.leaves.push_back(leaves.back());
    proof.paths.push_back(path_for_position(leaves.size() - 1));
  } else {
    uint64_t left = right - 1;
    proof.leaves.push_back(leaves[left]);
    proof.leaves.push_back(leaves[right]);
    proof.paths.push_back(path_for_position(left));
    AuthPath second = path_for_position(right);
    // Keep only the part below the merge with the left path; the verifier
    // rejoins it to the first path's running digest there.
    auto counts = level_counts(leaves.size());
    uint64_t merge = merge_level(left);
    size_t keep = 0;
    uint64_t i = right;
    for (uint64_t k = 0; k < merge; ++k) {
      if ((i ^ 1) < counts[k]) ++keep;
      i >>= 1;
    }
    second.elements.resize(keep);
    proof.paths.push_back(std::move(second));
  }
  return proof;
}

void Dictionary::save(std::ostream& out) const {
  Bytes header;
  header.insert(header.end(), store_->ca_id.begin(), store_->ca_id.end());
  put_u64(header, size());
  out.write(reinterpret_cast<const char*>(header.data()), std::streamsize(header.size()));
  for (const Leaf& l : leaves_in_insertion_order()) {
    uint8_t len = uint8_t(l.serial.bytes().size());
    out.write(reinterpret_cast<const char*>(&len), 1);
    out.write(reinterpret_cast<const char*>(l.serial.bytes().data()), len);
  }
}

Expected<Dictionary, LoadError> Dictionary::load(std::istream& in) {
  uint8_t header[16];
  if (!in.read(reinterpret_cast<char*>(header), 16)) return LoadError::Malformed;
  ByteReader rd(ByteSpan(header, 16));
  CaId id;
  rd.fill(id);
  uint64_t n = rd.u64();
  std::vector<SerialNumber> serials;
  serials.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    uint8_t len = 0;
    if (!in.read(reinterpret_cast<char*>(&len), 1)) return LoadError::Malformed;
    uint8_t buf[kMaxSerialSize];
    if (len == 0 || len > kMaxSerialSize) return LoadError::Malformed;
    if (!in.read(reinterpret_cast<char*>(buf), len)) return LoadError::Malformed;
    auto s = SerialNumber::from_bytes(ByteSpan(buf, len));
    if (!s.ok()) return LoadError::Malformed;
    serials.push_back(s.value());
  }
  auto dict = Dictionary(id).insert(serials);
  if (!dict.ok()) return LoadError::Malformed;
  return dict.value();
}

uint64_t Dictionary::storage_bytes() const {
  uint64_t total = 16;
  for (const Leaf& l : store_->leaves) total += 1 + l.serial.bytes().size();
  return total;
}

}  // namespace ritm
