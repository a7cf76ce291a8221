#ifndef RITM_DICTIONARY_HPP
#define RITM_DICTIONARY_HPP

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>

#include "ritm/crypto.hpp"
#include "ritm/serial.hpp"

namespace ritm {

using CaId = std::array<uint8_t, 8>;

CaId ca_id_from_u64(uint64_t v);
std::string ca_id_hex(const CaId& id);
std::optional<CaId> ca_id_from_hex(const std::string& hex);

struct Leaf {
  SerialNumber serial;
  uint64_t index = 0;  // revocation counter, 1-based, consecutive per dictionary

  // 1-byte serial length | serial bytes | 8-byte big-endian index
  Bytes canonical_bytes() const;
};

Digest leaf_hash(const Leaf& leaf);
Digest node_hash(const Digest& left, const Digest& right);

struct PathElement {
  bool sibling_left = false;  // sibling is the left child; our node is the right
  Digest sibling{};
};

struct AuthPath {
  std::vector<PathElement> elements;
};

enum class ProofKind : uint8_t { Absent = 0, Present = 1 };

// Present: the matching leaf and its full path.
// Absent: the bracketing leaves (2 interior, 1 at the boundaries, 0 when
// the tree is empty). The first path runs to the root; a second path is
// truncated at the merge level with the first (adjacent leaves share the
// rest of the route up).
struct MembershipProof {
  ProofKind kind = ProofKind::Absent;
  std::vector<Leaf> leaves;
  std::vector<AuthPath> paths;
};

// Node counts per tree level, from n leaves down to a single root.
// An odd trailing node at any level is promoted unchanged.
std::vector<uint64_t> level_counts(uint64_t n);

// Lowest level at which positions pos and pos+1 meet.
uint64_t merge_level(uint64_t pos);

struct PathEvaluation {
  uint64_t position = 0;
  std::vector<Digest> level_digests;  // [0] = leaf digest, back() = root
};

// Walks the path against the canonical tree shape for n leaves: derives the
// leaf position from the direction bits, folds digests upward, and rejects
// any structural mismatch. Does not compare against any particular root.
std::optional<PathEvaluation> evaluate_path(const Digest& leaf_digest,
                                            const AuthPath& path, uint64_t n);

enum class InsertError { DuplicateSerial };
enum class LoadError { Malformed };

// Append-only authenticated dictionary of revoked serial numbers.
// Values are immutable; insert returns a new version sharing nothing
// mutable with the old one, so readers can hold snapshots freely.
class Dictionary {
 public:
  Dictionary();
  explicit Dictionary(CaId ca_id);

  const CaId& ca_id() const;
  uint64_t size() const;
  const Digest& root() const;

  bool contains(const SerialNumber& s) const;
  std::optional<uint64_t> position_of(const SerialNumber& s) const;
  const std::vector<Leaf>& sorted_leaves() const;
  std::vector<Leaf> leaves_in_insertion_order() const;

  // Appends the batch in the given order with consecutive indexes, re-sorts,
  // rebuilds the tree. Rejects serials already present or repeated in batch.
  Expected<Dictionary, InsertError> insert(std::span<const SerialNumber> serials) const;

  MembershipProof prove(const SerialNumber& s) const;

  // Persistence: header + serials in insertion order (indexes are implicit).
  void save(std::ostream& out) const;
  static Expected<Dictionary, LoadError> load(std::istream& in);
  uint64_t storage_bytes() const;

 private:
  struct Store;
  explicit Dictionary(std::shared_ptr<const Store> store);
  AuthPath path_for_position(uint64_t pos) const;
  std::shared_ptr<const Store> store_;
};

}  // namespace ritm

#endif
