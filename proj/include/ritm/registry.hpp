#ifndef RITM_REGISTRY_HPP
#define RITM_REGISTRY_HPP

#include <map>

#include "ritm/signed_root.hpp"

namespace ritm {

struct CaRecord {
  CaId id{};
  PublicKey public_key{};
  uint32_t delta = 0;
};

// Static CA registry: one line per CA, `ca_id_hex public_key_hex delta_seconds`.
// '#' starts a comment.
class Registry {
 public:
  static Expected<Registry, ParseError> parse(const std::string& text);
  static Expected<Registry, ParseError> load(const std::string& path);

  void add(const CaRecord& record) { records_[record.id] = record; }
  const CaRecord* find(const CaId& id) const {
    auto it = records_.find(id);
    return it == records_.end() ? nullptr : &it->second;
  }
  const std::map<CaId, CaRecord>& all() const { return records_; }
  std::string to_text() const;

 private:
  std::map<CaId, CaRecord> records_;
};

}  // namespace ritm

#endif
