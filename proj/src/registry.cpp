#include "ritm/registry.hpp"

#include <fstream>
#include <sstream>

namespace ritm {

Expected<Registry, ParseError> Registry::parse(const std::string& text) {
  Registry reg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hashpos = line.find('#');
    if (hashpos != std::string::npos) line.resize(hashpos);
    std::istringstream fields(line);
    std::string id_hex, key_hex;
    uint32_t delta = 0;
    if (!(fields >> id_hex)) continue;  // blank line
    if (!(fields >> key_hex >> delta) || delta == 0) return ParseError::Malformed;
    auto id = ca_id_from_hex(id_hex);
    auto key_raw = from_hex(key_hex);
    if (!id || !key_raw || key_raw->size() != sizeof(PublicKey))
      return ParseError::Malformed;
    CaRecord rec;
    rec.id = *id;
    std::memcpy(rec.public_key.data(), key_raw->data(), rec.public_key.size());
    rec.delta = delta;
    reg.add(rec);
  }
  return reg;
}

Expected<Registry, ParseError> Registry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return ParseError::Malformed;
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string Registry::to_text() const {
  std::string out;
  for (const auto& [id, rec] : records_) {
    out += ca_id_hex(id);
    out += ' ';
    out += to_hex(ByteSpan(rec.public_key.data(), rec.public_key.size()));
    out += ' ';
    out += std::to_string(rec.delta);
    out += '\n';
  }
  return out;
}

}  // namespace ritm
