#include "ritm/tls.hpp"

namespace ritm::tls {

Bytes serialize_record(const TlsRecord& record) {
  Bytes out;
  out.reserve(5 + record.payload.size());
  out.push_back(record.content_type);
  put_u16(out, record.version);
  put_u16(out, uint16_t(record.payload.size()));
  out.insert(out.end(), record.payload.begin(), record.payload.end());
  return out;
}

namespace {

bool plausible_header(const Bytes& buf) {
  uint8_t type = buf[0];
  bool known = type == kContentChangeCipherSpec || type == kContentAlert ||
               type == kContentHandshake || type == kContentApplicationData ||
               type == kContentRevocationStatus;
  if (!known) return false;
  if (buf[1] != 0x03 || buf[2] > 0x04) return false;
  size_t len = size_t(buf[3]) << 8 | buf[4];
  return len <= kMaxRecordPayload;
}

}  // namespace

void RecordReader::feed(ByteSpan data) { buf_.insert(buf_.end(), data.begin(), data.end()); }

std::optional<RecordReader::Item> RecordReader::next() {
  if (raw_ || buf_.size() < 5) return std::nullopt;
  if (!plausible_header(buf_)) {
    raw_ = true;
    return std::nullopt;
  }
  size_t len = size_t(buf_[3]) << 8 | buf_[4];
  if (buf_.size() < 5 + len) return std::nullopt;
  Item item;
  item.record.content_type = buf_[0];
  item.record.version = uint16_t(buf_[1]) << 8 | buf_[2];
  item.record.payload.assign(buf_.begin() + 5, buf_.begin() + 5 + std::ptrdiff_t(len));
  item.raw.assign(buf_.begin(), buf_.begin() + 5 + std::ptrdiff_t(len));
  buf_.erase(buf_.begin(), buf_.begin() + 5 + std::ptrdiff_t(len));
  return item;
}

Bytes RecordReader::take_buffered() {
  Bytes out;
  out.swap(buf_);
  return out;
}

void HandshakeReassembler::feed(ByteSpan record_payload) {
  buf_.insert(buf_.end(), record_payload.begin(), record_payload.end());
}

std::optional<std::pair<uint8_t, Bytes>> HandshakeReassembler::next() {
  if (bad_ || buf_.size() < 4) return std::nullopt;
  size_t len = size_t(buf_[1]) << 16 | size_t(buf_[2]) << 8 | buf_[3];
  if (len > (1u << 20)) {
    bad_ = true;
    return std::nullopt;
  }
  if (buf_.size() < 4 + len) return std::nullopt;
  uint8_t type = buf_[0];
  Bytes body(buf_.begin() + 4, buf_.begin() + 4 + std::ptrdiff_t(len));
  buf_.erase(buf_.begin(), buf_.begin() + 4 + std::ptrdiff_t(len));
  return std::make_pair(type, std::move(body));
}

namespace {

bool parse_extensions(ByteReader& rd, HandshakeView& view) {
  if (rd.at_end()) return true;  // extensions block is optional
  uint16_t total = rd.u16();
  ByteSpan block = rd.bytes(total);
  if (!rd.ok()) return false;
  ByteReader ext(block);
  while (!ext.at_end()) {
    uint16_t type = ext.u16();
    uint16_t len = ext.u16();
    ByteSpan data = ext.bytes(len);
    if (!ext.ok()) return false;
    view.extensions.emplace_back(type, Bytes(data.begin(), data.end()));
  }
  return true;
}

std::optional<HandshakeView> parse_hello(ByteSpan body, bool client) {
  ByteReader rd(body);
  HandshakeView view;
  view.msg_type = client ? HandshakeView::MsgType::ClientHello
                         : HandshakeView::MsgType::ServerHello;
  rd.u16();       // legacy version
  rd.bytes(32);   // random
  uint8_t sid_len = rd.u8();
  rd.bytes(sid_len);
  if (client) {
    uint16_t cs_len = rd.u16();
    rd.bytes(cs_len);
    uint8_t comp_len = rd.u8();
    rd.bytes(comp_len);
  } else {
    rd.u16();  // cipher suite
    rd.u8();   // compression
  }
  if (!rd.ok()) return std::nullopt;
  if (!parse_extensions(rd, view)) return std::nullopt;
  if (!rd.at_end()) return std::nullopt;
  return view;
}

std::optional<HandshakeView> parse_certificate_msg(ByteSpan body) {
  ByteReader rd(body);
  HandshakeView view;
  view.msg_type = HandshakeView::MsgType::Certificate;
  uint32_t total = rd.u24();
  ByteSpan list = rd.bytes(total);
  if (!rd.ok() || !rd.at_end()) return std::nullopt;
  ByteReader certs(list);
  while (!certs.at_end()) {
    uint32_t len = certs.u24();
    ByteSpan cert = certs.bytes(len);
    if (!certs.ok()) return std::nullopt;
    view.certificates.emplace_back(cert.begin(), cert.end());
  }
  return view;
}

}  // namespace

std::optional<HandshakeView> parse_handshake(uint8_t msg_type, ByteSpan body) {
  switch (msg_type) {
    case kHsClientHello:
      return parse_hello(body, true);
    case kHsServerHello:
      return parse_hello(body, false);
    case kHsCertificate:
      return parse_certificate_msg(body);
    case kHsFinished: {
      HandshakeView view;
      view.msg_type = HandshakeView::MsgType::Finished;
      view.raw_type = msg_type;
      return view;
    }
    case kHsServerHelloDone: {
      HandshakeView view;
      view.msg_type = HandshakeView::MsgType::ServerHelloDone;
      view.raw_type = msg_type;
      return view;
    }
    default: {
      HandshakeView view;
      view.msg_type = HandshakeView::MsgType::Other;
      view.raw_type = msg_type;
      return view;
    }
  }
}

bool has_extension(const HandshakeView& view, uint16_t type) {
  for (const auto& [ext_type, data] : view.extensions)
    if (ext_type == type) return true;
  return false;
}

namespace {

Bytes wrap_handshake(uint8_t msg_type, const Bytes& body) {
  Bytes hs;
  hs.push_back(msg_type);
  put_u24(hs, uint32_t(body.size()));
  hs.insert(hs.end(), body.begin(), body.end());
  return serialize_record(TlsRecord{kContentHandshake, kVersionTls12, std::move(hs)});
}

}  // namespace

Bytes build_client_hello(RandomSource& rng, const std::string& server_name,
                         bool ritm_extension) {
  Bytes body;
  put_u16(body, kVersionTls12);
  for (int i = 0; i < 32; ++i) body.push_back(uint8_t(rng.below(256)));
  body.push_back(0);  // empty session id
  put_u16(body, 4);   // two cipher suites
  put_u16(body, 0xc02f);
  put_u16(body, 0x002f);
  body.push_back(1);  // one compression method: null
  body.push_back(0);

  Bytes exts;
  // server_name (type 0), the usual first extension
  Bytes sni_list;
  sni_list.push_back(0);  // host_name
  put_u16(sni_list, uint16_t(server_name.size()));
  sni_list.insert(sni_list.end(), server_name.begin(), server_name.end());
  Bytes sni;
  put_u16(sni, uint16_t(sni_list.size()));
  sni.insert(sni.end(), sni_list.begin(), sni_list.end());
  put_u16(exts, 0x0000);
  put_u16(exts, uint16_t(sni.size()));
  exts.insert(exts.end(), sni.begin(), sni.end());
  // signature_algorithms, fixed minimal list
  put_u16(exts, 0x000d);
  put_u16(exts, 4);
  put_u16(exts, 2);
  put_u16(exts, 0x0807);  // ed25519
  if (ritm_extension) {
    put_u16(exts, kRitmExtension);
    put_u16(exts, 0);
  }
  put_u16(body, uint16_t(exts.size()));
  body.insert(body.end(), exts.begin(), exts.end());
  return wrap_handshake(kHsClientHello, body);
}

Bytes build_server_hello(RandomSource& rng) {
  Bytes body;
  put_u16(body, kVersionTls12);
  for (int i = 0; i < 32; ++i) body.push_back(uint8_t(rng.below(256)));
  body.push_back(0);       // empty session id
  put_u16(body, 0xc02f);   // chosen cipher suite
  body.push_back(0);       // null compression
  put_u16(body, 0);        // no extensions
  return wrap_handshake(kHsServerHello, body);
}

Bytes build_certificate(const std::vector<Bytes>& certs) {
  Bytes list;
  for (const Bytes& cert : certs) {
    put_u24(list, uint32_t(cert.size()));
    list.insert(list.end(), cert.begin(), cert.end());
  }
  Bytes body;
  put_u24(body, uint32_t(list.size()));
  body.insert(body.end(), list.begin(), list.end());
  return wrap_handshake(kHsCertificate, body);
}

Bytes build_server_hello_done() { return wrap_handshake(kHsServerHelloDone, {}); }

Bytes build_finished(RandomSource& rng) {
  Bytes body;
  for (int i = 0; i < 12; ++i) body.push_back(uint8_t(rng.below(256)));
  return wrap_handshake(kHsFinished, body);
}

Bytes build_app_data(ByteSpan payload) {
  return serialize_record(
      TlsRecord{kContentApplicationData, kVersionTls12, Bytes(payload.begin(), payload.end())});
}

Bytes build_status_record(ByteSpan payload, uint16_t version) {
  return serialize_record(
      TlsRecord{kContentRevocationStatus, version, Bytes(payload.begin(), payload.end())});
}

}  // namespace ritm::tls
