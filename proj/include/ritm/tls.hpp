#ifndef RITM_TLS_HPP
#define RITM_TLS_HPP

#include <deque>

#include "ritm/crypto.hpp"

namespace ritm::tls {

inline constexpr uint8_t kContentChangeCipherSpec = 20;
inline constexpr uint8_t kContentAlert = 21;
inline constexpr uint8_t kContentHandshake = 22;
inline constexpr uint8_t kContentApplicationData = 23;
inline constexpr uint8_t kContentRevocationStatus = 0x52;

inline constexpr uint8_t kHsClientHello = 1;
inline constexpr uint8_t kHsServerHello = 2;
inline constexpr uint8_t kHsCertificate = 11;
inline constexpr uint8_t kHsServerHelloDone = 14;
inline constexpr uint8_t kHsFinished = 20;

inline constexpr uint16_t kVersionTls12 = 0x0303;
inline constexpr uint16_t kRitmExtension = 0xFF02;
inline constexpr size_t kMaxRecordPayload = 1 << 14;

struct TlsRecord {
  uint8_t content_type = 0;
  uint16_t version = kVersionTls12;
  Bytes payload;
};

Bytes serialize_record(const TlsRecord& record);

// Splits an in-order byte stream into TLS records, keeping the exact
// original bytes of each record so forwarding stays byte-identical.
// Anything that does not frame as TLS latches raw mode: from then on the
// stream is opaque and only flushed through.
class RecordReader {
 public:
  void feed(ByteSpan data);

  struct Item {
    TlsRecord record;
    Bytes raw;  // header + payload, exactly as received
  };
  std::optional<Item> next();

  bool raw_mode() const { return raw_; }
  // Buffered bytes not yet emitted (partial record, or everything in raw mode).
  Bytes take_buffered();

 private:
  Bytes buf_;
  bool raw_ = false;
};

// One parsed handshake message, the parts the RA cares about.
struct HandshakeView {
  enum class MsgType { ClientHello, ServerHello, Certificate, Finished, ServerHelloDone, Other };
  MsgType msg_type = MsgType::Other;
  uint8_t raw_type = 0;
  std::vector<std::pair<uint16_t, Bytes>> extensions;  // hello messages only
  std::vector<Bytes> certificates;                     // Certificate only, leaf first
};

// Reassembles handshake messages across record boundaries.
class HandshakeReassembler {
 public:
  void feed(ByteSpan record_payload);
  // complete messages in order: (msg_type, body)
  std::optional<std::pair<uint8_t, Bytes>> next();
  bool bad() const { return bad_; }

 private:
  Bytes buf_;
  bool bad_ = false;
};

std::optional<HandshakeView> parse_handshake(uint8_t msg_type, ByteSpan body);
bool has_extension(const HandshakeView& view, uint16_t type);

// Mini-TLS builders: wire-compatible TLS 1.2 records for the desk-scale
// client and server (no key exchange; the handshake stays in plaintext).
Bytes build_client_hello(RandomSource& rng, const std::string& server_name,
                         bool ritm_extension);
Bytes build_server_hello(RandomSource& rng);
Bytes build_certificate(const std::vector<Bytes>& certs);
Bytes build_server_hello_done();
Bytes build_finished(RandomSource& rng);
Bytes build_app_data(ByteSpan payload);
Bytes build_status_record(ByteSpan payload, uint16_t version);

}  // namespace ritm::tls

#endif
