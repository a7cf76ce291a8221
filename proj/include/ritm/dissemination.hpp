#ifndef RITM_DISSEMINATION_HPP
#define RITM_DISSEMINATION_HPP

#include <functional>
#include <map>

#include "ritm/registry.hpp"
#include "ritm/status.hpp"

namespace ritm {

// --- messages -------------------------------------------------------------

// Revoked serial number(s) together with the new signed root.
struct IssuanceMessage {
  CaId ca_id{};
  std::vector<SerialNumber> serials;
  SignedRoot signed_root;

  // ca_id(8) | count(4) | per serial: len(1) | bytes | SignedRoot(128)
  Bytes to_bytes() const;
  static Expected<IssuanceMessage, ParseError> from_bytes(ByteSpan raw);
};

struct FreshnessMessage {
  CaId ca_id{};
  FreshnessStatement statement;

  Bytes to_bytes() const;  // ca_id(8) | value(20)
  static Expected<FreshnessMessage, ParseError> from_bytes(ByteSpan raw);
};

// 4-byte big-endian length prefix per message.
Bytes frame_message(ByteSpan payload);
std::optional<std::vector<Bytes>> parse_frames(ByteSpan stream);

// --- transport ------------------------------------------------------------

struct HttpRequest {
  std::string method = "GET";
  std::string target;  // path plus optional query
};

struct HttpResponse {
  int status = 200;
  bool stale = false;  // served from cache after the origin became unreachable
  Bytes body;
};

// nullopt models an unreachable peer.
using HttpExchange = std::function<std::optional<HttpResponse>(const HttpRequest&)>;

std::string updates_path(const CaId& ca, uint64_t from);
std::string freshness_path(const CaId& ca);
std::string root_path(const CaId& ca);

// --- replica update (Fig. 3 `update`) --------------------------------------

enum class UpdateError {
  BadSignature,
  StaleTimestamp,
  RootMismatch,
  CountMismatch,
  DuplicateSerial,
};

// Applies a batch to a replica, all-or-nothing: signature and timestamp are
// checked, serials inserted as in `insert`, and the result is kept only when
// the recomputed root and count match the signed root.
Expected<Dictionary, UpdateError> apply_update(const Dictionary& copy,
                                               std::span<const SerialNumber> serials,
                                               const SignedRoot& sr,
                                               const PublicKey& ca_key,
                                               std::optional<int64_t> current_root_time,
                                               int64_t now);

// --- distribution point -----------------------------------------------------

enum class PublishError {
  UnknownCa,
  EmptyBatch,
  BadSignature,
  GapInSequence,
  BadChainLink,
  RootMismatch,
  StaleTimestamp,
  DuplicateSerial,
};

const char* to_string(PublishError e);

// Origin of the pull-based dissemination network. Verifies everything a CA
// publishes against its own replica before exposing it on the endpoints:
//   GET /dict/{ca_id}/updates?from={n}
//   GET /dict/{ca_id}/freshness
//   GET /dict/{ca_id}/root
class DistributionPoint {
 public:
  explicit DistributionPoint(Registry registry);

  Expected<Unit, PublishError> publish(const IssuanceMessage& msg, int64_t now);
  Expected<Unit, PublishError> publish(const FreshnessMessage& msg, int64_t now);

  // Registration-time bootstrap: a signed root over the empty dictionary,
  // accepted only while no issuance has been logged for the CA.
  Expected<Unit, PublishError> publish_initial_root(const SignedRoot& sr, int64_t now);

  HttpResponse handle(const HttpRequest& request) const;

  const SignedRoot* current_root(const CaId& ca) const;
  uint64_t published_n(const CaId& ca) const;

  struct LogEntry {
    int64_t published_at = 0;
    uint64_t prior_n = 0;  // leading index is prior_n + 1
    IssuanceMessage message;
  };
  const std::vector<LogEntry>* log(const CaId& ca) const;
  const Registry& registry() const { return registry_; }

 private:
  // The spec's UpdateLog: ordered issuance messages plus the one current
  // freshness statement per CA, kept next to the verifying replica.
  struct UpdateLog {
    Dictionary replica;
    std::optional<SignedRoot> root;
    std::optional<FreshnessMessage> freshness;
    std::vector<LogEntry> entries;
  };
  Registry registry_;
  std::map<CaId, UpdateLog> logs_;
};

// --- edge server -------------------------------------------------------------

// Caching tier between the distribution point and RAs. Mirrors each CA's log
// and serves any `from` cursor out of the mirror; the mirror is refreshed when
// older than the TTL (TTL = 0 forces a refresh on every request). When the
// origin is unreachable the stale mirror is served with the stale flag set.
class EdgeServer {
 public:
  EdgeServer(HttpExchange origin, uint32_t ttl_seconds);

  HttpResponse handle(const HttpRequest& request, int64_t now);
  uint64_t origin_fetches() const { return origin_fetches_; }

 private:
  struct Mirror {
    bool have = false;
    int64_t fetched_at = 0;
    bool last_refresh_failed = false;
    uint64_t mirrored_n = 0;
    std::vector<std::pair<uint64_t, Bytes>> updates;  // prior_n, frame
    Bytes freshness_frame;
    Bytes root_frame;
  };
  bool refresh(const CaId& ca, Mirror& mirror, int64_t now);

  HttpExchange origin_;
  uint32_t ttl_;
  uint64_t origin_fetches_ = 0;
  std::map<CaId, Mirror> mirrors_;
};

// --- RA-side sync -------------------------------------------------------------

struct CaReplica {
  Dictionary dict;
  std::optional<SignedRoot> root;
  std::optional<FreshnessStatement> freshness;
  uint64_t confirmed_n = 0;  // valid consecutive revocations held
};

// Replica of every registered CA's dictionary, as held by one RA.
class ReplicaSet {
 public:
  explicit ReplicaSet(const Registry& registry);
  const CaReplica* find(const CaId& ca) const;
  CaReplica* find(const CaId& ca);
  const std::map<CaId, CaReplica>& all() const { return replicas_; }
  uint64_t storage_bytes() const;

 private:
  std::map<CaId, CaReplica> replicas_;
};

struct SyncStats {
  uint64_t bytes_downloaded = 0;
  uint32_t applied_messages = 0;
  bool edge_unreachable = false;
  bool rejected_message = false;  // desync or misbehaving CA; retried next round
  bool served_stale = false;
};

// Pulls new revocations and freshness statements (`HTTP GET`), applies them
// through apply_update, and advances the cursor only on acceptance.
class SyncClient {
 public:
  SyncClient(const Registry& registry, ReplicaSet& replicas);

  SyncStats sync_ca(const CaId& ca, const HttpExchange& edge, int64_t now);
  SyncStats sync_all(const HttpExchange& edge, int64_t now);

 private:
  const Registry& registry_;
  ReplicaSet& replicas_;
};

// Bytes an RA downloads per delta window over [from, to): issuance frames
// published in the window plus one freshness frame per CA per window.
std::vector<uint64_t> bandwidth_account(const DistributionPoint& dp, uint32_t delta,
                                        int64_t from, int64_t to);

}  // namespace ritm

#endif
