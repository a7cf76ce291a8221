#include "ritm/dissemination.hpp"

#include <charconv>

namespace ritm {

Bytes IssuanceMessage::to_bytes() const {
  Bytes out;
  out.insert(out.end(), ca_id.begin(), ca_id.end());
  put_u32(out, uint32_t(serials.size()));
  for (const SerialNumber& s : serials) {
    out.push_back(uint8_t(s.bytes().size()));
    out.insert(out.end(), s.bytes().begin(), s.bytes().end());
  }
  Bytes sr = signed_root.to_bytes();
  out.insert(out.end(), sr.begin(), sr.end());
  return out;
}

Expected<IssuanceMessage, ParseError> IssuanceMessage::from_bytes(ByteSpan raw) {
  ByteReader rd(raw);
  IssuanceMessage msg;
  rd.fill(msg.ca_id);
  uint32_t count = rd.u32();
  if (!rd.ok() || count > (1u << 24)) return ParseError::Malformed;
  msg.serials.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    uint8_t len = rd.u8();
    if (!rd.ok() || len == 0 || len > kMaxSerialSize) return ParseError::Malformed;
    auto s = SerialNumber::from_bytes(rd.bytes(len));
    if (!rd.ok() || !s.ok()) return ParseError::Malformed;
    msg.serials.push_back(s.value());
  }
  auto sr = SignedRoot::from_bytes(rd.bytes(kSignedRootSize));
  if (!rd.ok() || !sr.ok() || !rd.at_end()) return ParseError::Malformed;
  msg.signed_root = sr.value();
  if (!(msg.signed_root.ca_id == msg.ca_id)) return ParseError::Malformed;
  return msg;
}

Bytes FreshnessMessage::to_bytes() const {
  Bytes out;
  out.insert(out.end(), ca_id.begin(), ca_id.end());
  out.insert(out.end(), statement.value.begin(), statement.value.end());
  return out;
}

Expected<FreshnessMessage, ParseError> FreshnessMessage::from_bytes(ByteSpan raw) {
  if (raw.size() != 28) return ParseError::Malformed;
  ByteReader rd(raw);
  FreshnessMessage msg;
  rd.fill(msg.ca_id);
  rd.fill(msg.statement.value);
  return msg;
}

Bytes frame_message(ByteSpan payload) {
  Bytes out;
  put_u32(out, uint32_t(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::optional<std::vector<Bytes>> parse_frames(ByteSpan stream) {
  std::vector<Bytes> out;
  ByteReader rd(stream);
  while (!rd.at_end()) {
    uint32_t len = rd.u32();
    ByteSpan body = rd.bytes(len);
    if (!rd.ok()) return std::nullopt;
    out.emplace_back(body.begin(), body.end());
  }
  return out;
}

std::string updates_path(const CaId& ca, uint64_t from) {
  return "/dict/" + ca_id_hex(ca) + "/updates?from=" + std::to_string(from);
}
std::string freshness_path(const CaId& ca) { return "/dict/" + ca_id_hex(ca) + "/freshness"; }
std::string root_path(const CaId& ca) { return "/dict/" + ca_id_hex(ca) + "/root"; }

Expected<Dictionary, UpdateError> apply_update(const Dictionary& copy,
                                               std::span<const SerialNumber> serials,
                                               const SignedRoot& sr,
                                               const PublicKey& ca_key,
                                               std::optional<int64_t> current_root_time,
                                               int64_t now) {
  if (!verify_signed_root(sr, ca_key)) return UpdateError::BadSignature;
  if (current_root_time && sr.timestamp < *current_root_time)
    return UpdateError::StaleTimestamp;
  if (sr.timestamp > now + kClockSkewSlack) return UpdateError::StaleTimestamp;
  if (sr.n != copy.size() + serials.size()) return UpdateError::CountMismatch;
  auto next = copy.insert(serials);
  if (!next.ok()) return UpdateError::DuplicateSerial;
  if (next.value().root() != sr.root) return UpdateError::RootMismatch;
  return next.value();
}

const char* to_string(PublishError e) {
  switch (e) {
    case PublishError::UnknownCa: return "UnknownCa";
    case PublishError::EmptyBatch: return "EmptyBatch";
    case PublishError::BadSignature: return "BadSignature";
    case PublishError::GapInSequence: return "GapInSequence";
    case PublishError::BadChainLink: return "BadChainLink";
    case PublishError::RootMismatch: return "RootMismatch";
    case PublishError::StaleTimestamp: return "StaleTimestamp";
    case PublishError::DuplicateSerial: return "DuplicateSerial";
  }
  return "?";
}

DistributionPoint::DistributionPoint(Registry registry) : registry_(std::move(registry)) {
  for (const auto& [id, rec] : registry_.all()) {
    UpdateLog log{Dictionary(id), std::nullopt, std::nullopt, {}};
    logs_.emplace(id, std::move(log));
  }
}

Expected<Unit, PublishError> DistributionPoint::publish(const IssuanceMessage& msg,
                                                        int64_t now) {
  const CaRecord* rec = registry_.find(msg.ca_id);
  auto it = logs_.find(msg.ca_id);
  if (!rec || it == logs_.end()) return PublishError::UnknownCa;
  if (msg.serials.empty()) return PublishError::EmptyBatch;
  UpdateLog& log = it->second;
  uint64_t prior = log.replica.size();
  std::optional<int64_t> prev_time;
  if (log.root) prev_time = log.root->timestamp;
  auto updated = apply_update(log.replica, msg.serials, msg.signed_root,
                              rec->public_key, prev_time, now);
  if (!updated.ok()) {
    switch (updated.error()) {
      case UpdateError::BadSignature: return PublishError::BadSignature;
      case UpdateError::StaleTimestamp: return PublishError::StaleTimestamp;
      case UpdateError::CountMismatch: return PublishError::GapInSequence;
      case UpdateError::RootMismatch: return PublishError::RootMismatch;
      case UpdateError::DuplicateSerial: return PublishError::DuplicateSerial;
    }
  }
  log.replica = updated.value();
  log.root = msg.signed_root;
  // A new signed root is its own period-0 freshness statement.
  log.freshness = FreshnessMessage{msg.ca_id, {msg.signed_root.anchor}};
  log.entries.push_back(LogEntry{now, prior, msg});
  return Unit{};
}

Expected<Unit, PublishError> DistributionPoint::publish_initial_root(const SignedRoot& sr,
                                                                     int64_t now) {
  const CaRecord* rec = registry_.find(sr.ca_id);
  auto it = logs_.find(sr.ca_id);
  if (!rec || it == logs_.end()) return PublishError::UnknownCa;
  UpdateLog& log = it->second;
  if (!log.entries.empty() || sr.n != 0 || sr.root != log.replica.root())
    return PublishError::RootMismatch;
  if (!verify_signed_root(sr, rec->public_key)) return PublishError::BadSignature;
  if (sr.timestamp > now + kClockSkewSlack) return PublishError::StaleTimestamp;
  if (log.root && sr.timestamp < log.root->timestamp) return PublishError::StaleTimestamp;
  log.root = sr;
  log.freshness = FreshnessMessage{sr.ca_id, {sr.anchor}};
  return Unit{};
}

Expected<Unit, PublishError> DistributionPoint::publish(const FreshnessMessage& msg,
                                                        int64_t now) {
  const CaRecord* rec = registry_.find(msg.ca_id);
  auto it = logs_.find(msg.ca_id);
  if (!rec || it == logs_.end()) return PublishError::UnknownCa;
  UpdateLog& log = it->second;
  if (!log.root || !freshness_current(msg.statement, *log.root, now, rec->delta))
    return PublishError::BadChainLink;
  log.freshness = msg;
  return Unit{};
}

namespace {

struct ParsedPath {
  CaId ca;
  std::string endpoint;
  uint64_t from = 0;
};

std::optional<ParsedPath> parse_dict_path(const std::string& target) {
  if (!target.starts_with("/dict/")) return std::nullopt;
  std::string rest = target.substr(6);
  auto slash = rest.find('/');
  if (slash == std::string::npos) return std::nullopt;
  auto ca = ca_id_from_hex(rest.substr(0, slash));
  if (!ca) return std::nullopt;
  ParsedPath parsed;
  parsed.ca = *ca;
  std::string endpoint = rest.substr(slash + 1);
  auto query = endpoint.find('?');
  if (query != std::string::npos) {
    std::string qs = endpoint.substr(query + 1);
    endpoint.resize(query);
    if (!qs.starts_with("from=")) return std::nullopt;
    const char* begin = qs.data() + 5;
    const char* end = qs.data() + qs.size();
    auto [ptr, ec] = std::from_chars(begin, end, parsed.from);
    if (ec != std::errc() || ptr != end) return std::nullopt;
  }
  parsed.endpoint = endpoint;
  return parsed;
}

}  // namespace

HttpResponse DistributionPoint::handle(const HttpRequest& request) const {
  if (request.method != "GET") return HttpResponse{405, false, {}};
  auto parsed = parse_dict_path(request.target);
  if (!parsed) return HttpResponse{400, false, {}};
  auto it = logs_.find(parsed->ca);
  if (it == logs_.end()) return HttpResponse{404, false, {}};
  const UpdateLog& log = it->second;
  HttpResponse resp;
  if (parsed->endpoint == "updates") {
    for (const LogEntry& entry : log.entries) {
      if (entry.prior_n < parsed->from) continue;
      Bytes frame = frame_message(entry.message.to_bytes());
      resp.body.insert(resp.body.end(), frame.begin(), frame.end());
    }
    return resp;
  }
  if (parsed->endpoint == "freshness") {
    if (!log.freshness) return HttpResponse{404, false, {}};
    resp.body = frame_message(log.freshness->to_bytes());
    return resp;
  }
  if (parsed->endpoint == "root") {
    if (!log.root) return HttpResponse{404, false, {}};
    resp.body = frame_message(log.root->to_bytes());
    return resp;
  }
  return HttpResponse{400, false, {}};
}

const SignedRoot* DistributionPoint::current_root(const CaId& ca) const {
  auto it = logs_.find(ca);
  if (it == logs_.end() || !it->second.root) return nullptr;
  return &*it->second.root;
}

uint64_t DistributionPoint::published_n(const CaId& ca) const {
  auto it = logs_.find(ca);
  return it == logs_.end() ? 0 : it->second.replica.size();
}

const std::vector<DistributionPoint::LogEntry>* DistributionPoint::log(const CaId& ca) const {
  auto it = logs_.find(ca);
  return it == logs_.end() ? nullptr : &it->second.entries;
}

EdgeServer::EdgeServer(HttpExchange origin, uint32_t ttl_seconds)
    : origin_(std::move(origin)), ttl_(ttl_seconds) {}

bool EdgeServer::refresh(const CaId& ca, Mirror& mirror, int64_t now) {
  ++origin_fetches_;
  auto updates = origin_(HttpRequest{"GET", updates_path(ca, mirror.mirrored_n)});
  if (!updates) {
    mirror.last_refresh_failed = true;
    return false;
  }
  if (updates->status == 200) {
    auto frames = parse_frames(updates->body);
    if (frames) {
      for (const Bytes& frame : *frames) {
        auto msg = IssuanceMessage::from_bytes(frame);
        if (!msg.ok()) continue;  // edge is untrusted plumbing, skip garbage
        uint64_t prior = msg.value().signed_root.n - msg.value().serials.size();
        if (prior < mirror.mirrored_n) continue;
        mirror.updates.emplace_back(prior, frame_message(frame));
        mirror.mirrored_n = msg.value().signed_root.n;
      }
    }
  }
  auto fresh = origin_(HttpRequest{"GET", freshness_path(ca)});
  if (fresh && fresh->status == 200) mirror.freshness_frame = fresh->body;
  auto root = origin_(HttpRequest{"GET", root_path(ca)});
  if (root && root->status == 200) mirror.root_frame = root->body;
  mirror.have = true;
  mirror.fetched_at = now;
  mirror.last_refresh_failed = false;
  return true;
}

HttpResponse EdgeServer::handle(const HttpRequest& request, int64_t now) {
  if (request.method != "GET") return HttpResponse{405, false, {}};
  auto parsed = parse_dict_path(request.target);
  if (!parsed) return HttpResponse{400, false, {}};
  Mirror& mirror = mirrors_[parsed->ca];
  if (!mirror.have || ttl_ == 0 || now - mirror.fetched_at >= int64_t(ttl_))
    refresh(parsed->ca, mirror, now);
  if (!mirror.have) return HttpResponse{503, false, {}};
  HttpResponse resp;
  resp.stale = mirror.last_refresh_failed;
  if (parsed->endpoint == "updates") {
    for (const auto& [prior, frame] : mirror.updates) {
      if (prior < parsed->from) continue;
      resp.body.insert(resp.body.end(), frame.begin(), frame.end());
    }
    return resp;
  }
  if (parsed->endpoint == "freshness") {
    if (mirror.freshness_frame.empty()) return HttpResponse{404, resp.stale, {}};
    resp.body = mirror.freshness_frame;
    return resp;
  }
  if (parsed->endpoint == "root") {
    if (mirror.root_frame.empty()) return HttpResponse{404, resp.stale, {}};
    resp.body = mirror.root_frame;
    return resp;
  }
  return HttpResponse{400, false, {}};
}

ReplicaSet::ReplicaSet(const Registry& registry) {
  for (const auto& [id, rec] : registry.all())
    replicas_.emplace(id, CaReplica{Dictionary(id), std::nullopt, std::nullopt, 0});
}

const CaReplica* ReplicaSet::find(const CaId& ca) const {
  auto it = replicas_.find(ca);
  return it == replicas_.end() ? nullptr : &it->second;
}

CaReplica* ReplicaSet::find(const CaId& ca) {
  auto it = replicas_.find(ca);
  return it == replicas_.end() ? nullptr : &it->second;
}

uint64_t ReplicaSet::storage_bytes() const {
  uint64_t total = 0;
  for (const auto& [id, rep] : replicas_) total += rep.dict.storage_bytes();
  return total;
}

SyncClient::SyncClient(const Registry& registry, ReplicaSet& replicas)
    : registry_(registry), replicas_(replicas) {}

SyncStats SyncClient::sync_ca(const CaId& ca, const HttpExchange& edge, int64_t now) {
  SyncStats stats;
  const CaRecord* rec = registry_.find(ca);
  CaReplica* rep = replicas_.find(ca);
  if (!rec || !rep) return stats;

  auto updates = edge(HttpRequest{"GET", updates_path(ca, rep->confirmed_n)});
  if (!updates) {
    stats.edge_unreachable = true;
    return stats;
  }
  stats.served_stale = updates->stale;
  stats.bytes_downloaded += updates->body.size();
  if (updates->status == 200) {
    auto frames = parse_frames(updates->body);
    if (!frames) {
      stats.rejected_message = true;
    } else {
      for (const Bytes& frame : *frames) {
        auto msg = IssuanceMessage::from_bytes(frame);
        if (!msg.ok() || !(msg.value().ca_id == ca)) {
          stats.rejected_message = true;
          break;
        }
        const IssuanceMessage& im = msg.value();
        if (im.signed_root.n <= rep->confirmed_n) continue;  // duplicate, ignore
        std::optional<int64_t> prev_time;
        if (rep->root) prev_time = rep->root->timestamp;
        auto next = apply_update(rep->dict, im.serials, im.signed_root,
                                 rec->public_key, prev_time, now);
        if (!next.ok()) {
          // Desync or misbehaving CA: keep the confirmed prefix and retry
          // from confirmed_n on the next round.
          stats.rejected_message = true;
          break;
        }
        rep->dict = next.value();
        rep->root = im.signed_root;
        rep->freshness = FreshnessStatement{im.signed_root.anchor};
        rep->confirmed_n = im.signed_root.n;
        ++stats.applied_messages;
      }
    }
  }

  if (!rep->root) {
    // Bootstrap for a CA that has never issued: adopt its registration-time
    // root over the empty dictionary so freshness statements can verify.
    auto root = edge(HttpRequest{"GET", root_path(ca)});
    if (root && root->status == 200) {
      stats.bytes_downloaded += root->body.size();
      auto frames = parse_frames(root->body);
      if (frames && frames->size() == 1) {
        auto sr = SignedRoot::from_bytes((*frames)[0]);
        if (sr.ok() && sr.value().ca_id == ca && sr.value().n == 0 &&
            sr.value().root == rep->dict.root() &&
            verify_signed_root(sr.value(), rec->public_key)) {
          rep->root = sr.value();
          rep->freshness = FreshnessStatement{sr.value().anchor};
        }
      }
    }
  }

  auto fresh = edge(HttpRequest{"GET", freshness_path(ca)});
  if (!fresh) {
    stats.edge_unreachable = true;
    return stats;
  }
  stats.bytes_downloaded += fresh->body.size();
  if (fresh->status == 200 && rep->root) {
    auto frames = parse_frames(fresh->body);
    if (frames && frames->size() == 1) {
      auto msg = FreshnessMessage::from_bytes((*frames)[0]);
      if (msg.ok() && msg.value().ca_id == ca &&
          freshness_current(msg.value().statement, *rep->root, now, rec->delta)) {
        rep->freshness = msg.value().statement;
      }
    }
  }
  return stats;
}

SyncStats SyncClient::sync_all(const HttpExchange& edge, int64_t now) {
  SyncStats total;
  for (const auto& [id, rec] : registry_.all()) {
    SyncStats one = sync_ca(id, edge, now);
    total.bytes_downloaded += one.bytes_downloaded;
    total.applied_messages += one.applied_messages;
    total.edge_unreachable |= one.edge_unreachable;
    total.rejected_message |= one.rejected_message;
    total.served_stale |= one.served_stale;
  }
  return total;
}

std::vector<uint64_t> bandwidth_account(const DistributionPoint& dp, uint32_t delta,
                                        int64_t from, int64_t to) {
  if (delta == 0 || to <= from) return {};
  size_t windows = size_t((to - from + delta - 1) / delta);
  std::vector<uint64_t> series(windows, 0);
  uint64_t freshness_frame_size = 4 + 28;
  size_t n_cas = dp.registry().all().size();
  for (auto& bytes : series) bytes = freshness_frame_size * n_cas;
  for (const auto& [id, rec] : dp.registry().all()) {
    const auto* entries = dp.log(id);
    if (!entries) continue;
    for (const auto& entry : *entries) {
      if (entry.published_at < from || entry.published_at >= to) continue;
      size_t w = size_t((entry.published_at - from) / delta);
      series[w] += 4 + entry.message.to_bytes().size();
    }
  }
  return series;
}

}  // namespace ritm
