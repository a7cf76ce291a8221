#include "doctest.h"
#include "ritm/ca.hpp"
#include "support/oracles.hpp"

using namespace ritm;
using namespace ritm::testing;

namespace {

SerialNumber sn(uint64_t v) { return SerialNumber::from_u64(v); }

struct Net {
  SeededRandom rng{404};
  uint32_t delta = 10;
  uint32_t m = 1024;
  std::vector<CertificationAuthority> cas;
  Registry registry;
  std::unique_ptr<DistributionPoint> dp;

  explicit Net(size_t n_cas) {
    for (size_t i = 0; i < n_cas; ++i) {
      CertificationAuthority ca(ca_id_from_u64(i + 1), keypair_from_seed(rng.key_seed()),
                                delta, m);
      registry.add(ca.record());
      cas.push_back(std::move(ca));
    }
    dp = std::make_unique<DistributionPoint>(registry);
    for (auto& ca : cas) {
      auto sr = ca.initialize(1000, rng);
      REQUIRE(dp->publish_initial_root(sr, 1000).ok());
    }
  }

  HttpExchange dp_exchange() {
    return [this](const HttpRequest& req) { return std::optional(dp->handle(req)); };
  }
};

}  // namespace

TEST_CASE("messages round-trip through framing") {
  Net net(1);
  auto msg = net.cas[0].revoke(std::vector{sn(0x111111), sn(0x222222)}, 1100, net.rng);
  REQUIRE(msg.ok());
  Bytes framed = frame_message(msg.value().to_bytes());
  auto frames = parse_frames(framed);
  REQUIRE(frames.has_value());
  REQUIRE(frames->size() == 1);
  auto parsed = IssuanceMessage::from_bytes((*frames)[0]);
  REQUIRE(parsed.ok());
  CHECK(parsed.value().to_bytes() == msg.value().to_bytes());

  Bytes truncated(framed.begin(), framed.end() - 3);
  CHECK_FALSE(parse_frames(truncated).has_value());
}

TEST_CASE("dp accepts the disseminated sequence of the worked example") {
  Net net(1);
  auto& ca = net.cas[0];
  int64_t t0 = 2000;

  // t0: three serials with a new signed root
  auto issue = ca.revoke(std::vector{sn(0xa1), sn(0xb2), sn(0xc3)}, t0, net.rng);
  REQUIRE(issue.ok());
  CHECK(net.dp->publish(issue.value(), t0).ok());

  // t0+delta, t0+2*delta: freshness statements H^{m-1}, H^{m-2}
  auto f1 = ca.refresh_statement(t0 + net.delta);
  REQUIRE(f1.has_value());
  CHECK(f1->statement.value != ca.current_root().anchor);
  CHECK(chain_evaluate(f1->statement.value, 1) == ca.current_root().anchor);
  CHECK(net.dp->publish(*f1, t0 + net.delta).ok());

  auto f2 = ca.refresh_statement(t0 + 2 * net.delta);
  REQUIRE(f2.has_value());
  CHECK(chain_evaluate(f2->statement.value, 2) == ca.current_root().anchor);
  CHECK(net.dp->publish(*f2, t0 + 2 * net.delta).ok());

  // t0+3*delta: one serial with a new root and fresh anchor
  auto old_anchor = ca.current_root().anchor;
  auto issue2 = ca.revoke(std::vector{sn(0xd4)}, t0 + 3 * net.delta, net.rng);
  REQUIRE(issue2.ok());
  CHECK(issue2.value().signed_root.n == 4);
  CHECK(issue2.value().signed_root.anchor != old_anchor);
  CHECK(net.dp->publish(issue2.value(), t0 + 3 * net.delta).ok());
}

TEST_CASE("dp rejects gaps, bad signatures, and bad chain links") {
  Net net(2);
  auto& ca = net.cas[0];
  auto first = ca.revoke(std::vector{sn(0x10)}, 1100, net.rng);
  REQUIRE(first.ok());

  // skipping the first message leaves a gap
  auto second = ca.revoke(std::vector{sn(0x20)}, 1200, net.rng);
  REQUIRE(second.ok());
  auto gap = net.dp->publish(second.value(), 1200);
  REQUIRE_FALSE(gap.ok());
  CHECK(gap.error() == PublishError::GapInSequence);

  CHECK(net.dp->publish(first.value(), 1100).ok());
  CHECK(net.dp->publish(second.value(), 1200).ok());

  // root computed over different content
  auto forged = ca.revoke(std::vector{sn(0x30)}, 1300, net.rng);
  REQUIRE(forged.ok());
  IssuanceMessage tampered = forged.value();
  tampered.serials[0] = sn(0x31);
  auto bad = net.dp->publish(tampered, 1300);
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.error() == PublishError::RootMismatch);

  // statement from a different chain
  FreshnessMessage wrong{ca.id(), {net.rng.digest()}};
  auto link = net.dp->publish(wrong, 1300);
  REQUIRE_FALSE(link.ok());
  CHECK(link.error() == PublishError::BadChainLink);

  // signature by the wrong CA
  IssuanceMessage cross = forged.value();
  cross.ca_id = net.cas[1].id();
  cross.signed_root.ca_id = net.cas[1].id();
  auto badsig = net.dp->publish(cross, 1300);
  REQUIRE_FALSE(badsig.ok());
  CHECK(badsig.error() == PublishError::BadSignature);
}

TEST_CASE("edge cache: TTL zero is pass-through, within TTL one fetch") {
  Net net(1);
  auto& ca = net.cas[0];
  REQUIRE(net.dp->publish(ca.revoke(std::vector{sn(0x77)}, 1100, net.rng).value(), 1100).ok());

  EdgeServer passthrough(net.dp_exchange(), 0);
  auto req = HttpRequest{"GET", updates_path(ca.id(), 0)};
  passthrough.handle(req, 2000);
  passthrough.handle(req, 2000);
  CHECK(passthrough.origin_fetches() == 2);

  EdgeServer cached(net.dp_exchange(), 30);
  cached.handle(req, 2000);
  cached.handle(req, 2010);  // within TTL
  CHECK(cached.origin_fetches() == 1);
  cached.handle(req, 2030);  // expired
  CHECK(cached.origin_fetches() == 2);
}

TEST_CASE("edge serves stale data with a flag when the dp is unreachable") {
  Net net(1);
  auto& ca = net.cas[0];
  REQUIRE(net.dp->publish(ca.revoke(std::vector{sn(0x55)}, 1100, net.rng).value(), 1100).ok());

  bool reachable = true;
  HttpExchange flaky = [&](const HttpRequest& req) -> std::optional<HttpResponse> {
    if (!reachable) return std::nullopt;
    return net.dp->handle(req);
  };
  EdgeServer edge(flaky, 0);
  auto req = HttpRequest{"GET", updates_path(ca.id(), 0)};
  auto fresh = edge.handle(req, 2000);
  CHECK(fresh.status == 200);
  CHECK_FALSE(fresh.stale);
  CHECK_FALSE(fresh.body.empty());

  reachable = false;
  auto stale = edge.handle(req, 2100);
  CHECK(stale.status == 200);
  CHECK(stale.stale);
  CHECK(stale.body == fresh.body);
}

TEST_CASE("ra sync: bootstrap, steady state, and convergence after a lost response") {
  Net net(1);
  auto& ca = net.cas[0];
  int64_t t = 1100;
  REQUIRE(net.dp->publish(ca.revoke(std::vector{sn(0x1), sn(0x2)}, t, net.rng).value(), t).ok());
  REQUIRE(net.dp->publish(ca.revoke(std::vector{sn(0x3)}, t + 1, net.rng).value(), t + 1).ok());

  ReplicaSet replicas(net.registry);
  SyncClient sync(net.registry, replicas);

  // bootstrap from zero: full history, root matches the CA's
  auto stats = sync.sync_ca(ca.id(), net.dp_exchange(), t + 2);
  CHECK(stats.applied_messages == 2);
  const CaReplica* rep = replicas.find(ca.id());
  REQUIRE(rep);
  CHECK(rep->confirmed_n == 3);
  CHECK(rep->dict.root() == ca.dictionary().root());

  // steady state: no new revocations, freshness only
  auto quiet = sync.sync_ca(ca.id(), net.dp_exchange(), t + 3);
  CHECK(quiet.applied_messages == 0);
  CHECK(quiet.bytes_downloaded == 4 + 28);

  // response lost entirely, then recovery on the next round
  int drop_next = 1;
  HttpExchange lossy = [&](const HttpRequest& req) -> std::optional<HttpResponse> {
    if (drop_next > 0) {
      --drop_next;
      return std::nullopt;
    }
    return net.dp->handle(req);
  };
  REQUIRE(net.dp->publish(ca.revoke(std::vector{sn(0x9)}, t + 5, net.rng).value(), t + 5).ok());
  auto lost = sync.sync_ca(ca.id(), lossy, t + 6);
  CHECK(lost.edge_unreachable);
  CHECK(replicas.find(ca.id())->confirmed_n == 3);
  auto recovered = sync.sync_ca(ca.id(), lossy, t + 7);
  CHECK(recovered.applied_messages == 1);
  CHECK(replicas.find(ca.id())->dict.root() == ca.dictionary().root());
}

TEST_CASE("ra sync is idempotent under duplicated and reordered frames") {
  Net net(1);
  auto& ca = net.cas[0];
  int64_t t = 1100;
  auto m1 = ca.revoke(std::vector{sn(0x11)}, t, net.rng).value();
  auto m2 = ca.revoke(std::vector{sn(0x22)}, t + 1, net.rng).value();
  REQUIRE(net.dp->publish(m1, t).ok());
  REQUIRE(net.dp->publish(m2, t + 1).ok());

  // adversarial edge: duplicates m1 and swaps the order
  HttpExchange weird = [&](const HttpRequest& req) -> std::optional<HttpResponse> {
    if (req.target.find("/updates") == std::string::npos) return net.dp->handle(req);
    HttpResponse resp;
    for (const auto* m : {&m2, &m1, &m1}) {
      Bytes frame = frame_message(m->to_bytes());
      resp.body.insert(resp.body.end(), frame.begin(), frame.end());
    }
    return resp;
  };

  ReplicaSet replicas(net.registry);
  SyncClient sync(net.registry, replicas);
  // first round: m2 arrives before m1 and cannot apply; nothing is confirmed
  sync.sync_ca(ca.id(), weird, t + 2);
  CHECK(replicas.find(ca.id())->confirmed_n == 0);
  // honest round afterwards converges
  sync.sync_ca(ca.id(), net.dp_exchange(), t + 3);
  CHECK(replicas.find(ca.id())->confirmed_n == 2);
  CHECK(replicas.find(ca.id())->dict.root() == ca.dictionary().root());
  // replaying the weird edge now is a no-op (duplicates skipped)
  auto again = sync.sync_ca(ca.id(), weird, t + 4);
  CHECK(again.applied_messages == 0);
  CHECK_FALSE(again.rejected_message);
  CHECK(replicas.find(ca.id())->confirmed_n == 2);
}

TEST_CASE("quiet-window sync keeps a fresh statement and an empty dict verifiable") {
  Net net(3);
  ReplicaSet replicas(net.registry);
  SyncClient sync(net.registry, replicas);
  int64_t t = 1000;
  // nothing ever issued; RAs bootstrap the registration roots
  auto stats = sync.sync_all(net.dp_exchange(), t + 1);
  CHECK(stats.applied_messages == 0);
  for (const auto& [id, rep] : replicas.all()) {
    REQUIRE(rep.root.has_value());
    CHECK(rep.root->n == 0);
    REQUIRE(rep.freshness.has_value());
    CHECK(freshness_current(*rep.freshness, *rep.root, t + 1, net.delta));
  }
  // periods pass; statements are replaced, never accumulated
  for (int period = 1; period <= 3; ++period) {
    int64_t now = 1000 + period * net.delta;
    for (auto& ca : net.cas) {
      auto fm = ca.refresh_statement(now);
      REQUIRE(fm.has_value());
      REQUIRE(net.dp->publish(*fm, now).ok());
    }
    sync.sync_all(net.dp_exchange(), now);
    for (const auto& [id, rep] : replicas.all())
      CHECK(freshness_current(*rep.freshness, *rep.root, now, net.delta));
  }
}

TEST_CASE("bandwidth accounting") {
  SUBCASE("zero CAs, zero bytes") {
    DistributionPoint dp{Registry{}};
    auto series = bandwidth_account(dp, 10, 0, 100);
    for (uint64_t b : series) CHECK(b == 0);
  }

  SUBCASE("quiet window is one framed statement per CA") {
    Net net(5);
    auto series = bandwidth_account(*net.dp, net.delta, 1000, 1000 + 3 * net.delta);
    REQUIRE(series.size() == 3);
    for (uint64_t b : series) CHECK(b == 5 * (4 + 28));
  }

  SUBCASE("an issuance adds exactly its framed size") {
    Net net(1);
    auto msg = net.cas[0].revoke(std::vector{sn(0x123456)}, 1005, net.rng);
    REQUIRE(msg.ok());
    REQUIRE(net.dp->publish(msg.value(), 1005).ok());
    auto series = bandwidth_account(*net.dp, net.delta, 1000, 1000 + 2 * net.delta);
    REQUIRE(series.size() == 2);
    CHECK(series[0] == (4 + 28) + 4 + msg.value().to_bytes().size());
    CHECK(series[1] == 4 + 28);
  }
}
