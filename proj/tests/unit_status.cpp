#include <cmath>

#include "doctest.h"
#include "ritm/status.hpp"
#include "support/oracles.hpp"

using namespace ritm;
using namespace ritm::testing;

namespace {

struct World {
  SeededRandom rng{2024};
  KeyPair kp = keypair_from_seed(rng.key_seed());
  CaId ca = ca_id_from_u64(0x11);
  uint32_t delta = 10;
  uint32_t m = 64;
  int64_t t0 = 100000;

  Dictionary dict{CaId{}};
  SignedRoot sr;
  HashChainSecret secret;
  FreshnessStatement fs;

  explicit World(std::span<const SerialNumber> serials) {
    auto d = Dictionary(ca).insert(serials);
    REQUIRE(d.ok());
    dict = d.value();
    auto bundle = make_signed_root(kp.secret_key, ca, dict.root(), dict.size(), t0, m, rng);
    sr = bundle.signed_root;
    secret = bundle.secret;
    fs = std::get<FreshnessStatement>(refresh(secret, sr, t0, delta));
  }

  RevocationStatus status_for(const SerialNumber& s) {
    auto st = prove_status(dict, s, sr, fs);
    REQUIRE(st.ok());
    return st.value();
  }
};

SerialNumber sn(uint64_t v) { return SerialNumber::from_u64(v); }

}  // namespace

TEST_CASE("round-trip: present and absent statuses verify") {
  std::vector<SerialNumber> serials{sn(0x02), sn(0x05)};
  World w(serials);

  auto revoked = verify_status(w.status_for(sn(0x05)), sn(0x05), w.kp.public_key, w.t0, w.delta);
  CHECK(revoked.revoked());

  auto clean = verify_status(w.status_for(sn(0x03)), sn(0x03), w.kp.public_key, w.t0 + 5, w.delta);
  CHECK(clean.not_revoked());

  auto before = verify_status(w.status_for(sn(0x01)), sn(0x01), w.kp.public_key, w.t0, w.delta);
  CHECK(before.not_revoked());
  auto after = verify_status(w.status_for(sn(0x99)), sn(0x99), w.kp.public_key, w.t0, w.delta);
  CHECK(after.not_revoked());
}

TEST_CASE("empty dictionary: absence reduces to n = 0") {
  World w({});
  auto st = w.status_for(sn(0x42));
  CHECK(st.proof.leaves.empty());
  CHECK(verify_status(st, sn(0x42), w.kp.public_key, w.t0, w.delta).not_revoked());
}

TEST_CASE("staleness beyond the window invalidates the status") {
  std::vector<SerialNumber> serials{sn(0x02)};
  World w(serials);
  auto st = w.status_for(sn(0x07));
  CHECK(verify_status(st, sn(0x07), w.kp.public_key, w.t0 + w.delta, w.delta).not_revoked());
  auto stale = verify_status(st, sn(0x07), w.kp.public_key, w.t0 + 3 * w.delta, w.delta);
  CHECK(stale.invalid());
  CHECK(stale.reason == InvalidReason::StaleFreshness);
}

TEST_CASE("random digest never passes the chain check") {
  std::vector<SerialNumber> serials{sn(0x02)};
  World w(serials);
  auto st = w.status_for(sn(0x07));
  st.freshness.value = w.rng.digest();
  auto v = verify_status(st, sn(0x07), w.kp.public_key, w.t0, w.delta);
  CHECK(v.invalid());
  CHECK(v.reason == InvalidReason::StaleFreshness);
}

TEST_CASE("statuses from the verifier's future are rejected") {
  std::vector<SerialNumber> serials{sn(0x02)};
  World w(serials);
  auto st = w.status_for(sn(0x07));
  auto just_before = verify_status(st, sn(0x07), w.kp.public_key, w.t0 - 1, w.delta);
  CHECK(just_before.invalid());
  CHECK(just_before.reason == InvalidReason::StaleFreshness);
  // beyond the skew slack the guard rejects before any chain work
  auto far_future = verify_status(st, sn(0x07), w.kp.public_key,
                                  w.t0 - kClockSkewSlack - 1, w.delta);
  CHECK(far_future.invalid());
  CHECK(far_future.reason == InvalidReason::StaleFreshness);
}

TEST_CASE("serialization round-trips and strict parsing rejects slack") {
  SeededRandom rng(8);
  auto serials = distinct_serials(rng, 33, 1 << 24);
  World w(serials);
  for (const auto& query : {serials[4], sn(0x1234567), sn(1)}) {
    auto st = w.status_for(query);
    Bytes raw = st.to_bytes();
    auto parsed = RevocationStatus::from_bytes(raw);
    REQUIRE(parsed.ok());
    CHECK(parsed.value().to_bytes() == raw);
    CHECK(verify_status_bytes(raw, query, w.kp.public_key, w.t0, w.delta).kind ==
          verify_status(st, query, w.kp.public_key, w.t0, w.delta).kind);
    Bytes trailing = raw;
    trailing.push_back(0);
    CHECK_FALSE(RevocationStatus::from_bytes(trailing).ok());
    Bytes truncated(raw.begin(), raw.end() - 1);
    CHECK_FALSE(RevocationStatus::from_bytes(truncated).ok());
  }
}

TEST_CASE("proof size bound holds") {
  SeededRandom rng(9);
  for (size_t n : {1u, 2u, 7u, 64u, 255u, 1000u}) {
    auto serials = distinct_serials(rng, n, 1 << 24);
    World w(serials);
    double bound = 2.0 * 20.0 * std::ceil(std::log2(double(n == 1 ? 2 : n))) + 200;
    if (n == 1) bound = 200;
    for (int q = 0; q < 50; ++q) {
      auto query = SerialNumber::from_u64(rng.below(1 << 24));
      auto st = w.status_for(query);
      CHECK(double(st.to_bytes().size()) <= bound);
    }
  }
}

TEST_CASE("oracle equivalence on random dictionaries") {
  SeededRandom rng(10);
  for (int trial = 0; trial < 60; ++trial) {
    size_t n = rng.below(257);
    auto serials = distinct_serials(rng, n, 1 << 16);
    World w(serials);
    for (int q = 0; q < 40; ++q) {
      auto query = SerialNumber::from_u64(rng.below(1 << 16));
      auto verdict = verify_status(w.status_for(query), query, w.kp.public_key, w.t0, w.delta);
      bool expect = linear_scan_revoked(serials, query);
      CHECK_FALSE(verdict.invalid());
      CHECK(verdict.revoked() == expect);
    }
  }
}

TEST_CASE("any single-byte flip invalidates the status") {
  SeededRandom rng(12);
  auto serials = distinct_serials(rng, 40, 1 << 24);
  World w(serials);
  for (const auto& query : {serials[0], sn(0x999999)}) {
    Bytes raw = w.status_for(query).to_bytes();
    for (int trial = 0; trial < 200; ++trial) {
      Bytes mutated = raw;
      size_t at = rng.below(mutated.size());
      uint8_t bit = uint8_t(1 << rng.below(8));
      mutated[at] ^= bit;
      auto v = verify_status_bytes(mutated, query, w.kp.public_key, w.t0, w.delta);
      CHECK(v.invalid());
    }
  }
}

TEST_CASE("prove_status rejects a dictionary out of step with the root") {
  std::vector<SerialNumber> serials{sn(0x02)};
  World w(serials);
  auto grown = w.dict.insert(std::vector{sn(0x09)});
  REQUIRE(grown.ok());
  CHECK_FALSE(prove_status(grown.value(), sn(0x03), w.sr, w.fs).ok());
}
