#include "ritm/ca.hpp"

namespace ritm {

CertificationAuthority::CertificationAuthority(CaId id, KeyPair keys, uint32_t delta,
                                               uint32_t m)
    : id_(id), keys_(std::move(keys)), delta_(delta), m_(m), dict_(id) {}

void CertificationAuthority::adopt_new_root(int64_t now, RandomSource& rng) {
  auto bundle =
      make_signed_root(keys_.secret_key, id_, dict_.root(), dict_.size(), now, m_, rng);
  root_ = bundle.signed_root;
  secret_ = bundle.secret;
}

SignedRoot CertificationAuthority::initialize(int64_t now, RandomSource& rng) {
  adopt_new_root(now, rng);
  return *root_;
}

Expected<IssuanceMessage, InsertError> CertificationAuthority::revoke(
    std::span<const SerialNumber> serials, int64_t now, RandomSource& rng) {
  auto next = dict_.insert(serials);
  if (!next.ok()) return next.error();
  dict_ = next.value();
  adopt_new_root(now, rng);
  IssuanceMessage msg;
  msg.ca_id = id_;
  msg.serials.assign(serials.begin(), serials.end());
  msg.signed_root = *root_;
  return msg;
}

std::optional<FreshnessMessage> CertificationAuthority::refresh_statement(int64_t now) {
  if (!root_ || !secret_) return std::nullopt;
  auto result = refresh(*secret_, *root_, now, delta_);
  if (std::holds_alternative<NeedNewRoot>(result)) return std::nullopt;
  return FreshnessMessage{id_, std::get<FreshnessStatement>(result)};
}

Expected<RevocationStatus, ProveError> CertificationAuthority::status_for(
    const SerialNumber& s, int64_t now, RandomSource& rng) {
  if (!root_ || !secret_) adopt_new_root(now, rng);
  auto result = refresh(*secret_, *root_, now, delta_);
  if (std::holds_alternative<NeedNewRoot>(result)) {
    adopt_new_root(now, rng);
    result = refresh(*secret_, *root_, now, delta_);
  }
  return prove_status(dict_, s, *root_, std::get<FreshnessStatement>(result));
}

}  // namespace ritm
