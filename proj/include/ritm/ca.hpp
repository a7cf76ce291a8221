#ifndef RITM_CA_HPP
#define RITM_CA_HPP

#include "ritm/dissemination.hpp"

namespace ritm {

// Dictionary owner: holds the signing key and the live hash-chain secret,
// and produces the messages the dissemination network carries.
class CertificationAuthority {
 public:
  CertificationAuthority(CaId id, KeyPair keys, uint32_t delta, uint32_t m);

  // Signed root over the empty dictionary, published at registration so the
  // CA can prove freshness before its first revocation.
  SignedRoot initialize(int64_t now, RandomSource& rng);

  Expected<IssuanceMessage, InsertError> revoke(std::span<const SerialNumber> serials,
                                                int64_t now, RandomSource& rng);

  // Statement for the current period; nullopt when the chain is exhausted
  // and no revocation is pending to carry a fresh root.
  std::optional<FreshnessMessage> refresh_statement(int64_t now);

  // Local prove path (Fig. 3 prove over the CA's own copy); rolls the chain
  // if it has run out.
  Expected<RevocationStatus, ProveError> status_for(const SerialNumber& s, int64_t now,
                                                    RandomSource& rng);

  const CaId& id() const { return id_; }
  const PublicKey& public_key() const { return keys_.public_key; }
  uint32_t delta() const { return delta_; }
  uint32_t chain_length() const { return m_; }
  const Dictionary& dictionary() const { return dict_; }
  const SignedRoot& current_root() const { return *root_; }
  bool initialized() const { return root_.has_value(); }
  CaRecord record() const { return CaRecord{id_, keys_.public_key, delta_}; }

 private:
  void adopt_new_root(int64_t now, RandomSource& rng);

  CaId id_;
  KeyPair keys_;
  uint32_t delta_;
  uint32_t m_;
  Dictionary dict_;
  std::optional<SignedRoot> root_;
  std::optional<HashChainSecret> secret_;
};

}  // namespace ritm

#endif
