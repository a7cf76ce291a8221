#ifndef RITM_CRYPTO_HPP
#define RITM_CRYPTO_HPP

#include <array>
#include <cstdint>

#include "ritm/common.hpp"

namespace ritm {

// All digests in the system are SHA-256 truncated to its first 20 bytes.
inline constexpr size_t kDigestSize = 20;
using Digest = std::array<uint8_t, kDigestSize>;

inline constexpr size_t kSignatureSize = 64;
using Signature = std::array<uint8_t, kSignatureSize>;
using PublicKey = std::array<uint8_t, 32>;
using SecretKey = std::array<uint8_t, 64>;
using KeySeed = std::array<uint8_t, 32>;

Digest hash(ByteSpan data);

// H^k(seed); H^0(seed) = seed.
Digest chain_evaluate(const Digest& seed, uint64_t k);

struct KeyPair {
  PublicKey public_key;
  SecretKey secret_key;
};

KeyPair keypair_from_seed(const KeySeed& seed);
Signature sign(const SecretKey& sk, ByteSpan message);
bool verify_signature(const PublicKey& pk, ByteSpan message, const Signature& sig);

// Source of randomness, injectable so simulations stay deterministic.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(uint8_t* out, size_t len) = 0;

  Digest digest() {
    Digest d;
    fill(d.data(), d.size());
    return d;
  }
  KeySeed key_seed() {
    KeySeed s;
    fill(s.data(), s.size());
    return s;
  }
  uint64_t u64() {
    uint8_t b[8];
    fill(b, 8);
    uint64_t v = 0;
    for (uint8_t x : b) v = v << 8 | x;
    return v;
  }
  // Unbiased value in [0, bound).
  uint64_t below(uint64_t bound);
};

class SystemRandom : public RandomSource {
 public:
  void fill(uint8_t* out, size_t len) override;
};

class SeededRandom : public RandomSource {
 public:
  explicit SeededRandom(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  void fill(uint8_t* out, size_t len) override;
  uint64_t next();

 private:
  uint64_t state_;
};

}  // namespace ritm

#endif
