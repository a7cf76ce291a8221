#include "ritm/crypto.hpp"

#include <sodium.h>

#include <mutex>
#include <stdexcept>

namespace ritm {

namespace {
void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
  });
}
}  // namespace

Digest hash(ByteSpan data) {
  ensure_sodium();
  unsigned char full[crypto_hash_sha256_BYTES];
  crypto_hash_sha256(full, data.data(), data.size());
  Digest out;
  std::memcpy(out.data(), full, kDigestSize);
  return out;
}

Digest chain_evaluate(const Digest& seed, uint64_t k) {
  Digest v = seed;
  for (uint64_t i = 0; i < k; ++i) v = hash(ByteSpan(v.data(), v.size()));
  return v;
}

KeyPair keypair_from_seed(const KeySeed& seed) {
  ensure_sodium();
  KeyPair kp;
  crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed.data());
  return kp;
}

Signature sign(const SecretKey& sk, ByteSpan message) {
  ensure_sodium();
  Signature sig;
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), sk.data());
  return sig;
}

bool verify_signature(const PublicKey& pk, ByteSpan message, const Signature& sig) {
  ensure_sodium();
  return crypto_sign_verify_detached(sig.data(), message.data(), message.size(),
                                     pk.data()) == 0;
}

uint64_t RandomSource::below(uint64_t bound) {
  if (bound == 0) return 0;
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = u64();
  } while (v >= limit);
  return v % bound;
}

void SystemRandom::fill(uint8_t* out, size_t len) {
  ensure_sodium();
  randombytes_buf(out, len);
}

uint64_t SeededRandom::next() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void SeededRandom::fill(uint8_t* out, size_t len) {
  size_t i = 0;
  while (i < len) {
    uint64_t v = next();
    for (int b = 7; b >= 0 && i < len; --b) out[i++] = uint8_t(v >> (8 * b));
  }
}

}  // namespace ritm
