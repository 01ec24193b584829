#pragma once

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iotauth/bits.hpp"

namespace iotauth {

// 256-bit digest. algorithm_id selects any EVP digest with 32-byte output;
// "sha-256" is the default.
struct HashDigest {
  std::array<std::uint8_t, 32> bytes{};
  std::string algorithm_id = "sha-256";

  friend bool operator==(const HashDigest&, const HashDigest&) = default;

  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(64);
    for (auto b : bytes) {
      s.push_back(digits[b >> 4]);
      s.push_back(digits[b & 0xf]);
    }
    return s;
  }
};

namespace detail {

inline const EVP_MD* resolve_digest(const std::string& algorithm_id) {
  std::string name;
  if (algorithm_id == "sha-256") name = "SHA256";
  else if (algorithm_id == "sha3-256") name = "SHA3-256";
  else if (algorithm_id == "blake2s256") name = "BLAKE2S256";
  else name = algorithm_id;
  const EVP_MD* md = EVP_get_digestbyname(name.c_str());
  if (md == nullptr)
    throw std::invalid_argument("unknown digest algorithm: " + algorithm_id);
  if (EVP_MD_size(md) != 32)
    throw std::invalid_argument("digest is not 256-bit: " + algorithm_id);
  return md;
}

}  // namespace detail

inline HashDigest hash_bytes(const std::uint8_t* data, std::size_t len,
                             const std::string& algorithm_id = "sha-256") {
  const EVP_MD* md = detail::resolve_digest(algorithm_id);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data, len) != 1)
    throw std::runtime_error("digest computation failed");
  HashDigest out;
  out.algorithm_id = algorithm_id;
  unsigned int written = 0;
  if (EVP_DigestFinal_ex(ctx.get(), out.bytes.data(), &written) != 1 ||
      written != out.bytes.size())
    throw std::runtime_error("digest finalization failed");
  return out;
}

inline HashDigest hash_bytes(const std::vector<std::uint8_t>& data,
                             const std::string& algorithm_id = "sha-256") {
  return hash_bytes(data.data(), data.size(), algorithm_id);
}

// Digest over a bit string: 64-bit big-endian length prefix, then the bits
// packed MSB-first, so strings differing only in trailing padding collide
// never.
inline HashDigest hash_bits(const BitString& bits,
                            const std::string& algorithm_id = "sha-256") {
  std::vector<std::uint8_t> buf;
  const std::uint64_t n = bits.size();
  for (int shift = 56; shift >= 0; shift -= 8)
    buf.push_back(static_cast<std::uint8_t>((n >> shift) & 0xff));
  const auto packed = bits.packed_bytes();
  buf.insert(buf.end(), packed.begin(), packed.end());
  return hash_bytes(buf, algorithm_id);
}

constexpr std::size_t kDigestBits = 256;

}  // namespace iotauth
