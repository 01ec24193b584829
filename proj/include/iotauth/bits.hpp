#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iotauth {

// Sequence of 0/1 values. Packed byte order is MSB-first so "10000000"
// becomes 0x80.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
      if (b > 1) throw std::invalid_argument("BitString: values must be 0/1");
    }
  }

  static BitString from_string(std::string_view s) {
    BitString out;
    out.bits_.reserve(s.size());
    for (char c : s) {
      if (c != '0' && c != '1')
        throw std::invalid_argument("BitString: expected '0'/'1'");
      out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
  }

  void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  std::size_t count_ones() const {
    return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0});
  }
  bool all_zero() const { return count_ones() == 0; }

  BitString prefix(std::size_t n) const {
    if (n > bits_.size()) throw std::out_of_range("BitString::prefix");
    return BitString{std::vector<std::uint8_t>(bits_.begin(), bits_.begin() + n)};
  }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  // MSB-first packing, zero-padded in the low bits of the final byte.
  std::vector<std::uint8_t> packed_bytes() const {
    std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return out;
  }

  const std::vector<std::uint8_t>& raw() const { return bits_; }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Fraction of positions where two equal-length bit strings differ.
inline double disagreement_rate(const BitString& a, const BitString& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("disagreement_rate: length mismatch");
  if (a.empty()) return 0.0;
  std::size_t diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] != b[i];
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

}  // namespace iotauth
