// Copyright 2026 The bassim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bassim/codec.hpp"

#include <algorithm>
#include <cmath>

#include "bassim/errors.hpp"

namespace bassim {
namespace {

// Ceiling that treats values within 1e-9 of an integer as that integer, so
// products such as 0.5 * log2(N) do not gain a spurious extra bit.
int stable_ceil(double v) {
  const double nearest = std::round(v);
  if (std::abs(v - nearest) < 1e-9) return static_cast<int>(nearest);
  return static_cast<int>(std::ceil(v));
}

void check_params(double N, double D) {
  if (!(N >= 4.0) || std::isinf(N)) throw DomainError("codec needs N >= 4");
  if (!(D > 0.0) || std::isinf(D)) throw DomainError("codec needs D > 0");
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitString::BitString(std::size_t zero_bits)
    : bytes_((zero_bits + 7) / 8, 0), size_(zero_bits) {}

bool BitString::bit(std::size_t pos) const {
  if (pos >= size_) throw ProtocolError("bit index out of range");
  return (bytes_[pos / 8] >> (7 - pos % 8)) & 1u;
}

void BitString::push_bit(bool value) {
  if (size_ % 8 == 0) bytes_.push_back(0);
  if (value) bytes_[size_ / 8] |= static_cast<std::uint8_t>(1u << (7 - size_ % 8));
  ++size_;
}

void BitString::push_bits(std::uint64_t value, int count) {
  for (int i = count - 1; i >= 0; --i) push_bit((value >> i) & 1u);
}

void BitString::append(const BitString& other) {
  for (std::size_t i = 0; i < other.size_; ++i) push_bit(other.bit(i));
}

std::uint64_t BitString::read_bits(std::size_t pos, int count) const {
  if (count < 0 || count > 64 || pos + static_cast<std::size_t>(count) > size_) {
    throw ProtocolError("bit range out of bounds");
  }
  std::uint64_t value = 0;
  for (int i = 0; i < count; ++i) value = (value << 1) | bit(pos + i);
  return value;
}

BitString BitString::slice(std::size_t pos, std::size_t count) const {
  if (pos + count > size_) throw ProtocolError("bit slice out of bounds");
  BitString out;
  for (std::size_t i = 0; i < count; ++i) out.push_bit(bit(pos + i));
  return out;
}

bool BitString::all_zero() const {
  return std::all_of(bytes_.begin(), bytes_.end(),
                     [](std::uint8_t b) { return b == 0; });
}

std::string BitString::to_binary() const {
  std::string out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out += bit(i) ? '1' : '0';
  return out;
}

BitString BitString::from_binary(std::string_view text) {
  BitString out;
  for (char c : text) {
    if (c != '0' && c != '1') throw ProtocolError("binary digits must be 0/1");
    out.push_bit(c == '1');
  }
  return out;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (std::uint8_t b : bytes_) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xf];
  }
  return out;
}

BitString BitString::from_hex(std::string_view hex, std::size_t bit_count) {
  if (hex.size() != 2 * ((bit_count + 7) / 8)) {
    throw ProtocolError("hex length does not match bit count");
  }
  BitString out;
  for (std::size_t i = 0; i < bit_count; ++i) {
    const int nibble = hex_value(hex[i / 4]);
    if (nibble < 0) throw ProtocolError("invalid hex digit");
    out.push_bit((nibble >> (3 - i % 4)) & 1);
  }
  return out;
}

int codeword_width(double N, double D) {
  check_params(N, D);
  const int width = stable_ceil((D + 0.5) * std::log2(N)) + 1;
  if (width > 64) throw DomainError("codeword wider than 64 bits");
  return width;
}

int scale_exponent(double N, double D) {
  check_params(N, D);
  return stable_ceil(D * std::log2(N));
}

BudgetedCodeword encode(double x, double N, double D) {
  if (!std::isfinite(x)) throw DomainError("cannot encode a non-finite value");
  BudgetedCodeword cw;
  cw.width = codeword_width(N, D);
  cw.scale_exponent = scale_exponent(N, D);
  cw.bits = BitString(static_cast<std::size_t>(cw.width));
  if (std::abs(x) > std::sqrt(N)) return cw;

  const int magnitude_bits = cw.width - 1;
  const double max_magnitude = std::ldexp(1.0, magnitude_bits) - 1.0;
  // Saturate: at |x| = sqrt(N) the scaled value can exceed the field by one.
  const double magnitude =
      std::min(std::floor(std::ldexp(std::abs(x), cw.scale_exponent)),
               max_magnitude);
  if (magnitude == 0.0) return cw;

  BitString bits;
  bits.push_bit(x >= 0.0);
  bits.push_bits(static_cast<std::uint64_t>(magnitude), magnitude_bits);
  cw.bits = std::move(bits);
  return cw;
}

double decode(const BudgetedCodeword& cw, double N, double D) {
  const int width = codeword_width(N, D);
  if (cw.width != width || cw.bits.size() != static_cast<std::size_t>(width)) {
    throw ProtocolError("codeword width " + std::to_string(cw.bits.size()) +
                        " does not match expected " + std::to_string(width));
  }
  if (cw.scale_exponent != scale_exponent(N, D)) {
    throw ProtocolError("codeword scale does not match (N, D)");
  }
  const std::uint64_t magnitude = cw.bits.read_bits(1, width - 1);
  if (magnitude == 0) return 0.0;
  const double value =
      std::ldexp(static_cast<double>(magnitude), -cw.scale_exponent);
  return cw.bits.bit(0) ? value : -value;
}

BitString encode_message(std::span<const double> values, double N, double D) {
  BitString out;
  for (double v : values) out.append(encode(v, N, D).bits);
  return out;
}

std::vector<double> decode_message(const BitString& bits, double N, double D) {
  const auto width = static_cast<std::size_t>(codeword_width(N, D));
  if (bits.size() % width != 0) {
    throw ProtocolError("message length " + std::to_string(bits.size()) +
                        " is not a multiple of codeword width " +
                        std::to_string(width));
  }
  std::vector<double> out;
  out.reserve(bits.size() / width);
  BudgetedCodeword cw;
  cw.width = static_cast<int>(width);
  cw.scale_exponent = scale_exponent(N, D);
  for (std::size_t pos = 0; pos < bits.size(); pos += width) {
    cw.bits = bits.slice(pos, width);
    out.push_back(decode(cw, N, D));
  }
  return out;
}

}  // namespace bassim
