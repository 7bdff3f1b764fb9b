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

// Fixed-width finite-bit approximation of real numbers.
//
// Wire format of one codeword of width W = ceil((D + 1/2) log2 N) + 1:
//
//   bit 0        sign, 1 = non-negative
//   bits 1..W-1  big-endian unsigned magnitude floor(|x| 2^e),
//                e = ceil(D log2 N)
//
// A value is reconstructed as +-magnitude / 2^e. Magnitude zero is always
// sent as the all-zeros word, and so is any |x| > sqrt(N) (truncation
// sentinel). Messages are codewords concatenated without padding.

#ifndef BASSIM_CODEC_HPP_
#define BASSIM_CODEC_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bassim {

// Growable bit string. Bit 0 is the most significant bit of byte 0.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t zero_bits);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool bit(std::size_t pos) const;
  void push_bit(bool value);
  // Appends the low `count` bits of `value`, most significant first.
  void push_bits(std::uint64_t value, int count);
  void append(const BitString& other);
  // Reads `count` <= 64 bits starting at `pos` as a big-endian integer.
  std::uint64_t read_bits(std::size_t pos, int count) const;
  BitString slice(std::size_t pos, std::size_t count) const;

  bool all_zero() const;

  // '0'/'1' characters, one per bit.
  std::string to_binary() const;
  static BitString from_binary(std::string_view text);
  // Lowercase hex of the packed bytes (bit length is carried separately).
  std::string to_hex() const;
  static BitString from_hex(std::string_view hex, std::size_t bit_count);

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

struct BudgetedCodeword {
  BitString bits;
  int width = 0;
  int scale_exponent = 0;
};

int codeword_width(double N, double D);
// e = ceil(D log2 N).
int scale_exponent(double N, double D);

BudgetedCodeword encode(double x, double N, double D);
double decode(const BudgetedCodeword& cw, double N, double D);

// Concatenates codewords; all must share the same width.
BitString encode_message(std::span<const double> values, double N, double D);
// Splits a message of k * codeword_width(N, D) bits into k values.
std::vector<double> decode_message(const BitString& bits, double N, double D);

}  // namespace bassim

#endif  // BASSIM_CODEC_HPP_
