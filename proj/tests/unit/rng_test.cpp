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

#include "bassim/rng.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

namespace bassim {
namespace {

static_assert(std::uniform_random_bit_generator<PhiloxStream>);

// Random123 known-answer vector for Philox4x32-10 with zero key and counter.
TEST(PhiloxTest, ZeroKeyZeroCounterKnownAnswer) {
  PhiloxStream rng(0, 0, 0);
  EXPECT_EQ(rng(), 0x6627e8d5u);
  EXPECT_EQ(rng(), 0xe169c58du);
  EXPECT_EQ(rng(), 0xbc57ac4cu);
  EXPECT_EQ(rng(), 0x9b00dbd8u);
  EXPECT_EQ(rng.blocks_consumed(), 1u);
}

TEST(PhiloxTest, SameKeyAndStreamReplays) {
  PhiloxStream a(42, 3, 7);
  PhiloxStream b(42, 3, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(PhiloxTest, StreamsAreDistinct) {
  std::set<std::uint32_t> firsts;
  for (std::uint32_t s = 0; s < 64; ++s) {
    PhiloxStream rng(42, s);
    firsts.insert(rng());
  }
  EXPECT_EQ(firsts.size(), 64u);

  PhiloxStream a(42, 1, 0);
  PhiloxStream b(42, 1, 1);
  int equal = 0;
  for (int i = 0; i < 256; ++i) equal += a() == b();
  EXPECT_LT(equal, 2);
}

TEST(PhiloxTest, Uniform01MomentsAndRange) {
  PhiloxStream rng(2026, 0);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sumsq += u * u;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(var, 1.0 / 12.0, 2e-3);
}

TEST(DeriveSeedTest, DistinctInputsGiveDistinctSeeds) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t p = 0; p < 20; ++p) {
    for (std::uint64_t k = 0; k < 50; ++k) seeds.insert(derive_seed(7, p, k));
  }
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_EQ(derive_seed(7, 3, 4), derive_seed(7, 3, 4));
  EXPECT_NE(derive_seed(7, 3, 4), derive_seed(8, 3, 4));
}

}  // namespace
}  // namespace bassim
