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

#include "bassim/protocol.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "bassim/bass.hpp"
#include "bassim/errors.hpp"

namespace bassim {
namespace {

ModelSpec zero_gaussian() {
  return ModelSpec(ModelKind::kGaussianRegression, CoefficientTable{});
}

MachineMessage message_of(std::int64_t machine, const std::vector<double>& values,
                          double N) {
  MachineMessage msg;
  msg.machine = machine;
  msg.bits = encode_message(values, N, kProtocolPrecision);
  msg.bit_count = static_cast<std::int64_t>(msg.bits.size());
  return msg;
}

TEST(BlockAssignmentTest, FourMachinesPairsOfThree) {
  const BlockAssignment a = make_block_assignment(64, 4, 2, 3, 4);
  ASSERT_EQ(a.blocks.size(), 2u);
  EXPECT_EQ(a.blocks[0].first_machine, 1);
  EXPECT_EQ(a.blocks[0].last_machine, 2);
  EXPECT_EQ(a.blocks[1].first_machine, 3);
  EXPECT_EQ(a.blocks[1].last_machine, 4);
  // Slot 0 carries the father coefficient, so block 1 covers flat {0, 1, 2}.
  EXPECT_EQ(a.blocks[0].slot_begin, 0);
  EXPECT_EQ(a.blocks[0].coverage_end, 3);
  EXPECT_EQ(a.blocks[1].slot_begin, 3);
  EXPECT_EQ(a.blocks[1].coverage_end, 6);
  EXPECT_EQ(a.assigned_count(), 6);
  EXPECT_EQ(a.width, 9);
  EXPECT_EQ(a.bits_per_machine(), 27);
}

TEST(BlockAssignmentTest, OneBlockWhenKappaIsM) {
  const BlockAssignment a = make_block_assignment(64, 8, 8, 5, 3);
  ASSERT_EQ(a.blocks.size(), 1u);
  EXPECT_EQ(a.blocks[0].members(), 8);
  EXPECT_EQ(a.blocks[0].coverage_end, 5);
}

TEST(BlockAssignmentTest, PartialLastBlockAndClippedCoverage) {
  const BlockAssignment a = make_block_assignment(64, 7, 3, 6, 2);
  ASSERT_EQ(a.blocks.size(), 3u);
  EXPECT_EQ(a.blocks[2].first_machine, 7);
  EXPECT_EQ(a.blocks[2].members(), 1);
  // flat_limit = 8: block 2 covers [6, 8), block 3 nothing.
  EXPECT_EQ(a.flat_limit, 8);
  EXPECT_EQ(a.blocks[1].coverage_end, 8);
  EXPECT_EQ(a.blocks[2].coverage_end, a.blocks[2].slot_begin);
  EXPECT_EQ(a.assigned_count(), 8);
}

TEST(BlockAssignmentTest, AssignedCountFormulaAndDisjointness) {
  for (std::int64_t m : {1, 2, 5, 16, 33}) {
    for (std::int64_t kappa = 1; kappa <= m; ++kappa) {
      for (std::int64_t q : {1, 2, 7, 64}) {
        for (int j_n : {0, 3, 6}) {
          const BlockAssignment a = make_block_assignment(128, m, kappa, q, j_n);
          const std::int64_t blocks = (m + kappa - 1) / kappa;
          ASSERT_EQ(a.assigned_count(), std::min(blocks * q, std::int64_t{1} << (j_n + 1)));
          std::set<std::int64_t> seen;
          for (const Block& b : a.blocks) {
            for (std::int64_t t = b.slot_begin; t < b.coverage_end; ++t) {
              ASSERT_TRUE(seen.insert(t).second) << "flat " << t << " assigned twice";
            }
          }
          // Coverage is a prefix of the flat indices.
          if (!seen.empty()) ASSERT_EQ(*seen.rbegin() + 1, static_cast<std::int64_t>(seen.size()));
          for (std::int64_t k = 1; k <= m; ++k) ASSERT_TRUE(a.block_of(k).contains(k));
        }
      }
    }
  }
}

TEST(AssignBlocksTest, UsesKappaAndResolution) {
  const BlockAssignment a = assign_blocks(1024, 16, 4096.0, 0.5);
  EXPECT_EQ(a.kappa, 16);
  EXPECT_EQ(a.j_n, 7);
  EXPECT_EQ(a.width, 15);
  EXPECT_EQ(a.q, 256);
  EXPECT_FALSE(a.local_only);

  const BlockAssignment b = assign_blocks(1024, 16, 140.0, 0.5);
  EXPECT_EQ(b.kappa, block_size_kappa(140.0, 1024, 16, 0.5));
  EXPECT_EQ(b.q, 9);
  EXPECT_EQ(b.j_n, max_resolution(1024, b.kappa, 0.5));
}

TEST(AssignBlocksTest, SubCodewordBudgetIsLocalOnly) {
  const BlockAssignment a = assign_blocks(1024, 16, 14.0, 0.5);
  EXPECT_TRUE(a.local_only);
  EXPECT_EQ(a.q, 0);
  EXPECT_EQ(a.bits_per_machine(), 0);
  EXPECT_EQ(a.j_n, max_resolution(1024, 1, 0.5));
}

TEST(RunMachineTest, BitCountAndDeterminism) {
  const ModelSpec spec = zero_gaussian();
  const BlockAssignment a = assign_blocks(256, 8, 200.0, 0.5);
  PhiloxStream r1(5, 3), r2(5, 3);
  const MachineMessage m1 = run_machine(spec, a, 3, r1);
  const MachineMessage m2 = run_machine(spec, a, 3, r2);
  EXPECT_EQ(m1, m2);
  EXPECT_EQ(m1.bit_count, a.q * a.width);
  EXPECT_LE(m1.bit_count, 200);
}

TEST(RunMachineTest, EmptyCoverageSendsPaddingOnly) {
  const ModelSpec spec = zero_gaussian();
  const BlockAssignment a = make_block_assignment(64, 7, 3, 6, 2);
  PhiloxStream rng(1, 7);
  const MachineMessage msg = run_machine(spec, a, 7, rng);
  EXPECT_EQ(msg.bit_count, a.bits_per_machine());
  EXPECT_TRUE(msg.bits.all_zero());
}

TEST(AggregateTest, AveragesWithinBlocks) {
  const BlockAssignment a = make_block_assignment(32, 2, 2, 1, 0);
  const double N = a.N;
  // Both machines send v.
  const CoefficientTable same =
      aggregate({message_of(1, {0.75}, N), message_of(2, {0.75}, N)}, a);
  EXPECT_EQ(same.get_flat(0), 0.75);
  // Sentinel plus v averages to v / 2.
  const CoefficientTable half =
      aggregate({message_of(1, {1e6}, N), message_of(2, {0.75}, N)}, a);
  EXPECT_EQ(half.get_flat(0), 0.375);
}

TEST(AggregateTest, SingleMachineIsCodecRoundTrip) {
  const BlockAssignment a = make_block_assignment(64, 1, 1, 1, 0);
  const CoefficientTable t = aggregate({message_of(1, {0.3}, a.N)}, a);
  EXPECT_EQ(t.get_flat(0), decode(encode(0.3, a.N, 0.5), a.N, 0.5));
}

TEST(AggregateTest, RejectsInconsistentMessages) {
  const BlockAssignment a = make_block_assignment(32, 2, 2, 1, 0);
  EXPECT_THROW(aggregate({message_of(1, {0.5}, a.N)}, a), ProtocolError);
  EXPECT_THROW(aggregate({message_of(2, {0.5}, a.N), message_of(1, {0.5}, a.N)}, a),
               ProtocolError);
  EXPECT_THROW(aggregate({message_of(1, {0.5, 0.5}, a.N), message_of(2, {0.5}, a.N)}, a),
               ProtocolError);
}

TEST(EstimateTest, DeterministicAndWithinBudget) {
  const ModelSpec spec(ModelKind::kPoissonRegression, make_test_function("rough", 0.5, 1.0, 2.0));
  for (double B : {0.0, 10.0, 15.0, 31.0, 200.0, 5000.0}) {
    const ExperimentResult a = estimate(spec, 512, 12, B, 0.5, 77);
    const ExperimentResult b = estimate(spec, 512, 12, B, 0.5, 77);
    EXPECT_EQ(a, b);
    EXPECT_LE(a.max_bits(), B);
    EXPECT_GE(a.error.truncated, 0.0);
    EXPECT_GE(a.error.with_tail, a.error.truncated);
    EXPECT_LE(a.estimate.max_level(), a.j_n);
  }
  EXPECT_NE(estimate(spec, 512, 12, 200.0, 0.5, 1).estimate,
            estimate(spec, 512, 12, 200.0, 0.5, 2).estimate);
}

TEST(EstimateTest, KeepsMessagesOnRequest) {
  const ModelSpec spec = zero_gaussian();
  const ExperimentResult r = estimate(spec, 128, 4, 100.0, 0.5, 3, {.keep_messages = true});
  ASSERT_EQ(r.messages.size(), 4u);
  EXPECT_EQ(r.messages[2].machine, 3);
  EXPECT_TRUE(estimate(spec, 128, 4, 100.0, 0.5, 3).messages.empty());
}

// Replacing the codec with identity transport moves each aggregated
// coefficient by at most N^{-1/2}.
TEST(EstimateTest, QuantizationContributionBounded) {
  const ModelSpec spec(ModelKind::kGaussianRegression, make_test_function("rough", 0.5, 1.0, 0.3));
  const std::int64_t n = 256, m = 8;
  const double B = 300.0;
  const BlockAssignment a = assign_blocks(n, m, B, 0.5);
  ASSERT_FALSE(a.local_only);
  const ExperimentResult res = estimate(spec, n, m, B, 0.5, 19);
  for (const Block& b : a.blocks) {
    std::vector<double> sums(static_cast<std::size_t>(a.q), 0.0);
    for (std::int64_t k = b.first_machine; k <= b.last_machine; ++k) {
      PhiloxStream rng(19, static_cast<std::uint32_t>(k));
      const auto local = machine_local_estimates(spec, a, k, rng);
      for (std::size_t s = 0; s < local.size(); ++s) sums[s] += local[s];
    }
    for (std::int64_t t = b.slot_begin; t < b.coverage_end; ++t) {
      const double identity =
          sums[static_cast<std::size_t>(t - b.slot_begin)] / static_cast<double>(b.members());
      ASSERT_LE(std::abs(res.estimate.get_flat(t) - identity), 1.0 / std::sqrt(a.N));
    }
  }
}

// Zero function: the mean squared error matches the summed per-coefficient
// variances 1 / (n kappa), up to a quantization allowance of N^{-1} each.
TEST(EstimateTest, ZeroFunctionErrorMatchesVariance) {
  const ModelSpec spec = zero_gaussian();
  const std::int64_t n = 256, m = 16;
  const double B = 400.0;
  const BlockAssignment a = assign_blocks(n, m, B, 0.5);
  double expected = 0.0;
  for (const Block& b : a.blocks) {
    expected += static_cast<double>(b.coverage_end - b.slot_begin) /
                (static_cast<double>(n) * static_cast<double>(b.members()));
  }
  const int R = 200;
  double sum = 0.0, sumsq = 0.0;
  for (int rep = 0; rep < R; ++rep) {
    const double e = estimate(spec, n, m, B, 0.5, derive_seed(123, rep)).error.truncated;
    sum += e;
    sumsq += e * e;
  }
  const double mean = sum / R;
  const double se = std::sqrt((sumsq / R - mean * mean) / (R - 1));
  const double quant = static_cast<double>(a.assigned_count()) / a.N;
  EXPECT_GE(mean + 4 * se, expected - quant);
  EXPECT_LE(mean - 4 * se, expected + quant);
}

TEST(L2ErrorTest, DocumentedCases) {
  CoefficientTable truth;
  truth.set(BasisIndex::father(), 1.0);
  truth.set(BasisIndex::wavelet(2, 1), 0.5);
  truth.set(BasisIndex::wavelet(4, 0), std::ldexp(1.0, -6));

  CoefficientTable est;
  est.set(BasisIndex::father(), 1.0);
  est.set(BasisIndex::wavelet(2, 1), 0.5);
  const L2Error exact = l2_error(truth, est, 3);
  EXPECT_EQ(exact.truncated, 0.0);
  EXPECT_EQ(exact.with_tail - exact.truncated, std::ldexp(1.0, -12));

  est.set(BasisIndex::wavelet(1, 0), 0.125);
  const L2Error off = l2_error(truth, est, 3);
  EXPECT_EQ(off.truncated, 0.125 * 0.125);

  EXPECT_THROW(l2_error(truth, est, 0), DomainError);
}

}  // namespace
}  // namespace bassim
