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

// Single-round block protocol.
//
// Machines 1..m are grouped into blocks of kappa consecutive machines (the
// last block may be smaller). Every machine of block l estimates the
// coefficients with flat index in [(l-1) q, l q), encodes each with the
// fixed-width codec at D = 1/2 and sends the q codewords to the central
// machine, which averages them per block. Flat index 0 is the father
// coefficient, so block 1 always carries it. Indices at or beyond
// 2^{j_n + 1} are never estimated; their slots carry zero codewords.
//
// With B below one codeword width no transmission is possible and the
// estimate is the local estimator of a single machine.

#ifndef BASSIM_PROTOCOL_HPP_
#define BASSIM_PROTOCOL_HPP_

#include <cstdint>
#include <vector>

#include "bassim/codec.hpp"
#include "bassim/models.hpp"
#include "bassim/rng.hpp"
#include "bassim/wavelets.hpp"

namespace bassim {

inline constexpr double kProtocolPrecision = 0.5;

struct Block {
  // 1-based, inclusive.
  std::int64_t first_machine = 1;
  std::int64_t last_machine = 1;
  // Codeword slots cover flat indices [slot_begin, slot_begin + q).
  std::int64_t slot_begin = 0;
  // Estimated indices are [slot_begin, coverage_end).
  std::int64_t coverage_end = 0;

  std::int64_t members() const { return last_machine - first_machine + 1; }
  bool contains(std::int64_t machine) const {
    return machine >= first_machine && machine <= last_machine;
  }
};

struct BlockAssignment {
  std::int64_t n = 0;
  std::int64_t m = 0;
  double N = 0.0;
  std::int64_t kappa = 1;
  // Codewords per machine.
  std::int64_t q = 0;
  int width = 0;
  int j_n = 0;
  // 2^{j_n + 1}: one past the last flat index that may be estimated.
  std::int64_t flat_limit = 1;
  bool local_only = false;
  std::vector<Block> blocks;

  // Throws DomainError for an unassigned or out-of-range machine.
  const Block& block_of(std::int64_t machine) const;
  // Number of distinct coefficients estimated (father included).
  std::int64_t assigned_count() const;
  std::int64_t bits_per_machine() const { return q * width; }
};

struct MachineMessage {
  std::int64_t machine = 0;
  BitString bits;
  std::int64_t bit_count = 0;

  friend bool operator==(const MachineMessage&,
                         const MachineMessage&) = default;
};

struct L2Error {
  // Squared error over levels <= j_eval (father included).
  double truncated = 0.0;
  // truncated plus the energy of the true table above j_eval.
  double with_tail = 0.0;

  friend bool operator==(const L2Error&, const L2Error&) = default;
};

struct ExperimentResult {
  CoefficientTable estimate;
  // Bits sent by machine k at index k - 1.
  std::vector<std::int64_t> bits_per_machine;
  L2Error error;
  std::int64_t n = 0;
  std::int64_t m = 0;
  double B = 0.0;
  double r = 0.0;
  std::int64_t kappa = 1;
  std::int64_t q = 0;
  int j_n = 0;
  bool local_only = false;
  std::uint64_t seed = 0;
  // Filled only when requested through EstimateOptions.
  std::vector<MachineMessage> messages;

  std::int64_t max_bits() const;

  friend bool operator==(const ExperimentResult&,
                         const ExperimentResult&) = default;
};

struct EstimateOptions {
  bool keep_messages = false;
};

BlockAssignment assign_blocks(std::int64_t n, std::int64_t m, double B,
                              double r);

// Block layout for explicit (kappa, q, j_n); the building block of
// assign_blocks. Requires q >= 1 and 1 <= kappa <= m.
BlockAssignment make_block_assignment(std::int64_t n, std::int64_t m,
                                      std::int64_t kappa, std::int64_t q,
                                      int j_n);

// Raw local estimates for the q slots of `machine` (zero for padding
// slots), drawing the machine's dataset from `rng`.
std::vector<double> machine_local_estimates(const ModelSpec& spec,
                                            const BlockAssignment& assignment,
                                            std::int64_t machine,
                                            PhiloxStream& rng);

MachineMessage run_machine(const ModelSpec& spec,
                           const BlockAssignment& assignment,
                           std::int64_t machine, PhiloxStream& rng);

// Averages decoded codewords per block in ascending machine order. Expects
// exactly one message per machine, sorted by machine index.
CoefficientTable aggregate(const std::vector<MachineMessage>& messages,
                           const BlockAssignment& assignment);

// Machine k draws its data from PhiloxStream(seed, k).
ExperimentResult estimate(const ModelSpec& spec, std::int64_t n,
                          std::int64_t m, double B, double r,
                          std::uint64_t seed, EstimateOptions options = {});

// Throws DomainError when j_eval is below the estimate's max level.
L2Error l2_error(const CoefficientTable& truth,
                 const CoefficientTable& estimate, int j_eval);

}  // namespace bassim

#endif  // BASSIM_PROTOCOL_HPP_
