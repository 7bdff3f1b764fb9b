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

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "bassim/bass.hpp"
#include "bassim/errors.hpp"

namespace bassim {

const Block& BlockAssignment::block_of(std::int64_t machine) const {
  for (const Block& b : blocks) {
    if (b.contains(machine)) return b;
  }
  throw DomainError("machine " + std::to_string(machine) +
                    " is not assigned to a block");
}

std::int64_t BlockAssignment::assigned_count() const {
  if (local_only) return flat_limit;
  std::int64_t count = 0;
  for (const Block& b : blocks) {
    count += std::max<std::int64_t>(0, b.coverage_end - b.slot_begin);
  }
  return count;
}

std::int64_t ExperimentResult::max_bits() const {
  if (bits_per_machine.empty()) return 0;
  return *std::max_element(bits_per_machine.begin(), bits_per_machine.end());
}

BlockAssignment make_block_assignment(std::int64_t n, std::int64_t m,
                                      std::int64_t kappa, std::int64_t q,
                                      int j_n) {
  if (n < 1 || m < 1 || n * m < 4) throw DomainError("need n m >= 4");
  if (kappa < 1 || kappa > m) throw DomainError("kappa must be in [1, m]");
  if (q < 1) throw DomainError("need at least one codeword per machine");
  if (j_n < 0 || j_n > 40) throw DomainError("j_n out of range");

  BlockAssignment a;
  a.n = n;
  a.m = m;
  a.N = static_cast<double>(n) * static_cast<double>(m);
  a.kappa = kappa;
  a.q = q;
  a.width = codeword_width(a.N, kProtocolPrecision);
  a.j_n = j_n;
  a.flat_limit = std::int64_t{1} << (j_n + 1);
  const std::int64_t block_count = (m + kappa - 1) / kappa;
  for (std::int64_t l = 0; l < block_count; ++l) {
    Block b;
    b.first_machine = l * kappa + 1;
    b.last_machine = std::min((l + 1) * kappa, m);
    b.slot_begin = l * q;
    b.coverage_end =
        std::max(b.slot_begin, std::min(b.slot_begin + q, a.flat_limit));
    a.blocks.push_back(b);
  }
  return a;
}

BlockAssignment assign_blocks(std::int64_t n, std::int64_t m, double B,
                              double r) {
  NetworkConfig::symmetric(n, m, B, r).validate();
  const double N = static_cast<double>(n) * static_cast<double>(m);
  const int width = codeword_width(N, kProtocolPrecision);
  const std::int64_t kappa = block_size_kappa(B, n, m, r);
  const double slots = std::floor(B / width);

  if (slots < 1.0) {
    BlockAssignment a;
    a.n = n;
    a.m = m;
    a.N = N;
    a.kappa = 1;
    a.q = 0;
    a.width = width;
    a.j_n = max_resolution(n, 1, r);
    a.flat_limit = std::int64_t{1} << (a.j_n + 1);
    a.local_only = true;
    return a;
  }
  const int j_n = max_resolution(n, kappa, r);
  // Slots past 2^{j_n + 1} would only carry padding.
  const std::int64_t limit = std::int64_t{1} << (j_n + 1);
  const std::int64_t q =
      slots >= static_cast<double>(limit) ? limit
                                          : static_cast<std::int64_t>(slots);
  return make_block_assignment(n, m, kappa, q, j_n);
}

std::vector<double> machine_local_estimates(const ModelSpec& spec,
                                            const BlockAssignment& assignment,
                                            std::int64_t machine,
                                            PhiloxStream& rng) {
  if (assignment.local_only) return {};
  const Block& block = assignment.block_of(machine);
  const LocalDataset data = sample(spec, assignment.n, rng);
  std::vector<double> slots(static_cast<std::size_t>(assignment.q), 0.0);
  if (block.coverage_end <= block.slot_begin) return slots;
  const std::vector<double> est =
      local_coefficient_estimates(spec.kind(), data, block.coverage_end);
  for (std::int64_t flat = block.slot_begin; flat < block.coverage_end;
       ++flat) {
    slots[static_cast<std::size_t>(flat - block.slot_begin)] =
        est[static_cast<std::size_t>(flat)];
  }
  return slots;
}

MachineMessage run_machine(const ModelSpec& spec,
                           const BlockAssignment& assignment,
                           std::int64_t machine, PhiloxStream& rng) {
  MachineMessage msg;
  msg.machine = machine;
  const std::vector<double> values =
      machine_local_estimates(spec, assignment, machine, rng);
  msg.bits = encode_message(values, assignment.N, kProtocolPrecision);
  msg.bit_count = static_cast<std::int64_t>(msg.bits.size());
  return msg;
}

CoefficientTable aggregate(const std::vector<MachineMessage>& messages,
                           const BlockAssignment& assignment) {
  if (assignment.local_only) {
    throw ProtocolError("local-only assignment has nothing to aggregate");
  }
  if (messages.size() != static_cast<std::size_t>(assignment.m)) {
    throw ProtocolError("expected " + std::to_string(assignment.m) +
                        " messages, got " + std::to_string(messages.size()));
  }
  const std::int64_t expected_bits = assignment.bits_per_machine();
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const MachineMessage& msg = messages[i];
    if (msg.machine != static_cast<std::int64_t>(i) + 1) {
      throw ProtocolError("messages must be ordered by machine index");
    }
    if (msg.bit_count != expected_bits ||
        msg.bits.size() != static_cast<std::size_t>(expected_bits)) {
      throw ProtocolError("machine " + std::to_string(msg.machine) + " sent " +
                          std::to_string(msg.bits.size()) + " bits, expected " +
                          std::to_string(expected_bits));
    }
  }

  CoefficientTable out;
  for (const Block& block : assignment.blocks) {
    const std::int64_t covered = block.coverage_end - block.slot_begin;
    if (covered <= 0) continue;
    std::vector<double> sums(static_cast<std::size_t>(covered), 0.0);
    for (std::int64_t k = block.first_machine; k <= block.last_machine; ++k) {
      const std::vector<double> decoded = decode_message(
          messages[static_cast<std::size_t>(k - 1)].bits, assignment.N,
          kProtocolPrecision);
      for (std::int64_t s = 0; s < covered; ++s) {
        sums[static_cast<std::size_t>(s)] += decoded[static_cast<std::size_t>(s)];
      }
    }
    const double members = static_cast<double>(block.members());
    for (std::int64_t s = 0; s < covered; ++s) {
      out.set_flat(block.slot_begin + s,
                   sums[static_cast<std::size_t>(s)] / members);
    }
  }
  return out;
}

ExperimentResult estimate(const ModelSpec& spec, std::int64_t n,
                          std::int64_t m, double B, double r,
                          std::uint64_t seed, EstimateOptions options) {
  const BlockAssignment assignment = assign_blocks(n, m, B, r);
  ExperimentResult result;
  result.n = n;
  result.m = m;
  result.B = B;
  result.r = r;
  result.kappa = assignment.kappa;
  result.q = assignment.q;
  result.j_n = assignment.j_n;
  result.local_only = assignment.local_only;
  result.seed = seed;
  result.bits_per_machine.assign(static_cast<std::size_t>(m), 0);

  if (assignment.local_only) {
    PhiloxStream rng(seed, 1);
    const LocalDataset data = sample(spec, n, rng);
    const std::vector<double> est =
        local_coefficient_estimates(spec.kind(), data, assignment.flat_limit);
    for (std::size_t flat = 0; flat < est.size(); ++flat) {
      result.estimate.set_flat(static_cast<std::int64_t>(flat), est[flat]);
    }
  } else {
    std::vector<MachineMessage> messages;
    messages.reserve(static_cast<std::size_t>(m));
    for (std::int64_t k = 1; k <= m; ++k) {
      PhiloxStream rng(seed, static_cast<std::uint32_t>(k));
      messages.push_back(run_machine(spec, assignment, k, rng));
      result.bits_per_machine[static_cast<std::size_t>(k - 1)] =
          messages.back().bit_count;
    }
    result.estimate = aggregate(messages, assignment);
    if (options.keep_messages) result.messages = std::move(messages);
  }
  result.error = l2_error(spec.truth(), result.estimate, assignment.j_n);
  return result;
}

L2Error l2_error(const CoefficientTable& truth,
                 const CoefficientTable& estimate, int j_eval) {
  if (j_eval < estimate.max_level()) {
    throw DomainError("j_eval below the estimate's max level");
  }
  std::set<std::int64_t> keys;
  for (const auto& [flat, v] : truth.entries()) keys.insert(flat);
  for (const auto& [flat, v] : estimate.entries()) keys.insert(flat);

  L2Error err;
  double tail = 0.0;
  for (std::int64_t flat : keys) {
    const double f = truth.get_flat(flat);
    if (BasisIndex::from_flat(flat).level() <= j_eval) {
      const double diff = f - estimate.get_flat(flat);
      err.truncated += diff * diff;
    } else {
      tail += f * f;
    }
  }
  err.with_tail = err.truncated + tail;
  return err;
}

}  // namespace bassim
