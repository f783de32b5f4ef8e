#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "genstream/analysis.hpp"
#include "genstream/stream.hpp"

namespace genstream {

struct TrialRecord {
  std::uint64_t T = 0;                 // transmissions until the whole file decoded
  std::uint64_t received_count = 0;    // transmissions surviving the channel
  std::uint64_t superfluous_count = 0; // receptions for decoded generations + dependent packets
  std::vector<std::uint64_t> per_generation_M;  // transmissions from j when j decoded
  std::uint64_t seed = 0;
  bool file_verified = false;          // reassembled bytes matched the source
};

struct BatchStats {
  std::uint64_t trials = 0;
  double mean_T = 0;
  double std_T = 0;             // sample standard deviation
  double ci95_halfwidth = 0;    // 1.96 * std / sqrt(trials)
  double mean_loss_rate = 0;    // dropped / sent across all trials
  double mean_superfluous = 0;
  std::vector<std::uint64_t> sorted_T;

  // fraction of trials finishing within t transmissions
  double empirical_cdf(std::uint64_t t) const;
  std::uint64_t max_T() const { return sorted_T.empty() ? 0 : sorted_T.back(); }
};

// Monte Carlo engine: a round-robin sender over a memoryless erasure channel
// feeding the per-generation decoders. Every trial decodes the actual
// payload bytes and checks the reassembled file against the source.
//
// Each trial derives two independent random streams from its seed, one for
// the channel and one for the coding coefficients, so the loss pattern of a
// given (base_seed, trial) pair is identical across schemes.
class Simulator {
public:
  Simulator(SchemeParams params, std::span<const std::uint8_t> data, std::uint32_t block_bytes);

  const FileLayout& layout() const { return layout_; }
  const SchemeParams& params() const { return params_; }

  // same seed, identical record; throws Errc::trial_timeout past the cap
  TrialRecord run_trial(std::uint64_t seed) const;

  // seeds base_seed, base_seed+1, ...
  BatchStats run_batch(std::uint64_t trials, std::uint64_t base_seed) const;

  static constexpr std::uint64_t kMaxTransmissions = 100000000;

private:
  SchemeParams params_;
  std::vector<std::uint8_t> data_;
  FileLayout layout_;
  std::vector<Generation> gens_;
  std::vector<std::vector<CodedPacket>> books_;  // MDS codebooks, shared across trials
};

std::vector<std::uint8_t> make_test_payload(std::size_t bytes, std::uint64_t seed);

// Dvoretzky-Kiefer-Wolfowitz band: sup-deviation threshold at confidence
// 1 - alpha for the given trial count.
double dkw_threshold(std::uint64_t trials, double alpha);

// sup over t of |empirical cdf - analytic cdf|
double empirical_cdf_max_deviation(const BatchStats& batch, const SchemeParams& params);

}  // namespace genstream
