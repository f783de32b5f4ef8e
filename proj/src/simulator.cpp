#include "genstream/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace genstream {

namespace {
// stream tags for the per-trial split
constexpr std::uint64_t kChannelStream = 0x6368616e;
constexpr std::uint64_t kCodingStream = 0x636f6465;
}  // namespace

double BatchStats::empirical_cdf(std::uint64_t t) const {
  if (trials == 0) return 0.0;
  auto it = std::upper_bound(sorted_T.begin(), sorted_T.end(), t);
  return double(it - sorted_T.begin()) / double(trials);
}

Simulator::Simulator(SchemeParams params, std::span<const std::uint8_t> data,
                     std::uint32_t block_bytes)
    : params_(params), data_(data.begin(), data.end()) {
  params_.validate();
  auto [layout, gens] = segment_file(data_, block_bytes, params_.g, params_.coding_field());
  layout_ = layout;
  gens_ = std::move(gens);
  params_.n = layout_.n;
  if (params_.is_mds()) books_ = build_codebooks(gens_, params_.mds_spec());
}

TrialRecord Simulator::run_trial(std::uint64_t seed) const {
  Rng channel(mix_seed(seed, kChannelStream));
  RoundRobinEncoder enc(gens_, params_, mix_seed(seed, kCodingStream), books_);
  FileDecoder dec(layout_, params_);

  TrialRecord rec;
  rec.seed = seed;
  rec.per_generation_M.assign(layout_.n, 0);

  const double eps = params_.channel.epsilon;
  std::uint64_t late_receptions = 0;  // arrivals for generations already decoded

  std::uint64_t t = 0;
  while (!dec.complete()) {
    if (++t > kMaxTransmissions)
      raise(Errc::trial_timeout, "trial with seed " + std::to_string(seed) +
                                     " exceeded the transmission cap");
    std::uint32_t j = enc.next_generation();
    bool received = eps == 0.0 || !channel.bernoulli(eps);
    if (!received) {
      enc.skip_next();
      continue;
    }
    if (dec.generations()[j].decoded()) {
      enc.skip_next();  // sender has no feedback; nothing to learn from the payload
      ++late_receptions;
      continue;
    }
    if (dec.ingest(enc.next()))
      rec.per_generation_M[j] = (t - 1) / layout_.n + 1;  // transmissions from j so far
  }

  rec.T = t;
  rec.received_count = dec.receptions() + late_receptions;
  rec.superfluous_count = dec.superfluous() + late_receptions;
  rec.file_verified = dec.file_bytes() == data_;
  return rec;
}

BatchStats Simulator::run_batch(std::uint64_t trials, std::uint64_t base_seed) const {
  if (trials < 1) raise(Errc::bad_spec, "need at least one trial");
  BatchStats stats;
  stats.trials = trials;
  stats.sorted_T.reserve(trials);

  double sum = 0.0, sumsq = 0.0;
  std::uint64_t sent = 0, received = 0, superfluous = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    TrialRecord rec = run_trial(base_seed + i);
    if (!rec.file_verified)
      raise(Errc::trial_timeout, "decoded file mismatch in seed " + std::to_string(rec.seed));
    stats.sorted_T.push_back(rec.T);
    sum += double(rec.T);
    sumsq += double(rec.T) * double(rec.T);
    sent += rec.T;
    received += rec.received_count;
    superfluous += rec.superfluous_count;
  }
  std::sort(stats.sorted_T.begin(), stats.sorted_T.end());
  stats.mean_T = sum / double(trials);
  if (trials > 1) {
    double var = (sumsq - sum * sum / double(trials)) / double(trials - 1);
    stats.std_T = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  stats.ci95_halfwidth = 1.96 * stats.std_T / std::sqrt(double(trials));
  stats.mean_loss_rate = sent ? 1.0 - double(received) / double(sent) : 0.0;
  stats.mean_superfluous = double(superfluous) / double(trials);
  return stats;
}

std::vector<std::uint8_t> make_test_payload(std::size_t bytes, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x7061796c));
  std::vector<std::uint8_t> data(bytes);
  for (auto& b : data) b = rng.next_bits(8);
  return data;
}

double dkw_threshold(std::uint64_t trials, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * double(trials)));
}

double empirical_cdf_max_deviation(const BatchStats& batch, const SchemeParams& params) {
  if (batch.trials == 0) raise(Errc::bad_spec, "empty batch");
  analysis::DeliveryDistribution dist(params);
  double worst = 0.0;
  for (std::uint64_t t = 0; t <= batch.max_T(); ++t) {
    double d = std::abs(batch.empirical_cdf(t) - dist.cdf(t));
    if (d > worst) worst = d;
  }
  return worst;
}

}  // namespace genstream
