#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genstream/simulator.hpp"

namespace genstream {

// One experiment request: a scheme x generation-size grid plus the shared
// knobs. Defaults mirror the reference setup: 512 blocks of 1400 bytes,
// 15% loss, binary field, RS(255,g) and PC(g+1,g) codebooks.
struct RunSpec {
  std::vector<SchemeKind> schemes;
  std::vector<std::uint32_t> gen_sizes;
  double epsilon = 0.15;
  unsigned field_bits = 1;
  std::uint32_t blocks = 512;
  std::uint32_t block_bytes = 1400;
  std::uint32_t rs_K = 255;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  double rate_Bps = 1000000.0;
  double rx_power_W = 1.0;
  std::string out_path;
  bool paired = false;                     // same channel streams across schemes
  std::optional<double> measured_epsilon;  // compare: prediction-side loss rate
};

struct CsvRow {
  std::string scheme;
  std::uint32_t g = 0;
  std::uint32_t n = 0;
  unsigned q = 0;
  std::uint32_t K = 0;  // 0 for rl/rls
  double epsilon = 0;
  std::string source;  // analytic | simulated | transport
  double mean_T = 0;
  double norm_T = 0;  // mean_T / N, N the true block count
  double ci95 = 0;
  double delivery_time_s = 0;
  double net_rate_Bps = 0;
  double energy_J = 0;
  std::uint64_t trials = 0;  // 0 for analytic rows
  std::uint64_t seed = 0;
};

std::string csv_header();
std::string to_csv(const CsvRow& row);
void write_csv(std::ostream& os, std::span<const CsvRow> rows);

// grid point -> full parameter set (n = ceil(blocks/g))
SchemeParams params_for(const RunSpec& spec, SchemeKind scheme, std::uint32_t g);

// Analytic rows, one per valid (scheme, g) pair; combinations the scheme
// cannot support (e.g. RS with g > K) are skipped with a log note.
std::vector<CsvRow> cmd_predict(const RunSpec& spec, std::ostream& log);

// Monte Carlo rows with confidence intervals.
std::vector<CsvRow> cmd_simulate(const RunSpec& spec, std::ostream& log);

struct ComparePoint {
  CsvRow analytic;
  CsvRow simulated;
  double deviation = 0;  // |mean difference|
  bool flagged = false;  // deviation beyond 3 ci95
};

struct CompareResult {
  std::vector<CsvRow> rows;  // analytic and simulated rows interleaved
  std::vector<ComparePoint> points;
  std::size_t flagged_count() const;
};

CompareResult cmd_compare(const RunSpec& spec, std::ostream& log);

}  // namespace genstream
