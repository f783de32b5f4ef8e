#include "genstream/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace genstream {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

bool combo_supported(SchemeKind scheme, std::uint32_t g, std::uint32_t rs_K) {
  if (scheme == SchemeKind::rs) return g <= rs_K && rs_K <= 255;
  return true;
}

CsvRow base_row(const RunSpec& spec, const SchemeParams& p, const char* source) {
  CsvRow row;
  row.scheme = to_string(p.scheme);
  row.g = p.g;
  row.n = p.n;
  row.q = p.q();
  row.K = p.is_mds() ? p.mds_K() : 0;
  row.epsilon = p.channel.epsilon;
  row.source = source;
  row.trials = 0;
  row.seed = 0;
  (void)spec;
  return row;
}

void fill_performance(CsvRow& row, const RunSpec& spec) {
  auto perf =
      analysis::performance_measures(row.mean_T, spec.blocks, spec.block_bytes, spec.rate_Bps,
                                     spec.rx_power_W);
  row.delivery_time_s = perf.delivery_time_s;
  row.net_rate_Bps = perf.net_rate_Bps;
  row.energy_J = perf.energy_J;
}

void check_grid(const RunSpec& spec) {
  if (spec.schemes.empty()) raise(Errc::config_error, "no schemes requested");
  if (spec.gen_sizes.empty()) raise(Errc::config_error, "no generation sizes requested");
  if (spec.blocks == 0 || spec.block_bytes == 0)
    raise(Errc::config_error, "blocks and block-bytes must be positive");
  for (std::uint32_t g : spec.gen_sizes)
    if (g == 0 || g > spec.blocks)
      raise(Errc::config_error, "generation size " + std::to_string(g) +
                                    " outside [1, " + std::to_string(spec.blocks) + "]");
}

std::uint64_t batch_seed(const RunSpec& spec, SchemeKind scheme, std::uint32_t g) {
  // paired runs keep the seed (and with it the channel streams) identical
  // across schemes; unpaired runs decorrelate them
  std::uint64_t s = spec.paired ? spec.seed : mix_seed(spec.seed, std::uint64_t(scheme) + 1);
  return mix_seed(s, g);
}

}  // namespace

std::string csv_header() {
  return "scheme,g,n,q,K,epsilon,source,mean_T,norm_T,ci95,delivery_time_s,net_rate_Bps,"
         "energy_J,trials,seed";
}

std::string to_csv(const CsvRow& r) {
  std::string out;
  out += r.scheme;
  out += ',' + std::to_string(r.g);
  out += ',' + std::to_string(r.n);
  out += ',' + std::to_string(r.q);
  out += ',' + std::to_string(r.K);
  out += ',' + fmt_double(r.epsilon);
  out += ',' + r.source;
  out += ',' + fmt_double(r.mean_T);
  out += ',' + fmt_double(r.norm_T);
  out += ',' + fmt_double(r.ci95);
  out += ',' + fmt_double(r.delivery_time_s);
  out += ',' + fmt_double(r.net_rate_Bps);
  out += ',' + fmt_double(r.energy_J);
  out += ',' + std::to_string(r.trials);
  out += ',' + std::to_string(r.seed);
  return out;
}

void write_csv(std::ostream& os, std::span<const CsvRow> rows) {
  os << csv_header() << '\n';
  for (const auto& r : rows) os << to_csv(r) << '\n';
}

SchemeParams params_for(const RunSpec& spec, SchemeKind scheme, std::uint32_t g) {
  SchemeParams p;
  p.scheme = scheme;
  p.g = g;
  p.n = (spec.blocks + g - 1) / g;
  p.field_bits = spec.field_bits;
  p.rs_K = spec.rs_K;
  p.channel.epsilon = spec.epsilon;
  p.validate();
  return p;
}

std::vector<CsvRow> cmd_predict(const RunSpec& spec, std::ostream& log) {
  check_grid(spec);
  std::vector<CsvRow> rows;
  log << "note: energy values come from the parametric rx-power model (" << spec.rx_power_W
      << " W), not device measurement\n";
  for (SchemeKind scheme : spec.schemes) {
    for (std::uint32_t g : spec.gen_sizes) {
      if (!combo_supported(scheme, g, spec.rs_K)) {
        log << "skip: " << to_string(scheme) << " cannot encode g=" << g << " (K=" << spec.rs_K
            << ")\n";
        continue;
      }
      double eps = spec.measured_epsilon.value_or(spec.epsilon);
      RunSpec eff = spec;
      eff.epsilon = eps;
      SchemeParams p = params_for(eff, scheme, g);
      if (p.n * std::uint64_t(g) != spec.blocks)
        log << "note: " << to_string(scheme) << " g=" << g << " pads the last generation with "
            << p.n * std::uint64_t(g) - spec.blocks << " zero blocks\n";
      CsvRow row = base_row(spec, p, "analytic");
      row.mean_T = analysis::expected_T(p).value;
      row.norm_T = row.mean_T / double(spec.blocks);
      fill_performance(row, spec);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<CsvRow> cmd_simulate(const RunSpec& spec, std::ostream& log) {
  check_grid(spec);
  if (spec.trials < 1) raise(Errc::config_error, "need at least one trial");
  std::vector<CsvRow> rows;
  log << "note: energy values come from the parametric rx-power model (" << spec.rx_power_W
      << " W), not device measurement\n";
  auto data = make_test_payload(std::size_t(spec.blocks) * spec.block_bytes, spec.seed);
  for (SchemeKind scheme : spec.schemes) {
    for (std::uint32_t g : spec.gen_sizes) {
      if (!combo_supported(scheme, g, spec.rs_K)) {
        log << "skip: " << to_string(scheme) << " cannot encode g=" << g << " (K=" << spec.rs_K
            << ")\n";
        continue;
      }
      SchemeParams p = params_for(spec, scheme, g);
      Simulator sim(p, data, spec.block_bytes);
      std::uint64_t seed = batch_seed(spec, scheme, g);
      BatchStats stats = sim.run_batch(spec.trials, seed);
      CsvRow row = base_row(spec, sim.params(), "simulated");
      row.mean_T = stats.mean_T;
      row.norm_T = stats.mean_T / double(spec.blocks);
      row.ci95 = stats.ci95_halfwidth;
      row.trials = stats.trials;
      row.seed = seed;
      fill_performance(row, spec);
      rows.push_back(std::move(row));
      log << to_string(scheme) << " g=" << g << ": mean_T=" << stats.mean_T
          << " ci95=" << stats.ci95_halfwidth << " loss=" << stats.mean_loss_rate << "\n";
    }
  }
  return rows;
}

std::size_t CompareResult::flagged_count() const {
  std::size_t k = 0;
  for (const auto& pt : points) k += pt.flagged ? 1 : 0;
  return k;
}

CompareResult cmd_compare(const RunSpec& spec, std::ostream& log) {
  check_grid(spec);
  CompareResult result;
  auto analytic = cmd_predict(spec, log);
  auto simulated = cmd_simulate(spec, log);
  if (analytic.size() != simulated.size())
    raise(Errc::config_error, "prediction and simulation grids diverged");
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    ComparePoint pt;
    pt.analytic = analytic[i];
    pt.simulated = simulated[i];
    pt.deviation = std::abs(pt.analytic.mean_T - pt.simulated.mean_T);
    pt.flagged = pt.deviation > 3.0 * pt.simulated.ci95 + 1e-9;
    log << (pt.flagged ? "FLAG " : "ok   ") << pt.analytic.scheme << " g=" << pt.analytic.g
        << " analytic=" << pt.analytic.mean_T << " simulated=" << pt.simulated.mean_T
        << " |diff|=" << pt.deviation << " 3ci95=" << 3.0 * pt.simulated.ci95 << "\n";
    result.rows.push_back(analytic[i]);
    result.rows.push_back(simulated[i]);
    result.points.push_back(std::move(pt));
  }
  return result;
}

}  // namespace genstream
