#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "genstream/report.hpp"

using namespace genstream;

namespace {

RunSpec small_spec() {
  RunSpec spec;
  spec.schemes = {SchemeKind::rl, SchemeKind::rls};
  spec.gen_sizes = {2, 4};
  spec.blocks = 32;
  spec.block_bytes = 8;
  spec.trials = 2000;
  spec.seed = 7;
  return spec;
}

std::string rows_to_string(std::span<const CsvRow> rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("csv schema is pinned") {
  CHECK(csv_header() ==
        "scheme,g,n,q,K,epsilon,source,mean_T,norm_T,ci95,delivery_time_s,net_rate_Bps,"
        "energy_J,trials,seed");
  CsvRow row;
  row.scheme = "rl";
  row.source = "analytic";
  auto line = to_csv(row);
  CHECK(std::count(line.begin(), line.end(), ',') == 14);
}

TEST_CASE("predict emits one analytic row per valid grid point") {
  RunSpec spec;
  spec.schemes = {SchemeKind::rl, SchemeKind::rls, SchemeKind::rs, SchemeKind::pc};
  spec.gen_sizes = {1, 4, 16};
  spec.blocks = 64;
  spec.block_bytes = 64;
  std::ostringstream log;
  auto rows = cmd_predict(spec, log);
  REQUIRE(rows.size() == 12);
  for (const auto& r : rows) {
    CHECK(r.source == "analytic");
    CHECK(r.trials == 0);
    CHECK(r.ci95 == 0);
    CHECK(r.norm_T >= 1.0);
  }
  CHECK(log.str().find("energy") != std::string::npos);

  // norm_T decreasing in g for rl, rls, rs at 15% loss
  for (std::size_t base : {0u, 3u, 6u}) {
    CHECK(rows[base].norm_T > rows[base + 1].norm_T);
    CHECK(rows[base + 1].norm_T > rows[base + 2].norm_T);
  }
}

TEST_CASE("predict skips combinations the code cannot support") {
  RunSpec spec;
  spec.schemes = {SchemeKind::rs};
  spec.gen_sizes = {16, 300, 512};
  spec.blocks = 512;
  std::ostringstream log;
  auto rows = cmd_predict(spec, log);
  CHECK(rows.size() == 1);  // g=300 and g=512 exceed K=255
  CHECK(log.str().find("skip") != std::string::npos);
}

TEST_CASE("predict is pure: identical spec, identical bytes") {
  auto spec = small_spec();
  std::ostringstream log1, log2;
  auto a = rows_to_string(cmd_predict(spec, log1));
  auto b = rows_to_string(cmd_predict(spec, log2));
  CHECK(a == b);
}

TEST_CASE("simulate: lossless single generation delivers exactly N") {
  RunSpec spec;
  spec.schemes = {SchemeKind::rls};
  spec.gen_sizes = {64};
  spec.blocks = 64;
  spec.block_bytes = 8;
  spec.epsilon = 0.0;
  spec.trials = 30;
  std::ostringstream log;
  auto rows = cmd_simulate(spec, log);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n == 1);
  CHECK(rows[0].mean_T == 64.0);
  CHECK(rows[0].ci95 == 0.0);
  CHECK(rows[0].trials == 30);
}

TEST_CASE("simulate is deterministic for a fixed seed") {
  auto spec = small_spec();
  spec.trials = 200;
  std::ostringstream log1, log2;
  auto a = rows_to_string(cmd_simulate(spec, log1));
  auto b = rows_to_string(cmd_simulate(spec, log2));
  CHECK(a == b);
}

TEST_CASE("compare flags nothing when simulation matches prediction") {
  auto spec = small_spec();
  std::ostringstream log;
  auto result = cmd_compare(spec, log);
  CHECK(result.points.size() == 4);
  CHECK(result.rows.size() == 8);
  CHECK(result.flagged_count() == 0);
  for (const auto& pt : result.points) {
    CHECK(pt.analytic.source == "analytic");
    CHECK(pt.simulated.source == "simulated");
    CHECK(pt.deviation == std::abs(pt.analytic.mean_T - pt.simulated.mean_T));
  }
}

TEST_CASE("compare can predict at a separately measured loss rate") {
  auto spec = small_spec();
  spec.epsilon = 0.10;
  spec.measured_epsilon = 0.25;
  std::ostringstream log;
  auto result = cmd_compare(spec, log);
  for (const auto& pt : result.points) {
    CHECK(pt.analytic.epsilon == 0.25);
    CHECK(pt.simulated.epsilon == 0.10);
  }
}

TEST_CASE("empty grids are configuration errors") {
  RunSpec spec = small_spec();
  spec.gen_sizes.clear();
  std::ostringstream log;
  CHECK_THROWS_AS((void)cmd_compare(spec, log), Error);
  spec = small_spec();
  spec.schemes.clear();
  CHECK_THROWS_AS((void)cmd_predict(spec, log), Error);
  spec = small_spec();
  spec.gen_sizes = {100};  // above the block count
  CHECK_THROWS_AS((void)cmd_simulate(spec, log), Error);
}
