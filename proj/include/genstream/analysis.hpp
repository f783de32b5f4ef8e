#pragma once

#include <cstdint>
#include <vector>

#include "genstream/scheme.hpp"

namespace genstream {
namespace analysis {

// C(m,j) p^j (1-p)^(m-j); 0 for j > m. Switches to log-gamma evaluation for
// m > 60, where the naive coefficient product overflows.
double binom_pmf(std::uint64_t m, std::uint64_t j, double p);

// probability that a j x g matrix with entries drawn independently and
// equiprobably from GF(q) has full column rank g
double full_rank_prob(std::uint64_t j, std::uint32_t g, unsigned q);

// 0.288 when q = 2 and j = g, else 1 - 1/(q^(j-g) (q-1)); never above
// full_rank_prob
double full_rank_lower_bound(std::uint64_t j, std::uint32_t g, unsigned q);

// P(a generation of size g decodes within m random-combination
// transmissions over a channel losing each packet with probability eps)
double p_rl(std::uint64_t m, std::uint32_t g, double eps, unsigned q);

// Large-field two-term approximation of p_rl. Approximate lower bound only:
// callers compare |p_rl - bound|, no inequality is guaranteed. Clamped to
// [0,1].
double p_rl_large_q_lower_bound(std::uint64_t m, std::uint32_t g, double eps, unsigned q);

// Systematic phase of g verbatim transmissions, then random combinations.
double p_rls(std::uint64_t m, std::uint32_t g, double eps, unsigned q);

// Closed-form lower bound on p_rls (exact at m = g). Not clamped.
double p_rls_lower_bound(std::uint64_t m, std::uint32_t g, double eps, unsigned q);

// P(at least g of the K codebook symbols received within m round-robin
// transmissions); the first (m mod K) symbols have gone out floor(m/K)+1
// times, the rest floor(m/K) times.
double p_mds(std::uint64_t m, std::uint32_t K, std::uint32_t g, double eps);

// per-generation decode cdf of the configured scheme
double per_generation_cdf(std::uint64_t m, const SchemeParams& params);

// P(whole file decoded within t transmissions) under round-robin scheduling:
// with m = floor(t/n) completed rounds and r = t - m n leading generations
// one packet ahead, p_t = p_{m+1}^r p_m^(n-r).
double cdf_T(std::uint64_t t, const SchemeParams& params);

struct Expectation {
  double value = 0;        // sum over t of (1 - p_t), truncated + tail estimate
  double lower_bound = 0;  // n * sum_{m>=1} (1 - p_m^n)
  double upper_bound = 0;  // n * sum_{m>=0} (1 - p_m^n)
  double tol = 0;
};

// Expected delivery packet count by direct summation of the complement cdf.
// The regrouped closed-form series degenerates to 0/0 whenever two
// consecutive round probabilities coincide, so it is only kept as the
// cross-check below. Throws Errc::no_convergence past max_terms.
Expectation expected_T(const SchemeParams& params, double tol = 1e-12,
                       std::uint64_t max_terms = 10000000);

// Round-grouped series for the same expectation (difference-quotient form);
// agrees with expected_T up to truncation error.
double expected_T_regrouped(const SchemeParams& params, double tol = 1e-12,
                            std::uint64_t max_terms = 10000000);

struct Performance {
  double delivery_time_s = 0;
  double net_rate_Bps = 0;
  double energy_J = 0;
};

// Parametric model: delivery time at the nominal byte rate, net rate as
// file size over delivery time, and energy as receive power times delivery
// time. Stands in for device measurement, which is platform-specific.
Performance performance_measures(double delivery_packets, std::uint64_t file_blocks,
                                 std::uint32_t packet_bytes, double rate_Bps, double rx_power_W);

// Cached per-generation cdf plus the derived delivery distribution. Not
// thread-safe; give each thread its own instance.
class DeliveryDistribution {
public:
  explicit DeliveryDistribution(SchemeParams params);

  const SchemeParams& params() const { return params_; }
  double per_generation_cdf(std::uint64_t m) const;
  double cdf(std::uint64_t t) const;
  Expectation expectation(double tol = 1e-12, std::uint64_t max_terms = 10000000) const;

private:
  SchemeParams params_;
  mutable std::vector<double> pm_;
};

}  // namespace analysis
}  // namespace genstream
