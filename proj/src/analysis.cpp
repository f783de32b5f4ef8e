#include "genstream/analysis.hpp"

#include <cmath>
#include <cstdio>

namespace genstream {
namespace analysis {

namespace {

// clamp to [0,1]; excursions beyond 1e-9 indicate cancellation trouble and
// are reported rather than silently hidden
double clamp_prob(double x, const char* what) {
  if (x < -1e-9 || x > 1.0 + 1e-9)
    std::fprintf(stderr, "genstream: %s left [0,1] by %.3e\n", what, x < 0 ? -x : x - 1.0);
  if (x < 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  return x;
}

}  // namespace

double binom_pmf(std::uint64_t m, std::uint64_t j, double p) {
  if (j > m) return 0.0;
  if (p <= 0.0) return j == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return j == m ? 1.0 : 0.0;
  if (m <= 60) {
    double c = 1.0;
    std::uint64_t k = j <= m - j ? j : m - j;
    for (std::uint64_t i = 1; i <= k; ++i) c = c * double(m - k + i) / double(i);
    return c * std::pow(p, double(j)) * std::pow(1.0 - p, double(m - j));
  }
  double lg = std::lgamma(double(m) + 1.0) - std::lgamma(double(j) + 1.0) -
              std::lgamma(double(m - j) + 1.0) + double(j) * std::log(p) +
              double(m - j) * std::log1p(-p);
  return std::exp(lg);
}

double full_rank_prob(std::uint64_t j, std::uint32_t g, unsigned q) {
  if (j < g) return 0.0;
  double prod = 1.0;
  for (std::uint32_t s = 0; s < g; ++s)
    prod *= 1.0 - std::pow(double(q), double(s) - double(j));
  return prod;
}

double full_rank_lower_bound(std::uint64_t j, std::uint32_t g, unsigned q) {
  if (j < g) return 0.0;
  if (q == 2 && j == g) return 0.288;
  return 1.0 - 1.0 / (std::pow(double(q), double(j - g)) * double(q - 1));
}

double p_rl(std::uint64_t m, std::uint32_t g, double eps, unsigned q) {
  if (m < g) return 0.0;
  double sum = 0.0;
  for (std::uint64_t j = g; j <= m; ++j)
    sum += binom_pmf(m, j, 1.0 - eps) * full_rank_prob(j, g, q);
  return clamp_prob(sum, "p_rl");
}

double p_rl_large_q_lower_bound(std::uint64_t m, std::uint32_t g, double eps, unsigned q) {
  // second sum collapses: (q eps)^(m-j) q^(g-m) = eps^(m-j) q^(g-j)
  double s1 = 0.0, s2 = 0.0;
  for (std::uint64_t j = g; j <= m; ++j) {
    double b = binom_pmf(m, j, 1.0 - eps);
    s1 += b;
    s2 += b * std::pow(double(q), double(g) - double(j));
  }
  double v = s1 - s2 / double(q - 1);
  if (v < 0.0) return 0.0;
  if (v > 1.0) return 1.0;
  return v;
}

double p_rls(std::uint64_t m, std::uint32_t g, double eps, unsigned q) {
  if (m < g) return 0.0;
  double sum = std::pow(1.0 - eps, double(g));
  for (std::uint32_t l = 0; l < g; ++l)
    sum += binom_pmf(g, l, 1.0 - eps) * p_rl(m - g, g - l, eps, q);
  return clamp_prob(sum, "p_rls");
}

double p_rls_lower_bound(std::uint64_t m, std::uint32_t g, double eps, unsigned q) {
  double a = 0.0, c = 0.0;
  for (std::uint64_t j = g; j <= m; ++j) {
    double b = binom_pmf(m, j, 1.0 - eps);
    a += b;
    c += b * std::pow(double(q), double(g) - double(j));
  }
  double sys = std::pow(1.0 - eps, double(g));
  double b = sys / double(q - 1) * std::pow((1.0 - eps) / double(q) + eps, double(m - g));
  return a + b - c / double(q - 1);
}

double p_mds(std::uint64_t m, std::uint32_t K, std::uint32_t g, double eps) {
  if (g > K) raise(Errc::bad_spec, "MDS needs g <= K");
  if (m < g) return 0.0;
  std::uint64_t u = m / K;
  std::uint32_t v = std::uint32_t(m - u * K);
  double eu = std::pow(eps, double(u));  // miss probability of a symbol sent u times
  double eu1 = eu * eps;

  // inner tail: P(at most i of the K-v trailing symbols missing), prefix sums
  std::vector<double> inner(std::size_t(K - g) + 1);
  {
    double acc = 0.0;
    for (std::uint32_t i = 0; i <= K - g; ++i) {
      acc += binom_pmf(K - v, i, eu);
      inner[i] = acc;
    }
  }
  double sum = 0.0;
  for (std::uint32_t l = 0; l <= K - g; ++l) {
    double outer = binom_pmf(v, l, eu1);
    if (outer != 0.0) sum += outer * inner[K - g - l];
  }
  return clamp_prob(sum, "p_mds");
}

double per_generation_cdf(std::uint64_t m, const SchemeParams& params) {
  switch (params.scheme) {
    case SchemeKind::rl: return p_rl(m, params.g, params.channel.epsilon, params.q());
    case SchemeKind::rls: return p_rls(m, params.g, params.channel.epsilon, params.q());
    default: return p_mds(m, params.mds_K(), params.g, params.channel.epsilon);
  }
}

double cdf_T(std::uint64_t t, const SchemeParams& params) {
  std::uint64_t m = t / params.n;
  std::uint64_t r = t - m * params.n;
  double pm = per_generation_cdf(m, params);
  double pm1 = per_generation_cdf(m + 1, params);
  return std::pow(pm1, double(r)) * std::pow(pm, double(params.n - r));
}

namespace {

// shared summation core; pm is a callable m -> per-generation cdf
template <class PmFn>
Expectation expectation_impl(const PmFn& pm_fn, std::uint32_t n, double tol,
                             std::uint64_t max_terms) {
  Expectation out;
  out.tol = tol;

  double e = 0.0;
  double bound_sum1 = 0.0;  // sum_{m>=1} (1 - p_m^n)
  double bound_m0 = 0.0;    // 1 - p_0^n
  double prev_contrib = -1.0, contrib = -1.0;
  double prev_gap = -1.0, gap = -1.0;
  std::uint64_t terms = 0;

  double pm = pm_fn(0);
  for (std::uint64_t m = 0;; ++m) {
    double pmn = std::pow(pm, double(n));
    prev_gap = gap;
    gap = 1.0 - pmn;
    if (m == 0)
      bound_m0 = gap;
    else
      bound_sum1 += gap;

    if (gap < tol) {
      // geometric tails from the last observed decay ratios
      if (prev_gap > 0.0 && gap > 0.0) {
        double rho = gap / prev_gap;
        if (rho < 1.0) bound_sum1 += gap * rho / (1.0 - rho);
      }
      if (prev_contrib > 0.0 && contrib > 0.0) {
        double rho = contrib / prev_contrib;
        if (rho < 1.0) e += contrib * rho / (1.0 - rho);
      }
      break;
    }

    double pm1 = pm_fn(m + 1);
    if (pm1 < pm) pm1 = pm;  // enforce the cdf monotonicity against rounding
    double c = 0.0;
    double head = 1.0;  // pm1^r
    for (std::uint32_t r = 0; r < n; ++r) {
      c += 1.0 - head * std::pow(pm, double(n - r));
      head *= pm1;
    }
    e += c;
    prev_contrib = contrib;
    contrib = c;

    terms += n;
    if (terms > max_terms)
      raise(Errc::no_convergence, "delivery cdf did not approach 1 within " +
                                      std::to_string(max_terms) + " transmissions");
    pm = pm1;
  }

  out.value = e;
  out.lower_bound = double(n) * bound_sum1;
  out.upper_bound = double(n) * (bound_sum1 + bound_m0);
  return out;
}

}  // namespace

Expectation expected_T(const SchemeParams& params, double tol, std::uint64_t max_terms) {
  params.validate();
  return expectation_impl([&](std::uint64_t m) { return per_generation_cdf(m, params); },
                          params.n, tol, max_terms);
}

double expected_T_regrouped(const SchemeParams& params, double tol, std::uint64_t max_terms) {
  params.validate();
  std::uint32_t n = params.n;
  double e = 0.0;
  double prev_term = -1.0;
  std::uint64_t terms = 0;
  double pm = per_generation_cdf(0, params);
  for (std::uint64_t m = 0;; ++m) {
    double pm1 = per_generation_cdf(m + 1, params);
    if (pm1 < pm) pm1 = pm;
    double term;
    if (pm1 - pm < 1e-15) {
      term = double(n) * (1.0 - std::pow(pm, double(n)));  // difference-quotient limit
    } else {
      term = double(n) -
             pm * (std::pow(pm1, double(n)) - std::pow(pm, double(n))) / (pm1 - pm);
    }
    e += term;
    if (term < tol) {
      if (prev_term > 0.0 && term > 0.0) {
        double rho = term / prev_term;
        if (rho < 1.0) e += term * rho / (1.0 - rho);
      }
      break;
    }
    prev_term = term;
    terms += n;
    if (terms > max_terms)
      raise(Errc::no_convergence, "regrouped series did not converge");
    pm = pm1;
  }
  return e;
}

Performance performance_measures(double delivery_packets, std::uint64_t file_blocks,
                                 std::uint32_t packet_bytes, double rate_Bps, double rx_power_W) {
  if (rate_Bps <= 0.0 || rx_power_W <= 0.0)
    raise(Errc::config_error, "rate and receive power must be positive");
  Performance p;
  p.delivery_time_s = delivery_packets * double(packet_bytes) / rate_Bps;
  double file_size = double(file_blocks) * double(packet_bytes);
  p.net_rate_Bps = file_size / p.delivery_time_s;
  p.energy_J = rx_power_W * p.delivery_time_s;
  return p;
}

DeliveryDistribution::DeliveryDistribution(SchemeParams params) : params_(std::move(params)) {
  params_.validate();
}

double DeliveryDistribution::per_generation_cdf(std::uint64_t m) const {
  while (pm_.size() <= m) {
    double raw = analysis::per_generation_cdf(pm_.size(), params_);
    if (!pm_.empty() && raw < pm_.back()) raw = pm_.back();
    pm_.push_back(raw);
  }
  return pm_[m];
}

double DeliveryDistribution::cdf(std::uint64_t t) const {
  std::uint64_t m = t / params_.n;
  std::uint64_t r = t - m * params_.n;
  return std::pow(per_generation_cdf(m + 1), double(r)) *
         std::pow(per_generation_cdf(m), double(params_.n - r));
}

Expectation DeliveryDistribution::expectation(double tol, std::uint64_t max_terms) const {
  return expectation_impl([&](std::uint64_t m) { return per_generation_cdf(m); }, params_.n, tol,
                          max_terms);
}

}  // namespace analysis
}  // namespace genstream
