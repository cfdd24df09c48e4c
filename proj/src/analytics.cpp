#include "prs/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prs/error.hpp"

namespace prs {

namespace {

double log_binom(std::uint32_t n, std::uint32_t k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log Pr(B_i | A_v); the caller guarantees i is in range.
double log_pr_bi(std::uint32_t n, std::uint32_t k, std::uint32_t i, std::uint32_t v) {
  const std::uint32_t healthy_before = i + k - 1;  // healthy nodes among the first 2i+k-1
  const std::uint32_t before = 2 * i + k - 1;
  const double reach = log_binom(n - v, healthy_before) + log_binom(v, i) - log_binom(n, before);
  const double ballot = std::log(static_cast<double>(k) / (i + k));
  const double last_healthy =
      std::log(static_cast<double>(n - v - healthy_before) / (n - before));
  return reach + ballot + last_healthy;
}

}  // namespace

double pr_Av(std::uint32_t n, std::uint32_t v, double p) {
  if (v > n) return 0.0;
  if (p <= 0.0) return v == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return v == n ? 1.0 : 0.0;
  return std::exp(log_binom(n, v) + v * std::log(p) + (n - v) * std::log1p(-p));
}

std::int64_t max_success_stage(std::uint32_t n, std::uint32_t k_hat, std::uint32_t v) {
  const std::int64_t a = v;
  const std::int64_t b = (static_cast<std::int64_t>(n) - k_hat) / 2;
  const std::int64_t c = static_cast<std::int64_t>(n) - v - k_hat;
  return std::min({a, b, c});
}

double pr_Bi_given_Av(std::uint32_t n, std::uint32_t k_hat, std::uint32_t i,
                      std::uint32_t v) {
  if (k_hat < 1 || k_hat > n || v > n ||
      static_cast<std::int64_t>(i) > max_success_stage(n, k_hat, v)) {
    throw Error(ErrorCode::OutOfRange, "stage " + std::to_string(i) + " out of range for n=" +
                                           std::to_string(n) + " k_hat=" +
                                           std::to_string(k_hat) + " v=" + std::to_string(v));
  }
  return std::exp(log_pr_bi(n, k_hat, i, v));
}

std::map<std::uint32_t, double> AnalyticResult::access_pmf() const {
  auto pmf = success_pmf;
  pmf[effective_n()] += fail_mass();
  return pmf;
}

AnalyticResult analyze(std::uint32_t n, std::uint32_t k_hat, double p, std::uint32_t s) {
  if (s >= n || k_hat < 1 || k_hat >= n - s) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= k_hat < n - s");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be in [0, 1]");

  AnalyticResult r;
  r.n = n;
  r.k_hat = k_hat;
  r.p = p;
  r.s = s;
  const std::uint32_t ne = n - s;

  for (std::uint32_t v = 0; v <= ne; ++v) {
    const double pa = pr_Av(ne, v, p);
    if (pa == 0.0) continue;
    if (v > ne - k_hat) {
      r.fail_excess_mass += pa;
      continue;
    }
    double within = 0.0;
    const std::int64_t top = max_success_stage(ne, k_hat, v);
    for (std::int64_t i = 0; i <= top; ++i) {
      const double pb = std::exp(log_pr_bi(ne, k_hat, static_cast<std::uint32_t>(i), v));
      within += pb;
      r.success_pmf[k_hat + 2 * static_cast<std::uint32_t>(i)] += pa * pb;
    }
    r.fail_order_mass += pa * std::max(0.0, 1.0 - within);
  }

  for (const auto& [accesses, mass] : r.success_pmf) {
    r.avg_accesses += accesses * mass;
    r.pr_success += mass;
  }
  r.avg_accesses += static_cast<double>(ne) * r.fail_mass();
  return r;
}

double avg_accesses(std::uint32_t n, std::uint32_t k_hat, double p) {
  return analyze(n, k_hat, p).avg_accesses;
}

double pr_success(std::uint32_t n, std::uint32_t k_hat, double p) {
  return analyze(n, k_hat, p).pr_success;
}

}  // namespace prs
