#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace prs {

// Closed-form access cost of progressive retrieval when each of n nodes is
// Byzantine independently with probability p and nodes are accessed in a
// uniformly random order. Crash-stop nodes are modelled by shrinking n.

// Probability that exactly v of n nodes are Byzantine.
double pr_Av(std::uint32_t n, std::uint32_t v, double p);

// Largest stage at which decoding can succeed given v Byzantine nodes:
// min(v, floor((n - k_hat) / 2), n - v - k_hat). Negative means none.
std::int64_t max_success_stage(std::uint32_t n, std::uint32_t k_hat, std::uint32_t v);

// Probability that retrieval succeeds at exactly stage i (after k_hat + 2i
// accesses) given v Byzantine nodes. Throws OutOfRange when i lies outside
// [0, max_success_stage].
double pr_Bi_given_Av(std::uint32_t n, std::uint32_t k_hat, std::uint32_t i,
                      std::uint32_t v);

struct AnalyticResult {
  std::uint32_t n = 0;
  std::uint32_t k_hat = 0;
  double p = 0;
  std::uint32_t s = 0;  // crashed nodes
  double avg_accesses = 0;
  double pr_success = 0;
  // Success mass by access count k_hat + 2i (effective n = n - s).
  std::map<std::uint32_t, double> success_pmf;
  // Failure with v <= n - k_hat (unlucky access order).
  double fail_order_mass = 0;
  // Failure with v > n - k_hat (too few healthy nodes).
  double fail_excess_mass = 0;

  std::uint32_t effective_n() const noexcept { return n - s; }
  double fail_mass() const noexcept { return fail_order_mass + fail_excess_mass; }
  // Distribution of access counts with failures charged effective_n().
  std::map<std::uint32_t, double> access_pmf() const;
};

// Throws InvalidArgument unless 1 <= k_hat < n - s and 0 <= p <= 1.
AnalyticResult analyze(std::uint32_t n, std::uint32_t k_hat, double p, std::uint32_t s = 0);

double avg_accesses(std::uint32_t n, std::uint32_t k_hat, double p);
double pr_success(std::uint32_t n, std::uint32_t k_hat, double p);

}  // namespace prs
