#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "prs/analytics.hpp"
#include "prs/codec.hpp"
#include "prs/retrieval.hpp"

namespace prs {

struct FailureModel {
  double p_byz = 0.0;
  // Crashed positions; excluded from the live set.
  std::vector<std::uint32_t> crash_set;
  std::uint64_t master_seed = 0;
};

struct TrialConfig {
  FieldPtr field;
  std::uint32_t k_hat = 0;
  // Random payload size per trial; 0 means one group's worth of data.
  std::size_t payload_bytes = 0;
  DecoderKind decoder = DecoderKind::Incremental;
};

struct TrialResult {
  std::uint64_t seed = 0;
  RetrievalReport report;
  std::uint32_t byzantine = 0;
  bool payload_matches = false;
};

// splitmix64-based per-trial seed.
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept;

// XOR with a uniform nonzero field element so a corrupted symbol is always
// wrong.
template <typename Rng>
Symbol corrupt_symbol(Symbol s, std::uint32_t n, Rng& rng) {
  return static_cast<Symbol>(s ^ (1 + rng() % n));
}

// Encodes a random payload, marks each live node Byzantine with p_byz
// (corrupting every symbol it holds) and runs progressive retrieval.
TrialResult run_trial(const TrialConfig& config, const FailureModel& model,
                      std::uint64_t trial_index);

struct MonteCarloSummary {
  std::size_t trials = 0;
  // Means of analysis-normalized access counts (failures charged n - s)
  // and of raw fetch counts.
  double mean_accesses = 0;
  double mean_raw_accesses = 0;
  double success_rate = 0;
  // Analysis-normalized access count -> number of trials.
  std::map<std::uint32_t, std::size_t> histogram;
  // Success reported but payload differs from the original.
  std::size_t silent_corruptions = 0;
  std::vector<std::uint64_t> seeds;
};

MonteCarloSummary run_monte_carlo(const TrialConfig& config, const FailureModel& model,
                                  std::size_t trials);

// Sum over access counts of |empirical frequency - closed-form mass|.
double histogram_l1(const MonteCarloSummary& summary, const AnalyticResult& analytic);

}  // namespace prs
