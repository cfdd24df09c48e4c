#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "prs/gf.hpp"

namespace prs {

enum class Algorithm { Ird, Restart, Genie };

std::string_view to_string(Algorithm a) noexcept;
// Throws InvalidArgument for an unknown name.
Algorithm parse_algorithm(std::string_view name);

struct BenchConfig {
  FieldPtr field;
  std::uint32_t k_hat = 0;
  double p = 0;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  std::vector<Algorithm> algorithms{Algorithm::Ird, Algorithm::Restart, Algorithm::Genie};
};

// Per-algorithm decode timings for one codeword per trial, microseconds.
struct BenchRow {
  Algorithm algorithm = Algorithm::Ird;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double mean_accesses = 0;
  double mean_total_us = 0;
  double median_total_us = 0;
  double mean_elp_us = 0;
  double mean_chien_us = 0;
  double mean_inv_mat_us = 0;
  double mean_crc_us = 0;
};

// Every algorithm sees the same codeword, Byzantine set and access order in
// a given trial. One warm-up trial runs first and is discarded.
std::vector<BenchRow> run_bench(const BenchConfig& config);

std::string bench_csv(const BenchConfig& config, const std::vector<BenchRow>& rows);

}  // namespace prs
