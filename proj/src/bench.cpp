#include "prs/bench.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "prs/baseline.hpp"
#include "prs/codec.hpp"
#include "prs/error.hpp"
#include "prs/retrieval.hpp"
#include "prs/sim.hpp"
#include "timer.hpp"

namespace prs {

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::Ird: return "ird";
    case Algorithm::Restart: return "restart";
    case Algorithm::Genie: return "genie";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "ird") return Algorithm::Ird;
  if (name == "restart") return Algorithm::Restart;
  if (name == "genie") return Algorithm::Genie;
  throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

namespace {

class VectorSource final : public AccessSource {
 public:
  explicit VectorSource(std::span<const Received> order) : order_(order) {}
  std::optional<Received> next() override {
    if (idx_ >= order_.size()) return std::nullopt;
    return order_[idx_++];
  }
  std::size_t remaining() const override { return order_.size() - idx_; }

 private:
  std::span<const Received> order_;
  std::size_t idx_ = 0;
};

struct TrialTiming {
  PhaseTimes times;
  std::size_t accesses = 0;
  bool success = false;
};

TrialTiming run_one(Algorithm alg, const CodeParams& params, std::span<const Received> order,
               std::uint32_t byzantine, const GroupVector& truth) {
  TrialTiming s;
  if (alg == Algorithm::Genie) {
    auto u = genie_decode(params, order, byzantine, &s.times);
    s.accesses = params.k_hat + 2 * static_cast<std::size_t>(byzantine);
    if (u) {
      detail::ScopedPhase t(&s.times.crc);
      s.success = crc_test(*u, params) && *u == truth;
    }
    return s;
  }
  VectorSource src(order);
  GroupResult r = retrieve_group(
      params, src, alg == Algorithm::Ird ? DecoderKind::Incremental : DecoderKind::Restart,
      &s.times);
  s.accesses = r.symbols_used;
  s.success = r.success && r.u == truth;
  return s;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  if (config.trials == 0) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  if (config.algorithms.empty()) throw Error(ErrorCode::InvalidArgument, "no algorithms");
  const CodeParams probe = CodeParams::make(config.field, config.k_hat, 0);
  const std::size_t bytes = std::max<std::size_t>(1, probe.data_bits_per_group() / 8);
  const CodeParams params = CodeParams::make(config.field, config.k_hat, bytes);

  std::vector<std::vector<TrialTiming>> samples(config.algorithms.size());
  for (std::size_t t = 0; t <= config.trials; ++t) {
    std::mt19937_64 rng(trial_seed(config.seed, t));
    std::vector<std::uint8_t> payload(bytes);
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
    const GroupVector truth = frame_payload(payload, params).front();
    Codeword word = encode_group(truth, params);
    std::uint32_t byzantine = 0;
    for (auto& sym : word) {
      if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < config.p) {
        sym = corrupt_symbol(sym, params.n, rng);
        ++byzantine;
      }
    }
    std::vector<std::uint32_t> positions(params.n);
    for (std::uint32_t j = 0; j < params.n; ++j) positions[j] = j;
    std::vector<Received> order;
    for (std::uint32_t j : access_order(positions, rng())) order.push_back({j, word[j]});

    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
      TrialTiming s = run_one(config.algorithms[a], params, order, byzantine, truth);
      if (t > 0) samples[a].push_back(s);  // trial 0 is the warm-up
    }
  }

  std::vector<BenchRow> rows;
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    BenchRow row;
    row.algorithm = config.algorithms[a];
    row.trials = samples[a].size();
    std::vector<double> totals;
    for (const TrialTiming& s : samples[a]) {
      row.successes += s.success ? 1 : 0;
      row.mean_accesses += static_cast<double>(s.accesses);
      row.mean_elp_us += s.times.elp * 1e6;
      row.mean_chien_us += s.times.chien * 1e6;
      row.mean_inv_mat_us += s.times.inv_mat * 1e6;
      row.mean_crc_us += s.times.crc * 1e6;
      totals.push_back(s.times.total() * 1e6);
    }
    const double count = static_cast<double>(row.trials);
    row.mean_accesses /= count;
    row.mean_elp_us /= count;
    row.mean_chien_us /= count;
    row.mean_inv_mat_us /= count;
    row.mean_crc_us /= count;
    for (double v : totals) row.mean_total_us += v / count;
    std::sort(totals.begin(), totals.end());
    const std::size_t mid = totals.size() / 2;
    row.median_total_us =
        totals.size() % 2 ? totals[mid] : 0.5 * (totals[mid - 1] + totals[mid]);
    rows.push_back(row);
  }
  return rows;
}

std::string bench_csv(const BenchConfig& config, const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "algorithm,n,k_hat,p,trials,successes,mean_accesses,mean_total_us,median_total_us,"
         "elp_time_us,chien_time_us,inv_mat_time_us,crc_time_us\n";
  for (const BenchRow& r : rows) {
    out << to_string(r.algorithm) << ',' << config.field->n() << ',' << config.k_hat << ','
        << config.p << ',' << r.trials << ',' << r.successes << ',' << r.mean_accesses << ','
        << r.mean_total_us << ',' << r.median_total_us << ',' << r.mean_elp_us << ','
        << r.mean_chien_us << ',' << r.mean_inv_mat_us << ',' << r.mean_crc_us << '\n';
  }
  return out.str();
}

}  // namespace prs
