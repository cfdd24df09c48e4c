#include "prs/sim.hpp"

#include <cmath>
#include <random>
#include <set>

#include "prs/error.hpp"
#include "prs/parallel.hpp"

namespace prs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept {
  return splitmix64(master_seed ^ splitmix64(trial_index));
}

TrialResult run_trial(const TrialConfig& config, const FailureModel& model,
                      std::uint64_t trial_index) {
  if (!(model.p_byz >= 0.0 && model.p_byz <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "p_byz must be in [0, 1]");
  }
  TrialResult result;
  result.seed = trial_seed(model.master_seed, trial_index);
  std::mt19937_64 rng(result.seed);

  const CodeParams probe = CodeParams::make(config.field, config.k_hat, 0);
  const std::size_t bytes = config.payload_bytes != 0
                                ? config.payload_bytes
                                : std::max<std::size_t>(1, probe.data_bits_per_group() / 8);
  const CodeParams params = CodeParams::make(config.field, config.k_hat, bytes);

  std::vector<std::uint8_t> payload(bytes);
  for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
  std::vector<Shard> shards = encode_payload(payload, params);

  std::vector<std::uint8_t> crashed(params.n, 0);
  for (std::uint32_t p : model.crash_set) {
    if (p >= params.n) throw Error(ErrorCode::OutOfRange, "crash position outside code");
    crashed[p] = 1;
  }
  std::vector<std::uint32_t> live;
  for (std::uint32_t j = 0; j < params.n; ++j) {
    if (crashed[j]) continue;
    live.push_back(j);
    if (unit(rng) < model.p_byz) {
      ++result.byzantine;
      for (auto& s : shards[j].symbols) s = corrupt_symbol(s, params.n, rng);
    }
  }

  const std::uint64_t retrieval_seed = rng();
  if (live.size() < params.k_hat) {
    result.report.outcome = Outcome::Fail;
    result.report.live_nodes = live.size();
    result.report.analysis_accesses = live.size();
    return result;
  }
  FetchFn fetch = [&](std::uint32_t pos) -> std::optional<std::vector<Symbol>> {
    return shards[pos].symbols;
  };
  RetrieveOptions opts;
  opts.decoder = config.decoder;
  result.report = progressive_retrieve(fetch, live, params, retrieval_seed, opts);
  result.payload_matches =
      result.report.outcome == Outcome::Success && result.report.payload == payload;
  return result;
}

MonteCarloSummary run_monte_carlo(const TrialConfig& config, const FailureModel& model,
                                  std::size_t trials) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "need at least one trial");
  struct Row {
    std::uint64_t seed;
    std::size_t accesses;
    std::size_t raw;
    bool success;
    bool silent;
  };
  std::vector<Row> rows(trials);
  parallel_for(trials, [&](std::size_t i) {
    TrialResult t = run_trial(config, model, i);
    const bool ok = t.report.outcome == Outcome::Success;
    rows[i] = {t.seed, t.report.analysis_accesses, t.report.nodes_accessed, ok,
               ok && !t.payload_matches};
  });

  MonteCarloSummary s;
  s.trials = trials;
  double sum = 0, sum_raw = 0;
  std::size_t successes = 0;
  for (const Row& r : rows) {
    s.seeds.push_back(r.seed);
    sum += static_cast<double>(r.accesses);
    sum_raw += static_cast<double>(r.raw);
    successes += r.success ? 1 : 0;
    s.silent_corruptions += r.silent ? 1 : 0;
    ++s.histogram[static_cast<std::uint32_t>(r.accesses)];
  }
  s.mean_accesses = sum / static_cast<double>(trials);
  s.mean_raw_accesses = sum_raw / static_cast<double>(trials);
  s.success_rate = static_cast<double>(successes) / static_cast<double>(trials);
  return s;
}

double histogram_l1(const MonteCarloSummary& summary, const AnalyticResult& analytic) {
  const auto pmf = analytic.access_pmf();
  std::set<std::uint32_t> keys;
  for (const auto& [k, _] : pmf) keys.insert(k);
  for (const auto& [k, _] : summary.histogram) keys.insert(k);
  double l1 = 0;
  for (std::uint32_t k : keys) {
    const auto it = summary.histogram.find(k);
    const double emp = it == summary.histogram.end()
                           ? 0.0
                           : static_cast<double>(it->second) / static_cast<double>(summary.trials);
    const auto jt = pmf.find(k);
    l1 += std::abs(emp - (jt == pmf.end() ? 0.0 : jt->second));
  }
  return l1;
}

}  // namespace prs
