// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances and seeds are fixed below.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "prs/analytics.hpp"
#include "prs/baseline.hpp"
#include "prs/bench.hpp"
#include "prs/codec.hpp"
#include "prs/ird.hpp"
#include "prs/retrieval.hpp"
#include "prs/sim.hpp"

namespace fs = std::filesystem;
using namespace prs;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Verdict()>& body) {
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++failures;
  std::printf("criterion %d %s %s: %s\n", id, v.pass ? "PASS" : "FAIL", title, v.detail.c_str());
  std::fflush(stdout);
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ------------------------------------------------------------------ 1

Verdict analytics_point() {
  const auto t0 = Clock::now();
  const double avg = avg_accesses(1023, 401, 0.01);
  const long stages = static_cast<long>(std::ceil((avg - 401) / 2));
  const double t = seconds_since(t0);
  const bool ok = std::abs(avg - 409.2) <= 0.3 && stages == 5 && t < 5;
  return {ok, fmt("avg_accesses=%.4f (409.2 +/- 0.3), stages=%ld (5), %.2fs (< 5s)", avg, stages, t)};
}

// ------------------------------------------------------------------ 2

Verdict analytics_success() {
  const auto t0 = Clock::now();
  const double p30 = pr_success(1023, 401, 0.30);
  double worst = 1.0;
  std::uint32_t worst_k = 0;
  double worst_p = 0;
  for (std::uint32_t k : {101u, 201u, 301u}) {
    for (int step = 0; step <= 6; ++step) {
      const double p = 0.05 * step;
      const double s = pr_success(1023, k, p);
      if (s < worst) {
        worst = s;
        worst_k = k;
        worst_p = p;
      }
    }
  }
  const double t = seconds_since(t0);
  const bool ok = std::abs(p30 - 0.60) <= 0.05 && worst >= 0.999 && t < 30;
  return {ok, fmt("pr_success(401, 0.30)=%.4f (0.60 +/- 0.05), min over k in {101,201,301}, "
                  "p<=0.30 = %.6f at k=%u p=%.2f (>= 0.999), %.2fs (< 30s)",
                  p30, worst, worst_k, worst_p, t)};
}

// ------------------------------------------------------------------ 3

// First stage l at which the error count among the first k + 2l accesses is
// at most l, or -1.
int first_stage(const std::vector<int>& seq, std::uint32_t k) {
  const std::uint32_t n = static_cast<std::uint32_t>(seq.size());
  std::uint32_t errs = 0, seen = 0;
  for (std::uint32_t l = 0; k + 2 * l <= n; ++l) {
    while (seen < k + 2 * l) errs += seq[seen++];
    if (errs <= l) return static_cast<int>(l);
  }
  return -1;
}

Verdict enumeration_oracle() {
  const auto t0 = Clock::now();
  double worst = 0;
  std::size_t cases = 0;
  for (std::uint32_t n = 1; n <= 9; ++n) {
    for (std::uint32_t k = 1; k <= n; ++k) {
      // hits[v][i]: sequences with v errors first decoding at stage i
      std::vector<std::vector<double>> hits(n + 1, std::vector<double>(n + 1, 0));
      std::vector<double> total(n + 1, 0);
      std::vector<int> seq(n);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::uint32_t v = 0;
        for (std::uint32_t b = 0; b < n; ++b) v += seq[b] = (mask >> b) & 1;
        total[v] += 1;
        const int st = first_stage(seq, k);
        if (st >= 0) hits[v][st] += 1;
      }
      for (std::uint32_t v = 0; v <= n; ++v) {
        const std::int64_t top = max_success_stage(n, k, v);
        for (std::uint32_t i = 0; i <= n; ++i) {
          const double expect = hits[v][i] / total[v];
          const double got =
              static_cast<std::int64_t>(i) <= top ? pr_Bi_given_Av(n, k, i, v) : 0.0;
          worst = std::max(worst, std::abs(got - expect));
          ++cases;
        }
      }
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-12 && t < 10,
          fmt("%zu (n<=9, k, v, i) cases, max |closed form - enumeration| = %.3g (<= 1e-12), "
              "%.2fs (< 10s)",
              cases, worst, t)};
}

// ------------------------------------------------------------------ 4

// Mean L1 between the closed-form pmf and histograms of `draws` samples
// drawn from that same pmf: the distance expected from sampling alone.
double l1_noise_floor(const AnalyticResult& an, std::size_t draws, int reps) {
  std::vector<double> mass;
  for (const auto& [a, q] : an.access_pmf()) mass.push_back(q);
  std::mt19937_64 rng(99);
  std::discrete_distribution<std::size_t> dist(mass.begin(), mass.end());
  double sum = 0;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> counts(mass.size(), 0);
    for (std::size_t d = 0; d < draws; ++d) counts[dist(rng)] += 1;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      sum += std::abs(counts[i] / static_cast<double>(draws) - dist.probabilities()[i]);
    }
  }
  return sum / reps;
}

Verdict monte_carlo() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (std::uint32_t k : {15u, 30u, 60u}) {
    TrialConfig cfg;
    cfg.field = make_field(7);
    cfg.k_hat = k;
    FailureModel model;
    model.p_byz = 0.2;
    model.master_seed = 1;
    const auto mc = run_monte_carlo(cfg, model, 5000);
    const auto an = analyze(127, k, 0.2);
    const double rel = std::abs(mc.mean_accesses - an.avg_accesses) / an.avg_accesses;
    const double l1 = histogram_l1(mc, an);
    const bool k_ok = rel <= 0.02 && l1 <= 0.05 && mc.silent_corruptions == 0;
    ok = ok && k_ok;
    detail += fmt("k=%u mean %.3f vs %.3f (rel %.4f <= 0.02) L1 %.4f (<= 0.05, sampling floor "
                  "%.4f)%s; ",
                  k, mc.mean_accesses, an.avg_accesses, rel, l1, l1_noise_floor(an, 5000, 200),
                  k_ok ? "" : " [out]");
  }
  const double t = seconds_since(t0);
  ok = ok && t < 120;
  return {ok, detail + fmt("%.1fs (< 120s)", t)};
}

// ------------------------------------------------------------------ 5

struct CaseOutcome {
  bool success = false;
  bool exact = false;
};

CaseOutcome run_case(const FieldPtr& field, std::uint32_t k, std::uint32_t s, std::uint32_t v,
                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const CodeParams probe = CodeParams::make(field, k, 0);
  const std::size_t bytes = 2 * std::max<std::size_t>(1, probe.data_bits_per_group() / 8);
  const CodeParams params = CodeParams::make(field, k, bytes);
  std::vector<std::uint8_t> data(bytes);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng());
  auto shards = encode_payload(data, params);

  std::vector<std::uint32_t> pos(params.n);
  std::iota(pos.begin(), pos.end(), 0u);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::vector<std::uint32_t> live(pos.begin() + s, pos.end());
  for (std::uint32_t e = 0; e < v; ++e) {
    for (auto& sym : shards[live[e]].symbols) sym = corrupt_symbol(sym, params.n, rng);
  }
  FetchFn fetch = [&](std::uint32_t p) -> std::optional<std::vector<Symbol>> {
    return shards[p].symbols;
  };
  const auto rep = progressive_retrieve(fetch, live, params, rng());
  return {rep.outcome == Outcome::Success, rep.outcome == Outcome::Success && rep.payload == data};
}

Verdict correction_guarantee() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  const std::pair<unsigned, std::uint32_t> codes[] = {{4, 9}, {8, 100}, {10, 401}};
  for (auto [m, k] : codes) {
    auto field = make_field(m);
    const std::uint32_t n = field->n();
    const std::uint32_t budget = n - k;
    std::mt19937_64 rng(1000 + m);
    std::size_t recovered = 0, silent = 0, rejected = 0;
    for (int t = 0; t < 1000; ++t) {
      const std::uint32_t s = rng() % (budget + 1);
      const std::uint32_t v = rng() % ((budget - s) / 2 + 1);
      if (run_case(field, k, s, v, rng()).exact) ++recovered;
    }
    for (int t = 0; t < 1000; ++t) {
      const std::uint32_t s = rng() % (budget + 1);
      const std::uint32_t lo = (budget - s) / 2 + 1;
      const std::uint32_t v = lo + rng() % (n - s - lo + 1);
      const auto r = run_case(field, k, s, v, rng());
      if (r.success && !r.exact) ++silent;
      if (!r.success) ++rejected;
    }
    const bool m_ok = recovered == 1000 && silent == 0;
    ok = ok && m_ok;
    detail += fmt("m=%u k=%u: 2v+s<=n-k recovered %zu/1000, 2v+s>n-k silent %zu (fail %zu); ",
                  m, k, recovered, silent, rejected);
  }
  return {ok, detail + fmt("%.1fs", seconds_since(t0))};
}

// ------------------------------------------------------------------ 6

Verdict incremental_vs_restart() {
  const auto t0 = Clock::now();
  std::size_t stages = 0, mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    std::mt19937_64 rng(trial_seed(6, t));
    const bool big = t % 2;
    CodeParams params = CodeParams::make(make_field(big ? 8 : 6), big ? 100 : 20, 1);
    const std::uint32_t n = params.n;
    GroupVector u(params.k_hat);
    for (auto& x : u) x = Symbol(rng() % (n + 1));
    Codeword word = encode_group(u, params);
    const std::uint32_t v = rng() % ((n - params.k_hat) / 2 + 10);
    std::vector<std::uint32_t> pos(n);
    std::iota(pos.begin(), pos.end(), 0u);
    std::shuffle(pos.begin(), pos.end(), rng);
    for (std::uint32_t e = 0; e < v; ++e) word[pos[e]] = corrupt_symbol(word[pos[e]], n, rng);
    std::shuffle(pos.begin(), pos.end(), rng);
    std::vector<Received> order;
    for (auto j : pos) order.push_back({j, word[j]});

    IncrementalDecoder dec(params, std::span(order).first(params.k_hat));
    std::size_t used = params.k_hat;
    while (dec.unaccessed_count() >= 2) {
      const auto inc = dec.step(order[used], order[used + 1]);
      used += 2;
      const auto rs = restart_decode(params, std::span(order).first(used), dec.stage());
      ++stages;
      if (rs.wb.lambda != dec.wb().lambda || rs.wb.omega != dec.wb().omega ||
          rs.outcome.verdict != inc.verdict || rs.outcome.trusted != inc.trusted) {
        ++mismatches;
      }
    }
  }
  return {mismatches == 0, fmt("1000 trials, %zu stages compared, %zu mismatches, %.1fs",
                               stages, mismatches, seconds_since(t0))};
}

// ------------------------------------------------------------------ 7

Verdict performance() {
  const auto t0 = Clock::now();
  std::vector<double> ird, restart;
  const double ps[] = {0.01, 0.1, 0.2};
  for (double p : ps) {
    BenchConfig cfg;
    cfg.field = make_field(10);
    cfg.k_hat = 401;
    cfg.p = p;
    cfg.trials = p < 0.05 ? 40 : 10;
    cfg.seed = 7;
    cfg.algorithms = {Algorithm::Ird, Algorithm::Restart};
    const auto rows = run_bench(cfg);
    ird.push_back(rows[0].mean_total_us);
    restart.push_back(rows[1].mean_total_us);
  }
  const double speedup0 = restart[0] / ird[0];
  bool monotone = true;
  std::string detail = fmt("p=0.01 ird %.0fus restart %.0fus speedup %.2f (>= 5); ratio ird/restart",
                           ird[0], restart[0], speedup0);
  for (std::size_t i = 0; i < 3; ++i) {
    detail += fmt(" p=%.2f:%.4f", ps[i], ird[i] / restart[i]);
    if (i > 0 && ird[i] / restart[i] > ird[i - 1] / restart[i - 1]) monotone = false;
  }
  const double t = seconds_since(t0);
  detail += fmt(" (non-increasing: %s), %.1fs (< 300s)", monotone ? "yes" : "no", t);
  return {speedup0 >= 5 && monotone && t < 300, detail};
}

// ------------------------------------------------------------------ 8

std::string run_capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int raw = pclose(pipe);
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

std::vector<std::uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string join(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

Verdict end_to_end() {
#ifndef PRS_CLI_PATH
  return {false, "CLI not built"};
#else
  const auto t0 = Clock::now();
  const fs::path dir = fs::temp_directory_path() / "prs_acceptance_e2e";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path input = dir / "input.bin";
  std::vector<std::uint8_t> data(1 << 20);
  std::mt19937_64 rng(8);
  for (auto& b : data) b = static_cast<std::uint8_t>(rng());
  std::ofstream(input, std::ios::binary)
      .write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));

  const std::string cli = PRS_CLI_PATH;
  int status = 0;
  run_capture(cli + " encode --input " + input.string() + " --out-dir " + (dir / "shards").string() +
                  " --m 10 --khat 401 2>/dev/null",
              status);
  if (status != 0) return {false, fmt("encode exited %d", status)};

  int good = 0;
  std::vector<std::size_t> accessed;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 pick(seed * 7919);
    std::vector<std::uint32_t> pos(1023);
    std::iota(pos.begin(), pos.end(), 0u);
    std::shuffle(pos.begin(), pos.end(), pick);
    const std::vector<std::uint32_t> corrupt(pos.begin(), pos.begin() + 10);
    const std::vector<std::uint32_t> crash(pos.begin() + 10, pos.begin() + 60);
    const fs::path out = dir / ("out_" + std::to_string(seed) + ".bin");
    const std::string json = run_capture(
        cli + " retrieve --shard-dir " + (dir / "shards").string() + " --out " + out.string() +
            " --seed " + std::to_string(seed) + " --corrupt-list " + join(corrupt) +
            " --crash-list " + join(crash),
        status);
    std::size_t nodes = 0;
    try {
      nodes = nlohmann::json::parse(json).at("nodes_accessed").get<std::size_t>();
    } catch (const std::exception&) {
      nodes = SIZE_MAX;
    }
    accessed.push_back(nodes);
    if (status == 0 && nodes <= 431 && slurp(out) == data) ++good;
  }
  fs::remove_all(dir);
  const auto worst = *std::max_element(accessed.begin(), accessed.end());
  return {good >= 19, fmt("%d/20 seeds exact with nodes_accessed <= 431 (need 19), max %zu, %.1fs",
                          good, worst, seconds_since(t0))};
#endif
}

}  // namespace

int main() {
  report(1, "analytics point-check", analytics_point);
  report(2, "analytics success rate", analytics_success);
  report(3, "stage law vs enumeration", enumeration_oracle);
  report(4, "Monte-Carlo vs closed form", monte_carlo);
  report(5, "correction guarantee", correction_guarantee);
  report(6, "incremental equals restart", incremental_vs_restart);
  report(7, "decode performance", performance);
  report(8, "CLI end-to-end", end_to_end);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
