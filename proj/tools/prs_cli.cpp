// prs: encode files into shard sets, retrieve them progressively, evaluate
// the closed-form access cost, run Monte-Carlo simulations and benchmarks.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "prs/analytics.hpp"
#include "prs/bench.hpp"
#include "prs/codec.hpp"
#include "prs/error.hpp"
#include "prs/report_json.hpp"
#include "prs/retrieval.hpp"
#include "prs/sim.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw prs::Error(prs::ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw prs::Error(prs::ErrorCode::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw prs::Error(prs::ErrorCode::Io, "short write to " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint32_t> parse_positions(const std::string& list) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      throw UsageError("bad position '" + item + "'");
    }
  }
  return out;
}

std::string shard_name(std::uint32_t j) { return "shard_" + std::to_string(j) + ".prs1"; }

// Resolves --n / --m: either may be given, and they must agree.
unsigned resolve_width(std::uint32_t n, unsigned m) {
  if (m == 0 && n == 0) throw UsageError("one of --n or --m is required");
  if (m == 0) {
    for (unsigned w = prs::Field::kMinWidth; w <= prs::Field::kMaxWidth; ++w) {
      if ((1u << w) - 1 == n) return w;
    }
    throw UsageError("--n must be 2^m - 1 for some m in [3, 16]");
  }
  if (n != 0 && n != (1u << m) - 1) throw UsageError("--n and --m disagree");
  return m;
}

// ---------------------------------------------------------------- encode

struct EncodeArgs {
  std::string input;
  std::string out_dir;
  unsigned m = 10;
  std::uint32_t k_hat = 0;
  std::string prim_poly;
};

int cmd_encode(const EncodeArgs& a) {
  const std::uint32_t poly = a.prim_poly.empty()
                                 ? prs::Field::default_poly(a.m)
                                 : static_cast<std::uint32_t>(std::stoul(a.prim_poly, nullptr, 16));
  auto field = prs::make_field(a.m, poly);
  const auto data = read_file(a.input);
  const auto params = prs::CodeParams::make(field, a.k_hat, data.size());
  const auto shards = prs::encode_payload(data, params);

  fs::create_directories(a.out_dir);
  for (const auto& s : shards) {
    write_file(fs::path(a.out_dir) / shard_name(s.position), prs::serialize_shard(s));
  }
  nlohmann::json manifest = {{"m", params.m()},
                             {"prim_poly", poly},
                             {"n", params.n},
                             {"k_hat", params.k_hat},
                             {"crc_width", params.crc_width},
                             {"group_count", params.group_count},
                             {"payload_byte_len", params.payload_byte_len},
                             {"file_crc32", prs::crc32(data)}};
  write_text(fs::path(a.out_dir) / "manifest.json", manifest.dump(2) + "\n");
  std::cerr << "wrote " << shards.size() << " shards, " << params.group_count
            << " groups each\n";
  return kExitOk;
}

// -------------------------------------------------------------- retrieve

struct RetrieveArgs {
  std::string shard_dir;
  std::string out;
  std::uint64_t seed = 0;
  std::string corrupt_list;
  std::string crash_list;
  std::string decoder = "ird";
};

int cmd_retrieve(const RetrieveArgs& a) {
  const fs::path dir(a.shard_dir);
  if (!fs::is_directory(dir)) throw prs::Error(prs::ErrorCode::Io, "no such directory " + a.shard_dir);

  std::vector<prs::Shard> shards;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".prs1") continue;
    shards.push_back(prs::parse_shard(read_file(entry.path())));
  }
  if (shards.empty()) throw prs::Error(prs::ErrorCode::Io, "no shard files in " + a.shard_dir);
  const prs::Shard& ref = shards.front();
  for (const auto& s : shards) {
    if (s.m != ref.m || s.n != ref.n || s.k_hat != ref.k_hat ||
        s.group_count != ref.group_count || s.payload_byte_len != ref.payload_byte_len) {
      throw prs::Error(prs::ErrorCode::Format, "shard headers disagree");
    }
  }

  std::uint32_t poly = prs::Field::default_poly(ref.m);
  std::optional<std::uint32_t> file_crc;
  const fs::path manifest_path = dir / "manifest.json";
  if (fs::exists(manifest_path)) {
    try {
      const auto manifest = nlohmann::json::parse(read_file(manifest_path));
      poly = manifest.at("prim_poly").get<std::uint32_t>();
      file_crc = manifest.at("file_crc32").get<std::uint32_t>();
    } catch (const nlohmann::json::exception& e) {
      throw prs::Error(prs::ErrorCode::Format, std::string("manifest: ") + e.what());
    }
  }
  const auto params =
      prs::CodeParams::make(prs::make_field(ref.m, poly), ref.k_hat, ref.payload_byte_len);
  if (params.group_count != ref.group_count) {
    throw prs::Error(prs::ErrorCode::Format, "group count does not match payload length");
  }

  std::vector<std::vector<prs::Symbol>> by_position(params.n);
  std::vector<std::uint8_t> present(params.n, 0);
  for (auto& s : shards) {
    if (present[s.position]) throw prs::Error(prs::ErrorCode::Format, "duplicate shard position");
    present[s.position] = 1;
    by_position[s.position] = std::move(s.symbols);
  }
  for (std::uint32_t p : parse_positions(a.crash_list)) {
    if (p >= params.n) throw UsageError("crash position out of range");
    present[p] = 0;
  }
  std::mt19937_64 rng(a.seed ^ 0xC0FFEE5EEDull);
  for (std::uint32_t p : parse_positions(a.corrupt_list)) {
    if (p >= params.n) throw UsageError("corrupt position out of range");
    for (auto& sym : by_position[p]) sym = prs::corrupt_symbol(sym, params.n, rng);
  }
  std::vector<std::uint32_t> live;
  for (std::uint32_t j = 0; j < params.n; ++j) {
    if (present[j]) live.push_back(j);
  }
  if (live.size() < params.k_hat) {
    throw prs::Error(prs::ErrorCode::InsufficientLiveNodes,
                     std::to_string(live.size()) + " readable shards, need " +
                         std::to_string(params.k_hat));
  }

  prs::RetrieveOptions opts;
  if (a.decoder == "restart") {
    opts.decoder = prs::DecoderKind::Restart;
  } else if (a.decoder != "ird") {
    throw UsageError("--decoder must be ird or restart");
  }
  prs::FetchFn fetch = [&](std::uint32_t pos) -> std::optional<std::vector<prs::Symbol>> {
    return by_position[pos];
  };
  const auto report = prs::progressive_retrieve(fetch, live, params, a.seed, opts);
  auto json = prs::to_json(report);
  if (report.outcome == prs::Outcome::Success) {
    if (file_crc) json["file_crc_ok"] = prs::crc32(report.payload) == *file_crc;
    write_file(a.out, report.payload);
  }
  std::cout << json.dump() << "\n";
  return report.outcome == prs::Outcome::Success ? kExitOk : kExitFail;
}

// --------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::uint32_t n = 0;
  std::uint32_t k_hat = 0;
  double p = 0;
  std::uint32_t s = 0;
  std::string out;
};

int cmd_analyze(const AnalyzeArgs& a) {
  const auto r = prs::analyze(a.n, a.k_hat, a.p, a.s);
  const std::string text = prs::to_json(r).dump(2) + "\n";
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    write_text(a.out, text);
  }
  return kExitOk;
}

// -------------------------------------------------------------- simulate

struct SimulateArgs {
  std::uint32_t n = 0;
  unsigned m = 0;
  std::uint32_t k_hat = 0;
  double p = 0;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::uint32_t s = 0;
  std::size_t payload_bytes = 0;
  std::string out;
  std::string csv;
  bool check = false;
};

int cmd_simulate(const SimulateArgs& a) {
  const unsigned m = resolve_width(a.n, a.m);
  prs::TrialConfig config;
  config.field = prs::make_field(m);
  config.k_hat = a.k_hat;
  config.payload_bytes = a.payload_bytes;
  const std::uint32_t n = config.field->n();
  if (a.s >= n) throw UsageError("--s must be below n");

  prs::FailureModel model;
  model.p_byz = a.p;
  model.master_seed = a.seed;
  std::vector<std::uint32_t> all(n);
  for (std::uint32_t j = 0; j < n; ++j) all[j] = j;
  std::mt19937_64 rng(a.seed ^ 0xC4A5115E7ull);
  std::shuffle(all.begin(), all.end(), rng);
  model.crash_set.assign(all.begin(), all.begin() + a.s);

  const auto summary = prs::run_monte_carlo(config, model, a.trials);
  const auto analytic = prs::analyze(n, a.k_hat, a.p, a.s);
  auto json = prs::to_json(summary);
  const double l1 = prs::histogram_l1(summary, analytic);
  const double rel = std::abs(summary.mean_accesses - analytic.avg_accesses) /
                     std::max(1.0, analytic.avg_accesses);
  json["analytic"] = {{"avg_accesses", analytic.avg_accesses},
                      {"pr_success", analytic.pr_success},
                      {"mean_relative_error", rel},
                      {"histogram_l1", l1}};
  const std::string text = json.dump(2) + "\n";
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    write_text(a.out, text);
  }
  if (!a.csv.empty()) write_text(a.csv, prs::histogram_csv(summary));

  if (a.check) {
    const bool ok = rel <= 0.02 && l1 <= 0.05 && summary.silent_corruptions == 0;
    std::cerr << "check: mean_rel_err=" << rel << " l1=" << l1
              << " silent=" << summary.silent_corruptions << (ok ? " PASS" : " FAIL") << "\n";
    return ok ? kExitOk : kExitFail;
  }
  return kExitOk;
}

// ----------------------------------------------------------------- bench

struct BenchArgs {
  std::string algorithms = "ird,restart,genie";
  std::uint32_t n = 0;
  unsigned m = 0;
  std::uint32_t k_hat = 0;
  double p = 0;
  std::size_t trials = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  prs::BenchConfig config;
  config.field = prs::make_field(resolve_width(a.n, a.m));
  config.k_hat = a.k_hat;
  config.p = a.p;
  config.trials = a.trials;
  config.seed = a.seed;
  config.algorithms.clear();
  std::stringstream ss(a.algorithms);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (!name.empty()) config.algorithms.push_back(prs::parse_algorithm(name));
  }
  const std::string csv = prs::bench_csv(config, prs::run_bench(config));
  if (a.out.empty() || a.out == "-") {
    std::cout << csv;
  } else {
    write_text(a.out, csv);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Progressive Reed-Solomon retrieval for Byzantine-tolerant storage"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Encode a file into n shard files");
  encode->add_option("--input", enc.input, "File to encode")->required();
  encode->add_option("--out-dir", enc.out_dir, "Directory for shard_<j>.prs1 and manifest.json")
      ->required();
  encode->add_option("--m", enc.m, "Field width in bits (n = 2^m - 1)");
  encode->add_option("--khat", enc.k_hat, "Information symbols per group")->required();
  encode->add_option("--prim-poly", enc.prim_poly, "Primitive polynomial, hex");

  RetrieveArgs ret;
  auto* retrieve = app.add_subcommand("retrieve", "Recover a file from a shard directory");
  retrieve->add_option("--shard-dir", ret.shard_dir)->required();
  retrieve->add_option("--out", ret.out, "Recovered payload")->required();
  retrieve->add_option("--seed", ret.seed, "Access-order seed")->required();
  retrieve->add_option("--corrupt-list", ret.corrupt_list, "Comma-separated Byzantine positions");
  retrieve->add_option("--crash-list", ret.crash_list, "Comma-separated crashed positions");
  retrieve->add_option("--decoder", ret.decoder, "ird or restart");

  AnalyzeArgs ana;
  auto* analyze = app.add_subcommand("analyze", "Closed-form average accesses and success rate");
  analyze->add_option("--n", ana.n)->required();
  analyze->add_option("--khat", ana.k_hat)->required();
  analyze->add_option("--p", ana.p, "Per-node Byzantine probability")->required();
  analyze->add_option("--s", ana.s, "Crash-stop node count");
  analyze->add_option("--out", ana.out, "Output JSON file (default stdout)");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo retrieval simulation");
  simulate->add_option("--n", sim.n);
  simulate->add_option("--m", sim.m);
  simulate->add_option("--khat", sim.k_hat)->required();
  simulate->add_option("--p", sim.p)->required();
  simulate->add_option("--trials", sim.trials);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--s", sim.s);
  simulate->add_option("--payload-bytes", sim.payload_bytes);
  simulate->add_option("--out", sim.out, "Summary JSON (default stdout)");
  simulate->add_option("--csv", sim.csv, "Histogram CSV (accesses,frequency)");
  simulate->add_flag("--check", sim.check, "Exit nonzero unless the run agrees with the closed form");

  BenchArgs ben;
  auto* bench = app.add_subcommand("bench", "Decoder timing comparison");
  bench->add_option("--algorithms", ben.algorithms, "Subset of ird,restart,genie");
  bench->add_option("--n", ben.n);
  bench->add_option("--m", ben.m);
  bench->add_option("--khat", ben.k_hat)->required();
  bench->add_option("--p", ben.p)->required();
  bench->add_option("--trials", ben.trials);
  bench->add_option("--seed", ben.seed);
  bench->add_option("--out", ben.out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    if (*encode) return cmd_encode(enc);
    if (*retrieve) return cmd_retrieve(ret);
    if (*analyze) return cmd_analyze(ana);
    if (*simulate) return cmd_simulate(sim);
    if (*bench) return cmd_bench(ben);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const prs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
