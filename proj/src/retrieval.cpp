#include "prs/retrieval.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "bits.hpp"
#include "prs/baseline.hpp"
#include "prs/error.hpp"
#include "timer.hpp"

namespace prs {

bool crc_test(const GroupVector& u, const CodeParams& params) {
  if (u.size() != params.k_hat) return false;
  const unsigned m = params.m();
  const std::uint32_t data_bits = params.data_bits_per_group();
  const auto chunk = detail::group_data_bytes(u, m, data_bits);
  return crc32(chunk) == detail::group_crc_field(u, m, data_bits);
}

std::vector<std::uint8_t> unframe_payload(std::span<const GroupVector> groups,
                                          const CodeParams& params) {
  const std::uint32_t data_bits = params.data_bits_per_group();
  if (groups.size() != group_count_for(params.payload_byte_len, data_bits)) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(groups.size()) + " groups cannot hold " +
                    std::to_string(params.payload_byte_len) + " bytes");
  }
  std::vector<std::uint8_t> out(params.payload_byte_len, 0);
  const std::uint64_t total_bits = params.payload_byte_len * 8;
  const unsigned m = params.m();
  std::uint64_t bit = 0;
  for (const auto& u : groups) {
    if (u.size() != params.k_hat) {
      throw Error(ErrorCode::LengthMismatch, "group has the wrong number of symbols");
    }
    for (std::uint32_t i = 0; i < data_bits && bit < total_bits; ++i, ++bit) {
      if (detail::group_bit(u, m, i)) detail::set_bit(out, bit);
    }
  }
  return out;
}

std::uint32_t RetrievalReport::max_stage() const noexcept {
  return stages.empty() ? 0 : *std::max_element(stages.begin(), stages.end());
}

GroupResult retrieve_group(const CodeParams& params, AccessSource& source,
                           DecoderKind decoder, PhaseTimes* times) {
  GroupResult res;
  std::vector<Received> accessed;
  accessed.reserve(params.k_hat);
  for (std::uint32_t i = 0; i < params.k_hat; ++i) {
    auto r = source.next();
    if (!r) {
      res.symbols_used = accessed.size();
      res.events.push_back({0, res.symbols_used, "exhausted"});
      return res;
    }
    accessed.push_back(*r);
  }
  res.symbols_used = accessed.size();

  auto decode_and_check = [&](std::span<const Received> trusted) {
    {
      detail::ScopedPhase t(times ? &times->inv_mat : nullptr);
      res.u = erasure_decode(params, trusted);
    }
    detail::ScopedPhase t(times ? &times->crc : nullptr);
    ++res.crc_checks;
    return crc_test(res.u, params);
  };

  if (decode_and_check(accessed)) {
    res.events.push_back({0, res.symbols_used, "crc_pass"});
    res.success = true;
    return res;
  }
  res.events.push_back({0, res.symbols_used, "crc_fail"});

  std::optional<IncrementalDecoder> ird;
  while (true) {
    if (source.remaining() < 2) {
      res.events.push_back({res.stages, res.symbols_used, "exhausted"});
      return res;
    }
    auto a = source.next();
    auto b = a ? source.next() : std::nullopt;
    res.symbols_used += (a ? 1 : 0) + (b ? 1 : 0);
    if (!a || !b) {
      res.events.push_back({res.stages, res.symbols_used, "exhausted"});
      return res;
    }
    ++res.stages;

    StepOutcome out;
    if (decoder == DecoderKind::Incremental) {
      if (!ird) {
        detail::ScopedPhase t(times ? &times->elp : nullptr);
        ird.emplace(params, std::span<const Received>(accessed).first(params.k_hat));
      }
      out = ird->step(*a, *b, times);
    } else {
      accessed.push_back(*a);
      accessed.push_back(*b);
      out = restart_decode(params, accessed, res.stages, times).outcome;
    }

    if (out.verdict == Verdict::ContinueNeeded) {
      res.events.push_back({res.stages, res.symbols_used, "continue"});
      continue;
    }
    const bool pass = decode_and_check(out.trusted);
    res.events.push_back(
        {res.stages, res.symbols_used, pass ? "decoded_crc_pass" : "decoded_crc_fail"});
    if (pass) {
      res.success = true;
      return res;
    }
  }
}

std::vector<std::uint32_t> access_order(std::span<const std::uint32_t> live_set,
                                        std::uint64_t rng_seed) {
  std::vector<std::uint32_t> order(live_set.begin(), live_set.end());
  std::sort(order.begin(), order.end());
  std::mt19937_64 rng(rng_seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

namespace {

// Shards fetched so far, in access order, shared by all groups.
class NodeCache {
 public:
  NodeCache(const FetchFn& fetch, std::vector<std::uint32_t> order, std::uint32_t groups)
      : fetch_(fetch), order_(std::move(order)), groups_(groups) {}

  // Makes entry idx available; false once the live set is exhausted.
  bool ensure(std::size_t idx) {
    while (nodes_.size() <= idx && cursor_ < order_.size()) {
      const std::uint32_t pos = order_[cursor_++];
      auto symbols = fetch_(pos);
      if (!symbols) continue;
      if (symbols->size() != groups_) {
        throw Error(ErrorCode::Format,
                    "node " + std::to_string(pos) + " returned the wrong symbol count");
      }
      nodes_.push_back({pos, std::move(*symbols)});
    }
    return idx < nodes_.size();
  }

  std::size_t remaining_from(std::size_t idx) const {
    return (nodes_.size() > idx ? nodes_.size() - idx : 0) + (order_.size() - cursor_);
  }

  std::uint32_t position(std::size_t idx) const { return nodes_[idx].position; }
  Symbol symbol(std::size_t idx, std::uint32_t group) const {
    return nodes_[idx].symbols[group];
  }
  std::size_t fetched() const { return nodes_.size(); }

 private:
  struct Node {
    std::uint32_t position;
    std::vector<Symbol> symbols;
  };
  const FetchFn& fetch_;
  std::vector<std::uint32_t> order_;
  std::uint32_t groups_;
  std::size_t cursor_ = 0;
  std::vector<Node> nodes_;
};

class GroupSource final : public AccessSource {
 public:
  GroupSource(NodeCache& cache, std::uint32_t group) : cache_(cache), group_(group) {}

  std::optional<Received> next() override {
    if (!cache_.ensure(idx_)) return std::nullopt;
    Received r{cache_.position(idx_), cache_.symbol(idx_, group_)};
    ++idx_;
    return r;
  }
  std::size_t remaining() const override { return cache_.remaining_from(idx_); }

 private:
  NodeCache& cache_;
  std::uint32_t group_;
  std::size_t idx_ = 0;
};

}  // namespace

RetrievalReport progressive_retrieve(const FetchFn& fetch,
                                     std::span<const std::uint32_t> live_set,
                                     const CodeParams& params, std::uint64_t rng_seed,
                                     const RetrieveOptions& options) {
  if (live_set.size() < params.k_hat) {
    throw Error(ErrorCode::InsufficientLiveNodes,
                std::to_string(live_set.size()) + " live nodes, need k_hat = " +
                    std::to_string(params.k_hat));
  }
  for (std::uint32_t p : live_set) {
    if (p >= params.n) throw Error(ErrorCode::OutOfRange, "live position outside code");
  }

  RetrievalReport report;
  report.live_nodes = live_set.size();
  NodeCache cache(fetch, access_order(live_set, rng_seed), params.group_count);
  std::vector<GroupVector> groups;
  groups.reserve(params.group_count);
  std::size_t traced = 0;

  for (std::uint32_t g = 0; g < params.group_count; ++g) {
    GroupSource source(cache, g);
    GroupResult res = retrieve_group(params, source, options.decoder);
    report.stages.push_back(res.stages);
    report.crc_checks += res.crc_checks;
    for (const auto& ev : res.events) {
      if (ev.symbols_used <= traced && ev.verdict != "exhausted") continue;
      StageTrace t{g, ev.stage, {}, ev.verdict};
      for (std::size_t i = traced; i < ev.symbols_used; ++i) t.fetched.push_back(cache.position(i));
      traced = std::max(traced, ev.symbols_used);
      report.trace.push_back(std::move(t));
    }
    if (!res.success) {
      report.outcome = Outcome::Fail;
      report.nodes_accessed = cache.fetched();
      report.analysis_accesses = live_set.size();
      return report;
    }
    groups.push_back(std::move(res.u));
  }

  report.payload = unframe_payload(groups, params);
  report.outcome = Outcome::Success;
  report.nodes_accessed = cache.fetched();
  report.analysis_accesses = report.nodes_accessed;
  return report;
}

}  // namespace prs
