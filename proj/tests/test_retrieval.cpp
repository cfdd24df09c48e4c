#include <doctest.h>

#include <random>
#include <set>

#include "prs/codec.hpp"
#include "prs/error.hpp"
#include "prs/retrieval.hpp"
#include "prs/sim.hpp"

using namespace prs;

namespace {

struct Store {
  CodeParams params;
  std::vector<std::uint8_t> data;
  std::vector<Shard> shards;
  std::vector<std::uint32_t> live;

  Store(unsigned m, std::uint32_t k_hat, std::size_t bytes, std::uint64_t seed)
      : params(CodeParams::make(make_field(m), k_hat, bytes)) {
    std::mt19937_64 rng(seed);
    data.resize(bytes);
    for (auto& b : data) b = static_cast<std::uint8_t>(rng());
    shards = encode_payload(data, params);
    for (std::uint32_t j = 0; j < params.n; ++j) live.push_back(j);
  }

  void corrupt(std::uint32_t j, std::mt19937_64& rng) {
    for (auto& s : shards[j].symbols) s = corrupt_symbol(s, params.n, rng);
  }

  FetchFn fetch() const {
    return [this](std::uint32_t pos) -> std::optional<std::vector<Symbol>> {
      return shards[pos].symbols;
    };
  }
};

}  // namespace

TEST_SUITE("retrieval") {
  TEST_CASE("clean store needs only k_hat nodes") {
    Store st(8, 40, 2000, 1);
    const auto rep = progressive_retrieve(st.fetch(), st.live, st.params, 9);
    REQUIRE(rep.outcome == Outcome::Success);
    CHECK(rep.payload == st.data);
    CHECK(rep.nodes_accessed == 40);
    CHECK(rep.max_stage() == 0);
    CHECK(rep.crc_checks == st.params.group_count);
    REQUIRE(rep.trace.size() == 1);
    CHECK(rep.trace[0].verdict == "crc_pass");
    const auto order = access_order(st.live, 9);
    CHECK(rep.trace[0].fetched == std::vector<std::uint32_t>(order.begin(), order.begin() + 40));
  }

  TEST_CASE("access order is a seeded permutation") {
    std::vector<std::uint32_t> live{9, 3, 7, 1, 12};
    const auto a = access_order(live, 5);
    CHECK(a == access_order(live, 5));
    CHECK(std::set<std::uint32_t>(a.begin(), a.end()) == std::set<std::uint32_t>{1, 3, 7, 9, 12});
    std::vector<std::uint32_t> shuffled{1, 12, 3, 9, 7};
    CHECK(access_order(shuffled, 5) == a);
  }

  TEST_CASE("Byzantine nodes are corrected and accounted") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 20; ++t) {
      Store st(8, 60, 1500, 100 + t);
      const std::uint32_t v = 1 + rng() % 30;
      std::set<std::uint32_t> bad;
      while (bad.size() < v) bad.insert(rng() % st.params.n);
      for (auto j : bad) st.corrupt(j, rng);
      const std::uint64_t seed = rng();
      const auto rep = progressive_retrieve(st.fetch(), st.live, st.params, seed);
      REQUIRE(rep.outcome == Outcome::Success);
      CHECK(rep.payload == st.data);
      CHECK((rep.nodes_accessed - 60) % 2 == 0);
      CHECK(rep.nodes_accessed == 60 + 2 * rep.max_stage());
      CHECK(rep.max_stage() <= v);

      RetrieveOptions restart;
      restart.decoder = DecoderKind::Restart;
      const auto rr = progressive_retrieve(st.fetch(), st.live, st.params, seed, restart);
      CHECK(rr.nodes_accessed == rep.nodes_accessed);
      CHECK(rr.stages == rep.stages);
      CHECK(rr.crc_checks == rep.crc_checks);
      CHECK(rr.payload == rep.payload);
      REQUIRE(rr.trace.size() == rep.trace.size());
      for (std::size_t i = 0; i < rr.trace.size(); ++i) {
        CHECK(rr.trace[i].verdict == rep.trace[i].verdict);
        CHECK(rr.trace[i].fetched == rep.trace[i].fetched);
      }

      // Trace covers exactly the fetched prefix.
      std::vector<std::uint32_t> seen;
      for (const auto& e : rep.trace) seen.insert(seen.end(), e.fetched.begin(), e.fetched.end());
      const auto order = access_order(st.live, seed);
      CHECK(seen == std::vector<std::uint32_t>(order.begin(), order.begin() + rep.nodes_accessed));
    }
  }

  TEST_CASE("too many Byzantine nodes fail without silent corruption") {
    std::mt19937_64 rng(3);
    Store st(6, 20, 100, 5);
    for (std::uint32_t j = 0; j < 40; ++j) st.corrupt(j, rng);
    const auto rep = progressive_retrieve(st.fetch(), st.live, st.params, 1);
    CHECK(rep.outcome == Outcome::Fail);
    CHECK(rep.payload.empty());
    CHECK(rep.nodes_accessed <= 63);
    CHECK(rep.analysis_accesses == 63);
  }

  TEST_CASE("crashed nodes shrink the live set") {
    Store st(8, 100, 400, 8);
    std::vector<std::uint32_t> live;
    for (std::uint32_t j = 0; j < 255; j += 2) live.push_back(j);
    const auto rep = progressive_retrieve(st.fetch(), live, st.params, 2);
    REQUIRE(rep.outcome == Outcome::Success);
    CHECK(rep.live_nodes == live.size());
    for (const auto& e : rep.trace) {
      for (auto p : e.fetched) CHECK(p % 2 == 0);
    }
    CHECK_THROWS_AS(progressive_retrieve(st.fetch(), std::span(live).first(99), st.params, 2),
                    Error);
    try {
      progressive_retrieve(st.fetch(), std::span(live).first(99), st.params, 2);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InsufficientLiveNodes);
    }
  }

  TEST_CASE("nodes that vanish during retrieval are skipped") {
    Store st(8, 50, 300, 4);
    std::set<std::uint32_t> gone{access_order(st.live, 6)[0], access_order(st.live, 6)[10]};
    FetchFn fetch = [&](std::uint32_t pos) -> std::optional<std::vector<Symbol>> {
      if (gone.count(pos)) return std::nullopt;
      return st.shards[pos].symbols;
    };
    const auto rep = progressive_retrieve(fetch, st.live, st.params, 6);
    REQUIRE(rep.outcome == Outcome::Success);
    CHECK(rep.payload == st.data);
    for (const auto& e : rep.trace) {
      for (auto p : e.fetched) CHECK(gone.count(p) == 0);
    }
  }

  TEST_CASE("unframe rejects inconsistent group counts") {
    Store st(8, 40, 500, 2);
    auto groups = frame_payload(st.data, st.params);
    groups.pop_back();
    CHECK_THROWS_AS(unframe_payload(groups, st.params), Error);
  }
}
