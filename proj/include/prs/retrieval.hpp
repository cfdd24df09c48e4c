#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prs/codec.hpp"
#include "prs/ird.hpp"

namespace prs {

enum class DecoderKind { Incremental, Restart };

// Recomputes the CRC over the group's data bits and compares it with the
// embedded one.
bool crc_test(const GroupVector& u, const CodeParams& params);

// Inverse of frame_payload. Throws LengthMismatch when the group count does
// not fit params.payload_byte_len.
std::vector<std::uint8_t> unframe_payload(std::span<const GroupVector> groups,
                                          const CodeParams& params);

// Symbols of one group in access order.
class AccessSource {
 public:
  virtual ~AccessSource() = default;
  // Next symbol, or nullopt when no live node is left.
  virtual std::optional<Received> next() = 0;
  // Upper bound on how many more symbols next() can still deliver.
  virtual std::size_t remaining() const = 0;
};

struct StageEvent {
  std::uint32_t stage = 0;
  std::size_t symbols_used = 0;  // prefix of the access order consumed so far
  std::string verdict;
};

struct GroupResult {
  bool success = false;
  GroupVector u;
  std::uint32_t stages = 0;
  std::size_t crc_checks = 0;
  std::size_t symbols_used = 0;
  std::vector<StageEvent> events;
};

// Progressive retrieval of one group: interpolate the first k_hat symbols
// and check the CRC; on failure take two more symbols per stage and run the
// error-erasure decoder until it yields a trusted set whose interpolation
// passes the CRC, or fewer than two symbols remain.
GroupResult retrieve_group(const CodeParams& params, AccessSource& source,
                           DecoderKind decoder = DecoderKind::Incremental,
                           PhaseTimes* times = nullptr);

// Node access: the shard's symbols (one per group) or nullopt if the node
// turns out to be down.
using FetchFn = std::function<std::optional<std::vector<Symbol>>(std::uint32_t position)>;

enum class Outcome { Success, Fail };

struct StageTrace {
  std::uint32_t group = 0;
  std::uint32_t stage = 0;
  std::vector<std::uint32_t> fetched;
  std::string verdict;
};

struct RetrievalReport {
  Outcome outcome = Outcome::Fail;
  // Nodes whose shards were actually fetched.
  std::size_t nodes_accessed = 0;
  // Cost in the closed-form model's accounting: a failed retrieval is
  // charged every live node.
  std::size_t analysis_accesses = 0;
  std::size_t live_nodes = 0;
  std::vector<std::uint32_t> stages;  // per group
  std::size_t crc_checks = 0;
  std::vector<std::uint8_t> payload;
  std::vector<StageTrace> trace;

  std::uint32_t max_stage() const noexcept;
};

struct RetrieveOptions {
  DecoderKind decoder = DecoderKind::Incremental;
};

// Fetches nodes in one uniformly random order over `live_set` (seeded);
// groups share the fetched shards, so a node costs one access no matter how
// many groups read it. Throws InsufficientLiveNodes if |live_set| < k_hat.
RetrievalReport progressive_retrieve(const FetchFn& fetch,
                                     std::span<const std::uint32_t> live_set,
                                     const CodeParams& params, std::uint64_t rng_seed,
                                     const RetrieveOptions& options = {});

// The random access order progressive_retrieve uses for this seed.
std::vector<std::uint32_t> access_order(std::span<const std::uint32_t> live_set,
                                        std::uint64_t rng_seed);

}  // namespace prs
