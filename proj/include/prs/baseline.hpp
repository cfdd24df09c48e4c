#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prs/codec.hpp"
#include "prs/ird.hpp"

namespace prs {

// Non-incremental reference decoders. They answer the same questions as
// IncrementalDecoder but recompute everything from the accessed symbols on
// every call.

struct RestartResult {
  StepOutcome outcome;
  WbState wb;
  std::vector<Sample> samples;
};

// `accessed` holds the k_hat initial symbols followed by 2 * stage symbols
// in sampling order. Rebuilds T(x) from its roots, evaluates every F_j and
// every syndrome sample, then runs Welch-Berlekamp from the initial state.
// At stage 0 the verdict is Success with the accessed symbols as trusted set.
RestartResult restart_decode(const CodeParams& params, std::span<const Received> accessed,
                             std::uint32_t stage, PhaseTimes* times = nullptr,
                             Acceptance rule = Acceptance::ExactStage);

// One-shot decode that knows the error budget v in advance: uses the first
// k_hat + 2v symbols of `access_order` and decodes once. Returns nullopt when
// v exceeds what the available symbols can correct or decoding fails.
std::optional<GroupVector> genie_decode(const CodeParams& params,
                                        std::span<const Received> access_order,
                                        std::uint32_t v, PhaseTimes* times = nullptr);

// Same, drawing a uniformly random access order over `live` from `received`
// (one symbol per position, length n).
std::optional<GroupVector> genie_decode(const CodeParams& params,
                                        std::span<const Symbol> received,
                                        std::span<const std::uint32_t> live, std::uint32_t v,
                                        std::uint64_t rng_seed);

}  // namespace prs
