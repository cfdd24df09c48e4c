#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "prs/gf.hpp"

namespace prs {

// k_hat information symbols of one coding group, CRC bits embedded.
using GroupVector = std::vector<Symbol>;
// n coded symbols of one group; entry j is the symbol for storage node j.
using Codeword = std::vector<Symbol>;

struct CodeParams {
  static constexpr std::uint32_t kCrcWidth = 32;

  FieldPtr field;
  std::uint32_t n = 0;
  std::uint32_t k_hat = 0;
  std::uint32_t crc_width = kCrcWidth;
  std::uint32_t group_count = 1;
  std::uint64_t payload_byte_len = 0;

  // Validates 1 <= k_hat < n and k_hat * m > crc_width, and derives
  // group_count from the payload length.
  static CodeParams make(FieldPtr field, std::uint32_t k_hat,
                         std::uint64_t payload_byte_len);

  const Field& gf() const noexcept { return *field; }
  unsigned m() const noexcept { return field->m(); }
  // Payload bits carried by one group.
  std::uint32_t data_bits_per_group() const noexcept {
    return k_hat * m() - crc_width;
  }
  std::uint32_t max_correctable() const noexcept { return (n - k_hat) / 2; }
};

// Number of groups a payload of this many bytes occupies (at least one).
std::uint32_t group_count_for(std::uint64_t payload_byte_len,
                              std::uint32_t data_bits_per_group);

struct Shard {
  std::uint32_t position = 0;
  std::vector<Symbol> symbols;  // one per group, in group order
  unsigned m = 0;
  std::uint32_t crc_width = CodeParams::kCrcWidth;
  std::uint32_t n = 0;
  std::uint32_t k_hat = 0;
  std::uint32_t group_count = 0;
  std::uint64_t payload_byte_len = 0;

  friend bool operator==(const Shard&, const Shard&) = default;
};

// Standard reflected CRC-32 (poly 0x04C11DB7, init and xorout 0xFFFFFFFF).
std::uint32_t crc32(std::span<const std::uint8_t> bytes,
                    std::uint32_t crc = 0) noexcept;

// Splits the payload into data chunks of data_bits_per_group() bits, zero
// pads the last one, appends CRC-32 of the chunk and packs the group bits
// MSB-first into k_hat m-bit symbols.
std::vector<GroupVector> frame_payload(std::span<const std::uint8_t> data,
                                       const CodeParams& params);

// c_j = u(alpha^j) for j = 0..n-1 with u(x) = sum_d u_d x^d.
Codeword encode_group(const GroupVector& u, const CodeParams& params);

std::vector<Shard> make_shards(std::span<const GroupVector> groups,
                               const CodeParams& params);

// Convenience: frame, encode every group and distribute into n shards.
std::vector<Shard> encode_payload(std::span<const std::uint8_t> data,
                                  const CodeParams& params);

// c(alpha^i) == 0 for i = 1..n-k_hat.
bool parity_check(const Codeword& c, const CodeParams& params);

// Shard file ("PRS1") serialization. All integers little-endian.
inline constexpr std::size_t kShardHeaderSize = 32;
std::vector<std::uint8_t> serialize_shard(const Shard& shard);
// Throws Error{Format} on bad magic, truncated data or inconsistent header.
Shard parse_shard(std::span<const std::uint8_t> bytes);

}  // namespace prs
