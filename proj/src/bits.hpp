#pragma once

// MSB-first bit packing shared by framing and unframing.

#include <cstdint>
#include <span>
#include <vector>

#include "prs/gf.hpp"

namespace prs::detail {

inline bool get_bit(std::span<const std::uint8_t> bytes, std::uint64_t i) noexcept {
  std::uint64_t byte = i >> 3;
  if (byte >= bytes.size()) return false;
  return (bytes[byte] >> (7 - (i & 7))) & 1u;
}

inline void set_bit(std::span<std::uint8_t> bytes, std::uint64_t i) noexcept {
  bytes[i >> 3] |= static_cast<std::uint8_t>(0x80u >> (i & 7));
}

// Bit i of a group (MSB-first over m-bit symbols).
inline bool group_bit(std::span<const Symbol> u, unsigned m, std::uint64_t i) noexcept {
  std::uint64_t sym = i / m;
  unsigned off = static_cast<unsigned>(i % m);
  return (u[sym] >> (m - 1 - off)) & 1u;
}

// Data chunk of a group as ceil(data_bits / 8) bytes, zero-filled tail.
inline std::vector<std::uint8_t> group_data_bytes(std::span<const Symbol> u, unsigned m,
                                                  std::uint32_t data_bits) {
  std::vector<std::uint8_t> out((data_bits + 7) / 8, 0);
  for (std::uint32_t i = 0; i < data_bits; ++i) {
    if (group_bit(u, m, i)) set_bit(out, i);
  }
  return out;
}

inline std::uint32_t group_crc_field(std::span<const Symbol> u, unsigned m,
                                     std::uint32_t data_bits) noexcept {
  std::uint32_t crc = 0;
  for (std::uint32_t i = 0; i < 32; ++i) {
    crc = (crc << 1) | static_cast<std::uint32_t>(group_bit(u, m, data_bits + i));
  }
  return crc;
}

}  // namespace prs::detail
