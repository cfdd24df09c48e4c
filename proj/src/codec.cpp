#include "prs/codec.hpp"

#include <array>
#include <cstring>
#include <string>

#include "bits.hpp"
#include "prs/error.hpp"

namespace prs {

namespace {

constexpr std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> t{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    t[i] = c;
  }
  return t;
}

constexpr auto kCrcTable = make_crc_table();

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

template <typename T>
T get_le(std::span<const std::uint8_t> in, std::size_t at) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(static_cast<T>(in[at + i]) << (8 * i));
  }
  return v;
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes, std::uint32_t crc) noexcept {
  crc = ~crc;
  for (std::uint8_t b : bytes) crc = kCrcTable[(crc ^ b) & 0xFF] ^ (crc >> 8);
  return ~crc;
}

std::uint32_t group_count_for(std::uint64_t payload_byte_len,
                              std::uint32_t data_bits_per_group) {
  std::uint64_t bits = payload_byte_len * 8;
  std::uint64_t groups = (bits + data_bits_per_group - 1) / data_bits_per_group;
  if (groups == 0) groups = 1;
  if (groups > UINT32_MAX) {
    throw Error(ErrorCode::InvalidArgument, "payload too large");
  }
  return static_cast<std::uint32_t>(groups);
}

CodeParams CodeParams::make(FieldPtr field, std::uint32_t k_hat,
                            std::uint64_t payload_byte_len) {
  if (!field) throw Error(ErrorCode::InvalidArgument, "null field");
  CodeParams p;
  p.n = field->n();
  p.field = std::move(field);
  p.k_hat = k_hat;
  p.payload_byte_len = payload_byte_len;
  if (k_hat < 1 || k_hat >= p.n) {
    throw Error(ErrorCode::InvalidArgument,
                "k_hat must satisfy 1 <= k_hat < n = " + std::to_string(p.n));
  }
  if (static_cast<std::uint64_t>(k_hat) * p.m() <= p.crc_width) {
    throw Error(ErrorCode::GroupTooSmall,
                "k_hat * m = " + std::to_string(k_hat * p.m()) +
                    " leaves no room beside a 32-bit CRC");
  }
  p.group_count = group_count_for(payload_byte_len, p.data_bits_per_group());
  return p;
}

std::vector<GroupVector> frame_payload(std::span<const std::uint8_t> data,
                                       const CodeParams& params) {
  const unsigned m = params.m();
  if (static_cast<std::uint64_t>(params.k_hat) * m <= params.crc_width) {
    throw Error(ErrorCode::GroupTooSmall, "group cannot hold its CRC");
  }
  const std::uint32_t data_bits = params.data_bits_per_group();
  const std::uint32_t groups = group_count_for(data.size(), data_bits);

  std::vector<GroupVector> out;
  out.reserve(groups);
  std::vector<std::uint8_t> chunk((data_bits + 7) / 8);
  for (std::uint32_t g = 0; g < groups; ++g) {
    std::fill(chunk.begin(), chunk.end(), 0);
    const std::uint64_t base = static_cast<std::uint64_t>(g) * data_bits;
    for (std::uint32_t i = 0; i < data_bits; ++i) {
      if (detail::get_bit(data, base + i)) detail::set_bit(chunk, i);
    }
    const std::uint32_t crc = crc32(chunk);

    GroupVector u(params.k_hat, 0);
    const std::uint32_t total = params.k_hat * m;
    for (std::uint32_t i = 0; i < total; ++i) {
      bool bit = i < data_bits ? detail::get_bit(chunk, i)
                               : ((crc >> (31 - (i - data_bits))) & 1u) != 0;
      if (bit) u[i / m] |= static_cast<Symbol>(1u << (m - 1 - i % m));
    }
    out.push_back(std::move(u));
  }
  return out;
}

Codeword encode_group(const GroupVector& u, const CodeParams& params) {
  const Field& f = params.gf();
  Codeword c(params.n, 0);
  for (std::uint32_t j = 0; j < params.n; ++j) {
    // Horner at alpha^j: multiplying by alpha^j is a log shift by j.
    Symbol acc = 0;
    for (auto it = u.rbegin(); it != u.rend(); ++it) acc = f.mul_exp(acc, j) ^ *it;
    c[j] = acc;
  }
  return c;
}

std::vector<Shard> make_shards(std::span<const GroupVector> groups,
                               const CodeParams& params) {
  if (groups.empty()) throw Error(ErrorCode::InvalidArgument, "no groups");
  std::vector<Shard> shards(params.n);
  for (std::uint32_t j = 0; j < params.n; ++j) {
    Shard& s = shards[j];
    s.position = j;
    s.m = params.m();
    s.crc_width = params.crc_width;
    s.n = params.n;
    s.k_hat = params.k_hat;
    s.group_count = static_cast<std::uint32_t>(groups.size());
    s.payload_byte_len = params.payload_byte_len;
    s.symbols.resize(groups.size());
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Codeword c = encode_group(groups[g], params);
    for (std::uint32_t j = 0; j < params.n; ++j) shards[j].symbols[g] = c[j];
  }
  return shards;
}

std::vector<Shard> encode_payload(std::span<const std::uint8_t> data,
                                  const CodeParams& params) {
  if (data.size() != params.payload_byte_len) {
    throw Error(ErrorCode::LengthMismatch, "params describe a different payload length");
  }
  return make_shards(frame_payload(data, params), params);
}

bool parity_check(const Codeword& c, const CodeParams& params) {
  if (c.size() != params.n) return false;
  const Field& f = params.gf();
  for (std::uint32_t i = 1; i <= params.n - params.k_hat; ++i) {
    Symbol acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = f.mul_exp(acc, i) ^ *it;
    if (acc != 0) return false;
  }
  return true;
}

std::vector<std::uint8_t> serialize_shard(const Shard& shard) {
  std::vector<std::uint8_t> out;
  out.reserve(kShardHeaderSize + 2 * shard.symbols.size());
  for (char c : {'P', 'R', 'S', '1'}) out.push_back(static_cast<std::uint8_t>(c));
  out.push_back(static_cast<std::uint8_t>(shard.m));
  out.push_back(static_cast<std::uint8_t>(shard.crc_width));
  out.push_back(0);
  out.push_back(0);
  put_le<std::uint32_t>(out, shard.n);
  put_le<std::uint32_t>(out, shard.k_hat);
  put_le<std::uint32_t>(out, shard.position);
  put_le<std::uint32_t>(out, shard.group_count);
  put_le<std::uint64_t>(out, shard.payload_byte_len);
  for (Symbol s : shard.symbols) put_le<std::uint16_t>(out, s);
  return out;
}

Shard parse_shard(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kShardHeaderSize) {
    throw Error(ErrorCode::Format, "shard shorter than its header");
  }
  if (std::memcmp(bytes.data(), "PRS1", 4) != 0) {
    throw Error(ErrorCode::Format, "bad shard magic");
  }
  Shard s;
  s.m = bytes[4];
  s.crc_width = bytes[5];
  if (bytes[6] != 0 || bytes[7] != 0) {
    throw Error(ErrorCode::Format, "reserved header bytes are not zero");
  }
  s.n = get_le<std::uint32_t>(bytes, 8);
  s.k_hat = get_le<std::uint32_t>(bytes, 12);
  s.position = get_le<std::uint32_t>(bytes, 16);
  s.group_count = get_le<std::uint32_t>(bytes, 20);
  s.payload_byte_len = get_le<std::uint64_t>(bytes, 24);

  if (s.m < Field::kMinWidth || s.m > Field::kMaxWidth || s.n != (1u << s.m) - 1) {
    throw Error(ErrorCode::Format, "inconsistent field width / length");
  }
  if (s.k_hat < 1 || s.k_hat >= s.n || s.position >= s.n || s.group_count == 0) {
    throw Error(ErrorCode::Format, "header field out of range");
  }
  if (s.crc_width != CodeParams::kCrcWidth) {
    throw Error(ErrorCode::Format, "unsupported CRC width");
  }
  const std::uint64_t expect =
      kShardHeaderSize + 2 * static_cast<std::uint64_t>(s.group_count);
  if (bytes.size() != expect) {
    throw Error(ErrorCode::Format, "shard size does not match group count");
  }
  s.symbols.resize(s.group_count);
  for (std::uint32_t g = 0; g < s.group_count; ++g) {
    s.symbols[g] = get_le<std::uint16_t>(bytes, kShardHeaderSize + 2 * g);
    if (s.symbols[g] > s.n) throw Error(ErrorCode::Format, "symbol outside field");
  }
  return s;
}

}  // namespace prs
