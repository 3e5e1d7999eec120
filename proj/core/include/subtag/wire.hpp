#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subtag/scheme.hpp"

namespace subtag {

/// First line of every packet file: "q l kdim M V".
struct PacketHeader {
  std::uint64_t q = 0;
  std::size_t l = 0;
  std::size_t kdim = 0;
  std::size_t M = 0;
  std::size_t V = 0;

  static PacketHeader of(const PublicParams& pp);
  std::string to_string() const;
  /// Raises ParseError on malformed text.
  static PacketHeader parse(std::string_view line);

  friend bool operator==(const PacketHeader&, const PacketHeader&) = default;
};

/// Bytes per symbol in binary mode: the fewest that hold q - 1.
std::size_t symbol_width(std::uint64_t q) noexcept;

/// Header line, then one packet per line as space-separated decimal symbols.
std::string write_packets_text(const PublicParams& pp, std::span<const TaggedPacket> packets);
/// Raises ParseError on malformed input and InvalidParams when the header
/// does not describe pp.
std::vector<TaggedPacket> read_packets_text(const PublicParams& pp, std::string_view text);

/// Header line, then every symbol as a symbol_width(q)-byte big-endian integer.
std::vector<std::uint8_t> write_packets_binary(const PublicParams& pp, std::span<const TaggedPacket> packets);
std::vector<TaggedPacket> read_packets_binary(const PublicParams& pp, std::span<const std::uint8_t> bytes);

}  // namespace subtag
