#include "subtag/wire.hpp"

#include <charconv>
#include <sstream>

#include "subtag/error.hpp"

namespace subtag {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view tok) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    raise(Errc::ParseError, "expected an unsigned integer, got '" + std::string(tok) + "'");
  }
  return v;
}

void check_header(const PublicParams& pp, const PacketHeader& h) {
  if (!(h == PacketHeader::of(pp))) {
    raise(Errc::InvalidParams, "packet file header '" + h.to_string() + "' does not match parameters '" +
                                   PacketHeader::of(pp).to_string() + "'");
  }
}

TaggedPacket packet_from_values(const PublicParams& pp, std::span<const std::uint64_t> values) {
  std::vector<Elem> symbols;
  symbols.reserve(values.size());
  for (auto v : values) {
    if (v >= pp.base().order()) raise(Errc::ParseError, "symbol " + std::to_string(v) + " out of range");
    symbols.push_back(pp.base().elem(v));
  }
  return TaggedPacket::from_symbols(pp, symbols);
}

}  // namespace

PacketHeader PacketHeader::of(const PublicParams& pp) {
  return {pp.base().order(), pp.l(), pp.kdim(), pp.M(), pp.V()};
}

std::string PacketHeader::to_string() const {
  std::ostringstream os;
  os << q << ' ' << l << ' ' << kdim << ' ' << M << ' ' << V;
  return os.str();
}

PacketHeader PacketHeader::parse(std::string_view line) {
  const auto tok = split_ws(line);
  if (tok.size() != 5) raise(Errc::ParseError, "packet header needs 5 fields: q l kdim M V");
  return {parse_u64(tok[0]), parse_u64(tok[1]), parse_u64(tok[2]), parse_u64(tok[3]), parse_u64(tok[4])};
}

std::size_t symbol_width(std::uint64_t q) noexcept {
  std::size_t w = 1;
  for (std::uint64_t top = q - 1; top > 0xff; top >>= 8) ++w;
  return w;
}

std::string write_packets_text(const PublicParams& pp, std::span<const TaggedPacket> packets) {
  std::string out = PacketHeader::of(pp).to_string() + "\n";
  for (const auto& p : packets) {
    const auto sym = p.to_symbols(pp);
    for (std::size_t i = 0; i < sym.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(sym[i].value());
    }
    out += '\n';
  }
  return out;
}

std::vector<TaggedPacket> read_packets_text(const PublicParams& pp, std::string_view text) {
  std::vector<TaggedPacket> out;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (!have_header) {
      check_header(pp, PacketHeader::parse(line));
      have_header = true;
      continue;
    }
    std::vector<std::uint64_t> values;
    for (auto t : tok) values.push_back(parse_u64(t));
    out.push_back(packet_from_values(pp, values));
  }
  if (!have_header) raise(Errc::ParseError, "packet file has no header");
  return out;
}

std::vector<std::uint8_t> write_packets_binary(const PublicParams& pp, std::span<const TaggedPacket> packets) {
  const std::string header = PacketHeader::of(pp).to_string() + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const std::size_t width = symbol_width(pp.base().order());
  for (const auto& p : packets) {
    for (auto s : p.to_symbols(pp)) {
      for (std::size_t b = width; b-- > 0;) out.push_back(static_cast<std::uint8_t>(s.value() >> (8 * b)));
    }
  }
  return out;
}

std::vector<TaggedPacket> read_packets_binary(const PublicParams& pp, std::span<const std::uint8_t> bytes) {
  std::size_t nl = 0;
  while (nl < bytes.size() && bytes[nl] != '\n') ++nl;
  if (nl == bytes.size()) raise(Errc::ParseError, "binary packet file has no header line");
  check_header(pp, PacketHeader::parse(std::string(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(nl))));
  const std::size_t width = symbol_width(pp.base().order());
  const std::size_t stride = width * pp.packet_length();
  const auto body = bytes.subspan(nl + 1);
  if (body.size() % stride != 0) raise(Errc::ParseError, "binary packet data is truncated");
  std::vector<TaggedPacket> out;
  std::vector<std::uint64_t> values(pp.packet_length());
  for (std::size_t off = 0; off < body.size(); off += stride) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::uint64_t v = 0;
      for (std::size_t b = 0; b < width; ++b) v = (v << 8) | body[off + i * width + b];
      values[i] = v;
    }
    out.push_back(packet_from_values(pp, values));
  }
  return out;
}

}  // namespace subtag
