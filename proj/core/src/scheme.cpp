#include "subtag/scheme.hpp"

#include "subtag/error.hpp"
#include "subtag/linearized.hpp"

namespace subtag {

namespace {

bool has_zero_column(const Matrix& m) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    bool zero = true;
    for (std::size_t r = 0; r < m.rows() && zero; ++r) zero = m(r, c).is_zero();
    if (zero) return true;
  }
  return false;
}

void check_base_vector(const PublicParams& pp, std::span<const Elem> v, const char* what) {
  if (v.size() != pp.l()) raise(Errc::LengthMismatch, std::string(what) + " must have l entries");
  for (auto x : v) {
    if (!pp.base().owns(x)) raise(Errc::FieldMismatch, std::string(what) + " entry outside the base field");
  }
}

}  // namespace

PublicParams::PublicParams(FieldPtr base, FieldPtr ext, std::size_t n, std::optional<std::size_t> M,
                           LinearCode code)
    : base_(std::move(base)), ext_(std::move(ext)), n_(n), M_(M.value_or(n)), code_(std::move(code)) {
  if (!base_ || !ext_) raise(Errc::InvalidParams, "missing field");
  if (!ext_->is_extension() || ext_->subfield() != base_.get()) {
    raise(Errc::InvalidParams, "ext must be an extension of base");
  }
  if (&code_.field() != ext_.get()) raise(Errc::FieldMismatch, "code must be defined over the extension field");
  if (n_ < 1 || n_ > l()) raise(Errc::InvalidParams, "need 1 <= n <= l");
  if (M_ < n_) raise(Errc::InvalidParams, "need M >= n");
  if (code_.dimension() == 0 || code_.dimension() == code_.length()) {
    raise(Errc::InvalidParams, "code and its dual must both be nonzero");
  }
  if (has_zero_column(code_.generator())) raise(Errc::InvalidParams, "dual code has minimum distance 1");
  if (has_zero_column(code_.dual_generator())) raise(Errc::InvalidParams, "code has minimum distance 1");
}

std::vector<Elem> TaggedPacket::to_symbols(const PublicParams& pp) const {
  std::vector<Elem> out;
  out.reserve(pp.packet_length());
  out.push_back(tracker);
  out.insert(out.end(), payload.begin(), payload.end());
  for (auto t : tag) {
    const auto coords = pp.ext().coordinates(t);
    out.insert(out.end(), coords.begin(), coords.end());
  }
  return out;
}

TaggedPacket TaggedPacket::from_symbols(const PublicParams& pp, std::span<const Elem> symbols) {
  if (symbols.size() != pp.packet_length()) {
    raise(Errc::LengthMismatch, "packet needs " + std::to_string(pp.packet_length()) + " symbols, got " +
                                    std::to_string(symbols.size()));
  }
  for (auto x : symbols) {
    if (!pp.base().owns(x)) raise(Errc::FieldMismatch, "packet symbol outside the base field");
  }
  const std::size_t l = pp.l();
  TaggedPacket p;
  p.tracker = symbols[0];
  p.payload.assign(symbols.begin() + 1, symbols.begin() + 1 + static_cast<std::ptrdiff_t>(l));
  for (std::size_t t = 0; t < pp.kdim(); ++t) {
    p.tag.push_back(pp.ext().from_coordinates(symbols.subspan(1 + l + t * l, l)));
  }
  return p;
}

MasterKey keygen(const PublicParams& pp, std::uint64_t seed) {
  Rng rng = Rng(seed).stream("ta");
  return MasterKey{random_matrix(pp.ext(), pp.M() + 1, pp.kdim(), rng)};
}

std::vector<VerifierKey> distribute(const PublicParams& pp, const MasterKey& mk) {
  const Matrix& a = mk.a;
  if (a.rows() != pp.M() + 1 || a.cols() != pp.kdim()) raise(Errc::DimensionMismatch, "master key shape");
  const Matrix& g = pp.code().generator();
  std::vector<VerifierKey> out;
  out.reserve(pp.V());
  for (std::size_t i = 0; i < pp.V(); ++i) {
    VerifierKey vk{i, std::vector<Elem>(pp.M() + 1, pp.ext().zero()), g.col(i)};
    for (std::size_t r = 0; r <= pp.M(); ++r) {
      for (std::size_t t = 0; t < pp.kdim(); ++t) vk.column[r] += a(r, t) * g(t, i);
    }
    out.push_back(std::move(vk));
  }
  return out;
}

TaggedPacket tag_packet(const PublicParams& pp, const MasterKey& mk, Elem tracker, std::span<const Elem> payload) {
  check_base_vector(pp, payload, "payload");
  if (!pp.base().owns(tracker)) raise(Errc::FieldMismatch, "tracker outside the base field");
  const Elem s = iso_vec(pp.ext(), payload);
  TaggedPacket p{tracker, {payload.begin(), payload.end()}, {}};
  p.tag.reserve(pp.kdim());
  std::vector<Elem> coeffs(pp.M() + 1);
  for (std::size_t t = 0; t < pp.kdim(); ++t) {
    for (std::size_t j = 0; j <= pp.M(); ++j) coeffs[j] = mk.a(j, t);
    p.tag.push_back(linearized_eval(pp.ext(), coeffs, tracker, s));
  }
  return p;
}

std::vector<TaggedPacket> tag_basis(const PublicParams& pp, const MasterKey& mk,
                                    std::span<const std::vector<Elem>> basis) {
  if (basis.size() != pp.n()) raise(Errc::LengthMismatch, "basis must have n vectors");
  for (const auto& s : basis) check_base_vector(pp, s, "basis vector");
  if (rank(Matrix::from_rows(pp.base(), pp.l(), {basis.begin(), basis.end()})) != basis.size()) {
    raise(Errc::DependentBasis, "basis vectors are linearly dependent");
  }
  std::vector<TaggedPacket> out;
  out.reserve(basis.size());
  for (const auto& s : basis) out.push_back(tag_packet(pp, mk, pp.base().one(), s));
  return out;
}

Elem label(const PublicParams& pp, const VerifierKey& vk, Elem tracker, std::span<const Elem> payload) {
  check_base_vector(pp, payload, "payload");
  if (vk.column.size() != pp.M() + 1) raise(Errc::LengthMismatch, "verifier key must have M+1 entries");
  return linearized_eval(pp.ext(), vk.column, tracker, iso_vec(pp.ext(), payload));
}

bool verify(const PublicParams& pp, const VerifierKey& vk, std::span<const Elem> g, const TaggedPacket& pkt) {
  if (g.size() != pp.kdim() || pkt.tag.size() != pp.kdim()) raise(Errc::LengthMismatch, "tag length differs from kdim");
  const Elem lhs = label(pp, vk, pkt.tracker, pkt.payload);
  Elem rhs = pp.ext().zero();
  for (std::size_t t = 0; t < pp.kdim(); ++t) rhs += pkt.tag[t] * g[t];
  return lhs == rhs;
}

bool verify(const PublicParams& pp, const VerifierKey& vk, const TaggedPacket& pkt) {
  return verify(pp, vk, vk.g, pkt);
}

TaggedPacket combine(const PublicParams& pp, std::span<const Elem> coeffs, std::span<const TaggedPacket> packets) {
  if (coeffs.size() != packets.size()) raise(Errc::LengthMismatch, "one coefficient per packet");
  std::vector<Elem> acc(pp.packet_length(), pp.base().zero());
  for (std::size_t j = 0; j < packets.size(); ++j) {
    if (!pp.base().owns(coeffs[j])) raise(Errc::FieldMismatch, "coefficient outside the base field");
    const auto sym = packets[j].to_symbols(pp);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += coeffs[j] * sym[i];
  }
  return TaggedPacket::from_symbols(pp, acc);
}

std::vector<std::vector<Elem>> random_basis(const Field& base, std::size_t l, std::size_t n, Rng& rng) {
  if (n > l) raise(Errc::InvalidParams, "cannot draw more than l independent vectors");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix m = random_matrix(base, n, l, rng);
    if (rank(m) != n) continue;
    std::vector<std::vector<Elem>> out;
    for (std::size_t r = 0; r < n; ++r) out.push_back(m.row(r));
    return out;
  }
  raise(Errc::Internal, "failed to draw an independent basis");
}

}  // namespace subtag
