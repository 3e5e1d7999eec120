#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "subtag/code.hpp"
#include "subtag/field.hpp"
#include "subtag/matrix.hpp"
#include "subtag/rng.hpp"

namespace subtag {

/// Public parameters: base field F_q, extension F_{q^l}, subspace dimension
/// n, tag rows M and the public code over F_{q^l}. Payload vectors s in
/// F_q^l are mapped into F_{q^l} through the polynomial basis of `ext`.
class PublicParams {
 public:
  /// M defaults to n. Raises InvalidParams unless 1 <= n <= l, M >= n, the
  /// code lives over `ext` and neither the code nor its dual has a zero
  /// coordinate (both minimum distances at least 2).
  PublicParams(FieldPtr base, FieldPtr ext, std::size_t n, std::optional<std::size_t> M, LinearCode code);

  const Field& base() const noexcept { return *base_; }
  const Field& ext() const noexcept { return *ext_; }
  const FieldPtr& base_ptr() const noexcept { return base_; }
  const FieldPtr& ext_ptr() const noexcept { return ext_; }
  const LinearCode& code() const noexcept { return code_; }

  std::size_t n() const noexcept { return n_; }
  std::size_t M() const noexcept { return M_; }
  std::size_t l() const noexcept { return ext_->degree(); }
  std::size_t kdim() const noexcept { return code_.dimension(); }
  std::size_t V() const noexcept { return code_.length(); }
  /// 1 + l + kdim * l base-field symbols.
  std::size_t packet_length() const noexcept { return 1 + l() + kdim() * l(); }

 private:
  FieldPtr base_;
  FieldPtr ext_;
  std::size_t n_;
  std::size_t M_;
  LinearCode code_;
};

/// The (M+1) x kdim matrix A held by the trusted authority.
struct MasterKey {
  Matrix a;
};

/// Verifier i's secret column A g_i together with the public column g_i.
struct VerifierKey {
  std::size_t index = 0;
  std::vector<Elem> column;
  std::vector<Elem> g;
};

struct TaggedPacket {
  Elem tracker;
  std::vector<Elem> payload;
  std::vector<Elem> tag;

  /// tracker, payload, then each tag element as l coordinates.
  std::vector<Elem> to_symbols(const PublicParams& pp) const;
  /// Raises LengthMismatch unless symbols has packet_length() entries.
  static TaggedPacket from_symbols(const PublicParams& pp, std::span<const Elem> symbols);

  friend bool operator==(const TaggedPacket&, const TaggedPacket&) = default;
};

MasterKey keygen(const PublicParams& pp, std::uint64_t seed);

/// Verifier keys for every coordinate, computed as A g_i with
/// (M+1) * kdim * V extension multiplications.
std::vector<VerifierKey> distribute(const PublicParams& pp, const MasterKey& mk);

/// Tag row values L_1(s)..L_kdim(s) for one payload with the given tracker.
TaggedPacket tag_packet(const PublicParams& pp, const MasterKey& mk, Elem tracker, std::span<const Elem> payload);

/// One packet per basis vector, each with tracker 1. Raises LengthMismatch
/// unless there are n vectors of length l and DependentBasis when they are
/// linearly dependent.
std::vector<TaggedPacket> tag_basis(const PublicParams& pp, const MasterKey& mk,
                                    std::span<const std::vector<Elem>> basis);

/// tracker * b_0 + sum_{t=1..M} phi(payload)^{q^{t-1}} b_t.
Elem label(const PublicParams& pp, const VerifierKey& vk, Elem tracker, std::span<const Elem> payload);

/// label == sum_t tag_t g_{t,i}. Uses M-1 Frobenius steps and M + kdim + 1
/// extension multiplications.
bool verify(const PublicParams& pp, const VerifierKey& vk, std::span<const Elem> g, const TaggedPacket& pkt);
bool verify(const PublicParams& pp, const VerifierKey& vk, const TaggedPacket& pkt);

/// sum_j coeffs[j] * packets[j], component-wise over F_q.
TaggedPacket combine(const PublicParams& pp, std::span<const Elem> coeffs, std::span<const TaggedPacket> packets);

/// n uniformly drawn linearly independent vectors of F_q^l.
std::vector<std::vector<Elem>> random_basis(const Field& base, std::size_t l, std::size_t n, Rng& rng);

}  // namespace subtag
