#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subtag/matrix.hpp"
#include "subtag/scheme.hpp"

namespace subtag {

/// What a coalition of verifiers pools: their keys and the packets they
/// received. keys[j] belongs to members[j].
struct CoalitionView {
  std::vector<std::size_t> members;
  std::vector<VerifierKey> keys;
  std::vector<TaggedPacket> packets;
};

/// Picks the members' keys out of the full distribution.
CoalitionView make_view(std::span<const std::size_t> members, std::span<const VerifierKey> all_keys,
                        std::vector<TaggedPacket> packets);

/// Linear system in the kdim * (M+1) entries of A; unknown t*(M+1)+j is
/// A(j, t). Packet rows come first, then key rows.
struct AttackSystem {
  Matrix coefficients;
  Matrix constants;  // one column
  /// Rank of the stacked packet rows (tracker, s, s^q, ..., s^{q^{M-1}}).
  std::size_t r0 = 0;
  /// Rank of the coalition's columns of G.
  std::size_t K0 = 0;
  std::size_t unknowns() const noexcept { return coefficients.cols(); }
};

/// Raises InvalidParams when keys and members disagree.
AttackSystem assemble_system(const PublicParams& pp, const CoalitionView& view);

/// q^exponent, kept symbolic because counts overflow 64 bits quickly.
struct KeyCount {
  std::uint64_t q = 0;
  std::uint64_t exponent = 0;

  std::string decimal() const;
  /// nullopt when the value exceeds 2^64 - 1.
  std::optional<std::uint64_t> value() const;
  friend bool operator==(const KeyCount&, const KeyCount&) = default;
};

struct KeyCountReport {
  /// q^{l (M+1-r0)(kdim-K0)}.
  KeyCount closed_form;
  /// q^{l * nullity} from solving the system.
  KeyCount measured;
};

/// Raises InconsistentSystem when no master key fits the view and Internal
/// if the two counts ever differ.
KeyCountReport count_consistent_keys(const PublicParams& pp, const AttackSystem& sys);

/// Calls fn on every master key consistent with the system, by walking the
/// affine solution set. Raises InconsistentSystem or TooLargeToEnumerate
/// (more than 2^24 solutions).
void for_each_consistent_key(const PublicParams& pp, const AttackSystem& sys,
                             const std::function<void(const Matrix&)>& fn);

/// A tag accepted by a verifier holding column g exactly when its label is
/// `label`: label / g_t at the first t with g_t != 0, zeros elsewhere.
std::vector<Elem> tag_for_label(const PublicParams& pp, std::span<const Elem> g, Elem label);

struct Forgery {
  TaggedPacket packet;
  /// g_target = sum_j lambda_j g_{members[j]}.
  std::vector<Elem> lambda;
  /// The target's key column recovered from the coalition's keys.
  std::vector<Elem> recovered_key;
};

/// Raises TargetInCoalition / IndexOutOfRange, NotQualified when the target's
/// column is outside the span of the coalition's columns, and
/// PayloadInSubspace when `payload` lies in the span of the received payloads.
Forgery deterministic_forge(const PublicParams& pp, const CoalitionView& view, std::size_t target,
                            std::span<const Elem> payload, Elem tracker);

/// Tag for a label drawn uniformly from F_{q^l} (stream "adversary").
TaggedPacket guess_forge(const PublicParams& pp, const CoalitionView& view, std::size_t target,
                         std::span<const Elem> payload, Elem tracker, std::uint64_t seed);

/// How the target's label for (tracker 1, payload) spreads over the master
/// keys consistent with the view.
struct LabelDistribution {
  std::uint64_t field_order = 0;
  KeyCount consistent_keys;
  /// Number of distinct label values with nonzero count.
  std::uint64_t support = 0;
  /// Count of every label in the support (the same for all of them).
  KeyCount per_label;
  bool uniform() const noexcept { return support == field_order; }
  /// Set when every consistent key gives the same label.
  std::optional<Elem> determined;
  /// Full histogram indexed by label encoding; filled only by the exhaustive
  /// analyzer.
  std::vector<std::uint64_t> counts;
  bool exhaustive = false;
};

/// Enumerates every consistent key. Raises TooLargeToEnumerate when there
/// are more than 2^24, InconsistentSystem for corrupted views, and Internal
/// if the histogram is not flat on its support.
LabelDistribution label_distribution(const PublicParams& pp, const CoalitionView& view, std::size_t target,
                                     std::span<const Elem> payload);

/// Same answer derived from the affine structure: the label is an affine
/// function of the key, so it is either constant on the solution set or hits
/// every value equally often. No enumeration; any instance size.
LabelDistribution label_distribution_analytic(const PublicParams& pp, const CoalitionView& view, std::size_t target,
                                              std::span<const Elem> payload);

}  // namespace subtag
