#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "subtag/field.hpp"
#include "subtag/matrix.hpp"

namespace subtag {

/// Exhaustive routines refuse codes with more codewords than this.
inline constexpr std::uint64_t kEnumerationLimit = 1ULL << 24;

/// A linear [V, k] code given by a k x V generator matrix. The generator is
/// kept verbatim (not reduced to a canonical form) because the scheme
/// publishes exactly this matrix.
///
/// The dual generator and the minimum distance are computed lazily; copies
/// share the cache.
class LinearCode {
 public:
  /// Raises RankDeficient when the rows of g are dependent.
  explicit LinearCode(Matrix g);

  const Matrix& generator() const noexcept { return g_; }
  const Field& field() const noexcept { return *g_.field(); }
  std::size_t length() const noexcept { return g_.cols(); }
  std::size_t dimension() const noexcept { return g_.rows(); }

  /// Column i of the generator (the vector g_i in F^k).
  std::vector<Elem> column(std::size_t i) const;
  std::vector<Elem> encode(std::span<const Elem> message) const;

  /// Rows span the dual code; (V - k) x V.
  const Matrix& dual_generator() const;
  LinearCode dual() const;

  /// nullopt for the zero-dimensional code.
  std::optional<std::size_t> min_distance() const;

 private:
  struct Cache;
  const LinearCode& cache_dual() const;

  Matrix g_;
  std::shared_ptr<Cache> cache_;
};

LinearCode code_from_generator(Matrix g);

/// Generator row t is (a_1^t, ..., a_V^t) for t = 0..k-1.
/// Raises TooLong when V exceeds the field order, DuplicatePoint on repeats.
LinearCode rs_code(const Field& field, std::span<const Elem> points, std::size_t k);

LinearCode dual(const LinearCode& c);

/// Exact minimum weight by enumerating all codewords; raises
/// TooLargeToEnumerate above kEnumerationLimit codewords.
std::optional<std::size_t> min_distance(const LinearCode& c);

std::uint64_t codeword_count(const LinearCode& c);

/// Calls fn on every codeword (including zero). Guarded as min_distance.
void for_each_codeword(const LinearCode& c, const std::function<void(std::span<const Elem>)>& fn);

bool is_mds(const LinearCode& c);

/// Codewords with component exactly 1 at coordinate i whose support strictly
/// contains the support of no other such codeword. Sorted by weight, then by
/// support. Requires V <= 64.
std::vector<std::vector<Elem>> minimal_codewords_wrt(const LinearCode& c, std::size_t i);

/// A set of colluding coordinates and the coordinate they attack.
struct CoalitionSpec {
  std::vector<std::size_t> coalition;
  std::size_t target = 0;

  /// Raises IndexOutOfRange or TargetInCoalition.
  void validate(std::size_t length) const;
};

struct Forgeability {
  bool forgeable = false;
  /// lambda with g_target = sum_j lambda_j g_{coalition[j]} when forgeable.
  std::vector<Elem> witness;
};

/// g_target lies in the span of the coalition's generator columns.
/// With SUBTAG_INVARIANT_CHECKS the answer is cross-checked against the dual
/// support criterion whenever the dual has at most 2^16 codewords.
Forgeability forgeable(const LinearCode& c, const CoalitionSpec& spec);

/// Some dual codeword has component 1 at the target and support inside
/// coalition + {target}. Enumerates the dual code.
bool forgeable_by_dual_support(const LinearCode& c, const CoalitionSpec& spec);

/// Minimal forging coalitions against coordinate i, each sorted ascending,
/// derived from the minimal dual codewords with respect to i.
std::vector<std::vector<std::size_t>> access_structure(const LinearCode& c, std::size_t i);

}  // namespace subtag
