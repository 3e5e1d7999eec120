#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subtag/code.hpp"
#include "subtag/field.hpp"

namespace subtag::ec {

struct Point {
  bool infinity = true;
  Elem x;
  Elem y;

  static Point at_infinity() { return Point{}; }
  static Point affine(Elem x, Elem y) { return Point{false, x, y}; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
  }
};

/// y^2 = x^3 + a x + b over a field of characteristic > 3.
class EllipticCurve {
 public:
  /// Raises InvalidCurve for characteristic 2 or 3 or when 4a^3 + 27b^2 = 0.
  EllipticCurve(const Field& field, Elem a, Elem b);

  const Field& field() const noexcept { return *field_; }
  Elem a() const noexcept { return a_; }
  Elem b() const noexcept { return b_; }

  bool contains(const Point& p) const;
  Point neg(const Point& p) const;
  Point add(const Point& p, const Point& q) const;
  Point sum(std::span<const Point> points) const;
  Point multiply(const Point& p, std::uint64_t k) const;

  /// Every rational point, O first and then affine points ordered by
  /// (x, y) encodings. Field order must be at most 2^16.
  std::vector<Point> points() const;

  std::string format(const Point& p) const;

 private:
  const Field* field_;
  Elem a_;
  Elem b_;
};

/// x^i y^j with pole order 2i + 3j at O.
struct Monomial {
  unsigned x_power = 0;
  unsigned y_power = 0;

  unsigned pole_order() const noexcept { return 2 * x_power + 3 * y_power; }
  Elem eval(const Field& field, const Point& p) const;
};

/// Basis of L(mO): the monomials x^i y^j with j <= 1 and pole order <= m,
/// sorted by pole order. Has m elements for m >= 1 and {1} for m = 0.
std::vector<Monomial> rr_basis(unsigned m);

/// Evaluation set D (ordered; coordinate i is D[i]) and divisor kO.
struct AgCodeSpec {
  EllipticCurve curve;
  std::vector<Point> points;
  unsigned degree = 0;

  std::size_t length() const noexcept { return points.size(); }
  /// Raises InvalidCurve / DuplicatePoint / InvalidParams.
  void validate() const;
};

/// C_L(D, kO): evaluations of rr_basis(k) at D. A [n, k] code.
LinearCode eval_code(const AgCodeSpec& spec);
/// Its dual, the [n, n-k] code used as the scheme's code.
LinearCode residue_code(const AgCodeSpec& spec);

enum class Verdict { NotForgeable, ForgeableAgainstExactly, ForgeableAgainstAll };

struct Classification {
  Verdict verdict = Verdict::NotForgeable;
  /// Set for ForgeableAgainstExactly: the single receiver point attackable.
  std::optional<Point> point;

  bool forgeable() const noexcept { return verdict != Verdict::NotForgeable; }
};

/// Sum of the points of D outside the coalition.
Point complement_sum(const AgCodeSpec& spec, std::span<const std::size_t> coalition);

/// Group-law classification of a coalition (indices into D) attacking
/// D[target], for the scheme built on residue_code(spec):
///   |A| <= n-k-2: NotForgeable.
///   |A| == n-k-1: ForgeableAgainstExactly(D[target]) iff the complement sum
///                 equals D[target]; otherwise NotForgeable.
///   |A| == n-k:   ForgeableAgainstAll iff the complement sum is not O.
///   |A| >= n-k+1: ForgeableAgainstAll.
Classification classify_coalition(const AgCodeSpec& spec, std::span<const std::size_t> coalition,
                                  std::size_t target);

std::string_view verdict_name(Verdict v) noexcept;

}  // namespace subtag::ec
