#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subtag {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// An element of a finite field. The owning field is carried with the value
/// and checked on every arithmetic operation; mixing fields raises
/// Errc::FieldMismatch.
///
/// `value()` is the canonical integer encoding: the coordinates over the
/// subfield read as little-endian digits in base |subfield|. For the base
/// field F_q = F_p[x]/(f) those coordinates are the F_p coefficients.
class Elem {
 public:
  Elem() = default;

  const Field* field() const noexcept { return field_; }
  std::uint32_t value() const noexcept { return value_; }
  bool is_zero() const noexcept { return value_ == 0; }
  bool is_one() const noexcept { return value_ == 1; }

  Elem& operator+=(Elem rhs);
  Elem& operator-=(Elem rhs);
  Elem& operator*=(Elem rhs);
  Elem& operator/=(Elem rhs);

  friend Elem operator+(Elem a, Elem b) { return a += b; }
  friend Elem operator-(Elem a, Elem b) { return a -= b; }
  friend Elem operator*(Elem a, Elem b) { return a *= b; }
  friend Elem operator/(Elem a, Elem b) { return a /= b; }
  Elem operator-() const;

  friend bool operator==(Elem a, Elem b) noexcept {
    return a.field_ == b.field_ && a.value_ == b.value_;
  }

 private:
  friend class Field;
  Elem(const Field* f, std::uint32_t v) noexcept : field_(f), value_(v) {}

  const Field* field_ = nullptr;
  std::uint32_t value_ = 0;
};

/// Multiplication and Frobenius-step counts observed on one field while a
/// ScopedOpCounter is alive on the current thread.
struct OpCounts {
  std::uint64_t mul = 0;
  std::uint64_t frobenius_steps = 0;
};

class ScopedOpCounter {
 public:
  explicit ScopedOpCounter(const Field& field);
  ~ScopedOpCounter();
  ScopedOpCounter(const ScopedOpCounter&) = delete;
  ScopedOpCounter& operator=(const ScopedOpCounter&) = delete;

  const OpCounts& counts() const noexcept { return counts_; }

 private:
  friend class Field;
  const Field* field_;
  OpCounts counts_;
  ScopedOpCounter* previous_;
};

/// A finite field built as a simple extension F[x]/(f) of a subfield F.
///
/// Two constructions are exposed, matching the two-level tower used by the
/// scheme: `base(p, m)` gives F_q with q = p^m over the prime field, and
/// `extension(base, l)` gives F_{q^l} over F_q. The extension is never
/// flattened to F_p; multiplication reduces modulo a polynomial with F_q
/// coefficients.
///
/// Default moduli are the lexicographically smallest monic irreducible
/// polynomial of the requested degree (comparing coefficient lists from the
/// top degree down). Instances are immutable and safe to share across threads.
class Field {
 public:
  /// Base field F_{p^m}. p must be prime and p^m <= 2^16.
  static FieldPtr base(std::uint32_t p, unsigned m);
  static FieldPtr base(std::uint32_t p, unsigned m, std::vector<std::uint32_t> modulus);

  /// Extension F_{q^l} of `base`. q^l must not exceed 2^32.
  static FieldPtr extension(FieldPtr base, unsigned l);
  static FieldPtr extension(FieldPtr base, unsigned l, std::vector<std::uint32_t> modulus);

  /// Smallest monic irreducible of degree `degree` over `sub`, coefficients
  /// little-endian (last entry is the leading 1).
  static std::vector<std::uint32_t> canonical_modulus(const Field& sub, unsigned degree);
  static bool is_irreducible(const Field& sub, std::span<const std::uint32_t> poly);

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;
  ~Field();

  std::uint64_t id() const noexcept { return id_; }
  std::uint64_t order() const noexcept { return order_; }
  std::uint32_t characteristic() const noexcept { return p_; }
  /// Degree over the subfield (m for a base field, l for an extension).
  unsigned degree() const noexcept { return degree_; }
  bool is_extension() const noexcept { return extension_; }
  bool is_prime() const noexcept { return subfield_ == nullptr; }
  /// F_p for a base field with m > 1, F_q for an extension, null for F_p.
  const Field* subfield() const noexcept { return subfield_.get(); }
  const FieldPtr& subfield_ptr() const noexcept { return subfield_; }
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  Elem zero() const noexcept { return Elem(this, 0); }
  Elem one() const noexcept { return Elem(this, 1); }
  /// Element with the given integer encoding; raises InvalidField when out of range.
  Elem elem(std::uint64_t value) const;
  /// Image of an integer under Z -> F.
  Elem from_integer(long long n) const;
  bool owns(Elem x) const noexcept { return x.field() == this; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem div(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem pow(Elem a, std::uint64_t e) const;

  /// x^{|subfield|^t}, applied as t products with the precomputed Frobenius
  /// matrix. Identity on a prime field.
  Elem frobenius(Elem x, std::uint64_t t = 1) const;
  /// Row-major degree x degree matrix over the subfield; column j holds the
  /// coordinates of (x^j)^{|subfield|}.
  std::vector<Elem> frobenius_matrix() const;

  /// Coordinates over the subfield in the polynomial basis 1, x, ..., x^{d-1}.
  /// A prime field reports its element as a single coordinate.
  std::vector<Elem> coordinates(Elem x) const;
  /// Inverse of coordinates(); raises LengthMismatch on a wrong length.
  Elem from_coordinates(std::span<const Elem> coords) const;
  /// Inclusion of the subfield as constant polynomials.
  Elem embed(Elem sub) const;

  /// Base-field elements print as their decimal encoding, extension elements
  /// as comma-separated decimal coordinates over the base field.
  std::string format(Elem x) const;
  Elem parse(std::string_view text) const;
  std::string describe() const;

  /// Raw operations on encodings, no ownership checks or op counting.
  std::uint32_t add_raw(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t neg_raw(std::uint32_t a) const noexcept;
  std::uint32_t sub_raw(std::uint32_t a, std::uint32_t b) const noexcept {
    return add_raw(a, neg_raw(b));
  }
  std::uint32_t mul_raw(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t inv_raw(std::uint32_t a) const;

 private:
  struct Tag {};

 public:
  Field(Tag, FieldPtr subfield, std::uint32_t p, unsigned degree, std::vector<std::uint32_t> modulus,
        bool extension);

 private:
  static FieldPtr prime(std::uint32_t p);
  void check(Elem x) const;
  std::uint32_t mul_poly(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t pow_raw(std::uint32_t a, std::uint64_t e) const noexcept;
  std::uint32_t frobenius_raw(std::uint32_t a) const noexcept;
  void build_tables();
  void build_frobenius();
  void count_mul() const noexcept;
  void count_frobenius(std::uint64_t steps) const noexcept;

  std::uint64_t id_;
  FieldPtr subfield_;
  std::uint32_t p_;
  unsigned degree_;
  std::uint64_t order_;
  std::uint64_t sub_order_;
  bool extension_;
  std::vector<std::uint32_t> modulus_;

  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint16_t> add_table_;
  std::vector<std::uint32_t> frobenius_;  // row-major, subfield encodings
};

inline Elem Elem::operator-() const {
  if (field_ == nullptr) return *this;
  return field_->neg(*this);
}

}  // namespace subtag
