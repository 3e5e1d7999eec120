#include "subtag/elliptic.hpp"

#include <algorithm>

#include "subtag/error.hpp"

namespace subtag::ec {

EllipticCurve::EllipticCurve(const Field& field, Elem a, Elem b) : field_(&field), a_(a), b_(b) {
  if (!field.owns(a) || !field.owns(b)) raise(Errc::FieldMismatch, "curve coefficients from another field");
  if (field.characteristic() <= 3) raise(Errc::InvalidCurve, "short Weierstrass form needs characteristic > 3");
  const Elem disc = field.from_integer(4) * a * a * a + field.from_integer(27) * b * b;
  if (disc.is_zero()) raise(Errc::InvalidCurve, "singular curve: 4a^3 + 27b^2 = 0");
}

bool EllipticCurve::contains(const Point& p) const {
  if (p.infinity) return true;
  if (!field_->owns(p.x) || !field_->owns(p.y)) return false;
  return p.y * p.y == p.x * p.x * p.x + a_ * p.x + b_;
}

Point EllipticCurve::neg(const Point& p) const {
  if (p.infinity) return p;
  return Point::affine(p.x, -p.y);
}

Point EllipticCurve::add(const Point& p, const Point& q) const {
  if (p.infinity) return q;
  if (q.infinity) return p;
  Elem slope;
  if (p.x == q.x) {
    if ((p.y + q.y).is_zero()) return Point::at_infinity();
    slope = (field_->from_integer(3) * p.x * p.x + a_) / (field_->from_integer(2) * p.y);
  } else {
    slope = (q.y - p.y) / (q.x - p.x);
  }
  const Elem x3 = slope * slope - p.x - q.x;
  const Elem y3 = slope * (p.x - x3) - p.y;
  return Point::affine(x3, y3);
}

Point EllipticCurve::sum(std::span<const Point> points) const {
  Point acc = Point::at_infinity();
  for (const auto& p : points) acc = add(acc, p);
  return acc;
}

Point EllipticCurve::multiply(const Point& p, std::uint64_t k) const {
  Point result = Point::at_infinity();
  Point base = p;
  while (k != 0) {
    if (k & 1) result = add(result, base);
    base = add(base, base);
    k >>= 1;
  }
  return result;
}

std::vector<Point> EllipticCurve::points() const {
  const std::uint64_t r = field_->order();
  if (r > (1ULL << 16)) raise(Errc::TooLargeToEnumerate, "point enumeration needs field order <= 2^16");
  std::vector<std::vector<std::uint32_t>> roots(r);
  for (std::uint64_t y = 0; y < r; ++y) {
    const Elem ey = field_->elem(y);
    roots[(ey * ey).value()].push_back(static_cast<std::uint32_t>(y));
  }
  std::vector<Point> out{Point::at_infinity()};
  for (std::uint64_t x = 0; x < r; ++x) {
    const Elem ex = field_->elem(x);
    const Elem rhs = ex * ex * ex + a_ * ex + b_;
    for (auto y : roots[rhs.value()]) out.push_back(Point::affine(ex, field_->elem(y)));
  }
  return out;
}

std::string EllipticCurve::format(const Point& p) const {
  if (p.infinity) return "O";
  return "(" + field_->format(p.x) + ";" + field_->format(p.y) + ")";
}

Elem Monomial::eval(const Field& field, const Point& p) const {
  if (p.infinity) raise(Errc::InvalidParams, "monomials have a pole at O");
  return field.pow(p.x, x_power) * field.pow(p.y, y_power);
}

std::vector<Monomial> rr_basis(unsigned m) {
  std::vector<Monomial> out;
  for (unsigned j = 0; j <= 1; ++j) {
    for (unsigned i = 0; 2 * i + 3 * j <= m; ++i) out.push_back({i, j});
  }
  std::sort(out.begin(), out.end(),
            [](const Monomial& a, const Monomial& b) { return a.pole_order() < b.pole_order(); });
  return out;
}

void AgCodeSpec::validate() const {
  const std::size_t n = points.size();
  if (degree == 0 || degree >= n) raise(Errc::InvalidParams, "need 0 < deg G < n");
  for (std::size_t i = 0; i < n; ++i) {
    if (points[i].infinity) raise(Errc::InvalidParams, "O must not belong to D");
    if (!curve.contains(points[i])) raise(Errc::InvalidCurve, "point of D is not on the curve");
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) raise(Errc::DuplicatePoint, "points of D must be distinct");
    }
  }
}

LinearCode eval_code(const AgCodeSpec& spec) {
  spec.validate();
  const Field& f = spec.curve.field();
  const auto basis = rr_basis(spec.degree);
  Matrix g(f, basis.size(), spec.points.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    for (std::size_t c = 0; c < spec.points.size(); ++c) g(r, c) = basis[r].eval(f, spec.points[c]);
  }
  try {
    return LinearCode(std::move(g));
  } catch (const Error& e) {
    // deg(kO - D) < 0 makes evaluation injective on L(kO).
    raise(Errc::Internal, std::string("evaluation map not injective: ") + e.what());
  }
}

LinearCode residue_code(const AgCodeSpec& spec) { return eval_code(spec).dual(); }

Point complement_sum(const AgCodeSpec& spec, std::span<const std::size_t> coalition) {
  std::vector<bool> in(spec.points.size(), false);
  for (auto i : coalition) {
    if (i >= in.size()) raise(Errc::IndexOutOfRange, "coalition index out of range");
    in[i] = true;
  }
  Point acc = Point::at_infinity();
  for (std::size_t i = 0; i < spec.points.size(); ++i) {
    if (!in[i]) acc = spec.curve.add(acc, spec.points[i]);
  }
  return acc;
}

Classification classify_coalition(const AgCodeSpec& spec, std::span<const std::size_t> coalition,
                                  std::size_t target) {
  const std::size_t n = spec.points.size();
  CoalitionSpec{{coalition.begin(), coalition.end()}, target}.validate(n);
  std::vector<std::size_t> sorted(coalition.begin(), coalition.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    raise(Errc::InvalidParams, "coalition lists a receiver twice");
  }
  const std::size_t size = sorted.size();
  const std::size_t k = spec.degree;
  // Sizes are compared as size + offset to avoid unsigned underflow.
  if (size + 2 <= n - k) return {Verdict::NotForgeable, std::nullopt};
  const Point s = complement_sum(spec, sorted);
  if (size + 1 == n - k) {
    if (s == spec.points[target]) return {Verdict::ForgeableAgainstExactly, spec.points[target]};
    return {Verdict::NotForgeable, std::nullopt};
  }
  if (size == n - k) {
    if (s.infinity) return {Verdict::NotForgeable, std::nullopt};
    return {Verdict::ForgeableAgainstAll, std::nullopt};
  }
  return {Verdict::ForgeableAgainstAll, std::nullopt};
}

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::NotForgeable: return "not_forgeable";
    case Verdict::ForgeableAgainstExactly: return "forgeable_against_exactly";
    case Verdict::ForgeableAgainstAll: return "forgeable_against_all";
  }
  return "unknown";
}

}  // namespace subtag::ec
