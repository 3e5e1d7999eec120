#include "subtag/field.hpp"

#include <atomic>
#include <charconv>
#include <sstream>

#include "subtag/error.hpp"

namespace subtag {

namespace {

constexpr std::uint64_t kMaxBaseOrder = 1ULL << 16;
constexpr std::uint64_t kMaxOrder = 1ULL << 32;
constexpr std::uint64_t kMaxTableOrder = 1ULL << 20;
constexpr std::uint64_t kMaxAddTableOrder = 512;

std::atomic<std::uint64_t> g_next_field_id{1};
thread_local ScopedOpCounter* g_active_counter = nullptr;

bool is_prime_number(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Polynomials over a field as little-endian coefficient encodings.
using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo the monic polynomial b.
Poly poly_rem_monic(const Field& f, Poly a, const Poly& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint32_t lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = f.sub_raw(a[shift + i], f.mul_raw(lead, b[i]));
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Field& f, const Poly& a, const Poly& b, const Poly& m) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = f.add_raw(prod[i + j], f.mul_raw(a[i], b[j]));
  }
  return poly_rem_monic(f, std::move(prod), m);
}

Poly poly_powmod(const Field& f, Poly base, std::uint64_t e, const Poly& m) {
  Poly result{1};
  base = poly_rem_monic(f, std::move(base), m);
  while (e != 0) {
    if (e & 1) result = poly_mulmod(f, result, base, m);
    e >>= 1;
    if (e != 0) base = poly_mulmod(f, base, base, m);
  }
  return result;
}

Poly poly_gcd(const Field& f, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    const std::uint32_t inv = f.inv_raw(b.back());
    for (auto& c : b) c = f.mul_raw(c, inv);
    a = poly_rem_monic(f, std::move(a), b);
    std::swap(a, b);
  }
  return a;
}

// x^(q^k) mod m for k = 0..n, by repeated q-th powers.
std::vector<Poly> frobenius_orbit(const Field& f, const Poly& m, std::size_t n) {
  std::vector<Poly> out{poly_rem_monic(f, Poly{0, 1}, m)};
  for (std::size_t k = 1; k <= n; ++k) out.push_back(poly_powmod(f, out.back(), f.order(), m));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Elem

Elem& Elem::operator+=(Elem rhs) {
  if (field_ == nullptr || field_ != rhs.field_) raise(Errc::FieldMismatch, "addition across fields");
  value_ = field_->add_raw(value_, rhs.value_);
  return *this;
}

Elem& Elem::operator-=(Elem rhs) {
  if (field_ == nullptr || field_ != rhs.field_) raise(Errc::FieldMismatch, "subtraction across fields");
  value_ = field_->sub_raw(value_, rhs.value_);
  return *this;
}

Elem& Elem::operator*=(Elem rhs) {
  if (field_ == nullptr) raise(Errc::FieldMismatch, "multiplication without field");
  *this = field_->mul(*this, rhs);
  return *this;
}

Elem& Elem::operator/=(Elem rhs) {
  if (field_ == nullptr) raise(Errc::FieldMismatch, "division without field");
  *this = field_->div(*this, rhs);
  return *this;
}

// ---------------------------------------------------------------------------
// ScopedOpCounter

ScopedOpCounter::ScopedOpCounter(const Field& field) : field_(&field), previous_(g_active_counter) {
  g_active_counter = this;
}

ScopedOpCounter::~ScopedOpCounter() { g_active_counter = previous_; }

void Field::count_mul() const noexcept {
  for (auto* c = g_active_counter; c != nullptr; c = c->previous_) {
    if (c->field_ == this) ++c->counts_.mul;
  }
}

void Field::count_frobenius(std::uint64_t steps) const noexcept {
  for (auto* c = g_active_counter; c != nullptr; c = c->previous_) {
    if (c->field_ == this) c->counts_.frobenius_steps += steps;
  }
}

// ---------------------------------------------------------------------------
// Construction

Field::Field(Tag, FieldPtr subfield, std::uint32_t p, unsigned degree, std::vector<std::uint32_t> modulus,
             bool extension)
    : id_(g_next_field_id.fetch_add(1)),
      subfield_(std::move(subfield)),
      p_(p),
      degree_(degree),
      order_(1),
      sub_order_(subfield_ ? subfield_->order() : p),
      extension_(extension),
      modulus_(std::move(modulus)) {
  for (unsigned i = 0; i < degree_; ++i) order_ *= sub_order_;
  build_tables();
  build_frobenius();
}

Field::~Field() = default;

FieldPtr Field::prime(std::uint32_t p) {
  if (!is_prime_number(p)) raise(Errc::InvalidField, "characteristic " + std::to_string(p) + " is not prime");
  if (p > kMaxBaseOrder) raise(Errc::InvalidField, "prime exceeds 2^16");
  return std::make_shared<const Field>(Tag{}, nullptr, p, 1, std::vector<std::uint32_t>{0, 1}, false);
}

FieldPtr Field::base(std::uint32_t p, unsigned m) {
  if (m == 0) raise(Errc::InvalidField, "degree must be at least 1");
  auto fp = prime(p);
  if (m == 1) return fp;
  return base(p, m, canonical_modulus(*fp, m));
}

FieldPtr Field::base(std::uint32_t p, unsigned m, std::vector<std::uint32_t> modulus) {
  if (m == 0) raise(Errc::InvalidField, "degree must be at least 1");
  auto fp = prime(p);
  std::uint64_t q = 1;
  for (unsigned i = 0; i < m; ++i) {
    q *= p;
    if (q > kMaxBaseOrder) raise(Errc::InvalidField, "base field order exceeds 2^16");
  }
  if (m == 1) {
    if (modulus.size() != 2 || modulus[1] != 1 || modulus[0] >= p) {
      raise(Errc::InvalidField, "degree-1 modulus must be monic linear");
    }
    return fp;
  }
  if (modulus.size() != m + 1 || modulus.back() != 1) raise(Errc::InvalidField, "modulus must be monic of degree m");
  for (auto c : modulus) {
    if (c >= p) raise(Errc::InvalidField, "modulus coefficient out of range");
  }
  if (!is_irreducible(*fp, modulus)) raise(Errc::InvalidField, "base modulus is reducible");
  return std::make_shared<const Field>(Tag{}, fp, p, m, std::move(modulus), false);
}

FieldPtr Field::extension(FieldPtr base, unsigned l) {
  if (!base) raise(Errc::InvalidField, "null base field");
  if (l == 0) raise(Errc::InvalidField, "extension degree must be at least 1");
  auto modulus = canonical_modulus(*base, l);
  return extension(std::move(base), l, std::move(modulus));
}

FieldPtr Field::extension(FieldPtr base, unsigned l, std::vector<std::uint32_t> modulus) {
  if (!base) raise(Errc::InvalidField, "null base field");
  if (base->is_extension()) raise(Errc::InvalidField, "extension of an extension is not supported");
  if (l == 0) raise(Errc::InvalidField, "extension degree must be at least 1");
  std::uint64_t order = 1;
  for (unsigned i = 0; i < l; ++i) {
    order *= base->order();
    if (order > kMaxOrder) raise(Errc::InvalidField, "extension order exceeds 2^32");
  }
  if (modulus.size() != l + 1 || modulus.back() != 1) raise(Errc::InvalidField, "modulus must be monic of degree l");
  for (auto c : modulus) {
    if (c >= base->order()) raise(Errc::InvalidField, "modulus coefficient out of range");
  }
  if (!is_irreducible(*base, modulus)) raise(Errc::InvalidField, "extension modulus is reducible");
  const auto p = base->characteristic();
  return std::make_shared<const Field>(Tag{}, std::move(base), p, l, std::move(modulus), true);
}

bool Field::is_irreducible(const Field& sub, std::span<const std::uint32_t> poly) {
  Poly f(poly.begin(), poly.end());
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t deg = f.size() - 1;
  if (deg == 1) return true;
  if (f[0] == 0) return false;
  // Rabin: f is irreducible iff x^(q^deg) = x mod f and
  // gcd(x^(q^(deg/r)) - x, f) = 1 for every prime r dividing deg.
  const std::uint32_t lead_inv = sub.inv_raw(f.back());
  for (auto& c : f) c = sub.mul_raw(c, lead_inv);
  const auto orbit = frobenius_orbit(sub, f, deg);
  auto minus_x = [&](Poly h) {
    if (h.size() < 2) h.resize(2, 0);
    h[1] = sub.sub_raw(h[1], 1);
    trim(h);
    return h;
  };
  if (!minus_x(orbit[deg]).empty()) return false;
  for (auto r : prime_factors(deg)) {
    const auto g = poly_gcd(sub, f, minus_x(orbit[deg / r]));
    if (g.size() != 1) return false;
  }
  return true;
}

std::vector<std::uint32_t> Field::canonical_modulus(const Field& sub, unsigned degree) {
  if (degree == 0) raise(Errc::InvalidField, "modulus degree must be at least 1");
  const std::uint64_t q = sub.order();
  std::uint64_t count = 1;
  for (unsigned i = 0; i < degree; ++i) {
    count *= q;
    if (count > kMaxOrder) raise(Errc::InvalidField, "modulus search space exceeds 2^32");
  }
  // Lower coefficients read as a base-q integer: increasing v walks the
  // monic polynomials in lexicographic order from the top coefficient down.
  for (std::uint64_t v = 0; v < count; ++v) {
    Poly f(degree + 1);
    std::uint64_t rest = v;
    for (unsigned i = 0; i < degree; ++i) {
      f[i] = static_cast<std::uint32_t>(rest % q);
      rest /= q;
    }
    f[degree] = 1;
    if (is_irreducible(sub, f)) return f;
  }
  raise(Errc::Internal, "no irreducible polynomial found");
}

void Field::build_tables() {
  if (order_ <= kMaxAddTableOrder && p_ != 2) {
    add_table_.resize(order_ * order_);
    for (std::uint64_t a = 0; a < order_; ++a) {
      for (std::uint64_t b = 0; b < order_; ++b) {
        std::uint64_t x = a, y = b, r = 0, scale = 1;
        while (x != 0 || y != 0) {
          r += ((x % p_ + y % p_) % p_) * scale;
          x /= p_;
          y /= p_;
          scale *= p_;
        }
        add_table_[a * order_ + b] = static_cast<std::uint16_t>(r);
      }
    }
  }
  if (is_prime() || order_ > kMaxTableOrder) return;

  // Primitive element by order test, then log/exp tables from the slow path.
  const auto factors = prime_factors(order_ - 1);
  std::uint32_t gen = 0;
  for (std::uint64_t g = 1; g < order_; ++g) {
    bool primitive = true;
    for (auto r : factors) {
      if (pow_raw(static_cast<std::uint32_t>(g), (order_ - 1) / r) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      gen = static_cast<std::uint32_t>(g);
      break;
    }
  }
  if (gen == 0) raise(Errc::Internal, "no primitive element");
  exp_.resize(2 * (order_ - 1));
  log_.assign(order_, 0);
  std::uint32_t x = 1;
  for (std::uint64_t i = 0; i < order_ - 1; ++i) {
    exp_[i] = x;
    exp_[i + order_ - 1] = x;
    log_[x] = static_cast<std::uint32_t>(i);
    x = mul_poly(x, gen);
  }
}

void Field::build_frobenius() {
  frobenius_.assign(static_cast<std::size_t>(degree_) * degree_, 0);
  if (is_prime()) {
    frobenius_[0] = 1;
    return;
  }
  std::uint64_t basis = 1;
  for (unsigned j = 0; j < degree_; ++j) {
    std::uint32_t image = pow_raw(static_cast<std::uint32_t>(basis), sub_order_);
    for (unsigned i = 0; i < degree_; ++i) {
      frobenius_[i * degree_ + j] = static_cast<std::uint32_t>(image % sub_order_);
      image = static_cast<std::uint32_t>(image / sub_order_);
    }
    basis *= sub_order_;
  }
  // The subfield is fixed by the map, so its degree-th power is the identity.
  basis = 1;
  for (unsigned j = 0; j < degree_; ++j) {
    std::uint32_t x = static_cast<std::uint32_t>(basis);
    for (unsigned t = 0; t < degree_; ++t) x = frobenius_raw(x);
    if (x != basis) raise(Errc::Internal, "Frobenius matrix does not have order dividing the degree");
    basis *= sub_order_;
  }
}

// ---------------------------------------------------------------------------
// Raw arithmetic

std::uint32_t Field::add_raw(std::uint32_t a, std::uint32_t b) const noexcept {
  if (p_ == 2) return a ^ b;
  if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * order_ + b];
  if (is_prime()) {
    const std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t x = a, y = b, r = 0, scale = 1;
  while (x != 0 || y != 0) {
    r += ((x % p_ + y % p_) % p_) * scale;
    x /= p_;
    y /= p_;
    scale *= p_;
  }
  return static_cast<std::uint32_t>(r);
}

std::uint32_t Field::neg_raw(std::uint32_t a) const noexcept {
  if (p_ == 2 || a == 0) return a;
  if (is_prime()) return p_ - a;
  std::uint64_t x = a, r = 0, scale = 1;
  while (x != 0) {
    r += ((p_ - x % p_) % p_) * scale;
    x /= p_;
    scale *= p_;
  }
  return static_cast<std::uint32_t>(r);
}

std::uint32_t Field::mul_raw(std::uint32_t a, std::uint32_t b) const noexcept {
  if (a == 0 || b == 0) return 0;
  if (is_prime()) return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p_);
  if (!exp_.empty()) return exp_[log_[a] + log_[b]];
  return mul_poly(a, b);
}

std::uint32_t Field::mul_poly(std::uint32_t a, std::uint32_t b) const noexcept {
  const Field& sub = *subfield_;
  const unsigned d = degree_;
  std::uint32_t ca[64] = {};
  std::uint32_t cb[64] = {};
  std::uint32_t prod[128] = {};
  std::uint64_t x = a, y = b;
  for (unsigned i = 0; i < d; ++i) {
    ca[i] = static_cast<std::uint32_t>(x % sub_order_);
    cb[i] = static_cast<std::uint32_t>(y % sub_order_);
    x /= sub_order_;
    y /= sub_order_;
  }
  for (unsigned i = 0; i < d; ++i) {
    if (ca[i] == 0) continue;
    for (unsigned j = 0; j < d; ++j) {
      prod[i + j] = sub.add_raw(prod[i + j], sub.mul_raw(ca[i], cb[j]));
    }
  }
  for (unsigned k = 2 * d - 1; k-- > d;) {
    const std::uint32_t lead = prod[k];
    if (lead == 0) continue;
    prod[k] = 0;
    for (unsigned i = 0; i < d; ++i) {
      prod[k - d + i] = sub.sub_raw(prod[k - d + i], sub.mul_raw(lead, modulus_[i]));
    }
  }
  std::uint64_t r = 0;
  for (unsigned i = d; i-- > 0;) r = r * sub_order_ + prod[i];
  return static_cast<std::uint32_t>(r);
}

std::uint32_t Field::pow_raw(std::uint32_t a, std::uint64_t e) const noexcept {
  std::uint32_t result = 1;
  std::uint32_t base = a;
  while (e != 0) {
    if (e & 1) result = exp_.empty() && !is_prime() ? mul_poly(result, base) : mul_raw(result, base);
    base = exp_.empty() && !is_prime() ? mul_poly(base, base) : mul_raw(base, base);
    e >>= 1;
  }
  return result;
}

std::uint32_t Field::inv_raw(std::uint32_t a) const {
  if (a == 0) raise(Errc::DivisionByZero, "inverse of zero in " + describe());
  if (!exp_.empty()) return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
  return pow_raw(a, order_ - 2);
}

std::uint32_t Field::frobenius_raw(std::uint32_t a) const noexcept {
  if (is_prime()) return a;
  const Field& sub = *subfield_;
  std::uint32_t coords[64];
  std::uint64_t x = a;
  for (unsigned i = 0; i < degree_; ++i) {
    coords[i] = static_cast<std::uint32_t>(x % sub_order_);
    x /= sub_order_;
  }
  std::uint64_t r = 0;
  for (unsigned i = degree_; i-- > 0;) {
    std::uint32_t acc = 0;
    for (unsigned j = 0; j < degree_; ++j) {
      acc = sub.add_raw(acc, sub.mul_raw(frobenius_[i * degree_ + j], coords[j]));
    }
    r = r * sub_order_ + acc;
  }
  return static_cast<std::uint32_t>(r);
}

// ---------------------------------------------------------------------------
// Checked element API

void Field::check(Elem x) const {
  if (x.field() != this) raise(Errc::FieldMismatch, "element does not belong to " + describe());
}

Elem Field::elem(std::uint64_t value) const {
  if (value >= order_) raise(Errc::InvalidField, "value " + std::to_string(value) + " out of range for " + describe());
  return Elem(this, static_cast<std::uint32_t>(value));
}

Elem Field::from_integer(long long n) const {
  long long r = n % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return Elem(this, static_cast<std::uint32_t>(r));
}

Elem Field::add(Elem a, Elem b) const {
  check(a);
  check(b);
  return Elem(this, add_raw(a.value(), b.value()));
}

Elem Field::sub(Elem a, Elem b) const {
  check(a);
  check(b);
  return Elem(this, sub_raw(a.value(), b.value()));
}

Elem Field::neg(Elem a) const {
  check(a);
  return Elem(this, neg_raw(a.value()));
}

Elem Field::mul(Elem a, Elem b) const {
  check(a);
  check(b);
  count_mul();
  return Elem(this, mul_raw(a.value(), b.value()));
}

Elem Field::div(Elem a, Elem b) const {
  check(a);
  check(b);
  if (b.is_zero()) raise(Errc::DivisionByZero, "division by zero in " + describe());
  count_mul();
  return Elem(this, mul_raw(a.value(), inv_raw(b.value())));
}

Elem Field::inv(Elem a) const {
  check(a);
  return Elem(this, inv_raw(a.value()));
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  check(a);
  return Elem(this, pow_raw(a.value(), e));
}

Elem Field::frobenius(Elem x, std::uint64_t t) const {
  check(x);
  if (is_prime()) return x;
  count_frobenius(t);
  std::uint32_t v = x.value();
  // x^{q^degree} = x
  for (std::uint64_t i = 0; i < t % degree_; ++i) v = frobenius_raw(v);
  return Elem(this, v);
}

std::vector<Elem> Field::frobenius_matrix() const {
  const Field* sub = is_prime() ? this : subfield_.get();
  std::vector<Elem> out;
  out.reserve(frobenius_.size());
  for (auto v : frobenius_) out.push_back(Elem(sub, v));
  return out;
}

std::vector<Elem> Field::coordinates(Elem x) const {
  check(x);
  if (is_prime()) return {x};
  std::vector<Elem> out;
  out.reserve(degree_);
  std::uint64_t v = x.value();
  for (unsigned i = 0; i < degree_; ++i) {
    out.push_back(Elem(subfield_.get(), static_cast<std::uint32_t>(v % sub_order_)));
    v /= sub_order_;
  }
  return out;
}

Elem Field::from_coordinates(std::span<const Elem> coords) const {
  if (coords.size() != degree_) {
    raise(Errc::LengthMismatch, "expected " + std::to_string(degree_) + " coordinates, got " +
                                    std::to_string(coords.size()));
  }
  if (is_prime()) {
    check(coords[0]);
    return coords[0];
  }
  std::uint64_t v = 0;
  for (std::size_t i = coords.size(); i-- > 0;) {
    subfield_->check(coords[i]);
    v = v * sub_order_ + coords[i].value();
  }
  return Elem(this, static_cast<std::uint32_t>(v));
}

Elem Field::embed(Elem sub) const {
  if (is_prime()) {
    check(sub);
    return sub;
  }
  subfield_->check(sub);
  return Elem(this, sub.value());
}

std::string Field::format(Elem x) const {
  check(x);
  if (!extension_) return std::to_string(x.value());
  std::string out;
  std::uint64_t v = x.value();
  for (unsigned i = 0; i < degree_; ++i) {
    if (i != 0) out += ',';
    out += std::to_string(v % sub_order_);
    v /= sub_order_;
  }
  return out;
}

Elem Field::parse(std::string_view text) const {
  auto parse_uint = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
      raise(Errc::ParseError, "bad field symbol '" + std::string(s) + "'");
    }
    return v;
  };
  if (!extension_) {
    const auto v = parse_uint(text);
    if (v >= order_) raise(Errc::ParseError, "symbol " + std::to_string(v) + " out of range for " + describe());
    return Elem(this, static_cast<std::uint32_t>(v));
  }
  std::vector<Elem> coords;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto part = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    coords.push_back(subfield_->parse(part));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (coords.size() != degree_) {
    raise(Errc::ParseError, "expected " + std::to_string(degree_) + " coordinates in '" + std::string(text) + "'");
  }
  return from_coordinates(coords);
}

std::string Field::describe() const {
  std::ostringstream os;
  if (extension_) {
    os << "F_" << order_ << " = F_" << sub_order_ << "[y]/(";
  } else if (is_prime()) {
    os << "F_" << p_;
    return os.str();
  } else {
    os << "F_" << order_ << " = F_" << p_ << "[x]/(";
  }
  for (std::size_t i = 0; i < modulus_.size(); ++i) {
    if (i != 0) os << ' ';
    os << modulus_[i];
  }
  os << ')';
  return os.str();
}

}  // namespace subtag
