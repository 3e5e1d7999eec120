#include "subtag/adversary.hpp"

#include <algorithm>

#include "subtag/code.hpp"
#include "subtag/error.hpp"
#include "subtag/linearized.hpp"

namespace subtag {

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (v > limit / base) return limit + 1;
    v *= base;
  }
  return v;
}

/// (tracker, s, s^q, ..., s^{q^{M-1}}) for a packet header.
std::vector<Elem> packet_row(const PublicParams& pp, Elem tracker, std::span<const Elem> payload) {
  auto row = moore_row(pp.ext(), iso_vec(pp.ext(), payload), pp.M());
  row[0] = pp.ext().embed(tracker);
  return row;
}

void check_view(const PublicParams& pp, const CoalitionView& view) {
  if (view.keys.size() != view.members.size()) raise(Errc::InvalidParams, "one key per coalition member");
  for (std::size_t j = 0; j < view.members.size(); ++j) {
    if (view.members[j] >= pp.V()) raise(Errc::IndexOutOfRange, "coalition member out of range");
    if (view.keys[j].index != view.members[j]) raise(Errc::InvalidParams, "key does not belong to its member");
    if (view.keys[j].column.size() != pp.M() + 1) raise(Errc::LengthMismatch, "verifier key must have M+1 entries");
  }
  for (const auto& p : view.packets) {
    if (p.payload.size() != pp.l() || p.tag.size() != pp.kdim()) raise(Errc::LengthMismatch, "malformed packet");
  }
}

void check_target(const PublicParams& pp, const CoalitionView& view, std::size_t target) {
  CoalitionSpec{view.members, target}.validate(pp.V());
}

/// Target label as a linear functional of vec(A): label = sum_u w_u x_u.
std::vector<Elem> label_functional(const PublicParams& pp, std::size_t target, std::span<const Elem> payload) {
  const auto m = packet_row(pp, pp.base().one(), payload);
  const auto g = pp.code().column(target);
  const std::size_t rows = pp.M() + 1;
  std::vector<Elem> w(pp.kdim() * rows, pp.ext().zero());
  for (std::size_t t = 0; t < pp.kdim(); ++t) {
    for (std::size_t j = 0; j < rows; ++j) w[t * rows + j] = m[j] * g[t];
  }
  return w;
}

AffineSolution solve_or_throw(const AttackSystem& sys) {
  auto sol = solve_all(sys.coefficients, sys.constants);
  if (!sol) raise(Errc::InconsistentSystem, "no master key is consistent with the coalition's view");
  return std::move(*sol);
}

Matrix unflatten(const PublicParams& pp, std::span<const Elem> x) {
  const std::size_t rows = pp.M() + 1;
  Matrix a(pp.ext(), rows, pp.kdim());
  for (std::size_t t = 0; t < pp.kdim(); ++t) {
    for (std::size_t j = 0; j < rows; ++j) a(j, t) = x[t * rows + j];
  }
  return a;
}

}  // namespace

CoalitionView make_view(std::span<const std::size_t> members, std::span<const VerifierKey> all_keys,
                        std::vector<TaggedPacket> packets) {
  CoalitionView v;
  v.members.assign(members.begin(), members.end());
  for (auto m : members) {
    if (m >= all_keys.size()) raise(Errc::IndexOutOfRange, "coalition member out of range");
    v.keys.push_back(all_keys[m]);
  }
  v.packets = std::move(packets);
  return v;
}

AttackSystem assemble_system(const PublicParams& pp, const CoalitionView& view) {
  check_view(pp, view);
  const Field& ext = pp.ext();
  const std::size_t rows = pp.M() + 1;
  const std::size_t kdim = pp.kdim();
  const std::size_t eqs = view.packets.size() * kdim + view.members.size() * rows;
  AttackSystem sys{Matrix(ext, eqs, kdim * rows), Matrix(ext, eqs, 1), 0, 0};

  std::vector<std::vector<Elem>> d_rows;
  std::size_t r = 0;
  for (const auto& p : view.packets) {
    auto m = packet_row(pp, p.tracker, p.payload);
    for (std::size_t t = 0; t < kdim; ++t, ++r) {
      for (std::size_t j = 0; j < rows; ++j) sys.coefficients(r, t * rows + j) = m[j];
      sys.constants(r, 0) = p.tag[t];
    }
    d_rows.push_back(std::move(m));
  }
  std::vector<std::vector<Elem>> g_cols;
  for (std::size_t k = 0; k < view.members.size(); ++k) {
    auto g = pp.code().column(view.members[k]);
    for (std::size_t j = 0; j < rows; ++j, ++r) {
      for (std::size_t t = 0; t < kdim; ++t) sys.coefficients(r, t * rows + j) = g[t];
      sys.constants(r, 0) = view.keys[k].column[j];
    }
    g_cols.push_back(std::move(g));
  }
  sys.r0 = d_rows.empty() ? 0 : rank(Matrix::from_rows(ext, rows, d_rows));
  sys.K0 = g_cols.empty() ? 0 : rank(Matrix::from_columns(ext, kdim, g_cols));
  return sys;
}

std::string KeyCount::decimal() const {
  // Little-endian base-10^9 limbs.
  std::vector<std::uint64_t> limbs{1};
  for (std::uint64_t i = 0; i < exponent; ++i) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs) {
      const std::uint64_t v = limb * q + carry;
      limb = v % 1000000000ULL;
      carry = v / 1000000000ULL;
    }
    while (carry) {
      limbs.push_back(carry % 1000000000ULL);
      carry /= 1000000000ULL;
    }
  }
  std::string out = std::to_string(limbs.back());
  for (std::size_t i = limbs.size() - 1; i-- > 0;) {
    const auto part = std::to_string(limbs[i]);
    out += std::string(9 - part.size(), '0') + part;
  }
  return out;
}

std::optional<std::uint64_t> KeyCount::value() const {
  const auto limit = ~std::uint64_t{0};
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    if (v > limit / q) return std::nullopt;
    v *= q;
  }
  return v;
}

KeyCountReport count_consistent_keys(const PublicParams& pp, const AttackSystem& sys) {
  const auto sol = solve_or_throw(sys);
  const std::uint64_t q = pp.base().order();
  const std::uint64_t l = pp.l();
  KeyCountReport rep;
  rep.closed_form = {q, l * (pp.M() + 1 - sys.r0) * (pp.kdim() - sys.K0)};
  rep.measured = {q, l * sol.nullity()};
  if (!(rep.closed_form == rep.measured)) {
    raise(Errc::Internal, "consistent key count q^" + std::to_string(rep.measured.exponent) +
                              " differs from closed form q^" + std::to_string(rep.closed_form.exponent));
  }
  return rep;
}

void for_each_consistent_key(const PublicParams& pp, const AttackSystem& sys,
                             const std::function<void(const Matrix&)>& fn) {
  const auto sol = solve_or_throw(sys);
  const Field& ext = pp.ext();
  const std::size_t nullity = sol.nullity();
  if (checked_pow(ext.order(), nullity, kEnumerationLimit) > kEnumerationLimit) {
    raise(Errc::TooLargeToEnumerate, "more than 2^24 consistent master keys");
  }
  const std::size_t n = sys.unknowns();
  const auto order = static_cast<std::uint32_t>(ext.order());
  std::vector<std::uint32_t> digits(nullity, 0);
  std::vector<Elem> x = sol.particular.col(0);
  while (true) {
    fn(unflatten(pp, x));
    std::size_t j = 0;
    for (; j < nullity; ++j) {
      const std::uint32_t old = digits[j];
      const std::uint32_t next = old + 1 == order ? 0 : old + 1;
      digits[j] = next;
      const Elem delta = ext.elem(ext.sub_raw(next, old));
      for (std::size_t u = 0; u < n; ++u) x[u] += delta * sol.null_basis(u, j);
      if (next != 0) break;
    }
    if (j == nullity) break;
  }
}

std::vector<Elem> tag_for_label(const PublicParams& pp, std::span<const Elem> g, Elem label) {
  if (g.size() != pp.kdim()) raise(Errc::LengthMismatch, "public column must have kdim entries");
  std::vector<Elem> tag(pp.kdim(), pp.ext().zero());
  for (std::size_t t = 0; t < g.size(); ++t) {
    if (!g[t].is_zero()) {
      tag[t] = label / g[t];
      return tag;
    }
  }
  raise(Errc::InvalidParams, "public column is zero");
}

Forgery deterministic_forge(const PublicParams& pp, const CoalitionView& view, std::size_t target,
                            std::span<const Elem> payload, Elem tracker) {
  check_view(pp, view);
  check_target(pp, view, target);
  if (payload.size() != pp.l()) raise(Errc::LengthMismatch, "payload must have l entries");
  const auto witness = forgeable(pp.code(), CoalitionSpec{view.members, target});
  if (!witness.forgeable) {
    raise(Errc::NotQualified, "target column is outside the span of the coalition's columns");
  }
  std::vector<std::vector<Elem>> received;
  for (const auto& p : view.packets) received.push_back(p.payload);
  if (span_contains(pp.base(), received, payload)) {
    raise(Errc::PayloadInSubspace, "forged payload lies in the subspace already received");
  }

  Forgery f;
  f.lambda = witness.witness;
  f.recovered_key.assign(pp.M() + 1, pp.ext().zero());
  for (std::size_t j = 0; j < view.members.size(); ++j) {
    for (std::size_t r = 0; r <= pp.M(); ++r) f.recovered_key[r] += f.lambda[j] * view.keys[j].column[r];
  }
  const auto g = pp.code().column(target);
  const Elem lbl = linearized_eval(pp.ext(), f.recovered_key, tracker, iso_vec(pp.ext(), payload));
  f.packet = TaggedPacket{tracker, {payload.begin(), payload.end()}, tag_for_label(pp, g, lbl)};
  return f;
}

TaggedPacket guess_forge(const PublicParams& pp, const CoalitionView& view, std::size_t target,
                         std::span<const Elem> payload, Elem tracker, std::uint64_t seed) {
  check_view(pp, view);
  check_target(pp, view, target);
  if (payload.size() != pp.l()) raise(Errc::LengthMismatch, "payload must have l entries");
  Rng rng = Rng(seed).stream("adversary");
  const Elem lbl = random_element(pp.ext(), rng);
  return TaggedPacket{tracker, {payload.begin(), payload.end()}, tag_for_label(pp, pp.code().column(target), lbl)};
}

LabelDistribution label_distribution(const PublicParams& pp, const CoalitionView& view, std::size_t target,
                                     std::span<const Elem> payload) {
  check_target(pp, view, target);
  const auto sys = assemble_system(pp, view);
  const Field& ext = pp.ext();
  const auto g = pp.code().column(target);
  LabelDistribution d;
  d.field_order = ext.order();
  d.exhaustive = true;
  d.counts.assign(ext.order(), 0);
  std::uint64_t total = 0;
  for_each_consistent_key(pp, sys, [&](const Matrix& a) {
    std::vector<Elem> column(pp.M() + 1, ext.zero());
    for (std::size_t r = 0; r <= pp.M(); ++r) {
      for (std::size_t t = 0; t < pp.kdim(); ++t) column[r] += a(r, t) * g[t];
    }
    ++d.counts[linearized_eval(ext, column, pp.base().one(), iso_vec(ext, payload)).value()];
    ++total;
  });

  std::uint64_t per = 0;
  for (std::uint64_t v = 0; v < d.counts.size(); ++v) {
    if (d.counts[v] == 0) continue;
    ++d.support;
    if (per == 0) per = d.counts[v];
    if (d.counts[v] != per) raise(Errc::Internal, "label histogram is not flat on its support");
    if (d.support == 1) d.determined = ext.elem(v);
  }
  if (d.support != 1) d.determined.reset();
  const auto sol_nullity = solve_or_throw(sys).nullity();
  d.consistent_keys = {pp.base().order(), pp.l() * sol_nullity};
  if (d.consistent_keys.value() != total) raise(Errc::Internal, "enumeration visited a wrong number of keys");
  d.per_label = d.consistent_keys;
  if (d.support == d.field_order) d.per_label.exponent -= pp.l();
  return d;
}

LabelDistribution label_distribution_analytic(const PublicParams& pp, const CoalitionView& view, std::size_t target,
                                              std::span<const Elem> payload) {
  check_target(pp, view, target);
  if (payload.size() != pp.l()) raise(Errc::LengthMismatch, "payload must have l entries");
  const auto sys = assemble_system(pp, view);
  const auto sol = solve_or_throw(sys);
  const auto w = label_functional(pp, target, payload);

  LabelDistribution d;
  d.field_order = pp.ext().order();
  d.consistent_keys = {pp.base().order(), pp.l() * sol.nullity()};
  d.per_label = d.consistent_keys;
  bool moves = false;
  for (std::size_t j = 0; j < sol.nullity() && !moves; ++j) moves = !dot(w, sol.null_basis.col(j)).is_zero();
  if (moves) {
    d.support = d.field_order;
    d.per_label.exponent -= pp.l();
  } else {
    d.support = 1;
    d.determined = dot(w, sol.particular.col(0));
  }
  return d;
}

}  // namespace subtag
