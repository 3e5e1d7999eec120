#include "subtag/code.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>

#include "subtag/error.hpp"

namespace subtag {

struct LinearCode::Cache {
  std::mutex mu;
  std::shared_ptr<const LinearCode> dual;
  std::optional<std::optional<std::size_t>> distance;
};

LinearCode::LinearCode(Matrix g) : g_(std::move(g)), cache_(std::make_shared<Cache>()) {
  if (g_.field() == nullptr) raise(Errc::InvalidParams, "generator matrix has no field");
  if (rank(g_) != g_.rows()) raise(Errc::RankDeficient, "generator rows are linearly dependent");
}

std::vector<Elem> LinearCode::column(std::size_t i) const {
  if (i >= length()) raise(Errc::IndexOutOfRange, "coordinate out of range");
  return g_.col(i);
}

std::vector<Elem> LinearCode::encode(std::span<const Elem> message) const {
  if (message.size() != dimension()) raise(Errc::LengthMismatch, "message length differs from dimension");
  return subtag::apply(g_.transpose(), message);
}

const Matrix& LinearCode::dual_generator() const { return cache_dual().generator(); }

LinearCode LinearCode::dual() const { return cache_dual(); }

const LinearCode& LinearCode::cache_dual() const {
  {
    std::lock_guard lock(cache_->mu);
    if (cache_->dual) return *cache_->dual;
  }
  auto d = std::make_shared<const LinearCode>(null_space(g_).transpose());
  std::lock_guard lock(cache_->mu);
  if (!cache_->dual) cache_->dual = std::move(d);
  return *cache_->dual;
}

std::optional<std::size_t> LinearCode::min_distance() const {
  {
    std::lock_guard lock(cache_->mu);
    if (cache_->distance) return *cache_->distance;
  }
  std::optional<std::size_t> best;
  if (dimension() != 0) {
    for_each_codeword(*this, [&](std::span<const Elem> w) {
      const auto weight =
          static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](Elem x) { return !x.is_zero(); }));
      if (weight != 0 && (!best || weight < *best)) best = weight;
    });
  }
  std::lock_guard lock(cache_->mu);
  if (!cache_->distance) cache_->distance = best;
  return *cache_->distance;
}

LinearCode code_from_generator(Matrix g) { return LinearCode(std::move(g)); }

LinearCode rs_code(const Field& field, std::span<const Elem> points, std::size_t k) {
  if (points.size() > field.order()) {
    raise(Errc::TooLong, "RS length " + std::to_string(points.size()) + " exceeds field order");
  }
  if (k > points.size()) raise(Errc::InvalidParams, "RS dimension exceeds length");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!field.owns(points[i])) raise(Errc::FieldMismatch, "RS point from another field");
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) raise(Errc::DuplicatePoint, "RS evaluation points must be distinct");
    }
  }
  Matrix g(field, k, points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    Elem power = field.one();
    for (std::size_t t = 0; t < k; ++t) {
      g(t, j) = power;
      power *= points[j];
    }
  }
  return LinearCode(std::move(g));
}

LinearCode dual(const LinearCode& c) { return c.dual(); }

std::optional<std::size_t> min_distance(const LinearCode& c) { return c.min_distance(); }

std::uint64_t codeword_count(const LinearCode& c) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < c.dimension(); ++i) {
    if (count > kEnumerationLimit) return kEnumerationLimit + 1;
    count *= c.field().order();
  }
  return count;
}

void for_each_codeword(const LinearCode& c, const std::function<void(std::span<const Elem>)>& fn) {
  if (codeword_count(c) > kEnumerationLimit) {
    raise(Errc::TooLargeToEnumerate, "code has more than 2^24 codewords");
  }
  const Field& f = c.field();
  const std::size_t k = c.dimension();
  const std::size_t n = c.length();
  const Matrix& g = c.generator();
  const auto order = static_cast<std::uint32_t>(f.order());

  // Odometer over messages; stepping digit j by one adds a fixed multiple of
  // generator row j to the running codeword.
  std::vector<std::uint32_t> digits(k, 0);
  std::vector<std::uint32_t> word(n, 0);
  std::vector<Elem> view(n, f.zero());
  auto emit = [&] {
    for (std::size_t i = 0; i < n; ++i) view[i] = f.elem(word[i]);
    fn(view);
  };
  emit();
  while (true) {
    std::size_t j = 0;
    for (; j < k; ++j) {
      const std::uint32_t old = digits[j];
      const std::uint32_t next = old + 1 == order ? 0 : old + 1;
      digits[j] = next;
      const std::uint32_t delta = f.sub_raw(next, old);
      for (std::size_t i = 0; i < n; ++i) {
        word[i] = f.add_raw(word[i], f.mul_raw(delta, g(j, i).value()));
      }
      if (next != 0) break;
    }
    if (j == k) break;
    emit();
  }
}

bool is_mds(const LinearCode& c) {
  const auto d = c.min_distance();
  return d && *d == c.length() - c.dimension() + 1;
}

std::vector<std::vector<Elem>> minimal_codewords_wrt(const LinearCode& c, std::size_t i) {
  if (i >= c.length()) raise(Errc::IndexOutOfRange, "coordinate out of range");
  if (c.length() > 64) raise(Errc::TooLargeToEnumerate, "support masks need length <= 64");
  std::map<std::uint64_t, std::vector<Elem>> by_support;
  for_each_codeword(c, [&](std::span<const Elem> w) {
    if (!w[i].is_one()) return;
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (!w[j].is_zero()) mask |= std::uint64_t{1} << j;
    }
    by_support.try_emplace(mask, w.begin(), w.end());
  });

  std::vector<std::uint64_t> masks;
  for (const auto& [mask, word] : by_support) masks.push_back(mask);
  std::vector<std::uint64_t> minimal;
  for (auto m : masks) {
    const bool has_smaller = std::any_of(masks.begin(), masks.end(), [m](std::uint64_t o) {
      return o != m && (o & m) == o;
    });
    if (!has_smaller) minimal.push_back(m);
  }
  std::sort(minimal.begin(), minimal.end(), [](std::uint64_t a, std::uint64_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  std::vector<std::vector<Elem>> out;
  out.reserve(minimal.size());
  for (auto m : minimal) out.push_back(by_support.at(m));
  return out;
}

void CoalitionSpec::validate(std::size_t length) const {
  if (target >= length) raise(Errc::IndexOutOfRange, "target coordinate out of range");
  for (auto j : coalition) {
    if (j >= length) raise(Errc::IndexOutOfRange, "coalition coordinate out of range");
    if (j == target) raise(Errc::TargetInCoalition, "target belongs to the coalition");
  }
}

Forgeability forgeable(const LinearCode& c, const CoalitionSpec& spec) {
  spec.validate(c.length());
  std::vector<std::vector<Elem>> gens;
  gens.reserve(spec.coalition.size());
  for (auto j : spec.coalition) gens.push_back(c.column(j));
  const auto target = c.column(spec.target);
  auto lambda = span_contains(c.field(), gens, target);
  Forgeability out;
  out.forgeable = lambda.has_value();
  if (lambda) out.witness = std::move(*lambda);
#if SUBTAG_INVARIANT_CHECKS
  if (c.length() <= 64 && codeword_count(c.dual()) <= (1ULL << 16) &&
      out.forgeable != forgeable_by_dual_support(c, spec)) {
    raise(Errc::Internal, "span and dual-support forgeability criteria disagree");
  }
#endif
  return out;
}

bool forgeable_by_dual_support(const LinearCode& c, const CoalitionSpec& spec) {
  spec.validate(c.length());
  std::uint64_t allowed = std::uint64_t{1} << spec.target;
  for (auto j : spec.coalition) allowed |= std::uint64_t{1} << j;
  for (const auto& w : minimal_codewords_wrt(c.dual(), spec.target)) {
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (!w[j].is_zero()) mask |= std::uint64_t{1} << j;
    }
    if ((mask & ~allowed) == 0) return true;
  }
  return false;
}

std::vector<std::vector<std::size_t>> access_structure(const LinearCode& c, std::size_t i) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& w : minimal_codewords_wrt(c.dual(), i)) {
    std::vector<std::size_t> coalition;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j != i && !w[j].is_zero()) coalition.push_back(j);
    }
    out.push_back(std::move(coalition));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace subtag
