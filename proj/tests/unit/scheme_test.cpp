#include <gtest/gtest.h>

#include "errc_matchers.hpp"
#include "subtag/linearized.hpp"
#include "subtag/scheme.hpp"

namespace subtag {
namespace {

std::vector<Elem> first_elements(const Field& f, std::size_t n) {
  std::vector<Elem> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(f.elem(i));
  return out;
}

PublicParams rs_params(std::uint32_t p, unsigned l, std::size_t n, std::size_t V, std::size_t k,
                       std::optional<std::size_t> M = std::nullopt) {
  auto base = Field::base(p, 1);
  auto ext = Field::extension(base, l);
  return PublicParams(base, ext, n, M, rs_code(*ext, first_elements(*ext, V), k));
}

TEST(PublicParams, Validation) {
  auto base = Field::base(5, 1);
  auto ext = Field::extension(base, 3);
  auto rs = rs_code(*ext, first_elements(*ext, 6), 3);
  EXPECT_ERRC(PublicParams(base, ext, 4, std::nullopt, rs), Errc::InvalidParams);
  EXPECT_ERRC(PublicParams(base, ext, 0, std::nullopt, rs), Errc::InvalidParams);
  EXPECT_ERRC(PublicParams(base, ext, 2, 1, rs), Errc::InvalidParams);
  EXPECT_ERRC(PublicParams(base, Field::extension(Field::base(5, 1), 3), 2, std::nullopt, rs),
              Errc::InvalidParams);
  const PublicParams ok(base, ext, 2, std::nullopt, rs);
  EXPECT_EQ(ok.M(), 2u);
  EXPECT_EQ(ok.packet_length(), 1u + 3 + 9);

  // A zero column in G means the dual code has a weight-1 word.
  Matrix g(*ext, 2, 3);
  g(0, 0) = ext->one();
  g(1, 1) = ext->one();
  EXPECT_ERRC(PublicParams(base, ext, 1, std::nullopt, LinearCode(g)), Errc::InvalidParams);
  // Identity code: every unit vector is a codeword, so d(C) = 1.
  EXPECT_ERRC(PublicParams(base, ext, 1, std::nullopt, LinearCode(Matrix::identity(*ext, 2))), Errc::InvalidParams);
}

TEST(Keygen, ShapeAndDeterminism) {
  const auto pp = rs_params(5, 3, 2, 6, 3);
  const auto a = keygen(pp, 11);
  EXPECT_EQ(a.a.rows(), 3u);
  EXPECT_EQ(a.a.cols(), 3u);
  EXPECT_EQ(keygen(pp, 11).a, a.a);
  EXPECT_FALSE(keygen(pp, 12).a == a.a);
}

TEST(Keygen, EntriesAreUniform) {
  // Chi-square over F_8 with 7 degrees of freedom; 18.48 is the 0.01 critical value.
  const auto pp = rs_params(2, 3, 1, 4, 2);
  std::vector<double> counts(8, 0);
  std::size_t total = 0;
  for (std::uint64_t seed = 0; total < 10000; ++seed) {
    const auto mk = keygen(pp, seed);
    for (std::size_t r = 0; r < mk.a.rows(); ++r) {
      for (std::size_t c = 0; c < mk.a.cols(); ++c, ++total) counts[mk.a(r, c).value()] += 1;
    }
  }
  const double expect = static_cast<double>(total) / 8;
  double chi = 0;
  for (auto c : counts) chi += (c - expect) * (c - expect) / expect;
  EXPECT_LT(chi, 18.48);
}

TEST(Distribute, IdentityGeneratorGivesColumnsOfA) {
  auto base = Field::base(3, 1);
  auto ext = Field::extension(base, 2);
  // [I | 1] even-weight style code; the first kdim keys are columns of A.
  Matrix g(*ext, 2, 3);
  g(0, 0) = g(1, 1) = g(0, 2) = g(1, 2) = ext->one();
  const PublicParams pp(base, ext, 1, std::nullopt, LinearCode(g));
  const auto mk = keygen(pp, 3);
  const auto keys = distribute(pp, mk);
  ASSERT_EQ(keys.size(), 3u);
  EXPECT_EQ(keys[0].column, mk.a.col(0));
  EXPECT_EQ(keys[1].column, mk.a.col(1));
  for (std::size_t r = 0; r <= pp.M(); ++r) EXPECT_EQ(keys[2].column[r], mk.a(r, 0) + mk.a(r, 1));
}

TEST(Distribute, ZeroKeyAndRecheck) {
  const auto pp = rs_params(5, 3, 2, 6, 3);
  MasterKey zero{Matrix(pp.ext(), 3, 3)};
  for (const auto& vk : distribute(pp, zero)) {
    for (auto x : vk.column) EXPECT_TRUE(x.is_zero());
  }
  const auto mk = keygen(pp, 5);
  const auto keys = distribute(pp, mk);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    EXPECT_EQ(keys[i].column.size(), pp.M() + 1);
    EXPECT_EQ(keys[i].column, subtag::apply(mk.a, pp.code().column(i)));
    EXPECT_EQ(keys[i].g, pp.code().column(i));
  }
}

TEST(Distribute, MultiplicationCount) {
  const auto pp = rs_params(5, 3, 2, 6, 3);
  const auto mk = keygen(pp, 1);
  ScopedOpCounter counter(pp.ext());
  (void)distribute(pp, mk);
  EXPECT_EQ(counter.counts().mul, (pp.M() + 1) * pp.kdim() * pp.V());
}

TEST(Tagging, SingleRowFormula) {
  const auto pp = rs_params(3, 2, 1, 4, 2, 1);
  const auto mk = keygen(pp, 9);
  const std::vector<Elem> s{pp.base().elem(2), pp.base().elem(1)};
  const std::vector<std::vector<Elem>> basis{s};
  const auto pkts = tag_basis(pp, mk, basis);
  ASSERT_EQ(pkts.size(), 1u);
  const Elem phi = iso_vec(pp.ext(), s);
  for (std::size_t t = 0; t < pp.kdim(); ++t) {
    EXPECT_EQ(pkts[0].tag[t], mk.a(0, t) + mk.a(1, t) * phi);
    const std::vector<Elem> coeffs{mk.a(0, t), mk.a(1, t)};
    EXPECT_EQ(pkts[0].tag[t], linearized_eval(pp.ext(), coeffs, pp.base().one(), phi));
  }
  EXPECT_TRUE(pkts[0].tracker.is_one());
  EXPECT_EQ(pkts[0].to_symbols(pp).size(), pp.packet_length());
}

TEST(Tagging, ZeroKeyGivesZeroTags) {
  const auto pp = rs_params(5, 3, 2, 6, 3);
  MasterKey zero{Matrix(pp.ext(), 3, 3)};
  Rng rng(1);
  for (const auto& p : tag_basis(pp, zero, random_basis(pp.base(), 3, 2, rng))) {
    for (auto t : p.tag) EXPECT_TRUE(t.is_zero());
  }
}

TEST(Tagging, RejectsDependentBasis) {
  const auto pp = rs_params(5, 3, 2, 6, 3);
  const auto mk = keygen(pp, 1);
  const auto& b = pp.base();
  const std::vector<std::vector<Elem>> dep{{b.elem(1), b.elem(2), b.elem(3)}, {b.elem(2), b.elem(4), b.elem(1)}};
  EXPECT_ERRC(tag_basis(pp, mk, dep), Errc::DependentBasis);
  const std::vector<std::vector<Elem>> one{{b.elem(1), b.elem(2), b.elem(3)}};
  EXPECT_ERRC(tag_basis(pp, mk, one), Errc::LengthMismatch);
}

TEST(Label, TrivialCases) {
  const auto pp = rs_params(5, 3, 2, 6, 3);
  const auto keys = distribute(pp, keygen(pp, 2));
  const std::vector<Elem> zero(3, pp.base().zero());
  EXPECT_EQ(label(pp, keys[1], pp.base().one(), zero), keys[1].column[0]);
  EXPECT_TRUE(label(pp, keys[1], pp.base().zero(), zero).is_zero());
}

TEST(Label, MatchesDirectSum) {
  const auto pp = rs_params(5, 3, 3, 6, 3);
  const auto keys = distribute(pp, keygen(pp, 8));
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Elem> s(3);
    for (auto& x : s) x = random_element(pp.base(), rng);
    const Elem tracker = random_element(pp.base(), rng);
    const auto& b = keys[trial % 6].column;
    const Elem phi = iso_vec(pp.ext(), s);
    const Elem expect =
        pp.ext().embed(tracker) * b[0] + phi * b[1] + pp.ext().pow(phi, 5) * b[2] + pp.ext().pow(phi, 25) * b[3];
    ASSERT_EQ(label(pp, keys[trial % 6], tracker, s), expect);
  }
}

TEST(Verify, HonestPacketsAndCombinations) {
  const auto pp = rs_params(5, 3, 2, 6, 3);
  const auto mk = keygen(pp, 4);
  const auto keys = distribute(pp, mk);
  Rng rng(4);
  const auto pkts = tag_basis(pp, mk, random_basis(pp.base(), 3, 2, rng));
  for (const auto& vk : keys) {
    for (const auto& p : pkts) EXPECT_TRUE(verify(pp, vk, p));
  }
  // Linearity of acceptance, exhaustive over F_5 coefficient pairs.
  for (std::uint64_t a = 0; a < 5; ++a) {
    for (std::uint64_t b = 0; b < 5; ++b) {
      const std::vector<Elem> c{pp.base().elem(a), pp.base().elem(b)};
      const auto mix = combine(pp, c, pkts);
      EXPECT_EQ(mix.tracker, pp.base().elem((a + b) % 5));
      for (const auto& vk : keys) ASSERT_TRUE(verify(pp, vk, mix));
    }
  }
}

TEST(Verify, PerturbedPayloadRejected) {
  const auto pp = rs_params(5, 3, 2, 6, 3);
  std::size_t rejected = 0;
  const std::size_t trials = 1000;
  for (std::uint64_t seed = 0; seed < trials; ++seed) {
    const auto mk = keygen(pp, seed);
    const auto keys = distribute(pp, mk);
    Rng rng(seed);
    auto pkts = tag_basis(pp, mk, random_basis(pp.base(), 3, 2, rng));
    auto& p = pkts[0];
    p.payload[seed % 3] += pp.base().elem(1 + seed % 4);
    rejected += !verify(pp, keys[seed % 6], p);
  }
  EXPECT_GE(rejected, trials * 99 / 100);
}

TEST(Verify, OperationCount) {
  const auto pp = rs_params(5, 3, 2, 6, 3, 3);
  const auto mk = keygen(pp, 4);
  const auto keys = distribute(pp, mk);
  Rng rng(4);
  const auto pkts = tag_basis(pp, mk, random_basis(pp.base(), 3, 2, rng));
  ScopedOpCounter counter(pp.ext());
  EXPECT_TRUE(verify(pp, keys[0], pkts[0]));
  EXPECT_EQ(counter.counts().frobenius_steps, pp.M() - 1);
  EXPECT_EQ(counter.counts().mul, pp.M() + pp.kdim() + 1);
}

TEST(Packet, SymbolRoundTrip) {
  const auto pp = rs_params(5, 3, 2, 6, 3);
  const auto mk = keygen(pp, 4);
  Rng rng(4);
  const auto pkts = tag_basis(pp, mk, random_basis(pp.base(), 3, 2, rng));
  for (const auto& p : pkts) {
    const auto sym = p.to_symbols(pp);
    ASSERT_EQ(sym.size(), 13u);
    EXPECT_EQ(TaggedPacket::from_symbols(pp, sym), p);
    // Tag element t occupies symbols 4 + 3t .. 6 + 3t, little-endian.
    EXPECT_EQ(sym[4].value() + 5 * sym[5].value() + 25 * sym[6].value(), p.tag[0].value());
  }
  const std::vector<Elem> short_sym(12, pp.base().zero());
  EXPECT_ERRC(TaggedPacket::from_symbols(pp, short_sym), Errc::LengthMismatch);
}

}  // namespace
}  // namespace subtag
