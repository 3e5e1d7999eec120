#include <gtest/gtest.h>

#include "errc_matchers.hpp"
#include "oracles.hpp"
#include "subtag/adversary.hpp"

namespace subtag {
namespace {

struct Setup {
  PublicParams pp;
  MasterKey mk;
  std::vector<VerifierKey> keys;
  std::vector<std::vector<Elem>> basis;
  std::vector<TaggedPacket> packets;
};

Setup rs_setup(std::uint32_t p, unsigned l, std::size_t n, std::size_t V, std::size_t k, std::uint64_t seed,
               std::optional<std::size_t> M = std::nullopt) {
  auto base = Field::base(p, 1);
  auto ext = Field::extension(base, l);
  std::vector<Elem> pts;
  for (std::size_t i = 0; i < V; ++i) pts.push_back(ext->elem(i));
  PublicParams pp(base, ext, n, M, rs_code(*ext, pts, k));
  auto mk = keygen(pp, seed);
  auto keys = distribute(pp, mk);
  Rng rng(seed);
  auto basis = random_basis(*base, l, n, rng);
  auto packets = tag_basis(pp, mk, basis);
  return {std::move(pp), std::move(mk), std::move(keys), std::move(basis), std::move(packets)};
}

std::vector<Elem> fresh_payload(const Setup& s) {
  const Field& f = s.pp.base();
  std::vector<Elem> out;
  oracle::for_each_vector(f, s.pp.l(), [&](const std::vector<Elem>& v) {
    if (out.empty() && !span_contains(f, s.basis, v)) out = v;
  });
  return out;
}

TEST(Adversary, AssembleRanks) {
  const auto s = rs_setup(5, 3, 2, 6, 3, 1);
  const std::vector<std::size_t> members{0, 1};
  const auto sys = assemble_system(s.pp, make_view(members, s.keys, s.packets));
  EXPECT_EQ(sys.K0, 2u);
  EXPECT_EQ(sys.r0, 2u);
  EXPECT_EQ(sys.unknowns(), 3u * 3u);
  EXPECT_EQ(sys.coefficients.rows(), 2u * 3u + 2u * 3u);
}

TEST(Adversary, CountMatchesClosedFormAndOracle) {
  // q = 2, l = 2, n = M = 2, RS [3, 2] over F_4: 4^6 = 4096 keys.
  const auto s = rs_setup(2, 2, 2, 3, 2, 5);
  const auto probe = std::vector<Elem>{s.pp.base().one(), s.pp.base().one()};
  const auto census = oracle::census(s.pp, s.mk, s.packets, probe);
  for (std::uint32_t pm = 0; pm < 4; ++pm) {
    std::vector<TaggedPacket> seen;
    for (std::size_t p = 0; p < 2; ++p) {
      if (pm >> p & 1) seen.push_back(s.packets[p]);
    }
    for (const auto& members : std::vector<std::vector<std::size_t>>{{}, {0}, {1}, {0, 1}, {0, 1, 2}}) {
      const auto sys = assemble_system(s.pp, make_view(members, s.keys, seen));
      const auto rep = count_consistent_keys(s.pp, sys);
      EXPECT_EQ(rep.closed_form, rep.measured);
      EXPECT_EQ(rep.closed_form.value(), census.consistent(pm, members)) << "mask " << pm;
    }
  }
}

TEST(Adversary, InconsistentViewRaises) {
  auto s = rs_setup(5, 3, 2, 6, 3, 2);
  s.packets[0].tag[0] += s.pp.ext().one();
  const std::vector<std::size_t> members{0, 1, 2};
  const auto sys = assemble_system(s.pp, make_view(members, s.keys, s.packets));
  EXPECT_ERRC(count_consistent_keys(s.pp, sys), Errc::InconsistentSystem);
}

TEST(Adversary, ForEachConsistentKeyVisitsEach) {
  const auto s = rs_setup(2, 2, 1, 3, 2, 3);
  const std::vector<std::size_t> members{0};
  const auto view = make_view(members, s.keys, s.packets);
  const auto sys = assemble_system(s.pp, view);
  std::uint64_t visited = 0;
  bool truth_seen = false;
  for_each_consistent_key(s.pp, sys, [&](const Matrix& a) {
    ++visited;
    truth_seen = truth_seen || a == s.mk.a;
    for (const auto& p : s.packets) {
      EXPECT_EQ(tag_packet(s.pp, MasterKey{a}, p.tracker, p.payload), p);
    }
  });
  EXPECT_EQ(visited, *count_consistent_keys(s.pp, sys).measured.value());
  EXPECT_TRUE(truth_seen);
}

TEST(Adversary, TagForLabel) {
  const auto s = rs_setup(5, 3, 1, 6, 3, 4);
  const auto lbl = s.pp.ext().elem(77);
  const auto tag = tag_for_label(s.pp, s.keys[2].g, lbl);
  Elem acc = s.pp.ext().zero();
  for (std::size_t t = 0; t < tag.size(); ++t) acc += tag[t] * s.keys[2].g[t];
  EXPECT_EQ(acc, lbl);
}

TEST(Adversary, DeterministicForgeryQualified) {
  const auto s = rs_setup(5, 3, 2, 6, 3, 6);
  const std::vector<std::size_t> members{0, 1, 2};
  const auto view = make_view(members, s.keys, s.packets);
  const auto payload = fresh_payload(s);
  for (std::size_t target = 3; target < 6; ++target) {
    const auto f = deterministic_forge(s.pp, view, target, payload, s.pp.base().one());
    EXPECT_TRUE(verify(s.pp, s.keys[target], f.packet));
    EXPECT_EQ(f.recovered_key, s.keys[target].column);
    EXPECT_EQ(f.packet.payload, payload);
  }
}

TEST(Adversary, DeterministicForgeryErrors) {
  const auto s = rs_setup(5, 3, 2, 6, 3, 7);
  const std::vector<std::size_t> pair{0, 1};
  const auto payload = fresh_payload(s);
  EXPECT_ERRC(deterministic_forge(s.pp, make_view(pair, s.keys, s.packets), 4, payload, s.pp.base().one()),
              Errc::NotQualified);
  const std::vector<std::size_t> trio{0, 1, 2};
  const auto view = make_view(trio, s.keys, s.packets);
  EXPECT_ERRC(deterministic_forge(s.pp, view, 1, payload, s.pp.base().one()), Errc::TargetInCoalition);
  EXPECT_ERRC(deterministic_forge(s.pp, view, 9, payload, s.pp.base().one()), Errc::IndexOutOfRange);
  EXPECT_ERRC(deterministic_forge(s.pp, view, 4, s.basis[0], s.pp.base().one()), Errc::PayloadInSubspace);
}

TEST(Adversary, GuessForgeRate) {
  // Acceptance probability for a guessed label over F_125 is 1/125.
  const auto s = rs_setup(5, 3, 2, 6, 3, 8);
  const std::vector<std::size_t> pair{0, 1};
  const auto view = make_view(pair, s.keys, s.packets);
  const auto payload = fresh_payload(s);
  const std::uint64_t trials = 5000;
  std::uint64_t accepted = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    accepted += verify(s.pp, s.keys[4], guess_forge(s.pp, view, 4, payload, s.pp.base().one(), t));
  }
  const double mean = trials / 125.0;
  const double sigma = std::sqrt(trials * (1.0 / 125) * (124.0 / 125));
  EXPECT_LE(std::abs(static_cast<double>(accepted) - mean), 4 * sigma);
}

TEST(Adversary, LabelDistributionMatchesCensus) {
  const auto s = rs_setup(2, 2, 1, 4, 3, 9);
  const auto payload = fresh_payload(s);
  const auto census = oracle::census(s.pp, s.mk, s.packets, payload);
  const std::vector<std::vector<std::size_t>> coalitions{{0}, {0, 1}, {1, 2}, {0, 1, 2}};
  for (const auto& members : coalitions) {
    const auto view = make_view(members, s.keys, s.packets);
    for (std::size_t target = 0; target < 4; ++target) {
      if (std::find(members.begin(), members.end(), target) != members.end()) continue;
      const auto d = label_distribution(s.pp, view, target, payload);
      const auto a = label_distribution_analytic(s.pp, view, target, payload);
      const auto hist = census.histogram(0b1, members, target);
      ASSERT_EQ(d.counts, hist);
      EXPECT_EQ(a.support, d.support);
      EXPECT_EQ(a.per_label, d.per_label);
      EXPECT_EQ(a.determined, d.determined);
      const bool qualified = members.size() >= 3;
      EXPECT_EQ(d.uniform(), !qualified);
      EXPECT_EQ(d.determined.has_value(), qualified);
      if (qualified) EXPECT_EQ(*d.determined, label(s.pp, s.keys[target], s.pp.base().one(), payload));
    }
  }
}

TEST(Adversary, AnalyticHandlesLargeInstances) {
  const auto s = rs_setup(7, 4, 2, 10, 5, 10);
  const std::vector<std::size_t> members{0, 1};
  const auto view = make_view(members, s.keys, s.packets);
  const auto d = label_distribution_analytic(s.pp, view, 7, fresh_payload(s));
  EXPECT_TRUE(d.uniform());
  EXPECT_FALSE(d.exhaustive);
  EXPECT_ERRC(label_distribution(s.pp, view, 7, fresh_payload(s)), Errc::TooLargeToEnumerate);
}

TEST(Adversary, KeyCountDecimal) {
  EXPECT_EQ((KeyCount{5, 3}).decimal(), "125");
  EXPECT_EQ((KeyCount{2, 64}).decimal(), "18446744073709551616");
  EXPECT_EQ((KeyCount{2, 64}).value(), std::nullopt);
  EXPECT_EQ((KeyCount{3, 0}).value(), std::optional<std::uint64_t>(1));
}

}  // namespace
}  // namespace subtag
