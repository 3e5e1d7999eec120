// One line per acceptance criterion: "PASS <id> <name> (<detail>)" or FAIL.
// Exit status is the number of failing criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "subtag/error.hpp"
#include "subtag/adversary.hpp"
#include "subtag/elliptic.hpp"
#include "subtag/network.hpp"
#include "subtag/wire.hpp"

using namespace subtag;

namespace {

// Pinned tolerances.
constexpr std::size_t kCompletenessInstances = 100;
constexpr std::uint64_t kGuessTrials = 10000;
constexpr double kSigmaBound = 3.0;
constexpr std::size_t kRandomCodes = 50;
constexpr std::uint64_t kCandidateLimit = 1ULL << 24;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail << "first failure: " << what << "; ";
    }
  }
};

std::vector<Elem> distinct_points(const Field& f, std::size_t count, Rng& rng) {
  std::set<std::uint64_t> seen;
  std::vector<Elem> out;
  while (out.size() < count) {
    const auto v = rng.uniform(f.order());
    if (seen.insert(v).second) out.push_back(f.elem(v));
  }
  return out;
}

std::vector<Elem> first_points(const Field& f, std::size_t count) {
  std::vector<Elem> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(f.elem(i));
  return out;
}

std::vector<std::size_t> members_of(std::uint32_t mask, std::size_t width) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < width; ++i) {
    if (mask >> i & 1) out.push_back(i);
  }
  return out;
}

std::vector<Elem> payload_outside(const Field& base, std::size_t l, const std::vector<std::vector<Elem>>& basis) {
  std::vector<Elem> out;
  oracle::for_each_vector(base, l, [&](const std::vector<Elem>& v) {
    if (out.empty() && !span_contains(base, basis, v)) out = v;
  });
  return out;
}

std::vector<std::vector<Elem>> payloads_of(const PublicParams& pp, const std::vector<std::vector<Elem>>& symbols) {
  std::vector<std::vector<Elem>> out;
  for (const auto& s : symbols) out.push_back(TaggedPacket::from_symbols(pp, s).payload);
  return out;
}

// 1. Honest packets through butterfly and two random DAGs.
void completeness(Outcome& o) {
  auto base = Field::base(5, 1);
  auto ext = Field::extension(base, 3);
  const std::vector<Topology> topologies{butterfly(), random_dag(8, 2, 6, 1), random_dag(8, 2, 6, 2)};
  std::size_t packets_checked = 0;
  std::size_t full_rank_sinks = 0;
  for (std::uint64_t seed = 0; seed < kCompletenessInstances; ++seed) {
    Rng rng = Rng(seed).stream("instance");
    const PublicParams pp(base, ext, 2, 2, rs_code(*ext, distinct_points(*ext, 6, rng), 3));
    const auto mk = keygen(pp, seed);
    const auto keys = distribute(pp, mk);
    const auto basis = random_basis(*base, 3, 2, rng);
    const auto packets = tag_basis(pp, mk, basis);
    const auto sent = decode_subspace(*base, 3, basis);
    for (std::size_t ti = 0; ti < topologies.size(); ++ti) {
      const auto& t = topologies[ti];
      const auto g = compute_global_kernels(t, *base, 2, seed * 7 + ti);
      const auto tx = transmit(t, g, pp, packets);
      for (std::size_t v = 0; v < t.nodes().size(); ++v) {
        const auto& node = t.node(v);
        if (node.verifier_index) {
          for (const auto& sym : tx.received[v]) {
            ++packets_checked;
            o.require(verify(pp, keys[*node.verifier_index], TaggedPacket::from_symbols(pp, sym)),
                      "seed " + std::to_string(seed) + " node " + node.name + " rejected an honest packet");
          }
        }
        if (node.role == Role::Sink && g.rank[v] == 2) {
          ++full_rank_sinks;
          o.require(decode_subspace(*base, 3, payloads_of(pp, tx.received[v])) == sent,
                    "seed " + std::to_string(seed) + " sink " + node.name + " did not recover U");
        }
      }
    }
  }
  o.require(full_rank_sinks > 0, "no full-rank sink exercised");
  o.detail << packets_checked << " packets verified, " << full_rank_sinks << " full-rank sinks recovered";
}

// 2. Closed-form key count against exhaustive enumeration.
std::optional<LinearCode> random_grid_code(const Field& f, std::size_t k, std::size_t V, Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    try {
      LinearCode c(random_full_rank(f, k, V, rng.next_u64()));
      bool ok = true;
      for (const Matrix* m : {&c.generator(), &c.dual_generator()}) {
        for (std::size_t col = 0; col < m->cols() && ok; ++col) {
          bool zero = true;
          for (std::size_t r = 0; r < m->rows(); ++r) zero = zero && (*m)(r, col).is_zero();
          ok = !zero;
        }
      }
      if (ok) return c;
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

void key_count_grid(Outcome& o) {
  std::size_t grid_points = 0;
  std::size_t checks = 0;
  std::size_t skipped = 0;
  for (std::uint32_t q : {2u, 3u}) {
    auto base = Field::base(q, 1);
    for (unsigned l : {1u, 2u}) {
      auto ext = Field::extension(base, l);
      for (std::size_t kdim : {1u, 2u}) {
        for (std::size_t M : {1u, 2u}) {
          if (oracle::ipow(ext->order(), (M + 1) * kdim) > kCandidateLimit) {
            ++skipped;
            continue;
          }
          Rng rng = Rng(q * 1000 + l * 100 + kdim * 10 + M).stream("grid");
          std::vector<LinearCode> codes;
          Matrix parity(*ext, kdim, kdim + 1);
          for (std::size_t r = 0; r < kdim; ++r) {
            parity(r, r) = ext->one();
            parity(r, kdim) = ext->one();
          }
          codes.emplace_back(std::move(parity));
          if (auto c = random_grid_code(*ext, kdim, kdim + 2, rng)) codes.push_back(std::move(*c));
          for (std::size_t n = 1; n <= std::min<std::size_t>(l, M); ++n) {
            for (const auto& code : codes) {
              ++grid_points;
              const PublicParams pp(base, ext, n, M, code);
              const auto mk = keygen(pp, rng.next_u64());
              auto packets = tag_basis(pp, mk, random_basis(*base, l, n, rng));
              // A redundant combination adds no rank.
              std::vector<Elem> coeffs(packets.size());
              for (auto& c : coeffs) c = random_element(*base, rng);
              packets.push_back(combine(pp, coeffs, packets));
              const auto census = oracle::census(pp, mk, packets, std::vector<Elem>(l, base->one()));
              for (std::uint32_t pm = 0; pm < (1u << packets.size()); ++pm) {
                std::vector<TaggedPacket> seen;
                for (std::size_t p = 0; p < packets.size(); ++p) {
                  if (pm >> p & 1) seen.push_back(packets[p]);
                }
                for (std::uint32_t cm = 0; cm < (1u << pp.V()); ++cm) {
                  const auto members = members_of(cm, pp.V());
                  const auto keys = distribute(pp, mk);
                  const auto sys = assemble_system(pp, make_view(members, keys, seen));
                  const auto rep = count_consistent_keys(pp, sys);
                  const auto exponent = l * (M + 1 - sys.r0) * (kdim - sys.K0);
                  const auto brute = census.consistent(pm, members);
                  ++checks;
                  o.require(rep.closed_form.exponent == exponent && rep.closed_form == rep.measured &&
                                rep.closed_form.value() == brute,
                            "q=" + std::to_string(q) + " l=" + std::to_string(l) + " k=" + std::to_string(kdim) +
                                " M=" + std::to_string(M) + " n=" + std::to_string(n) + " packets=" +
                                std::to_string(pm) + " coalition=" + std::to_string(cm));
                }
              }
            }
          }
        }
      }
    }
  }
  o.detail << grid_points << " parameter sets, " << checks << " (packets, coalition) views equal";
  if (skipped) o.detail << ", " << skipped << " grid cells above 2^24 candidates";
}

// Shrunken instances for the sub-threshold label distribution.
struct Shrunk {
  PublicParams pp;
  MasterKey mk;
  std::vector<VerifierKey> keys;
  std::vector<TaggedPacket> packets;
  std::vector<Elem> probe;
};

Shrunk shrunk_instance(std::uint32_t q, unsigned l, std::size_t V, std::size_t k, std::size_t M, std::uint64_t seed) {
  auto base = Field::base(q, 1);
  auto ext = Field::extension(base, l);
  PublicParams pp(base, ext, 1, M, rs_code(*ext, first_points(*ext, V), k));
  auto mk = keygen(pp, seed);
  auto keys = distribute(pp, mk);
  Rng rng = Rng(seed).stream("source");
  const auto basis = random_basis(*base, l, 1, rng);
  auto packets = tag_basis(pp, mk, basis);
  auto probe = payload_outside(*base, l, basis);
  return {std::move(pp), std::move(mk), std::move(keys), std::move(packets), std::move(probe)};
}

// Every size-2 coalition sees a flat label histogram, checked against the census.
void uniform_below_threshold(Outcome& o, const Shrunk& s, std::size_t& histograms) {
  const auto census = oracle::census(s.pp, s.mk, s.packets, s.probe);
  for (std::uint32_t cm = 0; cm < (1u << s.pp.V()); ++cm) {
    const auto members = members_of(cm, s.pp.V());
    if (members.size() != 2) continue;
    const auto view = make_view(members, s.keys, s.packets);
    for (std::size_t target = 0; target < s.pp.V(); ++target) {
      if (cm >> target & 1) continue;
      const auto d = label_distribution(s.pp, view, target, s.probe);
      const auto hist = census.histogram(1, members, target);
      const std::vector<std::uint64_t> flat(s.pp.ext().order(), hist[0]);
      ++histograms;
      o.require(d.uniform() && d.counts == hist && hist == flat,
                "coalition " + std::to_string(cm) + " target " + std::to_string(target) + " not uniform");
    }
  }
}

// 3. Sub-threshold coalitions gain nothing.
void security(Outcome& o) {
  std::size_t histograms = 0;
  uniform_below_threshold(o, shrunk_instance(2, 2, 4, 3, 1, 11), histograms);
  uniform_below_threshold(o, shrunk_instance(2, 2, 4, 3, 2, 12), histograms);

  auto base = Field::base(5, 1);
  auto ext = Field::extension(base, 3);
  const PublicParams pp(base, ext, 2, 2, rs_code(*ext, first_points(*ext, 6), 3));
  o.require(*pp.code().dual().min_distance() == 4, "RS [6,3] dual distance is not 4");
  const auto mk = keygen(pp, 21);
  const auto keys = distribute(pp, mk);
  Rng rng = Rng(21).stream("source");
  const auto basis = random_basis(*base, 3, 2, rng);
  const auto packets = tag_basis(pp, mk, basis);
  const std::vector<std::size_t> pair{0, 1};
  const auto view = make_view(pair, keys, packets);
  const auto payload = payload_outside(*base, 3, basis);
  o.require(label_distribution_analytic(pp, view, 4, payload).uniform(), "F_125 analytic distribution not uniform");
  std::uint64_t accepted = 0;
  for (std::uint64_t t = 0; t < kGuessTrials; ++t) {
    accepted += verify(pp, keys[4], guess_forge(pp, view, 4, payload, base->one(), t));
  }
  const double p = 1.0 / 125.0;
  const double mean = kGuessTrials * p;
  const double sigma = std::sqrt(kGuessTrials * p * (1 - p));
  const double dev = std::abs(static_cast<double>(accepted) - mean);
  o.require(dev <= kSigmaBound * sigma, "guess acceptance outside 3 sigma");
  o.detail << histograms << " exhaustive histograms uniform; guess accepted " << accepted << "/" << kGuessTrials
           << " (expected " << mean << ", sigma " << sigma << ")";
}

// 4. Threshold behaviour of RS [6,3].
void threshold(Outcome& o) {
  auto base = Field::base(5, 1);
  auto ext = Field::extension(base, 3);
  const PublicParams pp(base, ext, 2, 2, rs_code(*ext, first_points(*ext, 6), 3));
  const auto mk = keygen(pp, 31);
  const auto keys = distribute(pp, mk);
  Rng rng = Rng(31).stream("source");
  const auto basis = random_basis(*base, 3, 2, rng);
  const auto packets = tag_basis(pp, mk, basis);
  const auto payload = payload_outside(*base, 3, basis);
  std::size_t forged = 0;
  std::size_t refused = 0;
  for (std::uint32_t cm = 0; cm < 64; ++cm) {
    const auto members = members_of(cm, 6);
    if (members.size() != 2 && members.size() != 3) continue;
    const auto view = make_view(members, keys, packets);
    for (std::size_t target = 0; target < 6; ++target) {
      if (cm >> target & 1) continue;
      if (members.size() == 3) {
        const auto f = deterministic_forge(pp, view, target, payload, base->one());
        const bool ok = verify(pp, keys[target], f.packet) && f.packet.payload == payload;
        forged += ok;
        o.require(ok, "size-3 coalition " + std::to_string(cm) + " failed against " + std::to_string(target));
      } else {
        bool not_qualified = false;
        try {
          (void)deterministic_forge(pp, view, target, payload, base->one());
        } catch (const Error& e) {
          not_qualified = e.code() == Errc::NotQualified;
        }
        refused += not_qualified;
        o.require(not_qualified, "size-2 coalition " + std::to_string(cm) + " was not refused");
      }
    }
  }
  o.require(forged == 60, "expected 60 forgeries");
  o.require(refused == 60, "expected 60 refusals");
  std::size_t histograms = 0;
  uniform_below_threshold(o, shrunk_instance(2, 2, 4, 3, 1, 41), histograms);
  o.detail << forged << " forgeries accepted, " << refused << " size-2 pairs NotQualified, " << histograms
           << " shrunken histograms uniform";
}

// 5. Span criterion against the dual support oracle.
void dual_support(Outcome& o) {
  auto f4 = Field::base(2, 2);
  auto f5 = Field::base(5, 1);
  Rng rng = Rng(51).stream("codes");
  std::size_t cases = 0;
  std::size_t forgeable_cases = 0;
  for (std::size_t c = 0; c < kRandomCodes; ++c) {
    const Field& f = c % 2 ? *f5 : *f4;
    const std::size_t V = 2 + rng.uniform(5);
    const std::size_t k = 1 + rng.uniform(std::min<std::size_t>(3, V - 1));
    const LinearCode code(random_full_rank(f, k, V, rng.next_u64()));
    const auto words = oracle::brute_dual_words(code);
    for (std::size_t target = 0; target < V; ++target) {
      std::set<std::vector<std::size_t>> qualifying;
      for (std::uint32_t cm = 0; cm < (1u << V); ++cm) {
        if (cm >> target & 1) continue;
        const auto members = members_of(cm, V);
        const bool brute = oracle::brute_forgeable(words, members, target);
        const bool span = forgeable(code, CoalitionSpec{members, target}).forgeable;
        ++cases;
        forgeable_cases += brute;
        o.require(brute == span, "code " + std::to_string(c) + " target " + std::to_string(target) + " coalition " +
                                     std::to_string(cm) + " disagrees");
        if (brute) qualifying.insert(members);
      }
      std::set<std::vector<std::size_t>> minimal;
      for (const auto& s : qualifying) {
        bool has_smaller = false;
        for (const auto& t : qualifying) {
          has_smaller = has_smaller || (t.size() < s.size() && std::includes(s.begin(), s.end(), t.begin(), t.end()));
        }
        if (!has_smaller) minimal.insert(s);
      }
      const auto got = access_structure(code, target);
      o.require(std::set<std::vector<std::size_t>>(got.begin(), got.end()) == minimal && got.size() == minimal.size(),
                "code " + std::to_string(c) + " access structure differs at " + std::to_string(target));
    }
  }
  o.detail << kRandomCodes << " codes, " << cases << " (coalition, target) cases, " << forgeable_cases
           << " forgeable; access structures equal";
}

// 6. Elliptic-curve classifier against the span oracle.
void ec_classifier(Outcome& o) {
  auto f = Field::base(5, 1);
  const ec::EllipticCurve curve(*f, f->one(), f->one());
  std::size_t brute_points = 1;
  for (std::uint64_t x = 0; x < 5; ++x) {
    for (std::uint64_t y = 0; y < 5; ++y) {
      const Elem ex = f->elem(x), ey = f->elem(y);
      brute_points += ey * ey == ex * ex * ex + ex + f->one();
    }
  }
  const auto all = curve.points();
  o.require(brute_points == 9 && all.size() == 9, "curve does not have 9 points");
  const std::vector<ec::Point> affine(all.begin() + 1, all.end());
  std::size_t cases = 0, sum_zero = 0, single_target = 0, agree = 0;
  for (std::uint32_t dm = 0; dm < (1u << affine.size()); ++dm) {
    if (__builtin_popcount(dm) != 6) continue;
    std::vector<ec::Point> D;
    for (std::size_t i = 0; i < affine.size(); ++i) {
      if (dm >> i & 1) D.push_back(affine[i]);
    }
    for (unsigned deg : {2u, 3u}) {
      const ec::AgCodeSpec spec{curve, D, deg};
      const auto residue = ec::residue_code(spec);
      const auto words = oracle::brute_dual_words(residue);
      const std::size_t n = 6;
      for (std::uint32_t cm = 0; cm < 64; ++cm) {
        const auto members = members_of(cm, n);
        if (members.size() + 1 != n - deg && members.size() != n - deg) continue;
        for (std::size_t target = 0; target < n; ++target) {
          if (cm >> target & 1) continue;
          const auto cls = ec::classify_coalition(spec, members, target);
          const bool brute = oracle::brute_forgeable(words, members, target);
          const bool span = forgeable(residue, CoalitionSpec{members, target}).forgeable;
          ++cases;
          agree += cls.forgeable() == brute && brute == span;
          o.require(cls.forgeable() == brute && brute == span,
                    "D mask " + std::to_string(dm) + " deg " + std::to_string(deg) + " coalition " +
                        std::to_string(cm) + " target " + std::to_string(target));
          if (members.size() == n - deg && ec::complement_sum(spec, members).infinity) ++sum_zero;
          if (cls.verdict == ec::Verdict::ForgeableAgainstExactly) ++single_target;
        }
      }
    }
  }
  o.require(sum_zero > 0, "no complement sum equal to O");
  o.require(single_target > 0, "no single-target case");
  o.detail << agree << "/" << cases << " agree; " << sum_zero << " cases with complement sum O, " << single_target
           << " single-target forgeries";
}

// 7. Packet, key and distribution sizes.
void costs(Outcome& o) {
  std::size_t configs = 0;
  for (auto [q, l, n, M, V, k] : std::vector<std::array<unsigned, 6>>{
           {5, 3, 2, 2, 6, 3}, {2, 4, 2, 3, 7, 4}, {3, 2, 1, 2, 5, 2}, {7, 2, 2, 2, 8, 5}, {2, 1, 1, 1, 2, 1}}) {
    auto base = Field::base(q, 1);
    auto ext = Field::extension(base, l);
    const PublicParams pp(base, ext, n, M, rs_code(*ext, first_points(*ext, V), k));
    const auto mk = keygen(pp, configs);
    std::uint64_t muls = 0;
    std::vector<VerifierKey> keys;
    {
      ScopedOpCounter counter(*ext);
      keys = distribute(pp, mk);
      muls = counter.counts().mul;
    }
    Rng rng(configs);
    const auto packets = tag_basis(pp, mk, random_basis(*base, l, n, rng));
    const std::size_t expected_len = 1 + l + k * l;
    const auto text = write_packets_text(pp, packets);
    const auto first = text.substr(text.find('\n') + 1);
    const auto line = first.substr(0, first.find('\n'));
    const std::size_t text_symbols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ' ')) + 1;
    const auto bin = write_packets_binary(pp, packets);
    const std::size_t header = PacketHeader::of(pp).to_string().size() + 1;
    const std::string tag = "q=" + std::to_string(q) + " l=" + std::to_string(l);
    o.require(pp.packet_length() == expected_len && packets[0].to_symbols(pp).size() == expected_len &&
                  text_symbols == expected_len &&
                  bin.size() == header + packets.size() * expected_len * symbol_width(q),
              tag + " packet length");
    bool storage = true;
    for (const auto& vk : keys) storage = storage && vk.column.size() == M + 1;
    o.require(storage, tag + " key storage");
    o.require(muls == std::uint64_t{M + 1} * k * V, tag + " distribution multiplications");
    ++configs;
  }
  o.detail << configs << " configurations: packet length, M+1 key entries, (M+1)kV multiplications";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"completeness", completeness},       {"key-count", key_count_grid},
      {"sub-threshold-security", security}, {"threshold", threshold},
      {"dual-support-equivalence", dual_support}, {"ec-classifier", ec_classifier},
      {"cost-table", costs}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %zu %s (%s) [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures;
}
