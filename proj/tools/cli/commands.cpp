#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <thread>

#include <spdlog/spdlog.h>

#include "subtag/adversary.hpp"
#include "subtag/error.hpp"
#include "subtag/linearized.hpp"

namespace subtag::cli {

namespace {

Json key_count_json(const KeyCount& c) {
  return Json{{"q", c.q}, {"exponent", c.exponent}, {"decimal", c.decimal()}};
}

Json indices_json(std::span<const std::size_t> zero_based) {
  Json out = Json::array();
  for (auto i : zero_based) out.push_back(i + 1);
  return out;
}

std::vector<std::size_t> to_zero_based(std::span<const std::size_t> one_based, std::size_t limit, const char* what) {
  std::vector<std::size_t> out;
  for (auto i : one_based) {
    if (i == 0 || i > limit) {
      raise(Errc::IndexOutOfRange, std::string(what) + " index " + std::to_string(i) + " outside 1.." +
                                       std::to_string(limit));
    }
    out.push_back(i - 1);
  }
  return out;
}

std::optional<std::size_t> distance_if_small(const LinearCode& c) {
  if (codeword_count(c) > kEnumerationLimit) return std::nullopt;
  return c.min_distance();
}

Json optional_json(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

/// All size-r subsets of {0..n-1} in lexicographic order.
void for_each_subset(std::size_t n, std::size_t r, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Json ec_table(const ec::AgCodeSpec& spec, const LinearCode& code) {
  const std::size_t n = spec.length();
  const std::size_t k = spec.degree;
  if (n > 16) raise(Errc::TooLargeToEnumerate, "classification table needs n <= 16");
  Json rows = Json::array();
  std::size_t total = 0, agree = 0;
  for (std::size_t size : {n - k - 1, n - k}) {
    for_each_subset(n, size, [&](const std::vector<std::size_t>& coalition) {
      Json targets = Json::array();
      for (std::size_t t = 0; t < n; ++t) {
        if (std::find(coalition.begin(), coalition.end(), t) != coalition.end()) continue;
        const auto cls = ec::classify_coalition(spec, coalition, t);
        const bool oracle = forgeable(code, CoalitionSpec{coalition, t}).forgeable;
        ++total;
        if (oracle == cls.forgeable()) ++agree;
        targets.push_back(Json{{"target", t + 1},
                               {"verdict", ec::verdict_name(cls.verdict)},
                               {"span_forgeable", oracle},
                               {"agrees", oracle == cls.forgeable()}});
      }
      rows.push_back(Json{{"coalition", indices_json(coalition)},
                          {"size", coalition.size()},
                          {"complement_sum", spec.curve.format(ec::complement_sum(spec, coalition))},
                          {"targets", std::move(targets)}});
    });
  }
  return Json{{"n", n}, {"k", k}, {"rows", std::move(rows)}, {"checked", total}, {"agreements", agree},
              {"all_agree", total == agree}};
}

std::vector<ec::Point> select_points(const ec::EllipticCurve& curve, const std::optional<std::vector<std::size_t>>& idx,
                                     std::size_t V) {
  auto all = curve.points();
  all.erase(all.begin());  // O
  std::vector<ec::Point> out;
  if (idx) {
    for (auto i : to_zero_based(*idx, all.size(), "point")) out.push_back(all[i]);
  } else {
    if (V > all.size()) {
      raise(Errc::TooLong, "curve has only " + std::to_string(all.size()) + " affine points, need " +
                               std::to_string(V));
    }
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(V));
  }
  return out;
}

std::vector<Elem> payload_outside(const PublicParams& pp, const std::vector<TaggedPacket>& known, Rng rng) {
  std::vector<std::vector<Elem>> received;
  for (const auto& p : known) received.push_back(p.payload);
  const auto dim = decode_subspace(pp.base(), pp.l(), received).dimension();
  if (dim == pp.l()) raise(Errc::PayloadInSubspace, "received payloads span all of F_q^l; nothing to substitute");
  while (true) {
    std::vector<Elem> s(pp.l());
    for (auto& x : s) x = random_element(pp.base(), rng);
    if (!span_contains(pp.base(), received, s)) return s;
  }
}

struct Session {
  ParamsBundle bundle;
  MasterKey mk;
  std::vector<VerifierKey> keys;
  std::vector<std::vector<Elem>> basis;
  std::vector<TaggedPacket> packets;
};

Session open_session(const std::string& params_path, std::uint64_t seed) {
  Session s{load_params_file(params_path), {}, {}, {}, {}};
  const auto& pp = s.bundle.pp;
  s.mk = keygen(pp, seed);
  s.keys = distribute(pp, s.mk);
  Rng src = Rng(seed).stream("source");
  s.basis = random_basis(pp.base(), pp.l(), pp.n(), src);
  s.packets = tag_basis(pp, s.mk, s.basis);
  spdlog::debug("session: {} verifiers, {} source packets", s.keys.size(), s.packets.size());
  return s;
}

}  // namespace

std::vector<std::size_t> parse_index_list(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto part = text.substr(pos, end - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string_view::npos) {
      raise(Errc::ParseError, "bad index list '" + std::string(text) + "'");
    }
    out.push_back(std::stoull(std::string(part)));
    pos = end + 1;
  }
  return out;
}

std::pair<std::uint32_t, unsigned> prime_power(std::uint64_t q) {
  if (q < 2) raise(Errc::InvalidField, "field order must be at least 2");
  std::uint64_t p = 2;
  while (q % p != 0) ++p;
  unsigned m = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++m;
  }
  if (r != 1) raise(Errc::InvalidField, std::to_string(q) + " is not a prime power");
  return {static_cast<std::uint32_t>(p), m};
}

Topology resolve_topology(const std::string& spec, std::size_t n, std::size_t V, std::uint64_t seed) {
  if (spec == "butterfly") return butterfly(n == 2);
  if (spec.rfind("random:", 0) == 0) {
    const auto nodes = parse_index_list(spec.substr(7));
    if (nodes.size() != 1) raise(Errc::ParseError, "expected random:<nodes>");
    return random_dag(nodes[0], n, V, seed);
  }
  return Topology::parse(read_text_file(spec));
}

Json cmd_setup(const SetupOptions& opt) {
  const auto [p, m] = prime_power(opt.q);
  auto base = Field::base(p, m);
  auto ext = Field::extension(base, opt.l);
  std::optional<std::vector<Elem>> rs_points;
  std::optional<CurveBlock> curve;
  std::optional<LinearCode> code;
  if (opt.code == "rs") {
    if (opt.V > ext->order()) raise(Errc::TooLong, "RS length exceeds the extension field order");
    std::vector<Elem> pts;
    for (std::size_t i = 0; i < opt.V; ++i) pts.push_back(ext->elem(i));
    code = rs_code(*ext, pts, opt.k);
    rs_points = std::move(pts);
  } else if (opt.code == "parity") {
    Matrix g(*ext, opt.k, opt.k + 1);
    for (std::size_t r = 0; r < opt.k; ++r) {
      g(r, r) = ext->one();
      g(r, opt.k) = ext->one();
    }
    code = LinearCode(std::move(g));
  } else if (opt.code == "ec") {
    const ec::EllipticCurve c(*ext, ext->parse(opt.curve_a), ext->parse(opt.curve_b));
    CurveBlock cb{c.a(), c.b(), static_cast<unsigned>(opt.k), select_points(c, opt.points, opt.V)};
    const ec::AgCodeSpec spec{c, cb.points, cb.degree};
    code = ec::residue_code(spec);
    curve = std::move(cb);
  } else {
    raise(Errc::InvalidParams, "unknown code family '" + opt.code + "' (expected rs, parity or ec)");
  }
  ParamsBundle bundle{PublicParams(base, ext, opt.n, opt.M, std::move(*code)), std::move(rs_points), std::move(curve)};
  save_params_file(opt.params_out, bundle);
  const auto& pp = bundle.pp;
  spdlog::info("wrote {} ({} over {})", opt.params_out, opt.code, pp.ext().describe());
  return Json{{"command", "setup"},
              {"params", opt.params_out},
              {"q", pp.base().order()},
              {"l", pp.l()},
              {"n", pp.n()},
              {"M", pp.M()},
              {"code", opt.code},
              {"V", pp.V()},
              {"kdim", pp.kdim()},
              {"base_field", pp.base().describe()},
              {"extension_field", pp.ext().describe()},
              {"packet_length", pp.packet_length()},
              {"code_distance", optional_json(distance_if_small(pp.code()))},
              {"dual_distance", optional_json(distance_if_small(pp.code().dual()))}};
}

Json cmd_simulate(const SimulateOptions& opt) {
  const auto s = open_session(opt.params, opt.seed);
  const auto& pp = s.bundle.pp;
  const auto topo = resolve_topology(opt.topology, pp.n(), pp.V(), opt.seed);
  const auto kernels = compute_global_kernels(topo, pp.base(), pp.n(), opt.seed);

  std::optional<Injection> injection;
  if (opt.inject) {
    Rng rng = Rng(opt.seed).stream("garbage");
    std::vector<Elem> fake(pp.packet_length());
    for (auto& x : fake) x = random_element(pp.base(), rng);
    injection = Injection{topo.find(*opt.inject), std::move(fake), InjectMode::Replace};
  }
  const auto tx = transmit(topo, kernels, pp, s.packets, injection);

  std::vector<std::vector<Elem>> sent;
  for (const auto& p : s.packets) sent.push_back(p.payload);
  const auto sent_space = decode_subspace(pp.base(), pp.l(), sent);

  Json verifiers = Json::array();
  Json sinks = Json::array();
  Json nodes = Json::array();
  bool all_accept = true;
  bool all_full_rank_recover = true;
  for (std::size_t v = 0; v < topo.nodes().size(); ++v) {
    const auto& node = topo.node(v);
    nodes.push_back(Json{{"node", node.name}, {"role", role_name(node.role)}, {"kernel_rank", kernels.rank[v]}});
    const auto ins = topo.in_edges(v);
    if (node.role == Role::Verifier) {
      const auto i = *node.verifier_index;
      if (i >= pp.V()) raise(Errc::InvalidParams, "node '" + node.name + "' holds verifier index beyond V");
      std::size_t accepted = 0;
      bool kernel_agrees = true;
      for (std::size_t r = 0; r < tx.received[v].size(); ++r) {
        const auto pkt = TaggedPacket::from_symbols(pp, tx.received[v][r]);
        const bool ok = verify(pp, s.keys[i], pkt);
        accepted += ok;
        if (!injection && ok != verify_with_kernel(pp, s.keys[i], kernels.edge[ins[r]], s.packets, pkt)) {
          kernel_agrees = false;
        }
      }
      all_accept = all_accept && accepted == tx.received[v].size();
      verifiers.push_back(Json{{"node", node.name},
                               {"index", i + 1},
                               {"received", tx.received[v].size()},
                               {"accepted", accepted},
                               {"rejected", tx.received[v].size() - accepted},
                               {"kernel_check_agrees", kernel_agrees}});
    }
    if (node.role == Role::Sink) {
      std::vector<std::vector<Elem>> payloads;
      for (const auto& sym : tx.received[v]) payloads.push_back(TaggedPacket::from_symbols(pp, sym).payload);
      const auto got = decode_subspace(pp.base(), pp.l(), payloads);
      const bool recovered = got == sent_space;
      const bool full = kernels.rank[v] == pp.n();
      if (full && !recovered) all_full_rank_recover = false;
      sinks.push_back(Json{{"node", node.name},
                           {"kernel_rank", kernels.rank[v]},
                           {"full_rank", full},
                           {"dimension", got.dimension()},
                           {"recovered", recovered}});
    }
  }
  return Json{{"command", "simulate"},
              {"seed", opt.seed},
              {"topology", opt.topology},
              {"n", pp.n()},
              {"injected_at", opt.inject ? Json(*opt.inject) : Json(nullptr)},
              {"nodes", std::move(nodes)},
              {"verifiers", std::move(verifiers)},
              {"sinks", std::move(sinks)},
              {"all_verifiers_accept", all_accept},
              {"full_rank_sinks_recover", all_full_rank_recover}};
}

Json cmd_attack(const AttackOptions& opt) {
  auto s = open_session(opt.params, opt.seed);
  const auto& pp = s.bundle.pp;
  const auto members = to_zero_based(opt.coalition, pp.V(), "coalition");
  const auto target = to_zero_based(std::vector<std::size_t>{opt.target}, pp.V(), "target").front();
  CoalitionSpec{members, target}.validate(pp.V());

  // Without a topology the coalition sees every source packet, the strongest
  // position; with one it sees what its members' nodes received.
  std::vector<TaggedPacket> seen;
  if (opt.topology) {
    const auto topo = resolve_topology(*opt.topology, pp.n(), pp.V(), opt.seed);
    const auto kernels = compute_global_kernels(topo, pp.base(), pp.n(), opt.seed);
    const auto tx = transmit(topo, kernels, pp, s.packets);
    for (std::size_t v = 0; v < topo.nodes().size(); ++v) {
      const auto& idx = topo.node(v).verifier_index;
      if (!idx || std::find(members.begin(), members.end(), *idx) == members.end()) continue;
      for (const auto& sym : tx.received[v]) seen.push_back(TaggedPacket::from_symbols(pp, sym));
    }
  } else {
    seen = s.packets;
  }
  const auto view = make_view(members, s.keys, seen);
  const auto sys = assemble_system(pp, view);
  const auto counts = count_consistent_keys(pp, sys);
  const bool qualified = forgeable(pp.code(), CoalitionSpec{members, target}).forgeable;

  Json report{{"command", "attack"},
              {"seed", opt.seed},
              {"mode", opt.mode},
              {"coalition", indices_json(members)},
              {"target", target + 1},
              {"packets_seen", seen.size()},
              {"K0", sys.K0},
              {"r0", sys.r0},
              {"key_count", Json{{"predicted", key_count_json(counts.closed_form)},
                                 {"measured", key_count_json(counts.measured)},
                                 {"equal", counts.closed_form == counts.measured}}},
              {"qualified", qualified}};
  if (const auto spec = s.bundle.ag_spec()) {
    const auto cls = ec::classify_coalition(*spec, members, target);
    report["ec_classification"] = Json{{"verdict", ec::verdict_name(cls.verdict)},
                                       {"complement_sum", spec->curve.format(ec::complement_sum(*spec, members))}};
  }

  const auto payload = payload_outside(pp, seen, Rng(opt.seed).stream("forge-payload"));
  Json payload_json = Json::array();
  for (auto x : payload) payload_json.push_back(x.value());
  report["forged_payload"] = payload_json;
  const Elem one = pp.base().one();

  if (opt.mode == "deterministic") {
    try {
      const auto f = deterministic_forge(pp, view, target, payload, one);
      Json others = Json::array();
      for (std::size_t i = 0; i < pp.V(); ++i) {
        if (i == target || std::find(members.begin(), members.end(), i) != members.end()) continue;
        if (verify(pp, s.keys[i], f.packet)) others.push_back(i + 1);
      }
      const bool accepted = verify(pp, s.keys[target], f.packet);
      report["outcome"] = accepted ? "forged" : "rejected";
      report["accepted_by_target"] = accepted;
      report["key_recovered"] = f.recovered_key == s.keys[target].column;
      report["other_verifiers_accepting"] = std::move(others);
    } catch (const Error& e) {
      if (e.code() != Errc::NotQualified) throw;
      report["outcome"] = "not_qualified";
      report["accepted_by_target"] = false;
    }
  } else if (opt.mode == "guess") {
    if (opt.trials == 0) raise(Errc::InvalidParams, "guess mode needs at least one trial");
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, opt.trials));
    const Rng trial_root = Rng(opt.seed).stream("guess");
    std::vector<std::uint64_t> hits(threads, 0);
    auto work = [&](unsigned w) {
      for (std::uint64_t t = w; t < opt.trials; t += threads) {
        const auto pkt = guess_forge(pp, view, target, payload, one, trial_root.stream(t).next_u64());
        hits[w] += verify(pp, s.keys[target], pkt);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& th : pool) th.join();
    std::uint64_t accepted = 0;
    for (auto h : hits) accepted += h;
    const double p = 1.0 / static_cast<double>(pp.ext().order());
    const double trials = static_cast<double>(opt.trials);
    const double sigma = std::sqrt(trials * p * (1.0 - p));
    const double dev = std::abs(static_cast<double>(accepted) - trials * p);
    report["outcome"] = "guessed";
    report["trials"] = opt.trials;
    report["accepted"] = accepted;
    report["rate"] = static_cast<double>(accepted) / trials;
    report["expected_rate"] = p;
    report["sigma"] = sigma;
    report["within_3_sigma"] = dev <= 3.0 * sigma;
  } else if (opt.mode == "histogram") {
    LabelDistribution d;
    bool exhaustive = true;
    try {
      d = label_distribution(pp, view, target, payload);
    } catch (const Error& e) {
      if (e.code() != Errc::TooLargeToEnumerate) throw;
      exhaustive = false;
      d = label_distribution_analytic(pp, view, target, payload);
    }
    report["outcome"] = d.uniform() ? "uniform" : (d.determined ? "determined" : "partial");
    report["method"] = exhaustive ? "exhaustive" : "analytic";
    report["field_order"] = d.field_order;
    report["consistent_keys"] = key_count_json(d.consistent_keys);
    report["support"] = d.support;
    report["per_label"] = key_count_json(d.per_label);
    report["uniform"] = d.uniform();
    report["determined_label"] = d.determined ? Json(pp.ext().format(*d.determined)) : Json(nullptr);
    if (exhaustive && d.counts.size() <= 1024) report["counts"] = d.counts;
  } else {
    raise(Errc::InvalidParams, "unknown attack mode '" + opt.mode + "'");
  }
  return report;
}

Json cmd_analyze(const AnalyzeOptions& opt) {
  const auto bundle = load_params_file(opt.params);
  const auto& pp = bundle.pp;
  const auto& code = pp.code();
  const auto target = to_zero_based(std::vector<std::size_t>{opt.target}, pp.V(), "target").front();
  const auto dual = code.dual();
  const auto d = code.min_distance();
  const auto dd = dual.min_distance();

  Json minimal = Json::array();
  for (const auto& w : minimal_codewords_wrt(dual, target)) {
    Json word = Json::array();
    for (auto x : w) word.push_back(pp.ext().format(x));
    minimal.push_back(std::move(word));
  }
  Json access = Json::array();
  for (const auto& c : access_structure(code, target)) access.push_back(indices_json(c));

  Json report{{"command", "analyze"},
              {"target", target + 1},
              {"V", pp.V()},
              {"kdim", pp.kdim()},
              {"field", pp.ext().describe()},
              {"code_distance", optional_json(d)},
              {"dual_distance", optional_json(dd)},
              {"mds", is_mds(code)},
              {"minimal_codewords", std::move(minimal)},
              {"access_structure", std::move(access)}};
  if (is_mds(code)) {
    const auto& coalitions = report["access_structure"];
    std::uint64_t expected = 1;
    for (std::size_t i = 0; i < pp.kdim(); ++i) expected = expected * (pp.V() - 1 - i) / (i + 1);
    const bool all_k = std::all_of(coalitions.begin(), coalitions.end(),
                                   [&](const Json& c) { return c.size() == pp.kdim(); });
    report["threshold"] = Json{{"V", pp.V()}, {"k", pp.kdim()}, {"confirmed", all_k && coalitions.size() == expected}};
  }
  if (const auto spec = bundle.ag_spec()) report["ec_classification"] = ec_table(*spec, code);
  return report;
}

Json cmd_ec_code(const EcCodeOptions& opt) {
  const auto [p, m] = prime_power(opt.q);
  const auto field = Field::base(p, m);
  const ec::EllipticCurve curve(*field, field->parse(opt.a), field->parse(opt.b));
  const auto all = curve.points();
  const auto D = select_points(curve, opt.points, all.size() - 1);
  const ec::AgCodeSpec spec{curve, D, opt.degree};
  const auto eval = ec::eval_code(spec);
  const auto residue = eval.dual();

  const double r = static_cast<double>(field->order());
  const double gap = std::abs(static_cast<double>(all.size()) - r - 1.0);
  Json pts = Json::array();
  for (const auto& pt : D) pts.push_back(curve.format(pt));
  auto matrix_json = [&](const Matrix& g) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < g.rows(); ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < g.cols(); ++j) row.push_back(g(i, j).value());
      rows.push_back(std::move(row));
    }
    return rows;
  };
  return Json{{"command", "ec-code"},
              {"field", field->describe()},
              {"curve", Json{{"a", field->format(curve.a())}, {"b", field->format(curve.b())}}},
              {"group_order", all.size()},
              {"hasse_ok", gap <= 2.0 * std::sqrt(r)},
              {"points", std::move(pts)},
              {"n", D.size()},
              {"degree", opt.degree},
              {"eval_generator", matrix_json(eval.generator())},
              {"residue_generator", matrix_json(residue.generator())},
              {"eval_distance", optional_json(distance_if_small(eval))},
              {"residue_distance", optional_json(distance_if_small(residue))},
              {"residue_mds", codeword_count(residue) <= kEnumerationLimit && is_mds(residue)},
              {"classification", ec_table(spec, residue)}};
}

}  // namespace subtag::cli
