#include "subtag/network.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "subtag/error.hpp"
#include "subtag/linearized.hpp"

namespace subtag {

std::string_view role_name(Role r) noexcept {
  switch (r) {
    case Role::Source: return "source";
    case Role::Internal: return "internal";
    case Role::Verifier: return "verifier";
    case Role::Sink: return "sink";
  }
  return "unknown";
}

namespace {

std::optional<Role> role_from_name(std::string_view s) {
  for (Role r : {Role::Source, Role::Internal, Role::Verifier, Role::Sink}) {
    if (role_name(r) == s) return r;
  }
  return std::nullopt;
}

std::vector<std::string> tokens(std::string_view line) {
  std::istringstream is{std::string(line)};
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

std::uint64_t to_u64(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(tok, &used);
    if (used != tok.size() || tok.front() == '-') throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    raise(Errc::ParseError, "line " + std::to_string(line_no) + ": expected an unsigned integer, got '" + tok + "'");
  }
}

}  // namespace

std::size_t Topology::add_node(std::string name, Role role, std::optional<std::size_t> verifier_index) {
  for (const auto& n : nodes_) {
    if (n.name == name) raise(Errc::InvalidParams, "duplicate node name '" + name + "'");
    if (role == Role::Source && n.role == Role::Source) raise(Errc::InvalidParams, "a network has one source");
  }
  if (role != Role::Verifier && verifier_index) raise(Errc::InvalidParams, "only verifier nodes carry an index");
  if (role == Role::Verifier && !verifier_index) {
    std::size_t next = 0;
    for (const auto& n : nodes_) {
      if (n.verifier_index) next = std::max(next, *n.verifier_index + 1);
    }
    verifier_index = next;
  }
  nodes_.push_back(Node{std::move(name), role, verifier_index});
  kernels_.emplace_back();
  return nodes_.size() - 1;
}

void Topology::add_edge(std::string_view from, std::string_view to) { add_edge(find(from), find(to)); }

void Topology::add_edge(std::size_t from, std::size_t to) {
  if (from >= nodes_.size() || to >= nodes_.size()) raise(Errc::UnknownNode, "edge endpoint out of range");
  if (nodes_[to].role == Role::Source) raise(Errc::InvalidParams, "the source has no incoming edges");
  edges_.push_back({from, to});
}

void Topology::set_kernel(std::size_t node, std::vector<std::uint32_t> entries) {
  if (node >= nodes_.size()) raise(Errc::UnknownNode, "kernel for unknown node");
  kernels_[node] = std::move(entries);
}

std::size_t Topology::find(std::string_view name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return i;
  }
  raise(Errc::UnknownNode, "no node named '" + std::string(name) + "'");
}

std::size_t Topology::source() const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].role == Role::Source) return i;
  }
  raise(Errc::InvalidParams, "network has no source node");
}

std::vector<std::size_t> Topology::in_edges(std::size_t node) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].to == node) out.push_back(e);
  }
  return out;
}

std::vector<std::size_t> Topology::out_edges(std::size_t node) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].from == node) out.push_back(e);
  }
  return out;
}

std::vector<std::size_t> Topology::topological_order() const {
  std::vector<std::size_t> indegree(nodes_.size(), 0);
  for (const auto& e : edges_) ++indegree[e.to];
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    const auto v = ready.top();
    ready.pop();
    order.push_back(v);
    for (const auto& e : edges_) {
      if (e.from == v && --indegree[e.to] == 0) ready.push(e.to);
    }
  }
  if (order.size() != nodes_.size()) raise(Errc::CyclicGraph, "network contains a directed cycle");
  return order;
}

Topology Topology::parse(std::string_view text) {
  Topology t;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> kernel_lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (tok[0] == "node") {
      if (tok.size() < 3 || tok.size() > 4) raise(Errc::ParseError, where + "expected 'node <name> <role> [index]'");
      const auto role = role_from_name(tok[2]);
      if (!role) raise(Errc::ParseError, where + "unknown role '" + tok[2] + "'");
      std::optional<std::size_t> index;
      if (tok.size() == 4) {
        const auto v = to_u64(tok[3], line_no);
        if (v == 0) raise(Errc::ParseError, where + "verifier indices start at 1");
        index = static_cast<std::size_t>(v - 1);
      }
      t.add_node(tok[1], *role, index);
    } else if (tok[0] == "edge") {
      if (tok.size() != 3) raise(Errc::ParseError, where + "expected 'edge <from> <to>'");
      t.add_edge(tok[1], tok[2]);
    } else if (tok[0] == "kernel") {
      if (tok.size() < 2) raise(Errc::ParseError, where + "expected 'kernel <node> <entries...>'");
      kernel_lines.emplace_back(line_no, tok);
    } else {
      raise(Errc::ParseError, where + "unknown directive '" + tok[0] + "'");
    }
  }
  for (const auto& [no, tok] : kernel_lines) {
    std::vector<std::uint32_t> entries;
    for (std::size_t i = 2; i < tok.size(); ++i) entries.push_back(static_cast<std::uint32_t>(to_u64(tok[i], no)));
    t.set_kernel(t.find(tok[1]), std::move(entries));
  }
  return t;
}

std::string Topology::to_text() const {
  std::ostringstream os;
  for (const auto& n : nodes_) {
    os << "node " << n.name << ' ' << role_name(n.role);
    if (n.verifier_index) os << ' ' << *n.verifier_index + 1;
    os << '\n';
  }
  for (const auto& e : edges_) os << "edge " << nodes_[e.from].name << ' ' << nodes_[e.to].name << '\n';
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (!kernels_[v]) continue;
    os << "kernel " << nodes_[v].name;
    for (auto x : *kernels_[v]) os << ' ' << x;
    os << '\n';
  }
  return os.str();
}

Topology butterfly(bool standard_kernels) {
  Topology t;
  t.add_node("s", Role::Source);
  t.add_node("a", Role::Verifier, 0);
  t.add_node("b", Role::Verifier, 1);
  t.add_node("c", Role::Verifier, 2);
  t.add_node("d", Role::Internal);
  t.add_node("t1", Role::Sink);
  t.add_node("t2", Role::Sink);
  t.add_edge("s", "a");
  t.add_edge("s", "b");
  t.add_edge("a", "c");
  t.add_edge("a", "t1");
  t.add_edge("b", "c");
  t.add_edge("b", "t2");
  t.add_edge("c", "d");
  t.add_edge("d", "t1");
  t.add_edge("d", "t2");
  if (standard_kernels) {
    t.set_kernel(t.find("s"), {1, 0, 0, 1});
    t.set_kernel(t.find("a"), {1, 1});
    t.set_kernel(t.find("b"), {1, 1});
    t.set_kernel(t.find("c"), {1, 1});
    t.set_kernel(t.find("d"), {1, 1});
  }
  return t;
}

Topology random_dag(std::size_t nodes, std::size_t n, std::size_t V, std::uint64_t seed) {
  if (nodes < n + 2) raise(Errc::InvalidParams, "random DAG needs at least n + 2 nodes");
  if (V == 0) raise(Errc::InvalidParams, "random DAG needs at least one verifier index");
  Rng rng = Rng(seed).stream("topology");
  Topology t;
  t.add_node("v0", Role::Source);
  std::size_t next_index = 0;
  for (std::size_t v = 1; v < nodes; ++v) {
    const auto name = "v" + std::to_string(v);
    if (v + 1 == nodes) {
      t.add_node(name, Role::Sink);
    } else if (v % 2 == 1) {
      t.add_node(name, Role::Verifier, next_index++ % V);
    } else {
      t.add_node(name, Role::Internal);
    }
  }
  for (std::size_t v = 1; v < nodes; ++v) {
    std::vector<bool> from(v, false);
    if (v <= n) from[0] = true;
    from[rng.uniform(v)] = true;
    for (std::size_t u = 0; u < v; ++u) {
      if (rng.uniform(10) < 3) from[u] = true;
    }
    // The sink also hears the source directly so that it can reach rank n.
    if (v + 1 == nodes) from[0] = true;
    for (std::size_t u = 0; u < v; ++u) {
      if (from[u]) t.add_edge(u, v);
    }
  }
  return t;
}

GlobalKernels compute_global_kernels(const Topology& t, const Field& base, std::size_t n, std::uint64_t seed) {
  if (n == 0) raise(Errc::InvalidParams, "need at least one source packet");
  const auto order = t.topological_order();
  const std::size_t src = t.source();
  const Rng root = Rng(seed).stream("network");
  const std::size_t nv = t.nodes().size();

  GlobalKernels g;
  g.n = n;
  g.local.resize(nv);
  g.edge.assign(t.edges().size(), {});
  g.node.resize(nv);
  g.rank.assign(nv, 0);

  for (auto v : order) {
    const auto ins = t.in_edges(v);
    const auto outs = t.out_edges(v);
    if (v != src && ins.empty()) {
      raise(Errc::InvalidParams, "node '" + t.node(v).name + "' is not reachable from the source");
    }
    const std::size_t rows = v == src ? n : ins.size();
    if (v == src && outs.size() < n) {
      raise(Errc::DimensionMismatch, "source needs at least n outgoing edges");
    }
    Matrix k(base, rows, outs.size());
    if (const auto& given = t.kernel(v)) {
      if (given->size() != rows * outs.size()) {
        raise(Errc::DimensionMismatch, "kernel of '" + t.node(v).name + "' needs " + std::to_string(rows) + "x" +
                                           std::to_string(outs.size()) + " entries");
      }
      for (std::size_t i = 0; i < given->size(); ++i) {
        if ((*given)[i] >= base.order()) raise(Errc::InvalidParams, "kernel entry outside the field");
        k(i / outs.size(), i % outs.size()) = base.elem((*given)[i]);
      }
    } else {
      Rng rng = root.stream(static_cast<std::uint64_t>(v));
      k = random_matrix(base, rows, outs.size(), rng);
      if (v == src) {
        for (std::size_t r = 0; r < n; ++r) {
          for (std::size_t c = 0; c < n; ++c) k(r, c) = r == c ? base.one() : base.zero();
        }
      }
    }

    std::vector<std::vector<Elem>> incoming;
    if (v == src) {
      g.node[v] = Matrix::identity(base, n);
      for (std::size_t r = 0; r < n; ++r) incoming.push_back(g.node[v].row(r));
    } else {
      for (auto e : ins) incoming.push_back(g.edge[e]);
      g.node[v] = Matrix::from_rows(base, n, incoming);
    }
    g.rank[v] = rank(g.node[v]);
    for (std::size_t c = 0; c < outs.size(); ++c) {
      std::vector<Elem> f(n, base.zero());
      for (std::size_t d = 0; d < incoming.size(); ++d) {
        for (std::size_t j = 0; j < n; ++j) f[j] += k(d, c) * incoming[d][j];
      }
      g.edge[outs[c]] = std::move(f);
    }
    g.local[v] = std::move(k);
  }
  return g;
}

Transmission transmit(const Topology& t, const GlobalKernels& g, std::span<const std::vector<Elem>> packets,
                      const std::optional<Injection>& injection) {
  if (packets.size() != g.n) raise(Errc::DimensionMismatch, "need one packet per source input");
  if (packets.empty()) return {};
  const std::size_t len = packets[0].size();
  for (const auto& p : packets) {
    if (p.size() != len) raise(Errc::DimensionMismatch, "source packets differ in length");
  }
  if (injection) {
    if (injection->node >= t.nodes().size()) raise(Errc::UnknownNode, "injection node out of range");
    if (injection->packet.size() != len) raise(Errc::DimensionMismatch, "injected packet length differs");
  }
  const Field& base = *g.local.at(t.source()).field();
  const std::size_t src = t.source();

  Transmission out;
  out.edge.assign(t.edges().size(), {});
  out.received.assign(t.nodes().size(), {});
  for (auto v : t.topological_order()) {
    const auto ins = t.in_edges(v);
    const auto outs = t.out_edges(v);
    std::vector<const std::vector<Elem>*> incoming;
    if (v == src) {
      for (const auto& p : packets) incoming.push_back(&p);
    } else {
      for (auto e : ins) {
        incoming.push_back(&out.edge[e]);
        out.received[v].push_back(out.edge[e]);
      }
    }
    const Matrix& k = g.local[v];
    for (std::size_t c = 0; c < outs.size(); ++c) {
      std::vector<Elem> y(len, base.zero());
      for (std::size_t d = 0; d < incoming.size(); ++d) {
        const Elem coeff = k(d, c);
        if (coeff.is_zero()) continue;
        for (std::size_t i = 0; i < len; ++i) y[i] += coeff * (*incoming[d])[i];
      }
      if (injection && injection->node == v) {
        if (injection->mode == InjectMode::Replace) {
          y = injection->packet;
        } else {
          for (std::size_t i = 0; i < len; ++i) y[i] += injection->packet[i];
        }
      }
      out.edge[outs[c]] = std::move(y);
    }
  }

  if (!injection) {
    for (std::size_t e = 0; e < t.edges().size(); ++e) {
      std::vector<Elem> expect(len, base.zero());
      for (std::size_t j = 0; j < g.n; ++j) {
        for (std::size_t i = 0; i < len; ++i) expect[i] += g.edge[e][j] * packets[j][i];
      }
      if (expect != out.edge[e]) raise(Errc::Internal, "edge packet differs from f_e X");
    }
  }
  return out;
}

Transmission transmit(const Topology& t, const GlobalKernels& g, const PublicParams& pp,
                      std::span<const TaggedPacket> packets, const std::optional<Injection>& injection) {
  std::vector<std::vector<Elem>> sym;
  sym.reserve(packets.size());
  for (const auto& p : packets) sym.push_back(p.to_symbols(pp));
  return transmit(t, g, sym, injection);
}

Transmission inject(const Topology& t, const GlobalKernels& g, const PublicParams& pp,
                    std::span<const TaggedPacket> packets, std::string_view node, const TaggedPacket& fake,
                    InjectMode mode) {
  return transmit(t, g, pp, packets, Injection{t.find(node), fake.to_symbols(pp), mode});
}

Subspace decode_subspace(const Field& base, std::size_t l, std::span<const std::vector<Elem>> vectors) {
  for (const auto& v : vectors) {
    if (v.size() != l) raise(Errc::LengthMismatch, "payload vectors must have length l");
  }
  if (vectors.empty()) return Subspace{Matrix(base, 0, l)};
  const auto r = rref(Matrix::from_rows(base, l, {vectors.begin(), vectors.end()}));
  std::vector<std::size_t> rows(r.rank);
  for (std::size_t i = 0; i < r.rank; ++i) rows[i] = i;
  return Subspace{r.reduced.select_rows(rows)};
}

bool verify_with_kernel(const PublicParams& pp, const VerifierKey& vk, std::span<const Elem> h,
                        std::span<const TaggedPacket> source, const TaggedPacket& received) {
  if (h.size() != source.size()) raise(Errc::LengthMismatch, "kernel row length differs from source count");
  const Field& ext = pp.ext();
  Elem tracker = pp.base().zero();
  Elem s = ext.zero();
  for (std::size_t j = 0; j < h.size(); ++j) {
    tracker += h[j];
    s += ext.embed(h[j]) * iso_vec(ext, source[j].payload);
  }
  const Elem lhs = linearized_eval(ext, vk.column, tracker, s);
  Elem rhs = ext.zero();
  for (std::size_t t = 0; t < pp.kdim(); ++t) rhs += received.tag[t] * vk.g[t];
  return lhs == rhs;
}

}  // namespace subtag
