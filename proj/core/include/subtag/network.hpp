#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subtag/matrix.hpp"
#include "subtag/scheme.hpp"

namespace subtag {

enum class Role { Source, Internal, Verifier, Sink };

std::string_view role_name(Role r) noexcept;

struct Node {
  std::string name;
  Role role = Role::Internal;
  /// Code coordinate held by a verifier node (0-based).
  std::optional<std::size_t> verifier_index;
};

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
};

/// A directed acyclic network with exactly one source. Local kernels may be
/// given per node as row-major F_q encodings; missing ones are drawn at
/// random when global kernels are computed.
///
/// The source kernel is n x |Out(source)| and maps the n virtual source
/// inputs e_1..e_n onto the source's outgoing edges. Every other node's
/// kernel is |In(v)| x |Out(v)|.
class Topology {
 public:
  /// Verifier nodes without an explicit index get the next unused one in
  /// declaration order. Raises InvalidParams on duplicate names or a second
  /// source.
  std::size_t add_node(std::string name, Role role, std::optional<std::size_t> verifier_index = std::nullopt);
  /// Raises UnknownNode.
  void add_edge(std::string_view from, std::string_view to);
  void add_edge(std::size_t from, std::size_t to);
  void set_kernel(std::size_t node, std::vector<std::uint32_t> entries);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  /// Raises UnknownNode.
  std::size_t find(std::string_view name) const;
  /// Raises InvalidParams when no source was declared.
  std::size_t source() const;
  std::vector<std::size_t> in_edges(std::size_t node) const;
  std::vector<std::size_t> out_edges(std::size_t node) const;
  const std::optional<std::vector<std::uint32_t>>& kernel(std::size_t node) const { return kernels_.at(node); }

  /// Nodes in an upstream-to-downstream order; raises CyclicGraph.
  std::vector<std::size_t> topological_order() const;

  /// Lines "node <name> <role> [index]", "edge <from> <to>",
  /// "kernel <node> <entries...>"; '#' starts a comment. Verifier indices in
  /// the text are 1-based. Raises ParseError / UnknownNode.
  static Topology parse(std::string_view text);
  std::string to_text() const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::optional<std::vector<std::uint32_t>>> kernels_;
};

/// s -> a, s -> b, a -> c, a -> t1, b -> c, b -> t2, c -> d, d -> t1,
/// d -> t2 with a, b, c verifiers 0, 1, 2, d internal and t1, t2 sinks.
/// With standard_kernels every node forwards or sums (source kernel I_2).
Topology butterfly(bool standard_kernels = true);

/// Random DAG with `nodes` nodes: one source feeding at least n edges, the
/// last node a sink, the others alternating verifier and internal roles with
/// verifier indices cycling through 0..V-1. Every node is reachable.
Topology random_dag(std::size_t nodes, std::size_t n, std::size_t V, std::uint64_t seed);

struct GlobalKernels {
  std::size_t n = 0;
  /// Resolved local kernel per node (rows x cols as documented on Topology).
  std::vector<Matrix> local;
  /// Global encoding vector f_e per edge, length n.
  std::vector<std::vector<Elem>> edge;
  /// F_t: rows are the f_e of the node's incoming edges (the source reports I_n).
  std::vector<Matrix> node;
  std::vector<std::size_t> rank;
};

/// Recursion f_e = sum_{d in In(v)} k_{de} f_d in topological order. Missing
/// kernels are drawn uniformly from the "network" stream of `seed` without
/// any rank retry. Raises CyclicGraph, DimensionMismatch, InvalidParams.
GlobalKernels compute_global_kernels(const Topology& t, const Field& base, std::size_t n, std::uint64_t seed);

enum class InjectMode { Replace, Augment };

struct Injection {
  std::size_t node = 0;
  std::vector<Elem> packet;
  InjectMode mode = InjectMode::Replace;
};

/// Packets (as base-field symbol vectors) carried by each edge and received
/// by each node.
struct Transmission {
  std::vector<std::vector<Elem>> edge;
  std::vector<std::vector<std::vector<Elem>>> received;
};

/// Propagates the n source packets. Without an injection every edge packet is
/// checked against f_e X (raises Internal on mismatch).
/// With Replace, every outgoing edge of the injecting node carries the fake
/// packet; with Augment it is added to each of them. Raises DimensionMismatch
/// when packet lengths differ, UnknownNode for a bad injection node.
Transmission transmit(const Topology& t, const GlobalKernels& g, std::span<const std::vector<Elem>> packets,
                      const std::optional<Injection>& injection = std::nullopt);

/// Convenience wrapper for tagged packets.
Transmission transmit(const Topology& t, const GlobalKernels& g, const PublicParams& pp,
                      std::span<const TaggedPacket> packets, const std::optional<Injection>& injection = std::nullopt);

/// Same as transmit with an injection at the named node.
Transmission inject(const Topology& t, const GlobalKernels& g, const PublicParams& pp,
                    std::span<const TaggedPacket> packets, std::string_view node, const TaggedPacket& fake,
                    InjectMode mode = InjectMode::Replace);

struct Subspace {
  /// Reduced row echelon basis, one row per dimension.
  Matrix basis;
  std::size_t dimension() const noexcept { return basis.rows(); }
  friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis == b.basis; }
};

/// Row space of the given vectors (all of length l).
Subspace decode_subspace(const Field& base, std::size_t l, std::span<const std::vector<Elem>> vectors);

/// Verification of a packet received with global vector h, computed from the
/// source payloads: label (sum_j h_j) b_0 + sum_t (sum_j h_j s_j)^{q^{t-1}} b_t
/// compared with sum_t tag_t g_t.
bool verify_with_kernel(const PublicParams& pp, const VerifierKey& vk, std::span<const Elem> h,
                        std::span<const TaggedPacket> source, const TaggedPacket& received);

}  // namespace subtag
