#pragma once

// Lindstrom-Gessel-Viennot machinery on finite acyclic directed graphs with
// exact edge weights, plus the tail-swap involution that cancels every
// intersecting path tuple in the signed determinant expansion.

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "noncollide/exact.hpp"

namespace noncollide {

struct EdgeSpec {
  std::string from;
  std::string to;
  Rational weight{1};
};

/// Acyclic directed graph with a fixed total order on vertices. Vertices are
/// addressed by string id externally and by dense index internally.
class PathGraph {
 public:
  /// `order` lists every vertex once, smallest first; it defaults to the
  /// construction order of `vertices` when empty. Throws on cycles.
  PathGraph(std::vector<std::string> vertices, std::vector<std::string> order, std::vector<EdgeSpec> edges);

  std::size_t vertex_count() const noexcept { return ids_.size(); }
  const std::string& id(std::size_t v) const { return ids_.at(v); }
  std::size_t index(const std::string& id) const;
  /// Position of vertex v in the total order.
  std::size_t rank(std::size_t v) const { return rank_.at(v); }
  const std::vector<std::string>& vertices() const noexcept { return ids_; }
  std::vector<std::string> order() const;
  const std::vector<EdgeSpec>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& successors(std::size_t v) const { return out_.at(v); }
  const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }
  /// Weight of edge u -> v; throws if absent.
  const Rational& weight(std::size_t u, std::size_t v) const;

 private:
  std::vector<std::string> ids_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> rank_;
  std::vector<EdgeSpec> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::map<std::pair<std::size_t, std::size_t>, Rational> weights_;
  std::vector<std::size_t> topo_;
};

/// Vertex id used by vicious_walk_graph for the space-time point (x, t).
std::string walk_vertex(long x, int t);

/// Space-time lattice {(x, t) : x + t even, 0 <= t <= T, x_min <= x <= x_max}
/// with unit-weight edges (x, t-1) -> (x +- 1, t), ordered by (t, x).
PathGraph vicious_walk_graph(long x_min, long x_max, int horizon);

/// A path as its vertex sequence (indices into the graph).
using Path = std::vector<std::size_t>;

/// (sigma, P_1..P_N) where P_i runs from u_i to v_{sigma(i)}; sigma is 0-based.
struct PathTuple {
  std::vector<std::size_t> sigma;
  std::vector<Path> paths;

  friend bool operator==(const PathTuple&, const PathTuple&) = default;
};

constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

Rational green_function(const PathGraph& g, std::size_t u, std::size_t v);
Rational green_function(const PathGraph& g, const std::string& u, const std::string& v);

/// det[G(u_i, v_j)].
Rational lgv_determinant(const PathGraph& g, const std::vector<std::size_t>& sources, const std::vector<std::size_t>& sinks);

/// All paths u -> v; throws ErrorKind::CapExceeded past `cap`.
std::vector<Path> enumerate_paths(const PathGraph& g, std::size_t u, std::size_t v, std::size_t cap = kDefaultEnumerationCap);

/// Direct sum of w(P) over identity-paired tuples, optionally restricted to
/// pairwise vertex-disjoint tuples.
Rational brute_force_tuples(const PathGraph& g, const std::vector<std::size_t>& sources, const std::vector<std::size_t>& sinks,
                            bool nonintersecting_only, std::size_t cap = kDefaultEnumerationCap);

/// Every (sigma, P) configuration over all permutations, in a fixed order.
std::vector<PathTuple> enumerate_tuples(const PathGraph& g, const std::vector<std::size_t>& sources,
                                        const std::vector<std::size_t>& sinks, std::size_t cap = kDefaultEnumerationCap);

Rational path_weight(const PathGraph& g, const Path& p);
Rational tuple_weight(const PathGraph& g, const PathTuple& c);
int permutation_sign(const std::vector<std::size_t>& sigma);
bool has_intersection(const PathTuple& c);

/// Swaps the tails after the last (in vertex order) intersection vertex of the
/// two lowest-indexed paths through it. Throws ErrorKind::NonIntersecting when
/// no two paths share a vertex.
PathTuple tail_swap(const PathTuple& c, const PathGraph& g);

/// True iff for all i < j every path u_i -> v_j meets every path u_j -> v_i.
bool check_compatibility(const PathGraph& g, const std::vector<std::size_t>& sources, const std::vector<std::size_t>& sinks,
                         std::size_t cap = kDefaultEnumerationCap);

/// Random path u -> v choosing uniformly among successors that can still reach v.
Path random_path(const PathGraph& g, std::size_t u, std::size_t v, std::mt19937_64& rng);

}  // namespace noncollide
