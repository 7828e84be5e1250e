#include "noncollide/lgv.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "noncollide/error.hpp"

namespace noncollide {

namespace {

constexpr const char* kModule = "lgv";

[[noreturn]] void fail(ErrorKind kind, const std::string& what) { throw Error(kind, kModule, what); }

void require_same_size(const std::vector<std::size_t>& sources, const std::vector<std::size_t>& sinks) {
  if (sources.size() != sinks.size()) fail(ErrorKind::InvalidArgument, "source and sink lists differ in size");
}

// reach[w] is true when w can reach `target`.
std::vector<bool> reaches(const PathGraph& g, std::size_t target) {
  std::vector<bool> reach(g.vertex_count(), false);
  reach[target] = true;
  const auto& topo = g.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it)
    for (std::size_t w : g.successors(*it))
      if (reach[w]) reach[*it] = true;
  return reach;
}

}  // namespace

PathGraph::PathGraph(std::vector<std::string> vertices, std::vector<std::string> order, std::vector<EdgeSpec> edges)
    : ids_(std::move(vertices)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (!index_.emplace(ids_[i], i).second) fail(ErrorKind::InvalidArgument, "duplicate vertex '" + ids_[i] + "'");

  rank_.assign(ids_.size(), 0);
  if (order.empty()) {
    std::iota(rank_.begin(), rank_.end(), std::size_t{0});
  } else {
    if (order.size() != ids_.size()) fail(ErrorKind::InvalidArgument, "vertex order must list every vertex exactly once");
    std::vector<bool> seen(ids_.size(), false);
    for (std::size_t r = 0; r < order.size(); ++r) {
      const std::size_t v = index(order[r]);
      if (seen[v]) fail(ErrorKind::InvalidArgument, "vertex order lists '" + order[r] + "' twice");
      seen[v] = true;
      rank_[v] = r;
    }
  }

  out_.assign(ids_.size(), {});
  std::vector<std::size_t> indegree(ids_.size(), 0);
  for (const EdgeSpec& e : edges_) {
    const std::size_t a = index(e.from), b = index(e.to);
    if (!weights_.emplace(std::make_pair(a, b), e.weight).second)
      fail(ErrorKind::InvalidArgument, "duplicate edge " + e.from + " -> " + e.to);
    out_[a].push_back(b);
    ++indegree[b];
  }

  // Kahn's algorithm; ties broken by the vertex order so the result is deterministic.
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < ids_.size(); ++v)
    if (indegree[v] == 0) ready.push_back(v);
  auto later = [&](std::size_t a, std::size_t b) { return rank_[a] > rank_[b]; };
  std::make_heap(ready.begin(), ready.end(), later);
  while (!ready.empty()) {
    std::pop_heap(ready.begin(), ready.end(), later);
    const std::size_t v = ready.back();
    ready.pop_back();
    topo_.push_back(v);
    for (std::size_t w : out_[v]) {
      if (--indegree[w] == 0) {
        ready.push_back(w);
        std::push_heap(ready.begin(), ready.end(), later);
      }
    }
  }
  if (topo_.size() != ids_.size()) fail(ErrorKind::CyclicGraph, "graph contains a directed cycle");
}

std::size_t PathGraph::index(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail(ErrorKind::UnknownVertex, "unknown vertex '" + id + "'");
  return it->second;
}

std::vector<std::string> PathGraph::order() const {
  std::vector<std::string> out(ids_.size());
  for (std::size_t v = 0; v < ids_.size(); ++v) out[rank_[v]] = ids_[v];
  return out;
}

const Rational& PathGraph::weight(std::size_t u, std::size_t v) const {
  auto it = weights_.find({u, v});
  if (it == weights_.end()) fail(ErrorKind::InvalidArgument, "no edge " + id(u) + " -> " + id(v));
  return it->second;
}

std::string walk_vertex(long x, int t) { return std::to_string(x) + "@" + std::to_string(t); }

PathGraph vicious_walk_graph(long x_min, long x_max, int horizon) {
  if (horizon < 0 || x_min > x_max) fail(ErrorKind::InvalidArgument, "empty walk graph");
  std::vector<std::string> vertices;
  std::vector<EdgeSpec> edges;
  auto on_lattice = [](long x, int t) { return ((x + t) % 2 + 2) % 2 == 0; };
  for (int t = 0; t <= horizon; ++t) {
    for (long x = x_min; x <= x_max; ++x) {
      if (!on_lattice(x, t)) continue;
      vertices.push_back(walk_vertex(x, t));
      if (t == horizon) continue;
      for (long dx : {-1L, 1L})
        if (x + dx >= x_min && x + dx <= x_max) edges.push_back({walk_vertex(x, t), walk_vertex(x + dx, t + 1), Rational(1)});
    }
  }
  // Construction order is already lexicographic in (t, x).
  return PathGraph(std::move(vertices), {}, std::move(edges));
}

Rational green_function(const PathGraph& g, std::size_t u, std::size_t v) {
  if (u >= g.vertex_count() || v >= g.vertex_count()) fail(ErrorKind::UnknownVertex, "vertex index out of range");
  std::vector<Rational> acc(g.vertex_count(), Rational(0));
  acc[u] = 1;
  for (std::size_t a : g.topological_order()) {
    if (acc[a] == 0) continue;
    if (a == v) break;
    for (std::size_t b : g.successors(a)) acc[b] += acc[a] * g.weight(a, b);
  }
  return acc[v];
}

Rational green_function(const PathGraph& g, const std::string& u, const std::string& v) {
  return green_function(g, g.index(u), g.index(v));
}

Rational lgv_determinant(const PathGraph& g, const std::vector<std::size_t>& sources, const std::vector<std::size_t>& sinks) {
  require_same_size(sources, sinks);
  SquareMatrix<Rational> m(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i)
    for (std::size_t j = 0; j < sinks.size(); ++j) m(i, j) = green_function(g, sources[i], sinks[j]);
  return bareiss_determinant(std::move(m));
}

std::vector<Path> enumerate_paths(const PathGraph& g, std::size_t u, std::size_t v, std::size_t cap) {
  const auto reach = reaches(g, v);
  std::vector<Path> out;
  if (!reach[u]) return out;
  Path current{u};
  std::function<void(std::size_t)> walk = [&](std::size_t a) {
    if (a == v) {
      if (out.size() >= cap) fail(ErrorKind::CapExceeded, "path enumeration exceeded cap of " + std::to_string(cap));
      out.push_back(current);
      return;
    }
    for (std::size_t b : g.successors(a)) {
      if (!reach[b]) continue;
      current.push_back(b);
      walk(b);
      current.pop_back();
    }
  };
  walk(u);
  return out;
}

Rational path_weight(const PathGraph& g, const Path& p) {
  Rational w(1);
  for (std::size_t k = 1; k < p.size(); ++k) w *= g.weight(p[k - 1], p[k]);
  return w;
}

Rational tuple_weight(const PathGraph& g, const PathTuple& c) {
  Rational w(1);
  for (const Path& p : c.paths) w *= path_weight(g, p);
  return w;
}

int permutation_sign(const std::vector<std::size_t>& sigma) {
  std::vector<bool> seen(sigma.size(), false);
  int sign = 1;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t k = i; !seen[k]; k = sigma[k]) {
      seen[k] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

namespace {

bool disjoint(const Path& a, const Path& b) {
  for (std::size_t x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return false;
  return true;
}

// Calls visit(choice) for each element of the cartesian product of `lists`.
template <typename Visit>
void for_each_product(const std::vector<std::vector<Path>>& lists, Visit&& visit) {
  std::vector<const Path*> choice(lists.size());
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == lists.size()) {
      visit(choice);
      return;
    }
    for (const Path& p : lists[k]) {
      choice[k] = &p;
      rec(k + 1);
    }
  };
  rec(0);
}

std::size_t product_size(const std::vector<std::vector<Path>>& lists, std::size_t cap) {
  std::size_t total = 1;
  for (const auto& l : lists) {
    if (l.empty()) return 0;
    if (total > cap / l.size()) fail(ErrorKind::CapExceeded, "tuple enumeration exceeded cap of " + std::to_string(cap));
    total *= l.size();
  }
  return total;
}

}  // namespace

Rational brute_force_tuples(const PathGraph& g, const std::vector<std::size_t>& sources, const std::vector<std::size_t>& sinks,
                            bool nonintersecting_only, std::size_t cap) {
  require_same_size(sources, sinks);
  std::vector<std::vector<Path>> lists;
  for (std::size_t i = 0; i < sources.size(); ++i) lists.push_back(enumerate_paths(g, sources[i], sinks[i], cap));
  if (product_size(lists, cap) == 0) return Rational(0);

  std::vector<std::vector<Rational>> weights(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i)
    for (const Path& p : lists[i]) weights[i].push_back(path_weight(g, p));

  Rational total(0);
  for_each_product(lists, [&](const std::vector<const Path*>& choice) {
    if (nonintersecting_only) {
      for (std::size_t i = 0; i < choice.size(); ++i)
        for (std::size_t j = i + 1; j < choice.size(); ++j)
          if (!disjoint(*choice[i], *choice[j])) return;
    }
    Rational w(1);
    for (std::size_t i = 0; i < choice.size(); ++i)
      w *= weights[i][static_cast<std::size_t>(choice[i] - lists[i].data())];
    total += w;
  });
  return total;
}

std::vector<PathTuple> enumerate_tuples(const PathGraph& g, const std::vector<std::size_t>& sources,
                                        const std::vector<std::size_t>& sinks, std::size_t cap) {
  require_same_size(sources, sinks);
  const std::size_t n = sources.size();
  std::vector<PathTuple> out;
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  do {
    std::vector<std::vector<Path>> lists;
    for (std::size_t i = 0; i < n; ++i) lists.push_back(enumerate_paths(g, sources[i], sinks[sigma[i]], cap));
    const std::size_t count = product_size(lists, cap);
    if (out.size() + count > cap) fail(ErrorKind::CapExceeded, "tuple enumeration exceeded cap of " + std::to_string(cap));
    if (count == 0) continue;
    for_each_product(lists, [&](const std::vector<const Path*>& choice) {
      PathTuple c{sigma, {}};
      for (const Path* p : choice) c.paths.push_back(*p);
      out.push_back(std::move(c));
    });
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

bool has_intersection(const PathTuple& c) {
  for (std::size_t i = 0; i < c.paths.size(); ++i)
    for (std::size_t j = i + 1; j < c.paths.size(); ++j)
      if (!disjoint(c.paths[i], c.paths[j])) return true;
  return false;
}

PathTuple tail_swap(const PathTuple& c, const PathGraph& g) {
  if (c.sigma.size() != c.paths.size()) fail(ErrorKind::InvalidArgument, "permutation and path count differ");
  for (const Path& p : c.paths) {
    if (p.empty()) fail(ErrorKind::InvalidArgument, "empty path in tuple");
    for (std::size_t k = 1; k < p.size(); ++k) (void)g.weight(p[k - 1], p[k]);
  }

  // Last shared vertex in the graph's total order.
  bool found = false;
  std::size_t last = 0;
  for (std::size_t i = 0; i < c.paths.size(); ++i) {
    for (std::size_t x : c.paths[i]) {
      if (found && g.rank(x) <= g.rank(last)) continue;
      for (std::size_t j = 0; j < c.paths.size(); ++j) {
        if (j == i) continue;
        const Path& q = c.paths[j];
        if (std::find(q.begin(), q.end(), x) != q.end()) {
          found = true;
          last = x;
          break;
        }
      }
    }
  }
  if (!found) fail(ErrorKind::NonIntersecting, "tuple has no intersecting pair of paths");

  std::vector<std::size_t> through;
  for (std::size_t k = 0; k < c.paths.size() && through.size() < 2; ++k) {
    const Path& p = c.paths[k];
    if (std::find(p.begin(), p.end(), last) != p.end()) through.push_back(k);
  }
  const std::size_t i = through[0], j = through[1];
  const Path& pi = c.paths[i];
  const Path& pj = c.paths[j];
  const auto cut_i = std::find(pi.begin(), pi.end(), last) - pi.begin();
  const auto cut_j = std::find(pj.begin(), pj.end(), last) - pj.begin();

  PathTuple out = c;
  out.paths[i].assign(pi.begin(), pi.begin() + cut_i);
  out.paths[i].insert(out.paths[i].end(), pj.begin() + cut_j, pj.end());
  out.paths[j].assign(pj.begin(), pj.begin() + cut_j);
  out.paths[j].insert(out.paths[j].end(), pi.begin() + cut_i, pi.end());
  std::swap(out.sigma[i], out.sigma[j]);
  return out;
}

bool check_compatibility(const PathGraph& g, const std::vector<std::size_t>& sources, const std::vector<std::size_t>& sinks,
                         std::size_t cap) {
  require_same_size(sources, sinks);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (std::size_t j = i + 1; j < sources.size(); ++j) {
      const auto crossed_a = enumerate_paths(g, sources[i], sinks[j], cap);
      const auto crossed_b = enumerate_paths(g, sources[j], sinks[i], cap);
      if (crossed_a.size() != 0 && crossed_b.size() > cap / crossed_a.size())
        fail(ErrorKind::CapExceeded, "compatibility check exceeded cap of " + std::to_string(cap));
      for (const Path& p : crossed_a)
        for (const Path& q : crossed_b)
          if (disjoint(p, q)) return false;
    }
  }
  return true;
}

Path random_path(const PathGraph& g, std::size_t u, std::size_t v, std::mt19937_64& rng) {
  const auto reach = reaches(g, v);
  if (!reach[u]) fail(ErrorKind::Unreachable, g.id(v) + " is not reachable from " + g.id(u));
  Path p{u};
  std::vector<std::size_t> options;
  while (p.back() != v) {
    options.clear();
    for (std::size_t b : g.successors(p.back()))
      if (reach[b]) options.push_back(b);
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    p.push_back(options[pick(rng)]);
  }
  return p;
}

}  // namespace noncollide
