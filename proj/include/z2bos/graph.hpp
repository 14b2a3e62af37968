#pragma once

// Multigraphs with oriented-edge handles and the chain complex
// C2 -> C1 -> C0 over Z2.

#include <algorithm>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "errors.hpp"

namespace z2bos {

struct OrientedEdge {
  std::size_t edge = 0;
  bool reversed = false; // false: file orientation u -> v

  OrientedEdge rev() const { return {edge, !reversed}; }
  friend auto operator<=>(const OrientedEdge&, const OrientedEdge&) = default;
};

using Path = std::vector<OrientedEdge>;

class Graph {
public:
  Graph() = default;
  Graph(std::size_t nv, std::vector<std::pair<std::size_t, std::size_t>> edges,
        std::vector<std::vector<std::size_t>> faces = {},
        std::vector<std::vector<std::size_t>> star_orderings = {})
      : nv_(nv), edges_(std::move(edges)), faces_(std::move(faces)), orderings_(std::move(star_orderings)) {
    if (nv_ == 0) throw GraphError("graph has no vertices");
    star_.assign(nv_, {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      auto [u, v] = edges_[e];
      if (u >= nv_ || v >= nv_)
        throw GraphError("edge " + std::to_string(e) + " references a missing vertex");
      if (u == v) throw GraphError("edge " + std::to_string(e) + " is a self-loop at vertex " + std::to_string(u));
      star_[u].push_back(e);
      star_[v].push_back(e);
    }
    check_connected();
    check_faces();
    check_orderings();
  }

  std::size_t num_vertices() const { return nv_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_faces() const { return faces_.size(); }

  std::pair<std::size_t, std::size_t> endpoints(std::size_t e) const { return edges_.at(e); }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

  std::size_t source(OrientedEdge o) const {
    auto [u, v] = edges_.at(o.edge);
    return o.reversed ? v : u;
  }
  std::size_t target(OrientedEdge o) const {
    auto [u, v] = edges_.at(o.edge);
    return o.reversed ? u : v;
  }
  // Orientation of e that leaves v.
  OrientedEdge leaving(std::size_t e, std::size_t v) const {
    auto [a, b] = edges_.at(e);
    if (a == v) return {e, false};
    if (b == v) return {e, true};
    throw GraphError("edge " + std::to_string(e) + " is not incident to vertex " + std::to_string(v));
  }
  std::size_t other_end(std::size_t e, std::size_t v) const { return target(leaving(e, v)); }
  bool incident(std::size_t e, std::size_t v) const {
    auto [a, b] = edges_.at(e);
    return a == v || b == v;
  }

  const std::vector<std::size_t>& star(std::size_t v) const { return star_.at(v); }
  std::size_t degree(std::size_t v) const { return star_.at(v).size(); }

  bool all_even() const {
    for (std::size_t v = 0; v < nv_; ++v)
      if (degree(v) % 2) return false;
    return true;
  }
  std::vector<std::size_t> odd_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < nv_; ++v)
      if (degree(v) % 2) out.push_back(v);
    return out;
  }

  const std::vector<std::vector<std::size_t>>& faces() const { return faces_; }
  const std::vector<std::size_t>& face(std::size_t f) const { return faces_.at(f); }

  bool has_star_orderings() const { return !orderings_.empty(); }
  const std::vector<std::vector<std::size_t>>& star_orderings() const { return orderings_; }

  Graph with_faces(std::vector<std::vector<std::size_t>> faces) const {
    return Graph(nv_, edges_, std::move(faces), orderings_);
  }
  Graph with_star_orderings(std::vector<std::vector<std::size_t>> orderings) const {
    return Graph(nv_, edges_, faces_, std::move(orderings));
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.nv_ == b.nv_ && a.edges_ == b.edges_ && a.faces_ == b.faces_ && a.orderings_ == b.orderings_;
  }

private:
  void check_connected() const {
    std::vector<bool> seen(nv_, false);
    std::vector<std::size_t> todo{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!todo.empty()) {
      auto v = todo.back();
      todo.pop_back();
      for (auto e : star_[v]) {
        auto w = other_end(e, v);
        if (!seen[w]) {
          seen[w] = true;
          ++count;
          todo.push_back(w);
        }
      }
    }
    if (count != nv_) throw GraphError("graph is not connected");
  }

  void check_faces() const {
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      const auto& fe = faces_[f];
      if (fe.empty()) throw GraphError("face " + std::to_string(f) + " is empty");
      BitVec bd(nv_);
      for (auto e : fe) {
        if (e >= edges_.size()) throw GraphError("face " + std::to_string(f) + " references a missing edge");
        bd.flip(edges_[e].first);
        bd.flip(edges_[e].second);
      }
      if (bd.any()) throw GraphError("face " + std::to_string(f) + " boundary is not closed");
      // the boundary must be a single circuit: its edges form a connected subgraph
      std::vector<bool> reached(fe.size(), false);
      reached[0] = true;
      bool grew = true;
      while (grew) {
        grew = false;
        for (std::size_t i = 0; i < fe.size(); ++i) {
          if (reached[i]) continue;
          for (std::size_t j = 0; j < fe.size(); ++j) {
            if (!reached[j]) continue;
            auto [a, b] = edges_[fe[i]];
            auto [c, d] = edges_[fe[j]];
            if (a == c || a == d || b == c || b == d) {
              reached[i] = grew = true;
              break;
            }
          }
        }
      }
      if (std::find(reached.begin(), reached.end(), false) != reached.end())
        throw GraphError("face " + std::to_string(f) + " boundary is not a single circuit");
    }
  }

  void check_orderings() const {
    if (orderings_.empty()) return;
    if (orderings_.size() != nv_) throw GraphError("star orderings must cover every vertex");
    for (std::size_t v = 0; v < nv_; ++v) {
      auto a = orderings_[v];
      auto b = star_[v];
      std::sort(a.begin(), a.end());
      if (a != b) throw GraphError("star ordering at vertex " + std::to_string(v) + " is not a permutation of its star");
    }
  }

  std::size_t nv_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> faces_;
  std::vector<std::vector<std::size_t>> orderings_;
  std::vector<std::vector<std::size_t>> star_;
};

// ---- chain maps -----------------------------------------------------------

inline BitVec edge_boundary(const Graph& g, std::size_t e) {
  auto [u, v] = g.endpoints(e);
  return BitVec::from_indices(g.num_vertices(), {u, v});
}

inline BitMat boundary_matrix(const Graph& g) {
  BitMat d(g.num_vertices(), g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto [u, v] = g.endpoints(e);
    d.set(u, e);
    d.set(v, e);
  }
  return d;
}

inline BitMat coboundary_matrix(const Graph& g) { return boundary_matrix(g).transpose(); }

inline BitVec boundary(const Graph& g, const BitVec& chain) {
  if (chain.size() != g.num_edges()) throw std::invalid_argument("boundary: not a 1-chain");
  BitVec out(g.num_vertices());
  for (auto e : chain.indices()) {
    auto [u, v] = g.endpoints(e);
    out.flip(u);
    out.flip(v);
  }
  return out;
}

inline BitVec coboundary(const Graph& g, const BitVec& theta) {
  if (theta.size() != g.num_vertices()) throw std::invalid_argument("coboundary: not a 0-cochain");
  BitVec out(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto [u, v] = g.endpoints(e);
    if (theta.get(u) != theta.get(v)) out.set(e);
  }
  return out;
}

inline BitVec zeta(const Graph& g) { return BitVec::ones(g.num_edges()); }

inline BitVec chain_of(const Graph& g, const Path& p) {
  BitVec c(g.num_edges());
  for (auto o : p) c.flip(o.edge);
  return c;
}

inline bool is_walk(const Graph& g, const Path& p) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (g.target(p[i]) != g.source(p[i + 1])) return false;
  return true;
}

inline bool is_circuit(const Graph& g, const Path& p) {
  return !p.empty() && is_walk(g, p) && g.target(p.back()) == g.source(p.front());
}

// ---- spanning tree and the section r --------------------------------------

struct SpanningTree {
  std::vector<std::optional<OrientedEdge>> up; // edge from parent into v
  std::vector<std::size_t> parent;
  std::vector<std::size_t> depth;
  BitVec tree_edges;
};

inline SpanningTree bfs_tree(const Graph& g) {
  const auto n = g.num_vertices();
  SpanningTree t{std::vector<std::optional<OrientedEdge>>(n), std::vector<std::size_t>(n, 0),
                 std::vector<std::size_t>(n, 0), BitVec(g.num_edges())};
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> q{0};
  seen[0] = true;
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    for (auto e : g.star(v)) {
      auto w = g.other_end(e, v);
      if (seen[w]) continue;
      seen[w] = true;
      t.up[w] = g.leaving(e, v);
      t.parent[w] = v;
      t.depth[w] = t.depth[v] + 1;
      t.tree_edges.set(e);
      q.push_back(w);
    }
  }
  return t;
}

// Walk from u to w inside the tree.
inline Path tree_path(const Graph& g, const SpanningTree& t, std::size_t u, std::size_t w) {
  Path down_from_u, down_to_w;
  while (u != w) {
    if (t.depth[u] >= t.depth[w]) {
      down_from_u.push_back(t.up[u]->rev());
      u = t.parent[u];
    } else {
      down_to_w.push_back(*t.up[w]);
      w = t.parent[w];
    }
  }
  (void)g;
  Path p = std::move(down_from_u);
  p.insert(p.end(), down_to_w.rbegin(), down_to_w.rend());
  return p;
}

// r : C0 -> C1, column v = tree path from vertex 0 to v. On B0 it is a
// section of the boundary map.
inline BitMat boundary_section(const Graph& g) {
  auto t = bfs_tree(g);
  std::vector<BitVec> cols;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) cols.push_back(chain_of(g, tree_path(g, t, 0, v)));
  return BitMat::from_columns(g.num_edges(), cols);
}

// ---- cycles ----------------------------------------------------------------

struct CycleBasis {
  std::vector<BitVec> cycles;      // fundamental cycles, one per chord
  std::vector<std::size_t> chords; // the non-tree edge in each cycle
  std::vector<Path> circuits;      // a circuit realising each cycle

  std::size_t size() const { return cycles.size(); }

  // Coordinates of a cycle z in this basis.
  BitVec coordinates(const BitVec& z) const {
    BitVec c(chords.size());
    for (std::size_t k = 0; k < chords.size(); ++k)
      if (z.get(chords[k])) c.set(k);
    return c;
  }
};

inline CycleBasis cycle_basis(const Graph& g) {
  auto t = bfs_tree(g);
  CycleBasis b;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (t.tree_edges.get(e)) continue;
    auto [u, v] = g.endpoints(e);
    Path c = tree_path(g, t, v, u);
    c.insert(c.begin(), OrientedEdge{e, false});
    b.cycles.push_back(chain_of(g, c));
    b.chords.push_back(e);
    b.circuits.push_back(std::move(c));
  }
  return b;
}

// Hierholzer over a multiset of edge uses (an edge may appear repeatedly).
inline Path euler_walk(const Graph& g, const std::vector<std::size_t>& uses, std::size_t start) {
  if (uses.empty()) return {};
  std::vector<std::vector<std::size_t>> adj(g.num_vertices());
  for (std::size_t k = 0; k < uses.size(); ++k) {
    auto [a, b] = g.endpoints(uses[k]);
    adj[a].push_back(k);
    adj[b].push_back(k);
  }
  for (std::size_t v = 0; v < adj.size(); ++v)
    if (adj[v].size() % 2) throw OddDegreeError(v);
  std::vector<bool> used(uses.size(), false);
  std::vector<std::size_t> next(g.num_vertices(), 0);
  std::vector<std::pair<std::size_t, std::optional<OrientedEdge>>> stack{{start, std::nullopt}};
  Path out;
  while (!stack.empty()) {
    auto v = stack.back().first;
    auto& i = next[v];
    while (i < adj[v].size() && used[adj[v][i]]) ++i;
    if (i < adj[v].size()) {
      auto k = adj[v][i];
      used[k] = true;
      auto o = g.leaving(uses[k], v);
      stack.push_back({g.target(o), o});
    } else {
      if (stack.back().second) out.push_back(*stack.back().second);
      stack.pop_back();
    }
  }
  if (out.size() != uses.size()) throw GraphError("edge uses do not form a connected closed walk");
  std::reverse(out.begin(), out.end());
  return out;
}

inline Path eulerian_circuit(const Graph& g, std::size_t start = 0) {
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    if (g.degree(v) % 2) throw OddDegreeError(v);
  std::vector<std::size_t> uses(g.num_edges());
  for (std::size_t e = 0; e < uses.size(); ++e) uses[e] = e;
  return euler_walk(g, uses, start);
}

// A circuit whose class is the cycle z. Components of z are joined to
// vertex 0 by tree paths walked there and back, which leaves the class
// unchanged.
inline Path circuit_from_cycle(const Graph& g, const BitVec& z) {
  if (boundary(g, z).any()) throw GraphError("chain is not closed");
  auto edges = z.indices();
  if (edges.empty()) return {};
  // components of the support
  const auto n = g.num_vertices();
  std::vector<std::size_t> comp(n, n);
  std::vector<std::size_t> reps;
  std::vector<std::vector<std::size_t>> nbr(n);
  for (auto e : edges) {
    auto [a, b] = g.endpoints(e);
    nbr[a].push_back(b);
    nbr[b].push_back(a);
  }
  for (auto e : edges) {
    auto s = g.endpoints(e).first;
    if (comp[s] != n) continue;
    auto id = reps.size();
    reps.push_back(s);
    std::vector<std::size_t> todo{s};
    comp[s] = id;
    while (!todo.empty()) {
      auto v = todo.back();
      todo.pop_back();
      for (auto w : nbr[v])
        if (comp[w] == n) {
          comp[w] = id;
          todo.push_back(w);
        }
    }
  }
  std::vector<std::size_t> uses = edges;
  std::size_t start = reps.front();
  if (reps.size() > 1) {
    auto t = bfs_tree(g);
    start = 0;
    for (auto r : reps)
      for (auto o : tree_path(g, t, 0, r)) {
        uses.push_back(o.edge);
        uses.push_back(o.edge);
      }
  }
  return euler_walk(g, uses, start);
}

// A random closed walk through `start`: random steps, then home along the tree.
template <class Rng>
Path random_circuit(const Graph& g, Rng& rng, std::size_t steps, std::size_t start = 0) {
  Path p;
  std::size_t v = start;
  for (std::size_t k = 0; k < steps; ++k) {
    const auto& st = g.star(v);
    if (st.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, st.size() - 1);
    auto o = g.leaving(st[pick(rng)], v);
    p.push_back(o);
    v = g.target(o);
  }
  if (v != start) {
    auto back = tree_path(g, bfs_tree(g), v, start);
    p.insert(p.end(), back.begin(), back.end());
  }
  if (p.empty()) {
    auto o = g.leaving(g.star(start).at(0), start);
    p = {o, o.rev()};
  }
  return p;
}

// ---- faces and homology ----------------------------------------------------

inline BitVec face_boundary(const Graph& g, std::size_t f) {
  return BitVec::from_indices(g.num_edges(), g.face(f));
}

inline BitMat face_boundary_matrix(const Graph& g) {
  std::vector<BitVec> cols;
  for (std::size_t f = 0; f < g.num_faces(); ++f) cols.push_back(face_boundary(g, f));
  return BitMat::from_columns(g.num_edges(), cols);
}

inline BitVec boundary2(const Graph& g, const BitVec& xi) { return face_boundary_matrix(g).mul(xi); }

// Some 2-chain with boundary z, if z is in B1.
inline std::optional<BitVec> bounding_chain(const Graph& g, const BitVec& z) {
  if (g.num_faces() == 0) {
    if (z.none()) return BitVec(0);
    return std::nullopt;
  }
  return face_boundary_matrix(g).solve(z);
}

inline bool is_face_boundary(const Graph& g, const BitVec& z) { return bounding_chain(g, z).has_value(); }

// Representatives of a basis of Z1/B1.
inline std::vector<BitVec> homology_basis(const Graph& g) {
  GF2Span span(g.num_edges());
  for (std::size_t f = 0; f < g.num_faces(); ++f) span.add(face_boundary(g, f));
  std::vector<BitVec> reps;
  for (const auto& c : cycle_basis(g).cycles)
    if (span.add(c)) reps.push_back(c);
  return reps;
}

} // namespace z2bos
