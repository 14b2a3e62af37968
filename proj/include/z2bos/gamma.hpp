#pragma once

// The Gamma model. Vertex v owns deg(v)/2 qubits ((deg+1)/2 when the degree
// is odd) and the Clifford generators at v are the local Jordan-Wigner
// Majoranas c_0, c_1, ... in the order fixed by the vertex's star ordering:
// Gamma(v, e) = c_{pos(e)}. For even degree Gamma*(v) = i^n c_0 ... c_{2n-1}
// is then a pure Z string; for odd degree Gamma*(v) is the spare Majorana
// c_deg.

#include <map>
#include <optional>

#include "fermi.hpp"
#include "spectrum.hpp"

namespace z2bos {

struct OrderingChoice {
  std::vector<std::vector<std::size_t>> order; // per vertex, a permutation of St(v)
  BitVec eta;                                  // Gamma*(v) picks up (-1)^(eta, v)
};

// Ordering read off an Eulerian circuit: at each visit to v the incoming
// edge, then the outgoing one. That alone gives alpha = 1 only when every
// edge is oriented along the circuit; each edge the circuit runs against
// its file orientation flips S(circuit), so an odd count is absorbed into
// eta at vertex 0.
inline OrderingChoice eulerian_ordering(const Graph& g, std::size_t start = 0) {
  auto c = eulerian_circuit(g, start);
  OrderingChoice ch{std::vector<std::vector<std::size_t>>(g.num_vertices()), BitVec(g.num_vertices())};
  std::size_t against = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    auto prev = c[(j + c.size() - 1) % c.size()];
    auto v = g.source(c[j]);
    ch.order[v].push_back(prev.edge);
    ch.order[v].push_back(c[j].edge);
    against += c[j].reversed;
  }
  if (against % 2) ch.eta.flip(0);
  return ch;
}

inline OrderingChoice edge_index_ordering(const Graph& g) {
  OrderingChoice ch{{}, BitVec(g.num_vertices())};
  for (std::size_t v = 0; v < g.num_vertices(); ++v) ch.order.push_back(g.star(v));
  return ch;
}

// File orderings when given, else the Eulerian construction, else (odd
// degrees present) edge-index order.
inline OrderingChoice default_ordering(const Graph& g) {
  if (g.has_star_orderings()) return {g.star_orderings(), BitVec(g.num_vertices())};
  if (g.all_even()) return eulerian_ordering(g);
  return edge_index_ordering(g);
}

// Sector label [A]: the values (A, z_k) on the fundamental cycles.
struct SectorLabel {
  BitVec bits;
  friend auto operator<=>(const SectorLabel&, const SectorLabel&) = default;
  std::string str() const { return bits.str(); }
};

class GammaModel {
public:
  GammaModel(const Graph& g, OrderingChoice choice) : g_(g), choice_(std::move(choice)), basis_(cycle_basis(g)) {
    const auto nv = g_.num_vertices();
    if (g_.num_edges() == 0) throw GraphError("the Gamma model needs at least one edge");
    if (choice_.order.size() != nv || choice_.eta.size() != nv) throw GraphError("ordering choice does not match the graph");
    offset_.resize(nv);
    width_.resize(nv);
    pos_.resize(nv);
    std::size_t q = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      auto sorted = choice_.order[v];
      std::sort(sorted.begin(), sorted.end());
      if (sorted != g_.star(v)) throw GraphError("ordering at vertex " + std::to_string(v) + " is not a permutation of its star");
      offset_[v] = q;
      width_[v] = (g_.degree(v) + 1) / 2;
      q += width_[v];
      for (std::size_t k = 0; k < choice_.order[v].size(); ++k) pos_[v][choice_.order[v][k]] = k;
    }
    nq_ = q;
  }

  explicit GammaModel(const Graph& g) : GammaModel(g, default_ordering(g)) {}

  // Default ordering, with eta = {0} added when that is needed to reach
  // the requested alpha.
  static GammaModel with_alpha(const Graph& g, int alpha) {
    GammaModel m(g);
    if (m.alpha() != alpha) {
      auto ch = m.choice_;
      ch.eta.flip(0);
      return GammaModel(g, ch);
    }
    return m;
  }

  const Graph& graph() const { return g_; }
  const OrderingChoice& choice() const { return choice_; }
  const CycleBasis& cycles() const { return basis_; }
  std::size_t num_qubits() const { return nq_; }
  std::size_t offset(std::size_t v) const { return offset_.at(v); }
  std::size_t width(std::size_t v) const { return width_.at(v); }

  // Local Majorana c_k at vertex v.
  PauliTerm local_majorana(std::size_t v, std::size_t k) const {
    if (k >= 2 * width_.at(v)) throw std::out_of_range("local Majorana index out of range");
    PauliTerm t(nq_);
    for (std::size_t j = 0; j < k / 2; ++j) t *= PauliTerm::single(nq_, offset_[v] + j, 'Z');
    return t * PauliTerm::single(nq_, offset_[v] + k / 2, k % 2 ? 'Y' : 'X');
  }

  PauliTerm gamma(std::size_t v, std::size_t e) const {
    auto it = pos_.at(v).find(e);
    if (it == pos_[v].end()) throw GraphError("edge " + std::to_string(e) + " is not in the star of vertex " + std::to_string(v));
    return local_majorana(v, it->second);
  }

  PauliTerm gamma_star(std::size_t v) const {
    PauliTerm t(nq_);
    const auto d = g_.degree(v);
    if (d % 2) {
      t = local_majorana(v, d);
    } else {
      for (auto e : choice_.order[v]) t *= gamma(v, e);
      t = t.times_i(static_cast<int>(d / 2));
    }
    return choice_.eta.get(v) ? -t : t;
  }

  PauliTerm kinetic(OrientedEdge e) const {
    auto [s, t] = g_.endpoints(e.edge);
    auto S = (gamma(s, e.edge) * gamma(t, e.edge)).times_i(3);
    return e.reversed ? -S : S;
  }

  PauliTerm path_S(const Path& p) const {
    if (!is_walk(g_, p)) throw GraphError("not a path");
    PauliTerm t(nq_);
    for (auto o : p) t *= kinetic(o);
    return t;
  }

  PauliTerm circuit_S(const Path& p) const {
    if (!is_circuit(g_, p)) throw GraphError("not a circuit");
    return path_S(p);
  }

  PauliTerm total_parity() const {
    PauliTerm t(nq_);
    for (std::size_t v = 0; v < g_.num_vertices(); ++v) t *= gamma_star(v);
    return t;
  }

  // S(Euler) = (-1)^alpha prod Gamma*(v).
  int alpha(std::size_t start = 0) const {
    if (!g_.all_even()) throw OddDegreeError(g_.odd_vertices().front());
    auto r = circuit_S(eulerian_circuit(g_, start)) * total_parity();
    if (!r.is_scalar() || r.phase() % 2) throw RelationError("Eulerian circuit operator is not proportional to the total parity");
    return r.phase() / 2;
  }

  // O(tau) = prod_e Gamma(s(e), e)^(tau, e), file orientation, ascending edges.
  PauliTerm O(const BitVec& tau) const {
    PauliTerm t(nq_);
    for (auto e : tau.indices()) t *= gamma(g_.endpoints(e).first, e);
    return t;
  }

  // T(theta) = [prod Gamma*(v)^(d theta, v)] [prod S(e)^(theta, e)].
  PauliTerm T(const BitVec& theta) const {
    PauliTerm t(nq_);
    for (auto v : boundary(g_, theta).indices()) t *= gamma_star(v);
    for (auto e : theta.indices()) t *= kinetic({e, false});
    return t;
  }

  // ---- sectors ----

  SectorLabel label_of(const BitVec& A) const {
    BitVec b(basis_.size());
    for (std::size_t k = 0; k < basis_.size(); ++k)
      if (dot(A, basis_.cycles[k])) b.set(k);
    return {b};
  }

  // A cochain in the class with the given label, supported on chords.
  BitVec cochain_of(const SectorLabel& l) const {
    BitVec A(g_.num_edges());
    for (auto k : l.bits.indices()) A.set(basis_.chords[k]);
    return A;
  }

  std::vector<SectorLabel> all_labels() const {
    if (basis_.size() > 24) throw SizeBoundError("gamma", "too many sectors to enumerate");
    std::vector<SectorLabel> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << basis_.size()); ++m)
      out.push_back({BitVec::from_word(basis_.size(), m)});
    return out;
  }

  std::vector<Constraint> sector_constraints(const SectorLabel& l) const {
    std::vector<Constraint> cs;
    for (std::size_t k = 0; k < basis_.size(); ++k)
      cs.push_back({circuit_S(basis_.circuits[k]), l.bits.get(k) ? -1 : 1});
    return cs;
  }

  // dim H_[A] from the rank of the signed constraint group.
  std::size_t sector_dimension_by_rank(const SectorLabel& l) const {
    auto grp = make_group(nq_, sector_constraints(l));
    auto d = grp.log2_dimension();
    if (!d) return 0;
    if (*d >= 63) throw SizeBoundError("gamma", "sector dimension overflows");
    return std::size_t{1} << *d;
  }

  std::size_t sector_dimension_exhaustive(const SectorLabel& l) const {
    return z2bos::sector_dimension_exhaustive(nq_, sector_constraints(l));
  }

  // Label of a state lying in one sector; throws for a mixed state.
  SectorLabel sector_label(const SparseState& psi, double tol = 1e-9) const {
    BitVec b(basis_.size());
    double nn = psi.norm2();
    if (nn == 0) throw Error("sector_label: zero state");
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      auto phi = apply(circuit_S(basis_.circuits[k]), psi);
      if (distance_inf(phi, psi) <= tol) continue;
      if (distance_inf(phi, -1.0 * psi) <= tol) {
        b.set(k);
        continue;
      }
      throw RelationError("mixed-sector state: not an eigenvector of the circuit operator for cycle " + std::to_string(k));
    }
    return {b};
  }

  // prod Gamma* eigenvalue equals (-1)^(alpha + ([A], zeta)).
  bool parity_flux_check(const SparseState& psi, double tol = 1e-9) const {
    auto l = sector_label(psi, tol);
    int want = (alpha() + static_cast<int>(dot(cochain_of(l), zeta(g_)))) % 2;
    auto phi = apply(total_parity(), psi);
    return distance_inf(phi, (want ? -1.0 : 1.0) * psi) <= tol;
  }

  // ---- bosonization ----

  // gamma(v) -> Gamma*(v), s(e) -> (-1)^(A, e) S(e).
  PauliTerm bosonize(const Word& w, const BitVec& A) const {
    PauliTerm t(nq_);
    for (const auto& tok : w) {
      if (auto* gt = std::get_if<GammaToken>(&tok)) {
        t *= gamma_star(gt->v);
      } else {
        auto e = std::get<KineticToken>(tok).e;
        auto S = kinetic(e);
        t *= A.get(e.edge) ? -S : S;
      }
    }
    return t;
  }
  PauliTerm bosonize(const EvenAlgebra& alg, const EvenWord& w, const BitVec& A) const {
    return bosonize(alg.spell(w), A).times_i(w.phase);
  }
  // A fermion-even operator on the Fock register, term by term.
  PauliSum bosonize(const EvenAlgebra& alg, const PauliSum& h, const BitVec& A) const {
    PauliSum out(nq_);
    for (const auto& [c, t] : h.terms()) out.add(bosonize(alg, alg.from_pauli(t), A), c);
    return out;
  }

  // ---- odd-degree extension ----

  // Gamma*(v) times all Gamma(v, e) in ordering order.
  PauliTerm chirality(std::size_t v) const {
    PauliTerm t = gamma_star(v);
    for (auto e : choice_.order[v]) t *= gamma(v, e);
    return t;
  }

  PauliTerm psi_path(const Path& p) const {
    if (p.empty() || !is_walk(g_, p)) throw GraphError("not a path");
    auto v = g_.source(p.front()), w = g_.target(p.back());
    if (g_.degree(v) % 2 == 0 || g_.degree(w) % 2 == 0) throw GraphError("path endpoints must have odd degree");
    int k = static_cast<int>((g_.degree(v) + g_.degree(w)) / 2 + 1);
    return (chirality(v) * path_S(p) * chirality(w)).times_i(k);
  }

  std::size_t predicted_sector_dimension() const {
    auto odd = g_.odd_vertices().size();
    return std::size_t{1} << (g_.num_vertices() - 1 + odd / 2);
  }

private:
  Graph g_;
  OrderingChoice choice_;
  CycleBasis basis_;
  std::vector<std::size_t> offset_, width_;
  std::vector<std::map<std::size_t, std::size_t>> pos_;
  std::size_t nq_ = 0;
};

inline EvenImages gamma_images(const GammaModel& m) {
  return {m.num_qubits(), [&m](std::size_t v) { return m.gamma_star(v); },
          [&m](OrientedEdge e) { return m.kinetic(e); }};
}

// Relations of the even algebra in the Gamma model, plus the circuit
// operators: hermitian involutions, central, and determined by the cycle
// class of the circuit.
inline CheckLedger verify_gamma_relations(const GammaModel& m, std::size_t random_circuits = 50, std::uint64_t seed = 1) {
  const auto& g = m.graph();
  auto L = check_even_relations(g, gamma_images(m));
  const auto n = m.num_qubits();

  auto& cl = L.open("clifford-local", "Gamma(v,e)^2 = 1, distinct generators anticommute at v, commute across vertices");
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::vector<PauliTerm> gens;
    for (auto e : g.star(v)) gens.push_back(m.gamma(v, e));
    gens.push_back(m.gamma_star(v));
    for (std::size_t i = 0; i < gens.size(); ++i) {
      CheckLedger::tally(cl, (gens[i] * gens[i]).is_identity(), [&] { return "square at vertex " + std::to_string(v); });
      for (std::size_t j = i + 1; j < gens.size(); ++j)
        CheckLedger::tally(cl, commutes(gens[i], gens[j]) == 1, [&] { return "anticommutation at vertex " + std::to_string(v); });
    }
  }
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto [s, t] = g.endpoints(e);
    for (std::size_t f = 0; f < g.num_edges(); ++f) {
      if (!g.incident(f, t)) continue;
      CheckLedger::tally(cl, commute(m.gamma(s, e), m.gamma(t, f)), [&] { return "cross-vertex at edges " + std::to_string(e) + "," + std::to_string(f); });
    }
  }

  std::vector<PauliTerm> S;
  for (std::size_t e = 0; e < g.num_edges(); ++e) S.push_back(m.kinetic({e, false}));
  std::vector<PauliTerm> G;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) G.push_back(m.gamma_star(v));

  auto& cc = L.open("circuit-central", "S(l) hermitian, S(l)^2 = 1, commutes with all Gamma*(v) and S(e)");
  const auto& cb = m.cycles();
  std::vector<PauliTerm> basisS;
  for (std::size_t k = 0; k < cb.size(); ++k) {
    auto s = m.circuit_S(cb.circuits[k]);
    basisS.push_back(s);
    bool ok = s.is_hermitian() && (s * s).is_identity();
    for (const auto& x : S) ok = ok && commute(s, x);
    for (const auto& x : G) ok = ok && commute(s, x);
    CheckLedger::tally(cc, ok, [&] { return "basis circuit " + std::to_string(k); });
  }

  auto& lc = L.open("circuit-class", "S(l) equals the product of basis circuit operators for its cycle class");
  auto circuits = test_circuits(g, random_circuits, seed);
  for (std::size_t k = cb.size(); k < circuits.size(); ++k) {
    auto s = m.circuit_S(circuits[k]);
    auto coords = cb.coordinates(chain_of(g, circuits[k]));
    PauliTerm prod(n);
    for (auto i : coords.indices()) prod *= basisS[i];
    CheckLedger::tally(lc, s == prod, [&] { return "random circuit of length " + std::to_string(circuits[k].size()); });
  }

  auto& oi = L.open("sector-intertwiner", "O(tau) S(l) = (-1)^(tau, l) S(l) O(tau)");
  std::mt19937_64 rng(seed + 17);
  for (int trial = 0; trial < 20; ++trial) {
    BitVec tau(g.num_edges());
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      if (rng() & 1u) tau.set(e);
    auto o = m.O(tau);
    for (std::size_t k = 0; k < cb.size(); ++k)
      CheckLedger::tally(oi, commutes(o, basisS[k]) == static_cast<int>(dot(tau, cb.cycles[k])),
                         [&] { return "tau " + tau.str() + ", cycle " + std::to_string(k); });
  }
  return L;
}

// Psi(l) for open paths between odd vertices, on random walks: squares to
// -1, commutes with the even algebra, concatenates to Psi or to S of the
// closed walk, and braids by the pairing of endpoint sets.
inline CheckLedger verify_odd_extension(const GammaModel& m, std::size_t walks = 100, std::uint64_t seed = 1) {
  const auto& g = m.graph();
  CheckLedger L;
  auto& sq = L.open("psi-square", "Psi(l)^2 = -1");
  auto& ev = L.open("psi-even", "Psi(l) commutes with every S(e) and Gamma*(v)");
  auto& cat = L.open("psi-concat", "Psi(l1) Psi(l2) = Psi(l1 l2), or S(l1 l2) when closed");
  auto& br = L.open("psi-braid", "Psi(l1), Psi(l2) anticommute iff (dl1, dl2) = 1");
  if (g.all_even()) return L;
  const auto n = m.num_qubits();
  std::mt19937_64 rng(seed);
  auto walk = [&](std::size_t from, std::size_t steps) {
    Path p;
    std::size_t v = from;
    for (std::size_t k = 0; k < steps; ++k) {
      auto e = g.star(v)[rng() % g.degree(v)];
      p.push_back(g.leaving(e, v));
      v = g.other_end(e, v);
    }
    return p;
  };
  auto odd = [&](std::size_t v) { return g.degree(v) % 2 == 1; };
  auto odd_walk = [&](std::size_t from) -> std::optional<Path> {
    for (int tries = 0; tries < 64; ++tries) {
      auto p = walk(from, 1 + rng() % 6);
      if (odd(g.target(p.back())) && g.target(p.back()) != from) return p;
    }
    return std::nullopt;
  };
  auto ov = g.odd_vertices();
  for (std::size_t k = 0; k < walks; ++k) {
    auto p1 = odd_walk(ov[rng() % ov.size()]);
    if (!p1) continue;
    auto mid = g.target(p1->back());
    auto p2 = odd_walk(mid);
    if (!p2) continue;
    auto a = m.psi_path(*p1), b = m.psi_path(*p2);
    auto where = [&] { return "walk " + std::to_string(k); };
    CheckLedger::tally(sq, a * a == -PauliTerm::identity(n), where);
    bool ok = true;
    for (std::size_t e = 0; e < g.num_edges(); ++e) ok = ok && commute(a, m.kinetic({e, false}));
    for (std::size_t v = 0; v < g.num_vertices(); ++v) ok = ok && commute(a, m.gamma_star(v));
    CheckLedger::tally(ev, ok, where);
    Path both = *p1;
    both.insert(both.end(), p2->begin(), p2->end());
    auto want = g.source(p1->front()) == g.target(p2->back()) ? m.circuit_S(both) : m.psi_path(both);
    CheckLedger::tally(cat, a * b == want, where);
    auto b1 = boundary(g, chain_of(g, *p1)), b2 = boundary(g, chain_of(g, *p2));
    CheckLedger::tally(br, commutes(a, b) == static_cast<int>(dot(b1, b2)), where);
  }
  return L;
}

} // namespace z2bos
