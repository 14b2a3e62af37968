#pragma once

// Fermions on the vertices of a graph, one Jordan-Wigner qubit per vertex
// in file order. The even algebra is generated by gamma(v) = Z_v and
// s(e) = X(s(e)) X(t(e)); EvenAlgebra reduces words in those generators to
// a normal form using only the braiding rules, s(e)^2 = -1, s(ebar) = -s(e)
// and the loop relation.

#include <functional>
#include <random>
#include <variant>

#include "checks.hpp"
#include "graph.hpp"
#include "pauli.hpp"

namespace z2bos {

// ---- Fock register ---------------------------------------------------------

inline PauliTerm majorana(std::size_t n, std::size_t v, char kind) {
  if (v >= n) throw std::out_of_range("majorana: vertex out of range");
  if (kind != 'X' && kind != 'Y') throw std::invalid_argument("majorana: kind must be X or Y");
  PauliTerm t(n);
  for (std::size_t w = 0; w < v; ++w) t = t * PauliTerm::single(n, w, 'Z');
  return t * PauliTerm::single(n, v, kind);
}

// phi(v) = Z_{<v} (X_v + i Y_v)/2 kills |0>.
inline PauliSum annihilator(std::size_t n, std::size_t v) {
  PauliSum s(n);
  s.add(majorana(n, v, 'X'), 0.5);
  s.add(majorana(n, v, 'Y'), cd(0, 0.5));
  return s;
}
inline PauliSum creator(std::size_t n, std::size_t v) { return annihilator(n, v).adjoint(); }

inline PauliTerm parity_op(std::size_t n, std::size_t v) {
  return (majorana(n, v, 'X') * majorana(n, v, 'Y')).times_i(3);
}

inline PauliTerm grading(std::size_t n) {
  PauliTerm g(n);
  for (std::size_t v = 0; v < n; ++v) g *= parity_op(n, v);
  return g;
}

inline PauliTerm kinetic_op(const Graph& g, OrientedEdge e) {
  const auto n = g.num_vertices();
  return majorana(n, g.source(e), 'X') * majorana(n, g.target(e), 'X');
}

inline PauliTerm gamma_of(std::size_t n, const BitVec& eps) {
  PauliTerm t(n);
  for (auto v : eps.indices()) t *= parity_op(n, v);
  return t;
}

// Product of kinetic images along a path, in path order.
inline PauliTerm path_product(std::size_t n, const Path& p, const std::function<PauliTerm(OrientedEdge)>& s) {
  PauliTerm t(n);
  for (auto o : p) t *= s(o);
  return t;
}

// [V : F_alpha] for V = F_beta, by the trace formula.
inline double fock_multiplicity(std::size_t n, int alpha, int beta) {
  double tr = 0;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    int parity = std::popcount(b) & 1;
    if (parity != beta) continue;
    tr += 0.5 * (1 + ((parity ^ alpha) ? -1 : 1));
  }
  return tr / static_cast<double>(std::uint64_t{1} << (n - 1));
}

// ---- words and normal form -------------------------------------------------

struct GammaToken {
  std::size_t v;
};
struct KineticToken {
  OrientedEdge e;
};
using Token = std::variant<GammaToken, KineticToken>;
using Word = std::vector<Token>;

// i^phase gamma(eps) s(r beta); gamma in ascending vertex order, s(tau) in
// ascending edge order with file orientations.
struct EvenWord {
  int phase = 0;
  BitVec eps;
  BitVec beta;
  friend bool operator==(const EvenWord&, const EvenWord&) = default;
};

class EvenAlgebra {
public:
  explicit EvenAlgebra(const Graph& g) : g_(g), r_(boundary_section(g)) {}

  const Graph& graph() const { return g_; }
  const BitMat& section() const { return r_; }

  EvenWord identity() const { return {0, BitVec(g_.num_vertices()), BitVec(g_.num_vertices())}; }

  EvenWord normal_form(const Word& w) const {
    Raw raw = empty();
    for (const auto& t : w) push(raw, t);
    return reduce(std::move(raw));
  }

  EvenWord multiply(const EvenWord& a, const EvenWord& b) const {
    Raw raw{a.phase, a.eps, r_.mul(a.beta).indices()};
    for (auto v : b.eps.indices()) push_gamma(raw, v);
    for (auto e : r_.mul(b.beta).indices()) push_kinetic(raw, {e, false});
    raw.phase += b.phase;
    return reduce(std::move(raw));
  }

  // The canonical word spelled out as tokens.
  Word spell(const EvenWord& w) const {
    Word out;
    for (auto v : w.eps.indices()) out.push_back(GammaToken{v});
    for (auto e : r_.mul(w.beta).indices()) out.push_back(KineticToken{{e, false}});
    return out;
  }

  // Realisation on the Fock register.
  PauliTerm to_pauli(const EvenWord& w) const { return word_to_pauli(spell(w)).times_i(w.phase); }

  // Inverse of to_pauli: a Fock string reads as Majorana content X^a Y^b,
  // with b_v = z_v + sum_{w>v} x_w and a = x + b; then eps = b, beta = x.
  // Throws for fermion-odd strings.
  EvenWord from_pauli(const PauliTerm& t) const {
    const auto n = g_.num_vertices();
    if (t.num_qubits() != n) throw std::invalid_argument("from_pauli: register size mismatch");
    if (t.x().popcount() % 2) throw RelationError("from_pauli: fermion-odd operator " + t.str());
    BitVec b(n);
    bool tail = false;
    for (std::size_t v = n; v-- > 0;) {
      if (t.z().get(v) != tail) b.set(v);
      tail ^= t.x().get(v);
    }
    EvenWord w{0, b, t.x()};
    auto base = to_pauli(w);
    if (base.x() != t.x() || base.z() != t.z()) throw RelationError("from_pauli: mask mismatch");
    w.phase = ((t.phase() - base.phase()) % 4 + 4) % 4;
    return w;
  }

  PauliTerm word_to_pauli(const Word& w) const {
    const auto n = g_.num_vertices();
    PauliTerm t(n);
    for (const auto& tok : w) {
      if (auto* gt = std::get_if<GammaToken>(&tok)) t *= parity_op(n, gt->v);
      else t *= kinetic_op(g_, std::get<KineticToken>(tok).e);
    }
    return t;
  }

private:
  struct Raw {
    int phase = 0;
    BitVec eps;
    std::vector<std::size_t> tau; // sorted
  };

  Raw empty() const { return {0, BitVec(g_.num_vertices()), {}}; }

  void push(Raw& raw, const Token& t) const {
    if (auto* gt = std::get_if<GammaToken>(&t)) push_gamma(raw, gt->v);
    else push_kinetic(raw, std::get<KineticToken>(t).e);
  }

  void push_gamma(Raw& raw, std::size_t v) const {
    if (v >= g_.num_vertices()) throw std::out_of_range("gamma token: vertex out of range");
    std::size_t incid = 0;
    for (auto e : raw.tau) incid += g_.incident(e, v) ? 1 : 0;
    if (incid % 2) raw.phase += 2;
    raw.eps.flip(v);
  }

  static bool braid(const Graph& g, std::size_t a, std::size_t b) {
    return dot(edge_boundary(g, a), edge_boundary(g, b));
  }

  void push_kinetic(Raw& raw, OrientedEdge f) const {
    if (f.edge >= g_.num_edges()) throw std::out_of_range("kinetic token: edge out of range");
    if (f.reversed) raw.phase += 2;
    auto it = std::lower_bound(raw.tau.begin(), raw.tau.end(), f.edge);
    for (auto jt = it; jt != raw.tau.end(); ++jt)
      if (*jt != f.edge && braid(g_, *jt, f.edge)) raw.phase += 2;
    if (it != raw.tau.end() && *it == f.edge) {
      raw.phase += 2;
      raw.tau.erase(it);
    } else {
      raw.tau.insert(it, f.edge);
    }
  }

  EvenWord reduce(Raw raw) const {
    BitVec tau = BitVec::from_indices(g_.num_edges(), raw.tau);
    BitVec beta = boundary(g_, tau);
    BitVec rho = r_.mul(beta);
    BitVec z = tau + rho;
    // s(rho) s(z) = i^c1 s(tau)
    Raw a{0, BitVec(g_.num_vertices()), rho.indices()};
    for (auto e : z.indices()) push_kinetic(a, {e, false});
    if (a.tau != raw.tau) throw RelationError("normal form: cycle split did not reassemble the chain");
    // s(circuit) = i^c2 s(z) and the loop relation sets s(circuit) = 1
    Raw b = empty();
    for (auto o : circuit_from_cycle(g_, z)) push_kinetic(b, o);
    int phase = raw.phase - a.phase - b.phase;
    return {((phase % 4) + 4) % 4, std::move(raw.eps), std::move(beta)};
  }

  Graph g_;
  BitMat r_;
};

// ---- relation sweeps ---------------------------------------------------------

// Images of the even generators in some operator algebra.
struct EvenImages {
  std::size_t num_qubits = 0;
  std::function<PauliTerm(std::size_t)> parity;
  std::function<PauliTerm(OrientedEdge)> kinetic;
};

inline EvenImages fock_images(const Graph& g) {
  const auto n = g.num_vertices();
  return {n, [n](std::size_t v) { return parity_op(n, v); }, [g](OrientedEdge e) { return kinetic_op(g, e); }};
}

// The braiding and involution relations among gamma(v) and s(e).
inline CheckLedger check_even_relations(const Graph& g, const EvenImages& im) {
  CheckLedger L;
  const auto n = im.num_qubits;
  const auto nv = g.num_vertices(), ne = g.num_edges();
  std::vector<PauliTerm> gv, se;
  for (std::size_t v = 0; v < nv; ++v) gv.push_back(im.parity(v));
  for (std::size_t e = 0; e < ne; ++e) se.push_back(im.kinetic({e, false}));

  auto& inv = L.open("parity-involution", "gamma(v) = gamma(v)* = gamma(v)^-1");
  for (std::size_t v = 0; v < nv; ++v)
    CheckLedger::tally(inv, gv[v].is_hermitian() && (gv[v] * gv[v]).is_identity(),
                       [&] { return "vertex " + std::to_string(v); });
  auto& pc = L.open("parity-commute", "gamma(v) gamma(v') = gamma(v') gamma(v)");
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t w = v + 1; w < nv; ++w)
      CheckLedger::tally(pc, commute(gv[v], gv[w]), [&] { return "vertices " + std::to_string(v) + "," + std::to_string(w); });

  auto& kin = L.open("kinetic-involution", "-s(e) = s(ebar) = s(e)* = s(e)^-1");
  for (std::size_t e = 0; e < ne; ++e) {
    auto rev = im.kinetic({e, true});
    bool ok = rev == -se[e] && se[e].adjoint() == -se[e] && (se[e] * se[e]) == -PauliTerm::identity(n);
    CheckLedger::tally(kin, ok, [&] { return "edge " + std::to_string(e); });
  }
  auto& kb = L.open("kinetic-braiding", "s(e) s(e') = (-1)^(de,de') s(e') s(e)");
  for (std::size_t e = 0; e < ne; ++e)
    for (std::size_t f = e + 1; f < ne; ++f) {
      int want = dot(edge_boundary(g, e), edge_boundary(g, f));
      CheckLedger::tally(kb, commutes(se[e], se[f]) == want,
                         [&] { return "edges " + std::to_string(e) + "," + std::to_string(f); });
    }
  auto& mb = L.open("parity-kinetic-braiding", "gamma(v) s(e) = (-1)^(de,v) s(e) gamma(v)");
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t e = 0; e < ne; ++e) {
      int want = g.incident(e, v) ? 1 : 0;
      CheckLedger::tally(mb, commutes(gv[v], se[e]) == want,
                         [&] { return "vertex " + std::to_string(v) + ", edge " + std::to_string(e); });
    }
  return L;
}

// Circuits used for loop-type checks: the fundamental cycle basis plus
// random closed walks.
inline std::vector<Path> test_circuits(const Graph& g, std::size_t random_count, std::uint64_t seed) {
  std::vector<Path> out = cycle_basis(g).circuits;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> start(0, g.num_vertices() - 1);
  std::uniform_int_distribution<std::size_t> len(1, 3 * g.num_edges() + 2);
  for (std::size_t k = 0; k < random_count; ++k) out.push_back(random_circuit(g, rng, len(rng), start(rng)));
  return out;
}

inline void check_loop_relation(CheckLedger& L, const Graph& g, const EvenImages& im, const std::vector<Path>& circuits) {
  auto& rec = L.open("loop-relation", "s(e1) ... s(en) = 1 for circuits");
  for (std::size_t k = 0; k < circuits.size(); ++k) {
    bool ok = is_circuit(g, circuits[k]) && path_product(im.num_qubits, circuits[k], im.kinetic).is_identity();
    CheckLedger::tally(rec, ok, [&] { return "circuit #" + std::to_string(k) + " of length " + std::to_string(circuits[k].size()); });
  }
}

struct FermiOptions {
  std::size_t random_circuits = 50;
  std::uint64_t seed = 1;
  // deliberately corrupt s(e) on this edge (fault injection)
  std::optional<std::size_t> flip_edge;
};

inline CheckLedger verify_even_relations(const Graph& g, const FermiOptions& opt = {}) {
  auto im = fock_images(g);
  if (opt.flip_edge) {
    auto base = im.kinetic;
    auto f = *opt.flip_edge;
    im.kinetic = [base, f](OrientedEdge e) { return e.edge == f ? -base(e) : base(e); };
  }
  auto L = check_even_relations(g, im);
  check_loop_relation(L, g, im, test_circuits(g, opt.random_circuits, opt.seed));
  return L;
}

// CAR relations for phi built from Majoranas.
inline CheckLedger verify_car(std::size_t n) {
  CheckLedger L;
  auto& rec = L.open("car", "{phi(v), phi*(v')} = delta, {phi, phi} = 0");
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w) {
      auto a = annihilator(n, v), b = annihilator(n, w), bs = creator(n, w);
      auto anti_ab = a * b + b * a;
      auto anti_abs = a * bs + bs * a;
      PauliSum want = v == w ? PauliSum::identity(n) : PauliSum(n);
      CheckLedger::tally(rec, anti_ab.is_zero() && (anti_abs - want).is_zero(),
                         [&] { return "modes " + std::to_string(v) + "," + std::to_string(w); });
    }
  auto& vac = L.open("vacuum", "phi(v)|0> = 0, gamma(v)|0> = |0>");
  auto zero = SparseState::basis(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    CheckLedger::tally(vac, apply(annihilator(n, v), zero).prune().support_size() == 0 &&
                                distance_inf(apply(parity_op(n, v), zero), zero) == 0.0,
                       [&] { return "mode " + std::to_string(v); });
  return L;
}

// Dimension of the span of the even algebra on the Fock register:
// log2 of the number of distinct Pauli strings generated.
inline std::size_t even_algebra_log2_dim(const Graph& g) {
  std::vector<PauliTerm> gens;
  const auto n = g.num_vertices();
  for (std::size_t v = 0; v < n; ++v) gens.push_back(parity_op(n, v));
  for (std::size_t e = 0; e < g.num_edges(); ++e) gens.push_back(kinetic_op(g, {e, false}));
  return symplectic_rank(gens);
}

} // namespace z2bos
