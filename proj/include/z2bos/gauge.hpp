#pragma once

// Z2 gauge theory on a graph: Jordan-Wigner fermions on the vertices plus
// one Ising link per edge. Gauss operators of the form
//   G(v) = (-1)^(mu, v) gamma(v) U(T v) W(delta v)
// are classified up to the canonical transformations
//   U(e) -> U(e), W(e) -> (-1)^(theta, e) U(S e) W(e), S alternating,
// and the deformed theory is matched with the Gamma model.

#include <set>

#include "gamma.hpp"
#include "torus.hpp"

namespace z2bos {

inline constexpr std::size_t kBruteForceHomBits = 24;

// Qubits 0..|V|-1 are the Fock register of fermi.hpp, qubit |V|+e is the
// link of edge e with U(e) = Z, W(e) = X.
class GaugeRegister {
public:
  explicit GaugeRegister(Graph g) : g_(std::move(g)), nv_(g_.num_vertices()), ne_(g_.num_edges()) {}

  const Graph& graph() const { return g_; }
  std::size_t num_qubits() const { return nv_ + ne_; }
  std::size_t link(std::size_t e) const { return nv_ + e; }

  PauliTerm fermion(const PauliTerm& t) const {
    if (t.num_qubits() != nv_) throw std::invalid_argument("fermion operator on the wrong register");
    return PauliTerm(t.phase(), BitVec::concat(t.x(), BitVec(ne_)), BitVec::concat(t.z(), BitVec(ne_)));
  }

  PauliTerm U(const BitVec& tau) const { return PauliTerm(0, BitVec(num_qubits()), BitVec::concat(BitVec(nv_), tau)); }
  PauliTerm W(const BitVec& omega) const {
    return PauliTerm(0, BitVec::concat(BitVec(nv_), omega), BitVec(num_qubits()));
  }
  PauliTerm U(std::size_t e) const { return U(BitVec::unit(ne_, e)); }
  PauliTerm W(std::size_t e) const { return W(BitVec::unit(ne_, e)); }

  PauliTerm gamma(std::size_t v) const { return fermion(parity_op(nv_, v)); }
  PauliTerm gamma(const BitVec& theta) const { return fermion(gamma_of(nv_, theta)); }
  PauliTerm gamma_total() const { return gamma(BitVec::ones(nv_)); }
  PauliTerm X(std::size_t v) const { return fermion(majorana(nv_, v, 'X')); }
  PauliTerm s(OrientedEdge e) const { return fermion(kinetic_op(g_, e)); }
  // dressed hopping s_g(e) = s(e) U(e)
  PauliTerm s_g(OrientedEdge e) const { return s(e) * U(e.edge); }
  PauliTerm s_g(const Path& p) const {
    PauliTerm t(num_qubits());
    for (auto o : p) t *= s_g(o);
    return t;
  }

private:
  Graph g_;
  std::size_t nv_, ne_;
};

// ---- Gauss specifications ----------------------------------------------------

// T: C0 -> C1 stored as an |E| x |V| matrix, column v = T v.
struct GaussSpec {
  BitMat T;
  BitVec mu;

  BitVec column(std::size_t v) const { return T.column(v); }
};

struct GaussClass {
  BitVec tau;
  int alpha = 0;
  friend bool operator==(const GaussClass&, const GaussClass&) = default;
};

inline GaussSpec standard_spec(const Graph& g) {
  return {BitMat(g.num_edges(), g.num_vertices()), BitVec(g.num_vertices())};
}

// T v1 = tau and mu = alpha v1; everything else trivial.
inline GaussSpec nonlocal_spec(const Graph& g, const BitVec& tau, int alpha, std::size_t v1) {
  if (v1 >= g.num_vertices()) throw GraphError("vertex " + std::to_string(v1) + " out of range");
  if (boundary(g, tau).any()) throw GraphError("tau is not a cycle");
  auto s = standard_spec(g);
  for (auto e : tau.indices()) s.T.set(e, v1);
  if (alpha & 1) s.mu.set(v1);
  return s;
}

// d T as a |V| x |V| matrix
inline BitMat boundary_of(const Graph& g, const GaussSpec& s) { return boundary_matrix(g) * s.T; }

inline bool is_valid(const Graph& g, const GaussSpec& s) {
  return s.T.nrows() == g.num_edges() && s.T.ncols() == g.num_vertices() && s.mu.size() == g.num_vertices() &&
         boundary_of(g, s).is_alternating();
}

inline void require_valid(const Graph& g, const GaussSpec& s) {
  if (s.T.nrows() != g.num_edges() || s.T.ncols() != g.num_vertices() || s.mu.size() != g.num_vertices())
    throw std::invalid_argument("Gauss spec does not match the graph");
  if (!boundary_of(g, s).is_alternating())
    throw RelationError("invalid Gauss spec: dT is not alternating, so the G(v) do not commute or square to 1");
}

inline PauliTerm gauss(const GaugeRegister& r, const GaussSpec& s, std::size_t v) {
  const auto& g = r.graph();
  auto G = r.gamma(v) * r.U(s.column(v)) * r.W(coboundary(g, BitVec::unit(g.num_vertices(), v)));
  return s.mu.get(v) ? -G : G;
}

inline std::vector<PauliTerm> gauss_all(const GaugeRegister& r, const GaussSpec& s) {
  std::vector<PauliTerm> out;
  for (std::size_t v = 0; v < r.graph().num_vertices(); ++v) out.push_back(gauss(r, s, v));
  return out;
}

// G(theta) = gamma(theta) W(delta theta)
inline PauliTerm gauss_standard(const GaugeRegister& r, const BitVec& theta) {
  return r.gamma(theta) * r.W(coboundary(r.graph(), theta));
}

inline PauliTerm gauss_deformed(const GaugeRegister& r, std::size_t v, int alpha, std::size_t v1) {
  const auto& g = r.graph();
  if (!g.all_even()) throw OddDegreeError(g.odd_vertices().front());
  return gauss(r, nonlocal_spec(g, zeta(g), alpha, v1), v);
}

inline PauliTerm gauss_product(const GaugeRegister& r, const GaussSpec& s) {
  PauliTerm t(r.num_qubits());
  for (const auto& G : gauss_all(r, s)) t *= G;
  return t;
}

// prod_v G(v) = (-1)^alpha gamma U(tau)
inline GaussClass classify(const GaugeRegister& r, const GaussSpec& s) {
  const auto& g = r.graph();
  require_valid(g, s);
  BitVec tau(g.num_edges());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) tau += s.column(v);
  auto rest = gauss_product(r, s) * (r.gamma_total() * r.U(tau));
  if (!rest.is_scalar() || rest.phase() % 2) throw RelationError("Gauss product is not (-1)^alpha gamma U(tau)");
  return {tau, rest.phase() / 2};
}

inline GaussClass classify(const Graph& g, const GaussSpec& s) { return classify(GaugeRegister(g), s); }

inline bool equivalent(const Graph& g, const GaussSpec& a, const GaussSpec& b) { return classify(g, a) == classify(g, b); }

// ---- canonical transformations ---------------------------------------------

struct CanonicalTransform {
  BitVec theta; // on edges
  BitMat S;     // |E| x |E|, alternating
};

// Image of a register operator; fermions and U(e) are fixed.
inline PauliTerm canonical_image(const GaugeRegister& r, const CanonicalTransform& c, const PauliTerm& t) {
  const auto nv = r.graph().num_vertices(), ne = r.graph().num_edges();
  PauliTerm F(0, BitVec::concat(t.x().slice(0, nv), BitVec(ne)), BitVec::concat(t.z().slice(0, nv), BitVec(ne)));
  auto Uz = r.U(t.z().slice(nv, ne));
  auto xs = t.x().slice(nv, ne);
  // t = k F U(z) W(x) for a scalar k
  auto k = t * (F * Uz * r.W(xs)).inverse();
  PauliTerm out = k * F * Uz;
  for (auto e : xs.indices()) {
    auto img = r.U(c.S.column(e)) * r.W(e);
    out *= c.theta.get(e) ? -img : img;
  }
  return out;
}

inline bool is_canonical(const Graph& g, const CanonicalTransform& c) {
  return c.theta.size() == g.num_edges() && c.S.nrows() == g.num_edges() && c.S.ncols() == g.num_edges() &&
         c.S.is_alternating();
}

// Alternating S with S delta = D (D an |E| x |V| matrix), by a linear solve
// over the strictly upper entries of S.
inline std::optional<BitMat> solve_alternating(const Graph& g, const BitMat& D) {
  const auto ne = g.num_edges(), nv = g.num_vertices();
  std::vector<std::pair<std::size_t, std::size_t>> vars;
  for (std::size_t a = 0; a < ne; ++a)
    for (std::size_t b = a + 1; b < ne; ++b) vars.push_back({a, b});
  BitMat M(ne * nv, vars.size());
  BitVec rhs(ne * nv);
  for (std::size_t v = 0; v < nv; ++v) {
    auto dv = coboundary(g, BitVec::unit(nv, v));
    for (std::size_t e = 0; e < ne; ++e) {
      auto row = v * ne + e;
      if (D.get(e, v)) rhs.set(row);
      for (std::size_t k = 0; k < vars.size(); ++k) {
        auto [a, b] = vars[k];
        if ((a == e && dv.get(b)) || (b == e && dv.get(a))) M.set(row, k);
      }
    }
  }
  auto x = M.solve(rhs);
  if (!x) return std::nullopt;
  BitMat S(ne, ne);
  for (auto k : x->indices()) {
    S.set(vars[k].first, vars[k].second);
    S.set(vars[k].second, vars[k].first);
  }
  return S;
}

// A canonical transformation carrying the Gauss operators of a onto those
// of b, phase-exactly, when one exists.
inline std::optional<CanonicalTransform> equivalence_witness(const GaugeRegister& r, const GaussSpec& a,
                                                             const GaussSpec& b) {
  const auto& g = r.graph();
  require_valid(g, a);
  require_valid(g, b);
  auto S = solve_alternating(g, a.T + b.T);
  if (!S) return std::nullopt;
  CanonicalTransform c{BitVec(g.num_edges()), *S};
  // remaining signs are fixed by theta: W(delta v) picks up (-1)^(d theta, v)
  BitVec need(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    auto ratio = canonical_image(r, c, gauss(r, a, v)) * gauss(r, b, v);
    if (!ratio.is_scalar() || ratio.phase() % 2) throw RelationError("transformed Gauss operator has the wrong support");
    if (ratio.phase() == 2) need.set(v);
  }
  auto theta = boundary_matrix(g).solve(need);
  if (!theta) return std::nullopt;
  c.theta = *theta;
  return c;
}

// ---- dim Z/B -----------------------------------------------------------------

inline std::size_t cycle_rank(const Graph& g) { return g.num_edges() - g.num_vertices() + 1; }

inline long zb_dimension_formula(const Graph& g) {
  long V = long(g.num_vertices()), E = long(g.num_edges()), z = long(cycle_rank(g));
  long dimZ = V * z + (V - 1) * (V - 2) / 2;
  long dimB = E * (E - 1) / 2 - z * (z - 1) / 2;
  return dimZ - dimB;
}

namespace detail {
// T as one vector: bit e*|V| + v holds T(e, v)
inline std::size_t hom_index(const Graph& g, std::size_t e, std::size_t v) { return e * g.num_vertices() + v; }
} // namespace detail

// dim Z and dim B from explicit GF(2) ranks.
inline std::pair<std::size_t, std::size_t> zb_ranks(const Graph& g) {
  const auto nv = g.num_vertices(), ne = g.num_edges();
  auto bm = boundary_matrix(g);
  // (dT)(w, v) = sum_e d(w, e) T(e, v): alternating means zero diagonal and symmetric
  std::vector<BitVec> conds;
  for (std::size_t w = 0; w < nv; ++w)
    for (std::size_t v = w; v < nv; ++v) {
      BitVec row(ne * nv);
      for (std::size_t e = 0; e < ne; ++e) {
        if (bm.get(w, e)) row.flip(detail::hom_index(g, e, v));
        if (v != w && bm.get(v, e)) row.flip(detail::hom_index(g, e, w));
      }
      conds.push_back(row);
    }
  auto dimZ = ne * nv - BitMat::from_rows(ne * nv, conds).rank();
  // B: image of alternating S under S -> S delta
  std::vector<BitVec> images;
  for (std::size_t a = 0; a < ne; ++a)
    for (std::size_t b = a + 1; b < ne; ++b) {
      BitVec img(ne * nv);
      for (std::size_t v = 0; v < nv; ++v) {
        auto dv = coboundary(g, BitVec::unit(nv, v));
        if (dv.get(b)) img.flip(detail::hom_index(g, a, v));
        if (dv.get(a)) img.flip(detail::hom_index(g, b, v));
      }
      images.push_back(img);
    }
  auto dimB = images.empty() ? 0 : BitMat::from_rows(ne * nv, images).rank();
  return {dimZ, dimB};
}

inline std::size_t zb_dimension(const Graph& g) {
  auto [z, b] = zb_ranks(g);
  return z - b;
}

// Counts Z and B by listing every T and every alternating S.
inline std::pair<std::size_t, std::size_t> zb_counts_brute_force(const Graph& g) {
  const auto nv = g.num_vertices(), ne = g.num_edges();
  const auto bits = ne * nv, pairs = ne * (ne - 1) / 2;
  if (bits > kBruteForceHomBits || pairs > kBruteForceHomBits)
    throw SizeBoundError("gauge", "Hom(C0, C1) too large to enumerate");
  // per-edge boundary as a vertex bitmask
  std::vector<std::uint64_t> db(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    auto [s, t] = g.endpoints(e);
    db[e] = (std::uint64_t{1} << s) | (std::uint64_t{1} << t);
  }
  std::size_t countZ = 0;
  for (std::uint64_t T = 0; T < (std::uint64_t{1} << bits); ++T) {
    // column v of dT as a vertex mask
    std::vector<std::uint64_t> col(nv, 0);
    for (std::size_t e = 0; e < ne; ++e)
      for (std::size_t v = 0; v < nv; ++v)
        if ((T >> (e * nv + v)) & 1u) col[v] ^= db[e];
    bool alt = true;
    for (std::size_t v = 0; v < nv && alt; ++v) {
      if ((col[v] >> v) & 1u) alt = false;
      for (std::size_t w = v + 1; w < nv && alt; ++w)
        if (((col[v] >> w) & 1u) != ((col[w] >> v) & 1u)) alt = false;
    }
    countZ += alt;
  }
  std::vector<std::uint64_t> dv(nv, 0); // delta v as an edge mask
  for (std::size_t e = 0; e < ne; ++e) {
    auto [s, t] = g.endpoints(e);
    dv[s] ^= std::uint64_t{1} << e;
    dv[t] ^= std::uint64_t{1} << e;
  }
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs); ++m) {
    std::vector<std::uint64_t> S(ne, 0); // rows of S as edge masks
    std::size_t k = 0;
    for (std::size_t a = 0; a < ne; ++a)
      for (std::size_t b = a + 1; b < ne; ++b, ++k)
        if ((m >> k) & 1u) {
          S[a] |= std::uint64_t{1} << b;
          S[b] |= std::uint64_t{1} << a;
        }
    std::uint64_t img = 0;
    for (std::size_t e = 0; e < ne; ++e)
      for (std::size_t v = 0; v < nv; ++v)
        if (std::popcount(S[e] & dv[v]) & 1) img |= std::uint64_t{1} << (e * nv + v);
    seen.insert(img);
  }
  return {countZ, seen.size()};
}

inline std::size_t zb_dimension_brute_force(const Graph& g) {
  auto [z, b] = zb_counts_brute_force(g);
  return static_cast<std::size_t>(std::countr_zero(z) - std::countr_zero(b));
}

// ---- local formulations ------------------------------------------------------

inline std::vector<std::size_t> face_vertices(const Graph& g, std::size_t f) {
  std::set<std::size_t> vs;
  for (auto e : g.face(f)) {
    auto [s, t] = g.endpoints(e);
    vs.insert(s);
    vs.insert(t);
  }
  return {vs.begin(), vs.end()};
}

// T v = sum of d f over faces f in xi with v_f = v.
inline GaussSpec local_gauss_from_2chain(const Graph& g, const BitVec& xi, const std::vector<std::size_t>& vertex_of_face,
                                         const BitVec& tau, const BitVec& mu) {
  if (xi.size() != g.num_faces() || vertex_of_face.size() != g.num_faces()) throw std::invalid_argument("face data does not match the graph");
  if (boundary2(g, xi) != tau) throw RelationError("the 2-chain's boundary is not tau");
  auto s = standard_spec(g);
  s.mu = mu;
  for (auto f : xi.indices()) {
    auto v = vertex_of_face[f];
    auto vs = face_vertices(g, f);
    if (!std::binary_search(vs.begin(), vs.end(), v))
      throw GraphError("vertex " + std::to_string(v) + " is not on face " + std::to_string(f));
    for (auto e : g.face(f)) s.T.set(e, v, !s.T.get(e, v));
  }
  return s;
}

// Each T v lies in the span of the faces around v.
inline bool is_local(const Graph& g, const GaussSpec& s) {
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::vector<BitVec> around;
    for (std::size_t f = 0; f < g.num_faces(); ++f) {
      auto vs = face_vertices(g, f);
      if (std::binary_search(vs.begin(), vs.end(), v)) around.push_back(face_boundary(g, f));
    }
    auto col = s.column(v);
    if (col.none()) continue;
    if (around.empty() || !BitMat::from_columns(g.num_edges(), around).solve(col)) return false;
  }
  return true;
}

// Sum of the faces whose south-west corner has even coordinate sum.
inline BitVec chessboard_trivialization(const Torus& t) {
  if (t.dims() != 2) throw GraphError("chessboard pattern is for 2-d tori");
  if (t.size(0) % 2 || t.size(1) % 2)
    throw GraphError("zeta is a boundary on a 2-d torus only when both sizes are even");
  BitVec xi(t.num_faces());
  for (std::size_t f = 0; f < t.num_faces(); ++f)
    if (t.even(std::get<0>(t.face_corner(f)))) xi.set(f);
  return xi;
}

// Local Gauss operators of the chessboard: T v = d NE(v) for even v.
inline GaussSpec chessboard_spec(const Torus& t, const BitVec& eta) {
  auto g = t.graph();
  auto xi = chessboard_trivialization(t);
  std::vector<std::size_t> vf(t.num_faces());
  for (std::size_t f = 0; f < t.num_faces(); ++f) vf[f] = std::get<0>(t.face_corner(f));
  return local_gauss_from_2chain(g, xi, vf, zeta(g), eta);
}

// ---- gauge-invariant generators and the map to the Gamma model ---------------

struct GeneratorImages {
  std::size_t num_qubits = 0;
  std::vector<PauliTerm> s; // s_g(e_i), i = 1..|E| (index i-1)
  std::vector<PauliTerm> W; // W(eps_i), i = 2..|E| (index i-2)
  PauliTerm K;
};

// The relations among s_g(e_i), W(eps_i), K along an Eulerian circuit.
inline CheckLedger check_generator_relations(const Graph& g, const Path& l, const GeneratorImages& im) {
  CheckLedger L;
  const auto ne = l.size();
  const auto id = PauliTerm::identity(im.num_qubits);
  // l[k] is e_{k+1}, and e_0 = e_|E|
  auto e = [&](std::size_t i) { return l[(i + ne - 1) % ne].edge; };
  auto edge_i = e;
  auto eps = [&](std::size_t i) { return BitVec::unit(g.num_edges(), e(i - 1)) + BitVec::unit(g.num_edges(), e(i)); };

  auto& si = L.open("s-involution", "-s_g(e) = s_g(e)* = s_g(e)^-1");
  for (std::size_t i = 1; i <= ne; ++i) {
    const auto& s = im.s[i - 1];
    CheckLedger::tally(si, !s.is_hermitian() && s * s == -id, [&] { return "e_" + std::to_string(i); });
  }
  auto& sb = L.open("s-braiding", "s_g(e_i) s_g(e_j) = (-1)^(de_i, de_j) s_g(e_j) s_g(e_i)");
  for (std::size_t i = 1; i <= ne; ++i)
    for (std::size_t j = i + 1; j <= ne; ++j) {
      int want = dot(edge_boundary(g, edge_i(i)), edge_boundary(g, edge_i(j)));
      CheckLedger::tally(sb, commutes(im.s[i - 1], im.s[j - 1]) == want,
                         [&] { return "e_" + std::to_string(i) + ", e_" + std::to_string(j); });
    }
  auto& wi = L.open("W-involution", "W(eps) = W(eps)* = W(eps)^-1, W's commute");
  for (std::size_t i = 2; i <= ne; ++i) {
    const auto& w = im.W[i - 2];
    bool ok = w.is_hermitian() && w * w == id;
    for (std::size_t j = 2; j < i; ++j) ok = ok && commute(w, im.W[j - 2]);
    CheckLedger::tally(wi, ok, [&] { return "eps_" + std::to_string(i); });
  }
  auto& sw = L.open("s-W-braiding", "s_g(e_i) W(eps_j) = (-1)^(e_i, eps_j) W(eps_j) s_g(e_i)");
  for (std::size_t i = 1; i <= ne; ++i)
    for (std::size_t j = 2; j <= ne; ++j) {
      int want = eps(j).get(edge_i(i));
      CheckLedger::tally(sw, commutes(im.s[i - 1], im.W[j - 2]) == want,
                         [&] { return "e_" + std::to_string(i) + ", eps_" + std::to_string(j); });
    }
  auto& ki = L.open("K-involution", "K = K* = K^-1");
  CheckLedger::tally(ki, im.K.is_hermitian() && im.K * im.K == id, "K");
  auto& ks = L.open("K-s-braiding", "K s_g(e_i) = (-1)^(e_i, e_0 + delta v_1) s_g(e_i) K");
  const auto v1 = g.source(l.front());
  for (std::size_t i = 1; i <= ne; ++i) {
    int want = (edge_i(i) == e(0)) ^ g.incident(edge_i(i), v1);
    CheckLedger::tally(ks, commutes(im.K, im.s[i - 1]) == want, [&] { return "e_" + std::to_string(i); });
  }
  auto& kw = L.open("K-W-commute", "K W(eps_i) = W(eps_i) K");
  for (std::size_t i = 2; i <= ne; ++i)
    CheckLedger::tally(kw, commute(im.K, im.W[i - 2]), [&] { return "eps_" + std::to_string(i); });
  return L;
}

inline GeneratorImages gauge_invariant_basis(const GaugeRegister& r, const Path& l) {
  const auto& g = r.graph();
  if (!g.all_even()) throw OddDegreeError(g.odd_vertices().front());
  if (l.size() != g.num_edges() || !is_circuit(g, l) || chain_of(g, l) != zeta(g))
    throw GraphError("not an Eulerian circuit");
  GeneratorImages im{r.num_qubits(), {}, {}, PauliTerm(r.num_qubits())};
  for (auto o : l) im.s.push_back(r.s_g(o));
  for (std::size_t i = 1; i < l.size(); ++i) im.W.push_back(r.W(l[i - 1].edge) * r.W(l[i].edge));
  im.K = r.X(g.source(l.front())) * r.W(l.back().edge);
  return im;
}

// Coordinates of an even edge chain in the basis eps_2 .. eps_|E|.
inline BitVec eps_coordinates(const Path& l, const BitVec& omega) {
  const auto ne = l.size();
  if (omega.popcount() % 2) throw RelationError("W is only defined on chains with an even number of edges");
  BitVec c(ne + 1); // c_i at index i, c_1 = 0
  for (std::size_t j = 1; j < ne; ++j) c.set(j + 1, c.get(j) ^ omega.get(l[j - 1].edge));
  return c;
}

struct GaugeGammaMap {
  GaugeRegister reg;
  GammaModel model;
  Path circuit;
  std::size_t v1 = 0;
  int alpha = 0;
  BitVec kappa; // index i, 2 <= i <= |E|
  GeneratorImages gauge;
  GeneratorImages gamma;

  // W(omega) on the Gamma side for omega orthogonal to zeta
  PauliTerm W_gamma(const BitVec& omega) const {
    auto c = eps_coordinates(circuit, omega);
    PauliTerm t(model.num_qubits());
    for (std::size_t i = 2; i <= circuit.size(); ++i)
      if (c.get(i)) t *= gamma.W[i - 2];
    return t;
  }

  GaussSpec deformed_spec() const { return nonlocal_spec(model.graph(), zeta(model.graph()), alpha, v1); }
};

inline GaugeGammaMap gauge_to_gamma_map(const GammaModel& m, const Path& l) {
  const auto& g = m.graph();
  GaugeRegister r(g);
  GaugeGammaMap M{r, m, l, g.source(l.front()), m.alpha(), BitVec(l.size() + 1), gauge_invariant_basis(r, l),
                  GeneratorImages{m.num_qubits(), {}, {}, PauliTerm(m.num_qubits())}};
  for (auto o : l) M.gamma.s.push_back(m.kinetic(o));
  for (std::size_t i = 2; i <= l.size(); ++i) {
    auto vi = g.source(l[i - 1]);
    M.gamma.W.push_back((m.gamma(vi, l[i - 2].edge) * m.gamma(vi, l[i - 1].edge)).times_i(1));
  }
  // kappa: one flip per vertex v != v1 so that W(delta v) = Gamma*(v)
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (v == M.v1) continue;
    auto w = M.W_gamma(coboundary(g, BitVec::unit(g.num_vertices(), v)));
    auto ratio = w * m.gamma_star(v);
    if (!ratio.is_scalar() || ratio.phase() % 2) throw RelationError("W(delta v) is not +-Gamma*(v)");
    if (ratio.phase() == 0) continue;
    for (std::size_t i = 2; i <= l.size(); ++i)
      if (g.source(l[i - 1]) == v) {
        M.kappa.set(i);
        M.gamma.W[i - 2] = -M.gamma.W[i - 2];
        break;
      }
  }
  M.gamma.K = m.gamma(M.v1, l.back().edge);
  return M;
}

inline GaugeGammaMap gauge_to_gamma_map(const GammaModel& m) {
  return gauge_to_gamma_map(m, eulerian_circuit(m.graph(), 0));
}

// Relations on both sides, the deformed Gauss law, and the counting that
// makes the map onto.
inline CheckLedger verify_gauge_gamma_map(const GaugeGammaMap& M) {
  const auto& g = M.model.graph();
  const auto& m = M.model;
  CheckLedger L;
  auto gauge_side = check_generator_relations(g, M.circuit, M.gauge);
  auto gamma_side = check_generator_relations(g, M.circuit, M.gamma);
  for (const auto& rec : gauge_side.records()) {
    auto& r = L.open("gauge:" + rec.id, rec.anchor);
    r = rec;
    r.id = "gauge:" + rec.id;
  }
  for (const auto& rec : gamma_side.records()) {
    auto& r = L.open("gamma:" + rec.id, rec.anchor);
    r = rec;
    r.id = "gamma:" + rec.id;
  }

  auto& inv = L.open("gauge:gauss-invariance", "generators commute with every deformed G(v)");
  auto Gs = gauss_all(M.reg, M.deformed_spec());
  std::vector<PauliTerm> gens = M.gauge.s;
  gens.insert(gens.end(), M.gauge.W.begin(), M.gauge.W.end());
  gens.push_back(M.gauge.K);
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (std::size_t v = 0; v < Gs.size(); ++v)
      CheckLedger::tally(inv, commute(gens[k], Gs[v]), [&] { return "generator " + std::to_string(k) + ", vertex " + std::to_string(v); });

  auto& gl = L.open("gamma:gauss-law", "W(delta v) = Gamma*(v) for v != v1");
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (v == M.v1) continue;
    CheckLedger::tally(gl, M.W_gamma(coboundary(g, BitVec::unit(g.num_vertices(), v))) == m.gamma_star(v),
                       [&] { return "vertex " + std::to_string(v); });
  }
  auto& an = L.open("gamma:anomaly", "W(delta v1) = (-1)^alpha S(l) Gamma*(v1)");
  {
    auto want = m.circuit_S(M.circuit) * m.gamma_star(M.v1);
    if (M.alpha) want = -want;
    CheckLedger::tally(an, M.W_gamma(coboundary(g, BitVec::unit(g.num_vertices(), M.v1))) == want, "v1");
  }
  auto& on = L.open("gamma:onto", "images generate every Pauli string of the Gamma register");
  {
    std::vector<PauliTerm> all = M.gamma.s;
    all.insert(all.end(), M.gamma.W.begin(), M.gamma.W.end());
    all.push_back(M.gamma.K);
    CheckLedger::tally(on, symplectic_rank(all) == 2 * m.num_qubits() && all.size() == 2 * m.num_qubits(),
                       "rank " + std::to_string(symplectic_rank(all)));
  }
  return L;
}

// Symplectic complement of a set of Pauli strings: dimension of the space
// of strings commuting with all of them.
inline std::size_t centralizer_dimension(std::size_t n, const std::vector<PauliTerm>& ts) {
  return 2 * n - symplectic_rank(ts);
}

} // namespace z2bos
