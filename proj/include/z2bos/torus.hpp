#pragma once

// Toroidal lattices and the explicit 2-d solution of the constraints.
//
// Vertex index = sum_i c_i * stride_i with coordinate 0 fastest; edge
// v*d + i runs v -> t_i v; the face (v; i<j) has corners A = v, B = t_i A,
// C = t_i t_j A, D = t_j A and edges [A.i, B.j, D.i, A.j].
//
// Directions in operator names are 1-based and signed as in Gamma_{+-i}:
// dir = +(i+1) is the edge leaving v along axis i, -(i+1) the one arriving.

#include <optional>

#include "gamma.hpp"

namespace z2bos {

class Torus {
public:
  explicit Torus(std::vector<std::size_t> L) : L_(std::move(L)) {
    if (L_.size() < 2) throw GraphError("torus needs at least two directions");
    std::size_t s = 1;
    for (auto l : L_) {
      if (l < 3) throw GraphError("torus sizes must be at least 3");
      stride_.push_back(s);
      s *= l;
    }
    nv_ = s;
  }

  std::size_t dims() const { return L_.size(); }
  const std::vector<std::size_t>& sizes() const { return L_; }
  std::size_t size(std::size_t i) const { return L_.at(i); }
  std::size_t num_vertices() const { return nv_; }
  std::size_t num_edges() const { return nv_ * dims(); }
  std::size_t planes() const { return dims() * (dims() - 1) / 2; }
  std::size_t num_faces() const { return nv_ * planes(); }

  std::size_t coord(std::size_t v, std::size_t i) const { return (v / stride_[i]) % L_[i]; }
  std::vector<std::size_t> coords(std::size_t v) const {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < dims(); ++i) c.push_back(coord(v, i));
    return c;
  }
  std::size_t vertex(const std::vector<std::size_t>& c) const {
    std::size_t v = 0;
    for (std::size_t i = 0; i < dims(); ++i) v += (c.at(i) % L_[i]) * stride_[i];
    return v;
  }
  // t_i^k v
  std::size_t shift(std::size_t v, std::size_t i, long k = 1) const {
    auto l = static_cast<long>(L_[i]);
    auto c = static_cast<long>(coord(v, i));
    auto n = ((c + k) % l + l) % l;
    return v + (static_cast<std::size_t>(n) - coord(v, i)) * stride_[i];
  }
  std::size_t edge(std::size_t v, std::size_t i) const { return v * dims() + i; }

  std::size_t plane_index(std::size_t i, std::size_t j) const {
    if (!(i < j && j < dims())) throw std::out_of_range("plane needs i < j < d");
    std::size_t k = 0;
    for (std::size_t a = 0; a < dims(); ++a)
      for (std::size_t b = a + 1; b < dims(); ++b, ++k)
        if (a == i && b == j) return k;
    return k;
  }
  std::size_t face(std::size_t v, std::size_t i, std::size_t j) const { return v * planes() + plane_index(i, j); }
  // (corner A, i, j) of a face index
  std::tuple<std::size_t, std::size_t, std::size_t> face_corner(std::size_t f) const {
    auto v = f / planes(), p = f % planes();
    std::size_t k = 0;
    for (std::size_t a = 0; a < dims(); ++a)
      for (std::size_t b = a + 1; b < dims(); ++b, ++k)
        if (k == p) return {v, a, b};
    throw std::out_of_range("face index");
  }

  Graph graph() const {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t v = 0; v < nv_; ++v)
      for (std::size_t i = 0; i < dims(); ++i) edges.emplace_back(v, shift(v, i));
    std::vector<std::vector<std::size_t>> faces;
    for (std::size_t v = 0; v < nv_; ++v)
      for (std::size_t i = 0; i < dims(); ++i)
        for (std::size_t j = i + 1; j < dims(); ++j)
          faces.push_back({edge(v, i), edge(shift(v, i), j), edge(shift(v, j), i), edge(v, j)});
    return Graph(nv_, std::move(edges), std::move(faces));
  }

  // St(v) ordered (+1, -1, +2, -2, ...), so that
  // Gamma*(v) = (-1)^(eta, v) i^d prod_i Gamma_i Gamma_{-i}.
  OrderingChoice ordering(BitVec eta = {}) const {
    if (eta.size() == 0) eta = BitVec(nv_);
    OrderingChoice ch{std::vector<std::vector<std::size_t>>(nv_), std::move(eta)};
    for (std::size_t v = 0; v < nv_; ++v)
      for (std::size_t i = 0; i < dims(); ++i) {
        ch.order[v].push_back(edge(v, i));
        ch.order[v].push_back(edge(shift(v, i, -1), i));
      }
    return ch;
  }

  // alpha = sum (eta, v) + sum_i prod_{j != i} L_j  (mod 2)
  int alpha_formula(const BitVec& eta) const {
    std::size_t a = eta.popcount();
    for (std::size_t i = 0; i < dims(); ++i) {
      std::size_t p = 1;
      for (std::size_t j = 0; j < dims(); ++j)
        if (j != i) p = (p * L_[j]) % 2;
      a += p;
    }
    return static_cast<int>(a % 2);
  }

  bool all_even() const {
    return std::all_of(L_.begin(), L_.end(), [](std::size_t l) { return l % 2 == 0; });
  }
  // even sublattice: coordinate sum even
  bool even(std::size_t v) const {
    std::size_t s = 0;
    for (auto c : coords(v)) s += c;
    return s % 2 == 0;
  }

private:
  std::vector<std::size_t> L_, stride_;
  std::size_t nv_ = 0;
};

// Tensor product of states on consecutive qubit blocks (first factor lowest).
inline SparseState tensor(const std::vector<SparseState>& parts) {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.num_qubits();
  if (n > 64) throw SizeBoundError("torus", "tensor product above 64 qubits");
  SparseState out = SparseState::basis(n, 0);
  std::size_t off = 0;
  for (const auto& p : parts) {
    SparseState next(n);
    for (const auto& [b, a] : out.amplitudes())
      for (const auto& [c, x] : p.amplitudes()) next.add(b | (c << off), a * x);
    out = std::move(next);
    off += p.num_qubits();
  }
  return out;
}

// The restriction of t to qubits [off, off+w); t must act trivially elsewhere.
inline PauliTerm restrict_block(const PauliTerm& t, std::size_t off, std::size_t w) {
  for (std::size_t q = 0; q < t.num_qubits(); ++q)
    if ((q < off || q >= off + w) && t.letter(q) != 'I') throw RelationError("operator leaves the block");
  return PauliTerm(t.phase(), t.x().slice(off, w), t.z().slice(off, w));
}

inline constexpr std::size_t kRefSupportLimit = 24; // log2 of the |ref> support

class TorusModel {
public:
  explicit TorusModel(Torus t, BitVec eta = {}) : t_(std::move(t)), m_(t_.graph(), t_.ordering(std::move(eta))) {}

  const Torus& torus() const { return t_; }
  const GammaModel& gamma() const { return m_; }
  const BitVec& eta() const { return m_.choice().eta; }

  PauliTerm G(std::size_t v, int dir) const {
    auto i = static_cast<std::size_t>(std::abs(dir)) - 1;
    if (dir == 0 || i >= t_.dims()) throw std::out_of_range("direction");
    return dir > 0 ? m_.gamma(v, t_.edge(v, i)) : m_.gamma(v, t_.edge(t_.shift(v, i, -1), i));
  }
  PauliTerm G2(std::size_t v, int a, int b) const { return G(v, a) * G(v, b); }

  // P(f) = - Gamma_{i,j}(A) Gamma_{j,-i}(B) Gamma_{-i,-j}(C) Gamma_{-j,i}(D)
  PauliTerm plaquette(std::size_t f) const {
    auto [A, i0, j0] = t_.face_corner(f);
    int i = static_cast<int>(i0) + 1, j = static_cast<int>(j0) + 1;
    auto B = t_.shift(A, i0), D = t_.shift(A, j0), C = t_.shift(B, j0);
    return -(G2(A, i, j) * G2(B, j, -i) * G2(C, -i, -j) * G2(D, -j, i));
  }
  // A -> B -> C -> D -> A
  Path face_circuit(std::size_t f) const {
    auto [A, i, j] = t_.face_corner(f);
    return {{t_.edge(A, i), false}, {t_.edge(t_.shift(A, i), j), false}, {t_.edge(t_.shift(A, j), i), true}, {t_.edge(A, j), true}};
  }

  // L_j(v) = - i^{L_j} prod_k Gamma_{j,-j}(t_j^k v); j is 1-based
  PauliTerm loop(std::size_t j, std::size_t v) const {
    auto a = axis(j);
    PauliTerm p = PauliTerm::identity(m_.num_qubits());
    for (std::size_t k = 0; k < t_.size(a); ++k) p *= G2(t_.shift(v, a, static_cast<long>(k)), int(j), -int(j));
    return -p.times_i(static_cast<int>(t_.size(a) % 4));
  }
  Path line(std::size_t j, std::size_t v) const {
    auto a = axis(j);
    Path p;
    for (std::size_t k = 0; k < t_.size(a); ++k) p.push_back({t_.edge(t_.shift(v, a, static_cast<long>(k)), a), false});
    return p;
  }

  // Xi_1(v) = prod_k Gamma_{1,(-1)^k 2}(t_2^k v), Xi_2(v) = prod_k Gamma_{(-1)^k 1,2}(t_1^k v)
  PauliTerm xi(std::size_t i, std::size_t v) const {
    require_even_2d();
    PauliTerm p = PauliTerm::identity(m_.num_qubits());
    if (i == 1) {
      for (std::size_t k = 0; k < t_.size(1); ++k) p *= G2(t_.shift(v, 1, long(k)), 1, k % 2 ? -2 : 2);
    } else if (i == 2) {
      for (std::size_t k = 0; k < t_.size(0); ++k) p *= G2(t_.shift(v, 0, long(k)), k % 2 ? -1 : 1, 2);
    } else {
      throw std::out_of_range("xi direction must be 1 or 2");
    }
    return p;
  }

  // ---- sigma frame (d = 2, even sizes, Gamma*(v) = (-1)^(eta, v)) ----

  PauliTerm sigma3(std::size_t v) const {
    require_even_2d();
    return (t_.even(v) ? G2(v, 1, 2) : G2(v, 1, -2)).times_i(1);
  }
  PauliTerm sigma1(std::size_t v) const {
    require_even_2d();
    return t_.even(v) ? G2(v, 1, -2).times_i(3) : G2(v, 1, 2).times_i(1);
  }
  PauliTerm sigma2(std::size_t v) const { return (sigma3(v) * sigma1(v)).times_i(3); }

  // Image on the |V|-qubit sigma register (sigma1 -> X, sigma3 -> Z) of an
  // operator commuting with every Gamma*(v), restricted to the subspace
  // Gamma*(v) = (-1)^(eta, v).
  PauliTerm reduce(const PauliTerm& op) const {
    require_even_2d();
    const auto nv = t_.num_vertices();
    PauliTerm full = PauliTerm::identity(m_.num_qubits()), img = PauliTerm::identity(nv);
    int sign = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      auto off = m_.offset(v), w = m_.width(v);
      auto want = op.x().slice(off, w), wantz = op.z().slice(off, w);
      bool found = false;
      for (int a1 = 0; a1 < 2 && !found; ++a1)
        for (int a3 = 0; a3 < 2 && !found; ++a3)
          for (int b = 0; b < 2 && !found; ++b) {
            PauliTerm loc = PauliTerm::identity(m_.num_qubits());
            if (a1) loc *= sigma1(v);
            if (a3) loc *= sigma3(v);
            if (b) loc *= m_.gamma_star(v);
            if (loc.x().slice(off, w) != want || loc.z().slice(off, w) != wantz) continue;
            found = true;
            full *= loc;
            if (a1) img *= PauliTerm::single(nv, v, 'X');
            if (a3) img *= PauliTerm::single(nv, v, 'Z');
            if (b && eta().get(v)) sign += 2;
          }
      if (!found) throw RelationError("reduce: operator does not commute with Gamma*(" + std::to_string(v) + ")");
    }
    return img.times_i(op.phase_relative_to(full) + sign);
  }

  // sigma basis state |omega> on the Gamma register: a product of local
  // states with sigma3(v) = (-1)^omega_v and Gamma*(v) = (-1)^(eta, v),
  // |1>_v = sigma1(v)|0>_v.
  SparseState lift(std::uint64_t omega) const {
    require_even_2d();
    if (m_.num_qubits() > 64) throw SizeBoundError("torus", "lift needs at most 64 Gamma qubits");
    std::vector<SparseState> parts;
    for (std::size_t v = 0; v < t_.num_vertices(); ++v) {
      auto off = m_.offset(v), w = m_.width(v);
      auto s3 = restrict_block(sigma3(v), off, w), s1 = restrict_block(sigma1(v), off, w);
      auto gs = restrict_block(m_.gamma_star(v), off, w);
      SectorBasis b(w, {{s3, 1}, {gs, eta().get(v) ? -1 : 1}});
      if (b.dim() != 1) throw RelationError("lift: local sigma frame is not one qubit");
      auto zero = b.vectors()[0];
      parts.push_back((omega >> v) & 1u ? apply(s1, zero) : zero);
    }
    return tensor(parts);
  }

  // ---- constraint solution ----

  // omega in C_0 with (omega, A+B+C+D) = 0 on every even face
  std::vector<BitVec> admissible_basis() const {
    require_even_2d();
    std::vector<BitVec> rows;
    for (std::size_t v = 0; v < t_.num_vertices(); ++v) {
      if (!t_.even(v)) continue;
      auto B = t_.shift(v, 0), D = t_.shift(v, 1), C = t_.shift(B, 1);
      rows.push_back(BitVec::from_indices(t_.num_vertices(), {v, B, C, D}));
    }
    return BitMat::from_rows(t_.num_vertices(), rows).kernel();
  }
  std::size_t admissible_dimension() const { return admissible_basis().size(); }

  template <class F>
  void for_each_admissible(F&& f) const {
    auto basis = admissible_basis();
    if (basis.size() > kRefSupportLimit) throw SizeBoundError("torus", "admissible chain space too large to enumerate");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << basis.size()); ++m) {
      BitVec w(t_.num_vertices());
      for (std::size_t k = 0; k < basis.size(); ++k)
        if ((m >> k) & 1u) w += basis[k];
      f(w);
    }
  }

  // |ref> = 2^{-(L1 L2 + 2)/4} sum over admissible omega, on the sigma register
  SparseState ref_state() const {
    require_even_2d();
    const auto nv = t_.num_vertices();
    if (nv > 64) throw SizeBoundError("torus", "sigma register above 64 qubits");
    SparseState s(nv);
    const double amp = std::pow(2.0, -double(nv + 2) / 4.0);
    for_each_admissible([&](const BitVec& w) { s.add(w.low_word(), amp); });
    return s;
  }

  // |0> = 2 (1 + L_1)/2 (1 + L_2)/2 |ref>, reference vertex the origin
  SparseState ground_state() const {
    auto ref = ref_state();
    auto p = ref + apply(reduce(loop(1, 0)), ref);
    p = p + apply(reduce(loop(2, 0)), p);
    return 0.5 * p;
  }

  // reduced constraint operators
  std::vector<PauliTerm> reduced_plaquettes() const {
    std::vector<PauliTerm> out;
    for (std::size_t f = 0; f < t_.num_faces(); ++f) out.push_back(reduce(plaquette(f)));
    return out;
  }

private:
  std::size_t axis(std::size_t j) const {
    if (j < 1 || j > t_.dims()) throw std::out_of_range("loop direction");
    return j - 1;
  }
  void require_even_2d() const {
    if (t_.dims() != 2 || !t_.all_even()) throw GraphError("needs a 2-d torus with even sizes");
  }

  Torus t_;
  GammaModel m_;
};

// ---- two-colourings ----

// Faces coloured so that no two faces of one colour share an edge.
inline std::optional<std::vector<bool>> face_two_coloring(const Graph& g) {
  const auto nf = g.num_faces();
  std::vector<std::vector<std::size_t>> by_edge(g.num_edges());
  for (std::size_t f = 0; f < nf; ++f)
    for (auto e : g.face(f)) by_edge[e].push_back(f);
  std::vector<int> col(nf, -1);
  for (std::size_t s = 0; s < nf; ++s) {
    if (col[s] >= 0) continue;
    col[s] = 0;
    std::vector<std::size_t> stack{s};
    while (!stack.empty()) {
      auto f = stack.back();
      stack.pop_back();
      for (auto e : g.face(f))
        for (auto h : by_edge[e]) {
          if (h == f) continue;
          if (col[h] < 0) {
            col[h] = 1 - col[f];
            stack.push_back(h);
          } else if (col[h] == col[f]) {
            return std::nullopt;
          }
        }
    }
  }
  std::vector<bool> out;
  for (auto c : col) out.push_back(c == 1);
  return out;
}

inline Path face_circuit_of(const Graph& g, std::size_t f) {
  return circuit_from_cycle(g, face_boundary(g, f));
}

// Solution of all face constraints from a two-colouring: a product state
// solving the shaded faces (colour 0), summed over its images under the
// white faces. Shaded faces share no edge, so at each vertex their local
// factors are independent commuting Paulis.
inline SparseState two_coloring_solution(const GammaModel& m) {
  const auto& g = m.graph();
  auto col = face_two_coloring(g);
  if (!col) throw GraphError("faces admit no two-colouring");
  if (m.num_qubits() > 64) throw SizeBoundError("torus", "register above 64 qubits");
  std::vector<PauliTerm> P;
  for (std::size_t f = 0; f < g.num_faces(); ++f) P.push_back(m.circuit_S(face_circuit_of(g, f)));

  const auto nv = g.num_vertices();
  std::vector<std::vector<Constraint>> local(nv);
  for (std::size_t f = 0; f < g.num_faces(); ++f) {
    if ((*col)[f]) continue;
    // P(f) = i^k times a product of phase-0 letters on each vertex block;
    // the sign goes to the first vertex touched
    int k = P[f].phase();
    if (k % 2) throw RelationError("face operator is not hermitian");
    bool first = true;
    for (std::size_t v = 0; v < nv; ++v) {
      PauliTerm loc(0, P[f].x().slice(m.offset(v), m.width(v)), P[f].z().slice(m.offset(v), m.width(v)));
      if (loc.is_identity()) continue;
      local[v].push_back({loc, first && k == 2 ? -1 : 1});
      first = false;
    }
  }
  std::vector<SparseState> parts;
  for (std::size_t v = 0; v < nv; ++v) {
    SectorBasis b(m.width(v), local[v]);
    if (b.dim() == 0) throw RelationError("no local state for the shaded faces");
    parts.push_back(b.vectors()[0]);
  }
  auto psi = tensor(parts);
  for (std::size_t f = 0; f < g.num_faces(); ++f)
    if ((*col)[f]) psi = psi + apply(P[f], psi);
  return psi.normalized();
}

} // namespace z2bos
