#pragma once

// Quadratic forms over GF(2), symplectic bases, the Arf invariant, and
// Heisenberg groups realised by Pauli strings with z = -1. Isometries are
// lifted to unitaries by a dense intertwiner solve.

#include <Eigen/Dense>

#include "checks.hpp"
#include "graph.hpp"
#include "pauli.hpp"

namespace z2bos {

inline constexpr std::size_t kZeroCountBits = 24; // 2n for enumeration
inline constexpr std::size_t kLiftQubitLimit = 4;

struct QuadraticFormZ2 {
  BitVec diag; // Q(x_i)
  BitMat gram; // Omega(x_i, x_j)

  QuadraticFormZ2() = default;
  QuadraticFormZ2(BitVec d, BitMat g) : diag(std::move(d)), gram(std::move(g)) {
    if (gram.nrows() != diag.size() || gram.ncols() != diag.size()) throw std::invalid_argument("quadratic form: size mismatch");
    if (!gram.is_alternating()) throw RelationError("polar form is not alternating");
  }

  std::size_t dimension() const { return diag.size(); }

  bool omega(const BitVec& x, const BitVec& y) const { return dot(x, gram.mul(y)); }

  // sum_i x_i Q(x_i) + sum_{i<j} x_i x_j Omega(x_i, x_j)
  bool operator()(const BitVec& x) const {
    bool q = dot(x, diag);
    auto idx = x.indices();
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) q ^= gram.get(idx[a], idx[b]);
    return q;
  }

  bool nonsingular() const { return gram.rank() == dimension(); }

  static QuadraticFormZ2 direct_sum(const QuadraticFormZ2& a, const QuadraticFormZ2& b) {
    const auto n = a.dimension(), m = b.dimension();
    BitMat g(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g.set(i, j, a.gram.get(i, j));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) g.set(n + i, n + j, b.gram.get(i, j));
    return {BitVec::concat(a.diag, b.diag), g};
  }
};

// Canonical pairs Omega(e_i, f_j) = delta_ij, in coordinates of the form's basis.
struct SymplecticBasis {
  std::vector<BitVec> e, f;
  std::size_t n() const { return e.size(); }
};

inline bool is_canonical_pairing(const BitMat& omega, const SymplecticBasis& b) {
  auto w = [&](const BitVec& x, const BitVec& y) { return dot(x, omega.mul(y)); };
  for (std::size_t i = 0; i < b.n(); ++i)
    for (std::size_t j = 0; j < b.n(); ++j)
      if (w(b.e[i], b.e[j]) || w(b.f[i], b.f[j]) || w(b.e[i], b.f[j]) != (i == j)) return false;
  return 2 * b.n() == omega.nrows();
}

// Greedy symplectic Gram-Schmidt, lowest index first.
inline SymplecticBasis symplectic_basis(const BitMat& omega) {
  if (!omega.is_alternating()) throw RelationError("form is not alternating");
  const auto dim = omega.nrows();
  auto w = [&](const BitVec& x, const BitVec& y) { return dot(x, omega.mul(y)); };
  std::vector<BitVec> pool;
  for (std::size_t i = 0; i < dim; ++i) pool.push_back(BitVec::unit(dim, i));
  SymplecticBasis out;
  while (!pool.empty()) {
    auto x = pool.front();
    auto it = std::find_if(pool.begin() + 1, pool.end(), [&](const BitVec& y) { return w(x, y); });
    if (it == pool.end()) throw RelationError("degenerate form: a vector pairs to zero with everything");
    auto y = *it;
    pool.erase(it);
    pool.erase(pool.begin());
    for (auto& z : pool) {
      bool a = w(z, y), b = w(z, x);
      if (a) z += x;
      if (b) z += y;
    }
    out.e.push_back(x);
    out.f.push_back(y);
  }
  return out;
}

inline int arf(const QuadraticFormZ2& Q) {
  if (!Q.nonsingular()) throw RelationError("singular quadratic form");
  auto b = symplectic_basis(Q.gram);
  int a = 0;
  for (std::size_t i = 0; i < b.n(); ++i) a ^= Q(b.e[i]) & Q(b.f[i]);
  return a;
}

inline std::uint64_t zero_count(const QuadraticFormZ2& Q) {
  const auto d = Q.dimension();
  if (d > kZeroCountBits) throw SizeBoundError("heis", "zero count above 2^24 vectors");
  std::uint64_t zeros = 0;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << d); ++w) zeros += !Q(BitVec::from_word(d, w));
  return zeros;
}

// #{Q = 0} = 2^(2n-1) + (-1)^Arf 2^(n-1)
inline int arf_by_count(const QuadraticFormZ2& Q) {
  if (Q.dimension() % 2) throw RelationError("odd dimension");
  const auto n = Q.dimension() / 2;
  const auto zeros = zero_count(Q);
  const std::uint64_t half = std::uint64_t{1} << (2 * n - 1), shift = std::uint64_t{1} << (n ? n - 1 : 0);
  if (n == 0) return 0;
  if (zeros == half + shift) return 0;
  if (zeros == half - shift) return 1;
  throw RelationError("zero count " + std::to_string(zeros) + " fits neither Arf value");
}

// Canonical pairs with Q(e_i) = Q(f_i) = 0; needs Arf 0.
inline SymplecticBasis darboux_basis(const QuadraticFormZ2& Q) {
  if (arf(Q)) throw RelationError("Arf invariant 1: no Lagrangian on which Q vanishes");
  auto b = symplectic_basis(Q.gram);
  // (1,0) -> (e+f, f), (0,1) -> (e, e+f)
  auto fix = [&](BitVec& e, BitVec& f) {
    if (Q(e) && !Q(f)) e += f;
    else if (!Q(e) && Q(f)) f += e;
  };
  std::vector<std::size_t> odd;
  for (std::size_t i = 0; i < b.n(); ++i) {
    fix(b.e[i], b.f[i]);
    if (Q(b.e[i])) odd.push_back(i);
  }
  // two (1,1) planes make two (0,0) planes
  for (std::size_t k = 0; k + 1 < odd.size(); k += 2) {
    auto i = odd[k], j = odd[k + 1];
    auto e1 = b.e[i] + b.e[j], f1 = b.f[i] + b.e[i] + b.e[j];
    auto e2 = b.e[j], f2 = b.f[i] + b.f[j];
    fix(e2, f2);
    b.e[i] = e1;
    b.f[i] = f1;
    b.e[j] = e2;
    b.f[j] = f2;
  }
  for (std::size_t i = 0; i < b.n(); ++i)
    if (Q(b.e[i]) || Q(b.f[i])) throw std::logic_error("darboux_basis: plane left with Q != 0");
  if (!is_canonical_pairing(Q.gram, b)) throw std::logic_error("darboux_basis: pairing broken");
  return b;
}

// Generators T_i for the form's basis vectors x_i.
struct HeisenbergPresentation {
  QuadraticFormZ2 Q;
  std::vector<PauliTerm> T;
  SymplecticBasis basis; // lifted to Z_i, X_i in the standard representation

  std::size_t num_qubits() const { return T.empty() ? 0 : T.front().num_qubits(); }

  // the product T_1^c_1 ... T_2n^c_2n
  PauliTerm element(const BitVec& c) const {
    PauliTerm t(num_qubits());
    for (auto i : c.indices()) t *= T.at(i);
    return t;
  }
};

inline CheckLedger check_heisenberg(const HeisenbergPresentation& h) {
  CheckLedger L;
  const auto d = h.Q.dimension();
  const auto id = PauliTerm::identity(h.num_qubits());
  auto& sq = L.open("square", "T_i^2 = z^Q(x_i)");
  auto& br = L.open("braiding", "T_i T_j = z^Omega(x_i, x_j) T_j T_i");
  for (std::size_t i = 0; i < d; ++i) {
    auto x = BitVec::unit(d, i);
    CheckLedger::tally(sq, h.T[i] * h.T[i] == (h.Q(x) ? -id : id), [&] { return "T_" + std::to_string(i); });
    for (std::size_t j = i + 1; j < d; ++j)
      CheckLedger::tally(br, commutes(h.T[i], h.T[j]) == int(h.Q.gram.get(i, j)),
                         [&] { return "T_" + std::to_string(i) + ", T_" + std::to_string(j); });
  }
  return L;
}

inline HeisenbergPresentation standard_rep(const QuadraticFormZ2& Q) {
  auto b = darboux_basis(Q);
  const auto n = b.n(), d = Q.dimension();
  std::vector<BitVec> cols(b.e);
  cols.insert(cols.end(), b.f.begin(), b.f.end());
  auto B = BitMat::from_columns(d, cols);
  HeisenbergPresentation h{Q, {}, b};
  for (std::size_t k = 0; k < d; ++k) {
    auto c = B.solve(BitVec::unit(d, k));
    if (!c) throw std::logic_error("standard_rep: Darboux basis is not a basis");
    // x_k = sum a_i e_i + b_i f_i -> prod Z_i^a_i X_i^b_i; its square is (-1)^(a.b) = z^Q(x_k)
    PauliTerm t(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (c->get(i)) t *= PauliTerm::single(n, i, 'Z');
      if (c->get(n + i)) t *= PauliTerm::single(n, i, 'X');
    }
    h.T.push_back(t);
  }
  return h;
}

// ---- dense side ----

inline Eigen::MatrixXcd dense_matrix(const PauliTerm& t) {
  const auto n = t.num_qubits();
  if (n > 12) throw SizeBoundError("heis", "dense matrix above 12 qubits");
  const auto dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    auto col = apply(t, SparseState::basis(n, static_cast<std::uint64_t>(b)));
    for (auto& [r, a] : col.amplitudes()) m(static_cast<Eigen::Index>(r), b) = a;
  }
  return m;
}

// All P with P A_i = B_i P, as columns of vec(P).
inline Eigen::MatrixXcd intertwiner_space(const std::vector<Eigen::MatrixXcd>& A, const std::vector<Eigen::MatrixXcd>& B) {
  if (A.size() != B.size() || A.empty()) throw std::invalid_argument("intertwiner: generator lists differ");
  const auto d = A.front().rows();
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd sys(d * d * static_cast<Eigen::Index>(A.size()), d * d);
  for (std::size_t k = 0; k < A.size(); ++k) {
    // vec(P A) = (A^T (x) I) vec P, vec(B P) = (I (x) B) vec P
    Eigen::MatrixXcd blk(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        blk.block(i * d, j * d, d, d) = A[k](j, i) * I - (i == j ? B[k] : Eigen::MatrixXcd::Zero(d, d));
      }
    sys.block(static_cast<Eigen::Index>(k) * d * d, 0, d * d, d * d) = blk;
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(sys);
  lu.setThreshold(1e-10);
  return lu.kernel();
}

inline std::size_t commutant_dimension(const std::vector<Eigen::MatrixXcd>& A) {
  auto K = intertwiner_space(A, A);
  return K.cols() == 1 && K.norm() == 0 ? 0 : static_cast<std::size_t>(K.cols());
}

// Scaled to be unitary, first nonzero entry (row-major) positive real.
inline Eigen::MatrixXcd fix_phase(Eigen::MatrixXcd p) {
  const auto d = p.rows();
  double s = std::sqrt((p.adjoint() * p).trace().real() / static_cast<double>(d));
  p /= s;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (std::abs(p(i, j)) > 1e-9) {
        p *= std::abs(p(i, j)) / p(i, j);
        return p;
      }
  return p;
}

// Unique-up-to-phase unitary with P A_i P^-1 = B_i; none if no such P.
inline std::optional<Eigen::MatrixXcd> intertwiner(const std::vector<Eigen::MatrixXcd>& A, const std::vector<Eigen::MatrixXcd>& B) {
  auto K = intertwiner_space(A, B);
  if (K.cols() != 1 || K.norm() < 1e-12) return std::nullopt;
  const auto d = A.front().rows();
  Eigen::MatrixXcd p = Eigen::Map<const Eigen::MatrixXcd>(K.data(), d, d);
  p = fix_phase(p);
  if (!(p.adjoint() * p).isIdentity(1e-9)) return std::nullopt;
  return p;
}

// phi as a matrix acting on coordinates: column i is phi(x_i).
inline bool is_isometry(const QuadraticFormZ2& Q, const BitMat& phi) {
  const auto d = Q.dimension();
  if (phi.nrows() != d || phi.ncols() != d) return false;
  for (std::size_t i = 0; i < d; ++i) {
    if (Q(phi.column(i)) != Q.diag.get(i)) return false;
    for (std::size_t j = i + 1; j < d; ++j)
      if (Q.omega(phi.column(i), phi.column(j)) != Q.gram.get(i, j)) return false;
  }
  return true;
}

struct ProjectiveLift {
  Eigen::MatrixXcd p;
  std::vector<PauliTerm> images; // Phi(T_i)
};

// Phi(T_i) = prod_j T_j^phi_ji, which squares to z^Q(phi x_i) = z^Q(x_i).
inline ProjectiveLift lift_isometry(const HeisenbergPresentation& h, const BitMat& phi) {
  if (!is_isometry(h.Q, phi)) throw RelationError("map does not preserve Q");
  if (h.num_qubits() > kLiftQubitLimit) throw SizeBoundError("heis", "dense lift above 4 qubits");
  ProjectiveLift out;
  std::vector<Eigen::MatrixXcd> A, B;
  for (std::size_t i = 0; i < h.T.size(); ++i) {
    out.images.push_back(h.element(phi.column(i)));
    A.push_back(dense_matrix(h.T[i]));
    B.push_back(dense_matrix(out.images.back()));
  }
  auto p = intertwiner(A, B);
  if (!p) throw RelationError("no unitary intertwiner: representation is not irreducible");
  out.p = *p;
  return out;
}

// ---- the gauge-invariant generators as a Heisenberg group ----

// Basis order: s_g(e_1..e_n), W(eps_2..eps_n), K.
struct GaugeHeisenberg {
  QuadraticFormZ2 Q;
  std::vector<BitVec> isotropic; // W(eps_i) and K
};

inline bool is_isotropic(const QuadraticFormZ2& Q, const std::vector<BitVec>& span) {
  for (std::size_t a = 0; a < span.size(); ++a) {
    if (Q(span[a])) return false;
    for (std::size_t b = a + 1; b < span.size(); ++b)
      if (Q.omega(span[a], span[b])) return false;
  }
  return true;
}

inline GaugeHeisenberg gauge_relations_as_heisenberg(const Graph& g, const Path& l) {
  if (!g.all_even()) throw OddDegreeError(g.odd_vertices().front());
  if (l.size() != g.num_edges() || !is_circuit(g, l)) throw GraphError("not an Eulerian circuit");
  const auto n = l.size(), d = 2 * n;
  auto e = [&](std::size_t i) { return l[(i + n - 1) % n].edge; }; // e_0 = e_n
  auto eps = [&](std::size_t i) { return BitVec::unit(g.num_edges(), e(i - 1)) + BitVec::unit(g.num_edges(), e(i)); };
  const auto v1 = g.source(l.front());
  const std::size_t K = d - 1;
  auto W = [&](std::size_t i) { return n + i - 2; };

  BitVec diag(d);
  BitMat G(d, d);
  auto pair = [&](std::size_t a, std::size_t b, bool x) {
    G.set(a, b, x);
    G.set(b, a, x);
  };
  for (std::size_t i = 1; i <= n; ++i) {
    diag.set(i - 1); // s_g(e)^2 = -1
    for (std::size_t j = i + 1; j <= n; ++j) pair(i - 1, j - 1, dot(edge_boundary(g, e(i)), edge_boundary(g, e(j))));
    for (std::size_t j = 2; j <= n; ++j) pair(i - 1, W(j), eps(j).get(e(i)));
    pair(K, i - 1, (e(i) == e(0)) ^ g.incident(e(i), v1));
  }
  GaugeHeisenberg out{QuadraticFormZ2(diag, G), {}};
  for (std::size_t j = 2; j <= n; ++j) out.isotropic.push_back(BitVec::unit(d, W(j)));
  out.isotropic.push_back(BitVec::unit(d, K));
  return out;
}

} // namespace z2bos
