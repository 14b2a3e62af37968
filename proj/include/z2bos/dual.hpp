#pragma once

// Dual description of the Gamma model on one Ising qubit per edge:
//   Gamma*(v) -> (-1)^(eps, v) h(v),  h(v) = prod_{e at v} Z(e)
//   S(e)      -> e(e) = X(e) prod_e' Z(e')^nu(e, e')
// with nu(e, e) = 1 and nu(e, e') + nu(e', e) = (de, de').

#include <functional>

#include "gamma.hpp"

namespace z2bos {

inline constexpr std::size_t kDualDenseEdgeLimit = 14;

// true: nu(e, f) = 1 at the shared vertex v (and nu(f, e) = 0)
using TieRule = std::function<bool(std::size_t v, std::size_t e, std::size_t f)>;

// e before f in the star ordering at v
inline TieRule ordering_tie(const OrderingChoice& ch) {
  return [ch](std::size_t v, std::size_t e, std::size_t f) {
    const auto& o = ch.order.at(v);
    return std::find(o.begin(), o.end(), e) < std::find(o.begin(), o.end(), f);
  };
}

inline TieRule lower_index_tie() {
  return [](std::size_t, std::size_t e, std::size_t f) { return e < f; };
}

struct NuFunction {
  BitMat nu; // E x E, nu(e, f) at (e, f)

  bool operator()(std::size_t e, std::size_t f) const { return nu.get(e, f); }
};

// (de, df) for every pair
inline BitMat edge_pairing(const Graph& g) {
  const auto ne = g.num_edges();
  BitMat P(ne, ne);
  for (std::size_t e = 0; e < ne; ++e)
    for (std::size_t f = 0; f < ne; ++f)
      if (dot(edge_boundary(g, e), edge_boundary(g, f))) P.set(e, f);
  return P;
}

inline NuFunction build_nu(const Graph& g, const TieRule& tie) {
  const auto ne = g.num_edges();
  NuFunction n{BitMat(ne, ne)};
  for (std::size_t e = 0; e < ne; ++e) {
    n.nu.set(e, e);
    auto [a, b] = g.endpoints(e);
    for (std::size_t f = e + 1; f < ne; ++f) {
      // parallel edges pair to zero and stay off
      if (!dot(edge_boundary(g, e), edge_boundary(g, f))) continue;
      std::size_t shared = g.incident(f, a) ? a : b;
      if (tie(shared, e, f)) n.nu.set(e, f);
      else n.nu.set(f, e);
    }
  }
  return n;
}

// star order of the default Gamma-model ordering
inline NuFunction build_nu(const Graph& g) { return build_nu(g, ordering_tie(default_ordering(g))); }

inline bool is_valid_nu(const Graph& g, const NuFunction& n) {
  const auto ne = g.num_edges();
  if (n.nu.nrows() != ne || n.nu.ncols() != ne) return false;
  auto P = edge_pairing(g);
  for (std::size_t e = 0; e < ne; ++e) {
    if (!n(e, e)) return false;
    for (std::size_t f = e + 1; f < ne; ++f)
      if ((n(e, f) ^ n(f, e)) != P.get(e, f)) return false;
  }
  return true;
}

// nu vanishes off the diagonal unless the edges meet in one vertex
inline bool is_local_nu(const Graph& g, const NuFunction& n) {
  auto P = edge_pairing(g);
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    for (std::size_t f = 0; f < g.num_edges(); ++f)
      if (e != f && !P.get(e, f) && n(e, f)) return false;
  return true;
}

class DualModel {
public:
  DualModel(const Graph& g, NuFunction nu, BitVec eps) : gamma_(g), nu_(std::move(nu)), eps_(std::move(eps)) {
    if (!is_valid_nu(g, nu_)) throw RelationError("nu violates nu(e,e) = 1 or nu(e,f) + nu(f,e) = (de, df)");
    if (eps_.size() != g.num_vertices()) throw std::invalid_argument("eps does not match the vertex count");
  }
  explicit DualModel(const Graph& g) : DualModel(g, build_nu(g), BitVec(g.num_vertices())) {}

  const Graph& graph() const { return gamma_.graph(); }
  const GammaModel& gamma_model() const { return gamma_; }
  const NuFunction& nu() const { return nu_; }
  const BitVec& eps() const { return eps_; }
  std::size_t num_qubits() const { return graph().num_edges(); }
  int beta() const { return static_cast<int>(eps_.popcount() % 2); }
  int alpha() const { return gamma_.alpha(); }

  PauliTerm sigma1(std::size_t e) const { return PauliTerm::single(num_qubits(), e, 'X'); }
  PauliTerm sigma3(std::size_t e) const { return PauliTerm::single(num_qubits(), e, 'Z'); }

  PauliTerm h_op(std::size_t v) const {
    PauliTerm t(num_qubits());
    for (auto e : graph().star(v)) t *= sigma3(e);
    return t;
  }

  // image of Gamma*(v)
  PauliTerm gamma_star(std::size_t v) const { return eps_.get(v) ? -h_op(v) : h_op(v); }

  PauliTerm e_op(std::size_t e) const {
    PauliTerm t = sigma1(e);
    for (std::size_t f = 0; f < num_qubits(); ++f)
      if (nu_(e, f)) t *= sigma3(f);
    return t;
  }

  // image of the kinetic operator in the given direction
  PauliTerm e_op(OrientedEdge o) const { return o.reversed ? -e_op(o.edge) : e_op(o.edge); }

  PauliTerm e_circuit(const Path& l) const {
    if (!is_circuit(graph(), l)) throw GraphError("not a circuit");
    PauliTerm t(num_qubits());
    for (auto o : l) t *= e_op(o);
    return t;
  }

  // Same operator written as sign * prod X * prod Z, without multiplying.
  PauliTerm e_circuit_explicit(const Path& l) const {
    if (!is_circuit(graph(), l)) throw GraphError("not a circuit");
    const auto ne = num_qubits();
    std::size_t sign = 0;
    BitVec x(ne), z(ne);
    for (std::size_t i = 0; i < l.size(); ++i) {
      sign += l[i].reversed;
      for (std::size_t j = i + 1; j < l.size(); ++j) sign += nu_(l[i].edge, l[j].edge);
      x.flip(l[i].edge);
      for (std::size_t f = 0; f < ne; ++f)
        if (nu_(l[i].edge, f)) z.flip(f);
    }
    // X^x Z^z as a phase-exact term: each qubit with both bits is X Z = -iY
    PauliTerm t(static_cast<int>(2 * (sign % 2) + 3 * ((x & z).popcount() % 4)), x, z);
    return t;
  }

  PauliTerm gauss_face(std::size_t f) const { return e_circuit(circuit_from_cycle(graph(), face_boundary(graph(), f))); }

  // The Eulerian constraint e(e_1) ... e(e_n) = (-1)^(alpha + beta).
  Constraint global_constraint() const {
    return {e_circuit(eulerian_circuit(graph(), 0)), (alpha() + beta()) % 2 ? -1 : 1};
  }

  // e(l_k) = (-1)^(label_k) on the cycle basis, plus the global constraint
  std::vector<Constraint> sector_constraints(const SectorLabel& l) const {
    std::vector<Constraint> cs{global_constraint()};
    const auto& basis = gamma_.cycles();
    for (std::size_t k = 0; k < basis.size(); ++k) cs.push_back({e_circuit(basis.circuits[k]), l.bits.get(k) ? -1 : 1});
    return cs;
  }

  // A normalised state in the sector, by projecting basis states.
  SparseState sector_state(const SectorLabel& l) const {
    auto cs = sector_constraints(l);
    const auto n = num_qubits();
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << std::min<std::size_t>(n, 20)); ++b) {
      auto psi = SparseState::basis(n, b);
      for (const auto& c : cs)
        psi = 0.5 * (psi + static_cast<double>(c.sign) * apply(c.op, psi));
      if (psi.norm() > 1e-6) return psi.normalized();
    }
    throw RelationError("sector " + l.str() + " has no state in the dual register");
  }

private:
  GammaModel gamma_;
  NuFunction nu_;
  BitVec eps_;
};

// Relation-preservation report for the dual map.
inline CheckLedger duality_check(const DualModel& d) {
  CheckLedger L;
  const auto& g = d.graph();
  const auto& m = d.gamma_model();
  const auto nv = g.num_vertices(), ne = g.num_edges();

  std::vector<PauliTerm> src, dst;
  std::vector<std::string> names;
  for (std::size_t v = 0; v < nv; ++v) {
    src.push_back(m.gamma_star(v));
    dst.push_back(d.gamma_star(v));
    names.push_back("Gamma*(" + std::to_string(v) + ")");
  }
  for (std::size_t e = 0; e < ne; ++e) {
    src.push_back(m.kinetic({e, false}));
    dst.push_back(d.e_op(e));
    names.push_back("S(" + std::to_string(e) + ")");
  }

  auto& sq = L.open("square", "Gamma*(v)^2 = 1, S(e)^2 = -1 on both sides");
  for (std::size_t k = 0; k < src.size(); ++k)
    CheckLedger::tally(sq, src[k] * src[k] == dst[k] * dst[k] && dst[k] * dst[k] == (k < nv ? PauliTerm::identity(d.num_qubits()) : -PauliTerm::identity(d.num_qubits())),
                       [&] { return names[k]; });

  auto& br = L.open("braiding", "pairwise commutation signs agree");
  for (std::size_t a = 0; a < src.size(); ++a)
    for (std::size_t b = a + 1; b < src.size(); ++b)
      CheckLedger::tally(br, commutes(src[a], src[b]) == commutes(dst[a], dst[b]), [&] { return names[a] + ", " + names[b]; });

  auto& nb = L.open("e-braiding", "e(e) e(f) = (-1)^(de, df) e(f) e(e)");
  auto P = edge_pairing(g);
  for (std::size_t e = 0; e < ne; ++e)
    for (std::size_t f = e + 1; f < ne; ++f)
      CheckLedger::tally(nb, commutes(d.e_op(e), d.e_op(f)) == int(P.get(e, f)),
                         [&] { return "edges " + std::to_string(e) + ", " + std::to_string(f); });

  auto& hp = L.open("h-product", "prod_v h(v) = 1");
  PauliTerm prod(d.num_qubits());
  for (std::size_t v = 0; v < nv; ++v) prod *= d.h_op(v);
  CheckLedger::tally(hp, prod.is_identity(), "product");

  // Relations among the Gamma-side generators, with Gamma* = (-1)^beta
  // adjoined, against relations on the dual side with the global
  // constraint adjoined. Each one must keep its scalar and the counts
  // must agree, so no further relation appears.
  auto& rel = L.open("relations", "same relations once Gamma* = (-1)^beta and the global constraint hold");
  {
    auto c = d.global_constraint();
    auto total = m.total_parity();
    auto kernel_of = [](const std::vector<PauliTerm>& ts, const PauliTerm& extra) {
      std::vector<BitVec> cols;
      for (const auto& t : ts) cols.push_back(BitVec::concat(t.x(), t.z()));
      cols.push_back(BitVec::concat(extra.x(), extra.z()));
      return BitMat::from_columns(2 * extra.num_qubits(), cols).kernel();
    };
    auto K = kernel_of(src, total), Kd = kernel_of(dst, c.op);
    CheckLedger::tally(rel, K.size() == Kd.size(), [&] {
      return std::to_string(K.size()) + " Gamma-side relations vs " + std::to_string(Kd.size()) + " dual";
    });
    for (const auto& x : K) {
      PauliTerm a(m.num_qubits()), b(d.num_qubits());
      for (std::size_t k = 0; k < src.size(); ++k)
        if (x.get(k)) {
          a *= src[k];
          b *= dst[k];
        }
      if (x.get(src.size())) {
        a *= total;
        if (d.beta()) b = -b;
      }
      if (!b.is_scalar()) {
        b *= c.op;
        if (c.sign < 0) b = -b;
      }
      CheckLedger::tally(rel, a.is_scalar() && b.is_scalar() && a.phase() == b.phase(), [&] {
        std::string w;
        for (auto k : x.indices()) w += (k < names.size() ? names[k] : std::string("Gamma*")) + " ";
        return "word " + w;
      });
    }
  }

  auto& ec = L.open("e-circuit", "e(l) commutes with every h(v), e(e) and squares to 1");
  const auto& basis = m.cycles();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    auto el = d.e_circuit(basis.circuits[k]);
    bool ok = (el * el).is_identity() && el == d.e_circuit_explicit(basis.circuits[k]);
    for (const auto& t : dst) ok = ok && commute(el, t);
    CheckLedger::tally(ec, ok, [&] { return "cycle " + std::to_string(k); });
  }

  auto& gf = L.open("face-gauss", "g(f) Z(e) = (-1)^(df, e) Z(e) g(f)");
  for (std::size_t f = 0; f < g.num_faces(); ++f) {
    auto gfo = d.gauss_face(f);
    auto bf = face_boundary(g, f);
    for (std::size_t e = 0; e < ne; ++e)
      CheckLedger::tally(gf, commutes(gfo, d.sigma3(e)) == int(bf.get(e)),
                         [&] { return "face " + std::to_string(f) + ", edge " + std::to_string(e); });
  }

  auto& gc = L.open("global-constraint", "e(e_1)...e(e_n) = (-1)^(alpha+beta) cuts out 2^(|E|-1) states");
  {
    auto c = d.global_constraint();
    auto dim = make_group(d.num_qubits(), {c}).log2_dimension();
    CheckLedger::tally(gc, !c.op.is_scalar() && dim && *dim + 1 == ne, [&] {
      return "log2 dimension " + (dim ? std::to_string(*dim) : std::string("empty"));
    });
    // the Gamma side with Gamma* fixed has the same size
    CheckLedger::tally(gc, m.num_qubits() == ne, "Gamma register size");
  }
  return L;
}

// Z(sigma) X(tau) with d tau = eps + eps' carries the eps-map to the
// eps'-map. X(tau) alone also flips e(e) by (-1)^(nu(e, .), tau), and
// Z(sigma) puts those signs back.
inline std::optional<PauliTerm> eps_intertwiner(const DualModel& d, const BitVec& eps2) {
  const auto& g = d.graph();
  auto tau = boundary_matrix(g).solve(d.eps() + eps2);
  if (!tau) return std::nullopt;
  const auto n = d.num_qubits();
  PauliTerm u(n);
  for (std::size_t e = 0; e < n; ++e) {
    bool s = false;
    for (auto f : tau->indices()) s ^= d.nu()(e, f);
    if (s) u *= d.sigma3(e);
  }
  for (auto e : tau->indices()) u *= d.sigma1(e);
  return u;
}

// omega = nu1 + nu2: symmetric, zero diagonal
inline BitMat nu_equivalence(const Graph& g, const NuFunction& a, const NuFunction& b) {
  if (!is_valid_nu(g, a) || !is_valid_nu(g, b)) throw RelationError("invalid nu function");
  return a.nu + b.nu;
}

// X(e) -> X(e) prod Z(f)^omega(e, f), Z fixed
inline PauliTerm apply_omega(const BitMat& omega, const PauliTerm& t) {
  const auto n = t.num_qubits();
  PauliTerm base(n);
  for (auto e : t.x().indices()) base *= PauliTerm::single(n, e, 'X');
  for (auto e : t.z().indices()) base *= PauliTerm::single(n, e, 'Z');
  auto scalar = t * base.inverse();
  PauliTerm out = scalar;
  for (auto e : t.x().indices()) {
    out *= PauliTerm::single(n, e, 'X');
    for (std::size_t f = 0; f < n; ++f)
      if (omega.get(e, f)) out *= PauliTerm::single(n, f, 'Z');
  }
  for (auto e : t.z().indices()) out *= PauliTerm::single(n, e, 'Z');
  return out;
}

} // namespace z2bos
