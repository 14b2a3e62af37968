#include <gtest/gtest.h>

#include <random>

#include <z2bos/dual.hpp>
#include <z2bos/torus.hpp>

#include "oracle.hpp"

using namespace z2bos;
using oracle::Mat;

namespace {

const std::vector<std::string> kEven = {"bigon", "c4", "triangle2", "octahedron", "torus_3x3"};

BitVec random_bits(std::size_t n, std::mt19937_64& rng) {
  BitVec b(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng() & 1u) b.set(i);
  return b;
}

TieRule random_tie(std::uint64_t seed) {
  // a fixed random orientation per unordered pair
  return [seed](std::size_t, std::size_t e, std::size_t f) {
    auto lo = std::min(e, f), hi = std::max(e, f);
    std::mt19937_64 r(seed * 1000003 + lo * 1009 + hi);
    bool pick = r() & 1u;
    return e == lo ? pick : !pick;
  };
}

} // namespace

TEST(Nu, BothDefiningConditionsOnEveryFixture) {
  for (auto name : {"bigon", "c4", "triangle2", "octahedron", "k4", "triangle_pendant", "torus_3x3"}) {
    auto g = oracle::fixture(name);
    auto P = edge_pairing(g);
    for (const auto& tie : {lower_index_tie(), random_tie(1), random_tie(2)}) {
      auto nu = build_nu(g, tie);
      EXPECT_TRUE(is_valid_nu(g, nu)) << name;
      EXPECT_TRUE(is_local_nu(g, nu)) << name;
      for (std::size_t e = 0; e < g.num_edges(); ++e) {
        EXPECT_TRUE(nu(e, e));
        for (std::size_t f = 0; f < g.num_edges(); ++f)
          if (e != f) {
            EXPECT_EQ(nu(e, f) + nu(f, e), int(P.get(e, f))) << name << " " << e << "," << f;
          }
      }
    }
  }
}

TEST(Nu, OrderingTieFollowsTheStar) {
  auto g = oracle::fixture("c4");
  auto ch = edge_index_ordering(g);
  std::reverse(ch.order[1].begin(), ch.order[1].end());
  auto nu = build_nu(g, ordering_tie(ch));
  // c4 edges 0:(0,1) 1:(1,2); reversed star at 1 puts edge 1 first
  EXPECT_TRUE(nu(1, 0));
  EXPECT_FALSE(nu(0, 1));
  EXPECT_TRUE(is_valid_nu(g, nu));
}

TEST(Nu, ParallelEdgesGetOnlyTheDiagonal) {
  auto g = oracle::fixture("bigon");
  auto nu = build_nu(g);
  EXPECT_EQ(nu.nu, BitMat::identity(2));
}

TEST(Nu, InvalidFunctionRejected) {
  auto g = oracle::fixture("c4");
  auto nu = build_nu(g);
  nu.nu.set(0, 0, false);
  EXPECT_FALSE(is_valid_nu(g, nu));
  EXPECT_THROW(DualModel(g, nu, BitVec(4)), RelationError);
  nu = build_nu(g);
  nu.nu.set(0, 2); // disjoint pair, one-sided
  EXPECT_FALSE(is_valid_nu(g, nu));
  nu.nu.set(2, 0); // symmetric: valid but not local
  EXPECT_TRUE(is_valid_nu(g, nu));
  EXPECT_FALSE(is_local_nu(g, nu));
}

TEST(DualOps, SquaresAndBraiding) {
  for (const auto& name : kEven) {
    auto g = oracle::fixture(name);
    DualModel d(g);
    const auto id = PauliTerm::identity(d.num_qubits());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      EXPECT_EQ(d.e_op(e) * d.e_op(e), -id);
      for (std::size_t v = 0; v < g.num_vertices(); ++v)
        EXPECT_EQ(commutes(d.e_op(e), d.h_op(v)), g.incident(e, v) ? 1 : 0) << name;
      for (std::size_t f = 0; f < g.num_edges(); ++f)
        EXPECT_EQ(commutes(d.e_op(e), d.e_op(f)), int(dot(edge_boundary(g, e), edge_boundary(g, f)))) << name;
    }
  }
}

TEST(DualOps, AdjacentEdgeOperatorsAnticommute) {
  auto g = oracle::fixture("octahedron");
  DualModel d(g);
  std::size_t pairs = 0;
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    for (std::size_t f = e + 1; f < g.num_edges(); ++f) {
      auto [a, b] = g.endpoints(e);
      if (!(g.incident(f, a) || g.incident(f, b))) continue;
      ++pairs;
      EXPECT_EQ(d.e_op(e) * d.e_op(f), -(d.e_op(f) * d.e_op(e)));
    }
  EXPECT_EQ(pairs, 36u); // 6 vertices of degree 4
}

TEST(DualOps, CircuitOperatorMatchesSignedFormula) {
  for (const auto& name : kEven) {
    auto g = oracle::fixture(name);
    std::mt19937_64 rng(5);
    for (const auto& tie : {lower_index_tie(), random_tie(7)}) {
      DualModel d(g, build_nu(g, tie), random_bits(g.num_vertices(), rng));
      for (const auto& c : test_circuits(g, 20, 3)) {
        auto el = d.e_circuit(c);
        EXPECT_EQ(el, d.e_circuit_explicit(c)) << name;
        EXPECT_TRUE((el * el).is_identity()) << name;
        for (std::size_t e = 0; e < g.num_edges(); ++e) EXPECT_TRUE(commute(el, d.e_op(e)));
        for (std::size_t v = 0; v < g.num_vertices(); ++v) EXPECT_TRUE(commute(el, d.h_op(v)));
      }
    }
  }
  EXPECT_THROW(DualModel(oracle::fixture("c4")).e_circuit(Path{{0, false}}), GraphError);
}

TEST(DualOps, FaceGaussBraidsWithBoundaryEdges) {
  for (auto name : {"bigon", "octahedron", "torus_3x3"}) {
    auto g = oracle::fixture(name);
    DualModel d(g);
    for (std::size_t f = 0; f < g.num_faces(); ++f) {
      auto gf = d.gauss_face(f);
      EXPECT_TRUE((gf * gf).is_identity());
      auto bf = face_boundary(g, f);
      for (std::size_t e = 0; e < g.num_edges(); ++e) EXPECT_EQ(commutes(gf, d.sigma3(e)), int(bf.get(e)));
    }
  }
}

TEST(Duality, RelationsPreservedOnFixtures) {
  std::mt19937_64 rng(17);
  for (const auto& name : kEven) {
    auto g = oracle::fixture(name);
    for (int k = 0; k < 3; ++k) {
      DualModel d(g, build_nu(g, random_tie(k)), random_bits(g.num_vertices(), rng));
      auto L = duality_check(d);
      for (const auto& r : L.records()) EXPECT_TRUE(r.pass) << name << " " << r.id << ": " << r.detail;
      EXPECT_GT(L.find("relations")->instances, 1u) << name;
    }
  }
}

TEST(Duality, GlobalConstraintSubspaceByDenseRank) {
  for (auto name : {"bigon", "c4"}) {
    auto g = oracle::fixture(name);
    for (int beta : {0, 1}) {
      BitVec eps(g.num_vertices());
      if (beta) eps.set(0);
      DualModel d(g, build_nu(g), eps);
      auto c = d.global_constraint();
      Mat P = 0.5 * (Mat::Identity(1 << g.num_edges(), 1 << g.num_edges()) + double(c.sign) * oracle::dense(c.op));
      EXPECT_EQ(oracle::rank(P), 1 << (g.num_edges() - 1)) << name;
      // the Gamma side at fixed Gamma* has the same dimension
      const auto& m = d.gamma_model();
      Mat Q = 0.5 * (Mat::Identity(1 << m.num_qubits(), 1 << m.num_qubits()) +
                     (beta ? -1.0 : 1.0) * oracle::dense(m.total_parity()));
      EXPECT_EQ(oracle::rank(Q), oracle::rank(P));
    }
  }
}

TEST(Duality, EpsilonWithSameBetaIsUnitarilyEquivalent) {
  for (auto name : {"c4", "triangle2", "octahedron"}) {
    auto g = oracle::fixture(name);
    std::mt19937_64 rng(23);
    for (int k = 0; k < 5; ++k) {
      auto a = random_bits(g.num_vertices(), rng), b = random_bits(g.num_vertices(), rng);
      auto nu = build_nu(g, random_tie(k));
      DualModel da(g, nu, a), db(g, nu, b);
      auto u = eps_intertwiner(da, b);
      ASSERT_EQ(u.has_value(), da.beta() == db.beta()) << name;
      if (!u) continue;
      auto ui = u->inverse();
      for (std::size_t v = 0; v < g.num_vertices(); ++v) EXPECT_EQ(*u * da.gamma_star(v) * ui, db.gamma_star(v));
      for (std::size_t e = 0; e < g.num_edges(); ++e) EXPECT_EQ(*u * da.e_op(e) * ui, db.e_op(e));
    }
  }
  // X alone is not enough once nu has off-diagonal entries
  auto g = oracle::fixture("c4");
  BitVec a(4), b(4);
  a.set(0);
  b.set(2);
  DualModel da(g, build_nu(g), a);
  auto X = da.sigma1(0) * da.sigma1(1);
  bool all = true;
  for (std::size_t e = 0; e < 4; ++e) all = all && X * da.e_op(e) * X == DualModel(g, build_nu(g), b).e_op(e);
  EXPECT_FALSE(all);
}

TEST(NuEquivalence, IdentityWhenEqual) {
  auto g = oracle::fixture("triangle2");
  auto nu = build_nu(g);
  EXPECT_TRUE(nu_equivalence(g, nu, nu).is_zero());
}

TEST(NuEquivalence, SingleFlipTouchesOnePair) {
  auto g = oracle::fixture("c4");
  auto a = build_nu(g);
  auto b = a;
  b.nu.set(0, 1, !b.nu.get(0, 1));
  b.nu.set(1, 0, !b.nu.get(1, 0));
  auto w = nu_equivalence(g, a, b);
  EXPECT_TRUE(w.get(0, 1) && w.get(1, 0));
  std::size_t ones = 0;
  for (std::size_t e = 0; e < 4; ++e)
    for (std::size_t f = 0; f < 4; ++f) ones += w.get(e, f);
  EXPECT_EQ(ones, 2u);
}

TEST(NuEquivalence, IntertwinesRandomChoices) {
  for (auto name : {"c4", "triangle2", "octahedron", "torus_3x3"}) {
    auto g = oracle::fixture(name);
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto a = build_nu(g, random_tie(10 + s)), b = build_nu(g, random_tie(20 + s));
      auto w = nu_equivalence(g, a, b);
      EXPECT_TRUE(w.is_symmetric());
      for (std::size_t e = 0; e < g.num_edges(); ++e) EXPECT_FALSE(w.get(e, e));
      DualModel da(g, a, BitVec(g.num_vertices())), db(g, b, BitVec(g.num_vertices()));
      for (std::size_t e = 0; e < g.num_edges(); ++e) EXPECT_EQ(apply_omega(w, da.e_op(e)), db.e_op(e)) << name;
      for (std::size_t v = 0; v < g.num_vertices(); ++v) EXPECT_EQ(apply_omega(w, da.h_op(v)), da.h_op(v));
      // the substitution keeps every commutation sign
      std::mt19937_64 rng(s);
      for (int k = 0; k < 20; ++k) {
        auto p = oracle::random_term(g.num_edges(), rng), q = oracle::random_term(g.num_edges(), rng);
        EXPECT_EQ(commutes(apply_omega(w, p), apply_omega(w, q)), commutes(p, q));
        EXPECT_EQ(apply_omega(w, p * q), apply_omega(w, p) * apply_omega(w, q));
      }
    }
  }
}

TEST(DualSectors, FaceGaussReadsTheBackgroundCharge) {
  for (auto name : {"bigon", "octahedron"}) {
    auto g = oracle::fixture(name);
    for (int beta : {0, 1}) {
      BitVec eps(g.num_vertices());
      if (beta) eps.set(g.num_vertices() - 1);
      DualModel d(g, build_nu(g), eps);
      const auto& m = d.gamma_model();
      std::size_t tried = 0;
      for (const auto& l : m.all_labels()) {
        auto A = m.cochain_of(l);
        // only sectors with Gamma* = (-1)^beta live in the dual register
        if ((m.alpha() + int(dot(A, zeta(g)))) % 2 != beta) {
          EXPECT_THROW(d.sector_state(l), RelationError);
          continue;
        }
        ++tried;
        auto psi = d.sector_state(l);
        for (std::size_t f = 0; f < g.num_faces(); ++f) {
          double want = dot(A, face_boundary(g, f)) ? -1.0 : 1.0;
          EXPECT_LT(distance_inf(apply(d.gauss_face(f), psi), want * psi), 1e-12) << name << " face " << f;
        }
      }
      EXPECT_GT(tried, 0u);
    }
  }
}

TEST(DualSectors, HomologousLoopsAgreeOnTheConstrainedSubspace) {
  Torus t({3, 3});
  auto g = t.graph();
  DualModel d(g);
  auto line = [&](std::size_t axis, std::size_t v) {
    Path p;
    for (std::size_t k = 0; k < t.size(axis); ++k) p.push_back({t.edge(t.shift(v, axis, long(k)), axis), false});
    return p;
  };
  auto l0 = line(0, t.vertex({0, 0})), l1 = line(0, t.vertex({0, 1}));
  // the strip between them
  BitVec strip(g.num_faces());
  for (std::size_t f = 0; f < g.num_faces(); ++f) {
    auto [A, i, j] = t.face_corner(f);
    if (t.coords(A)[1] == 0) strip.set(f);
  }
  ASSERT_EQ(boundary2(g, strip), chain_of(g, l0) + chain_of(g, l1));
  PauliTerm G = PauliTerm::identity(d.num_qubits());
  for (auto f : strip.indices()) G *= d.gauss_face(f);
  auto e0 = d.e_circuit(l0), e1 = d.e_circuit(l1);
  EXPECT_EQ(e0 * e1, G);

  // and on an explicit state with every g(f) = 1
  auto psi = SparseState::basis(d.num_qubits(), 0);
  for (std::size_t f = 0; f < g.num_faces(); ++f) psi = 0.5 * (psi + apply(d.gauss_face(f), psi));
  ASSERT_GT(psi.norm(), 1e-6);
  psi = psi.normalized();
  EXPECT_LT(distance_inf(apply(e0, psi), apply(e1, psi)), 1e-12);
}
