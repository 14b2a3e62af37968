#include <gtest/gtest.h>

#include <random>
#include <set>

#include <z2bos/gamma.hpp>

#include "oracle.hpp"

using namespace z2bos;

namespace {

const char* kEven[] = {"bigon", "c4", "triangle2", "octahedron", "torus_3x3"};

// Dense projector onto a sector, built from the constraint matrices.
oracle::Mat projector(const GammaModel& m, const SectorLabel& l) {
  const auto d = Eigen::Index{1} << m.num_qubits();
  oracle::Mat p = oracle::Mat::Identity(d, d);
  for (auto& c : m.sector_constraints(l)) p = p * (0.5 * (oracle::Mat::Identity(d, d) + double(c.sign) * oracle::dense(c.op)));
  return p;
}

BitVec random_bits(std::size_t n, std::mt19937_64& rng) {
  BitVec b(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng() & 1u) b.set(i);
  return b;
}

} // namespace

TEST(GammaRegister, QubitCounts) {
  for (const char* name : kEven) {
    GammaModel m(oracle::fixture(name));
    EXPECT_EQ(m.num_qubits() * 2, 2 * m.graph().num_edges()) << name; // 2^|E|
  }
  GammaModel k4(oracle::fixture("k4"));
  EXPECT_EQ(k4.num_qubits(), 8u); // |E| + |V1|/2
  GammaModel tp(oracle::fixture("triangle_pendant"));
  EXPECT_EQ(tp.num_qubits(), 5u);
}

TEST(GammaGenerator, LocalMajoranasMatchDenseStrings) {
  auto g = oracle::fixture("triangle2");
  GammaModel m(g);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const auto& ord = m.choice().order[v];
    for (std::size_t k = 0; k < ord.size(); ++k) {
      std::string s(m.num_qubits(), 'I');
      for (std::size_t j = 0; j < k / 2; ++j) s[m.offset(v) + j] = 'Z';
      s[m.offset(v) + k / 2] = k % 2 ? 'Y' : 'X';
      EXPECT_TRUE(oracle::approx_equal(oracle::dense(m.gamma(v, ord[k])), oracle::pauli_matrix(s)));
    }
  }
}

TEST(GammaGenerator, RejectsEdgeOutsideStar) {
  GammaModel m(oracle::fixture("c4"));
  // c4: edge 1 joins 1-2
  EXPECT_THROW(m.gamma(0, 1), GraphError);
}

TEST(GammaStar, DegreeTwoIsMinusZ) {
  auto g = oracle::fixture("bigon");
  GammaModel m(g, {{{0, 1}, {0, 1}}, BitVec(2)});
  oracle::Mat want = -oracle::pauli_matrix("ZI");
  EXPECT_TRUE(oracle::approx_equal(oracle::dense(m.gamma_star(0)), want));
  // with the generators held fixed, an odd reordering of the product flips the sign
  EXPECT_EQ((m.gamma(0, 1) * m.gamma(0, 0)).times_i(1), -m.gamma_star(0));
  GammaModel twisted(g, {{{0, 1}, {0, 1}}, BitVec::unit(2, 0)});
  EXPECT_EQ(twisted.gamma_star(0), -m.gamma_star(0));
  EXPECT_EQ(twisted.gamma_star(1), m.gamma_star(1));
}

TEST(GammaStar, CliffordPropertiesDense) {
  auto g = oracle::fixture("triangle2");
  GammaModel m(g);
  const auto d = Eigen::Index{1} << m.num_qubits();
  const oracle::Mat I = oracle::Mat::Identity(d, d);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    auto G = oracle::dense(m.gamma_star(v));
    EXPECT_TRUE(oracle::approx_equal(G, G.adjoint()));
    EXPECT_TRUE(oracle::approx_equal(G * G, I));
    for (auto e : g.star(v)) {
      auto E = oracle::dense(m.gamma(v, e));
      EXPECT_TRUE(oracle::approx_equal(G * E, -E * G));
    }
  }
}

TEST(KineticS, BasicAlgebra) {
  auto g = oracle::fixture("c4");
  GammaModel m(g);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    OrientedEdge o{e, false};
    EXPECT_TRUE((m.kinetic(o) * m.kinetic(o.rev())).is_identity());
    EXPECT_EQ(m.kinetic(o) * m.kinetic(o), -PauliTerm::identity(m.num_qubits()));
    auto [s, t] = g.endpoints(e);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      bool anti = v == s || v == t;
      EXPECT_EQ(commutes(m.gamma_star(v), m.kinetic(o)), anti ? 1 : 0);
    }
  }
  // c4 edges 0 (0-1) and 2 (2-3) are disjoint
  EXPECT_TRUE(commute(m.kinetic({0, false}), m.kinetic({2, false})));
}

TEST(CircuitS, BigonIsSignedZZ) {
  auto g = oracle::fixture("bigon");
  GammaModel m(g);
  Path c = {{0, false}, {1, true}};
  auto s = m.circuit_S(c);
  EXPECT_EQ(s.x().popcount(), 0u);
  EXPECT_EQ(s.z().popcount(), 2u);
  auto S = oracle::dense(s);
  EXPECT_TRUE(oracle::approx_equal(S * S, oracle::Mat::Identity(4, 4)));
  EXPECT_TRUE(oracle::approx_equal(S, oracle::pauli_matrix("ZZ")) || oracle::approx_equal(S, -oracle::pauli_matrix("ZZ")));
  Path twice = c;
  twice.insert(twice.end(), c.begin(), c.end());
  EXPECT_TRUE(m.circuit_S(twice).is_identity());
  EXPECT_THROW(m.circuit_S({{0, false}}), GraphError);
}

TEST(CircuitS, TorusFaceIsPlaquetteString) {
  auto g = oracle::fixture("torus_3x3");
  GammaModel m(g);
  // a face boundary touches 4 vertices; its operator lives on those registers only
  auto z = face_boundary(g, 0);
  auto s = m.circuit_S(circuit_from_cycle(g, z));
  EXPECT_TRUE(s.is_hermitian());
  std::set<std::size_t> touched;
  for (std::size_t q = 0; q < m.num_qubits(); ++q)
    if (s.letter(q) != 'I')
      for (std::size_t v = 0; v < g.num_vertices(); ++v)
        if (q >= m.offset(v) && q < m.offset(v) + m.width(v)) touched.insert(v);
  EXPECT_LE(touched.size(), 4u);
}

TEST(Relations, HoldOnEveryFixture) {
  for (const char* name : {"bigon", "c4", "triangle2", "octahedron", "torus_3x3", "k4", "triangle_pendant"}) {
    GammaModel m(oracle::fixture(name));
    auto L = verify_gamma_relations(m);
    EXPECT_TRUE(L.all_pass()) << name << ": " << (L.first_failure() ? L.first_failure()->id + " " + L.first_failure()->detail : "");
    EXPECT_GT(L.find("circuit-class")->instances, 40u) << name;
  }
}

TEST(Relations, BraidingMatchesFockSigns) {
  // the pairwise commutation pattern of the generators is the Fock one
  for (const char* name : {"c4", "octahedron"}) {
    auto g = oracle::fixture(name);
    GammaModel m(g);
    auto fock = fock_images(g);
    auto gim = gamma_images(m);
    std::vector<PauliTerm> F, G;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      F.push_back(fock.parity(v));
      G.push_back(gim.parity(v));
    }
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      F.push_back(fock.kinetic({e, false}));
      G.push_back(gim.kinetic({e, false}));
    }
    for (std::size_t i = 0; i < F.size(); ++i)
      for (std::size_t j = 0; j < F.size(); ++j) EXPECT_EQ(commutes(F[i], F[j]), commutes(G[i], G[j]));
  }
}

TEST(Alpha, EulerianOrderingGivesOne) {
  for (const char* name : kEven) {
    auto g = oracle::fixture(name);
    GammaModel m(g, eulerian_ordering(g));
    EXPECT_EQ(m.alpha(), 1) << name;
    // dense check: S(Euler) = -prod Gamma*
    if (m.num_qubits() <= 8) {
      auto lhs = oracle::dense(m.circuit_S(eulerian_circuit(g)));
      auto rhs = oracle::dense(m.total_parity());
      EXPECT_TRUE(oracle::approx_equal(lhs, -rhs)) << name;
    }
    // any other Euler circuit gives the same value
    for (std::size_t v = 0; v < g.num_vertices(); ++v) EXPECT_EQ(m.alpha(v), 1) << name;
  }
}

TEST(Alpha, OtherEulerianStartsGiveEquivalentOrderings) {
  auto g = oracle::fixture("octahedron");
  for (std::size_t s = 0; s < g.num_vertices(); ++s) EXPECT_EQ(GammaModel(g, eulerian_ordering(g, s)).alpha(), 1);
}

TEST(Alpha, EtaParityControlsAlpha) {
  std::mt19937_64 rng(4);
  for (const char* name : kEven) {
    auto g = oracle::fixture(name);
    auto ch = eulerian_ordering(g);
    for (int k = 0; k < 8; ++k) {
      auto eta = random_bits(g.num_vertices(), rng);
      auto c2 = ch;
      c2.eta = ch.eta + eta;
      EXPECT_EQ(GammaModel(g, c2).alpha(), eta.popcount() % 2 ? 0 : 1) << name;
    }
  }
  auto g = oracle::fixture("c4");
  EXPECT_EQ(GammaModel::with_alpha(g, 0).alpha(), 0);
  EXPECT_EQ(GammaModel::with_alpha(g, 1).alpha(), 1);
}

TEST(Alpha, OddGraphRejected) {
  GammaModel m(oracle::fixture("k4"));
  EXPECT_THROW(m.alpha(), OddDegreeError);
}

TEST(Sectors, DimensionsSmallFixturesDense) {
  for (const char* name : {"bigon", "c4", "triangle2"}) {
    auto g = oracle::fixture(name);
    GammaModel m(g);
    auto labels = m.all_labels();
    EXPECT_EQ(labels.size(), std::size_t{1} << (g.num_edges() - g.num_vertices() + 1));
    for (auto& l : labels) {
      auto p = projector(m, l);
      auto tr = static_cast<std::size_t>(std::lround(p.trace().real()));
      EXPECT_EQ(tr, std::size_t{1} << (g.num_vertices() - 1)) << name << " " << l.str();
      EXPECT_EQ(m.sector_dimension_exhaustive(l), tr);
      EXPECT_EQ(m.sector_dimension_by_rank(l), tr);
    }
  }
}

TEST(Sectors, OctahedronExhaustiveAgreesWithRank) {
  auto g = oracle::fixture("octahedron");
  GammaModel m(g);
  std::mt19937_64 rng(6);
  auto labels = m.all_labels();
  for (int k = 0; k < 4; ++k) {
    auto& l = labels[rng() % labels.size()];
    EXPECT_EQ(m.sector_dimension_exhaustive(l), 32u);
    EXPECT_EQ(m.sector_dimension_by_rank(l), 32u);
  }
}

TEST(Sectors, TorusByRank) {
  auto g = oracle::fixture("torus_3x3");
  GammaModel m(g);
  auto labels = m.all_labels();
  EXPECT_EQ(labels.size(), 1024u);
  for (auto& l : labels) ASSERT_EQ(m.sector_dimension_by_rank(l), 256u);
}

TEST(Sectors, LabelOfStatesAndIntertwiners) {
  std::mt19937_64 rng(9);
  for (const char* name : {"c4", "triangle2", "octahedron"}) {
    auto g = oracle::fixture(name);
    GammaModel m(g);
    for (int k = 0; k < 6; ++k) {
      auto A = random_bits(g.num_edges(), rng);
      auto l = m.label_of(A);
      SectorBasis b(m.num_qubits(), m.sector_constraints(l));
      ASSERT_GT(b.dim(), 0u);
      const auto& psi = b.vectors()[rng() % b.dim()];
      EXPECT_EQ(m.sector_label(psi), l);
      EXPECT_TRUE(m.parity_flux_check(psi)) << name;
      auto tau = random_bits(g.num_edges(), rng);
      auto phi = apply(m.O(tau), psi);
      EXPECT_EQ(m.sector_label(phi), m.label_of(A + tau)) << name;
      EXPECT_TRUE(m.parity_flux_check(phi)) << name;
    }
  }
}

TEST(Sectors, MixedStateRejected) {
  auto g = oracle::fixture("bigon");
  GammaModel m(g);
  auto labels = m.all_labels();
  SectorBasis b0(m.num_qubits(), m.sector_constraints(labels[0]));
  SectorBasis b1(m.num_qubits(), m.sector_constraints(labels[1]));
  auto mix = b0.vectors()[0] + b1.vectors()[0];
  EXPECT_THROW(m.sector_label(mix), RelationError);
}

TEST(ParityFlux, TrivialSectorHasParityAlpha) {
  for (int alpha : {0, 1}) {
    auto g = oracle::fixture("bigon");
    auto m = GammaModel::with_alpha(g, alpha);
    auto l0 = m.label_of(BitVec(g.num_edges()));
    SectorBasis b(m.num_qubits(), m.sector_constraints(l0));
    for (auto& psi : b.vectors()) {
      auto phi = apply(m.total_parity(), psi);
      EXPECT_LT(distance_inf(phi, (alpha ? -1.0 : 1.0) * psi), 1e-12);
    }
    // the flux sector of the bigon has the other parity
    auto l1 = m.label_of(BitVec::unit(g.num_edges(), 0));
    SectorBasis b1(m.num_qubits(), m.sector_constraints(l1));
    for (auto& psi : b1.vectors()) {
      auto phi = apply(m.total_parity(), psi);
      EXPECT_LT(distance_inf(phi, (alpha ? 1.0 : -1.0) * psi), 1e-12);
    }
  }
}

TEST(Bosonize, GeneratorsAndTwist) {
  auto g = oracle::fixture("c4");
  GammaModel m(g);
  BitVec A(g.num_edges());
  EXPECT_EQ(m.bosonize(Word{GammaToken{2}}, A), m.gamma_star(2));
  A.set(1);
  EXPECT_EQ(m.bosonize(Word{KineticToken{{1, false}}}, A), -m.kinetic({1, false}));
  EXPECT_EQ(m.bosonize(Word{KineticToken{{0, false}}}, A), m.kinetic({0, false}));
}

TEST(Bosonize, FockTermsRoundTripThroughWords) {
  std::mt19937_64 rng(12);
  auto g = oracle::fixture("octahedron");
  EvenAlgebra alg(g);
  const auto n = g.num_vertices();
  int even = 0;
  for (int k = 0; k < 300; ++k) {
    auto t = oracle::random_term(n, rng);
    if (t.x().popcount() % 2) {
      EXPECT_THROW(alg.from_pauli(t), RelationError);
      continue;
    }
    ++even;
    EXPECT_EQ(alg.to_pauli(alg.from_pauli(t)), t) << t.str();
  }
  EXPECT_GT(even, 100);
}

TEST(Bosonize, ProductsAreHomomorphic) {
  std::mt19937_64 rng(13);
  for (const char* name : {"c4", "octahedron", "torus_3x3"}) {
    auto g = oracle::fixture(name);
    GammaModel m(g);
    EvenAlgebra alg(g);
    for (int k = 0; k < 50; ++k) {
      auto A = random_bits(g.num_edges(), rng);
      Word w1, w2;
      for (int j = 0; j < 6; ++j) {
        w1.push_back(KineticToken{{rng() % g.num_edges(), bool(rng() & 1u)}});
        w2.push_back(GammaToken{rng() % g.num_vertices()});
        w2.push_back(KineticToken{{rng() % g.num_edges(), bool(rng() & 1u)}});
      }
      Word both = w1;
      both.insert(both.end(), w2.begin(), w2.end());
      EXPECT_EQ(m.bosonize(both, A), m.bosonize(w1, A) * m.bosonize(w2, A));
      // the normal form uses the loop relation, which holds in the sector of A only
      auto ratio = m.bosonize(alg, alg.normal_form(w2), A) * m.bosonize(w2, A).inverse();
      EXPECT_TRUE(make_group(m.num_qubits(), m.sector_constraints(m.label_of(A))).represent(ratio).has_value()) << name;
    }
  }
}

TEST(TTheta, CommutesWithKineticAndFlipsParities) {
  std::mt19937_64 rng(21);
  auto g = oracle::fixture("octahedron");
  GammaModel m(g);
  EXPECT_TRUE(m.T(BitVec(g.num_edges())).is_identity());
  for (int k = 0; k < 20; ++k) {
    auto theta = k == 0 ? BitVec::unit(g.num_edges(), 3) : random_bits(g.num_edges(), rng);
    auto T = m.T(theta);
    auto Tinv = T.inverse();
    for (std::size_t e = 0; e < g.num_edges(); ++e) EXPECT_TRUE(commute(T, m.kinetic({e, false})));
    auto d = boundary(g, theta);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      auto conj = T * m.gamma_star(v) * Tinv;
      EXPECT_EQ(conj, d.get(v) ? -m.gamma_star(v) : m.gamma_star(v));
    }
  }
  // cycles give central elements
  for (auto& z : m.cycles().cycles) {
    auto T = m.T(z);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) EXPECT_TRUE(commute(T, m.gamma_star(v)));
  }
}

TEST(TTheta, RelatesChoicesDifferingByBoundary) {
  std::mt19937_64 rng(22);
  auto g = oracle::fixture("c4");
  GammaModel m(g);
  for (int k = 0; k < 10; ++k) {
    auto theta = random_bits(g.num_edges(), rng);
    auto ch = m.choice();
    ch.eta = ch.eta + boundary(g, theta);
    GammaModel m2(g, ch);
    auto T = m.T(theta);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) EXPECT_EQ(T * m.gamma_star(v) * T.inverse(), m2.gamma_star(v));
    for (std::size_t e = 0; e < g.num_edges(); ++e) EXPECT_EQ(T * m.kinetic({e, false}) * T.inverse(), m2.kinetic({e, false}));
  }
}

TEST(OddExtension, SectorDimensions) {
  for (const char* name : {"k4", "triangle_pendant"}) {
    auto g = oracle::fixture(name);
    GammaModel m(g);
    for (auto& l : m.all_labels()) {
      auto want = m.predicted_sector_dimension();
      EXPECT_EQ(m.sector_dimension_exhaustive(l), want) << name;
      EXPECT_EQ(m.sector_dimension_by_rank(l), want) << name;
    }
  }
  EXPECT_EQ(GammaModel(oracle::fixture("k4")).predicted_sector_dimension(), 32u);
  EXPECT_EQ(GammaModel(oracle::fixture("triangle_pendant")).predicted_sector_dimension(), 16u);
}

TEST(OddExtension, PsiProperties) {
  // triangle 0-1-2 with pendant 0-3: odd vertices 0 and 3
  auto g = oracle::fixture("triangle_pendant");
  GammaModel m(g);
  const auto n = m.num_qubits();
  Path direct = {{3, false}};                              // 0 -> 3
  Path around = {{0, false}, {1, false}, {2, false}, {3, false}}; // 0 -> 1 -> 2 -> 0 -> 3
  Path back = {{3, true}};                                 // 3 -> 0
  for (auto& p : {direct, around, back}) {
    auto psi = m.psi_path(p);
    EXPECT_EQ(psi * psi, -PauliTerm::identity(n));
    for (std::size_t e = 0; e < g.num_edges(); ++e) EXPECT_TRUE(commute(psi, m.kinetic({e, false})));
    for (std::size_t v = 0; v < g.num_vertices(); ++v) EXPECT_TRUE(commute(psi, m.gamma_star(v)));
  }
  // concatenation: 0 -> 3 -> 0 closes up
  Path loop = direct;
  loop.insert(loop.end(), back.begin(), back.end());
  EXPECT_EQ(m.psi_path(direct) * m.psi_path(back), m.circuit_S(loop));
  Path loop2 = around;
  loop2.insert(loop2.end(), back.begin(), back.end());
  EXPECT_EQ(m.psi_path(around) * m.psi_path(back), m.circuit_S(loop2));
  EXPECT_THROW(m.psi_path({{0, false}}), GraphError);
}

TEST(OddExtension, PsiConcatenationAndBraidingOnK4) {
  auto g = oracle::fixture("k4");
  GammaModel m(g);
  std::mt19937_64 rng(31);
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
  for (int k = 0; k < 100; ++k) {
    auto p1 = walk(rng() % 4, 1 + rng() % 5);
    auto mid = g.target(p1.back());
    auto p2 = walk(mid, 1 + rng() % 5);
    if (g.source(p1.front()) == mid || mid == g.target(p2.back())) continue;
    Path both = p1;
    both.insert(both.end(), p2.begin(), p2.end());
    auto prod = m.psi_path(p1) * m.psi_path(p2);
    if (g.source(p1.front()) != g.target(p2.back())) EXPECT_EQ(prod, m.psi_path(both));
    else EXPECT_EQ(prod, m.circuit_S(both));
    // braiding by the pairing of endpoint sets
    auto b1 = boundary(g, chain_of(g, p1)), b2 = boundary(g, chain_of(g, p2));
    EXPECT_EQ(commutes(m.psi_path(p1), m.psi_path(p2)), int(dot(b1, b2)));
  }
}

TEST(OddExtension, SweepLedger) {
  for (auto name : {"k4", "triangle_pendant"}) {
    GammaModel m(oracle::fixture(name));
    auto L = verify_odd_extension(m, 60, 3);
    EXPECT_TRUE(L.all_pass()) << name;
    EXPECT_GT(L.find("psi-braid")->instances, 20u) << name;
  }
  // nothing to sweep when every degree is even
  auto L = verify_odd_extension(GammaModel(oracle::fixture("c4")));
  EXPECT_EQ(L.find("psi-square")->instances, 0u);
}
