#include <gtest/gtest.h>

#include <random>

#include <z2bos/fermi.hpp>

#include "oracle.hpp"
#include "words.hpp"

using namespace z2bos;

using oracle::DenseFock;
using oracle::random_word;
using oracle::variant;

TEST(Majorana, FirstVertexIsBareX) {
  EXPECT_EQ(majorana(3, 0, 'X'), PauliTerm::from_string("XII"));
  EXPECT_EQ(majorana(3, 2, 'Y'), PauliTerm::from_string("ZZY"));
}

TEST(Majorana, CliffordRelationsDense) {
  const std::size_t n = 4;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w)
      for (char a : {'X', 'Y'})
        for (char b : {'X', 'Y'}) {
          auto A = oracle::dense(majorana(n, v, a)), B = oracle::dense(majorana(n, w, b));
          oracle::Mat want = (v == w && a == b ? 2.0 : 0.0) * oracle::Mat::Identity(16, 16);
          EXPECT_TRUE(oracle::approx_equal(A * B + B * A, want)) << v << a << w << b;
        }
  EXPECT_TRUE((majorana(n, 2, 'Y') * majorana(n, 2, 'Y')).is_identity());
}

TEST(Majorana, MatchesFockAnnihilators) {
  const std::size_t n = 4;
  for (std::size_t v = 0; v < n; ++v)
    EXPECT_TRUE(oracle::approx_equal(oracle::dense(annihilator(n, v)), oracle::annihilate(n, v))) << v;
  EXPECT_TRUE(verify_car(5).all_pass());
}

TEST(ParityOp, IsZAndFixesVacuum) {
  const std::size_t n = 3;
  for (std::size_t v = 0; v < n; ++v) {
    EXPECT_EQ(parity_op(n, v), PauliTerm::single(n, v, 'Z'));
    auto vac = SparseState::basis(n, 0);
    EXPECT_EQ(apply(parity_op(n, v), vac).at(0), cd(1, 0));
    auto one = SparseState::basis(n, std::uint64_t{1} << v);
    EXPECT_EQ(apply(parity_op(n, v), one).at(std::uint64_t{1} << v), cd(-1, 0));
  }
  EXPECT_TRUE((grading(n) * grading(n)).is_identity());
}

TEST(KineticOp, BasicRelations) {
  auto g = oracle::fixture("c4");
  const auto n = g.num_vertices();
  OrientedEdge e{0, false};
  EXPECT_EQ(kinetic_op(g, e) * kinetic_op(g, e), -PauliTerm::identity(n));
  EXPECT_EQ(kinetic_op(g, e.rev()), -kinetic_op(g, e));
  auto [s, t] = g.endpoints(0);
  for (auto v : {s, t}) EXPECT_EQ(parity_op(n, v) * kinetic_op(g, e), -(kinetic_op(g, e) * parity_op(n, v)));
  auto c = eulerian_circuit(g);
  EXPECT_TRUE(path_product(n, c, [&](OrientedEdge o) { return kinetic_op(g, o); }).is_identity());
  // dense product around C4
  DenseFock F(g);
  Word w;
  for (auto o : c) w.push_back(KineticToken{o});
  EXPECT_TRUE(oracle::approx_equal(F.word(w), oracle::Mat::Identity(16, 16)));
}

TEST(NormalForm, TrivialExamples) {
  auto g = oracle::fixture("bigon");
  EvenAlgebra A(g);
  EXPECT_EQ(A.normal_form({GammaToken{1}, GammaToken{1}}), A.identity());
  EXPECT_EQ(A.normal_form({KineticToken{{0, false}}, KineticToken{{0, true}}}), A.identity());
  // s(e1) s(e2) around the bigon is a circuit when the second edge runs back
  EXPECT_EQ(A.normal_form({KineticToken{{0, false}}, KineticToken{{1, true}}}), A.identity());
}

TEST(NormalForm, MatchesFockRealisation) {
  std::mt19937_64 rng(5);
  for (const char* name : {"bigon", "c4", "triangle2", "octahedron", "k4"}) {
    auto g = oracle::fixture(name);
    EvenAlgebra A(g);
    for (int k = 0; k < 200; ++k) {
      auto w = random_word(g, 1 + rng() % 20, rng);
      auto nf = A.normal_form(w);
      EXPECT_EQ(A.to_pauli(nf), A.word_to_pauli(w)) << name;
    }
  }
}

TEST(NormalForm, EqualityIffDenseEquality) {
  std::mt19937_64 rng(77);
  for (const char* name : {"bigon", "c4"}) {
    auto g = oracle::fixture(name);
    EvenAlgebra A(g);
    DenseFock F(g);
    int equal = 0, unequal = 0;
    for (int k = 0; k < 500; ++k) {
      auto w1 = random_word(g, 20, rng);
      auto w2 = variant(g, w1, rng);
      bool nf_eq = A.normal_form(w1) == A.normal_form(w2);
      bool dense_eq = oracle::approx_equal(F.word(w1), F.word(w2));
      ASSERT_EQ(nf_eq, dense_eq) << name << " trial " << k;
      (nf_eq ? equal : unequal)++;
    }
    EXPECT_GT(equal, 100) << name;
    EXPECT_GT(unequal, 100) << name;
  }
}

TEST(NormalForm, Multiplicative) {
  std::mt19937_64 rng(8);
  for (const char* name : {"bigon", "c4", "torus_3x3"}) {
    auto g = oracle::fixture(name);
    EvenAlgebra A(g);
    for (int k = 0; k < 100; ++k) {
      auto w1 = random_word(g, 1 + rng() % 15, rng), w2 = random_word(g, 1 + rng() % 15, rng);
      Word both = w1;
      both.insert(both.end(), w2.begin(), w2.end());
      EXPECT_EQ(A.normal_form(both), A.multiply(A.normal_form(w1), A.normal_form(w2))) << name;
    }
  }
}

TEST(NormalForm, ClosedProductsCarryRealSigns) {
  std::mt19937_64 rng(3);
  auto g = oracle::fixture("torus_3x3");
  EvenAlgebra A(g);
  for (int k = 0; k < 50; ++k) {
    Word w;
    for (auto o : random_circuit(g, rng, 10)) w.push_back(KineticToken{o});
    auto nf = A.normal_form(w);
    EXPECT_EQ(nf, A.identity());
  }
}

TEST(EvenRelations, PassOnFixtures) {
  for (const char* name : {"bigon", "c4", "octahedron", "triangle2", "torus_3x3", "k4"}) {
    auto L = verify_even_relations(oracle::fixture(name));
    EXPECT_TRUE(L.all_pass()) << name << ": " << (L.first_failure() ? L.first_failure()->id : "");
    EXPECT_GT(L.find("loop-relation")->instances, 50u);
  }
}

TEST(EvenRelations, SignFlipBreaksLoopRelation) {
  FermiOptions opt;
  opt.flip_edge = 0;
  auto L = verify_even_relations(oracle::fixture("c4"), opt);
  EXPECT_FALSE(L.find("loop-relation")->pass);
  EXPECT_TRUE(L.find("kinetic-braiding")->pass);
}

TEST(EvenAlgebra, ActsIrreduciblyOnParitySectors) {
  for (const char* name : {"bigon", "c4", "octahedron", "k4", "triangle2"}) {
    auto g = oracle::fixture(name);
    const auto n = g.num_vertices();
    // dim A0 = 2 * (2^{|V|-1})^2 means A0 = End(F_0) + End(F_1)
    EXPECT_EQ(even_algebra_log2_dim(g), 2 * n - 1) << name;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) EXPECT_EQ(fock_multiplicity(n, a, b), a == b ? 1.0 : 0.0);
  }
}
