// One line per acceptance criterion: status, id, wall time against its
// budget, and a short detail. Exit status is nonzero if any line fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include <z2bos/dual.hpp>
#include <z2bos/gauge.hpp>
#include <z2bos/heis.hpp>
#include <z2bos/spectra.hpp>
#include <z2bos/torus.hpp>

#include "oracle.hpp"
#include "words.hpp"

using namespace z2bos;
using oracle::Mat;

namespace {

// pinned tolerances
constexpr double kDenseTol = 1e-10;    // dense operator identities
constexpr double kSpectrumTol = 1e-9;  // eigenvalue matching and the penalty bound
constexpr double kStateTol = 1e-12;    // toric-code state norms and constraints

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void require(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

const char* kAll[] = {"bigon", "c4", "triangle2", "octahedron", "k4", "triangle_pendant",
                      "torus_3x3", "torus_4x4", "torus_4x6", "torus_3x3x3"};

Mat projector(std::size_t n, const std::vector<Constraint>& cs) {
  const auto d = Eigen::Index{1} << n;
  Mat P = Mat::Identity(d, d);
  for (const auto& c : cs) P = P * (0.5 * (Mat::Identity(d, d) + double(c.sign) * oracle::dense(c.op)));
  return P;
}

QuadraticHamiltonian random_hamiltonian(const Graph& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cd> h;
  std::vector<double> nu;
  for (std::size_t e = 0; e < g.num_edges(); ++e) h.emplace_back(u(rng), u(rng));
  for (std::size_t v = 0; v < g.num_vertices(); ++v) nu.push_back(u(rng));
  return QuadraticHamiltonian::hermitian(h, nu);
}

std::string first_failure(const CheckLedger& L) {
  auto* f = L.first_failure();
  return f ? f->id + ": " + f->detail : std::string{};
}

Outcome cycle_dimension() {
  Outcome o;
  for (auto name : kAll) {
    auto g = oracle::fixture(name);
    auto z1 = boundary_matrix(g).kernel().size();
    o.require(z1 == g.num_edges() - g.num_vertices() + 1, std::string(name) + ": dim Z1 = " + std::to_string(z1));
    o.require(cycle_basis(g).size() == z1, std::string(name) + ": cycle basis size");
  }
  return o;
}

Outcome even_algebra_completeness() {
  Outcome o;
  std::mt19937_64 rng(2024);
  int equal = 0, unequal = 0;
  for (auto name : {"bigon", "c4"}) {
    auto g = oracle::fixture(name);
    EvenAlgebra A(g);
    oracle::DenseFock F(g);
    for (int k = 0; k < 500; ++k) {
      auto w1 = oracle::random_word(g, 20, rng);
      auto w2 = oracle::variant(g, w1, rng);
      bool nf = A.normal_form(w1) == A.normal_form(w2);
      bool dense = oracle::approx_equal(F.word(w1), F.word(w2), kDenseTol);
      o.require(nf == dense, std::string(name) + ": word pair " + std::to_string(k) + " disagrees");
      (nf ? equal : unequal)++;
    }
  }
  o.require(equal > 0 && unequal > 0, "sample has only one kind of pair");
  if (o.pass) o.detail = std::to_string(equal) + " equal / " + std::to_string(unequal) + " unequal pairs";
  return o;
}

Outcome relation_preservation() {
  Outcome o;
  std::size_t n = 0;
  for (auto name : kAll) {
    auto g = oracle::fixture(name);
    GammaModel m(g);
    auto fl = verify_even_relations(g, FermiOptions{50, 11, std::nullopt});
    auto gl = verify_gamma_relations(m, 50, 11);
    o.require(fl.all_pass(), std::string(name) + " fock: " + first_failure(fl));
    o.require(gl.all_pass(), std::string(name) + " gamma: " + first_failure(gl));
    for (const auto& r : gl.records()) n += r.instances;
  }
  if (o.pass) o.detail = std::to_string(n) + " Gamma-side instances";
  return o;
}

Outcome sector_structure() {
  Outcome o;
  for (auto name : {"bigon", "c4"}) {
    auto g = oracle::fixture(name);
    GammaModel m(g);
    auto labels = m.all_labels();
    o.require(labels.size() == (std::size_t{1} << (g.num_edges() - g.num_vertices() + 1)), std::string(name) + ": sector count");
    for (const auto& l : labels) {
      auto r = oracle::rank(projector(m.num_qubits(), m.sector_constraints(l)));
      o.require(r == (Eigen::Index{1} << (g.num_vertices() - 1)),
                std::string(name) + ": sector " + l.str() + " has dense rank " + std::to_string(r));
    }
  }
  auto g = oracle::fixture("torus_3x3");
  GammaModel m(g);
  auto labels = m.all_labels();
  o.require(labels.size() == 1024, "torus_3x3: sector count");
  for (const auto& l : labels)
    o.require(m.sector_dimension_by_rank(l) == (std::size_t{1} << 8), "torus_3x3: sector " + l.str());
  return o;
}

Outcome flux_parity() {
  Outcome o;
  for (auto name : {"bigon", "c4"}) {
    auto g = oracle::fixture(name);
    for (int alpha : {0, 1}) {
      auto m = GammaModel::with_alpha(g, alpha);
      auto T = oracle::dense(m.total_parity());
      for (const auto& l : m.all_labels()) {
        auto P = projector(m.num_qubits(), m.sector_constraints(l));
        int want = (alpha + int(dot(m.cochain_of(l), zeta(g)))) % 2;
        o.require(oracle::approx_equal(T * P, (want ? -1.0 : 1.0) * P, kDenseTol),
                  std::string(name) + ", alpha " + std::to_string(alpha) + ", sector " + l.str());
      }
    }
  }
  return o;
}

Outcome spectrum_matching() {
  Outcome o;
  std::mt19937_64 rng(606);
  double worst = 0;
  int runs = 0;
  for (auto name : {"bigon", "c4", "triangle2", "octahedron"}) {
    auto g = oracle::fixture(name);
    if (g.num_edges() > 14) continue;
    GammaModel m(g);
    for (int k = 0; k < 3; ++k) {
      auto rep = spectrum_match(m, random_hamiltonian(g, rng));
      rep.tolerance = kSpectrumTol;
      o.require(rep.ok(), std::string(name) + ": " + rep.first_mismatch());
      worst = std::max(worst, rep.max_deviation());
      ++runs;
    }
  }
  if (o.pass) {
    std::ostringstream s;
    s << runs << " Hamiltonians, max deviation " << worst;
    o.detail = s.str();
  }
  return o;
}

// Each non-flat level with the penalty against the same level without it.
Outcome penalty_bound() {
  Outcome o;
  constexpr double J = 10.0;
  auto g = oracle::fixture("bigon");
  GammaModel m(g);
  std::mt19937_64 rng(77);
  std::vector<QuadraticHamiltonian> Hs{QuadraticHamiltonian::hermitian({1.0, 1.0}, {0.0, 0.0})};
  for (int k = 0; k < 3; ++k) Hs.push_back(random_hamiltonian(g, rng));
  for (const auto& H : Hs) {
    auto h = gamma_hamiltonian(m, H);
    auto hc = h + constraint_penalty(m, J);
    for (const auto& l : m.all_labels()) {
      auto before = spectrum(h, m.sector_constraints(l)), after = spectrum(hc, m.sector_constraints(l));
      bool flat = is_flat(g, m.cochain_of(l));
      o.require(before.size() == after.size(), "level count changed");
      for (std::size_t i = 0; i < before.size() && i < after.size(); ++i) {
        if (flat) o.require(std::abs(after[i] - before[i]) <= kSpectrumTol, "flat sector moved");
        else o.require(after[i] - before[i] >= J - kSpectrumTol, "sector " + l.str() + " level " + std::to_string(i));
      }
    }
  }
  return o;
}

Outcome toric_code() {
  Outcome o;
  Torus t({4, 4});
  TorusModel m(t);
  auto ref = m.ref_state();
  auto P = m.reduced_plaquettes();
  o.require(P.size() == 16, "plaquette count");
  for (std::size_t f = 0; f < P.size(); ++f)
    o.require(distance_inf(apply(P[f], ref), ref) <= kStateTol, "|ref> violates face " + std::to_string(f));
  std::size_t admissible = 0;
  m.for_each_admissible([&](const BitVec&) { ++admissible; });
  o.require(admissible == 512 && ref.support_size() == 512, "admissible support " + std::to_string(admissible));
  auto L1 = m.reduce(m.loop(1, 0)), L2 = m.reduce(m.loop(2, 0));
  auto p = ref + apply(L1, ref);
  p = 0.25 * (p + apply(L2, p));
  o.require(std::abs(p.norm() - 0.5) <= kStateTol, "projection norm " + std::to_string(p.norm()));
  auto g0 = m.ground_state();
  for (std::size_t f = 0; f < P.size(); ++f)
    o.require(distance_inf(apply(P[f], g0), g0) <= kStateTol, "|0> violates face " + std::to_string(f));
  for (std::size_t j = 1; j <= 2; ++j)
    for (std::size_t v = 0; v < t.num_vertices(); ++v)
      o.require(distance_inf(apply(m.reduce(m.loop(j, v)), g0), g0) <= kStateTol, "|0> violates a loop");
  return o;
}

Outcome gauge_isomorphism() {
  Outcome o;
  for (auto name : {"bigon", "c4"}) {
    auto g = oracle::fixture(name);
    for (int alpha : {0, 1}) {
      auto M = gauge_to_gamma_map(GammaModel::with_alpha(g, alpha));
      auto L = verify_gauge_gamma_map(M);
      o.require(L.all_pass(), std::string(name) + ": " + first_failure(L));
      auto* an = L.find("gamma:anomaly");
      o.require(an && an->pass && an->instances == 1, std::string(name) + ": anomaly at v1");
    }
  }
  return o;
}

bool witness_holds(const GaugeRegister& r, const GaussSpec& a, const GaussSpec& b, const CanonicalTransform& c) {
  if (!is_canonical(r.graph(), c)) return false;
  for (std::size_t v = 0; v < r.graph().num_vertices(); ++v)
    if (canonical_image(r, c, gauss(r, a, v)) != gauss(r, b, v)) return false;
  return true;
}

Outcome gauss_classification() {
  Outcome o;
  auto g = oracle::fixture("bigon");
  GaugeRegister r(g);
  const auto ne = g.num_edges(), nv = g.num_vertices();
  std::vector<GaussSpec> valid;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (ne * nv + nv)); ++bits) {
    GaussSpec s{BitMat(ne, nv), BitVec(nv)};
    for (std::size_t e = 0; e < ne; ++e)
      for (std::size_t v = 0; v < nv; ++v)
        if ((bits >> (e * nv + v)) & 1u) s.T.set(e, v);
    for (std::size_t v = 0; v < nv; ++v)
      if ((bits >> (ne * nv + v)) & 1u) s.mu.set(v);
    if (is_valid(g, s)) valid.push_back(s);
  }
  std::size_t pairs = 0;
  for (const auto& a : valid)
    for (const auto& b : valid) {
      bool same = classify(r, a) == classify(r, b);
      auto w = equivalence_witness(r, a, b);
      bool eq = w && witness_holds(r, a, b, *w);
      o.require(same == eq, "classify and witness search disagree");
      ++pairs;
    }
  for (auto name : kAll) {
    auto h = oracle::fixture(name);
    if (h.num_edges() > 6) continue;
    auto brute = zb_dimension_brute_force(h);
    o.require(brute == h.num_edges() - h.num_vertices() + 1, std::string(name) + ": brute dim Z/B " + std::to_string(brute));
  }
  if (o.pass) o.detail = std::to_string(valid.size()) + " valid specs, " + std::to_string(pairs) + " pairs";
  return o;
}

Outcome chessboard() {
  Outcome o;
  for (auto L : std::vector<std::vector<std::size_t>>{{4, 4}, {4, 6}}) {
    Torus t(L);
    auto g = t.graph();
    o.require(boundary2(g, chessboard_trivialization(t)) == zeta(g), "chessboard boundary is not zeta");
  }
  Torus t({3, 3});
  o.require(!is_face_boundary(t.graph(), zeta(t.graph())), "3x3: zeta reported as a boundary");
  bool threw = false;
  try {
    chessboard_trivialization(t);
  } catch (const GraphError&) {
    threw = true;
  }
  o.require(threw, "3x3: no error reported");
  return o;
}

Outcome duality() {
  Outcome o;
  for (auto name : {"bigon", "c4"}) {
    auto g = oracle::fixture(name);
    for (int beta : {0, 1}) {
      BitVec eps(g.num_vertices());
      if (beta) eps.set(0);
      DualModel d(g, build_nu(g), eps);
      auto L = duality_check(d);
      o.require(L.all_pass(), std::string(name) + ": " + first_failure(L));
      auto r = oracle::rank(projector(g.num_edges(), {d.global_constraint()}));
      o.require(r == (Eigen::Index{1} << (g.num_edges() - 1)), std::string(name) + ": constraint rank " + std::to_string(r));
    }
  }
  return o;
}

Outcome arf_invariant() {
  Outcome o;
  std::mt19937_64 rng(13);
  int done = 0, ones = 0;
  while (done < 200) {
    std::size_t n = 1 + rng() % 4, d = 2 * n;
    BitMat G(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (rng() & 1u) {
          G.set(i, j);
          G.set(j, i);
        }
    if (G.rank() != d) continue;
    BitVec diag(d);
    for (std::size_t i = 0; i < d; ++i)
      if (rng() & 1u) diag.set(i);
    QuadraticFormZ2 Q(diag, G);
    // q(x) = sum diag_i x_i + sum_{i<j} G_ij x_i x_j, counted directly
    std::uint64_t zeros = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << d); ++x) {
      int q = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (!((x >> i) & 1u)) continue;
        q += diag.get(i);
        for (std::size_t j = i + 1; j < d; ++j) q += G.get(i, j) && ((x >> j) & 1u);
      }
      zeros += q % 2 == 0;
    }
    int by_count = zeros > (std::uint64_t{1} << (d - 1)) ? 0 : 1;
    int a = arf(Q);
    o.require(a == by_count && arf_by_count(Q) == by_count && zero_count(Q) == zeros,
              "form " + std::to_string(done) + " (n = " + std::to_string(n) + ")");
    ones += a;
    ++done;
  }
  if (o.pass) o.detail = "200 forms, " + std::to_string(ones) + " with Arf 1";
  return o;
}

Outcome odd_degree() {
  Outcome o;
  auto g = oracle::fixture("k4");
  GammaModel m(g);
  auto L = verify_odd_extension(m, 200, 5);
  o.require(L.all_pass(), first_failure(L));
  o.require(L.find("psi-square")->instances > 50, "too few walks");
  // Psi(l)^2 = -1 densely, on a single edge
  auto psi = m.psi_path({{0, false}});
  const auto d = Eigen::Index{1} << m.num_qubits();
  o.require(oracle::approx_equal(oracle::dense(psi * psi), -Mat::Identity(d, d), kDenseTol), "dense Psi^2");
  const auto want = Eigen::Index{1} << (g.num_vertices() - 1 + g.odd_vertices().size() / 2);
  for (const auto& l : m.all_labels()) {
    auto P = projector(m.num_qubits(), m.sector_constraints(l));
    Eigen::SelfAdjointEigenSolver<Mat> es(P);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r += es.eigenvalues()(i) > 0.5;
    o.require(r == want, "sector " + l.str() + " has dimension " + std::to_string(r));
  }
  return o;
}

} // namespace

int main() {
  std::vector<Criterion> cs{
      {1, "cycle-dimension", 1, cycle_dimension},
      {2, "even-algebra-completeness", 30, even_algebra_completeness},
      {3, "relation-preservation", 10, relation_preservation},
      {4, "sector-structure", 30, sector_structure},
      {5, "flux-parity", 5, flux_parity},
      {6, "spectrum-matching", 300, spectrum_matching},
      {7, "penalty-bound", 5, penalty_bound},
      {8, "toric-code", 10, toric_code},
      {9, "gauge-isomorphism", 10, gauge_isomorphism},
      {10, "gauss-classification", 60, gauss_classification},
      {11, "chessboard", 1, chessboard},
      {12, "duality", 10, duality},
      {13, "arf", 30, arf_invariant},
      {14, "odd-degree", 60, odd_degree},
  };
  int failed = 0;
  for (const auto& c : cs) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && s > c.budget_s) o.fail("over time budget");
    failed += !o.pass;
    std::printf("%s %2d %-27s %8.3fs / %gs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), s, c.budget_s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", int(cs.size()) - failed, cs.size());
  return failed ? 1 : 0;
}
