#pragma once

// Hopping-plus-potential fermion Hamiltonians, their free-fermion spectra,
// and the bosonized H_Gamma with a per-sector comparison.

#include <Eigen/Dense>

#include "gamma.hpp"
#include "spectrum.hpp"

namespace z2bos {

inline constexpr std::size_t kOracleVertexLimit = 24;

// H = sum_{e oriented} h_e phi(s(e)) phi(t(e))^* + sum_v nu_v n_v
struct QuadraticHamiltonian {
  std::vector<cd> forward;  // h_e in file orientation
  std::vector<cd> backward; // h_ebar
  std::vector<double> nu;

  static QuadraticHamiltonian hermitian(std::vector<cd> h, std::vector<double> nu) {
    QuadraticHamiltonian H;
    H.backward.reserve(h.size());
    for (auto c : h) H.backward.push_back(std::conj(c));
    H.forward = std::move(h);
    H.nu = std::move(nu);
    return H;
  }

  cd h(OrientedEdge e) const { return e.reversed ? backward.at(e.edge) : forward.at(e.edge); }

  void validate(const Graph& g, double tol = 1e-12) const {
    if (forward.size() != g.num_edges() || backward.size() != g.num_edges())
      throw std::invalid_argument("hopping list does not match the edge count");
    if (nu.size() != g.num_vertices()) throw std::invalid_argument("potential list does not match the vertex count");
    for (std::size_t e = 0; e < g.num_edges(); ++e)
      if (std::abs(backward[e] - std::conj(forward[e])) > tol)
        throw RelationError("hopping on edge " + std::to_string(e) + " is not hermitian: h(ebar) != conj h(e)");
  }

  QuadraticHamiltonian twisted(const BitVec& A) const {
    auto out = *this;
    for (auto e : A.indices()) {
      out.forward.at(e) = -out.forward[e];
      out.backward.at(e) = -out.backward[e];
    }
    return out;
  }
};

// <v'|H^A|v> on one-particle states phi(v)^*|0>. Moving phi(s) past
// phi(t)^* costs a sign, so an edge s -> t puts -h_e at (t, s).
inline Eigen::MatrixXcd one_particle_matrix(const Graph& g, const QuadraticHamiltonian& H, const BitVec& A) {
  H.validate(g);
  if (A.size() != g.num_edges()) throw std::invalid_argument("gauge field does not match the edge count");
  auto HA = H.twisted(A);
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) M(Eigen::Index(v), Eigen::Index(v)) = H.nu[v];
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto [s, t] = g.endpoints(e);
    M(Eigen::Index(t), Eigen::Index(s)) -= HA.forward[e];
    M(Eigen::Index(s), Eigen::Index(t)) -= HA.backward[e];
  }
  return M;
}

// Subset sums of the one-particle eigenvalues over |I| of the given parity.
inline std::vector<double> subset_sums(const std::vector<double>& lambda, int parity) {
  const auto n = lambda.size();
  if (n > kOracleVertexLimit) throw SizeBoundError("spectra", "subset enumeration above 24 modes");
  std::vector<double> out;
  out.reserve(std::size_t{1} << (n ? n - 1 : 0));
  // Gray-code walk: one mode toggles per step
  double sum = 0;
  std::uint64_t code = 0;
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    if (k) {
      auto bit = static_cast<std::size_t>(std::countr_zero(k));
      code ^= std::uint64_t{1} << bit;
      sum += (code >> bit) & 1u ? lambda[bit] : -lambda[bit];
    }
    if (std::popcount(code) % 2 == parity) out.push_back(sum);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<double> many_body_oracle(const Graph& g, const QuadraticHamiltonian& H, const BitVec& A, int parity) {
  if (g.num_vertices() > kOracleVertexLimit) throw SizeBoundError("spectra", "free-fermion oracle above 24 vertices");
  return subset_sums(dense_eigenvalues(one_particle_matrix(g, H, A)), parity & 1);
}

inline PauliSum gamma_projector(const GammaModel& m, std::size_t v, int sign) {
  const auto n = m.num_qubits();
  return 0.5 * (PauliSum::identity(n) + static_cast<double>(sign) * PauliSum(m.gamma_star(v)));
}

// H_Gamma = sum_e h_e P+(s) S(e) P+(t) + sum_v nu_v P-(v), P+-(v) = (1 +- Gamma*(v))/2
inline PauliSum gamma_hamiltonian(const GammaModel& m, const QuadraticHamiltonian& H) {
  const auto& g = m.graph();
  H.validate(g);
  PauliSum out(m.num_qubits());
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    for (bool rev : {false, true}) {
      OrientedEdge o{e, rev};
      cd c = H.h(o);
      if (c == cd{0, 0}) continue;
      out += c * (gamma_projector(m, g.source(o), 1) * PauliSum(m.kinetic(o)) * gamma_projector(m, g.target(o), 1));
    }
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    if (H.nu[v] != 0) out += H.nu[v] * gamma_projector(m, v, -1);
  return out;
}

inline PauliTerm face_operator(const GammaModel& m, std::size_t f) {
  return m.circuit_S(circuit_from_cycle(m.graph(), face_boundary(m.graph(), f)));
}

// H_c = J sum_f (1 - P(f))/2
inline PauliSum constraint_penalty(const GammaModel& m, double J) {
  const auto n = m.num_qubits();
  PauliSum out(n);
  if (J == 0) return out;
  for (std::size_t f = 0; f < m.graph().num_faces(); ++f)
    out += (0.5 * J) * (PauliSum::identity(n) - PauliSum(face_operator(m, f)));
  return out;
}

inline bool is_flat(const Graph& g, const BitVec& A) {
  for (std::size_t f = 0; f < g.num_faces(); ++f)
    if (dot(A, face_boundary(g, f))) return false;
  return true;
}

// |I| = alpha + ([A], zeta) mod 2
inline int sector_parity(const GammaModel& m, const SectorLabel& l) {
  return (m.alpha() + static_cast<int>(dot(m.cochain_of(l), zeta(m.graph())))) % 2;
}

struct SectorSpectrum {
  SectorLabel label;
  BitVec A;
  int parity = 0;
  std::vector<double> exact;
  std::vector<double> oracle;
  double deviation = 0;
  std::size_t worst_index = 0;
};

struct SpectrumReport {
  std::vector<SectorSpectrum> sectors;
  double tolerance = kEigenTol;

  double max_deviation() const {
    double d = 0;
    for (const auto& s : sectors) d = std::max(d, s.deviation);
    return d;
  }
  bool ok() const { return max_deviation() <= tolerance; }

  // empty when everything matches
  std::string first_mismatch() const {
    for (const auto& s : sectors) {
      if (s.deviation <= tolerance) continue;
      if (s.exact.size() != s.oracle.size())
        return "sector " + s.label.str() + ": " + std::to_string(s.exact.size()) + " exact eigenvalues vs " +
               std::to_string(s.oracle.size()) + " oracle";
      return "sector " + s.label.str() + ", eigenvalue " + std::to_string(s.worst_index) + ": exact " +
             std::to_string(s.exact[s.worst_index]) + " vs oracle " + std::to_string(s.oracle[s.worst_index]);
    }
    return {};
  }
};

inline SectorSpectrum match_sector(const GammaModel& m, const PauliSum& h, const QuadraticHamiltonian& H,
                                   const SectorLabel& l, const SpectrumOptions& opt = {}) {
  SectorSpectrum s;
  s.label = l;
  s.A = m.cochain_of(l);
  s.parity = sector_parity(m, l);
  s.exact = spectrum(h, m.sector_constraints(l), opt);
  s.oracle = many_body_oracle(m.graph(), H, s.A, s.parity);
  if (s.exact.size() != s.oracle.size()) {
    s.deviation = std::numeric_limits<double>::infinity();
    return s;
  }
  for (std::size_t i = 0; i < s.exact.size(); ++i) {
    double d = std::abs(s.exact[i] - s.oracle[i]);
    if (d > s.deviation) {
      s.deviation = d;
      s.worst_index = i;
    }
  }
  return s;
}

// Every sector, or the listed ones.
inline SpectrumReport spectrum_match(const GammaModel& m, const QuadraticHamiltonian& H,
                                     std::vector<SectorLabel> labels = {}, const SpectrumOptions& opt = {}) {
  if (!m.graph().all_even()) throw OddDegreeError(m.graph().odd_vertices().front());
  if (labels.empty()) labels = m.all_labels();
  auto h = gamma_hamiltonian(m, H);
  SpectrumReport r;
  for (const auto& l : labels) r.sectors.push_back(match_sector(m, h, H, l, opt));
  return r;
}

} // namespace z2bos
