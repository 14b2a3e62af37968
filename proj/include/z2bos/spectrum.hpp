#pragma once

// Restriction of Pauli Hamiltonians to joint eigenspaces of commuting
// signed Pauli constraints, and their spectra.
//
// A sector basis vector is P|b> for a coset representative b of the span
// of the constraints' X-parts: P|b> lives on b + span(X), and different
// cosets give orthogonal vectors, so no Gram-Schmidt is needed.

#include <random>
#include <unordered_map>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pauli.hpp"

namespace z2bos {

inline constexpr double kEigenTol = 1e-9;
inline constexpr std::size_t kDenseSectorDim = 1024;
inline constexpr std::size_t kExhaustiveQubitLimit = 20;

// prod (1 + sign T)/2 applied to s. Unnormalised.
inline SparseState sector_project(const SparseState& s, const std::vector<Constraint>& terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!terms[i].op.is_hermitian()) throw RelationError("sector term " + terms[i].op.str() + " is not hermitian");
    for (std::size_t j = 0; j < i; ++j)
      if (!commute(terms[i].op, terms[j].op)) throw RelationError("sector terms do not commute");
  }
  SparseState out = s;
  for (const auto& c : terms) {
    auto flipped = apply(c.op, out);
    flipped *= static_cast<double>(c.sign < 0 ? -1 : 1);
    out += flipped;
    out *= 0.5;
    out.prune();
  }
  return out;
}

// trace of the sector projector, summed over all 2^n basis states
inline std::size_t sector_dimension_exhaustive(std::size_t n, const std::vector<Constraint>& terms) {
  if (n > kExhaustiveQubitLimit) throw SizeBoundError("opalg", "exhaustive sector count above 20 qubits");
  double tr = 0;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b)
    tr += sector_project(SparseState::basis(n, b), terms).at(b).real();
  return static_cast<std::size_t>(std::llround(tr));
}

class SectorBasis {
public:
  SectorBasis(std::size_t n, std::vector<Constraint> terms) : n_(n), terms_(std::move(terms)) {
    if (n_ > 64) throw SizeBoundError("opalg", "sector bases address at most 64 qubits");
    auto group = make_group(n_, terms_);
    if (!group.consistent()) throw RelationError("inconsistent sector: the constraints force -1 = +1");
    // echelon form of the X-parts
    std::vector<BitVec> xs;
    for (const auto& c : terms_) xs.push_back(c.op.x());
    auto ech = BitMat::from_rows(n_, xs).rref();
    xrows_.clear();
    for (const auto& r : ech.rows) xrows_.push_back(r.low_word());
    pivots_ = ech.pivots;
    std::vector<std::size_t> free;
    std::vector<bool> is_pivot(n_, false);
    for (auto p : pivots_) is_pivot[p] = true;
    for (std::size_t q = 0; q < n_; ++q)
      if (!is_pivot[q]) free.push_back(q);
    if (free.size() > kExhaustiveQubitLimit + 4)
      throw SizeBoundError("opalg", "sector basis enumeration too large");
    const auto expect = std::size_t{1} << (n_ - group.rank());
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << free.size()); ++m) {
      std::uint64_t b = 0;
      for (std::size_t k = 0; k < free.size(); ++k)
        if ((m >> k) & 1u) b |= std::uint64_t{1} << free[k];
      auto v = sector_project(SparseState::basis(n_, b), terms_);
      if (v.norm2() < 1e-12) continue;
      v = v.normalized();
      // phase convention: positive real amplitude at the representative
      cd a = v.at(b);
      v *= std::abs(a) / a;
      index_[b] = reps_.size();
      reps_.push_back(b);
      rep_amp_.push_back(std::abs(a));
      vecs_.push_back(std::move(v));
    }
    if (vecs_.size() != expect) throw RelationError("sector basis size disagrees with the constraint rank");
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t dim() const { return vecs_.size(); }
  const std::vector<SparseState>& vectors() const { return vecs_; }
  const std::vector<Constraint>& constraints() const { return terms_; }

  std::uint64_t representative(std::uint64_t b) const {
    for (std::size_t k = 0; k < pivots_.size(); ++k)
      if ((b >> pivots_[k]) & 1u) b ^= xrows_[k];
    return b;
  }

  // Coordinates of a state assumed to lie in the sector.
  Eigen::VectorXcd coordinates(const SparseState& s) const {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim()));
    for (std::size_t i = 0; i < dim(); ++i) c(static_cast<Eigen::Index>(i)) = s.at(reps_[i]) / rep_amp_[i];
    return c;
  }

  SparseState embed(const Eigen::VectorXcd& c) const {
    SparseState s(n_);
    for (std::size_t j = 0; j < dim(); ++j) {
      cd a = c(static_cast<Eigen::Index>(j));
      if (a == cd{0, 0}) continue;
      for (auto& [b, v] : vecs_[j].amplitudes()) s.add(b, a * v);
    }
    return s;
  }

  Eigen::VectorXcd apply(const PauliSum& h, const Eigen::VectorXcd& c) const {
    return coordinates(z2bos::apply(h, embed(c)));
  }

  Eigen::MatrixXcd restrict(const PauliSum& h) const {
    const auto d = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index j = 0; j < d; ++j) m.col(j) = coordinates(z2bos::apply(h, vecs_[static_cast<std::size_t>(j)]));
    return m;
  }

  Eigen::SparseMatrix<cd> restrict_sparse(const PauliSum& h) const {
    const auto d = static_cast<Eigen::Index>(dim());
    std::vector<Eigen::Triplet<cd>> entries;
    for (Eigen::Index j = 0; j < d; ++j) {
      auto col = coordinates(z2bos::apply(h, vecs_[static_cast<std::size_t>(j)]));
      for (Eigen::Index i = 0; i < d; ++i)
        if (std::abs(col(i)) > 1e-14) entries.emplace_back(i, j, col(i));
    }
    Eigen::SparseMatrix<cd> m(d, d);
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
  }

private:
  std::size_t n_;
  std::vector<Constraint> terms_;
  std::vector<std::uint64_t> xrows_;
  std::vector<std::size_t> pivots_;
  std::vector<std::uint64_t> reps_;
  std::vector<double> rep_amp_;
  std::vector<SparseState> vecs_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

enum class SolveMethod { Auto, Dense, Lanczos };

struct SpectrumOptions {
  SolveMethod method = SolveMethod::Auto;
  std::uint64_t seed = 7;
};

inline std::vector<double> dense_eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("dense eigensolve failed");
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

// All eigenvalues of a hermitian operator given only its action. Lanczos
// with full reorthogonalisation; when a Krylov space closes up, restart
// from a random vector orthogonal to everything seen so far. The blocks
// are invariant subspaces, so their tridiagonal spectra together give the
// full spectrum with multiplicities.
template <class MatVec>
std::vector<double> lanczos_full_spectrum(Eigen::Index d, MatVec&& op, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(static_cast<std::size_t>(d));
  std::vector<double> out;
  auto orthogonalise = [&](Eigen::VectorXcd& v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) v -= q * q.dot(v);
  };
  while (static_cast<Eigen::Index>(basis.size()) < d) {
    Eigen::VectorXcd v(d);
    double nv = 0;
    for (int attempt = 0; attempt < 8 && nv < 1e-6; ++attempt) {
      for (Eigen::Index i = 0; i < d; ++i) v(i) = cd(gauss(rng), gauss(rng));
      orthogonalise(v);
      nv = v.norm();
    }
    if (nv < 1e-6) throw Error("Lanczos restart failed to find a new direction");
    v /= nv;
    std::vector<double> alpha, beta;
    while (true) {
      basis.push_back(v);
      Eigen::VectorXcd w = op(v);
      double a = v.dot(w).real();
      alpha.push_back(a);
      orthogonalise(w);
      double b = w.norm();
      if (static_cast<Eigen::Index>(basis.size()) == d || b < 1e-10 * std::max(1.0, std::abs(a))) break;
      beta.push_back(b);
      v = w / b;
    }
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
    Eigen::VectorXd sub = Eigen::VectorXd::Zero(std::max<Eigen::Index>(0, diag.size() - 1));
    for (Eigen::Index i = 0; i < sub.size(); ++i) sub(i) = beta[static_cast<std::size_t>(i)];
    if (diag.size() == 1) {
      out.push_back(diag(0));
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Eigenvalues of h on the joint eigenspace of the signed constraints.
inline std::vector<double> spectrum(const PauliSum& h, const std::vector<Constraint>& sector,
                                    const SpectrumOptions& opt = {}) {
  if (!h.is_hermitian()) throw RelationError("spectrum: Hamiltonian is not hermitian");
  for (const auto& c : sector)
    if (!commutator(h, PauliSum(c.op)).is_zero()) throw RelationError("spectrum: sector term " + c.op.str() + " does not commute with the Hamiltonian");
  SectorBasis basis(h.num_qubits(), sector);
  bool dense = opt.method == SolveMethod::Dense ||
               (opt.method == SolveMethod::Auto && basis.dim() <= kDenseSectorDim);
  if (dense) return dense_eigenvalues(basis.restrict(h));
  // apply h to each sector vector once; Lanczos then runs on the sparse matrix
  auto m = basis.restrict_sparse(h);
  return lanczos_full_spectrum(m.rows(), [&](const Eigen::VectorXcd& v) { return Eigen::VectorXcd(m * v); }, opt.seed);
}

// Sorted-multiset comparison; max |a_i - b_i|, infinity on length mismatch.
inline double spectrum_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

} // namespace z2bos
