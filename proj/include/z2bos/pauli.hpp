#pragma once

// Phase-exact Pauli strings. A term is i^p times a tensor product of
// letters P(x_k, z_k) with P(0,0)=I, P(1,0)=X, P(0,1)=Z, P(1,1)=Y, so
// X*Z = -iY comes out as p=3 with both bits set. Qubit 0 is the least
// significant bit of a basis index.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bits.hpp"
#include "errors.hpp"

namespace z2bos {

using cd = std::complex<double>;

inline cd ipow(int k) {
  switch (((k % 4) + 4) % 4) {
  case 0: return {1, 0};
  case 1: return {0, 1};
  case 2: return {-1, 0};
  default: return {0, -1};
  }
}

class PauliTerm {
public:
  PauliTerm() = default;
  explicit PauliTerm(std::size_t n) : x_(n), z_(n) {}
  PauliTerm(int phase, BitVec x, BitVec z) : phase_(static_cast<std::uint8_t>(((phase % 4) + 4) % 4)), x_(std::move(x)), z_(std::move(z)) {
    if (x_.size() != z_.size()) throw std::invalid_argument("PauliTerm: mask length mismatch");
  }

  static PauliTerm identity(std::size_t n) { return PauliTerm(n); }

  static PauliTerm single(std::size_t n, std::size_t q, char letter) {
    PauliTerm t(n);
    switch (letter) {
    case 'I': break;
    case 'X': t.x_.set(q); break;
    case 'Z': t.z_.set(q); break;
    case 'Y': t.x_.set(q); t.z_.set(q); break;
    default: throw std::invalid_argument("PauliTerm: unknown letter");
    }
    return t;
  }

  // letters[k] acts on qubit k
  static PauliTerm from_string(const std::string& letters, int phase = 0) {
    PauliTerm t(letters.size());
    for (std::size_t k = 0; k < letters.size(); ++k) t = t * single(letters.size(), k, letters[k]);
    return t.times_i(phase);
  }

  std::size_t num_qubits() const { return x_.size(); }
  int phase() const { return phase_; }
  const BitVec& x() const { return x_; }
  const BitVec& z() const { return z_; }

  char letter(std::size_t q) const {
    bool a = x_.get(q), b = z_.get(q);
    return a ? (b ? 'Y' : 'X') : (b ? 'Z' : 'I');
  }

  bool is_scalar() const { return x_.none() && z_.none(); }
  bool is_identity() const { return is_scalar() && phase_ == 0; }
  bool is_hermitian() const { return phase_ % 2 == 0; }
  bool is_diagonal() const { return x_.none(); }
  std::size_t weight() const { return (x_ | z_).popcount(); }

  PauliTerm times_i(int k) const {
    PauliTerm t = *this;
    t.phase_ = static_cast<std::uint8_t>((((phase_ + k) % 4) + 4) % 4);
    return t;
  }
  PauliTerm operator-() const { return times_i(2); }
  PauliTerm with_phase(int p) const { return PauliTerm(p, x_, z_); }

  PauliTerm operator*(const PauliTerm& b) const {
    if (num_qubits() != b.num_qubits()) throw std::invalid_argument("PauliTerm: register mismatch");
    BitVec x = x_ ^ b.x_;
    BitVec z = z_ ^ b.z_;
    // P(a)P(b) = i^{a.x a.z + b.x b.z + 2 a.z b.x - x z} P(a+b), summed per qubit
    long e = static_cast<long>(phase_) + b.phase_;
    e += static_cast<long>((x_ & z_).popcount());
    e += static_cast<long>((b.x_ & b.z_).popcount());
    e += 2 * static_cast<long>((z_ & b.x_).popcount());
    e -= static_cast<long>((x & z).popcount());
    return PauliTerm(static_cast<int>(((e % 4) + 4) % 4), std::move(x), std::move(z));
  }
  PauliTerm& operator*=(const PauliTerm& b) { return *this = *this * b; }

  // Inverse: P^{-1} = P^dagger.
  PauliTerm inverse() const { return PauliTerm((4 - phase_) % 4, x_, z_); }
  PauliTerm adjoint() const { return inverse(); }

  bool same_masks(const PauliTerm& o) const { return x_ == o.x_ && z_ == o.z_; }

  // k with *this = i^k * o; requires equal masks.
  int phase_relative_to(const PauliTerm& o) const {
    if (!same_masks(o)) throw RelationError("phase_relative_to: operators differ beyond a phase");
    return ((phase_ - o.phase_) % 4 + 4) % 4;
  }

  // Symplectic vector (x | z).
  BitVec symplectic() const { return BitVec::concat(x_, z_); }

  std::string str() const {
    static const char* ph[] = {"+", "+i", "-", "-i"};
    std::string s = ph[phase_];
    s += ' ';
    for (std::size_t q = 0; q < num_qubits(); ++q) s += letter(q);
    return s;
  }

  friend bool operator==(const PauliTerm& a, const PauliTerm& b) {
    return a.phase_ == b.phase_ && a.x_ == b.x_ && a.z_ == b.z_;
  }
  friend std::ostream& operator<<(std::ostream& os, const PauliTerm& t) { return os << t.str(); }
  // Orders by masks only; phases are carried as coefficients in sums.
  static bool mask_less(const PauliTerm& a, const PauliTerm& b) {
    if (a.x_ != b.x_) return a.x_ < b.x_;
    return a.z_ < b.z_;
  }

private:
  std::uint8_t phase_ = 0;
  BitVec x_, z_;
};

// 0 if ab = ba, 1 if ab = -ba.
inline int commutes(const PauliTerm& a, const PauliTerm& b) {
  if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("commutes: register mismatch");
  return static_cast<int>(dot(a.x(), b.z()) ^ dot(a.z(), b.x()));
}
inline bool commute(const PauliTerm& a, const PauliTerm& b) { return commutes(a, b) == 0; }

// Exponent s with P^2 = (-1)^s.
inline int square_sign(const PauliTerm& a) { return (a * a).phase() / 2; }

inline PauliTerm product(const std::vector<PauliTerm>& fs, std::size_t n) {
  PauliTerm p = PauliTerm::identity(n);
  for (const auto& f : fs) p *= f;
  return p;
}

// ---- sparse states ---------------------------------------------------------

class SparseState {
public:
  SparseState() = default;
  explicit SparseState(std::size_t n) : n_(n) {
    if (n > 64) throw SizeBoundError("opalg", "sparse states address at most 64 qubits");
  }
  static SparseState basis(std::size_t n, std::uint64_t b) {
    SparseState s(n);
    s.amp_[b] = 1.0;
    return s;
  }

  std::size_t num_qubits() const { return n_; }
  const std::map<std::uint64_t, cd>& amplitudes() const { return amp_; }
  std::size_t support_size() const { return amp_.size(); }

  cd at(std::uint64_t b) const {
    auto it = amp_.find(b);
    return it == amp_.end() ? cd{0, 0} : it->second;
  }
  void add(std::uint64_t b, cd a) { amp_[b] += a; }
  void set(std::uint64_t b, cd a) { amp_[b] = a; }

  SparseState& operator+=(const SparseState& o) {
    check(o);
    for (auto& [b, a] : o.amp_) amp_[b] += a;
    return *this;
  }
  SparseState& operator-=(const SparseState& o) {
    check(o);
    for (auto& [b, a] : o.amp_) amp_[b] -= a;
    return *this;
  }
  SparseState& operator*=(cd c) {
    for (auto& [b, a] : amp_) a *= c;
    return *this;
  }
  friend SparseState operator+(SparseState a, const SparseState& b) { return a += b; }
  friend SparseState operator-(SparseState a, const SparseState& b) { return a -= b; }
  friend SparseState operator*(cd c, SparseState a) { return a *= c; }

  double norm2() const {
    double s = 0;
    for (auto& [b, a] : amp_) s += std::norm(a);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  SparseState& prune(double tol = 1e-14) {
    for (auto it = amp_.begin(); it != amp_.end();)
      if (std::abs(it->second) <= tol) it = amp_.erase(it);
      else ++it;
    return *this;
  }
  SparseState normalized() const {
    SparseState s = *this;
    double nn = norm();
    if (nn == 0) throw Error("cannot normalise the zero state");
    s *= 1.0 / nn;
    return s;
  }

  friend cd inner(const SparseState& a, const SparseState& b) {
    a.check(b);
    cd s = 0;
    const auto& small = a.amp_.size() <= b.amp_.size() ? a.amp_ : b.amp_;
    const auto& large = a.amp_.size() <= b.amp_.size() ? b.amp_ : a.amp_;
    bool small_is_a = &small == &a.amp_;
    for (auto& [k, v] : small) {
      auto it = large.find(k);
      if (it == large.end()) continue;
      s += small_is_a ? std::conj(v) * it->second : std::conj(it->second) * v;
    }
    return s;
  }

  // max |a_b - b_b| over the union of supports
  friend double distance_inf(const SparseState& a, const SparseState& b) {
    double d = 0;
    for (auto& [k, v] : a.amp_) d = std::max(d, std::abs(v - b.at(k)));
    for (auto& [k, v] : b.amp_) d = std::max(d, std::abs(v - a.at(k)));
    return d;
  }

private:
  void check(const SparseState& o) const {
    if (o.n_ != n_) throw std::invalid_argument("SparseState: register mismatch");
  }
  std::size_t n_ = 0;
  std::map<std::uint64_t, cd> amp_;
};

inline SparseState apply(const PauliTerm& p, const SparseState& s) {
  if (p.num_qubits() != s.num_qubits()) throw std::invalid_argument("apply: register mismatch");
  const std::uint64_t x = p.x().low_word(), z = p.z().low_word();
  const int base = p.phase() + static_cast<int>(std::popcount(x & z));
  SparseState out(s.num_qubits());
  for (auto& [b, a] : s.amplitudes()) {
    int k = base + 2 * static_cast<int>(std::popcount(z & b) & 1);
    out.add(b ^ x, a * ipow(k));
  }
  return out;
}

// ---- sums ------------------------------------------------------------------

// Linear combinations of phase-0 Pauli strings with complex coefficients,
// kept sorted and merged.
class PauliSum {
public:
  PauliSum() = default;
  explicit PauliSum(std::size_t n) : n_(n) {}
  PauliSum(const PauliTerm& t, cd c = 1.0) : n_(t.num_qubits()) {
    add(t, c);
  }
  static PauliSum identity(std::size_t n, cd c = 1.0) { return PauliSum(PauliTerm::identity(n), c); }

  std::size_t num_qubits() const { return n_; }
  const std::vector<std::pair<cd, PauliTerm>>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  PauliSum& add(const PauliTerm& t, cd c) {
    if (t.num_qubits() != n_) throw std::invalid_argument("PauliSum: register mismatch");
    c *= ipow(t.phase());
    PauliTerm h = t.with_phase(0);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), h,
                               [](const auto& e, const PauliTerm& k) { return PauliTerm::mask_less(e.second, k); });
    if (it != terms_.end() && it->second.same_masks(h)) {
      it->first += c;
      if (std::abs(it->first) <= kDrop) terms_.erase(it);
    } else if (std::abs(c) > kDrop) {
      terms_.insert(it, {c, std::move(h)});
    }
    return *this;
  }

  PauliSum& operator+=(const PauliSum& o) {
    check(o);
    for (auto& [c, t] : o.terms_) add(t, c);
    return *this;
  }
  PauliSum& operator-=(const PauliSum& o) {
    check(o);
    for (auto& [c, t] : o.terms_) add(t, -c);
    return *this;
  }
  PauliSum& operator*=(cd s) {
    if (s == cd{0, 0}) terms_.clear();
    for (auto& e : terms_) e.first *= s;
    return *this;
  }
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(cd s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(PauliSum a, cd s) { return a *= s; }

  friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
    a.check(b);
    PauliSum out(a.n_);
    for (auto& [ca, ta] : a.terms_)
      for (auto& [cb, tb] : b.terms_) out.add(ta * tb, ca * cb);
    return out;
  }

  PauliSum adjoint() const {
    PauliSum out(n_);
    for (auto& [c, t] : terms_) out.add(t, std::conj(c));
    return out;
  }

  bool is_zero(double tol = 1e-12) const {
    for (auto& [c, t] : terms_)
      if (std::abs(c) > tol) return false;
    return true;
  }
  bool is_hermitian(double tol = 1e-12) const {
    for (auto& [c, t] : terms_)
      if (std::abs(c.imag()) > tol) return false;
    return true;
  }
  double max_coeff_distance(const PauliSum& o) const {
    PauliSum d = *this - o;
    double m = 0;
    for (auto& [c, t] : d.terms_) m = std::max(m, std::abs(c));
    return m;
  }

private:
  static constexpr double kDrop = 1e-15;
  void check(const PauliSum& o) const {
    if (o.n_ != n_) throw std::invalid_argument("PauliSum: register mismatch");
  }
  std::size_t n_ = 0;
  std::vector<std::pair<cd, PauliTerm>> terms_;
};

inline PauliSum commutator(const PauliSum& a, const PauliSum& b) { return a * b - b * a; }

inline SparseState apply(const PauliSum& h, const SparseState& s) {
  SparseState out(s.num_qubits());
  for (auto& [c, t] : h.terms()) {
    auto part = apply(t, s);
    part *= c;
    out += part;
  }
  return out.prune();
}

// ---- commuting groups ------------------------------------------------------

// A constraint T psi = sign psi, sign = +1 or -1.
struct Constraint {
  PauliTerm op;
  int sign = 1;
};

// Group generated by signed commuting hermitian Pauli terms. Tracks which
// generators are redundant and whether -1 is forced (empty joint
// eigenspace).
class StabilizerGroup {
public:
  explicit StabilizerGroup(std::size_t n) : n_(n), span_(2 * n) {}

  std::size_t num_qubits() const { return n_; }

  // Adds sign*op. Throws RelationError when op is not a commuting
  // involution with the current group.
  void add(const PauliTerm& op, int sign = 1) {
    if (op.num_qubits() != n_) throw std::invalid_argument("StabilizerGroup: register mismatch");
    if (!op.is_hermitian()) throw RelationError("constraint " + op.str() + " is not hermitian");
    PauliTerm g = sign < 0 ? -op : op;
    for (const auto& h : gens_)
      if (!commute(g, h)) throw RelationError("constraints " + g.str() + " and " + h.str() + " do not commute");
    gens_.push_back(g);
    if (!span_.add(g.symplectic())) {
      // dependent: the product over the dependency must be +1
      const auto& dep = span_.dependencies().back();
      PauliTerm p = PauliTerm::identity(n_);
      for (auto i : dep.indices()) p *= gens_[i];
      if (!p.is_identity()) consistent_ = false;
    } else {
      independent_.push_back(gens_.size() - 1);
    }
  }

  bool consistent() const { return consistent_; }
  std::size_t rank() const { return span_.rank(); }
  const std::vector<PauliTerm>& generators() const { return gens_; }
  std::vector<PauliTerm> independent_generators() const {
    std::vector<PauliTerm> out;
    for (auto i : independent_) out.push_back(gens_[i]);
    return out;
  }

  // If t (with its phase) equals a product of generators, that product's
  // generator subset; t must match including sign.
  std::optional<BitVec> represent(const PauliTerm& t) const {
    auto c = span_.coordinates(t.symplectic());
    if (!c) return std::nullopt;
    PauliTerm p = PauliTerm::identity(n_);
    for (auto i : c->indices()) p *= gens_[i];
    if (!(p == t)) return std::nullopt;
    return c;
  }
  // t equals +/- (or +/-i) a group element: returns the phase k with t = i^k g.
  std::optional<int> phase_in_group(const PauliTerm& t) const {
    auto c = span_.coordinates(t.symplectic());
    if (!c) return std::nullopt;
    PauliTerm p = PauliTerm::identity(n_);
    for (auto i : c->indices()) p *= gens_[i];
    return t.phase_relative_to(p);
  }

  // log2 of the joint +1 eigenspace dimension, nullopt when empty.
  std::optional<std::size_t> log2_dimension() const {
    if (!consistent_) return std::nullopt;
    return n_ - span_.rank();
  }

private:
  std::size_t n_;
  GF2Span span_;
  std::vector<PauliTerm> gens_;
  std::vector<std::size_t> independent_;
  bool consistent_ = true;
};

inline StabilizerGroup make_group(std::size_t n, const std::vector<Constraint>& cs) {
  StabilizerGroup g(n);
  for (const auto& c : cs) g.add(c.op, c.sign);
  return g;
}

// Rank of the symplectic span of a list of terms (phases ignored).
inline std::size_t symplectic_rank(const std::vector<PauliTerm>& ts) {
  if (ts.empty()) return 0;
  GF2Span s(2 * ts.front().num_qubits());
  for (const auto& t : ts) s.add(t.symplectic());
  return s.rank();
}

// Computational basis state b with T|b> = sign|b> for diagonal constraints.
inline std::optional<std::uint64_t> diagonal_eigenstate(std::size_t n, const std::vector<Constraint>& cs) {
  BitMat m(cs.size(), n);
  BitVec rhs(cs.size());
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const auto& t = cs[k].op;
    if (!t.is_diagonal() || !t.is_hermitian()) throw RelationError("diagonal_eigenstate: constraint is not diagonal");
    m.row(k) = t.z();
    // eigenvalue on |b> is i^p (-1)^{z.b}; want sign
    int want = cs[k].sign < 0 ? 1 : 0;
    int have = t.phase() / 2;
    if (want != have) rhs.set(k);
  }
  auto sol = m.solve(rhs);
  if (!sol) return std::nullopt;
  return sol->low_word();
}

} // namespace z2bos
