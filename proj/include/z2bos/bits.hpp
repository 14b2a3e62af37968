#pragma once

// GF(2) vectors and matrices. Chains, cochains and symplectic vectors all
// live here; elimination always picks the lowest available pivot so every
// basis it returns is reproducible.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace z2bos {

class BitVec {
public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  // Indices toggle, so a repeated index cancels (formal sums mod 2).
  static BitVec from_indices(std::size_t n, const std::vector<std::size_t>& idx) {
    BitVec v(n);
    for (auto i : idx) v.flip(i);
    return v;
  }
  static BitVec ones(std::size_t n) {
    BitVec v(n);
    for (auto& w : v.w_) w = ~std::uint64_t{0};
    v.trim();
    return v;
  }
  static BitVec unit(std::size_t n, std::size_t i) {
    BitVec v(n);
    v.set(i);
    return v;
  }
  static BitVec from_string(const std::string& s) {
    BitVec v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') v.set(i);
      else if (s[i] != '0') throw std::invalid_argument("BitVec: expected 0/1 string");
    }
    return v;
  }

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  bool operator[](std::size_t i) const { return get(i); }
  void set(std::size_t i, bool b = true) {
    auto m = std::uint64_t{1} << (i & 63);
    if (b) w_[i >> 6] |= m;
    else w_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  BitVec& operator^=(const BitVec& o) {
    check(o);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }
  BitVec& operator&=(const BitVec& o) {
    check(o);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }
  BitVec& operator|=(const BitVec& o) {
    check(o);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }
  BitVec& operator+=(const BitVec& o) { return *this ^= o; }
  friend BitVec operator+(BitVec a, const BitVec& b) { return a ^= b; }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    return std::any_of(w_.begin(), w_.end(), [](std::uint64_t w) { return w != 0; });
  }
  bool none() const { return !any(); }

  // Position of the lowest set bit, or size() when empty.
  std::size_t first() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(w_[k]));
    return n_;
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < w_.size(); ++k) {
      auto w = w_[k];
      while (w) {
        out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  // Low 64 bits; registers addressed as integers never exceed that.
  std::uint64_t low_word() const { return w_.empty() ? 0 : w_[0]; }
  static BitVec from_word(std::size_t n, std::uint64_t bits) {
    BitVec v(n);
    if (!v.w_.empty()) v.w_[0] = bits;
    v.trim();
    return v;
  }

  const std::vector<std::uint64_t>& words() const { return w_; }

  std::string str() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  // Concatenation a|b, used for symplectic (x|z) vectors.
  static BitVec concat(const BitVec& a, const BitVec& b) {
    BitVec v(a.n_ + b.n_);
    for (auto i : a.indices()) v.set(i);
    for (auto i : b.indices()) v.set(a.n_ + i);
    return v;
  }
  BitVec slice(std::size_t from, std::size_t len) const {
    BitVec v(len);
    for (std::size_t i = 0; i < len; ++i)
      if (get(from + i)) v.set(i);
    return v;
  }

  friend bool operator==(const BitVec& a, const BitVec& b) { return a.n_ == b.n_ && a.w_ == b.w_; }
  friend std::strong_ordering operator<=>(const BitVec& a, const BitVec& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    for (std::size_t k = a.w_.size(); k-- > 0;)
      if (a.w_[k] != b.w_[k]) return a.w_[k] <=> b.w_[k];
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = n_ * 0x9e3779b97f4a7c15ULL;
    for (auto w : w_) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }

private:
  void check(const BitVec& o) const {
    if (o.n_ != n_) throw std::invalid_argument("BitVec: length mismatch");
  }
  void trim() {
    if (n_ % 64 && !w_.empty()) w_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// The pairing (a,b): popcount of AND, mod 2.
inline bool dot(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  unsigned p = 0;
  for (std::size_t k = 0; k < a.words().size(); ++k)
    p ^= static_cast<unsigned>(std::popcount(a.words()[k] & b.words()[k]));
  return p & 1u;
}

struct BitVecHash {
  std::size_t operator()(const BitVec& v) const { return v.hash(); }
};

class BitMat {
public:
  BitMat() = default;
  BitMat(std::size_t nrows, std::size_t ncols) : nc_(ncols), rows_(nrows, BitVec(ncols)) {}

  static BitMat from_rows(std::size_t ncols, std::vector<BitVec> rows) {
    BitMat m;
    m.nc_ = ncols;
    for (auto& r : rows)
      if (r.size() != ncols) throw std::invalid_argument("BitMat: row length mismatch");
    m.rows_ = std::move(rows);
    return m;
  }
  static BitMat from_columns(std::size_t nrows, const std::vector<BitVec>& cols) {
    BitMat m(nrows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != nrows) throw std::invalid_argument("BitMat: column length mismatch");
      for (auto i : cols[j].indices()) m.set(i, j);
    }
    return m;
  }
  static BitMat identity(std::size_t n) {
    BitMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  std::size_t nrows() const { return rows_.size(); }
  std::size_t ncols() const { return nc_; }
  bool get(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
  void set(std::size_t i, std::size_t j, bool b = true) { rows_[i].set(j, b); }
  const BitVec& row(std::size_t i) const { return rows_[i]; }
  BitVec& row(std::size_t i) { return rows_[i]; }
  const std::vector<BitVec>& rows() const { return rows_; }

  BitVec column(std::size_t j) const {
    BitVec c(nrows());
    for (std::size_t i = 0; i < nrows(); ++i)
      if (rows_[i].get(j)) c.set(i);
    return c;
  }

  BitVec mul(const BitVec& x) const {
    if (x.size() != nc_) throw std::invalid_argument("BitMat::mul: dimension mismatch");
    BitVec y(nrows());
    for (std::size_t i = 0; i < nrows(); ++i)
      if (dot(rows_[i], x)) y.set(i);
    return y;
  }
  BitVec operator*(const BitVec& x) const { return mul(x); }

  BitMat operator*(const BitMat& b) const {
    if (nc_ != b.nrows()) throw std::invalid_argument("BitMat product: dimension mismatch");
    BitMat out(nrows(), b.ncols());
    for (std::size_t i = 0; i < nrows(); ++i)
      for (auto k : rows_[i].indices()) out.rows_[i] ^= b.rows_[k];
    return out;
  }
  BitMat& operator+=(const BitMat& b) {
    if (nrows() != b.nrows() || nc_ != b.nc_) throw std::invalid_argument("BitMat sum: shape mismatch");
    for (std::size_t i = 0; i < nrows(); ++i) rows_[i] ^= b.rows_[i];
    return *this;
  }
  friend BitMat operator+(BitMat a, const BitMat& b) { return a += b; }

  BitMat transpose() const {
    BitMat t(nc_, nrows());
    for (std::size_t i = 0; i < nrows(); ++i)
      for (auto j : rows_[i].indices()) t.set(j, i);
    return t;
  }

  friend bool operator==(const BitMat& a, const BitMat& b) { return a.nc_ == b.nc_ && a.rows_ == b.rows_; }

  bool is_zero() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const BitVec& r) { return r.none(); });
  }
  bool is_symmetric() const {
    if (nrows() != nc_) return false;
    for (std::size_t i = 0; i < nrows(); ++i)
      for (std::size_t j = i + 1; j < nc_; ++j)
        if (get(i, j) != get(j, i)) return false;
    return true;
  }
  bool is_alternating() const {
    if (!is_symmetric()) return false;
    for (std::size_t i = 0; i < nrows(); ++i)
      if (get(i, i)) return false;
    return true;
  }

  struct Echelon {
    std::vector<BitVec> rows;        // fully reduced, pivot order
    std::vector<std::size_t> pivots; // pivot column of each row
  };

  Echelon rref() const {
    Echelon e;
    std::vector<BitVec> work = rows_;
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc_ && r < work.size(); ++c) {
      std::size_t p = r;
      while (p < work.size() && !work[p].get(c)) ++p;
      if (p == work.size()) continue;
      std::swap(work[r], work[p]);
      for (std::size_t i = 0; i < work.size(); ++i)
        if (i != r && work[i].get(c)) work[i] ^= work[r];
      e.pivots.push_back(c);
      ++r;
    }
    work.resize(r);
    e.rows = std::move(work);
    return e;
  }

  std::size_t rank() const { return rref().pivots.size(); }

  // Basis of {x : Mx = 0}; one vector per free column, in increasing order.
  std::vector<BitVec> kernel() const {
    auto e = rref();
    std::vector<bool> is_pivot(nc_, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<BitVec> basis;
    for (std::size_t f = 0; f < nc_; ++f) {
      if (is_pivot[f]) continue;
      BitVec x(nc_);
      x.set(f);
      for (std::size_t k = 0; k < e.rows.size(); ++k)
        if (e.rows[k].get(f)) x.set(e.pivots[k]);
      basis.push_back(std::move(x));
    }
    return basis;
  }

  // Some x with Mx = b (free variables zero), or nullopt.
  std::optional<BitVec> solve(const BitVec& b) const {
    if (b.size() != nrows()) throw std::invalid_argument("BitMat::solve: dimension mismatch");
    // Augment and reduce.
    BitMat aug(nrows(), nc_ + 1);
    for (std::size_t i = 0; i < nrows(); ++i) {
      for (auto j : rows_[i].indices()) aug.set(i, j);
      if (b.get(i)) aug.set(i, nc_);
    }
    auto e = aug.rref();
    BitVec x(nc_);
    for (std::size_t k = 0; k < e.rows.size(); ++k) {
      if (e.pivots[k] == nc_) return std::nullopt;
      if (e.rows[k].get(nc_)) x.set(e.pivots[k]);
    }
    return x;
  }

  // Independent columns, chosen greedily from the left.
  std::vector<std::size_t> pivot_columns() const { return rref().pivots; }

private:
  std::size_t nc_ = 0;
  std::vector<BitVec> rows_;
};

// Incrementally built span that remembers how each reduced vector was
// assembled from the vectors handed to add(). Used wherever we need
// coordinates or membership witnesses rather than just a rank.
class GF2Span {
public:
  explicit GF2Span(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  std::size_t generators() const { return ngen_; }

  // Returns true when v was independent of everything added so far.
  bool add(const BitVec& v) {
    auto [r, c] = reduce(v);
    std::size_t id = ngen_++;
    for (auto& cc : combos_) cc = grow(cc);
    for (auto& d : dependencies_) d = grow(d);
    c = grow(c);
    c.flip(id);
    if (r.none()) {
      dependencies_.push_back(c);
      return false;
    }
    std::size_t p = r.first();
    // keep rows fully reduced on pivot columns
    for (std::size_t k = 0; k < rows_.size(); ++k)
      if (rows_[k].get(p)) {
        rows_[k] ^= r;
        combos_[k] ^= c;
      }
    rows_.push_back(r);
    combos_.push_back(c);
    pivots_.push_back(p);
    return true;
  }

  bool contains(const BitVec& v) const { return reduce(v).first.none(); }

  // Subset of added generators summing to v.
  std::optional<BitVec> coordinates(const BitVec& v) const {
    auto [r, c] = reduce(v);
    if (r.any()) return std::nullopt;
    return c;
  }

  // Each entry is a subset of generators that sums to zero.
  const std::vector<BitVec>& dependencies() const { return dependencies_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

private:
  BitVec grow(const BitVec& c) const {
    if (c.size() == ngen_) return c;
    BitVec g(ngen_);
    for (auto i : c.indices()) g.set(i);
    return g;
  }
  std::pair<BitVec, BitVec> reduce(const BitVec& v) const {
    if (v.size() != dim_) throw std::invalid_argument("GF2Span: dimension mismatch");
    BitVec r = v;
    BitVec c(ngen_);
    for (std::size_t k = 0; k < rows_.size(); ++k)
      if (r.get(pivots_[k])) {
        r ^= rows_[k];
        c ^= grow(combos_[k]);
      }
    return {r, c};
  }

  std::size_t dim_;
  std::size_t ngen_ = 0;
  std::vector<BitVec> rows_;
  std::vector<BitVec> combos_;
  std::vector<std::size_t> pivots_;
  std::vector<BitVec> dependencies_;
};

} // namespace z2bos
