#pragma once

// Random even-algebra words and their dense Fock images, shared by the
// fermi tests and the acceptance binary.

#include <algorithm>
#include <random>

#include <z2bos/fermi.hpp>

#include "oracle.hpp"

namespace oracle {

using z2bos::Graph;
using z2bos::GammaToken;
using z2bos::KineticToken;
using z2bos::OrientedEdge;
using z2bos::Token;
using z2bos::Word;
using z2bos::random_circuit;

// Dense Fock images straight from annihilation matrices.
struct DenseFock {
  explicit DenseFock(const Graph& g) : g(g), n(g.num_vertices()) {
    for (std::size_t v = 0; v < n; ++v) a.push_back(annihilate(n, v));
  }
  Mat X(std::size_t v) const { return a[v] + a[v].adjoint(); }
  Mat gamma(std::size_t v) const {
    auto d = a[v].rows();
    return Mat::Identity(d, d) - 2.0 * a[v].adjoint() * a[v];
  }
  Mat s(OrientedEdge e) const { return X(g.source(e)) * X(g.target(e)); }
  Mat word(const Word& w) const {
    auto d = Eigen::Index{1} << n;
    Mat m = Mat::Identity(d, d);
    for (const auto& t : w) {
      if (auto* gt = std::get_if<GammaToken>(&t)) m = m * gamma(gt->v);
      else m = m * s(std::get<KineticToken>(t).e);
    }
    return m;
  }
  Graph g;
  std::size_t n;
  std::vector<Mat> a;
};

inline Token random_token(const Graph& g, std::mt19937_64& rng) {
  if (rng() % 3 == 0) return GammaToken{rng() % g.num_vertices()};
  return KineticToken{{rng() % g.num_edges(), static_cast<bool>(rng() & 1u)}};
}

inline Word random_word(const Graph& g, std::size_t len, std::mt19937_64& rng) {
  Word w;
  for (std::size_t k = 0; k < len; ++k) w.push_back(random_token(g, rng));
  return w;
}

// A second word related to w: equal by relations, a shuffle, or unrelated.
inline Word variant(const Graph& g, const Word& w, std::mt19937_64& rng) {
  Word out = w;
  switch (rng() % 4) {
  case 0: std::shuffle(out.begin(), out.end(), rng); break;
  case 1: { // insert s(e) s(ebar) and gamma(v)^2
    auto at = out.begin() + static_cast<std::ptrdiff_t>(rng() % (out.size() + 1));
    OrientedEdge e{rng() % g.num_edges(), false};
    at = out.insert(at, {KineticToken{e}, KineticToken{e.rev()}});
    auto v = rng() % g.num_vertices();
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(rng() % (out.size() + 1)), {GammaToken{v}, GammaToken{v}});
    break;
  }
  case 2: { // insert a whole circuit, equal to 1 by the loop relation
    auto c = random_circuit(g, rng, 1 + rng() % 6, rng() % g.num_vertices());
    Word cw;
    for (auto o : c) cw.push_back(KineticToken{o});
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(rng() % (out.size() + 1)), cw.begin(), cw.end());
    break;
  }
  default: out = random_word(g, w.size(), rng);
  }
  return out;
}

} // namespace oracle
