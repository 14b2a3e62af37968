#pragma once

// Subcommand bodies for the z2bos tool. Each one builds a Report; the
// driver in tools/main.cpp parses flags, writes files and maps exit codes.
// Reports carry no timestamps or paths so that a fixed seed reproduces
// them byte for byte.

#include <cstdio>
#include <filesystem>
#include <random>

#include <json.hpp>

#include "dual.hpp"
#include "gauge.hpp"
#include "heis.hpp"
#include "lattice_io.hpp"
#include "spectra.hpp"
#include "torus.hpp"

namespace z2bos::cli {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr std::size_t kSectorEnumBits = 12;  // `sectors` lists every label below this many cycles
inline constexpr std::size_t kSweepBudgetBits = 22; // sectors x basis states swept by `sectors`

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kSizeBound = 3 };

using ojson = nlohmann::ordered_json;

struct Options {
  std::string lattice;
  std::string out;
  std::string state;   // torus solve CSV
  std::string spec;    // gauss classify
  std::uint64_t seed = 1;
  std::optional<int> alpha;
  int beta = 0;
  std::string A;       // edge list
  std::vector<std::size_t> L;
  std::optional<double> J;
  double tolerance = kEigenTol;
  std::string h, nu;   // spectrum
  std::size_t hamiltonians = 3;
  std::string gram, diag;
};

struct Manifest {
  std::string layout;
  std::string ordering;
  BitVec eta;
  std::optional<int> alpha;
  std::optional<std::size_t> v1;
};

struct Report {
  std::string command;
  std::string lattice_hash;
  std::optional<Manifest> manifest;
  CheckLedger checks;
  ojson results = ojson::object();

  bool ok() const { return checks.all_pass(); }
};

// ---- flag parsing ----

inline std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string::npos) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::size_t parse_index(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s[0] == '-') throw ParseError(what + ": '" + s + "' is not a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline double parse_real(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw ParseError(what + ": '" + s + "' is not a number");
  return v;
}

// "0,3,5" -> indicator vector over n slots
inline BitVec parse_index_set(const std::string& s, std::size_t n, const std::string& what) {
  BitVec b(n);
  for (const auto& tok : split(s, ",;")) {
    auto i = parse_index(tok, what);
    if (i >= n) throw ParseError(what + ": index " + tok + " out of range (" + std::to_string(n) + ")");
    b.flip(i);
  }
  return b;
}

// "re" or "re:im"
inline cd parse_complex(const std::string& s, const std::string& what) {
  auto parts = split(s, ":");
  if (parts.size() == 1) return {parse_real(parts[0], what), 0.0};
  if (parts.size() == 2) return {parse_real(parts[0], what), parse_real(parts[1], what)};
  throw ParseError(what + ": '" + s + "' is not re or re:im");
}

// one value for every slot, or exactly n values
template <class T, class F>
std::vector<T> parse_list(const std::string& s, std::size_t n, const std::string& what, F&& one) {
  auto toks = split(s, ",;");
  if (toks.size() == 1) return std::vector<T>(n, one(toks[0], what));
  if (toks.size() != n)
    throw ParseError(what + ": expected 1 or " + std::to_string(n) + " values, got " + std::to_string(toks.size()));
  std::vector<T> out;
  for (const auto& t : toks) out.push_back(one(t, what));
  return out;
}

// rows separated by ',' or ';', entries as 0/1 characters
inline BitMat parse_gram(const std::string& s) {
  auto rows = split(s, ",;");
  if (rows.empty()) throw ParseError("--gram: empty matrix");
  std::vector<BitVec> bits;
  for (const auto& r : rows) {
    if (r.size() != rows.size() || r.find_first_not_of("01") != std::string::npos)
      throw ParseError("--gram: row '" + r + "' is not a 0/1 string of length " + std::to_string(rows.size()));
    bits.push_back(BitVec::from_string(r));
  }
  return BitMat::from_rows(rows.size(), bits);
}

inline BitVec parse_diag(const std::string& s, std::size_t n) {
  if (s.size() != n || s.find_first_not_of("01") != std::string::npos)
    throw ParseError("--diag: expected a 0/1 string of length " + std::to_string(n));
  return BitVec::from_string(s);
}

// ---- serialisation ----

inline ojson index_list(const BitVec& b) {
  ojson a = ojson::array();
  for (auto i : b.indices()) a.push_back(i);
  return a;
}

inline ojson to_json(const CheckRecord& r) {
  return ojson{{"id", r.id}, {"anchor", r.anchor}, {"status", r.pass ? "pass" : "fail"},
               {"instances", r.instances}, {"detail", r.detail}};
}

inline ojson to_json(const Manifest& m) {
  ojson j{{"layout", m.layout}, {"ordering", m.ordering}, {"eta", index_list(m.eta)}};
  j["alpha"] = m.alpha ? ojson(*m.alpha) : ojson(nullptr);
  j["v1"] = m.v1 ? ojson(*m.v1) : ojson(nullptr);
  return j;
}

inline ojson to_json(const Report& r) {
  ojson j{{"tool", "z2bos"}, {"version", kToolVersion}, {"command", r.command}};
  j["lattice_hash"] = r.lattice_hash.empty() ? ojson(nullptr) : ojson(r.lattice_hash);
  j["manifest"] = r.manifest ? to_json(*r.manifest) : ojson(nullptr);
  j["status"] = r.ok() ? "pass" : "fail";
  ojson checks = ojson::array();
  for (const auto& c : r.checks.records()) checks.push_back(to_json(c));
  j["checks"] = std::move(checks);
  j["results"] = r.results;
  return j;
}

inline std::string dump(const Report& r) { return to_json(r).dump(2) + "\n"; }

// ---- shared pieces ----

inline void merge_prefixed(CheckLedger& into, const CheckLedger& from, const std::string& prefix) {
  for (const auto& rec : from.records()) {
    auto& r = into.open(prefix + rec.id, rec.anchor);
    r = rec;
    r.id = prefix + rec.id;
  }
}

inline Graph require_lattice(const Options& o) {
  if (o.lattice.empty()) throw ParseError("--lattice is required");
  return load_lattice(o.lattice);
}

inline std::string ordering_name(const Graph& g) {
  if (g.has_star_orderings()) return "file";
  return g.all_even() ? "eulerian" : "edge-index";
}

inline GammaModel gamma_model(const Graph& g, const Options& o) {
  if (!o.alpha) return GammaModel(g);
  if (*o.alpha != 0 && *o.alpha != 1) throw ParseError("--alpha must be 0 or 1");
  if (!g.all_even()) throw ParseError("--alpha needs a lattice with every degree even");
  return GammaModel::with_alpha(g, *o.alpha);
}

inline Manifest manifest_of(const GammaModel& m, const std::string& layout, std::optional<std::size_t> v1 = {}) {
  const auto& g = m.graph();
  Manifest mf{layout, ordering_name(g), m.choice().eta, std::nullopt, v1};
  if (g.all_even()) mf.alpha = m.alpha();
  return mf;
}

inline Report start(const std::string& cmd, const Graph& g) {
  Report r;
  r.command = cmd;
  r.lattice_hash = lattice_hash(g);
  return r;
}

// ---- lattice validate ----

inline Report run_lattice_validate(const Options& o) {
  auto g = require_lattice(o);
  auto r = start("lattice validate", g);
  auto d = boundary_matrix(g);
  const auto ne = g.num_edges(), nv = g.num_vertices();

  auto& cd1 = r.checks.open("cycle-dimension", "dim Z1 = |E| - |V| + 1");
  auto z1 = ne - d.rank();
  CheckLedger::tally(cd1, z1 + nv == ne + 1, "kernel of the boundary map has dimension " + std::to_string(z1));
  auto& cb = r.checks.open("cycle-basis", "fundamental cycles are closed and independent");
  auto basis = cycle_basis(g);
  std::vector<BitVec> cols;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    CheckLedger::tally(cb, !boundary(g, basis.cycles[k]).any() && is_circuit(g, basis.circuits[k]),
                       [&] { return "cycle " + std::to_string(k); });
    cols.push_back(basis.cycles[k]);
  }
  CheckLedger::tally(cb, basis.size() == z1 && (cols.empty() || BitMat::from_columns(ne, cols).rank() == z1),
                     "basis size " + std::to_string(basis.size()));
  auto& fc = r.checks.open("face-closure", "every face boundary is a cycle");
  for (std::size_t f = 0; f < g.num_faces(); ++f)
    CheckLedger::tally(fc, !boundary(g, face_boundary(g, f)).any(), [&] { return "face " + std::to_string(f); });

  r.results["vertices"] = nv;
  r.results["edges"] = ne;
  r.results["faces"] = g.num_faces();
  r.results["cycle_dimension"] = z1;
  r.results["all_even"] = g.all_even();
  ojson odd = ojson::array();
  for (auto v : g.odd_vertices()) odd.push_back(v);
  r.results["odd_vertices"] = std::move(odd);
  r.results["star_orderings"] = g.has_star_orderings();
  return r;
}

// ---- relations verify ----

inline Report run_relations_verify(const Options& o) {
  auto g = require_lattice(o);
  auto r = start("relations verify", g);
  auto m = gamma_model(g, o);
  std::optional<std::size_t> v1;

  merge_prefixed(r.checks, verify_even_relations(g, FermiOptions{50, o.seed, std::nullopt}), "fermi:");
  merge_prefixed(r.checks, verify_gamma_relations(m, 50, o.seed), "gamma:");
  if (g.all_even()) {
    auto M = gauge_to_gamma_map(m);
    v1 = M.v1;
    merge_prefixed(r.checks, verify_gauge_gamma_map(M), "map:");
  } else {
    merge_prefixed(r.checks, verify_odd_extension(m, 100, o.seed), "odd:");
  }
  r.manifest = manifest_of(m, "file", v1);
  r.results["gamma_qubits"] = m.num_qubits();
  std::size_t n = 0;
  for (const auto& c : r.checks.records()) n += c.instances;
  r.results["instances"] = n;
  return r;
}

// ---- sectors ----

inline Report run_sectors(const Options& o) {
  auto g = require_lattice(o);
  auto r = start("sectors", g);
  auto m = gamma_model(g, o);
  r.manifest = manifest_of(m, "file");
  const auto n = m.num_qubits();
  const auto nc = m.cycles().size();
  // every sector up to 2^kSectorEnumBits of them, else a seeded sample
  std::vector<SectorLabel> labels;
  const bool sampled = nc > kSectorEnumBits;
  if (!sampled) {
    labels = m.all_labels();
  } else {
    std::mt19937_64 rng(o.seed);
    labels.push_back({BitVec(nc)});
    for (std::size_t k = 1; k < (std::size_t{1} << kSectorEnumBits); ++k) {
      BitVec b(nc);
      for (std::size_t i = 0; i < nc; ++i)
        if (rng() & 1u) b.set(i);
      labels.push_back({b});
    }
  }
  // the sweep costs 2^n per sector; past the budget the rank count stands alone
  const bool exhaustive = n <= kExhaustiveQubitLimit && (labels.size() << n) <= (std::size_t{1} << kSweepBudgetBits);
  const std::size_t want = g.all_even() ? std::size_t{1} << (g.num_vertices() - 1) : m.predicted_sector_dimension();

  auto& dm = r.checks.open("sector-dimension", g.all_even() ? "dim H_[A] = 2^(|V|-1)" : "dim H_[A] = 2^(|V|-1+|V_odd|/2)");
  auto& ex = r.checks.open("sector-exhaustive", "stabilizer rank agrees with a sweep over basis states");
  auto& fp = r.checks.open("flux-parity", "total Gamma* = (-1)^(alpha + ([A], zeta)) on H_[A]");
  ojson per = ojson::array();
  for (const auto& l : labels) {
    auto dim = m.sector_dimension_by_rank(l);
    CheckLedger::tally(dm, dim == want, [&] { return "sector " + l.str() + " has dimension " + std::to_string(dim); });
    if (exhaustive) {
      auto d2 = m.sector_dimension_exhaustive(l);
      CheckLedger::tally(ex, d2 == dim, [&] { return "sector " + l.str() + ": sweep " + std::to_string(d2); });
    }
    ojson s{{"label", l.str()}, {"A", index_list(m.cochain_of(l))}, {"dim", dim}};
    if (g.all_even()) {
      int parity = sector_parity(m, l);
      auto cs = m.sector_constraints(l);
      cs.push_back({m.total_parity(), parity ? -1 : 1});
      auto same = make_group(n, cs).log2_dimension();
      cs.back().sign = -cs.back().sign;
      auto other = make_group(n, cs).log2_dimension();
      bool ok = same && (std::size_t{1} << *same) == dim && !other;
      CheckLedger::tally(fp, ok, [&] { return "sector " + l.str(); });
      s["parity"] = parity;
    }
    per.push_back(std::move(s));
  }
  r.results["sectors"] = sampled ? ojson(nullptr) : ojson(labels.size());
  r.results["log2_sectors"] = nc;
  r.results["sampled"] = sampled ? ojson(labels.size()) : ojson(false);
  r.results["exhaustive"] = exhaustive;
  r.results["dim"] = want;
  r.results["per_sector"] = std::move(per);
  return r;
}

// ---- spectrum ----

inline std::vector<QuadraticHamiltonian> hamiltonians(const Graph& g, const Options& o) {
  std::vector<QuadraticHamiltonian> out;
  if (!o.h.empty() || !o.nu.empty()) {
    auto h = o.h.empty() ? std::vector<cd>(g.num_edges(), cd{1.0, 0.0})
                         : parse_list<cd>(o.h, g.num_edges(), "--h", parse_complex);
    auto nu = o.nu.empty() ? std::vector<double>(g.num_vertices(), 0.0)
                           : parse_list<double>(o.nu, g.num_vertices(), "--nu", parse_real);
    out.push_back(QuadraticHamiltonian::hermitian(std::move(h), std::move(nu)));
    return out;
  }
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t k = 0; k < o.hamiltonians; ++k) {
    std::vector<cd> h;
    std::vector<double> nu;
    for (std::size_t e = 0; e < g.num_edges(); ++e) h.emplace_back(u(rng), u(rng));
    for (std::size_t v = 0; v < g.num_vertices(); ++v) nu.push_back(u(rng));
    out.push_back(QuadraticHamiltonian::hermitian(std::move(h), std::move(nu)));
  }
  return out;
}

inline Report run_spectrum(const Options& o) {
  auto g = require_lattice(o);
  auto r = start("spectrum", g);
  if (!g.all_even()) throw OddDegreeError(g.odd_vertices().front());
  auto m = gamma_model(g, o);
  r.manifest = manifest_of(m, "file");
  std::vector<SectorLabel> labels;
  if (!o.A.empty()) labels.push_back(m.label_of(parse_index_set(o.A, g.num_edges(), "--A")));
  else labels = m.all_labels();

  auto Hs = hamiltonians(g, o);
  auto& sm = r.checks.open("spectrum-match", "spec H_Gamma on H_[A] = parity-filtered subset sums of h^A");
  CheckRecord* pen = nullptr;
  const bool penalty = o.J && g.num_faces() > 0;
  if (penalty) pen = &r.checks.open("penalty-shift", "each level of a non-flat sector rises by J times its violated faces");
  ojson runs = ojson::array();
  for (std::size_t k = 0; k < Hs.size(); ++k) {
    auto rep = spectrum_match(m, Hs[k], labels);
    rep.tolerance = o.tolerance;
    CheckLedger::tally(sm, rep.ok(), [&] { return "hamiltonian " + std::to_string(k) + ": " + rep.first_mismatch(); });
    ojson sectors = ojson::array();
    for (const auto& s : rep.sectors) {
      sectors.push_back({{"label", s.label.str()}, {"A", index_list(s.A)}, {"parity", s.parity},
                         {"flat", is_flat(g, s.A)}, {"exact", s.exact}, {"oracle", s.oracle},
                         {"deviation", s.deviation}});
    }
    ojson run{{"hamiltonian", k}, {"max_deviation", rep.max_deviation()}, {"sectors", std::move(sectors)}};
    if (penalty) {
      auto h = gamma_hamiltonian(m, Hs[k]);
      auto hc = h + constraint_penalty(m, *o.J);
      ojson shifted = ojson::array();
      for (const auto& s : rep.sectors) {
        std::size_t bad = 0;
        for (std::size_t f = 0; f < g.num_faces(); ++f) bad += dot(s.A, face_boundary(g, f));
        auto after = spectrum(hc, m.sector_constraints(s.label));
        bool ok = after.size() == s.exact.size();
        for (std::size_t i = 0; ok && i < after.size(); ++i) {
          double shift = after[i] - s.exact[i];
          ok = std::abs(shift - *o.J * double(bad)) <= o.tolerance && (bad == 0 || shift >= *o.J - o.tolerance);
        }
        CheckLedger::tally(*pen, ok, [&] { return "hamiltonian " + std::to_string(k) + ", sector " + s.label.str(); });
        shifted.push_back({{"label", s.label.str()}, {"violated_faces", bad}, {"penalised", after}});
      }
      run["penalty"] = {{"J", *o.J}, {"sectors", std::move(shifted)}};
    }
    runs.push_back(std::move(run));
  }
  r.results["tolerance"] = o.tolerance;
  r.results["runs"] = std::move(runs);
  return r;
}

// ---- torus solve ----

struct TorusOutput {
  Report report;
  std::optional<SparseState> state; // sigma-register ground state
};

inline std::string state_csv(const SparseState& s) {
  std::string out = "index,re,im\n";
  char buf[96];
  for (const auto& [b, a] : s.amplitudes()) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n", static_cast<unsigned long long>(b), a.real(), a.imag());
    out += buf;
  }
  return out;
}

inline TorusOutput run_torus_solve(const Options& o) {
  if (o.L.size() < 2 || o.L.size() > 3) throw ParseError("--L takes two or three sizes");
  Torus t(o.L);
  TorusModel tm(t);
  const auto& m = tm.gamma();
  TorusOutput res;
  auto& r = res.report;
  r = start("torus solve", t.graph());
  std::string layout = "torus";
  for (std::size_t i = 0; i < o.L.size(); ++i) layout += (i ? "x" : " ") + std::to_string(o.L[i]);
  r.manifest = Manifest{layout, "torus", tm.eta(), m.alpha(), std::size_t{0}};
  const auto n = m.num_qubits();

  // generic count in the Gamma register: plaquettes, then the loops at the origin
  std::vector<Constraint> cs;
  for (std::size_t v = 0; v < t.num_vertices(); ++v) cs.push_back({m.gamma_star(v), tm.eta().get(v) ? -1 : 1});
  for (std::size_t f = 0; f < t.num_faces(); ++f) cs.push_back({tm.plaquette(f), 1});
  auto before = make_group(n, cs).log2_dimension();
  for (std::size_t j = 1; j <= t.dims(); ++j) cs.push_back({tm.loop(j, 0), 1});
  auto after = make_group(n, cs).log2_dimension();
  // The loops pin the flux class; with all loop signs +1 that class can
  // have the wrong parity for eta (it does on 3x3x3), so only the
  // plaquettes are required to be solvable here.
  auto& cons = r.checks.open("plaquettes-consistent", "the plaquette constraints have a joint solution");
  CheckLedger::tally(cons, before.has_value(), "joint eigenspace empty");
  r.results["log2_solutions_plaquettes"] = before ? ojson(*before) : ojson(nullptr);
  r.results["log2_solutions_with_loops"] = after ? ojson(*after) : ojson(nullptr);

  const bool sigma = t.dims() == 2 && t.all_even();
  r.results["sigma_frame"] = sigma;
  if (!sigma) return res;

  if (tm.admissible_dimension() > kRefSupportLimit) throw SizeBoundError("torus", "admissible chain space too large to enumerate");
  constexpr double tol = 1e-12;
  auto ref = tm.ref_state();
  auto P = tm.reduced_plaquettes();
  auto& sup = r.checks.open("ref-support", "|ref> is supported on 2^(L1 L2/2 + 1) admissible chains");
  auto expect = std::size_t{1} << (t.num_vertices() / 2 + 1);
  CheckLedger::tally(sup, ref.support_size() == expect && std::abs(ref.norm() - 1.0) <= tol,
                     "support " + std::to_string(ref.support_size()) + ", norm " + std::to_string(ref.norm()));
  auto& rp = r.checks.open("ref-plaquettes", "P(f)|ref> = |ref> for every face");
  for (std::size_t f = 0; f < P.size(); ++f)
    CheckLedger::tally(rp, distance_inf(apply(P[f], ref), ref) <= tol, [&] { return "face " + std::to_string(f); });
  auto L1 = tm.reduce(tm.loop(1, 0)), L2 = tm.reduce(tm.loop(2, 0));
  auto proj = ref + apply(L1, ref);
  proj = proj + apply(L2, proj);
  proj = 0.25 * proj;
  auto& pn = r.checks.open("loop-projection-norm", "(1+L1)/2 (1+L2)/2 |ref> has norm 1/2");
  CheckLedger::tally(pn, std::abs(proj.norm() - 0.5) <= tol, "norm " + std::to_string(proj.norm()));

  auto g0 = tm.ground_state();
  auto& gs = r.checks.open("ground-state", "|0> is normalised and satisfies every plaquette and loop constraint");
  CheckLedger::tally(gs, std::abs(g0.norm() - 1.0) <= tol, "norm " + std::to_string(g0.norm()));
  for (std::size_t f = 0; f < P.size(); ++f)
    CheckLedger::tally(gs, distance_inf(apply(P[f], g0), g0) <= tol, [&] { return "face " + std::to_string(f); });
  for (std::size_t j = 1; j <= 2; ++j)
    for (std::size_t v = 0; v < t.num_vertices(); ++v)
      CheckLedger::tally(gs, distance_inf(apply(tm.reduce(tm.loop(j, v)), g0), g0) <= tol,
                         [&] { return "loop " + std::to_string(j) + " at vertex " + std::to_string(v); });

  r.results["admissible_dimension"] = tm.admissible_dimension();
  r.results["ref_support"] = ref.support_size();
  r.results["ground_state_support"] = g0.support_size();
  res.state = std::move(g0);
  return res;
}

// ---- gauss classify ----

// {"T": [[edges of T v0], [edges of T v1], ...], "mu": [vertices]}
inline GaussSpec parse_gauss_spec(const std::string& text, const Graph& g) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_col(text, e.byte ? e.byte - 1 : 0);
    throw ParseError(std::string("gauss spec: ") + e.what(), line, col);
  }
  if (!j.is_object() || !j.contains("T") || !j["T"].is_array()) throw ParseError("gauss spec: missing array \"T\"");
  if (j["T"].size() != g.num_vertices())
    throw ParseError("gauss spec: \"T\" needs one edge list per vertex (" + std::to_string(g.num_vertices()) + ")");
  auto s = standard_spec(g);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (!j["T"][v].is_array()) throw ParseError("gauss spec: T[" + std::to_string(v) + "] is not a list");
    for (const auto& e : j["T"][v]) {
      auto k = detail::as_index(e, "gauss spec edge");
      if (k >= g.num_edges()) throw ParseError("gauss spec: edge " + std::to_string(k) + " out of range");
      s.T.set(k, v, !s.T.get(k, v));
    }
  }
  if (j.contains("mu")) {
    if (!j["mu"].is_array()) throw ParseError("gauss spec: \"mu\" is not a list");
    for (const auto& v : j["mu"]) {
      auto k = detail::as_index(v, "gauss spec vertex");
      if (k >= g.num_vertices()) throw ParseError("gauss spec: vertex " + std::to_string(k) + " out of range");
      s.mu.flip(k);
    }
  }
  return s;
}

inline bool is_witness(const GaugeRegister& reg, const GaussSpec& a, const GaussSpec& b, const CanonicalTransform& c) {
  if (!is_canonical(reg.graph(), c)) return false;
  for (std::size_t v = 0; v < reg.graph().num_vertices(); ++v)
    if (canonical_image(reg, c, gauss(reg, a, v)) != gauss(reg, b, v)) return false;
  return true;
}

inline ojson witness_json(const Graph& g, const CanonicalTransform& c) {
  ojson pairs = ojson::array();
  for (std::size_t a = 0; a < g.num_edges(); ++a)
    for (std::size_t b = a + 1; b < g.num_edges(); ++b)
      if (c.S.get(a, b)) pairs.push_back({a, b});
  return {{"theta", index_list(c.theta)}, {"S", std::move(pairs)}};
}

inline Report run_gauss_classify(const Options& o) {
  std::optional<Torus> torus;
  Graph g;
  if (!o.L.empty()) {
    if (!o.lattice.empty()) throw ParseError("give either --lattice or --L");
    torus.emplace(o.L);
    g = torus->graph();
  } else {
    g = require_lattice(o);
  }
  auto r = start("gauss classify", g);
  GaugeRegister reg(g);
  const auto ne = g.num_edges();

  GaussSpec spec;
  std::string source;
  if (!o.spec.empty()) {
    spec = parse_gauss_spec(read_text_file(o.spec), g);
    source = "file";
  } else if (torus) {
    source = "chessboard";
  } else if (g.all_even()) {
    auto M = gauge_to_gamma_map(gamma_model(g, o));
    spec = M.deformed_spec();
    source = "deformed";
    r.manifest = manifest_of(M.model, torus ? "torus" : "file", M.v1);
  } else {
    spec = standard_spec(g);
    source = "standard";
  }

  if (source == "chessboard") {
    auto& zb = r.checks.open("zeta-boundary", "zeta is the boundary of a 2-chain");
    auto xi = bounding_chain(g, zeta(g));
    CheckLedger::tally(zb, xi.has_value(), "zeta is not in the span of the face boundaries (rank test)");
    auto& cb = r.checks.open("chessboard", "the chessboard 2-chain has boundary zeta");
    ojson res{{"zeta_is_boundary", xi.has_value()}};
    try {
      auto x = chessboard_trivialization(*torus);
      CheckLedger::tally(cb, boundary2(g, x) == zeta(g), "boundary of the chessboard differs from zeta");
      res["xi"] = index_list(x);
      spec = chessboard_spec(*torus, BitVec(g.num_vertices()));
      auto& lc = r.checks.open("chessboard-local", "chessboard Gauss operators are local");
      CheckLedger::tally(lc, is_local(g, spec), "non-local Gauss operator");
    } catch (const GraphError& e) {
      CheckLedger::tally(cb, false, e.what());
      r.results["chessboard"] = std::move(res);
      return r;
    }
    r.results["chessboard"] = std::move(res);
  }

  auto& vs = r.checks.open("valid-spec", "d T = T^t d and the Gauss operators commute");
  CheckLedger::tally(vs, is_valid(g, spec), "invalid Gauss specification");
  if (!vs.pass) return r;
  auto cls = classify(reg, spec);
  std::size_t v1 = r.manifest && r.manifest->v1 ? *r.manifest->v1 : 0;
  auto canon = nonlocal_spec(g, cls.tau, cls.alpha, v1);
  auto w = equivalence_witness(reg, spec, canon);
  auto& wc = r.checks.open("class-witness", "a canonical transformation carries the spec to (tau, alpha) at v1");
  CheckLedger::tally(wc, w && is_witness(reg, spec, canon, *w), "no witness found");

  auto& zd = r.checks.open("zb-dimension", "dim Z/B = |E| - |V| + 1");
  auto dim = zb_dimension(g);
  CheckLedger::tally(zd, dim == cycle_rank(g), "rank computation gives " + std::to_string(dim));
  std::optional<std::size_t> brute;
  if (ne <= 6) {
    brute = zb_dimension_brute_force(g);
    CheckLedger::tally(zd, *brute == dim, "brute force gives " + std::to_string(*brute));
  }

  r.results["source"] = source;
  r.results["class"] = {{"tau", index_list(cls.tau)}, {"alpha", cls.alpha}};
  r.results["v1"] = v1;
  r.results["local"] = is_local(g, spec);
  r.results["witness"] = w ? witness_json(g, *w) : ojson(nullptr);
  r.results["zb_dimension"] = dim;
  r.results["zb_brute_force"] = brute ? ojson(*brute) : ojson(nullptr);
  return r;
}

// ---- dual check ----

inline Report run_dual_check(const Options& o) {
  auto g = require_lattice(o);
  auto r = start("dual check", g);
  if (o.beta != 0 && o.beta != 1) throw ParseError("--beta must be 0 or 1");
  BitVec eps(g.num_vertices());
  if (o.beta) eps.set(0);
  DualModel d(g, build_nu(g), eps);
  r.manifest = manifest_of(d.gamma_model(), "file");
  merge_prefixed(r.checks, duality_check(d), "dual:");
  auto& gd = r.checks.open("global-dimension", "the global constraint cuts out 2^(|E|-1) dimensions");
  auto dim = make_group(g.num_edges(), {d.global_constraint()}).log2_dimension();
  CheckLedger::tally(gd, dim && *dim + 1 == g.num_edges(), "wrong dimension");
  auto& gm = r.checks.open("gamma-dimension", "total Gamma* = (-1)^beta has the same dimension on the Gamma side");
  const auto& m = d.gamma_model();
  auto gdim = make_group(m.num_qubits(), {{m.total_parity(), o.beta ? -1 : 1}}).log2_dimension();
  CheckLedger::tally(gm, dim && gdim && *gdim == *dim, "dimensions differ");
  r.results["beta"] = d.beta();
  r.results["alpha"] = d.alpha();
  r.results["eps"] = index_list(eps);
  r.results["log2_global_dimension"] = dim ? ojson(*dim) : ojson(nullptr);
  return r;
}

// ---- heis arf ----

inline Report run_heis_arf(const Options& o) {
  if (o.gram.empty()) throw ParseError("--gram is required");
  auto gram = parse_gram(o.gram);
  auto diag = parse_diag(o.diag.empty() ? std::string(gram.nrows(), '0') : o.diag, gram.nrows());
  if (!gram.is_alternating()) throw ParseError("--gram must be symmetric with zero diagonal");
  if (gram.nrows() > kZeroCountBits) throw SizeBoundError("heis", "form too large to count zeros");
  QuadraticFormZ2 Q(diag, gram);
  Report r;
  r.command = "heis arf";
  if (!Q.nonsingular()) throw ParseError("--gram is singular");
  int a = arf(Q);
  auto zc = zero_count(Q);
  auto& ac = r.checks.open("arf-count", "Arf from the Darboux form equals Arf from counting zeros");
  CheckLedger::tally(ac, a == arf_by_count(Q), "zero count disagrees");
  if (a == 0) {
    merge_prefixed(r.checks, check_heisenberg(standard_rep(Q)), "rep:");
  }
  r.results["arf"] = a;
  r.results["zero_count"] = zc;
  r.results["dimension"] = Q.dimension();
  return r;
}

} // namespace z2bos::cli
