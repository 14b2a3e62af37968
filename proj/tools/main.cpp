#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <z2bos/cli.hpp>

namespace {

using namespace z2bos;
using namespace z2bos::cli;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed: " + path);
}

int emit(const Report& r, const Options& o) {
  auto text = dump(r);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
    std::cout << r.command << ": " << (r.ok() ? "pass" : "fail") << " (" << r.checks.records().size() << " checks)\n";
  }
  if (auto* f = r.checks.first_failure()) std::cerr << "failed: " << f->id << ": " << f->detail << "\n";
  return r.ok() ? kOk : kCheckFailed;
}

// default CSV path: next to the report
std::string state_path(const Options& o) {
  if (!o.state.empty()) return o.state;
  if (o.out.empty()) return {};
  auto p = std::filesystem::path(o.out);
  return p.replace_extension(".state.csv").string();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bosonization of lattice fermions: verification driver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  Options o;
  std::function<int()> action;

  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "write the JSON report here instead of stdout");
    c->add_option("--seed", o.seed, "seed for randomized sweeps")->capture_default_str();
  };
  auto lattice = [&](CLI::App* c, bool required = true) {
    auto* opt = c->add_option("--lattice", o.lattice, "lattice JSON file");
    if (required) opt->required();
  };
  auto alpha = [&](CLI::App* c) { c->add_option("--alpha", o.alpha, "0|1: pick eta so that alpha takes this value"); };

  auto* lat = app.add_subcommand("lattice", "lattice files")->require_subcommand(1);
  auto* validate = lat->add_subcommand("validate", "parse a lattice and check its chain complex");
  common(validate);
  lattice(validate);
  validate->callback([&] { action = [&] { return emit(run_lattice_validate(o), o); }; });

  auto* rel = app.add_subcommand("relations", "operator relations")->require_subcommand(1);
  auto* verify = rel->add_subcommand("verify", "fermion, Gamma-model and gauge-map relation sweeps");
  common(verify);
  lattice(verify);
  alpha(verify);
  verify->callback([&] { action = [&] { return emit(run_relations_verify(o), o); }; });

  auto* sec = app.add_subcommand("sectors", "enumerate flux sectors and their dimensions");
  common(sec);
  lattice(sec);
  alpha(sec);
  sec->callback([&] { action = [&] { return emit(run_sectors(o), o); }; });

  auto* spec = app.add_subcommand("spectrum", "compare H_Gamma with the free-fermion oracle per sector");
  spec->set_help_flag("--help", "print this help"); // -h would clash with --h
  common(spec);
  lattice(spec);
  alpha(spec);
  spec->add_option("--h", o.h, "hoppings: one value or one per edge, each re or re:im");
  spec->add_option("--nu", o.nu, "potentials: one value or one per vertex");
  spec->add_option("--A", o.A, "gauge field as an edge list; restricts to its sector");
  spec->add_option("--J", o.J, "also check the plaquette penalty with this coupling");
  spec->add_option("--hamiltonians", o.hamiltonians, "random Hamiltonians when --h/--nu are absent")->capture_default_str();
  spec->add_option("--tolerance", o.tolerance, "absolute eigenvalue tolerance")->capture_default_str();
  spec->callback([&] { action = [&] { return emit(run_spectrum(o), o); }; });

  auto* tor = app.add_subcommand("torus", "toric-code constraints on a torus")->require_subcommand(1);
  auto* solve = tor->add_subcommand("solve", "build and verify the constrained ground state");
  common(solve);
  solve->add_option("--L", o.L, "torus sizes, two or three")->required()->expected(2, 3);
  solve->add_option("--state", o.state, "ground-state CSV (default: next to --out)");
  solve->callback([&] {
    action = [&] {
      auto res = run_torus_solve(o);
      if (res.state) {
        auto path = state_path(o);
        if (!path.empty()) write_file(path, state_csv(*res.state));
      }
      return emit(res.report, o);
    };
  });

  auto* gs = app.add_subcommand("gauss", "Gauss-law specifications")->require_subcommand(1);
  auto* cls = gs->add_subcommand("classify", "class (tau, alpha) of a Gauss specification, with a witness");
  common(cls);
  lattice(cls, false);
  alpha(cls);
  cls->add_option("--spec", o.spec, "Gauss specification JSON");
  cls->add_option("--L", o.L, "2-d torus sizes: classify the chessboard specification")->expected(2, 3);
  cls->callback([&] { action = [&] { return emit(run_gauss_classify(o), o); }; });

  auto* du = app.add_subcommand("dual", "the operator duality")->require_subcommand(1);
  auto* check = du->add_subcommand("check", "relation ledger for the duality map");
  common(check);
  lattice(check);
  check->add_option("--beta", o.beta, "0|1: parity of the background charge")->capture_default_str();
  check->callback([&] { action = [&] { return emit(run_dual_check(o), o); }; });

  auto* he = app.add_subcommand("heis", "quadratic forms over GF(2)")->require_subcommand(1);
  auto* arfc = he->add_subcommand("arf", "Arf invariant and zero count");
  common(arfc);
  arfc->add_option("--gram", o.gram, "alternating Gram matrix, rows as 0/1 strings separated by ','")->required();
  arfc->add_option("--diag", o.diag, "values Q(x_i) as a 0/1 string");
  arfc->callback([&] { action = [&] { return emit(run_heis_arf(o), o); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    return action();
  } catch (const SizeBoundError& e) {
    std::cerr << "size bound: " << e.what() << "\n";
    return kSizeBound;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const GraphError& e) {
    std::cerr << "unsuitable lattice: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
}
