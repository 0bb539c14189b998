// Command-line surface for the qlattice library.
//
// Subcommands: lattice, moments, tilde, amenability.  Backend files are JSON
// (see json_io.hpp for the schema).  Human diagnostics go to stderr; stdout
// or --out carries machine-readable output only.
//
// Exit codes: 0 success, 1 verification failure or runtime computation
// failure, 2 configuration or I/O errors, 3 inconclusive amenability verdict
// under --strict.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlattice/amenability.hpp"
#include "qlattice/backend.hpp"
#include "qlattice/json_io.hpp"
#include "qlattice/lattice.hpp"
#include "qlattice/moments.hpp"
#include "qlattice/reconstruct.hpp"
#include "qlattice/runtime.hpp"
#include "qlattice/words.hpp"

namespace {

using qlat::ordered_json;

struct RunConfig {
  std::string spec_path;
  int bound = 0;  // 0 = backend default
  int max_len = 6;
  int k_max = 12;
  double tol = 1e-9;
  double margin = 0.02;
  std::uint64_t seed = 12345;
  std::string method = "all";
  std::string test = "kesten";
  std::string format = "json";
  std::string out_path;
  bool strict = false;
  int threads = 0;  // 0 = QLATTICE_THREADS or serial
};

void validate(const RunConfig& cfg) {
  if (!(cfg.tol > 0 && cfg.tol <= 1e-3))
    throw qlat::config_error("--tol must lie in (0, 1e-3]");
  if (cfg.margin <= 0 || cfg.margin >= 1)
    throw qlat::config_error("--margin must lie in (0, 1)");
  if (cfg.max_len < 0 || cfg.k_max < 0 || cfg.bound < 0 || cfg.threads < 0)
    throw qlat::config_error("numeric options must be non-negative");
}

void emit(const RunConfig& cfg, const std::string& payload) {
  if (cfg.out_path.empty()) {
    std::cout << payload << "\n";
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) throw qlat::config_error("cannot write '" + cfg.out_path + "'");
  out << payload << "\n";
}

int run_lattice(const RunConfig& cfg) {
  qlat::Backend b = qlat::load_backend(cfg.spec_path);
  int bound = cfg.bound > 0 ? cfg.bound : qlat::default_bound(b);
  qlat::PopaLattice lat = qlat::build_lattice(b, bound, cfg.tol);
  qlat::AxiomReport axioms = qlat::verify_axioms(lat, cfg.seed);
  qlat::AxiomReport shift = qlat::shift_check(lat);
  qlat::BratteliData bd = qlat::bratteli(lat, cfg.seed);
  const double threshold = std::max(1e-8, 10 * cfg.tol);
  const bool pass = axioms.pass(threshold) && shift.pass(threshold);

  if (cfg.format == "dot") {
    emit(cfg, qlat::bratteli_dot(bd));
  } else {
    ordered_json j;
    j["backend"] = qlat::backend_describe(b);
    j["n"] = b.n;
    j["bound"] = bound;
    j["lambda"] = lat.lambda;
    j["index"] = qlat::lattice_index(lat);
    ordered_json dims;
    std::vector<std::size_t> row0;
    for (const auto& [key, cell] : lat.cells) {
      dims[std::to_string(key.first) + "," + std::to_string(key.second)] =
          cell.span.dim();
      if (key.first == 0) row0.push_back(cell.span.dim());
    }
    j["dims"] = std::move(dims);
    j["row0"] = row0;
    j["axioms"] = qlat::axiom_report_to_json(axioms, threshold);
    j["shift"] = qlat::axiom_report_to_json(shift, threshold);
    j["bratteli"] = qlat::bratteli_to_json(bd);
    j["pass"] = pass;
    emit(cfg, j.dump(2));
  }

  std::fprintf(stderr, "lattice %s bound=%d lambda=%.9g index=%.9g %s\n",
               qlat::backend_describe(b).c_str(), bound, lat.lambda,
               qlat::lattice_index(lat), pass ? "pass" : "FAIL");
  std::fprintf(stderr, "  axioms max residual %.3e over %zu checks; shift %.3e\n",
               axioms.max_residual, axioms.entries.size(), shift.max_residual);
  return pass ? 0 : 1;
}

int run_moments(const RunConfig& cfg) {
  qlat::Backend b = qlat::load_backend(cfg.spec_path);
  qlat::MomentTable t = qlat::moments_from_backend(b, cfg.max_len);
  emit(cfg, qlat::moment_table_to_json(t).dump(2));
  std::fprintf(stderr, "moments %s max_len=%d entries=%zu\n",
               qlat::backend_describe(b).c_str(), cfg.max_len,
               t.entries.size());
  return 0;
}

// Closure route: seed the cup/cap category with the backend's endomorphism
// algebras of alternating words up to half the window.
qlat::MomentTable closure_tilde(const qlat::Backend& b, int max_len,
                                double tol) {
  std::map<qlat::Word, qlat::OperatorSpan> seeds;
  for (const qlat::Word& w : qlat::words_up_to(std::max(1, max_len / 2)))
    if (!w.empty() && qlat::is_alternating(w))
      seeds.emplace(w, qlat::hom_basis(b, w, w));
  std::vector<std::pair<qlat::Word, qlat::Word>> pairs;
  pairs.emplace_back(qlat::Word(), qlat::interval(0, max_len));
  qlat::ClosureCategory cc = qlat::closure(b.duality(), seeds, pairs, tol);
  return qlat::universal_hom_dims(cc, max_len);
}

int run_tilde(const RunConfig& cfg) {
  qlat::Backend b = qlat::load_backend(cfg.spec_path);
  if (cfg.method != "cumulant" && cfg.method != "oracle" &&
      cfg.method != "closure" && cfg.method != "all")
    throw qlat::config_error("--method must be cumulant, oracle, closure, or all");
  const bool want_all = cfg.method == "all";
  const bool dual = b.type == qlat::Backend::Type::dual_group;
  if (cfg.method == "oracle" && !dual)
    throw qlat::config_error("--method oracle needs a dual_group backend");
  if ((cfg.method == "closure" || want_all) && cfg.max_len > 8)
    throw qlat::config_error("closure route supports --max-len up to 8");

  qlat::MomentTable source = qlat::moments_from_backend(b, cfg.max_len);
  std::map<std::string, qlat::MomentTable> methods;
  if (want_all || cfg.method == "cumulant")
    methods.emplace("cumulant", qlat::tilde_moments(source));
  if ((want_all && dual) || cfg.method == "oracle")
    methods.emplace("oracle", qlat::word_oracle_tilde(b, cfg.max_len));
  if (want_all || cfg.method == "closure")
    methods.emplace("closure", closure_tilde(b, cfg.max_len, cfg.tol));

  bool agree = true;
  std::string first_difference;
  const qlat::MomentTable& ref = methods.begin()->second;
  for (const qlat::Word& w : qlat::words_up_to(cfg.max_len)) {
    for (const auto& [name, table] : methods) {
      if (table.at(w) != ref.at(w)) {
        agree = false;
        first_difference = w.text();
        break;
      }
    }
    if (!agree) break;
  }

  ordered_json j;
  j["backend"] = qlat::backend_describe(b);
  j["max_len"] = cfg.max_len;
  j["source"] = qlat::moment_table_to_json(source);
  ordered_json mj;
  for (const auto& [name, table] : methods)
    mj[name] = qlat::moment_table_to_json(table);
  j["methods"] = std::move(mj);
  j["agree"] = agree;
  j["first_difference"] = agree ? ordered_json(nullptr)
                                : ordered_json(first_difference);
  emit(cfg, j.dump(2));

  std::fprintf(stderr, "tilde %s max_len=%d methods=%zu %s\n",
               qlat::backend_describe(b).c_str(), cfg.max_len, methods.size(),
               agree ? "agree" : "DISAGREE");
  if (!agree)
    std::fprintf(stderr, "  first differing word: \"%s\"\n",
                 first_difference.c_str());
  return agree ? 0 : 1;
}

int run_amenability(const RunConfig& cfg) {
  qlat::Backend b = qlat::load_backend(cfg.spec_path);
  if (cfg.test != "kesten" && cfg.test != "lattice")
    throw qlat::config_error("--test must be kesten or lattice");
  ordered_json j;
  qlat::Verdict verdict;
  if (cfg.test == "kesten") {
    qlat::SpectralEstimate est = qlat::kesten_test(b, cfg.k_max, cfg.margin);
    verdict = est.verdict;
    j = qlat::amenability_report("kesten", est, b.n);
  } else {
    qlat::LatticeAmenability la =
        qlat::lattice_amenability_test(b, cfg.k_max, cfg.margin);
    verdict = la.estimate.verdict;
    j = qlat::amenability_report("lattice", la, b.n);
  }
  emit(cfg, j.dump(2));
  std::fprintf(stderr, "amenability %s test=%s verdict=%s extrapolated=%.9g\n",
               qlat::backend_describe(b).c_str(), cfg.test.c_str(),
               qlat::verdict_name(verdict).c_str(),
               j["extrapolated"].get<double>());
  if (cfg.strict && verdict == qlat::Verdict::inconclusive) return 3;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"standard-invariant lattices from corepresentation backends"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec_path, "backend JSON file")->required();
    sub->add_option("--tol", cfg.tol, "numerical tolerance, in (0, 1e-3]");
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    sub->add_option("--threads", cfg.threads,
                    "worker threads (default: QLATTICE_THREADS or 1)");
  };

  CLI::App* lat = app.add_subcommand("lattice",
                                     "build a lattice, verify the axioms, "
                                     "decompose the cells");
  add_common(lat);
  lat->add_option("--bound", cfg.bound, "cell bound (default per backend)");
  lat->add_option("--seed", cfg.seed, "seed for sampled verifications");
  lat->add_option("--format", cfg.format, "json | dot")
      ->check(CLI::IsMember({"json", "dot"}));

  CLI::App* mom = app.add_subcommand("moments", "character moment table");
  add_common(mom);
  mom->add_option("--max-len", cfg.max_len, "table word length");

  CLI::App* til = app.add_subcommand("tilde",
                                     "free-product transform of the moment "
                                     "table, multiple routes");
  add_common(til);
  til->add_option("--max-len", cfg.max_len, "table word length");
  til->add_option("--method", cfg.method, "cumulant | oracle | closure | all")
      ->check(CLI::IsMember({"cumulant", "oracle", "closure", "all"}));

  CLI::App* amen = app.add_subcommand("amenability",
                                      "spectral radius estimate and verdict");
  add_common(amen);
  amen->add_option("--kmax", cfg.k_max, "highest even moment order");
  amen->add_option("--margin", cfg.margin, "relative decision margin");
  amen->add_option("--test", cfg.test, "kesten | lattice")
      ->check(CLI::IsMember({"kesten", "lattice"}));
  amen->add_flag("--strict", cfg.strict, "exit 3 on inconclusive verdict");

  CLI11_PARSE(app, argc, argv);

  try {
    validate(cfg);
    if (cfg.threads > 0) qlat::set_thread_count(cfg.threads);
    if (lat->parsed()) return run_lattice(cfg);
    if (mom->parsed()) return run_moments(cfg);
    if (til->parsed()) return run_tilde(cfg);
    return run_amenability(cfg);
  } catch (const qlat::config_error& ex) {
    std::fprintf(stderr, "config error: %s\n", ex.what());
    return 2;
  } catch (const qlat::compute_error& ex) {
    std::fprintf(stderr, "compute error: %s\n", ex.what());
    return 1;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}
