// spinon_dcf: command-line front end for the two-spinon DCF library.
//
// Exit codes: 0 success, 1 usage, 2 numerical failure, 3 I/O.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinon/compare.hpp"
#include "spinon/dcf.hpp"
#include "spinon/ed.hpp"
#include "spinon/formfactor.hpp"
#include "spinon/io.hpp"

namespace {

using spinon::io::Cell;
using spinon::io::Table;

enum ExitCode { ok = 0, usage = 1, numerical = 2, io_failure = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  spinon::QuadratureSpec quadrature;
  std::string output_format = "csv";
  std::string output_path = "-";
  int threads = 1;
};

int default_threads() {
  if (const char *env = std::getenv("SPINON_DCF_THREADS")) {
    try {
      return std::stoi(env);
    } catch (const std::exception &) {
      throw spinon::DomainError("SPINON_DCF_THREADS is not an integer");
    }
  }
  return 1;
}

void write_output(const RunConfig &cfg, const std::string &text) {
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + cfg.output_path + " for writing");
  out << text;
  if (!out)
    throw IoError("failed writing " + cfg.output_path);
}

void emit(const RunConfig &cfg, const Table &t) {
  write_output(cfg, cfg.output_format == "json" ? spinon::io::to_json(t) : spinon::io::to_csv(t));
}

// --- commands --------------------------------------------------------------

void cmd_constants(const RunConfig &cfg) {
  const auto c = spinon::compute_constants(cfg.quadrature);
  const double gamma_err = 4.0 * std::numeric_limits<double>::epsilon() * c.gamma_ratio;
  Table t{{"quantity", "value", "error_estimate"}, {}};
  t.rows.push_back({Cell::str("gamma_ratio"), Cell::real(c.gamma_ratio), Cell::real(gamma_err)});
  t.rows.push_back({Cell::str("a_plus_sq_half"), Cell::real(c.a_plus_sq_half), Cell::real(c.a_plus_error)});
  t.rows.push_back({Cell::str("a_minus_sq_half"), Cell::real(c.a_minus_sq_half), Cell::real(c.a_minus_error)});
  t.rows.push_back({Cell::str("prefactor"), Cell::real(c.prefactor), Cell::real(c.prefactor_error)});
  emit(cfg, t);
}

void cmd_eval(const RunConfig &cfg, double k, double omega) {
  const auto v = spinon::s2_pm(k, omega, cfg.quadrature);
  Table t{{"k", "omega", "region", "s_pm", "s_zz", "gamma_arg", "edge_flag"}, {}};
  t.rows.push_back({Cell::real(v.k), Cell::real(v.omega), Cell::str(std::string(to_string(v.region))),
                    Cell::real(v.s_pm), Cell::real(v.s_zz), Cell::real(v.gamma_arg),
                    Cell::str(std::string(to_string(v.edge_flag)))});
  emit(cfg, t);
}

void cmd_scan(const RunConfig &cfg, int k_points, int omega_points, double omega_max) {
  if (k_points < 2 || omega_points < 2)
    throw spinon::DomainError("scan: resolutions must be >= 2");
  if (!(omega_max > 0.0))
    throw spinon::DomainError("scan: omega-max must be positive");
  const auto nk = static_cast<std::size_t>(k_points);
  const auto nw = static_cast<std::size_t>(omega_points);
  const auto values = spinon::parallel_map<spinon::DcfValue>(nk * nw, cfg.threads, [&](std::size_t i) {
    const double k = 2.0 * std::numbers::pi * static_cast<double>(i / nw) / static_cast<double>(nk);
    const double w = omega_max * static_cast<double>(i % nw) / static_cast<double>(nw - 1);
    return spinon::s2_pm(k, w, cfg.quadrature);
  });
  Table t{{"k", "omega", "s_zz", "region", "edge_flag"}, {}};
  for (const auto &v : values)
    t.rows.push_back({Cell::real(v.k), Cell::real(v.omega), Cell::real(v.s_zz),
                      Cell::str(std::string(to_string(v.region))),
                      Cell::str(std::string(to_string(v.edge_flag)))});
  emit(cfg, t);
}

void cmd_sumrule(const RunConfig &cfg, int k_points, int omega_points) {
  if (k_points < 16 || omega_points < 16)
    throw spinon::DomainError("sumrule: resolutions must be >= 16");
  const auto r = spinon::intensity_sumrule(cfg.quadrature, static_cast<std::size_t>(k_points),
                                           static_cast<std::size_t>(omega_points), cfg.threads);
  Table t{{"quantity", "value"}, {}};
  t.rows.push_back({Cell::str("I2"), Cell::real(r.value)});
  t.rows.push_back({Cell::str("I2_half_resolution"), Cell::real(r.coarse_value)});
  t.rows.push_back({Cell::str("refinement_delta"), Cell::real(r.error)});
  emit(cfg, t);
}

void cmd_ed(const RunConfig &cfg, int sites, double delta) {
  const spinon::ed::ChainSpec spec{sites, delta, 0};
  const auto res = spinon::ed::spectral_lines(spec);
  std::cerr << "ground_energy " << spinon::io::format_real(res.ground_energy) << '\n';
  Table t{{"momentum_index", "k", "omega", "weight"}, {}};
  for (const auto &line : res.lines)
    t.rows.push_back({Cell::integer(line.momentum_index), Cell::real(spec.momentum(line.momentum_index)),
                      Cell::real(line.omega), Cell::real(line.weight)});
  emit(cfg, t);
}

void cmd_compare(const RunConfig &cfg, int sites, int omega_points) {
  const spinon::ed::ChainSpec spec{sites, -1.0, 0};
  const auto rep = spinon::compare_with_continuum(spec, cfg.quadrature,
                                                  static_cast<std::size_t>(omega_points), cfg.threads);
  const auto &lab = rep.band.labeling();
  const auto &other = rep.band.candidates[1 - rep.band.selected];

  Table t{{"momentum_index", "k", "lowest_omega", "lower_edge", "deviation", "windowed_weight",
           "total_weight", "two_spinon_weight", "ratio"},
          {}};
  for (const auto &row : rep.rows) {
    const auto &b = row.band;
    t.rows.push_back({Cell::integer(b.momentum_index), Cell::real(b.k),
                      Cell::real(b.lowest.value_or(std::numeric_limits<double>::quiet_NaN())),
                      Cell::real(b.lower_edge), Cell::real(b.deviation), Cell::real(b.windowed_weight),
                      Cell::real(b.total_weight), Cell::real(row.two_spinon_weight),
                      Cell::real(row.ratio)});
  }

  if (cfg.output_format == "json") {
    nlohmann::ordered_json doc;
    doc["sites"] = sites;
    doc["labeling_shift"] = lab.shift;
    doc["window_fraction"] = lab.window_fraction;
    doc["rejected_shift"] = other.shift;
    doc["rejected_window_fraction"] = other.window_fraction;
    doc["ground_energy_per_site"] = rep.band.ground_energy_per_site;
    const double mean = rep.interior_mean_ratio();
    doc["interior_mean_ratio"] = std::isfinite(mean) ? nlohmann::ordered_json(mean) : nullptr;
    doc["rows"] = nlohmann::ordered_json::parse(spinon::io::to_json(t));
    write_output(cfg, doc.dump(2) + "\n");
    return;
  }
  std::ostringstream out;
  out << "# sites " << sites << '\n'
      << "# labeling_shift " << spinon::io::format_real(lab.shift) << " window_fraction "
      << spinon::io::format_real(lab.window_fraction) << '\n'
      << "# rejected_shift " << spinon::io::format_real(other.shift) << " window_fraction "
      << spinon::io::format_real(other.window_fraction) << '\n'
      << "# ground_energy_per_site " << spinon::io::format_real(rep.band.ground_energy_per_site) << '\n'
      << "# interior_mean_ratio " << spinon::io::format_real(rep.interior_mean_ratio()) << '\n'
      << spinon::io::to_csv(t);
  write_output(cfg, out.str());
}

// --- configuration ----------------------------------------------------------

void apply_config_file(const std::string &path, const CLI::App &app, RunConfig &cfg) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot read config " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw spinon::DomainError(std::string("invalid config file: ") + e.what());
  }
  auto given = [&](const char *flag) { return app.count(flag) > 0; };
  try {
    if (doc.contains("abs_tol") && !given("--quad-tol") && !given("--abs-tol"))
      cfg.quadrature.abs_tol = doc["abs_tol"].get<double>();
    if (doc.contains("rel_tol") && !given("--quad-tol") && !given("--rel-tol"))
      cfg.quadrature.rel_tol = doc["rel_tol"].get<double>();
    if (doc.contains("split_point") && !given("--split-point"))
      cfg.quadrature.split_point = doc["split_point"].get<double>();
    if (doc.contains("max_subdivisions") && !given("--max-subdivisions"))
      cfg.quadrature.max_subdivisions = doc["max_subdivisions"].get<int>();
    if (doc.contains("format") && !given("--format"))
      cfg.output_format = doc["format"].get<std::string>();
    if (doc.contains("output") && !given("--output"))
      cfg.output_path = doc["output"].get<std::string>();
    if (doc.contains("threads") && !given("--threads"))
      cfg.threads = doc["threads"].get<int>();
  } catch (const nlohmann::json::exception &e) {
    throw spinon::DomainError(std::string("invalid config value: ") + e.what());
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Exact two-spinon dynamical structure factor of the spin-1/2 Heisenberg chain"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::optional<double> quad_tol;
  std::string config_path;
  app.add_option("--quad-tol", quad_tol, "absolute and relative quadrature tolerance");
  app.add_option("--abs-tol", cfg.quadrature.abs_tol, "absolute quadrature tolerance");
  app.add_option("--rel-tol", cfg.quadrature.rel_tol, "relative quadrature tolerance");
  app.add_option("--split-point", cfg.quadrature.split_point, "end of the finite quadrature segment");
  app.add_option("--max-subdivisions", cfg.quadrature.max_subdivisions, "bisections per integral");
  app.add_option("--format", cfg.output_format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-o,--output", cfg.output_path, "output file, - for stdout");
  app.add_option("--threads", cfg.threads, "worker threads (default $SPINON_DCF_THREADS or 1)");
  app.add_option("--config", config_path, "JSON file with default settings");

  auto *constants = app.add_subcommand("constants", "prefactor ingredients with error estimates");

  auto *eval = app.add_subcommand("eval", "S2 at one (k, omega)");
  double eval_k = 0.0, eval_omega = 0.0;
  eval->add_option("--k", eval_k, "momentum transfer")->required();
  eval->add_option("--omega", eval_omega, "energy transfer")->required();

  auto *scan = app.add_subcommand("scan", "S2^zz on a k x omega grid");
  int scan_k = 32, scan_w = 32;
  double scan_wmax = 2.0 * std::numbers::pi;
  scan->add_option("--k-points", scan_k, "momenta in [0, 2 pi)");
  scan->add_option("--omega-points", scan_w, "energies in [0, omega-max]");
  scan->add_option("--omega-max", scan_wmax, "largest energy of the grid");

  auto *sumrule = app.add_subcommand("sumrule", "two-spinon share of the static sum rule");
  int sr_k = 32, sr_w = 32;
  sumrule->add_option("--k-points", sr_k, "Gauss nodes in k");
  sumrule->add_option("--omega-points", sr_w, "Gauss nodes in omega");

  auto *edc = app.add_subcommand("ed", "exact-diagonalization spectral lines");
  int ed_sites = 8;
  double ed_delta = -1.0;
  edc->add_option("--sites", ed_sites, "chain length (even, <= 14)");
  edc->add_option("--delta", ed_delta, "anisotropy Delta");

  auto *cmp = app.add_subcommand("compare", "ED weight against the two-spinon continuum");
  int cmp_sites = 12, cmp_w = 64;
  cmp->add_option("--sites", cmp_sites, "chain length (even, <= 14)");
  cmp->add_option("--omega-points", cmp_w, "Gauss nodes for the continuum integral");

  try {
    cfg.threads = default_threads();
    app.parse(argc, argv);
    if (!config_path.empty())
      apply_config_file(config_path, app, cfg);
    if (quad_tol) {
      cfg.quadrature.abs_tol = *quad_tol;
      cfg.quadrature.rel_tol = *quad_tol;
    }
    cfg.quadrature.validate();
    if (cfg.threads < 1)
      throw spinon::DomainError("threads must be >= 1");
    if (cfg.output_format != "csv" && cfg.output_format != "json")
      throw spinon::DomainError("format must be csv or json");

    if (*constants)
      cmd_constants(cfg);
    else if (*eval)
      cmd_eval(cfg, eval_k, eval_omega);
    else if (*scan)
      cmd_scan(cfg, scan_k, scan_w, scan_wmax);
    else if (*sumrule)
      cmd_sumrule(cfg, sr_k, sr_w);
    else if (*edc)
      cmd_ed(cfg, ed_sites, ed_delta);
    else if (*cmp)
      cmd_compare(cfg, cmp_sites, cmp_w);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return io_failure;
  } catch (const spinon::DomainError &e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const spinon::ConvergenceError &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return numerical;
  } catch (const spinon::NumericError &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return numerical;
  } catch (const spinon::ed::DegenerateGroundStateError &e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return numerical;
  }
  return ok;
}
