#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fpslab/config.hpp"
#include "fpslab/diagnostics.hpp"
#include "fpslab/fock.hpp"
#include "fpslab/kernel.hpp"

using namespace fpslab;

namespace {

struct Workspace {
  RunConfig cfg;
  std::shared_ptr<const Spectrum> spectrum;
  std::shared_ptr<SofteningFunction> soften;
  FPState state;
};

std::vector<std::string> base_header(const RunConfig& cfg) {
  return {"config_hash=" + cfg.canonical_hash(), std::string("tool_version=") + kToolVersion};
}

std::shared_ptr<const Spectrum> load_spectrum(const RunConfig& cfg,
                                              const std::string& spectrum_file) {
  if (!spectrum_file.empty()) {
    std::ifstream in(spectrum_file);
    if (!in) throw ConfigError("cannot open spectrum file: " + spectrum_file);
    return std::make_shared<Spectrum>(Spectrum::load(in));
  }
  return std::make_shared<Spectrum>(torus_spectrum(cfg.model(), cfg.cutoff()));
}

Workspace make_workspace(const std::string& config_path, const std::string& spectrum_file) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::parse_file(config_path);
  if (!spectrum_file.empty() && !cfg.has("cutoff")) cfg.set("cutoff", "inf");
  cfg.validate();
  auto spectrum = load_spectrum(cfg, spectrum_file);
  auto soften = cfg.softening();
  const std::string kind = cfg.get_or("state.kind", "fp");
  if (kind == "reference")
    return Workspace{cfg, spectrum, soften, reference_state(spectrum, cfg.slab(), cfg.cutoff())};
  if (kind == "ceiling")
    return Workspace{cfg, spectrum, soften, ceiling_state(spectrum, cfg.slab(), cfg.cutoff())};
  if (kind != "fp") throw ConfigError("unknown state.kind: " + kind);
  if (!soften)
    soften = std::make_shared<SofteningFunction>(
        SofteningFunction::indicator(cfg.slab().a, cfg.slab().b));
  return Workspace{cfg, spectrum, soften,
                   build_fp_state(spectrum, cfg.slab(), soften, cfg.cutoff())};
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return cfg.output_dir() + "/" + name;
}

void emit(const RunConfig& cfg, const std::string& name, std::vector<std::string> header,
          const std::vector<std::string>& cols,
          const std::vector<std::vector<std::string>>& rows) {
  auto full = base_header(cfg);
  full.insert(full.end(), header.begin(), header.end());
  write_csv(out_path(cfg, name + ".csv"), full, cols, rows);
  write_json(out_path(cfg, name + ".json"), full, cols, rows);
}

std::vector<std::string> series_header(const SeriesReport& rep) {
  return {"p=" + std::to_string(rep.p),
          "verdict=" + std::string(to_string(rep.verdict)),
          "last_decade_change=" + format_double(rep.last_decade_change),
          "tail_estimate=" + format_double(rep.tail_estimate),
          "n_modes=" + std::to_string(rep.n_modes),
          "cutoff=" + format_double(rep.cutoff)};
}

std::vector<std::vector<std::string>> series_rows(const SeriesReport& rep) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& [n, s] : rep.partial_sums)
    rows.push_back({std::to_string(n), format_double(s)});
  return rows;
}

std::vector<std::pair<SpacetimePoint, SpacetimePoint>> load_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open point-pair file: " + path);
  std::vector<std::pair<SpacetimePoint, SpacetimePoint>> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    SpacetimePoint p, q;
    if (!(ls >> p.t >> p.x[0] >> p.x[1] >> p.x[2] >> q.t >> q.x[0] >> q.x[1] >> q.x[2]))
      throw ConfigError("bad point-pair line: " + line);
    pairs.emplace_back(p, q);
  }
  return pairs;
}

EigenspinorBasis require_torus_basis(const Workspace& ws) {
  if (!ws.spectrum->from_torus())
    throw InvalidParams("kernel evaluation needs a torus spectrum with momentum labels");
  return build_eigenspinor_basis(ws.cfg.model(), *ws.spectrum);
}

struct CheckTable {
  std::vector<std::vector<std::string>> rows;
  bool all_pass = true;
  void add(const std::string& name, double value, double tol) {
    const bool pass = value < tol;
    all_pass = all_pass && pass;
    rows.push_back({name, format_double(value), format_double(tol), pass ? "pass" : "FAIL"});
  }
  void add_flag(const std::string& name, bool pass, const std::string& detail) {
    all_pass = all_pass && pass;
    rows.push_back({name, detail, "", pass ? "pass" : "FAIL"});
  }
};

int cmd_spectrum(const std::string& config_path, const std::string& spectrum_file) {
  Workspace ws = make_workspace(config_path, spectrum_file);
  const std::string path = out_path(ws.cfg, "spectrum.txt");
  std::ofstream out(path);
  ws.spectrum->save(out);
  std::cout << "modes " << ws.spectrum->size() << " counting "
            << counting_function(*ws.spectrum, ws.cfg.cutoff()) << " -> " << path << "\n";
  return 0;
}

int cmd_fpstate(const std::string& config_path, const std::string& spectrum_file) {
  Workspace ws = make_workspace(config_path, spectrum_file);
  const std::string path = out_path(ws.cfg, "fpstate.txt");
  std::ofstream out(path);
  for (const auto& h : base_header(ws.cfg)) out << "# " << h << "\n";
  ws.state.dump(out);
  std::cout << "modes " << ws.state.num_modes() << " shells " << ws.state.num_shells()
            << " -> " << path << "\n";
  return 0;
}

int cmd_series(const std::string& config_path, const std::string& spectrum_file, int p,
               bool fluct, double re, double im) {
  Workspace ws = make_workspace(config_path, spectrum_file);
  const SeriesReport rep =
      fluct ? fluctuation_squared(ws.state, p, complexd(re, im), ws.cfg.diagnostics())
            : hadamard_series(ws.state, p, ws.cfg.diagnostics());
  emit(ws.cfg, fluct ? "fluctuations" : "series", series_header(rep), {"N", "S_p"},
       series_rows(rep));
  std::cout << (fluct ? "fluctuation" : "series") << " p=" << p << " verdict "
            << to_string(rep.verdict) << "\n";
  return 0;
}

int cmd_scan(const std::string& config_path, const std::string& spectrum_file, double bmin,
             double bmax, int count, long window) {
  Workspace ws = make_workspace(config_path, spectrum_file);
  std::vector<double> grid;
  for (int i = 0; i < count; ++i)
    grid.push_back(bmin + (bmax - bmin) * double(i) / double(count));
  const std::size_t win = window > 0
                              ? std::size_t(window)
                              : std::max<std::size_t>(1, ws.spectrum->size() / 4);
  const ScanReport rep = scan_slab_halfwidths(*ws.spectrum, grid, win, ws.cfg.diagnostics());
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : rep.rows)
    rows.push_back({format_double(r.b), format_double(r.min), format_double(r.max),
                    format_double(r.mean), r.flagged ? "non-hadamard-indicated" : "unflagged"});
  emit(ws.cfg, "scan",
       {"window=" + std::to_string(rep.window),
        "flagged_fraction=" + format_double(rep.flagged_fraction)},
       {"b", "min", "max", "mean", "verdict"}, rows);
  std::cout << "scan flagged fraction " << rep.flagged_fraction << "\n";
  return 0;
}

int cmd_kspectrum(const std::string& config_path, const std::string& spectrum_file,
                  double aprime, double bprime) {
  Workspace ws = make_workspace(config_path, spectrum_file);
  const KSpectrumReport rep =
      k_operator_spectrum(ws.state, aprime, bprime, ws.cfg.diagnostics());
  std::vector<std::vector<std::string>> rows;
  for (const auto& [z, v] : rep.eigenvalues)
    rows.push_back({std::to_string(z), format_double(v)});
  emit(ws.cfg, "k_spectrum",
       {std::string("compact=") + (rep.compact ? "yes" : "no"),
        "window_max=" + format_double(rep.window_max)},
       {"z", "value"}, rows);
  std::cout << "k-spectrum compact " << (rep.compact ? "yes" : "no") << "\n";
  return 0;
}

int cmd_kernel_eval(const std::string& config_path, const std::string& pairs_file, long N) {
  Workspace ws = make_workspace(config_path, "");
  const EigenspinorBasis basis = require_torus_basis(ws);
  const auto pairs = load_pairs(pairs_file);
  const std::size_t n = N > 0 ? std::size_t(N) : ws.state.num_modes();
  const KernelSumResult res = difference_kernel(ws.state, basis, pairs, n);
  std::vector<std::string> cols;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      cols.push_back("re" + std::to_string(r) + std::to_string(c));
      cols.push_back("im" + std::to_string(r) + std::to_string(c));
    }
  std::vector<std::vector<std::string>> rows;
  for (const auto& m : res.values) {
    std::vector<std::string> row;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        row.push_back(format_double(m(r, c).real()));
        row.push_back(format_double(m(r, c).imag()));
      }
    rows.push_back(std::move(row));
  }
  emit(ws.cfg, "kernel_eval",
       {"N=" + std::to_string(n), "tail_indicator=" + format_double(res.tail_indicator)},
       cols, rows);
  std::cout << "kernel eval pairs " << pairs.size() << " tail " << res.tail_indicator << "\n";
  return 0;
}

int cmd_kernel_norms(const std::string& config_path, long samples) {
  Workspace ws = make_workspace(config_path, "");
  const EigenspinorBasis basis = require_torus_basis(ws);
  const std::size_t ns = samples > 0 ? std::size_t(samples) : 4000;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t z = 1; z <= ws.state.num_modes(); ++z) {
    const double closed = sigma_l2_norm_sq(ws.state, z);
    const double mc = sigma_l2_norm_sq_mc(ws.state, basis, z, ns, ws.cfg.seed() + z);
    rows.push_back({std::to_string(z), format_double(closed), format_double(mc)});
  }
  emit(ws.cfg, "kernel_norms", {"mc_samples=" + std::to_string(ns)},
       {"z", "closed", "monte_carlo"}, rows);
  std::cout << "kernel norms for " << rows.size() << " modes\n";
  return 0;
}

int cmd_oracle(const std::string& state_file, const std::string& modes_csv) {
  std::ifstream in(state_file);
  if (!in) throw ConfigError("cannot open state file: " + state_file);
  const FPState state = FPState::load(in);

  std::vector<std::size_t> modes;
  std::stringstream ms(modes_csv);
  std::string tok;
  while (std::getline(ms, tok, ','))
    if (!tok.empty()) modes.push_back(std::size_t(std::stoul(tok)));

  const FockOracle oracle = FockOracle::build(state, modes);
  CheckTable table;
  table.add("car_residual", oracle.car_residual(), 1e-12);

  std::vector<std::vector<std::pair<complexd, complexd>>> smearings;
  for (std::size_t m = 0; m < modes.size(); ++m)
    for (int comp = 0; comp < 2; ++comp) {
      std::vector<std::pair<complexd, complexd>> s(modes.size(), {0.0, 0.0});
      (comp == 0 ? s[m].first : s[m].second) = 1.0;
      smearings.push_back(std::move(s));
    }
  smearings.push_back(std::vector<std::pair<complexd, complexd>>(
      modes.size(), {complexd(0.5, -0.25), complexd(-0.125, 1.0 / 3.0)}));
  table.add("two_point_deviation", two_point_check(oracle, state, smearings), 1e-10);

  const PurityGaugeReport pg = purity_gauge_check(oracle, state);
  table.add("projector_residual", pg.projector_residual, 1e-12);
  table.add("doubling_residual", pg.doubling_residual, 1e-12);
  table.add("gauge_deviation", pg.gauge_deviation, 1e-11);
  table.add("purity_deviation", pg.purity_deviation, 1e-12);

  for (int p : {1, 2}) {
    double series = 0.0;
    for (std::size_t z : modes) {
      const ModeBlock& b = state.block(z);
      series += std::pow(b.lambda, 4 * p - 2) * b.sin2theta * b.sin2theta;
    }
    const double oracle_v = energy_fluctuation_oracle(oracle, state, p);
    const double scale = std::max(1.0, std::fabs(series));
    table.add("fluctuation_p" + std::to_string(p), std::fabs(oracle_v - series) / scale, 1e-10);
  }

  for (const auto& row : table.rows)
    std::cout << row[0] << " " << row[1] << " tol " << row[2] << " " << row[3] << "\n";
  std::cout << (table.all_pass ? "oracle check: all pass" : "oracle check: FAILURES") << "\n";
  return table.all_pass ? 0 : 1;
}

RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  if (name == "softened-convergence") {
    for (auto [k, v] : std::initializer_list<std::pair<const char*, const char*>>{
             {"model.mass", "1"}, {"cutoff", "50"}, {"slab.a", "-16"}, {"slab.b", "16"},
             {"soften.kind", "bump"}, {"soften.center", "0"}, {"soften.halfwidth", "15"}})
      cfg.set(k, v);
  } else if (name == "unsoftened-scan") {
    for (auto [k, v] : std::initializer_list<std::pair<const char*, const char*>>{
             {"model.mass", "1"}, {"cutoff", "20"}, {"slab.a", "-1"}, {"slab.b", "1"}})
      cfg.set(k, v);
  } else if (name == "fluctuations") {
    for (auto [k, v] : std::initializer_list<std::pair<const char*, const char*>>{
             {"model.mass", "1"}, {"cutoff", "50"}, {"slab.a", "-16"}, {"slab.b", "16"},
             {"soften.kind", "bump"}, {"soften.center", "0"}, {"soften.halfwidth", "15"}})
      cfg.set(k, v);
  } else {
    throw UnknownPreset("unknown preset: " + name);
  }
  return cfg;
}

int cmd_replicate(const std::string& name) {
  const RunConfig cfg = preset_config(name);
  cfg.validate();
  CheckTable table;

  if (name == "softened-convergence") {
    const auto sp = std::make_shared<Spectrum>(torus_spectrum(cfg.model(), cfg.cutoff()));
    const FPState st = build_fp_state(sp, cfg.slab(), cfg.softening(), cfg.cutoff());
    std::vector<std::vector<std::string>> rows;
    for (int p : {0, 2, 6}) {
      const SeriesReport rep = hadamard_series(st, p, cfg.diagnostics());
      rows.push_back({std::to_string(p), format_double(rep.partial_sums.back().second),
                      format_double(rep.last_decade_change), format_double(rep.tail_estimate),
                      to_string(rep.verdict)});
      table.add_flag("S_" + std::to_string(p) + "_converged",
                     rep.verdict == Verdict::converged, to_string(rep.verdict));
    }
    emit(cfg, "replicate_softened_convergence", {},
         {"p", "S_p", "last_decade_change", "tail_estimate", "verdict"}, rows);
  } else if (name == "unsoftened-scan") {
    const Spectrum sp = torus_spectrum(cfg.model(), cfg.cutoff());
    std::vector<double> grid;
    for (int i = 0; i < 200; ++i) grid.push_back(0.3 + i * (2.7 / 200.0));
    const ScanReport rep =
        scan_slab_halfwidths(sp, grid, std::max<std::size_t>(1, sp.size() / 4));
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rep.rows)
      rows.push_back({format_double(r.b), format_double(r.min), format_double(r.max),
                      format_double(r.mean),
                      r.flagged ? "non-hadamard-indicated" : "unflagged"});
    emit(cfg, "replicate_unsoftened_scan",
         {"flagged_fraction=" + format_double(rep.flagged_fraction)},
         {"b", "min", "max", "mean", "verdict"}, rows);
    table.add_flag("flagged_fraction_above_0.95", rep.flagged_fraction > 0.95,
                   format_double(rep.flagged_fraction));
  } else {  // fluctuations
    const auto sp = std::make_shared<Spectrum>(torus_spectrum(cfg.model(), cfg.cutoff()));
    const FPState soft = build_fp_state(sp, cfg.slab(), cfg.softening(), cfg.cutoff());
    std::vector<std::vector<std::string>> rows;
    for (int p : {1, 2}) {
      const SeriesReport rep =
          fluctuation_squared(soft, p, complexd(1.0, 0.0), cfg.diagnostics());
      rows.push_back({"series_p" + std::to_string(p),
                      format_double(rep.partial_sums.back().second), to_string(rep.verdict)});
      table.add_flag("fluctuation_p" + std::to_string(p) + "_converged",
                     rep.verdict == Verdict::converged, to_string(rep.verdict));
    }
    const BridgeReport bridge = fluctuation_implies_hadamard_check(soft, cfg.diagnostics());
    table.add_flag("bridge_inequality", bridge.bridge_ok, "per-mode");
    table.add_flag("verdict_agreement", bridge.verdicts_agree, "p vs 4p-2");

    // finite-mode oracle agreement on a small unsoftened state
    const auto sp_small =
        std::make_shared<Spectrum>(torus_spectrum(cfg.model(), 1.5));
    const FPState small = build_fp_state(
        sp_small, SlabConfig{-1, 1},
        std::make_shared<SofteningFunction>(SofteningFunction::indicator(-1, 1)), 1.5);
    const FockOracle oracle = FockOracle::build(small, {3, 4, 5});
    for (int p : {1, 2}) {
      double series = 0.0;
      for (std::size_t z : {std::size_t(3), std::size_t(4), std::size_t(5)}) {
        const ModeBlock& b = small.block(z);
        series += std::pow(b.lambda, 4 * p - 2) * b.sin2theta * b.sin2theta;
      }
      const double dev = std::fabs(energy_fluctuation_oracle(oracle, small, p) - series) /
                         std::max(1.0, std::fabs(series));
      rows.push_back({"oracle_dev_p" + std::to_string(p), format_double(dev), ""});
      table.add("oracle_agreement_p" + std::to_string(p), dev, 1e-10);
    }
    emit(cfg, "replicate_fluctuations", {}, {"quantity", "value", "verdict"}, rows);
  }

  for (const auto& row : table.rows)
    std::cout << row[0] << " " << row[1] << " " << row[3] << "\n";
  std::cout << "replicate " << name << ": " << (table.all_pass ? "pass" : "FAIL") << "\n";
  return table.all_pass ? 0 : 1;
}

void report_error(const Error& e) {
  std::cerr << "{\"error\":\"" << e.kind() << "\",\"message\":\"" << e.what() << "\"}\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"FP-state slab diagnostics"};
  app.require_subcommand(1);

  std::string config_path, spectrum_file, pairs_file, state_file, modes_csv, preset;
  int p = 0, scan_count = 200;
  double hre = 1.0, him = 0.0, bmin = 0.3, bmax = 3.0, aprime = -0.5, bprime = 0.5;
  long window = 0, trunc = 0, samples = 0;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--config", config_path, "key=value config file");
    c->add_option("--spectrum-file", spectrum_file, "synthetic spectrum file");
  };

  auto* sc_spectrum = app.add_subcommand("spectrum", "build and save the spectrum");
  add_common(sc_spectrum);

  auto* sc_fpstate = app.add_subcommand("fpstate", "FP-state commands");
  sc_fpstate->require_subcommand(1);
  auto* sc_build = sc_fpstate->add_subcommand("build", "build and dump the state");
  add_common(sc_build);

  auto* sc_diag = app.add_subcommand("diagnose", "series and scan diagnostics");
  sc_diag->require_subcommand(1);
  auto* sc_series = sc_diag->add_subcommand("series", "Hadamard series S_p");
  add_common(sc_series);
  sc_series->add_option("--p", p, "series exponent")->required();
  auto* sc_scan = sc_diag->add_subcommand("scan", "halfwidth scan");
  add_common(sc_scan);
  sc_scan->add_option("--bmin", bmin);
  sc_scan->add_option("--bmax", bmax);
  sc_scan->add_option("--count", scan_count);
  sc_scan->add_option("--window", window);
  auto* sc_ksp = sc_diag->add_subcommand("k-spectrum", "difference operator spectrum");
  add_common(sc_ksp);
  sc_ksp->add_option("--aprime", aprime)->required();
  sc_ksp->add_option("--bprime", bprime)->required();
  auto* sc_fluc = sc_diag->add_subcommand("fluctuations", "fluctuation series");
  add_common(sc_fluc);
  sc_fluc->add_option("--p", p)->required();
  sc_fluc->add_option("--hhat0-re", hre);
  sc_fluc->add_option("--hhat0-im", him);

  auto* sc_kernel = app.add_subcommand("kernel", "difference kernel evaluation");
  sc_kernel->require_subcommand(1);
  auto* sc_eval = sc_kernel->add_subcommand("eval", "evaluate at point pairs");
  sc_eval->add_option("--config", config_path);
  sc_eval->add_option("--pairs", pairs_file, "point-pair file")->required();
  sc_eval->add_option("--N", trunc, "truncation (default: all modes)");
  auto* sc_norms = sc_kernel->add_subcommand("norms", "closed-form vs Monte Carlo norms");
  sc_norms->add_option("--config", config_path);
  sc_norms->add_option("--samples", samples);

  auto* sc_oracle = app.add_subcommand("oracle", "Fock-space oracle");
  sc_oracle->require_subcommand(1);
  auto* sc_check = sc_oracle->add_subcommand("check", "validate a state dump");
  sc_check->add_option("--state", state_file)->required();
  sc_check->add_option("--modes", modes_csv, "comma-separated mode indices")->required();

  auto* sc_rep = app.add_subcommand("replicate", "run a named experiment preset");
  sc_rep->add_option("preset", preset)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc_spectrum->parsed()) return cmd_spectrum(config_path, spectrum_file);
    if (sc_build->parsed()) return cmd_fpstate(config_path, spectrum_file);
    if (sc_series->parsed()) return cmd_series(config_path, spectrum_file, p, false, 0, 0);
    if (sc_fluc->parsed()) return cmd_series(config_path, spectrum_file, p, true, hre, him);
    if (sc_scan->parsed())
      return cmd_scan(config_path, spectrum_file, bmin, bmax, scan_count, window);
    if (sc_ksp->parsed()) return cmd_kspectrum(config_path, spectrum_file, aprime, bprime);
    if (sc_eval->parsed()) return cmd_kernel_eval(config_path, pairs_file, trunc);
    if (sc_norms->parsed()) return cmd_kernel_norms(config_path, samples);
    if (sc_check->parsed()) return cmd_oracle(state_file, modes_csv);
    if (sc_rep->parsed()) return cmd_replicate(preset);
  } catch (const Error& e) {
    report_error(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"unexpected\",\"message\":\"" << e.what() << "\"}\n";
    return 1;
  }
  std::cerr << "{\"error\":\"usage\",\"message\":\"missing subcommand\"}\n";
  return 1;
}
