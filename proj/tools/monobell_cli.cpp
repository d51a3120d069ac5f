// monobell: bounds, wirings, protocol simulation, threshold scans and
// tomography from the command line. Exit codes: 0 ok, 2 config, 3 guard.

#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "monobell/errors.hpp"
#include "monobell/monogamy.hpp"
#include "monobell/protocol.hpp"
#include "monobell/sampler.hpp"
#include "monobell/seesaw.hpp"
#include "monobell/tomography.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using namespace monobell;
using namespace monobell::cli;

namespace {

struct Common {
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output directory (default $MONOBELL_OUT_DIR or ./monobell-out)");
  cmd->add_option("--format", c.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
}

// ---- bounds ----------------------------------------------------------------

struct BoundsArgs {
  Common common;
  std::string file;
  std::uint64_t seed = 1;
  int restarts = 20;
  bool no_seesaw = false;
};

int cmd_bounds(const BoundsArgs& a) {
  const Json doc = read_json_file(a.file);
  const auto f = functional_from_json(doc);
  const Scenario& sc = f.probability.scenario();

  const auto cb = classical_bound(f.probability);
  const auto ns = no_signaling_bound(f.probability);
  Json seesaw_json = nullptr;
  if (!a.no_seesaw && sc.is_binary()) {
    SeesawOptions opt;
    opt.seed = a.seed;
    opt.restarts = a.restarts;
    seesaw_json = seesaw(f.probability, std::vector<std::size_t>(sc.parties(), 2), opt).value;
  }

  const Json config{{"command", "bounds"}, {"functional", doc}, {"restarts", a.restarts}, {"seesaw", !a.no_seesaw}};
  Json report = stamp(config, a.seed);
  report["classical"] = cb.value;
  report["no_signaling"] = ns.value;
  report["seesaw_lower_bound"] = seesaw_json;
  report["declared_bound"] = f.probability.declared_bound ? Json(*f.probability.declared_bound) : Json(nullptr);

  const fs::path dir = output_dir(a.common.out);
  write_report(dir / "bounds_report.json", report);
  if (a.common.format == "csv") {
    std::ostringstream os;
    os << "quantity,value\nclassical," << num(cb.value) << "\nno_signaling," << num(ns.value) << "\nseesaw,"
       << (seesaw_json.is_null() ? "" : num(seesaw_json.get<double>())) << "\ndeclared,"
       << (f.probability.declared_bound ? num(*f.probability.declared_bound) : "") << "\n";
    write_text(dir / "bounds.csv", os.str());
  }

  std::cout << "classical      " << num(cb.value) << "\n"
            << "no-signaling   " << num(ns.value) << "\n"
            << "seesaw (lower) " << (seesaw_json.is_null() ? "skipped" : num(seesaw_json.get<double>())) << "\n"
            << "declared       " << (f.probability.declared_bound ? num(*f.probability.declared_bound) : "none")
            << "\n";
  return 0;
}

// ---- wire ------------------------------------------------------------------

struct WireArgs {
  Common common;
  std::string file;
  std::size_t n = 3;
  std::size_t m = 2;
  std::string name = "base";
};

int cmd_wire(const WireArgs& a) {
  const auto f = functional_from_json(read_json_file(a.file));
  const MonogamyRelation r = f.correlator ? wire_m_of_n(*f.correlator, a.n, a.name)
                                          : wire_m_of_n(f.probability, a.n, a.name);
  if (r.provenance.m != a.m)
    throw ConfigError("wire: base has " + std::to_string(r.provenance.m) + " parties but --m is " +
                      std::to_string(a.m));
  const fs::path path = output_dir(a.common.out) / ("wired_n" + std::to_string(a.n) + "_m" + std::to_string(a.m) + ".json");
  write_report(path, to_json(r));
  std::cout << "wrote " << path.string() << "\n"
            << "copies " << binomial(a.n, a.m) << ", bound " << num(r.bound) << "\n";
  return 0;
}

// ---- simulate --------------------------------------------------------------

struct ProtocolSource {
  std::string preset;
  std::string file;
};

void add_protocol_source(CLI::App* cmd, ProtocolSource& s) {
  auto* p = cmd->add_option("--preset", s.preset, "paper-default | experiment");
  auto* f = cmd->add_option("--file", s.file, "Protocol JSON");
  p->excludes(f);
}

std::pair<ProtocolSpec, std::string> load_protocol(const ProtocolSource& s) {
  if (!s.file.empty()) {
    const Json j = read_json_file(s.file);
    return {protocol_from_json(j), j.value("preset", std::string("paper-default"))};
  }
  const std::string name = s.preset.empty() ? "paper-default" : s.preset;
  return {protocol_preset(name), name};
}

CorrelatorFunctional load_correlator(const std::string& file) {
  if (file.empty()) return tripartite_wired_chsh();
  auto f = functional_from_json(read_json_file(file));
  if (!f.correlator) throw ConfigError("functional must be given in correlator form");
  return *f.correlator;
}

struct SimulateArgs {
  Common common;
  ProtocolSource source;
  std::string functional;
  std::int64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool exact = false;
};

int cmd_simulate(const SimulateArgs& a) {
  const auto [spec, preset] = load_protocol(a.source);
  const CorrelatorFunctional f = load_correlator(a.functional);
  if (!a.exact && a.trials < 1) throw ConfigError("--trials must be >= 1");

  const auto exact = exact_correlators(spec);
  const double exact_value = exact_bell_value(spec, f);
  CorrelatorTable table = exact;
  std::optional<CountsTable> counts;
  if (!a.exact) {
    counts = simulate_counts(spec, a.trials, a.seed, a.threads);
    table = estimate_correlators(*counts);
  }
  const BellEstimate est = estimate_bell_value(table, f);
  const double bound = f.declared_bound.value_or(classical_bound(to_probability_form(f)).value);

  Json config{{"command", "simulate"}, {"protocol", to_json(spec)}, {"functional", to_json(f)},
              {"exact", a.exact}};
  if (!a.exact) config["trials"] = a.trials;
  Json report = stamp(config, a.seed);
  report["exact_bell_value"] = exact_value;
  report["bell_value"] = {{"value", est.value}, {"stderr", est.std_error}};
  report["classical_bound"] = bound;
  if (!a.exact) {
    const auto per_term = std::max<std::int64_t>(1, a.trials / static_cast<std::int64_t>(f.terms().size()));
    report["p_value"] = p_value(f, est.value, per_term, bound);
    report["p_value_trials_per_term"] = per_term;
  }
  Json rows = Json::array();
  for (const auto& [xs, e] : table)
    rows.push_back({{"inputs", xs}, {"exact", exact.at(xs).estimate}, {"estimate", e.estimate},
                    {"stderr", e.std_error}, {"n_events", e.n_events}, {"valid", e.valid}});
  report["correlators"] = rows;

  if (preset == "experiment") {
    const Json anchors = published_values();
    CorrelatorTable published;
    Json cmp = Json::array();
    for (const auto& e : anchors.at("correlator_table")) {
      const auto in = e.at("inputs").get<std::vector<int>>();
      const Triple xs{in[0], in[1], in[2]};
      const double pv = e.at("value").get<double>(), pe = e.at("stderr").get<double>();
      published[xs] = {pv, pe, 0, true};
      cmp.push_back({{"inputs", xs}, {"published", pv}, {"published_stderr", pe}, {"model", table.at(xs).estimate},
                     {"deviation", table.at(xs).estimate - pv}});
    }
    const auto audit = audit_bell_value(published, f, anchors.at("bell_value").get<double>());
    report["published_comparison"] = {
        {"correlators", cmp},
        {"published_bell_value", audit.quoted},
        {"sum_of_published_correlators", {{"value", audit.recomputed.value}, {"stderr", audit.recomputed.std_error}}},
        {"deviation_stderr", audit.deviation_sigmas},
        {"discrepancy", audit.discrepant},
        {"note", audit.discrepant ? "published Bell value is not the signed sum of the published correlators"
                                  : "published Bell value agrees with the signed sum"}};
    std::cout << "published correlator audit: signed sum " << num(audit.recomputed.value) << " +- "
              << num(audit.recomputed.std_error) << " vs published " << num(audit.quoted)
              << (audit.discrepant ? "  [DISCREPANCY]" : "") << "\n";
  }

  const fs::path dir = output_dir(a.common.out);
  write_report(dir / "simulate_report.json", report);
  if (a.common.format == "csv") {
    std::ostringstream c;
    write_correlators_csv(c, table);
    write_text(dir / "correlators.csv", c.str());
    if (counts) {
      std::ostringstream k;
      write_counts_csv(k, *counts);
      write_text(dir / "counts.csv", k.str());
    }
  }
  std::cout << "exact Bell value " << num(exact_value) << "\n"
            << (a.exact ? "exact" : "estimated") << " Bell value " << num(est.value) << " +- " << num(est.std_error)
            << "\n";
  if (report.contains("p_value")) std::cout << "p-value " << num(report["p_value"].get<double>()) << "\n";
  return 0;
}

// ---- scan ------------------------------------------------------------------

struct ScanArgs {
  Common common;
  ProtocolSource source;
  std::string functional;
  std::string grid = "0.01:1:100";
  bool optimized = false;
  bool full_bloch = false;
  std::uint64_t seed = 1;
  int restarts = 20;
};

std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0.0, hi = 0.0;
  long steps = 0;
  char c1 = 0, c2 = 0, extra = 0;
  std::istringstream is(spec);
  if (!(is >> lo >> c1 >> hi >> c2 >> steps) || c1 != ':' || c2 != ':' || (is >> extra))
    throw ConfigError("--grid must look like a:b:steps");
  if (steps < 1) throw ConfigError("--grid needs at least one step");
  if (steps == 1) return {lo};
  std::vector<double> g;
  for (long i = 0; i < steps; ++i) g.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
  return g;
}

int cmd_scan(const ScanArgs& a) {
  const auto [spec, preset] = load_protocol(a.source);
  const CorrelatorFunctional f = load_correlator(a.functional);
  const auto grid = parse_grid(a.grid);
  const double bound = f.declared_bound.value_or(classical_bound(to_probability_form(f)).value);
  ProtocolOptimizeOptions opt;
  opt.seed = a.seed;
  opt.restarts = a.restarts;
  opt.full_bloch = a.full_bloch;
  const ScanResult r = theta_threshold_scan(spec, f, grid, a.optimized, bound, opt);

  const Json anchors = published_values();
  const double formula = 2.0 / 3.0 * std::sqrt(2.0 / 5.0) - 1.0 / 3.0;
  const Json config{{"command", "scan"}, {"protocol", to_json(spec)}, {"functional", to_json(f)},
                    {"grid", a.grid},    {"optimized", a.optimized},  {"restarts", a.restarts},
                    {"full_bloch", a.full_bloch}};
  Json report = stamp(config, a.seed);
  report["bound"] = bound;
  report["threshold"] = r.threshold ? Json(*r.threshold) : Json(nullptr);
  report["threshold_refined"] = r.refined;
  report["threshold_note"] = !r.threshold ? "no violation in range"
                             : r.refined  ? "bisected between grid points"
                                          : "first grid point already violates";
  report["published_threshold_quoted"] = anchors.at("threshold_quoted");
  report["published_threshold_formula"] = formula;
  Json curve = Json::array();
  for (const auto& p : r.curve) curve.push_back({{"sin2theta", p.sin2theta}, {"value", p.value}});
  if (a.common.format == "json") report["curve"] = curve;

  const fs::path dir = output_dir(a.common.out);
  write_report(dir / "scan_report.json", report);
  if (a.common.format == "csv") {
    std::ostringstream os;
    os << "sin2theta,value\n";
    for (const auto& p : r.curve) os << num(p.sin2theta) << ',' << num(p.value) << '\n';
    write_text(dir / "scan_curve.csv", os.str());
  }
  std::cout << (r.threshold ? "threshold sin(2 theta) = " + num(*r.threshold) + " (" +
                                  report["threshold_note"].get<std::string>() + ")"
                            : std::string("no violation in range"))
            << "\nquoted threshold " << num(anchors.at("threshold_quoted").get<double>()) << ", formula value "
            << num(formula) << "\n";
  return 0;
}

// ---- tomo ------------------------------------------------------------------

struct TomoArgs {
  Common common;
  std::string state = "werner:0.987";
  std::int64_t shots = 1'000'000;
  std::uint64_t seed = 1;
  bool exact = false;
  int points = 37;
};

DensityMatrix parse_state(const std::string& s) {
  if (s == "phi+") return werner_state(1.0);
  if (s.rfind("werner:", 0) == 0) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s.substr(7), &used);
    } catch (const std::exception&) {
      throw ConfigError("invalid werner parameter in '" + s + "'");
    }
    if (used != s.size() - 7) throw ConfigError("invalid werner parameter in '" + s + "'");
    return werner_state(v);
  }
  if (fs::exists(s)) {
    try {
      return DensityMatrix(matrix_from_json(read_json_file(s)));
    } catch (const LinalgError& e) {
      throw ConfigError(std::string("state file: ") + e.what());
    }
  }
  throw ConfigError("--state must be phi+, werner:<v> or a matrix JSON file");
}

int cmd_tomo(const TomoArgs& a) {
  const DensityMatrix truth = parse_state(a.state);
  if (truth.dim() != 4) throw ConfigError("tomography needs a two-qubit state");
  if (!a.exact && a.shots < 1) throw ConfigError("--shots must be >= 1");
  if (a.points < 3) throw ConfigError("--points must be >= 3");
  const DensityMatrix rho = a.exact ? reconstruct_density(exact_tomography_frequencies(truth))
                                    : reconstruct_density(synthesize_tomography_counts(truth, a.shots, a.seed));
  std::vector<double> grid;
  for (int i = 0; i < a.points; ++i) grid.push_back(std::numbers::pi * i / (a.points - 1));
  const auto hv = visibility_curve(rho, 0.0, grid);
  const auto da = visibility_curve(rho, std::numbers::pi / 4, grid);
  const double fid = fidelity_to_bell_state(rho);

  const Json anchors = published_values();
  Json config{{"command", "tomo"}, {"state", to_json(truth.matrix())}, {"exact", a.exact}, {"points", a.points}};
  if (!a.exact) config["shots"] = a.shots;
  Json report = stamp(config, a.seed);
  report["fidelity"] = fid;
  report["fidelity_of_input"] = fidelity_to_bell_state(truth);
  report["visibility_hv"] = {{"value", hv.visibility}, {"degenerate", hv.degenerate}};
  report["visibility_da"] = {{"value", da.visibility}, {"degenerate", da.degenerate}};
  report["published"] = {{"fidelity", anchors.at("fidelity")},
                     {"visibility_hv", anchors.at("visibility_hv")},
                     {"visibility_da", anchors.at("visibility_da")}};
  report["reconstructed"] = to_json(rho.matrix());
  auto curve_json = [](const VisibilityCurve& c) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < c.theta2.size(); ++i) rows.push_back({{"theta2", c.theta2[i]}, {"rate", c.rate[i]}});
    return rows;
  };
  if (a.common.format == "json") report["curves"] = {{"hv", curve_json(hv)}, {"da", curve_json(da)}};

  const fs::path dir = output_dir(a.common.out);
  write_report(dir / "tomo_report.json", report);
  write_report(dir / "reconstructed_density.json", to_json(rho.matrix()));
  if (a.common.format == "csv") {
    for (const auto* c : {&hv, &da}) {
      std::ostringstream os;
      os << "theta2,rate\n";
      for (std::size_t i = 0; i < c->theta2.size(); ++i) os << num(c->theta2[i]) << ',' << num(c->rate[i]) << '\n';
      write_text(dir / (c == &hv ? "visibility_hv.csv" : "visibility_da.csv"), os.str());
    }
  }
  std::cout << "fidelity " << num(fid) << " (published " << num(anchors.at("fidelity").at("value").get<double>()) << ")\n"
            << "V_HV " << num(hv.visibility) << (hv.degenerate ? " [degenerate fit]" : "") << " (published "
            << num(anchors.at("visibility_hv").at("value").get<double>()) << ")\n"
            << "V_DA " << num(da.visibility) << (da.degenerate ? " [degenerate fit]" : "") << " (published "
            << num(anchors.at("visibility_da").at("value").get<double>()) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monogamy Bell inequalities: bounds, wirings, swap-protocol simulation and tomography"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  BoundsArgs bounds;
  auto* b = app.add_subcommand("bounds", "Classical, no-signaling and seesaw bounds of a functional");
  b->add_option("file", bounds.file, "Functional JSON")->required();
  b->add_option("--seed", bounds.seed);
  b->add_option("--restarts", bounds.restarts)->check(CLI::PositiveNumber);
  b->add_flag("--no-seesaw", bounds.no_seesaw);
  add_common(b, bounds.common);

  WireArgs wire;
  auto* w = app.add_subcommand("wire", "Sum a base functional over all m-party subsets of n parties");
  w->add_option("file", wire.file, "Base functional JSON")->required();
  w->add_option("--n", wire.n)->required();
  w->add_option("--m", wire.m);
  w->add_option("--name", wire.name, "Base name recorded in the provenance");
  add_common(w, wire.common);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Monte Carlo run of the swap protocol");
  add_protocol_source(s, sim.source);
  s->add_option("--functional", sim.functional, "Correlator functional JSON (default: wired CHSH)");
  s->add_option("--trials", sim.trials);
  s->add_option("--seed", sim.seed);
  s->add_option("--threads", sim.threads)->check(CLI::PositiveNumber);
  s->add_flag("--exact", sim.exact, "Exact correlators, no sampling");
  add_common(s, sim.common);

  ScanArgs scan;
  auto* sc = app.add_subcommand("scan", "Bell value against sin(2 theta) and the violation threshold");
  add_protocol_source(sc, scan.source);
  sc->add_option("--functional", scan.functional);
  sc->add_option("--grid", scan.grid, "a:b:steps over sin(2 theta)");
  sc->add_flag("--optimized", scan.optimized, "Optimize measurements at every grid point");
  sc->add_flag("--full-bloch", scan.full_bloch, "Let optimized observables leave the z-x plane");
  sc->add_option("--seed", scan.seed);
  sc->add_option("--restarts", scan.restarts)->check(CLI::PositiveNumber);
  add_common(sc, scan.common);

  TomoArgs tomo;
  auto* t = app.add_subcommand("tomo", "Synthetic tomography, fidelity and fringe visibilities");
  t->add_option("--state", tomo.state, "phi+ | werner:<v> | matrix JSON file");
  t->add_option("--shots", tomo.shots);
  t->add_option("--seed", tomo.seed);
  t->add_option("--points", tomo.points, "theta2 grid points over [0, pi]");
  t->add_flag("--exact", tomo.exact, "Infinite-shot probabilities");
  add_common(t, tomo.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*b) return cmd_bounds(bounds);
    if (*w) return cmd_wire(wire);
    if (*s) return cmd_simulate(sim);
    if (*sc) return cmd_scan(scan);
    if (*t) return cmd_tomo(tomo);
  } catch (const GuardExceeded& e) {
    std::cerr << "guard exceeded: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
