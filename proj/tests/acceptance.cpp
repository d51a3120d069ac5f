// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>

#include "monobell/bell_core.hpp"
#include "monobell/functional_io.hpp"
#include "monobell/monogamy.hpp"
#include "monobell/protocol.hpp"
#include "monobell/sampler.hpp"
#include "monobell/seesaw.hpp"
#include "monobell/tomography.hpp"
#include "oracles.hpp"

#ifndef MONOBELL_DATA_DIR
#error "MONOBELL_DATA_DIR must be defined"
#endif

using namespace monobell;

namespace {

int failures = 0;
std::set<int> expected_failures;  // documented findings, still printed as FAIL
std::set<int> failed;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, bool ok, const std::string& detail) {
  const bool known = expected_failures.count(id) != 0;
  std::printf("[%s] criterion %2d: %s%s\n", ok ? "PASS" : "FAIL", id, detail.c_str(),
              !ok && known ? " [known failure, see decisions ledger]" : "");
  std::fflush(stdout);
  if (!ok) {
    ++failures;
    failed.insert(id);
  }
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void run(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("threw: ") + e.what());
  }
}

CorrelatorTable published_table(const Json& published) {
  CorrelatorTable t;
  for (const auto& e : published.at("correlator_table")) {
    const auto in = e.at("inputs").get<std::vector<int>>();
    t[{in[0], in[1], in[2]}] = {e.at("value").get<double>(), e.at("stderr").get<double>(), 0, true};
  }
  return t;
}

}  // namespace

// Usage: acceptance [--expect-fail N]...
// The exit status is 0 only when the failing set equals the expected set.
int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--expect-fail") expected_failures.insert(std::atoi(argv[++i]));
  const Json published = read_json_file(std::string(MONOBELL_DATA_DIR) + "/published_values.json");
  const CorrelatorFunctional eq = tripartite_wired_chsh();
  const BellFunctional eq_prob = to_probability_form(eq);
  const double sqrt2 = std::sqrt(2.0);

  run(1, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cb = classical_bound(eq_prob);
    const double dt = seconds_since(t0);
    const double brute = oracle::classical_max(oracle::wired_terms(), 3, 3);
    report(1, cb.value == 6.0 && brute == 6.0 && dt < 1.0,
           fmt("classical bound %.10g (independent +-1 enumeration %.10g, 512 strategies), %.3f s", cb.value, brute,
               dt));
  });

  run(2, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const BellFunctional f = to_probability_form(chsh());
    const double c = classical_bound(f).value;
    const double ns = no_signaling_bound(f).value;
    SeesawOptions opt;
    opt.seed = 7;
    const double q = seesaw(f, {2, 2}, opt).value;
    const double dt = seconds_since(t0);
    report(2, c == 2.0 && std::abs(ns - 4.0) <= 1e-9 && q >= 2 * sqrt2 - 1e-6 && dt < 10.0,
           fmt("CHSH classical %.10g, no-signaling %.10g, seesaw %.10g (2 sqrt2 = %.10g), %.3f s", c, ns, q,
               2 * sqrt2, dt));
  });

  run(3, [&] {
    CorrelatorFunctional ab_ac(Scenario::binary(3, 2));
    const int sgn[4] = {1, 1, 1, -1};
    for (int k = 0; k < 4; ++k) {
      ab_ac.add_term({k / 2, k % 2, CorrelatorFunctional::kAbsent}, sgn[k]);
      ab_ac.add_term({k / 2, CorrelatorFunctional::kAbsent, k % 2}, sgn[k]);
    }
    const double two = no_signaling_bound(to_probability_form(ab_ac)).value;
    const auto rel = wire_pairwise(chsh(), 3, "chsh");
    const auto rep = verify_monogamy(rel);
    report(3, std::abs(two - 4.0) <= 1e-9 && std::abs(rep.no_signaling - 6.0) <= 1e-9 && rep.holds,
           fmt("NS max CHSH_AB + CHSH_AC = %.10g; NS max of three-pair sum = %.10g (bound %.10g)", two,
               rep.no_signaling, rep.bound));
  });

  run(4, [&] {
    SeesawOptions opt;
    opt.seed = 11;
    opt.restarts = 20;
    const auto r = seesaw(eq_prob, {2, 2, 2}, opt);
    // Independent witness: GHZ with equatorial observables, correlator cos(a + b + c).
    const double pi = std::acos(-1.0);
    const double ghz = oracle::ghz_wired_value({{{0, pi / 2, pi / 4}, {-pi / 4, pi / 4, 0}, {-pi / 4, pi / 4, 0}}});
    const double ns = no_signaling_bound(eq_prob).value;
    report(4, r.value <= 6.0 + 1e-6,
           fmt("best static 3-qubit seesaw value over 20 restarts %.10g; GHZ witness %.10g (6 sqrt2 = %.10g); "
               "no-signaling %.10g",
               r.value, ghz, 6 * sqrt2, ns));
  });

  run(5, [&] {
    const ProtocolSpec spec;  // theta = pi/4, beta = 1, default measurements
    const double v = exact_bell_value(spec, eq);
    const double closed = oracle::protocol_closed_form(std::sin(2 * spec.theta), 1, 1, 1);
    const double pi = std::acos(-1.0);
    // Default observables as planar angles: Z = 0, X = pi/2, (Z +- X)/sqrt2 = +-pi/4.
    const double brute = oracle::protocol_value_8x8_planar(spec.theta, 1.0, {{{0, pi / 2}, {pi / 4, -pi / 4}, {0, pi / 2}}});
    const double target = 4 * sqrt2;
    report(5,
           std::abs(v - target) <= 1e-12 && std::abs(closed - target) <= 1e-12 && std::abs(brute - target) <= 1e-12,
           fmt("exact %.15g, closed form %.15g, 8x8 sum %.15g, 4 sqrt2 = %.15g", v, closed, brute, target));
  });

  run(6, [&] {
    const ProtocolSpec spec;
    const auto opt = optimize_protocol_measurements(spec, eq);
    ProtocolOptimizeOptions bloch;
    bloch.full_bloch = true;
    const double full = optimize_protocol_measurements(spec, eq, bloch).value;
    const double grid = oracle::protocol_grid_optimum(std::sin(2 * spec.theta));
    std::vector<double> s_grid;
    for (int i = 1; i <= 200; ++i) s_grid.push_back(0.005 * i);
    const auto scan = theta_threshold_scan(spec, eq, s_grid, true, 6.0);
    const auto fixed = theta_threshold_scan(spec, eq, s_grid, false, 6.0);
    const double formula = 2.0 / 3.0 * std::sqrt(0.4) - 1.0 / 3.0;
    std::string thr = scan.threshold ? fmt("%.10g%s", *scan.threshold, scan.refined ? "" : " (first grid point)")
                                     : std::string("none");
    std::string fthr = fixed.threshold ? fmt("%.10g", *fixed.threshold) : std::string("none");
    report(6, opt.value > 6.0 && std::abs(opt.value - grid) <= 1e-3,
           fmt("optimized (z-x plane) %.10g, grid oracle %.10g, full Bloch sphere %.10g; threshold optimized %s, "
               "default measurements %s, quoted %.4g, formula %.5g",
               opt.value, grid, full, thr.c_str(), fthr.c_str(), published.at("threshold_quoted").get<double>(), formula));
  });

  run(7, [&] {
    ProtocolSpec unit;  // beta = 1 correlators, scaled by a single fitted beta
    const auto model = exact_correlators(unit);
    const auto pub = published_table(published);
    double num = 0.0, den = 0.0;
    for (const auto& [xs, e] : pub) {
      num += model.at(xs).estimate * e.estimate;
      den += model.at(xs).estimate * model.at(xs).estimate;
    }
    const double beta = num / den;
    double worst = 0.0;
    Triple worst_xs{};
    for (const auto& [xs, e] : pub) {
      const double d = std::abs(beta * model.at(xs).estimate - e.estimate);
      if (d > worst) {
        worst = d;
        worst_xs = xs;
      }
    }
    const double a0b0 = beta * model.at({0, 0, 2}).estimate;
    report(7, worst <= 0.03,
           fmt("fitted beta %.6g; max |model - published| %.4g at (%d,%d,%d); <A0B0C2> model %.4g vs 0.6856", beta,
               worst, worst_xs[0], worst_xs[1], worst_xs[2], a0b0));
  });

  run(8, [&] {
    bool ok = true;
    double worst_sigma = 0.0, worst_ratio_dev = 0.0;
    for (const char* preset : {"paper-default", "experiment"}) {
      const ProtocolSpec spec = protocol_preset(preset);
      const auto exact = exact_correlators(spec);
      const auto big = estimate_correlators(simulate_counts(spec, 1'000'000, 5, 4));
      const auto small = estimate_correlators(simulate_counts(spec, 250'000, 6, 4));
      for (const auto& [xs, e] : big) {
        const double diff = std::abs(e.estimate - exact.at(xs).estimate);
        if (!e.valid || diff > 4 * e.std_error + 1e-12) ok = false;
        if (e.std_error > 0) worst_sigma = std::max(worst_sigma, diff / e.std_error);
        if (e.std_error > 1e-12) {
          const double ratio = small.at(xs).std_error / e.std_error;
          worst_ratio_dev = std::max(worst_ratio_dev, std::abs(ratio - 2.0) / 2.0);
          if (std::abs(ratio - 2.0) > 0.15 * 2.0) ok = false;
        }
      }
    }
    const ProtocolSpec spec = protocol_preset("experiment");
    const bool same = simulate_counts(spec, 200'000, 9, 1) == simulate_counts(spec, 200'000, 9, 8) &&
                      accumulate_counts(sample_trials(spec, 50'000, 9, 3)) == simulate_counts(spec, 50'000, 9, 1);
    report(8, ok && same,
           fmt("max deviation %.3g stderr at n=1e6; max stderr ratio deviation from 2: %.3g; serial == parallel: %s",
               worst_sigma, worst_ratio_dev, same ? "yes" : "no"));
  });

  run(9, [&] {
    const auto audit = audit_bell_value(published_table(published), eq, published.at("bell_value").get<double>());
    // Quadrature of the twelve published errors, computed independently.
    double var = 0.0;
    for (const auto& e : published.at("correlator_table")) var += std::pow(e.at("stderr").get<double>(), 2);
    const bool ok = std::abs(audit.recomputed.value - 5.505) <= 5e-4 &&
                    std::abs(audit.recomputed.std_error - std::sqrt(var)) <= 1e-12 && audit.discrepant;
    report(9, ok,
           fmt("published correlators sum to %.4f +- %.4f (quadrature; 0.016 is not reproduced); quoted %.4f is "
               "%.0f stderr away (flagged: %s)",
               audit.recomputed.value, audit.recomputed.std_error, audit.quoted, audit.deviation_sigmas,
               audit.discrepant ? "yes" : "no"));
  });

  run(10, [&] {
    const double r = 1.0 / sqrt2;
    const std::array<Complex, 4> phi{r, 0.0, 0.0, r};
    const auto z = pauli::z(), x = pauli::x();
    std::vector<std::vector<Observable>> obs{{Observable(z), Observable(x)},
                                             {Observable((z + x) * Complex(r)), Observable((z - x) * Complex(r))}};
    const double vcrit = critical_visibility(chsh(), obs, DensityMatrix::pure(phi), 2.0);

    const double v = 0.987;
    const auto rho = reconstruct_density(synthesize_tomography_counts(werner_state(v), 1'000'000, 3));
    const double fid = fidelity_to_bell_state(rho);
    const double fid_true = (1 + 3 * v) / 4;
    std::vector<double> grid;
    const double pi = std::acos(-1.0);
    for (int i = 0; i < 36; ++i) grid.push_back(pi * i / 36);
    const double v_hv = visibility_curve(rho, 0.0, grid).visibility;
    const double v_da = visibility_curve(rho, pi / 4, grid).visibility;
    const bool ok = std::abs(vcrit - r) <= 1e-6 && vcrit <= published.at("classical_visibility_limit").get<double>() &&
                    std::abs(fid - fid_true) <= 0.003 && std::abs(v_hv - v) <= 0.005 && std::abs(v_da - v) <= 0.005;
    report(10, ok,
           fmt("CHSH critical visibility %.10g (1/sqrt2 = %.10g); Werner(0.987) 1e6 shots: fidelity %.5f vs %.5f, "
               "V_HV %.5f, V_DA %.5f",
               vcrit, r, fid, fid_true, v_hv, v_da));
  });

  run(11, [&] {
    const double bound = 6.0;
    const std::int64_t n_total = 100'000;
    const std::int64_t per_term = (n_total + 11) / 12;
    const double pc = game_win_probability(eq, bound);
    // Binomial stderr of the win fraction, mapped to the Bell value scale.
    const double stderr_value = 2.0 * 12.0 * std::sqrt(pc * (1 - pc) / static_cast<double>(per_term * 12));
    const double at_bound = p_value(eq, bound, per_term, bound);
    const double p10 = p_value(eq, bound + 10 * stderr_value, per_term, bound);
    bool mono = true;
    double prev = 2.0;
    for (std::int64_t n : {100, 1000, 10000, 100000}) {
      const double p = p_value(eq, 6.2, n, bound);
      mono = mono && p < prev;
      prev = p;
    }
    prev = 2.0;
    for (double obs : {6.05, 6.1, 6.2, 6.4}) {
      const double p = p_value(eq, obs, 1000, bound);
      mono = mono && p < prev;
      prev = p;
    }
    report(11, at_bound == 1.0 && mono && p10 <= 1e-12 && p10 > 0.0,
           fmt("p at bound %.3g; monotone in n and gap: %s; 10-stderr violation (stderr %.4g) at n=1e5: p = %.3g",
               at_bound, mono ? "yes" : "no", stderr_value, p10));
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  if (failed != expected_failures) {
    std::printf("failing set differs from the expected set\n");
    return 1;
  }
  return 0;
}
