// Acceptance suite: the project's exit criteria, one per --criterion.
// Each check prints a [PASS]/[FAIL] line; the process exits nonzero if any
// requested criterion fails. Scales are the contract scales; expect the
// full run to take tens of minutes on a small machine.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cherlb/baselines.hpp"
#include "cherlb/chi2.hpp"
#include "cherlb/metrics.hpp"
#include "cherlb/mimo.hpp"
#include "cherlb/parallel.hpp"
#include "cherlb/ris.hpp"
#include "cherlb/rng.hpp"
#include "cherlb/solver.hpp"
#include "support.hpp"

using namespace cherlb;

namespace {

int g_failures = 0;
std::string g_cli;

void report(bool ok, int criterion, const std::string& what) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
              what.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

long scaled(long n) {
  // development-only knob; the recorded acceptance run leaves it unset
  if (const char* s = std::getenv("CHERLB_ACCEPT_FAST"))
    if (std::atoi(s) > 0) return std::max(1000L, n / 100);
  return n;
}

// ---------------------------------------------------------------- 1
void criterion_1() {
  SolverConfig cfg;
  cfg.delta_beta = 1e-9;
  bool ok = true;
  double worst = 0.0;
  for (int k : {1, 2, 4, 8, 16, 24})
    for (double rho : {0.0, 1.0, 10.0, 100.0, 300.0})
      for (double s2 : {0.5, 1.0, 2.0})
        for (double eps : {1e-3, 1e-6, 1e-9}) {
          const NoncentralChiSquareSpec spec(k, rho * s2, s2);
          const auto rep =
              solve_noncentral(spec, ReliabilityTarget::from_epsilon(eps), cfg);
          const double f =
              rep.bound > 0.0 ? noncentral_cdf(spec, rep.bound) : 0.0;
          if (!(f <= eps)) ok = false;
          worst = std::max(worst, f / eps);
        }
  report(ok, 1,
         fmt("analytic conservativeness on the 270-cell grid "
             "(worst F(bound)/eps = %.3g)",
             worst));
}

// ---------------------------------------------------------------- 2
void criterion_2() {
  const auto target = ReliabilityTarget::from_epsilon(1e-6);
  SolverConfig tight;
  tight.delta_beta = 1e-12;
  bool agree = true, residual_ok = true;
  double worst_resid = 0.0;
  for (int k = 2; k <= 40; ++k) {
    const auto a = solve_central(k, 1.0, target, tight);
    const auto b =
        solve_noncentral(NoncentralChiSquareSpec(k, 0.0, 1.0), target, tight);
    if (std::fabs(a.bound - b.bound) > 1e-4 * k) agree = false;
    const double lhs = std::exp(0.5 * k - 0.5 * a.bound +
                                0.5 * k * std::log(a.bound / k));
    const double resid = std::fabs(lhs - 1e-6);
    worst_resid = std::max(worst_resid, resid);
    if (resid > 1e-9) residual_ok = false;
  }
  report(agree && residual_ok, 2,
         fmt("central cross-check for K=2..40 (worst residual %.3g)",
             worst_resid));
}

// ---------------------------------------------------------------- 3
void criterion_3() {
  const auto target = ReliabilityTarget::from_epsilon(1e-6);
  std::vector<std::pair<double, double>> curve;
  bool cher_below = true;
  bool poly_exceeds = false;
  for (double m2 = 0.0; m2 <= 200.0; m2 += 2.0) {
    const NoncentralChiSquareSpec spec(4, m2, 1.0);
    const double bt = numeric_quantile(spec, target);
    curve.push_back({m2, bt});
    if (!(solve_noncentral(spec, target).bound < bt)) cher_below = false;
    if (poly_lb_noncentral(spec, target) > bt) poly_exceeds = true;
  }
  const auto fit = regression_fit(curve, false);
  bool regression_negative = false;
  for (const auto& [x, y] : curve)
    if (regression_predict(fit, x) < 0.0) regression_negative = true;

  report(cher_below, 3, "chernoff bound below the exact threshold at all 101 points");
  report(poly_exceeds, 3, "polynomial bound exceeds the threshold somewhere");
  report(regression_negative, 3,
         "unanchored quadratic regression goes negative at small M2");
}

// ---------------------------------------------------------------- 4
void criterion_4() {
  const auto target = ReliabilityTarget::from_epsilon(1e-6);
  double lo = 1.0, hi = 0.0;
  bool ok = true;
  for (double m2 = 0.0; m2 <= 200.0; m2 += 2.0) {
    const NoncentralChiSquareSpec spec(4, m2, 1.0);
    const auto rep = solve_noncentral(spec, target);
    const double f = noncentral_cdf(spec, rep.bound);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
    if (!(f >= 1e-8 && f <= 1e-6)) ok = false;
  }
  report(ok, 4,
         fmt("achieved outage within [1e-8, 1e-6] across the sweep "
             "(range [%.3g, %.3g])",
             lo, hi));
}

// ---------------------------------------------------------------- 5
void criterion_5() {
  const auto target = ReliabilityTarget::from_epsilon(1e-6);
  rng::Substream rs(5, rng::Domain::generic, 0);
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int k = 1 + static_cast<int>(rs.uniform() * 16);
    const double rho = rs.uniform() * 200.0;
    const double s2 = 0.25 + 3.75 * rs.uniform();
    const NoncentralChiSquareSpec spec(k, rho * s2, s2);
    for (double eta : {0.1, 3.0, 10.0}) {
      const double err = check_scaling(spec, eta, target);
      worst = std::max(worst, err);
      if (err > 2e-4) ok = false;
    }
  }
  report(ok, 5, fmt("linear scaling law (worst relative error %.3g)", worst));
}

// ---------------------------------------------------------------- 6
void criterion_6() {
  SolverConfig tight;
  tight.delta_beta = 1e-10;
  const auto lam = [&](int k, double eps) {
    const NoncentralChiSquareSpec spec(k, 50.0 * k, 1.0);
    const auto rep =
        solve_noncentral(spec, ReliabilityTarget::from_epsilon(eps), tight);
    return closeness(spec, rep.bound).lambda;
  };
  const double l2 = lam(2, 1e-1);
  const double l4 = lam(4, 1e-2);
  const double l6 = lam(6, 1e-3);
  const bool ok = std::fabs(l2 - l4) <= 1e-3 && std::fabs(l2 - l6) <= 1e-3;
  report(ok, 6,
         fmt("diversity identity at rho/K=50 (lambda %.6f / %.6f / %.6f)", l2,
             l4, l6));
}

// ---------------------------------------------------------------- 7
void criterion_7() {
  SolverConfig tight;
  tight.delta_beta = 1e-10;
  bool drop_ok = true;
  for (double rho : {100.0, 400.0, 1200.0}) {
    const NoncentralChiSquareSpec spec(8, rho, 1.0);
    const auto l5 = closeness(
        spec,
        solve_noncentral(spec, ReliabilityTarget::from_epsilon(1e-5), tight)
            .bound);
    const auto l9 = closeness(
        spec,
        solve_noncentral(spec, ReliabilityTarget::from_epsilon(1e-9), tight)
            .bound);
    if (!(l5.lambda - l9.lambda <= 0.15)) drop_ok = false;
  }
  bool fd_ok = true;
  double worst = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double lambda = i / 21.0;
    const double h = 1e-7;
    const double fd =
        (std::log10(epsilon_from_lambda(lambda + h, 400.0, 8)) -
         std::log10(epsilon_from_lambda(lambda - h, 400.0, 8))) /
        (2.0 * h);
    const double an = epsilon_sensitivity(lambda, 400.0, 8);
    const double rel = std::fabs(an - fd) / std::fabs(fd);
    worst = std::max(worst, rel);
    if (rel > 1e-6) fd_ok = false;
  }
  report(drop_ok, 7, "lambda drop from 1e-5 to 1e-9 at most 0.15");
  report(fd_ok, 7,
         fmt("analytic sensitivity matches finite differences (worst %.3g)",
             worst));
}

// ---------------------------------------------------------------- 8
void criterion_8() {
  mimo::MarkovChannelParams params;
  struct Row {
    int m, n;
    double ref, tol;
  };
  for (const Row row : {Row{16, 2, 0.727, 0.01}, Row{32, 2, 0.0027, 0.001},
                        Row{24, 4, 0.0551, 0.005}}) {
    mimo::MimoConfig cfg;
    cfg.tx = row.m;
    cfg.rx = row.n;
    cfg.trials = scaled(100000);
    cfg.seed = 8;
    const auto s = mimo::experiment_rho_probability(cfg, params);
    const bool ok = std::fabs(s.value - row.ref) <= row.tol;
    report(ok, 8,
           fmt("P(rho<120) at M=%d N=%d: %.5f (reference %.4f +- %.3f)", row.m,
               row.n, s.value, row.ref, row.tol));
  }
}

// ---------------------------------------------------------------- 9
void criterion_9() {
  mimo::MarkovChannelParams params;
  const auto target = ReliabilityTarget::from_epsilon(1e-6);
  const double corr = mimo::doppler_correlation(params);
  const double j02 = corr * corr;

  const auto mean_bound = [&](int m, long trials) {
    mimo::MimoConfig cfg;
    cfg.tx = m;
    cfg.rx = 2;
    cfg.trials = trials;
    cfg.seed = 9;
    return mimo::experiment_power(cfg, params, target).mean_bound.value;
  };

  const double b16 = mean_bound(16, scaled(20000));
  const double b32 = mean_bound(32, scaled(20000));
  const double b1000 = mean_bound(1000, scaled(2000));
  report(std::fabs(b16 - 0.17) <= 0.02, 9,
         fmt("mean bound at M=16: %.4f (target 0.17 +- 0.02)", b16));
  report(std::fabs(b32 - 0.30) <= 0.03, 9,
         fmt("mean bound at M=32: %.4f (target 0.30 +- 0.03)", b32));
  report(std::fabs(b1000 - j02) <= 0.05 * j02, 9,
         fmt("mean bound at M=1000: %.4f (within 5%% of J0^2 = %.4f)", b1000,
             j02));
}

// ---------------------------------------------------------------- 10
void criterion_10() {
  mimo::MarkovChannelParams params;
  const auto target = ReliabilityTarget::from_epsilon(1e-6);
  const auto power = [&](int m) {
    mimo::MimoConfig cfg;
    cfg.tx = m;
    cfg.rx = 2;
    cfg.trials = scaled(30000);
    cfg.seed = 10;
    return mimo::experiment_power(cfg, params, target);
  };
  const auto p16 = power(16);
  const auto p64 = power(64);
  report(std::fabs(p16.inv_bound.value - 5.5) <= 0.5, 10,
         fmt("normalized power at M=16: %.3f (target 5.5 +- 0.5)",
             p16.inv_bound.value));
  report(std::fabs(p64.inv_bound.value - 2.2) <= 0.3, 10,
         fmt("normalized power at M=64: %.3f (target 2.2 +- 0.3)",
             p64.inv_bound.value));
  const bool band = p16.lambda_over_bound.value >= 1.0 &&
                    p16.lambda_over_bound.value <= 1.4 &&
                    p64.lambda_over_bound.value >= 1.0 &&
                    p64.lambda_over_bound.value <= 1.4;
  report(band, 10,
         fmt("throughput-reference power in [1.0, 1.4] (%.3f, %.3f)",
             p16.lambda_over_bound.value, p64.lambda_over_bound.value));
}

// ---------------------------------------------------------------- 11
void criterion_11() {
  mimo::MarkovChannelParams params;
  mimo::MimoConfig cfg;
  cfg.tx = 16;
  cfg.rx = 2;
  cfg.trials = scaled(10000000);
  cfg.seed = 11;
  const auto s = mimo::experiment_reliability(
      cfg, params, ReliabilityTarget::from_epsilon(1e-3));
  const double limit =
      1e-3 + 4.0 * std::sqrt(1e-3 / static_cast<double>(cfg.trials));
  report(s.value <= limit, 11,
         fmt("single-shot outage %.6g <= %.6g at eps=1e-3 over %ld trials",
             s.value, limit, cfg.trials));
}

// ---------------------------------------------------------------- 12
void criterion_12() {
  mimo::MarkovChannelParams params;
  const auto h = mimo::sample_channel(2, 16, 2024, 0);
  const auto spec = mimo::gain_params(h, mimo::mf_beamformer(h), params);
  const std::size_t n = static_cast<std::size_t>(scaled(1000000));
  const auto samples = mimo::realized_gain_samples(h, params, n, 12);
  const double ks = testsupport::ks_distance(samples, spec);
  const double crit = 1.628 / std::sqrt(static_cast<double>(n));
  report(ks < crit, 12,
         fmt("markov gain KS distance %.5f below the 1%% critical value %.5f",
             ks, crit));

  double prev = 1.0;
  bool decreasing = true;
  std::string trail;
  for (int nr : {16, 64, 256}) {
    ris::RisConfig rc;
    rc.reflectors = nr;
    rc.kappa_h = rc.kappa_g = 3.0;
    rc.seed = 12;
    const auto draws = ris::sample_gain(rc, n, 12);
    const double d = testsupport::ks_distance(draws, ris::clt_spec(rc));
    trail += fmt("%.5f ", d);
    if (!(d < prev)) decreasing = false;
    prev = d;
  }
  report(decreasing, 12,
         "reflector-gain KS distance strictly decreasing over N_R "
         "{16,64,256}: " + trail);
}

// ---------------------------------------------------------------- 13
void criterion_13() {
  const auto target = ReliabilityTarget::from_epsilon(1e-5);
  struct Endpoint {
    double lo16, hi16, lo256, hi256;
  };
  const Endpoint bands[2] = {{0.08, 0.12, 0.32, 0.48},   // kappa = 3
                             {0.16, 0.24, 0.40, 0.60}};  // kappa = 5
  int band_idx = 0;
  for (double kappa : {3.0, 5.0}) {
    bool conservative = true;
    bool monotone = true;
    double prev_ratio = 0.0;
    double ng16 = 0.0, ng256 = 0.0;
    for (int nr : {16, 32, 64, 128, 256}) {
      ris::RisConfig cfg;
      cfg.reflectors = nr;
      cfg.kappa_h = cfg.kappa_g = kappa;
      cfg.trials = scaled(100000000);
      cfg.seed = 13;
      const auto r = ris::ris_experiment(cfg, target);
      std::printf(
          "  kappa=%.0f N_R=%3d: bound=%.6g thr=%.6g ratio=%.4f outage=%.3g "
          "norm=%.4f\n",
          kappa, nr, r.bound, r.empirical_threshold, r.ratio,
          r.achieved_outage, r.normalized_gain);
      std::fflush(stdout);
      if (!(r.bound <= r.empirical_threshold)) conservative = false;
      if (!(r.ratio >= prev_ratio)) monotone = false;
      prev_ratio = r.ratio;
      if (nr == 16) ng16 = r.normalized_gain;
      if (nr == 256) ng256 = r.normalized_gain;
    }
    const Endpoint& b = bands[band_idx++];
    report(conservative, 13,
           fmt("kappa=%.0f: bound below the empirical threshold at every N_R",
               kappa));
    report(monotone, 13,
           fmt("kappa=%.0f: bound/threshold nondecreasing in N_R", kappa));
    report(ng16 >= b.lo16 && ng16 <= b.hi16, 13,
           fmt("kappa=%.0f: normalized gain at N_R=16 is %.4f (band "
               "[%.2f, %.2f])",
               kappa, ng16, b.lo16, b.hi16));
    report(ng256 >= b.lo256 && ng256 <= b.hi256, 13,
           fmt("kappa=%.0f: normalized gain at N_R=256 is %.4f (band "
               "[%.2f, %.2f])",
               kappa, ng256, b.lo256, b.hi256));
  }
}

// ---------------------------------------------------------------- 14
void criterion_14() {
  if (g_cli.empty()) {
    report(false, 14, "no --cli path given; cannot drive the binary");
    return;
  }
  const auto data_rows = [](const std::string& path) {
    std::ifstream f(path);
    std::string line, acc;
    while (std::getline(f, line))
      if (!line.empty() && line[0] != '#') acc += line + "\n";
    return acc;
  };
  const auto run = [&](const std::string& args) {
    const std::string cmd = g_cli + " " + args + " 2>/dev/null";
    return std::system(cmd.c_str()) == 0;
  };
  bool ok = true;
  ok &= run("mimo --tx 16 --rx 2 --trials 30000 --seed 14 --epsilon 1e-4 "
            "--stat power --threads 1 --out /tmp/acc14_m1.csv");
  ok &= run("mimo --tx 16 --rx 2 --trials 30000 --seed 14 --epsilon 1e-4 "
            "--stat power --threads 3 --out /tmp/acc14_m3.csv");
  ok &= run("ris --nr 16 --kappa 3 --epsilon 1e-3 --trials 300000 --seed 14 "
            "--threads 1 --out /tmp/acc14_r1.csv");
  ok &= run("ris --nr 16 --kappa 3 --epsilon 1e-3 --trials 300000 --seed 14 "
            "--threads 3 --out /tmp/acc14_r3.csv");
  const bool mimo_same =
      ok && data_rows("/tmp/acc14_m1.csv") == data_rows("/tmp/acc14_m3.csv");
  const bool ris_same =
      ok && data_rows("/tmp/acc14_r1.csv") == data_rows("/tmp/acc14_r3.csv");
  report(ok && mimo_same && ris_same, 14,
         "reruns with different worker counts give byte-identical data rows");
}

}  // namespace

int main(int argc, char** argv) {
  int which = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      which = std::atoi(argv[++i]);
    else if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc)
      g_cli = argv[++i];
  }
  if (std::getenv("CHERLB_ACCEPT_FAST"))
    std::printf("NOTE: CHERLB_ACCEPT_FAST set; running at reduced scale\n");

  using Fn = void (*)();
  const Fn criteria[] = {criterion_1, criterion_2,  criterion_3,  criterion_4,
                         criterion_5, criterion_6,  criterion_7,  criterion_8,
                         criterion_9, criterion_10, criterion_11, criterion_12,
                         criterion_13, criterion_14};
  const auto t0 = std::chrono::steady_clock::now();
  if (which == 0) {
    for (int i = 0; i < 14; ++i) criteria[i]();
  } else if (which >= 1 && which <= 14) {
    criteria[which - 1]();
  } else {
    std::fprintf(stderr, "unknown criterion %d\n", which);
    return 2;
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  std::printf("%s: %d failure%s in %.1fs\n", g_failures == 0 ? "OK" : "FAILED",
              g_failures, g_failures == 1 ? "" : "s", secs);
  return g_failures == 0 ? 0 : 1;
}
