// cherlb: guaranteed lower bounds on outage thresholds for (non)central
// chi-square distributed beamforming gains, with verification against the
// exact CDF and the Monte Carlo experiments behind the MIMO/RIS studies.
//
// Subcommands: bound, sweep, mimo, ris, selftest.
// Exit codes: 0 ok, 1 selftest failure, 2 invalid arguments,
//             3 solver iteration cap, 4 insufficient samples.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cherlb/baselines.hpp"
#include "cherlb/chi2.hpp"
#include "cherlb/csv.hpp"
#include "cherlb/metrics.hpp"
#include "cherlb/mimo.hpp"
#include "cherlb/parallel.hpp"
#include "cherlb/ris.hpp"
#include "cherlb/solver.hpp"
#include "cherlb/special.hpp"
#include "cherlb/version.hpp"

namespace {

using namespace cherlb;

constexpr int kExitOk = 0;
constexpr int kExitSelftest = 1;
constexpr int kExitBadArgs = 2;
constexpr int kExitIterationCap = 3;
constexpr int kExitInsufficientSamples = 4;

struct BoundOptions {
  int dof = 4;
  double noncentrality = 0.0;
  double variance = 1.0;
  std::string components;  // "mean:var,mean:var,..."
  double epsilon = 1e-6;
  std::string method = "cherlb";
  bool verify = false;
  std::string csv_path;
  SolverConfig solver;
};

struct SweepOptions {
  std::string variable = "m2";
  double from = 0.0;
  double to = 200.0;
  double step = 2.0;
  int dof = 4;
  double variance = 1.0;
  double noncentrality = 0.0;
  double rho_per_dof = -1.0;  // >= 0 locks M2 = rho_per_dof * K * var
  double epsilon = 1e-6;
  std::string methods = "exact,cherlb,polylb,z1,z2,aty1,aty2";
  std::string out;
  SolverConfig solver;
};

struct MimoOptions {
  int tx = 16;
  int rx = 2;
  long trials = 100000;
  std::uint64_t seed = 1;
  double epsilon = 1e-6;
  std::string stat = "rho-prob";
  double carrier = 3.5e9;
  double velocity = 20.0;
  double lag = 0.5e-3;
  double threshold = 120.0;
  unsigned threads = 0;
  std::string out;
};

struct RisOptions {
  int nr = 64;
  double kappa = 3.0;
  std::optional<double> kappa_h;
  std::optional<double> kappa_g;
  double epsilon = 1e-5;
  double trials = 1e8;  // accepts scientific notation on the command line
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string stat = "experiment";
  std::string out;
};

std::unique_ptr<std::ofstream> open_out(const std::string& path,
                                        std::ostream*& os) {
  if (path.empty()) {
    os = &std::cout;
    return nullptr;
  }
  auto f = std::make_unique<std::ofstream>(path);
  if (!*f) throw CLI::ValidationError("--out", "cannot open " + path);
  os = f.get();
  return f;
}

GeneralizedChiSquareSpec parse_components(const std::string& text) {
  std::vector<GaussianComponent> comps;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--components",
                                 "expected mean:var pairs, got " + item);
    comps.push_back(GaussianComponent{std::stod(item.substr(0, colon)),
                                      std::stod(item.substr(colon + 1))});
  }
  return GeneralizedChiSquareSpec(std::move(comps));
}

std::optional<ApproximationMethod> method_from_string(const std::string& s) {
  static const std::map<std::string, ApproximationMethod> table = {
      {"z1", ApproximationMethod::sankaran_z1},
      {"z2", ApproximationMethod::sankaran_z2},
      {"aty1", ApproximationMethod::abdelaty_first},
      {"aty2", ApproximationMethod::abdelaty_closer},
      {"zar", ApproximationMethod::zar},
      {"goldstein", ApproximationMethod::goldstein},
  };
  const auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

int run_bound(const BoundOptions& opt) {
  const auto target = ReliabilityTarget::from_epsilon(opt.epsilon);

  std::optional<GeneralizedChiSquareSpec> gen;
  std::optional<NoncentralChiSquareSpec> nc;
  if (!opt.components.empty()) {
    gen = parse_components(opt.components);
    if (gen->equal_variances()) {
      double m2 = 0.0;
      for (const auto& c : gen->components()) m2 += c.mean * c.mean;
      nc = NoncentralChiSquareSpec(gen->dof(), m2,
                                   gen->components()[0].variance);
    }
  } else {
    nc = NoncentralChiSquareSpec(opt.dof, opt.noncentrality, opt.variance);
    gen = nc->to_generalized();
  }

  double value = 0.0;
  bool valid = true;
  std::string method_tag = opt.method;
  BoundReport report;
  bool have_report = false;

  if (opt.method == "cherlb") {
    report = nc ? solve_noncentral(*nc, target, opt.solver)
                : solve_general(*gen, target, opt.solver);
    value = report.bound;
    have_report = true;
  } else if (opt.method == "polylb") {
    if (!nc)
      throw CLI::ValidationError("--method",
                                 "polylb needs an equal-variance spec");
    value = poly_lb_noncentral(*nc, target);
  } else if (auto m = method_from_string(opt.method)) {
    if (!nc)
      throw CLI::ValidationError("--method",
                                 "approximations need an equal-variance spec");
    const ApproxResult r = approx_threshold(*m, *nc, target);
    value = r.value;
    valid = r.valid;
  } else {
    throw CLI::ValidationError("--method", "unknown method " + opt.method);
  }

  std::optional<double> cdf;
  if (opt.verify && nc && valid && value > 0.0)
    cdf = noncentral_cdf(*nc, value);

  std::printf("method          : %s\n", method_tag.c_str());
  if (nc)
    std::printf("spec            : K=%d M2=%.12g var=%.12g (rho=%.6g)\n",
                nc->dof(), nc->noncentrality(), nc->variance(), nc->rho());
  else
    std::printf("spec            : generalized, K=%d, E[beta]=%.12g\n",
                gen->dof(), gen->total_mean());
  std::printf("epsilon         : %.6g\n", target.epsilon);
  std::printf("threshold bound : %.12g%s\n", value,
              valid ? "" : "  [INVALID: outside transform domain]");
  if (have_report) {
    std::printf("nu_star         : %.12g\n", report.nu_star);
    std::printf("objective       : %.6g\n", report.objective_at_bound);
    std::printf("iterations      : outer=%d nu_bracket=%ld nu_bisect=%ld\n",
                report.iterations.outer, report.iterations.nu_bracket,
                report.iterations.nu_bisect);
    if (report.below_tolerance)
      std::printf("note            : bound below beta tolerance; epsilon too "
                  "small for this resolution\n");
  }
  if (cdf) {
    std::printf("verified cdf    : %.6g (<= epsilon: %s)\n", *cdf,
                *cdf <= target.epsilon ? "yes" : "NO");
  }

  if (!opt.csv_path.empty()) {
    std::ofstream f(opt.csv_path);
    if (!f) throw CLI::ValidationError("--csv", "cannot open " + opt.csv_path);
    csv::Writer w(f);
    csv::RunManifest man;
    man.command = "bound";
    man.parameters = {{"method", method_tag},
                      {"epsilon", csv::format_number(target.epsilon)}};
    if (nc) {
      man.parameters.push_back({"dof", std::to_string(nc->dof())});
      man.parameters.push_back(
          {"noncentrality", csv::format_number(nc->noncentrality())});
      man.parameters.push_back(
          {"variance", csv::format_number(nc->variance())});
    }
    man.tool_version = kVersion;
    man.started = csv::now_utc();
    man.finished = man.started;
    w.manifest(man);
    w.header({"method", "value", "valid", "verified_cdf"});
    w.row({method_tag, csv::format_number(value), valid ? "1" : "0",
           cdf ? csv::format_number(*cdf) : ""});
  }
  return kExitOk;
}

int run_sweep(const SweepOptions& opt) {
  const auto base_target = ReliabilityTarget::from_epsilon(opt.epsilon);
  if (opt.step <= 0.0 || opt.to < opt.from)
    throw CLI::ValidationError("--step", "empty or inverted sweep range");

  std::vector<std::string> methods;
  {
    std::stringstream ss(opt.methods);
    std::string tok;
    while (std::getline(ss, tok, ',')) methods.push_back(tok);
    if (methods.empty())
      throw CLI::ValidationError("--methods", "no methods given");
  }

  std::vector<double> grid;
  for (double v = opt.from; v <= opt.to + 1e-12 * std::fabs(opt.step);
       v += opt.step)
    grid.push_back(v);
  if (grid.empty()) throw CLI::ValidationError("--from", "empty sweep range");

  std::ostream* os = nullptr;
  auto file = open_out(opt.out, os);
  csv::Writer w(*os);
  csv::RunManifest man;
  man.command = "sweep";
  man.parameters = {{"variable", opt.variable},
                    {"from", csv::format_number(opt.from)},
                    {"to", csv::format_number(opt.to)},
                    {"step", csv::format_number(opt.step)},
                    {"dof", std::to_string(opt.dof)},
                    {"variance", csv::format_number(opt.variance)},
                    {"noncentrality", csv::format_number(opt.noncentrality)},
                    {"rho_per_dof", csv::format_number(opt.rho_per_dof)},
                    {"epsilon", csv::format_number(opt.epsilon)},
                    {"methods", opt.methods}};
  man.tool_version = kVersion;
  man.started = csv::now_utc();
  w.manifest(man);
  w.header({"method", opt.variable, "value", "valid", "verified_cdf"});

  for (const double g : grid) {
    int dof = opt.dof;
    double m2 = opt.noncentrality;
    double var = opt.variance;
    double eps = opt.epsilon;
    if (opt.variable == "m2") m2 = g;
    else if (opt.variable == "rho") m2 = g * var;
    else if (opt.variable == "epsilon") eps = g;
    else if (opt.variable == "dof") dof = static_cast<int>(g);
    else throw CLI::ValidationError("--var", "unknown variable " + opt.variable);
    if (opt.rho_per_dof >= 0.0) m2 = opt.rho_per_dof * dof * var;

    const NoncentralChiSquareSpec spec(dof, m2, var);
    const auto target = ReliabilityTarget::from_epsilon(eps);

    for (const auto& name : methods) {
      double value = 0.0;
      bool valid = true;
      if (name == "exact") {
        value = numeric_quantile(spec, target);
      } else if (name == "cherlb") {
        value = solve_noncentral(spec, target, opt.solver).bound;
      } else if (name == "polylb") {
        value = poly_lb_noncentral(spec, target);
      } else if (auto m = method_from_string(name)) {
        const ApproxResult r = approx_threshold(*m, spec, target);
        value = r.value;
        valid = r.valid;
      } else {
        throw CLI::ValidationError("--methods", "unknown method " + name);
      }
      const bool verifiable = valid && value > 0.0;
      w.row({name, csv::format_number(g), csv::format_number(value),
             valid ? "1" : "0",
             verifiable ? csv::format_number(noncentral_cdf(spec, value))
                        : ""});
    }
  }
  return kExitOk;
}

int run_mimo(const MimoOptions& opt) {
  const auto target = ReliabilityTarget::from_epsilon(opt.epsilon);
  mimo::MimoConfig cfg;
  cfg.tx = opt.tx;
  cfg.rx = opt.rx;
  cfg.trials = opt.trials;
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  cfg.validate();
  mimo::MarkovChannelParams params{opt.carrier, opt.velocity, opt.lag};

  std::ostream* os = nullptr;
  auto file = open_out(opt.out, os);
  csv::Writer w(*os);
  csv::RunManifest man;
  man.command = "mimo";
  man.parameters = {{"stat", opt.stat},
                    {"tx", std::to_string(opt.tx)},
                    {"rx", std::to_string(opt.rx)},
                    {"trials", std::to_string(opt.trials)},
                    {"epsilon", csv::format_number(opt.epsilon)},
                    {"carrier_hz", csv::format_number(opt.carrier)},
                    {"velocity_mps", csv::format_number(opt.velocity)},
                    {"lag_s", csv::format_number(opt.lag)}};
  man.seed = opt.seed;
  man.tool_version = kVersion;
  man.started = csv::now_utc();
  w.manifest(man);
  w.header({"M", "N", "epsilon", "trial_count", "statistic_name", "value",
            "stderr"});

  const auto emit = [&](const std::string& name, double value, double se) {
    w.row({std::to_string(opt.tx), std::to_string(opt.rx),
           csv::format_number(opt.epsilon), std::to_string(opt.trials), name,
           csv::format_number(value), csv::format_number(se)});
  };

  std::cerr << "mimo: stat=" << opt.stat << " M=" << opt.tx << " N=" << opt.rx
            << " trials=" << opt.trials << "\n";

  if (opt.stat == "rho-prob") {
    const auto s = mimo::experiment_rho_probability(cfg, params, opt.threshold);
    emit("rho_below_" + std::to_string(static_cast<int>(opt.threshold)),
         s.value, s.std_error);
  } else if (opt.stat == "power") {
    const auto s = mimo::experiment_power(cfg, params, target);
    emit("inv_bound_mean", s.inv_bound.value, s.inv_bound.std_error);
    emit("lambda_over_bound_mean", s.lambda_over_bound.value,
         s.lambda_over_bound.std_error);
    emit("combined_inv_mean", s.combined.value, s.combined.std_error);
    emit("bound_mean", s.mean_bound.value, s.mean_bound.std_error);
    emit("lambda_mean", s.mean_lambda.value, s.mean_lambda.std_error);
  } else if (opt.stat == "reliability") {
    const auto s = mimo::experiment_reliability(cfg, params, target);
    emit("outage_rate", s.value, s.std_error);
  } else if (opt.stat == "ks") {
    const mimo::ComplexMatrix h =
        mimo::sample_channel(opt.rx, opt.tx, opt.seed, 0);
    auto samples = mimo::realized_gain_samples(
        h, params, static_cast<std::size_t>(opt.trials), opt.seed + 1,
        opt.threads);
    std::sort(samples.begin(), samples.end());
    const auto spec = mimo::gain_params(h, mimo::mf_beamformer(h), params);
    double ks = 0.0;
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double f = noncentral_cdf(spec, samples[i]);
      ks = std::max(ks, std::max(std::fabs((i + 1) / n - f),
                                 std::fabs(f - i / n)));
    }
    emit("ks_distance", ks, std::sqrt(0.5 / n));
  } else {
    throw CLI::ValidationError("--stat", "unknown statistic " + opt.stat);
  }
  std::cerr << "mimo: done\n";
  return kExitOk;
}

int run_ris(const RisOptions& opt) {
  const auto target = ReliabilityTarget::from_epsilon(opt.epsilon);
  ris::RisConfig cfg;
  cfg.reflectors = opt.nr;
  cfg.kappa_h = opt.kappa_h.value_or(opt.kappa);
  cfg.kappa_g = opt.kappa_g.value_or(opt.kappa);
  cfg.trials = static_cast<long>(opt.trials);
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  cfg.validate();

  std::ostream* os = nullptr;
  auto file = open_out(opt.out, os);
  csv::Writer w(*os);
  csv::RunManifest man;
  man.command = "ris";
  man.parameters = {{"stat", opt.stat},
                    {"nr", std::to_string(opt.nr)},
                    {"kappa_h", csv::format_number(cfg.kappa_h)},
                    {"kappa_g", csv::format_number(cfg.kappa_g)},
                    {"epsilon", csv::format_number(opt.epsilon)},
                    {"trials", std::to_string(cfg.trials)}};
  man.seed = opt.seed;
  man.tool_version = kVersion;
  man.started = csv::now_utc();
  w.manifest(man);

  std::cerr << "ris: stat=" << opt.stat << " NR=" << opt.nr
            << " kappa=(" << cfg.kappa_h << "," << cfg.kappa_g
            << ") trials=" << cfg.trials << "\n";

  if (opt.stat == "experiment") {
    const auto r = ris::ris_experiment(cfg, target);
    w.header({"N_R", "kappa", "epsilon", "bound", "empirical_threshold",
              "ratio", "achieved_outage", "normalized_gain", "trials"});
    w.row({std::to_string(opt.nr), csv::format_number(cfg.kappa_h),
           csv::format_number(opt.epsilon), csv::format_number(r.bound),
           csv::format_number(r.empirical_threshold),
           csv::format_number(r.ratio), csv::format_number(r.achieved_outage),
           csv::format_number(r.normalized_gain), std::to_string(r.trials)});
  } else if (opt.stat == "ks") {
    auto samples =
        ris::sample_gain(cfg, static_cast<std::size_t>(cfg.trials), opt.seed);
    std::sort(samples.begin(), samples.end());
    const auto spec = ris::clt_spec(cfg);
    double ks = 0.0;
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double f = noncentral_cdf(spec, samples[i]);
      ks = std::max(ks, std::max(std::fabs((i + 1) / n - f),
                                 std::fabs(f - i / n)));
    }
    w.header({"N_R", "kappa", "statistic_name", "value", "trials"});
    w.row({std::to_string(opt.nr), csv::format_number(cfg.kappa_h),
           "ks_distance", csv::format_number(ks), std::to_string(cfg.trials)});
  } else {
    throw CLI::ValidationError("--stat", "unknown statistic " + opt.stat);
  }
  std::cerr << "ris: done\n";
  return kExitOk;
}

// Fast invariants, no heavy sampling. fault_j0 perturbs the Doppler
// correlation checked by one invariant so tests can confirm a broken
// build actually fails.
int run_selftest(double fault_j0) {
  int failures = 0;
  const auto check = [&](bool ok, const char* name) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failures;
  };

  const GeneralizedChiSquareSpec gen({{0.0, 1.0}, {1.0, 0.5}, {2.0, 2.0}});
  check(mgf_reciprocal(gen, 0.0) == 1.0, "mgf equals 1 at nu=0");
  {
    bool mono = true;
    double prev = 1.0;
    for (double nu = 0.25; nu <= 8.0; nu *= 2.0) {
      const double v = mgf_reciprocal(gen, nu);
      mono = mono && v < prev;
      prev = v;
    }
    check(mono, "mgf strictly decreasing in nu");
  }

  const NoncentralChiSquareSpec nc(4, 10.0, 1.0);
  check(noncentral_cdf(nc, 0.0) == 0.0, "cdf(0) = 0");
  {
    bool mono = true;
    double prev = 0.0;
    for (double x = 1.0; x <= 40.0; x += 1.0) {
      const double f = noncentral_cdf(nc, x);
      mono = mono && f > prev && f <= 1.0;
      prev = f;
    }
    check(mono, "cdf strictly increasing on grid");
  }
  {
    bool ok = true;
    for (double x : {0.5, 2.0, 10.0, 25.0})
      ok = ok && std::fabs(noncentral_cdf(nc, x) + noncentral_sf(nc, x) - 1.0) <
                     1e-12;
    check(ok, "cdf + survival = 1");
    const double q = marcum_q(2.0, 3.0, 1.0);
    const NoncentralChiSquareSpec m(4, 9.0, 1.0);
    check(std::fabs(q + noncentral_cdf(m, 1.0) - 1.0) < 1e-12,
          "marcum q complements the cdf");
  }
  {
    bool ok = true;
    const auto g2 = nc.to_generalized();
    for (double x : {1.0, 5.0, 14.0, 30.0})
      ok = ok && std::fabs(noncentral_cdf(nc, x) - noncentral_cdf(g2, x)) <
                     1e-12;
    check(ok, "generalized representation matches");
  }

  {
    bool ok = true;
    for (int k : {1, 4, 8})
      for (double rho : {0.0, 10.0, 100.0})
        for (double eps : {1e-3, 1e-6}) {
          const NoncentralChiSquareSpec s(k, rho, 1.0);
          const auto t = ReliabilityTarget::from_epsilon(eps);
          const auto rep = solve_noncentral(s, t);
          ok = ok && rep.bound >= 0.0 && rep.bound < s.mean();
          if (rep.bound > 0.0) ok = ok && noncentral_cdf(s, rep.bound) <= eps;
        }
    check(ok, "bound conservative across small grid");
  }
  {
    const auto t = ReliabilityTarget::from_epsilon(1e-6);
    const auto a = solve_central(6, 1.0, t);
    const auto b = solve_noncentral(NoncentralChiSquareSpec(6, 0.0, 1.0), t);
    check(std::fabs(a.bound - b.bound) <= 1e-4 * 6.0,
          "central and noncentral solvers agree at M2=0");
  }
  {
    const auto t = ReliabilityTarget::from_epsilon(1e-6);
    const double err = check_scaling(NoncentralChiSquareSpec(4, 10.0, 1.0),
                                     3.0, t);
    check(err <= 2e-4, "linear scaling law");
  }
  {
    const double beta = 5.0;
    const double nu = optimal_nu(nc, beta);
    const double t = 1.0 + 2.0 * nc.variance() * nu;
    const double resid = beta - (nc.noncentrality() / (t * t) +
                                 nc.dof() * nc.variance() / t);
    check(std::fabs(resid) <= 1e-9 * beta, "closed-form nu* stationarity");
  }
  {
    // First zero of the Doppler correlation kernel; the injected fault
    // shifts the evaluation point.
    const double z = special::bessel_j0(2.404825557695773 + fault_j0);
    check(std::fabs(z) < 1e-6, "doppler correlation kernel zero");
  }
  {
    const auto t = ReliabilityTarget::from_epsilon(1e-6);
    SolverConfig tight;
    tight.delta_beta = 1e-10;
    const auto rep = solve_noncentral(nc, t, tight);
    const auto close = closeness(nc, rep.bound);
    check(std::fabs(close.epsilon - 1e-6) <= 1e-9,
          "closed-form epsilon(lambda) inverts the solver");
  }
  {
    bool ok = true;
    const auto t = ReliabilityTarget::from_epsilon(1e-6);
    for (int k = 1; k <= 24; ++k) {
      const double lb = poly_lb_central(k, 1.0, t);
      ok = ok && noncentral_cdf(NoncentralChiSquareSpec(k, 0.0, 1.0), lb) <=
                     1e-6 * (1.0 + 1e-12);
    }
    check(ok, "polynomial bound valid in the central case");
  }
  {
    const auto a = sample(nc.to_generalized(), 1000, 42);
    const auto b = sample(nc.to_generalized(), 1000, 42);
    check(a == b, "sampling deterministic under fixed seed");
    ris::RisConfig rc;
    rc.reflectors = 8;
    rc.kappa_h = rc.kappa_g = 3.0;
    rc.trials = 1000;
    bool eq = true;
    for (std::uint64_t i = 0; i < 16; ++i)
      eq = eq && ris::sample_gain_one(rc, 7, i) == ris::sample_gain_one(rc, 7, i);
    check(eq, "substream draws reproducible");
  }

  std::printf("%s (%d failure%s)\n", failures == 0 ? "OK" : "FAILED", failures,
              failures == 1 ? "" : "s");
  return failures == 0 ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chernoff lower bounds for chi-square outage thresholds"};
  app.set_config("--config");
  app.require_subcommand(1);

  BoundOptions bopt;
  auto* bound = app.add_subcommand("bound", "compute one threshold bound");
  bound->add_option("--dof", bopt.dof, "degrees of freedom K");
  bound->add_option("--noncentrality", bopt.noncentrality, "M^2");
  bound->add_option("--variance", bopt.variance, "sigma^2");
  bound->add_option("--components", bopt.components,
                    "generalized spec as mean:var,mean:var,...");
  bound->add_option("--epsilon", bopt.epsilon, "outage target in (0,1)")
      ->required();
  bound->add_option("--method", bopt.method,
                    "cherlb|polylb|z1|z2|aty1|aty2|zar|goldstein");
  bound->add_flag("--verify", bopt.verify, "evaluate the exact CDF at the bound");
  bound->add_option("--csv", bopt.csv_path, "also write a CSV row");
  bound->add_option("--delta-beta", bopt.solver.delta_beta);
  bound->add_flag("--absolute-delta", bopt.solver.delta_beta_absolute);
  bound->add_option("--delta-nu", bopt.solver.delta_nu);
  bound->add_option("--nu-ini", bopt.solver.nu_ini);
  bound->add_option("--gamma", bopt.solver.gamma);
  bound->add_option("--max-iters", bopt.solver.max_iters);

  SweepOptions sopt;
  auto* sweep = app.add_subcommand("sweep", "sweep a variable, CSV out");
  sweep->add_option("--var", sopt.variable, "m2|rho|epsilon|dof");
  sweep->add_option("--from", sopt.from)->required();
  sweep->add_option("--to", sopt.to)->required();
  sweep->add_option("--step", sopt.step)->required();
  sweep->add_option("--dof", sopt.dof);
  sweep->add_option("--variance", sopt.variance);
  sweep->add_option("--noncentrality", sopt.noncentrality);
  sweep->add_option("--rho-per-dof", sopt.rho_per_dof,
                    "lock M2 = value * K * variance (dof sweeps)");
  sweep->add_option("--epsilon", sopt.epsilon);
  sweep->add_option("--methods", sopt.methods, "comma list incl. exact");
  sweep->add_option("--out", sopt.out, "output file (default stdout)");

  MimoOptions mopt;
  auto* mimo_cmd = app.add_subcommand("mimo", "Markov-channel experiments");
  mimo_cmd->add_option("--tx", mopt.tx, "transmit antennas M");
  mimo_cmd->add_option("--rx", mopt.rx, "receive antennas N");
  mimo_cmd->add_option("--trials", mopt.trials);
  mimo_cmd->add_option("--seed", mopt.seed);
  mimo_cmd->add_option("--epsilon", mopt.epsilon);
  mimo_cmd->add_option("--stat", mopt.stat,
                       "rho-prob|power|reliability|ks");
  mimo_cmd->add_option("--carrier", mopt.carrier, "carrier frequency Hz");
  mimo_cmd->add_option("--velocity", mopt.velocity, "user velocity m/s");
  mimo_cmd->add_option("--lag", mopt.lag, "CSI-T lag seconds");
  mimo_cmd->add_option("--threshold", mopt.threshold, "rho-prob threshold");
  mimo_cmd->add_option("--threads", mopt.threads);
  mimo_cmd->add_option("--out", mopt.out);

  RisOptions ropt;
  auto* ris_cmd = app.add_subcommand("ris", "reflecting-surface experiments");
  ris_cmd->add_option("--nr", ropt.nr, "reflector count");
  ris_cmd->add_option("--kappa", ropt.kappa, "Rician K-factor (both links)");
  ris_cmd->add_option("--kappa-h", ropt.kappa_h);
  ris_cmd->add_option("--kappa-g", ropt.kappa_g);
  ris_cmd->add_option("--epsilon", ropt.epsilon);
  ris_cmd->add_option("--trials", ropt.trials, "sample count (1e8 etc.)");
  ris_cmd->add_option("--seed", ropt.seed);
  ris_cmd->add_option("--threads", ropt.threads);
  ris_cmd->add_option("--stat", ropt.stat, "experiment|ks");
  ris_cmd->add_option("--out", ropt.out);

  double fault_j0 = 0.0;
  auto* selftest = app.add_subcommand("selftest", "fast invariant suite");
  selftest->add_option("--inject-fault-j0", fault_j0)
      ->group("");  // hidden: test hook

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadArgs;
  }

  try {
    if (bound->parsed()) return run_bound(bopt);
    if (sweep->parsed()) return run_sweep(sopt);
    if (mimo_cmd->parsed()) return run_mimo(mopt);
    if (ris_cmd->parsed()) return run_ris(ropt);
    if (selftest->parsed()) return run_selftest(fault_j0);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const iteration_cap_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIterationCap;
  } catch (const insufficient_samples_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInsufficientSamples;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
